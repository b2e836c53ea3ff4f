#include "siml/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "siml/estimator.hpp"

namespace siml {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

// Collects schema violations so the final message lists all of them.
struct ErrorList {
  std::vector<std::string> items;

  void add(const std::string& msg) { items.push_back(msg); }
  void raise_if_any() const {
    if (items.empty()) return;
    std::string msg = "config error(s):";
    for (const std::string& item : items) msg += "\n  - " + item;
    throw std::invalid_argument(msg);
  }
};

void check_keys(const json& obj, const std::string& where,
                const std::vector<std::string>& allowed, ErrorList& errs) {
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const std::string& key : allowed) {
      if (item.key() == key) {
        known = true;
        break;
      }
    }
    if (!known) errs.add(where + ": unknown key \"" + item.key() + "\"");
  }
}

bool want_number(const json& obj, const std::string& key, const std::string& where,
                 bool required, double& out, ErrorList& errs) {
  if (!obj.contains(key)) {
    if (required) errs.add(where + ": missing required key \"" + key + "\"");
    return false;
  }
  if (!obj.at(key).is_number()) {
    errs.add(where + ": \"" + key + "\" must be a number");
    return false;
  }
  out = obj.at(key).get<double>();
  return true;
}

bool want_int(const json& obj, const std::string& key, const std::string& where,
              bool required, long long& out, ErrorList& errs) {
  if (!obj.contains(key)) {
    if (required) errs.add(where + ": missing required key \"" + key + "\"");
    return false;
  }
  if (!obj.at(key).is_number_integer()) {
    errs.add(where + ": \"" + key + "\" must be an integer");
    return false;
  }
  out = obj.at(key).get<long long>();
  return true;
}

bool want_string(const json& obj, const std::string& key, const std::string& where,
                 bool required, std::string& out, ErrorList& errs) {
  if (!obj.contains(key)) {
    if (required) errs.add(where + ": missing required key \"" + key + "\"");
    return false;
  }
  if (!obj.at(key).is_string()) {
    errs.add(where + ": \"" + key + "\" must be a string");
    return false;
  }
  out = obj.at(key).get<std::string>();
  return true;
}

bool read_double_array(const json& node, std::vector<double>& out) {
  if (!node.is_array()) return false;
  out.clear();
  for (const json& v : node) {
    if (!v.is_number()) return false;
    out.push_back(v.get<double>());
  }
  return true;
}

void parse_model(const json& node, ModelSpec& model, ErrorList& errs) {
  if (!node.is_object()) {
    errs.add("model: must be an object");
    return;
  }
  check_keys(node, "model",
             {"type", "sigma", "drift", "x0", "reversion", "level", "vol", "init"}, errs);

  std::string type;
  if (want_string(node, "type", "model", true, type, errs)) {
    if (type == "constant") {
      model.kind = ModelSpec::Kind::constant;
    } else if (type == "ou-volatility") {
      model.kind = ModelSpec::Kind::ou_volatility;
    } else {
      errs.add("model: type must be \"constant\" or \"ou-volatility\", got \"" + type + "\"");
    }
  }
  if (model.kind == ModelSpec::Kind::constant) {
    for (const char* key : {"reversion", "level", "vol", "init"}) {
      if (node.contains(key))
        errs.add(std::string("model: \"") + key + "\" only applies to ou-volatility");
    }
  } else {
    double v = 0.0;
    if (want_number(node, "reversion", "model", false, v, errs)) model.factor.reversion = v;
    if (want_number(node, "level", "model", false, v, errs)) model.factor.level = v;
    if (want_number(node, "vol", "model", false, v, errs)) model.factor.vol = v;
    if (want_number(node, "init", "model", false, v, errs)) model.factor.init = v;
  }

  if (!node.contains("sigma")) {
    errs.add("model: missing required key \"sigma\"");
  } else {
    const json& rows = node.at("sigma");
    std::vector<std::vector<double>> mat;
    bool ok = rows.is_array() && !rows.empty();
    bool reported = false;
    if (ok) {
      for (const json& row : rows) {
        std::vector<double> r;
        if (!read_double_array(row, r) || r.empty()) {
          ok = false;
          break;
        }
        if (!mat.empty() && r.size() != mat.front().size()) {
          errs.add("model: sigma rows must all have the same length");
          ok = false;
          reported = true;
          break;
        }
        mat.push_back(std::move(r));
      }
    }
    if (!ok && !reported)
      errs.add("model: sigma must be a non-empty array of equal-length numeric rows");
    if (ok) {
      model.sigma = Matrix(static_cast<int>(mat.size()), static_cast<int>(mat.front().size()));
      for (std::size_t i = 0; i < mat.size(); ++i)
        for (std::size_t j = 0; j < mat.front().size(); ++j)
          model.sigma(static_cast<int>(i), static_cast<int>(j)) = mat[i][j];
    }
  }

  if (node.contains("drift")) {
    if (!read_double_array(node.at("drift"), model.drift))
      errs.add("model: drift must be a numeric array");
    else if (model.sigma.rows() > 0 &&
             static_cast<int>(model.drift.size()) != model.sigma.rows())
      errs.add("model: drift length must equal the number of assets");
  }
  if (node.contains("x0")) {
    if (!read_double_array(node.at("x0"), model.x0))
      errs.add("model: x0 must be a numeric array");
    else if (model.sigma.rows() > 0 && static_cast<int>(model.x0.size()) != model.sigma.rows())
      errs.add("model: x0 length must equal the number of assets");
  }
}

void parse_m_rule(const json& node, MRule& rule, ErrorList& errs) {
  if (!node.is_object()) {
    errs.add("m-rule: must be an object");
    return;
  }
  check_keys(node, "m-rule", {"fixed", "c", "alpha"}, errs);
  if (node.contains("fixed")) {
    if (node.contains("c") || node.contains("alpha")) {
      errs.add("m-rule: give either \"fixed\" or \"c\"/\"alpha\", not both");
      return;
    }
    long long m = 0;
    if (want_int(node, "fixed", "m-rule", true, m, errs)) {
      if (m < 1)
        errs.add("m-rule: fixed order must be >= 1");
      else {
        rule.fixed = true;
        rule.fixed_m = static_cast<int>(m);
      }
    }
    return;
  }
  double c = 1.0;
  double alpha = 0.4;
  bool have_c = want_number(node, "c", "m-rule", true, c, errs);
  bool have_a = want_number(node, "alpha", "m-rule", true, alpha, errs);
  if (have_c && c <= 0.0) errs.add("m-rule: c must be > 0");
  if (have_a && (alpha <= 0.0 || alpha >= 1.0)) errs.add("m-rule: alpha must lie in (0, 1)");
  if (have_c && c > 0.0) rule.c = c;
  if (have_a && alpha > 0.0 && alpha < 1.0) rule.alpha = alpha;
}

}  // namespace

PathModel ModelSpec::build() const {
  if (kind == Kind::constant) return PathModel::constant(sigma, drift, x0);
  return PathModel::ou_volatility(sigma, factor, drift, x0);
}

int MRule::resolve(int n) const {
  if (fixed) return fixed_m;
  return choose_m(n, c, alpha);
}

ExperimentConfig parse_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config is not valid JSON: ") + e.what());
  }

  ErrorList errs;
  if (!root.is_object()) {
    errs.add("top level: must be a JSON object");
    errs.raise_if_any();
  }
  check_keys(root, "top level",
             {"model", "schemes", "grid", "n-list", "m-rule", "replications", "seed",
              "noise", "steps-per-obs", "threads", "center", "out-dir"},
             errs);

  ExperimentConfig cfg;

  if (root.contains("model"))
    parse_model(root.at("model"), cfg.model, errs);
  else
    errs.add("top level: missing required key \"model\"");

  if (!root.contains("schemes")) {
    errs.add("top level: missing required key \"schemes\"");
  } else if (!root.at("schemes").is_array() || root.at("schemes").empty()) {
    errs.add("schemes: must be a non-empty array of scheme names");
  } else {
    for (const json& entry : root.at("schemes")) {
      if (!entry.is_string()) {
        errs.add("schemes: entries must be strings");
        break;
      }
      try {
        cfg.schemes.push_back(parse_scheme(entry.get<std::string>()));
      } catch (const std::invalid_argument& e) {
        errs.add(std::string("schemes: ") + e.what());
      }
    }
  }

  std::string grid;
  if (want_string(root, "grid", "top level", false, grid, errs)) {
    if (grid == "uniform")
      cfg.grid = GridKind::uniform;
    else if (grid == "poisson")
      cfg.grid = GridKind::poisson;
    else
      errs.add("grid: must be \"uniform\" or \"poisson\", got \"" + grid + "\"");
  }

  if (!root.contains("n-list")) {
    errs.add("top level: missing required key \"n-list\"");
  } else {
    const json& node = root.at("n-list");
    bool ok = node.is_array() && !node.empty();
    if (ok) {
      for (const json& v : node) {
        if (!v.is_number_integer() || v.get<long long>() < 1) {
          ok = false;
          break;
        }
        cfg.n_list.push_back(static_cast<int>(v.get<long long>()));
      }
    }
    if (!ok) {
      errs.add("n-list: must be a non-empty array of positive integers");
      cfg.n_list.clear();
    } else {
      for (std::size_t i = 1; i < cfg.n_list.size(); ++i) {
        if (cfg.n_list[i] <= cfg.n_list[i - 1]) {
          errs.add("n-list: entries must be strictly ascending");
          break;
        }
      }
    }
  }

  if (root.contains("m-rule"))
    parse_m_rule(root.at("m-rule"), cfg.m_rule, errs);
  else
    errs.add("top level: missing required key \"m-rule\"");

  long long reps = 0;
  if (want_int(root, "replications", "top level", true, reps, errs)) {
    if (reps < 1)
      errs.add("replications: must be >= 1");
    else
      cfg.replications = static_cast<int>(reps);
  }

  if (!root.contains("seed")) {
    errs.add("top level: missing required key \"seed\"");
  } else if (!root.at("seed").is_number_unsigned()) {
    // nlohmann parses any non-negative integer literal as unsigned.
    errs.add("seed: must be a non-negative integer");
  } else {
    cfg.seed = root.at("seed").get<std::uint64_t>();
  }

  if (root.contains("noise")) {
    const json& node = root.at("noise");
    if (!node.is_object()) {
      errs.add("noise: must be an object");
    } else {
      check_keys(node, "noise", {"sd", "dist"}, errs);
      double sd = 0.0;
      if (want_number(node, "sd", "noise", true, sd, errs)) {
        if (sd < 0.0)
          errs.add("noise: sd must be >= 0");
        else
          cfg.noise.sd = sd;
      }
      std::string dist;
      if (want_string(node, "dist", "noise", false, dist, errs)) {
        if (dist == "gaussian")
          cfg.noise.dist = NoiseSpec::Dist::gaussian;
        else if (dist == "uniform")
          cfg.noise.dist = NoiseSpec::Dist::uniform;
        else
          errs.add("noise: dist must be \"gaussian\" or \"uniform\", got \"" + dist + "\"");
      }
    }
  }

  long long ival = 0;
  if (want_int(root, "steps-per-obs", "top level", false, ival, errs)) {
    if (ival < 1)
      errs.add("steps-per-obs: must be >= 1");
    else
      cfg.steps_per_obs = static_cast<int>(ival);
  }
  if (want_int(root, "threads", "top level", false, ival, errs)) {
    if (ival < 1)
      errs.add("threads: must be >= 1");
    else
      cfg.threads = static_cast<int>(ival);
  }

  std::string center;
  if (want_string(root, "center", "top level", false, center, errs)) {
    if (center == "bias-center")
      cfg.center = CenterRule::bias_center;
    else if (center == "truth")
      cfg.center = CenterRule::truth;
    else
      errs.add("center: must be \"bias-center\" or \"truth\", got \"" + center + "\"");
  }

  want_string(root, "out-dir", "top level", false, cfg.out_dir, errs);

  // Cross-field constraints, only meaningful once the pieces parsed.
  const int assetn = cfg.model.sigma.rows();
  if (assetn > 0 && !cfg.schemes.empty() && cfg.schemes.size() != 1 &&
      static_cast<int>(cfg.schemes.size()) != assetn) {
    errs.add("schemes: give one scheme (applied to every asset) or one per asset");
  }
  if (cfg.grid == GridKind::poisson) {
    for (SchemeRule s : cfg.schemes) {
      if (s == SchemeRule::ksss) {
        errs.add("schemes: ksss representatives sit outside the cells of irregular grids; "
                 "use left or midpoint with poisson grids");
        break;
      }
    }
    if (cfg.model.kind != ModelSpec::Kind::constant)
      errs.add("grid: poisson sampling draws exact increments and needs a constant model");
  }

  errs.raise_if_any();

  if (cfg.schemes.size() == 1 && assetn > 1)
    cfg.schemes.assign(static_cast<std::size_t>(assetn), cfg.schemes.front());
  return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_config(buf.str());
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
}

std::string canonical_config_json(const ExperimentConfig& cfg) {
  ordered_json root;
  ordered_json model;
  model["type"] =
      cfg.model.kind == ModelSpec::Kind::constant ? "constant" : "ou-volatility";
  ordered_json sigma = ordered_json::array();
  for (int i = 0; i < cfg.model.sigma.rows(); ++i) {
    ordered_json row = ordered_json::array();
    for (int j = 0; j < cfg.model.sigma.cols(); ++j) row.push_back(cfg.model.sigma(i, j));
    sigma.push_back(std::move(row));
  }
  model["sigma"] = std::move(sigma);
  if (!cfg.model.drift.empty()) model["drift"] = cfg.model.drift;
  if (!cfg.model.x0.empty()) model["x0"] = cfg.model.x0;
  if (cfg.model.kind == ModelSpec::Kind::ou_volatility) {
    model["reversion"] = cfg.model.factor.reversion;
    model["level"] = cfg.model.factor.level;
    model["vol"] = cfg.model.factor.vol;
    model["init"] = cfg.model.factor.init;
  }
  root["model"] = std::move(model);

  ordered_json schemes = ordered_json::array();
  for (SchemeRule s : cfg.schemes) schemes.push_back(scheme_name(s));
  root["schemes"] = std::move(schemes);
  root["grid"] = grid_name(cfg.grid);
  root["n-list"] = cfg.n_list;
  ordered_json rule;
  if (cfg.m_rule.fixed) {
    rule["fixed"] = cfg.m_rule.fixed_m;
  } else {
    rule["c"] = cfg.m_rule.c;
    rule["alpha"] = cfg.m_rule.alpha;
  }
  root["m-rule"] = std::move(rule);
  root["replications"] = cfg.replications;
  root["seed"] = cfg.seed;
  ordered_json noise;
  noise["sd"] = cfg.noise.sd;
  noise["dist"] = cfg.noise.dist == NoiseSpec::Dist::gaussian ? "gaussian" : "uniform";
  root["noise"] = std::move(noise);
  root["steps-per-obs"] = cfg.steps_per_obs;
  // The worker count is an execution knob, not part of the experiment's
  // definition, so it stays out of the canonical form (reports must be
  // byte-identical across worker counts).
  root["center"] = center_name(cfg.center);
  root["out-dir"] = cfg.out_dir;
  return root.dump(2);
}

const char* grid_name(GridKind kind) {
  return kind == GridKind::uniform ? "uniform" : "poisson";
}

const char* center_name(CenterRule rule) {
  return rule == CenterRule::bias_center ? "bias-center" : "truth";
}

}  // namespace siml

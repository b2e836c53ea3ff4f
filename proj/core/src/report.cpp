#include "siml/report.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "json.hpp"
#include "siml/stats.hpp"

namespace siml {
namespace {

using nlohmann::ordered_json;

std::filesystem::path prepare_out_dir(const ExperimentConfig& cfg) {
  std::filesystem::path dir = cfg.out_dir.empty() ? "." : cfg.out_dir;
  std::filesystem::create_directories(dir);
  return dir;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

ordered_json check_to_json(const CheckResult& check) {
  ordered_json j;
  j["name"] = check.name;
  j["pass"] = check.pass;
  j["worst"] = check.worst;
  j["tolerance"] = check.tolerance;
  j["detail"] = check.detail;
  return j;
}

// report.json skeleton with "runtime-seconds" as the final key.
std::string report_json(const ExperimentConfig& cfg, ordered_json results,
                        ordered_json checks, double runtime_seconds) {
  ordered_json root;
  root["config"] = ordered_json::parse(canonical_config_json(cfg));
  root["results"] = std::move(results);
  root["checks"] = std::move(checks);
  root["runtime-seconds"] = runtime_seconds;
  return root.dump(2) + "\n";
}

ordered_json row_to_json(const McRow& row, bool distribution) {
  ordered_json j;
  j["n"] = row.n;
  j["m"] = row.m;
  j["truth"] = row.truth;
  j["center"] = row.center;
  j["mean"] = row.mean;
  j["bias"] = row.bias;
  j["se"] = row.se;
  j["rmse"] = row.rmse;
  j["m-var"] = row.m_var;
  if (distribution) {
    j["ks-stat"] = row.ks_stat;
    j["ks-p"] = row.ks_p;
  }
  return j;
}

ordered_json entry_json(int a, int b) { return ordered_json::array({a, b}); }

}  // namespace

void emit_consistency_report(const McSummary& summary, const ExperimentConfig& cfg,
                             double runtime_seconds) {
  const std::filesystem::path dir = prepare_out_dir(cfg);

  std::string csv = "n,m,bias,rmse,se\n";
  std::string curves = "n,statistic,value\n";
  for (const McRow& row : summary.rows) {
    const std::string n = std::to_string(row.n);
    csv += n + ',' + std::to_string(row.m) + ',' + format_number(row.bias) + ',' +
           format_number(row.rmse) + ',' + format_number(row.se) + '\n';
    curves += n + ",bias," + format_number(row.bias) + '\n';
    curves += n + ",rmse," + format_number(row.rmse) + '\n';
    curves += n + ",se," + format_number(row.se) + '\n';
  }
  write_text(dir / "consistency.csv", csv);
  write_text(dir / "curves.csv", curves);

  ordered_json results;
  results["entry"] = entry_json(summary.asset_a, summary.asset_b);
  ordered_json rows = ordered_json::array();
  for (const McRow& row : summary.rows) rows.push_back(row_to_json(row, false));
  results["rows"] = std::move(rows);

  ordered_json checks = ordered_json::array();
  if (summary.rows.size() >= 2) {
    bool decreasing = true;
    for (std::size_t i = 1; i < summary.rows.size(); ++i)
      if (!(summary.rows[i].rmse < summary.rows[i - 1].rmse)) decreasing = false;
    CheckResult check;
    check.name = "rmse-strictly-decreasing";
    check.pass = decreasing;
    check.worst = summary.rows.back().rmse;
    check.detail = "root mean squared error shrinks along the n-list";
    checks.push_back(check_to_json(check));
  }
  if (!summary.rows.empty()) {
    const McRow& last = summary.rows.back();
    CheckResult check;
    check.name = "final-bias-within-3-se";
    check.pass = std::fabs(last.bias) <= 3.0 * last.se;
    check.worst = std::fabs(last.bias);
    check.tolerance = 3.0 * last.se;
    check.detail = "largest n only";
    checks.push_back(check_to_json(check));
  }

  write_text(dir / "report.json", report_json(cfg, std::move(results), std::move(checks),
                                              runtime_seconds));
}

void emit_normality_report(const McSummary& summary, const ExperimentConfig& cfg,
                           double runtime_seconds) {
  const std::filesystem::path dir = prepare_out_dir(cfg);

  std::string csv = "n,m,mean,center,m-var,ks-stat,ks-p\n";
  std::string ecdf = "n,value,ecdf,normal-cdf\n";
  for (const McRow& row : summary.rows) {
    const std::string n = std::to_string(row.n);
    csv += n + ',' + std::to_string(row.m) + ',' + format_number(row.mean) + ',' +
           format_number(row.center) + ',' + format_number(row.m_var) + ',' +
           format_number(row.ks_stat) + ',' + format_number(row.ks_p) + '\n';
    std::vector<double> sorted = row.standardized;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
      const double frac = static_cast<double>(i + 1) / static_cast<double>(sorted.size());
      ecdf += n + ',' + format_number(sorted[i]) + ',' + format_number(frac) + ',' +
              format_number(normal_cdf(sorted[i])) + '\n';
    }
  }
  write_text(dir / "normality.csv", csv);
  write_text(dir / "ecdf.csv", ecdf);

  ordered_json results;
  results["entry"] = entry_json(summary.asset_a, summary.asset_b);
  results["sd-theory"] = summary.sd_theory;
  ordered_json rows = ordered_json::array();
  for (const McRow& row : summary.rows) rows.push_back(row_to_json(row, true));
  results["rows"] = std::move(rows);

  const double var_theory = summary.sd_theory * summary.sd_theory;
  ordered_json checks = ordered_json::array();
  for (const McRow& row : summary.rows) {
    CheckResult var_check;
    var_check.name = "scaled-variance-near-limit-n" + std::to_string(row.n);
    var_check.worst = std::fabs(row.m_var - var_theory);
    var_check.tolerance = 0.15 * var_theory;
    var_check.pass = var_check.worst <= var_check.tolerance;
    var_check.detail = "sample variance of the scaled error vs its limit, 15 percent band";
    checks.push_back(check_to_json(var_check));

    CheckResult ks_check;
    ks_check.name = "ks-p-above-threshold-n" + std::to_string(row.n);
    ks_check.worst = row.ks_p;
    ks_check.tolerance = 0.01;
    ks_check.pass = row.ks_p > 0.01;
    ks_check.detail = "Kolmogorov-Smirnov p-value against the limiting normal";
    checks.push_back(check_to_json(ks_check));
  }

  write_text(dir / "report.json", report_json(cfg, std::move(results), std::move(checks),
                                              runtime_seconds));
}

void emit_noise_report(const NoiseComparison& comparison, const ExperimentConfig& cfg,
                       double runtime_seconds) {
  const std::filesystem::path dir = prepare_out_dir(cfg);

  std::string csv = "n,m,truth,siml-mean,siml-bias,siml-se,rv-mean,rv-bias,rv-se\n";
  for (const NoiseRow& row : comparison.rows) {
    csv += std::to_string(row.n) + ',' + std::to_string(row.m) + ',' +
           format_number(row.truth) + ',' + format_number(row.siml_mean) + ',' +
           format_number(row.siml_bias) + ',' + format_number(row.siml_se) + ',' +
           format_number(row.rv_mean) + ',' + format_number(row.rv_bias) + ',' +
           format_number(row.rv_se) + '\n';
  }
  write_text(dir / "noise.csv", csv);

  ordered_json results;
  results["entry"] = entry_json(comparison.asset_a, comparison.asset_b);
  ordered_json rows = ordered_json::array();
  for (const NoiseRow& row : comparison.rows) {
    ordered_json j;
    j["n"] = row.n;
    j["m"] = row.m;
    j["truth"] = row.truth;
    j["siml-mean"] = row.siml_mean;
    j["siml-bias"] = row.siml_bias;
    j["siml-se"] = row.siml_se;
    j["rv-mean"] = row.rv_mean;
    j["rv-bias"] = row.rv_bias;
    j["rv-se"] = row.rv_se;
    rows.push_back(std::move(j));
  }
  results["rows"] = std::move(rows);

  ordered_json checks = ordered_json::array();
  for (const NoiseRow& row : comparison.rows) {
    CheckResult check;
    check.name = "cosine-bias-below-plain-n" + std::to_string(row.n);
    check.worst = std::fabs(row.siml_bias);
    check.tolerance = std::fabs(row.rv_bias);
    check.pass = check.worst < check.tolerance || row.rv_bias == 0.0;
    check.detail = "absolute bias of the cosine-weighted estimator vs the plain one";
    checks.push_back(check_to_json(check));
  }

  write_text(dir / "report.json", report_json(cfg, std::move(results), std::move(checks),
                                              runtime_seconds));
}

void emit_check_report(const std::vector<CheckResult>& results, const std::string& path,
                       double runtime_seconds) {
  ordered_json root;
  ordered_json checks = ordered_json::array();
  for (const CheckResult& check : results) checks.push_back(check_to_json(check));
  root["checks"] = std::move(checks);
  root["all-pass"] = all_pass(results);
  root["runtime-seconds"] = runtime_seconds;
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  write_text(p, root.dump(2) + "\n");
}

bool reports_equal_ignoring_runtime(const std::string& json_a, const std::string& json_b) {
  ordered_json a = ordered_json::parse(json_a);
  ordered_json b = ordered_json::parse(json_b);
  a.erase("runtime-seconds");
  b.erase("runtime-seconds");
  return a == b;
}

}  // namespace siml

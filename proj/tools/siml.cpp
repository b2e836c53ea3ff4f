// Command-line front end: kernel verification checks, path simulation to
// tick CSV, estimation from tick CSV, and the three Monte Carlo experiment
// drivers with their report files.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "siml/checks.hpp"
#include "siml/config.hpp"
#include "siml/csv.hpp"
#include "siml/estimator.hpp"
#include "siml/experiments.hpp"
#include "siml/report.hpp"
#include "siml/rng.hpp"
#include "siml/stats.hpp"

namespace {

using namespace siml;

struct Overrides {
  std::string config_path;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int reps = 0;
  int threads = 0;
  std::string out_dir;
};

void add_override_options(CLI::App* cmd, Overrides& ov) {
  cmd->add_option("--config", ov.config_path, "experiment configuration file (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--seed", ov.seed, "override the configured seed")
      ->each([&ov](const std::string&) { ov.seed_set = true; });
  cmd->add_option("--reps", ov.reps, "override the configured replication count")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--threads", ov.threads, "override the configured worker count")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--out", ov.out_dir, "override the configured output directory");
}

ExperimentConfig load_with_overrides(const Overrides& ov) {
  ExperimentConfig cfg = load_config_file(ov.config_path);
  if (ov.seed_set) cfg.seed = ov.seed;
  if (ov.reps > 0) cfg.replications = ov.reps;
  if (ov.threads > 0) cfg.threads = ov.threads;
  if (!ov.out_dir.empty()) cfg.out_dir = ov.out_dir;
  return cfg;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

int run_kernel_check_cmd(const CheckOptions& opt, const std::string& out_path) {
  const auto start = std::chrono::steady_clock::now();
  const std::vector<CheckResult> results = run_kernel_checks(opt);
  for (const CheckResult& r : results) {
    std::printf("%-34s %s  worst %.3e  tol %.0e  (%s)\n", r.name.c_str(),
                r.pass ? "pass" : "FAIL", r.worst, r.tolerance, r.detail.c_str());
  }
  if (!out_path.empty()) {
    emit_check_report(results, out_path, seconds_since(start));
    std::printf("wrote %s\n", out_path.c_str());
  }
  if (!all_pass(results)) {
    std::printf("verification FAILED\n");
    return 1;
  }
  std::printf("all checks passed (%.2f s)\n", seconds_since(start));
  return 0;
}

int run_simulate_cmd(const Overrides& ov, const std::string& out_path, int n_override) {
  const ExperimentConfig cfg = load_with_overrides(ov);
  const PathModel model = cfg.model.build();
  const int assets = model.assets();
  const int n = n_override > 0 ? n_override : cfg.n_list.front();

  ObservationSet obs;
  if (cfg.grid == GridKind::uniform) {
    const std::vector<TimeGrid> grids(static_cast<std::size_t>(assets), make_uniform_grid(n));
    const FinePath path = simulate_fine(model, cfg.steps_per_obs * n, cfg.seed);
    obs = observe(path, grids);
  } else {
    std::vector<TimeGrid> grids;
    for (int j = 0; j < assets; ++j)
      grids.push_back(make_poisson_grid(n, mix_streams(cfg.seed, 2, static_cast<std::uint64_t>(j))));
    obs = simulate_exact(model, grids, cfg.seed);
  }
  if (cfg.noise.sd > 0.0) obs = add_noise(obs, cfg.noise, mix_streams(cfg.seed, 1));

  const std::string path = out_path.empty() ? "ticks.csv" : out_path;
  write_ticks_csv(path, obs);
  long total = 0;
  for (const auto& v : obs.values) total += static_cast<long>(v.size());
  std::printf("wrote %s: %d asset(s), %ld ticks\n", path.c_str(), obs.assets(), total);
  return 0;
}

void print_estimate(const ObservationSet& obs, const EstimateReport& report) {
  std::printf("m = %d, intervals per asset:", report.m);
  for (int c : report.counts) std::printf(" %d", c);
  std::printf("\n");
  for (int j = 0; j < obs.assets(); ++j) {
    for (int jp = 0; jp < obs.assets(); ++jp)
      std::printf("  % .10e", report.v(j, jp));
    std::printf("\n");
  }
}

int run_estimate_cmd(const std::string& input, int m, const std::string& scheme_text,
                     double c, double alpha, bool normalize) {
  std::vector<std::string> names;
  const ObservationSet obs = ingest_csv(input, normalize, &names);
  const SchemeRule scheme = parse_scheme(scheme_text);
  std::vector<SamplingMap> maps;
  int n_min = 0;
  for (int j = 0; j < obs.assets(); ++j) {
    maps.push_back(sampling_map(obs.grids[static_cast<std::size_t>(j)], scheme));
    const int nj = obs.grids[static_cast<std::size_t>(j)].intervals();
    n_min = n_min == 0 ? nj : std::min(n_min, nj);
  }
  std::printf("assets:");
  for (const std::string& name : names) std::printf(" %s", name.c_str());
  std::printf("\n");

  if (m > 0) {
    const EstimateReport report = siml_general(obs, SimlConfig{KernelOrder(m), maps});
    print_estimate(obs, report);
    return 0;
  }

  // No order given: scan a doubling ladder and mark the power-rule choice.
  const int m_rule = choose_m(n_min, c, alpha);
  std::vector<int> ladder;
  for (int mm = 2; mm <= n_min / 2; mm *= 2) ladder.push_back(mm);
  bool rule_in_ladder = false;
  for (int mm : ladder) rule_in_ladder |= mm == m_rule;
  if (!rule_in_ladder) {
    ladder.push_back(m_rule);
    std::sort(ladder.begin(), ladder.end());
  }
  std::printf("%6s", "m");
  for (int j = 0; j < obs.assets(); ++j)
    for (int jp = j; jp < obs.assets(); ++jp) std::printf("   v(%d,%d)        ", j, jp);
  std::printf("\n");
  for (int mm : ladder) {
    const EstimateReport report = siml_general(obs, SimlConfig{KernelOrder(mm), maps});
    std::printf("%6d", mm);
    for (int j = 0; j < obs.assets(); ++j)
      for (int jp = j; jp < obs.assets(); ++jp) std::printf("  % .8e", report.v(j, jp));
    std::printf("%s\n", mm == m_rule ? "  <- power rule" : "");
  }
  return 0;
}

void print_mc_rows(const McSummary& summary) {
  std::printf("%8s %6s %14s %14s %14s %14s\n", "n", "m", "bias", "rmse", "se", "m-var");
  for (const McRow& row : summary.rows)
    std::printf("%8d %6d % 14.6e % 14.6e % 14.6e % 14.6e\n", row.n, row.m, row.bias,
                row.rmse, row.se, row.m_var);
}

int run_consistency_cmd(const Overrides& ov) {
  const auto start = std::chrono::steady_clock::now();
  const ExperimentConfig cfg = load_with_overrides(ov);
  const McSummary summary = run_consistency(cfg);
  print_mc_rows(summary);
  emit_consistency_report(summary, cfg, seconds_since(start));
  std::printf("wrote %s/{consistency.csv,curves.csv,report.json} (%.2f s)\n",
              cfg.out_dir.empty() ? "." : cfg.out_dir.c_str(), seconds_since(start));
  return 0;
}

int run_normality_cmd(const Overrides& ov) {
  const auto start = std::chrono::steady_clock::now();
  const ExperimentConfig cfg = load_with_overrides(ov);
  const McSummary summary = run_normality(cfg);
  std::printf("limit sd of the scaled error: %s\n", format_number(summary.sd_theory).c_str());
  std::printf("%8s %6s %14s %14s %14s\n", "n", "m", "scaled-var", "ks-stat", "ks-p");
  for (const McRow& row : summary.rows)
    std::printf("%8d %6d % 14.6e % 14.6e % 14.6e\n", row.n, row.m, row.m_var, row.ks_stat,
                row.ks_p);
  emit_normality_report(summary, cfg, seconds_since(start));
  std::printf("wrote %s/{normality.csv,ecdf.csv,report.json} (%.2f s)\n",
              cfg.out_dir.empty() ? "." : cfg.out_dir.c_str(), seconds_since(start));
  return 0;
}

int run_noise_cmd(const Overrides& ov) {
  const auto start = std::chrono::steady_clock::now();
  const ExperimentConfig cfg = load_with_overrides(ov);
  const NoiseComparison cmp = run_noise_comparison(cfg);
  std::printf("%8s %6s %14s %14s %14s %14s\n", "n", "m", "siml-bias", "siml-se", "rv-bias",
              "rv-se");
  for (const NoiseRow& row : cmp.rows)
    std::printf("%8d %6d % 14.6e % 14.6e % 14.6e % 14.6e\n", row.n, row.m, row.siml_bias,
                row.siml_se, row.rv_bias, row.rv_se);
  emit_noise_report(cmp, cfg, seconds_since(start));
  std::printf("wrote %s/{noise.csv,report.json} (%.2f s)\n",
              cfg.out_dir.empty() ? "." : cfg.out_dir.c_str(), seconds_since(start));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Integrated-covariance estimation toolkit: cosine-weighted estimators for "
      "asynchronously sampled processes, kernel verification checks, and Monte "
      "Carlo experiment drivers"};
  app.require_subcommand(1);

  CheckOptions check_opt;
  std::string check_out;
  CLI::App* check = app.add_subcommand(
      "kernel-check", "run the deterministic kernel verification suite");
  check->add_option("--max-m", check_opt.max_m, "largest kernel order covered")
      ->check(CLI::PositiveNumber);
  check->add_option("--identity-samples", check_opt.identity_samples,
                    "random points for the closed-form identity");
  check->add_option("--bound-samples", check_opt.bound_samples,
                    "points per order for the envelope bound");
  check->add_option("--seed", check_opt.seed, "seed for the sampled checks");
  check->add_option("--out", check_out, "write results as JSON to this path");

  Overrides sim_ov;
  std::string sim_out;
  int sim_n = 0;
  CLI::App* sim = app.add_subcommand("simulate", "simulate one path and write tick CSV");
  sim->add_option("--config", sim_ov.config_path, "experiment configuration file (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  sim->add_option("--seed", sim_ov.seed, "override the configured seed")
      ->each([&sim_ov](const std::string&) { sim_ov.seed_set = true; });
  sim->add_option("--out", sim_out, "tick CSV output path (default ticks.csv)");
  sim->add_option("--n", sim_n, "observations per asset (default: first n-list entry)")
      ->check(CLI::PositiveNumber);

  std::string est_input;
  std::string est_scheme = "left";
  int est_m = 0;
  double est_c = 1.0;
  double est_alpha = 0.4;
  bool est_normalize = false;
  CLI::App* est = app.add_subcommand("estimate", "estimate integrated covariance from tick CSV");
  est->add_option("--input", est_input, "tick CSV file")->required()->check(CLI::ExistingFile);
  est->add_option("--m", est_m, "kernel order (omit to scan a ladder of orders)");
  est->add_option("--scheme", est_scheme,
                  "interval representative rule: left, right, midpoint, or ksss");
  est->add_option("--c", est_c, "power-rule constant for the marked default order");
  est->add_option("--alpha", est_alpha, "power-rule exponent for the marked default order");
  est->add_flag("--normalize", est_normalize,
                "affinely map each asset's timestamps onto the unit interval");

  Overrides cons_ov, norm_ov, noise_ov;
  CLI::App* cons = app.add_subcommand("mc-consistency", "bias and error decay across n");
  add_override_options(cons, cons_ov);
  CLI::App* norm = app.add_subcommand("mc-normality",
                                      "distribution of the scaled error at each n");
  add_override_options(norm, norm_ov);
  CLI::App* noise = app.add_subcommand("mc-noise",
                                       "noise robustness against the plain increment-product sum");
  add_override_options(noise, noise_ov);

  CLI11_PARSE(app, argc, argv);

  try {
    if (check->parsed()) return run_kernel_check_cmd(check_opt, check_out);
    if (sim->parsed()) return run_simulate_cmd(sim_ov, sim_out, sim_n);
    if (est->parsed())
      return run_estimate_cmd(est_input, est_m, est_scheme, est_c, est_alpha, est_normalize);
    if (cons->parsed()) return run_consistency_cmd(cons_ov);
    if (norm->parsed()) return run_normality_cmd(norm_ov);
    if (noise->parsed()) return run_noise_cmd(noise_ov);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}

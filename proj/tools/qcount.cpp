#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qcount/harness.hpp"

namespace {

using qcount::TrialRow;

struct OutputTarget {
  std::ostream* stream = &std::cout;
  std::ofstream file;

  void open(const std::string& path) {
    if (path.empty()) return;
    file.open(path);
    if (!file) throw CLI::ValidationError("--out", "cannot open " + path);
    stream = &file;
  }
};

struct CommonFlags {
  double epsilon = 0.1;
  double delta = 0.05;
  std::uint64_t seed = 0;
  std::uint64_t trials = 1;
  std::string backend = "analytic";
  std::string out_path;
  std::string format = "csv";
  bool fast_constants = false;
  std::string config_path;
};

constexpr double kFastConstantsFactor = 100.0;

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

// Flat key=value file mirroring the flag names. Values fill in options the
// command line left unset, so explicit flags always win.
void apply_config_file(CLI::App* cmd, const std::string& path) {
  if (path.empty()) return;
  std::ifstream in(path);
  if (!in) throw CLI::ValidationError("--config", "cannot open " + path);
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto pos = line.find('=');
    if (pos == std::string::npos) {
      throw CLI::ValidationError("--config", "expected key=value, got: " + line);
    }
    const std::string key = trim(line.substr(0, pos));
    const std::string value = trim(line.substr(pos + 1));
    CLI::Option* opt = cmd->get_option_no_throw("--" + key);
    if (opt == nullptr || key == "config") {
      throw CLI::ValidationError("--config", "unknown key: " + key);
    }
    if (opt->count() > 0) continue;
    opt->add_result(value);
    opt->run_callback();
  }
}

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config_path,
                  "flat key=value config file; flags override it");
  cmd->add_option("--eps", flags.epsilon, "relative-error target")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--delta", flags.delta, "failure-probability budget")
      ->check(CLI::Range(1e-12, 0.999999));
  cmd->add_option("--seed", flags.seed, "master seed (64-bit)");
  cmd->add_option("--trials", flags.trials, "number of independent trials")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--backend", flags.backend, "coin backend")
      ->check(CLI::IsMember({"analytic", "statevector"}));
  cmd->add_option("--out", flags.out_path, "output path (default stdout)");
  cmd->add_option("--format", flags.format, "output format")
      ->check(CLI::IsMember({"csv", "json-lines"}));
  cmd->add_flag("--fast-constants", flags.fast_constants,
                "scale sample multipliers down by 100 for smoke tests "
                "(marks rows non-conforming)");
}

qcount::EstimatorConfig make_config(const CommonFlags& flags) {
  qcount::EstimatorConfig config;
  config.epsilon = flags.epsilon;
  config.delta = flags.delta;
  if (flags.fast_constants) {
    config.step1_sample_multiplier /= kFastConstantsFactor;
    config.step2_sample_multiplier /= kFastConstantsFactor;
  }
  return config;
}

void write_rows(const std::vector<TrialRow>& rows, const CommonFlags& flags) {
  OutputTarget out;
  out.open(flags.out_path);
  if (flags.format == "csv") {
    *out.stream << qcount::kCsvHeader << '\n';
    for (const TrialRow& row : rows) *out.stream << qcount::csv_row(row) << '\n';
  } else {
    for (const TrialRow& row : rows) *out.stream << qcount::json_row(row) << '\n';
  }
}

double failure_rate(const std::vector<TrialRow>& rows) {
  std::uint64_t failures = 0;
  for (const TrialRow& row : rows) failures += row.success ? 0 : 1;
  return static_cast<double>(failures) / static_cast<double>(rows.size());
}

int run_lemma_check_cmd(std::uint64_t sweeps, std::uint64_t seed,
                        const CommonFlags& flags) {
  const qcount::LemmaCheckResult result = qcount::run_lemma_check(sweeps, seed);
  OutputTarget out;
  out.open(flags.out_path);
  *out.stream << "sweeps,violations_odd,violations_bounds,violations_upper047,"
                 "violations_lower0662,violations_residue\n"
              << result.sweeps << ',' << result.violations_odd << ','
              << result.violations_bounds << ',' << result.violations_upper047
              << ',' << result.violations_lower0662 << ','
              << result.violations_residue << '\n';
  for (const qcount::LemmaViolation& v : result.violations) {
    *out.stream << v.sweep << ',' << v.check << ',' << v.gamma << ','
                << v.theta_min << ',' << v.theta_max << ',' << v.theta << ','
                << v.r << ',' << v.value << '\n';
  }
  return 0;
}

int run_scaling_cmd(std::uint64_t n, const std::vector<std::uint64_t>& k_list,
                    const std::vector<double>& eps_list, double delta,
                    std::uint64_t trials, std::uint64_t seed,
                    const CommonFlags& flags) {
  std::vector<qcount::ScalingCell> grid;
  for (std::uint64_t k : k_list) {
    for (double eps : eps_list) {
      grid.push_back(qcount::ScalingCell{n, k, eps, delta});
    }
  }
  const qcount::ScalingStudyResult result =
      qcount::run_scaling_study(grid, trials, seed);

  OutputTarget out;
  out.open(flags.out_path);
  *out.stream << "n,k,epsilon,delta,trials,median_total,q1_total,q3_total,"
                 "median_step1,median_step2\n";
  for (const qcount::ScalingCellStats& stats : result.cells) {
    *out.stream << stats.cell.n << ',' << stats.cell.k << ','
                << stats.cell.epsilon << ',' << stats.cell.delta << ','
                << stats.trials << ',' << stats.median_total << ','
                << stats.q1_total << ',' << stats.q3_total << ','
                << stats.median_step1 << ',' << stats.median_step2 << '\n';
  }
  if (result.eps_slope) {
    *out.stream << "# eps_slope(step2)," << *result.eps_slope << '\n';
  }
  if (result.sqrt_nk_slope) {
    *out.stream << "# sqrt_nk_slope(total)," << *result.sqrt_nk_slope << '\n';
  }
  if (result.envelope_c) {
    *out.stream << "# envelope_c," << *result.envelope_c << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive Grover-coin approximate counting and amplitude "
               "estimation harness"};
  app.require_subcommand(1);

  // count
  CommonFlags count_flags;
  std::uint64_t count_n = 1 << 20;
  std::uint64_t count_k = 1024;
  CLI::App* count_cmd =
      app.add_subcommand("count", "estimate the number of marked items");
  count_cmd->add_option("--n", count_n, "universe size")->check(CLI::PositiveNumber);
  count_cmd->add_option("--k", count_k, "number of marked items");
  add_common(count_cmd, count_flags);

  // amplitude
  CommonFlags amp_flags;
  double amp_a = 0.5;
  CLI::App* amp_cmd =
      app.add_subcommand("amplitude", "estimate an amplitude 0 < a < 1");
  amp_cmd->add_option("--a", amp_a, "true amplitude")
      ->check(CLI::Range(1e-12, 0.999999999));
  add_common(amp_cmd, amp_flags);

  // validate
  CommonFlags val_flags;
  std::string val_mode = "count";
  std::uint64_t val_n = 1 << 20;
  std::uint64_t val_k = 1024;
  double val_a = 0.5;
  CLI::App* val_cmd = app.add_subcommand(
      "validate", "Monte Carlo validation; exit 3 if failure rate > delta");
  val_cmd->add_option("--mode", val_mode, "count or amplitude")
      ->check(CLI::IsMember({"count", "amplitude"}));
  val_cmd->add_option("--n", val_n, "universe size")->check(CLI::PositiveNumber);
  val_cmd->add_option("--k", val_k, "number of marked items");
  val_cmd->add_option("--a", val_a, "true amplitude")
      ->check(CLI::Range(1e-12, 0.999999999));
  add_common(val_cmd, val_flags);

  // lemma-check
  CommonFlags lemma_flags;
  std::uint64_t lemma_sweeps = 10000;
  CLI::App* lemma_cmd = app.add_subcommand(
      "lemma-check", "property sweep over the rotation construction");
  lemma_cmd->add_option("--config", lemma_flags.config_path,
                        "flat key=value config file; flags override it");
  lemma_cmd->add_option("--sweeps", lemma_sweeps, "number of random intervals")
      ->check(CLI::PositiveNumber);
  lemma_cmd->add_option("--seed", lemma_flags.seed, "master seed");
  lemma_cmd->add_option("--out", lemma_flags.out_path, "output path");

  // scaling-study
  CommonFlags scale_flags;
  std::uint64_t scale_n = 1 << 20;
  std::vector<std::uint64_t> scale_k_list{1024};
  std::vector<double> scale_eps_list{0.1};
  double scale_delta = 0.05;
  std::uint64_t scale_trials = 20;
  CLI::App* scale_cmd = app.add_subcommand(
      "scaling-study", "median query counts and fitted slopes over a grid");
  scale_cmd->add_option("--config", scale_flags.config_path,
                        "flat key=value config file; flags override it");
  scale_cmd->add_option("--n", scale_n, "universe size")->check(CLI::PositiveNumber);
  scale_cmd->add_option("--k-list", scale_k_list, "marked-count axis");
  scale_cmd->add_option("--eps-list", scale_eps_list, "epsilon axis");
  scale_cmd->add_option("--delta", scale_delta, "failure budget")
      ->check(CLI::Range(1e-12, 0.999999));
  scale_cmd->add_option("--trials", scale_trials, "trials per cell")
      ->check(CLI::PositiveNumber);
  scale_cmd->add_option("--seed", scale_flags.seed, "master seed");
  scale_cmd->add_option("--out", scale_flags.out_path, "output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (count_cmd->parsed()) apply_config_file(count_cmd, count_flags.config_path);
    if (amp_cmd->parsed()) apply_config_file(amp_cmd, amp_flags.config_path);
    if (val_cmd->parsed()) apply_config_file(val_cmd, val_flags.config_path);
    if (lemma_cmd->parsed()) apply_config_file(lemma_cmd, lemma_flags.config_path);
    if (scale_cmd->parsed()) apply_config_file(scale_cmd, scale_flags.config_path);
  } catch (const CLI::Error& e) {
    std::cerr << e.what() << '\n';
    return 2;
  }

  try {
    if (count_cmd->parsed()) {
      qcount::CountRunSpec spec;
      spec.n = count_n;
      spec.k = count_k;
      spec.config = make_config(count_flags);
      spec.master_seed = count_flags.seed;
      spec.backend = count_flags.backend;
      spec.trials = count_flags.trials;
      if (spec.backend == "statevector" && spec.n > spec.config.dense_cap) {
        std::cerr << "error: statevector backend requires n <= "
                  << spec.config.dense_cap << " before padding\n";
        return 2;
      }
      write_rows(qcount::run_count_trials(spec), count_flags);
      return 0;
    }
    if (amp_cmd->parsed()) {
      qcount::AmplitudeRunSpec spec;
      spec.a = amp_a;
      spec.config = make_config(amp_flags);
      spec.master_seed = amp_flags.seed;
      spec.backend = amp_flags.backend;
      spec.trials = amp_flags.trials;
      write_rows(qcount::run_amplitude_trials(spec), amp_flags);
      return 0;
    }
    if (val_cmd->parsed()) {
      std::vector<TrialRow> rows;
      if (val_mode == "count") {
        qcount::CountRunSpec spec;
        spec.n = val_n;
        spec.k = val_k;
        spec.config = make_config(val_flags);
        spec.master_seed = val_flags.seed;
        spec.backend = val_flags.backend;
        spec.trials = val_flags.trials;
        rows = qcount::run_count_trials(spec);
      } else {
        qcount::AmplitudeRunSpec spec;
        spec.a = val_a;
        spec.config = make_config(val_flags);
        spec.master_seed = val_flags.seed;
        spec.backend = val_flags.backend;
        spec.trials = val_flags.trials;
        rows = qcount::run_amplitude_trials(spec);
      }
      write_rows(rows, val_flags);
      const double rate = failure_rate(rows);
      std::cerr << "empirical failure rate: " << rate << " (budget "
                << val_flags.delta << ")\n";
      return rate > val_flags.delta ? 3 : 0;
    }
    if (lemma_cmd->parsed()) {
      return run_lemma_check_cmd(lemma_sweeps, lemma_flags.seed, lemma_flags);
    }
    if (scale_cmd->parsed()) {
      return run_scaling_cmd(scale_n, scale_k_list, scale_eps_list,
                             scale_delta, scale_trials, scale_flags.seed,
                             scale_flags);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}

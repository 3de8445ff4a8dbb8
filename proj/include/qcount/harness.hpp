#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qcount/estimator.hpp"

namespace qcount {

inline constexpr const char* kCsvHeader =
    "trial,n,k_true,epsilon,delta,seed,backend,k_hat,theta_min,theta_max,"
    "t_step1,iters_step2,grover_apps,oracle_queries,coin_flips,success,"
    "conforming,wall_ms";

// One output row per trial. For amplitude runs n is 0 and the k columns
// carry a / a_hat.
struct TrialRow {
  std::uint64_t trial = 0;
  std::uint64_t n = 0;
  double k_true = 0.0;
  double epsilon = 0.0;
  double delta = 0.0;
  std::uint64_t seed = 0;  // master seed, recorded in every row
  std::string backend;
  double k_hat = 0.0;
  double theta_min = 0.0;
  double theta_max = 0.0;
  int t_step1 = 0;
  int iters_step2 = 0;
  std::uint64_t grover_apps = 0;
  std::uint64_t oracle_queries = 0;
  std::uint64_t step1_queries = 0;
  std::uint64_t step2_queries = 0;
  std::uint64_t coin_flips = 0;
  bool success = false;
  bool conforming = true;
  double wall_ms = 0.0;
};

std::string csv_row(const TrialRow& row);
std::string json_row(const TrialRow& row);
TrialRow parse_csv_row(const std::string& line);

// Stream seed for one trial, mixed from the master seed.
std::uint64_t trial_stream_seed(std::uint64_t master_seed,
                                std::uint64_t trial);

struct CountRunSpec {
  std::uint64_t n = 0;
  std::uint64_t k = 0;
  EstimatorConfig config;
  std::uint64_t master_seed = 0;
  std::string backend = "analytic";
  std::uint64_t trials = 1;
};

struct AmplitudeRunSpec {
  double a = 0.0;
  EstimatorConfig config;
  std::uint64_t master_seed = 0;
  std::string backend = "analytic";
  std::uint64_t trials = 1;
};

// Trials run in a worker pool (QCOUNT_THREADS caps it); rows come back
// ordered by trial index regardless of completion order.
std::vector<TrialRow> run_count_trials(const CountRunSpec& spec);
std::vector<TrialRow> run_amplitude_trials(const AmplitudeRunSpec& spec);

struct LemmaViolation {
  std::uint64_t sweep = 0;
  std::string check;  // "odd", "bounds", "upper047", "lower0662", "residue"
  double gamma = 0.0;
  double theta_min = 0.0;
  double theta_max = 0.0;
  double theta = 0.0;
  std::int64_t r = 0;
  double value = 0.0;
};

struct LemmaCheckResult {
  std::uint64_t sweeps = 0;
  std::uint64_t violations_odd = 0;
  std::uint64_t violations_bounds = 0;
  std::uint64_t violations_upper047 = 0;
  std::uint64_t violations_lower0662 = 0;
  std::uint64_t violations_residue = 0;
  std::vector<LemmaViolation> violations;

  std::uint64_t total_violations() const {
    return violations_odd + violations_bounds + violations_upper047 +
           violations_lower0662 + violations_residue;
  }
};

// Random valid intervals (gamma in (0.01, 0.2], theta_max in (0, pi/1000]),
// with the distinguishing-probability checks evaluated at subrange endpoints
// and random interior placements.
LemmaCheckResult run_lemma_check(std::uint64_t sweeps, std::uint64_t seed);

struct ScalingCell {
  std::uint64_t n = 0;
  std::uint64_t k = 0;
  double epsilon = 0.0;
  double delta = 0.0;
};

struct ScalingCellStats {
  ScalingCell cell;
  std::uint64_t trials = 0;
  double median_total = 0.0;
  double q1_total = 0.0;
  double q3_total = 0.0;
  double median_step1 = 0.0;
  double median_step2 = 0.0;
};

struct ScalingStudyResult {
  std::vector<ScalingCellStats> cells;
  // Slope of log(median step-2 queries) against log(1/eps); step 1 carries
  // no eps dependence so it is excluded from this axis.
  std::optional<double> eps_slope;
  // Slope of log(median total queries) against log(sqrt(n/k)).
  std::optional<double> sqrt_nk_slope;
  // Smallest c with c*sqrt(n/k)*(1/eps)*ln(1/delta) >= every measured total.
  std::optional<double> envelope_c;
};

ScalingStudyResult run_scaling_study(const std::vector<ScalingCell>& grid,
                                     std::uint64_t trials_per_cell,
                                     std::uint64_t seed);

// Least-squares slope of y against x.
double regression_slope(const std::vector<double>& x,
                        const std::vector<double>& y);

std::size_t worker_pool_size(std::uint64_t trials);

}  // namespace qcount

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qcount/accounting.hpp"
#include "qcount/coin.hpp"
#include "qcount/rotation.hpp"

namespace qcount {

// All defaults are the algorithm's published constants; overriding any of
// them marks the run non-conforming in output metadata.
struct EstimatorConfig {
  double epsilon = 0.1;
  double delta = 0.05;

  double step1_sample_multiplier = 1e5;   // m1 = ceil(mult * ln(log_arg/delta))
  double step1_log_arg = 120.0;
  double step2_sample_multiplier = 1000.0;
  double step2_log_base_arg = 100.0;      // m_t ~ ln(base/(delta*eps) * s^t)
  double growth_ratio = 12.0 / 11.0;
  double init_coeff = 5.0 / 8.0;
  double shrink = 0.9;
  double step1_threshold = 1.0 / 3.0;
  std::uint64_t padding_factor = 1000000;
  std::uint64_t dense_cap = 4096;

  bool conforming() const;
  void validate() const;

  std::uint64_t step1_samples() const;
  std::uint64_t step2_samples(int t) const;
};

struct EstimateResult {
  double k_hat = 0.0;  // or a_hat for amplitude estimation
  std::int64_t k_hat_rounded = 0;
  std::optional<AngleInterval> final_interval;
  int t_step1 = 0;
  int iterations_step2 = 0;
  bool zero_detected = false;
  QueryLedger ledger;
  std::vector<IterationRecord> trace;
  bool conforming = true;
};

struct AmplitudeProblem {
  double a = 0.0;  // 0 < a < 1
};

struct Step1Outcome {
  AngleInterval interval;
  int t_exit = 0;
  bool zero_candidate = false;
};

struct Step2Outcome {
  AngleInterval interval;
  int iterations = 0;
  bool zero_detected = false;
};

// Virtual padding: factor * n_items universe, same marked set.
MarkedSetProblem pad_problem(const MarkedSetProblem& problem,
                             std::uint64_t factor);

// Exponential search for a constant-factor bracket on theta. Loops
// t = 0,1,2,... flipping m1 coins at the largest odd r <= growth^t until at
// least a third come up heads; the returned interval is
// [coeff*(11/12)^(t+1), coeff*(11/12)^(t-1)]. Exceeding t_cap without an
// exit yields a zero-candidate (the bracket at t_cap, to be confirmed by
// step 2's zero test).
Step1Outcome step1_rough_bounds(CoinBackend& backend,
                                const EstimatorConfig& config, int t_cap,
                                QueryLedger& ledger,
                                std::vector<IterationRecord>* trace = nullptr);

// Interval refinement: decision rounds with the t-th sample count until
// theta_max <= (1+eps/5)*theta_min. Terminates early with zero_detected when
// theta_max falls to or below zero_threshold (arcsin sqrt(1/N') for counting,
// 0 to disable).
Step2Outcome step2_refine(CoinBackend& backend, const AngleInterval& interval,
                          const EstimatorConfig& config, double zero_threshold,
                          QueryLedger& ledger,
                          std::vector<IterationRecord>* trace = nullptr);

// Theorem-1 estimator: pads the problem, runs steps 1-2 against the chosen
// backend, returns K_hat = N' * sin^2(theta_max). K_hat = 0 when
// zero-detection triggers.
EstimateResult approximate_count(const MarkedSetProblem& problem,
                                 const EstimatorConfig& config,
                                 std::uint64_t seed,
                                 const std::string& backend_kind = "analytic");

// Theorem-2 estimator: theta = arcsin(a/1000), a_hat = 1000*sin(theta_max).
// Applications of U and U^dag count as 2 oracle queries per G.
EstimateResult estimate_amplitude(const AmplitudeProblem& problem,
                                  const EstimatorConfig& config,
                                  std::uint64_t seed,
                                  const std::string& backend_kind = "analytic");

// Classical comparison oracle: doubling search for the rough magnitude, then
// a Chernoff-sized batch of uniform index draws. One oracle query per draw.
EstimateResult classical_baseline_count(const MarkedSetProblem& problem,
                                        double epsilon, double delta,
                                        std::uint64_t seed);

}  // namespace qcount

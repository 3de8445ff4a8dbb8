#include "qcount/estimator.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace qcount {

namespace {

constexpr std::uint64_t kClassicalRoughSalt = 0x434c4153313ULL;
constexpr std::uint64_t kClassicalRefineSalt = 0x434c4153324ULL;

std::uint64_t ceil_to_count(double x) {
  if (!(x >= 0.0) || x > 9.0e18) {
    throw std::overflow_error("sample count out of range");
  }
  return static_cast<std::uint64_t>(std::ceil(x));
}

// Largest odd integer <= growth^t (>= 1).
std::int64_t step1_rotations(double growth, int t) {
  const double value = std::pow(growth, t);
  if (value >= 9.0e18) {
    throw std::overflow_error("step-1 rotation count overflows");
  }
  auto r = static_cast<std::int64_t>(std::floor(value));
  if (r % 2 == 0) --r;
  return r < 1 ? 1 : r;
}

bool step1_exit(std::uint64_t heads, std::uint64_t m, double threshold) {
  if (threshold == 1.0 / 3.0) return 3 * heads >= m;  // exact integer form
  return static_cast<double>(heads) >= threshold * static_cast<double>(m);
}

int step1_cap_for(double init_coeff, double growth, double theta_floor) {
  const double cap =
      std::ceil(std::log(init_coeff / theta_floor) / std::log(growth));
  return static_cast<int>(cap) + 1;
}

std::uint64_t draw_binomial(Rng& rng, std::uint64_t m, double p) {
  if (p <= 0.0) return 0;
  if (p >= 1.0) return m;
  std::binomial_distribution<std::uint64_t> dist(m, p);
  return dist(rng);
}

EstimateResult finish_refined(const MarkedSetProblem* padded,
                              const Step1Outcome& rough,
                              const Step2Outcome& refined, bool amplitude) {
  EstimateResult result;
  result.final_interval = refined.interval;
  result.t_step1 = rough.t_exit;
  result.iterations_step2 = refined.iterations;
  result.zero_detected = refined.zero_detected;
  if (refined.zero_detected) {
    result.k_hat = 0.0;
    result.k_hat_rounded = 0;
  } else if (amplitude) {
    result.k_hat = 1000.0 * std::sin(refined.interval.theta_max());
    result.k_hat_rounded = std::llround(result.k_hat);
  } else {
    const double s = std::sin(refined.interval.theta_max());
    result.k_hat = static_cast<double>(padded->n_items()) * s * s;
    result.k_hat_rounded = std::llround(result.k_hat);
  }
  return result;
}

}  // namespace

bool EstimatorConfig::conforming() const {
  const EstimatorConfig defaults{};
  return step1_sample_multiplier == defaults.step1_sample_multiplier &&
         step1_log_arg == defaults.step1_log_arg &&
         step2_sample_multiplier == defaults.step2_sample_multiplier &&
         step2_log_base_arg == defaults.step2_log_base_arg &&
         growth_ratio == defaults.growth_ratio &&
         init_coeff == defaults.init_coeff && shrink == defaults.shrink &&
         step1_threshold == defaults.step1_threshold &&
         padding_factor == defaults.padding_factor;
}

void EstimatorConfig::validate() const {
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");
  if (!(delta > 0.0) || !(delta < 1.0)) {
    throw std::invalid_argument("delta must lie in (0, 1)");
  }
  if (!(step1_sample_multiplier > 0.0) || !(step2_sample_multiplier > 0.0) ||
      !(step1_log_arg > 1.0) || !(step2_log_base_arg > 1.0)) {
    throw std::invalid_argument("sample-schedule constants must be positive");
  }
  if (!(growth_ratio > 1.0)) {
    throw std::invalid_argument("growth ratio must exceed 1");
  }
  if (!(shrink > 0.0) || !(shrink < 1.0)) {
    throw std::invalid_argument("shrink factor must lie in (0, 1)");
  }
  if (!(init_coeff > 0.0)) {
    throw std::invalid_argument("initial coefficient must be positive");
  }
  if (!(step1_threshold > 0.0) || !(step1_threshold < 1.0)) {
    throw std::invalid_argument("step-1 threshold must lie in (0, 1)");
  }
  if (padding_factor < 1) {
    throw std::invalid_argument("padding factor must be >= 1");
  }
}

std::uint64_t EstimatorConfig::step1_samples() const {
  return ceil_to_count(step1_sample_multiplier * std::log(step1_log_arg / delta));
}

std::uint64_t EstimatorConfig::step2_samples(int t) const {
  const double count =
      step2_sample_multiplier *
      std::log(step2_log_base_arg / (delta * epsilon) * std::pow(shrink, t));
  const std::uint64_t m = ceil_to_count(std::max(count, 1.0));
  return m < 1 ? 1 : m;
}

MarkedSetProblem pad_problem(const MarkedSetProblem& problem,
                             std::uint64_t factor) {
  return problem.padded(factor);
}

Step1Outcome step1_rough_bounds(CoinBackend& backend,
                                const EstimatorConfig& config, int t_cap,
                                QueryLedger& ledger,
                                std::vector<IterationRecord>* trace) {
  const std::uint64_t m = config.step1_samples();
  const double inv_growth = 1.0 / config.growth_ratio;

  int t_exit = t_cap;
  bool zero_candidate = true;
  for (int t = 0; t <= t_cap; ++t) {
    const std::int64_t r = step1_rotations(config.growth_ratio, t);
    const std::uint64_t heads = backend.flip_batch(r, m, Phase::kStep1, ledger);
    if (trace != nullptr) {
      trace->push_back(IterationRecord{Phase::kStep1, t, r, m, heads, {}});
    }
    if (step1_exit(heads, m, config.step1_threshold)) {
      t_exit = t;
      zero_candidate = false;
      break;
    }
  }

  const double theta_min =
      config.init_coeff * std::pow(inv_growth, t_exit + 1);
  const double theta_max =
      config.init_coeff * std::pow(inv_growth, t_exit - 1);
  return Step1Outcome{AngleInterval(theta_min, theta_max), t_exit,
                      zero_candidate};
}

Step2Outcome step2_refine(CoinBackend& backend, const AngleInterval& interval,
                          const EstimatorConfig& config, double zero_threshold,
                          QueryLedger& ledger,
                          std::vector<IterationRecord>* trace) {
  AngleInterval current = interval;
  const double exit_ratio = 1.0 + config.epsilon / 5.0;

  int t = 0;
  while (true) {
    if (zero_threshold > 0.0 && current.theta_max() <= zero_threshold) {
      return Step2Outcome{current, t, true};
    }
    if (current.theta_max() <= exit_ratio * current.theta_min()) {
      return Step2Outcome{current, t, false};
    }
    const std::uint64_t m = config.step2_samples(t);
    IterationRecord record;
    current = decision_round(current, backend, m, ledger,
                             trace != nullptr ? &record : nullptr);
    if (trace != nullptr) {
      record.t = t;
      trace->push_back(record);
    }
    ++t;
  }
}

EstimateResult approximate_count(const MarkedSetProblem& problem,
                                 const EstimatorConfig& config,
                                 std::uint64_t seed,
                                 const std::string& backend_kind) {
  config.validate();
  const MarkedSetProblem padded = pad_problem(problem, config.padding_factor);
  const double theta_floor =
      GroverAngle::from_counts(1, padded.n_items()).theta();
  const int t_cap =
      step1_cap_for(config.init_coeff, config.growth_ratio, theta_floor);

  auto backend = make_backend(padded, backend_kind.c_str(), seed,
                              config.dense_cap);

  QueryLedger ledger;
  std::vector<IterationRecord> trace;
  const Step1Outcome rough =
      step1_rough_bounds(*backend, config, t_cap, ledger, &trace);
  const Step2Outcome refined = step2_refine(
      *backend, rough.interval, config, theta_floor, ledger, &trace);

  EstimateResult result = finish_refined(&padded, rough, refined, false);
  result.ledger = ledger;
  result.trace = std::move(trace);
  result.conforming = config.conforming();
  return result;
}

EstimateResult estimate_amplitude(const AmplitudeProblem& problem,
                                  const EstimatorConfig& config,
                                  std::uint64_t seed,
                                  const std::string& backend_kind) {
  config.validate();
  const GroverAngle angle = GroverAngle::from_amplitude(problem.a);

  std::unique_ptr<CoinBackend> backend;
  if (backend_kind == "analytic") {
    backend = std::make_unique<AnalyticCoin>(angle, seed);
  } else if (backend_kind == "statevector") {
    backend = std::make_unique<StatevectorCoin>(angle, seed);
  } else {
    throw std::invalid_argument("unknown backend kind: " + backend_kind);
  }

  // Safety margin past the expected exit; step 1 terminates here w.h.p.
  const int t_cap =
      step1_cap_for(config.init_coeff, config.growth_ratio, angle.theta()) + 30;

  QueryLedger ledger;
  ledger.queries_per_grover = 2;  // one U and one U^dag per G
  std::vector<IterationRecord> trace;
  const Step1Outcome rough =
      step1_rough_bounds(*backend, config, t_cap, ledger, &trace);
  const Step2Outcome refined =
      step2_refine(*backend, rough.interval, config, 0.0, ledger, &trace);

  EstimateResult result = finish_refined(nullptr, rough, refined, true);
  result.ledger = ledger;
  result.trace = std::move(trace);
  result.conforming = config.conforming();
  return result;
}

EstimateResult classical_baseline_count(const MarkedSetProblem& problem,
                                        double epsilon, double delta,
                                        std::uint64_t seed) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");
  if (!(delta > 0.0) || !(delta < 1.0)) {
    throw std::invalid_argument("delta must lie in (0, 1)");
  }

  const double n = static_cast<double>(problem.n_items());
  const double p = static_cast<double>(problem.k()) / n;
  Rng rough_rng = Rng::derive(seed, kClassicalRoughSalt);
  Rng refine_rng = Rng::derive(seed, kClassicalRefineSalt);

  EstimateResult result;
  result.conforming = true;

  // Rough magnitude: toss 2^t coins per round until heads shows up. A cap of
  // ~3N ln(2/delta) total draws declares K = 0.
  const std::uint64_t draw_cap =
      ceil_to_count(3.0 * n * std::log(2.0 / delta)) + 1;
  std::uint64_t total_draws = 0;
  bool saw_heads = false;
  for (int t = 0; !saw_heads; ++t) {
    std::uint64_t m = std::uint64_t{1} << t;
    if (total_draws + m > draw_cap) m = draw_cap - total_draws;
    if (m == 0) break;
    const std::uint64_t heads = draw_binomial(rough_rng, m, p);
    result.ledger.record_classical_draws(m);
    total_draws += m;
    result.trace.push_back(IterationRecord{Phase::kStep1, t, 1, m, heads, {}});
    result.t_step1 = t;
    saw_heads = heads > 0;
  }
  if (!saw_heads) {
    result.k_hat = 0.0;
    result.k_hat_rounded = 0;
    result.zero_detected = true;
    return result;
  }

  // Chernoff-sized refinement around the rough scale N/K_rough = total_draws.
  // The constant is calibrated so 200-seed validation stays above 1 - delta.
  constexpr double kRefineConstant = 16.0;
  const std::uint64_t m2 = ceil_to_count(kRefineConstant *
                                         static_cast<double>(total_draws) *
                                         std::log(1.0 / delta) /
                                         (epsilon * epsilon));
  const std::uint64_t heads2 = draw_binomial(refine_rng, m2, p);
  result.ledger.record_classical_draws(m2);
  result.trace.push_back(
      IterationRecord{Phase::kStep2, 0, 1, m2, heads2, {}});
  result.iterations_step2 = 1;

  result.k_hat =
      n * static_cast<double>(heads2) / static_cast<double>(m2);
  result.k_hat_rounded = std::llround(result.k_hat);
  return result;
}

}  // namespace qcount

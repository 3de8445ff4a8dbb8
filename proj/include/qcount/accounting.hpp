#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace qcount {

enum class Phase { kStep1, kStep2 };

// Query costs of a single run. One Grover application G = one oracle query
// for counting; for amplitude estimation each G contains one U and one U^dag,
// so oracle_queries advances by 2 per G there.
struct QueryLedger {
  std::uint64_t grover_applications = 0;
  std::uint64_t oracle_queries = 0;
  std::uint64_t coin_flips = 0;
  std::uint64_t step1_queries = 0;
  std::uint64_t step2_queries = 0;

  // Oracle queries per Grover application: 1 for counting, 2 for amplitude.
  std::uint64_t queries_per_grover = 1;

  // Each of the m flips at iteration count r costs (r-1)/2 applications of G.
  void record_flip_batch(std::int64_t r, std::uint64_t m, Phase phase);

  // Classical baseline: one oracle query per uniform index draw, no G.
  void record_classical_draws(std::uint64_t m);
};

struct AngleIntervalSnapshot {
  double theta_min = 0.0;
  double theta_max = 0.0;
};

struct IterationRecord {
  Phase phase = Phase::kStep1;
  int t = 0;
  std::int64_t r = 1;
  std::uint64_t samples = 0;
  std::uint64_t heads = 0;
  std::optional<AngleIntervalSnapshot> interval_after;
};

// Comparison envelope c * sqrt(n/k) * (1/eps) * ln(1/delta). The constant c
// is not a theory value; it is fitted once from measured ledgers and then
// held as a regression guard.
double theoretical_envelope(double n, double k, double epsilon, double delta,
                            double c);

}  // namespace qcount

#include "qcount/accounting.hpp"

#include <cmath>
#include <stdexcept>

namespace qcount {

namespace {

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t out;
  if (__builtin_add_overflow(a, b, &out)) {
    throw std::overflow_error("query ledger counter overflow");
  }
  return out;
}

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t out;
  if (__builtin_mul_overflow(a, b, &out)) {
    throw std::overflow_error("query ledger counter overflow");
  }
  return out;
}

}  // namespace

void QueryLedger::record_flip_batch(std::int64_t r, std::uint64_t m,
                                    Phase phase) {
  if (r < 1 || r % 2 == 0) {
    throw std::invalid_argument("iteration count r must be odd and positive");
  }
  if (m < 1) throw std::invalid_argument("batch size m must be >= 1");

  const std::uint64_t grover_per_flip = static_cast<std::uint64_t>(r - 1) / 2;
  const std::uint64_t grover = checked_mul(m, grover_per_flip);

  grover_applications = checked_add(grover_applications, grover);
  oracle_queries =
      checked_add(oracle_queries, checked_mul(grover, queries_per_grover));
  coin_flips = checked_add(coin_flips, m);
  if (phase == Phase::kStep1) {
    step1_queries = checked_add(step1_queries, grover);
  } else {
    step2_queries = checked_add(step2_queries, grover);
  }
}

void QueryLedger::record_classical_draws(std::uint64_t m) {
  oracle_queries = checked_add(oracle_queries, m);
  coin_flips = checked_add(coin_flips, m);
}

double theoretical_envelope(double n, double k, double epsilon, double delta,
                            double c) {
  if (k < 1.0) throw std::invalid_argument("envelope requires k >= 1");
  return c * std::sqrt(n / k) * (1.0 / epsilon) * std::log(1.0 / delta);
}

}  // namespace qcount

#include "qcount/coin.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>

#include "qcount/statevector.hpp"

namespace qcount {

namespace {

constexpr std::uint64_t kStep1Salt = 0x5354455031ULL;  // "STEP1"
constexpr std::uint64_t kStep2Salt = 0x5354455032ULL;  // "STEP2"

void check_odd_positive(std::int64_t r) {
  if (r < 1 || r % 2 == 0) {
    throw std::invalid_argument("iteration count r must be odd and positive");
  }
}

}  // namespace

GroverAngle::GroverAngle(double theta) : theta_(theta) {
  if (!(theta > 0.0) || theta > std::numbers::pi / 2.0) {
    throw std::invalid_argument("Grover angle must satisfy 0 < theta <= pi/2");
  }
}

GroverAngle GroverAngle::from_counts(std::uint64_t k, std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("n must be >= 1");
  if (k > n) throw std::invalid_argument("k must not exceed n");
  if (k == 0) return zero_sentinel();
  // sqrt(k)/sqrt(n) instead of sqrt(k/n): the ratio can be ~1e-12 after
  // padding and this form keeps full precision there.
  const double ratio =
      std::sqrt(static_cast<double>(k)) / std::sqrt(static_cast<double>(n));
  return GroverAngle(std::asin(std::min(ratio, 1.0)));
}

GroverAngle GroverAngle::from_amplitude(double a) {
  if (!(a > 0.0) || !(a < 1.0)) {
    throw std::invalid_argument("amplitude must satisfy 0 < a < 1");
  }
  return GroverAngle(std::asin(a / 1000.0));
}

MarkedSetProblem::MarkedSetProblem(std::uint64_t n_items,
                                   std::vector<std::uint64_t> marked)
    : n_items_(n_items), marked_(std::move(marked)) {
  if (n_items_ == 0) throw std::invalid_argument("n_items must be >= 1");
  std::sort(marked_.begin(), marked_.end());
  marked_.erase(std::unique(marked_.begin(), marked_.end()), marked_.end());
  if (!marked_.empty() && marked_.back() >= n_items_) {
    throw std::invalid_argument("marked index out of range");
  }
}

bool MarkedSetProblem::is_marked(std::uint64_t index) const {
  return std::binary_search(marked_.begin(), marked_.end(), index);
}

GroverAngle MarkedSetProblem::angle() const {
  return GroverAngle::from_counts(k(), n_items_);
}

MarkedSetProblem MarkedSetProblem::padded(std::uint64_t factor) const {
  if (factor < 1) throw std::invalid_argument("padding factor must be >= 1");
  std::uint64_t padded_n;
  if (__builtin_mul_overflow(n_items_, factor, &padded_n)) {
    throw std::overflow_error("padded universe size overflows");
  }
  return MarkedSetProblem(padded_n, marked_);
}

CoinBackend::CoinBackend(std::uint64_t stream_seed)
    : step1_rng_(Rng::derive(stream_seed, kStep1Salt)),
      step2_rng_(Rng::derive(stream_seed, kStep2Salt)) {}

std::uint64_t CoinBackend::flip_batch(std::int64_t r, std::uint64_t m,
                                      Phase phase, QueryLedger& ledger) {
  check_odd_positive(r);
  if (m < 1) throw std::invalid_argument("batch size m must be >= 1");

  ledger.record_flip_batch(r, m, phase);

  const double p = heads_prob(r);
  Rng& rng = (phase == Phase::kStep1) ? step1_rng_ : step2_rng_;
  if (p <= 0.0) return 0;
  if (p >= 1.0) return m;
  std::binomial_distribution<std::uint64_t> heads(m, p);
  return heads(rng);
}

AnalyticCoin::AnalyticCoin(GroverAngle angle, std::uint64_t stream_seed)
    : CoinBackend(stream_seed), angle_(angle) {}

double AnalyticCoin::heads_prob(std::int64_t r) const {
  if (angle_.is_zero()) {
    check_odd_positive(r);
    return 0.0;
  }
  return analytic_heads_prob(r, angle_);
}

StatevectorCoin::StatevectorCoin(MarkedSetProblem problem,
                                 std::uint64_t stream_seed,
                                 std::uint64_t dense_cap)
    : CoinBackend(stream_seed),
      angle_(problem.angle()),
      dense_(problem.n_items() <= dense_cap && problem.k() >= 1 &&
             problem.k() < problem.n_items()),
      problem_(std::move(problem)),
      dense_cap_(dense_cap) {}

StatevectorCoin::StatevectorCoin(GroverAngle angle, std::uint64_t stream_seed)
    : CoinBackend(stream_seed), angle_(angle) {}

double StatevectorCoin::heads_prob(std::int64_t r) const {
  check_odd_positive(r);
  if (angle_.is_zero()) return 0.0;
  if (dense_) return statevector_heads_prob(problem_, r, dense_cap_);
  return subspace_heads_prob(angle_, r);
}

double analytic_heads_prob(std::int64_t r, GroverAngle angle) {
  check_odd_positive(r);
  const double s = std::sin(static_cast<double>(r) * angle.theta());
  return s * s;
}

std::unique_ptr<CoinBackend> make_backend(const MarkedSetProblem& problem,
                                          const char* kind,
                                          std::uint64_t stream_seed,
                                          std::uint64_t dense_cap) {
  const std::string_view name(kind);
  if (name == "analytic") {
    return std::make_unique<AnalyticCoin>(problem.angle(), stream_seed);
  }
  if (name == "statevector") {
    return std::make_unique<StatevectorCoin>(problem, stream_seed, dense_cap);
  }
  throw std::invalid_argument("unknown backend kind: " + std::string(name));
}

}  // namespace qcount

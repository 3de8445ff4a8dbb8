#include "qcount/rotation.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qcount {

namespace {

constexpr double kThetaCeil = std::numbers::pi / 1000.0;
constexpr double kGammaCeil = 0.2;
constexpr std::int64_t kMaxRotations = std::int64_t{1} << 62;

// Odd integer closest to x, ties toward the larger one.
std::int64_t closest_odd(double x) {
  const double lower = 2.0 * std::floor((x - 1.0) / 2.0) + 1.0;
  const double upper = lower + 2.0;
  if (x - lower < upper - x) return static_cast<std::int64_t>(lower);
  return static_cast<std::int64_t>(upper);
}

}  // namespace

AngleInterval::AngleInterval(double theta_min, double theta_max)
    : theta_min_(theta_min), theta_max_(theta_max) {
  if (!(theta_min > 0.0) || !(theta_min <= theta_max)) {
    throw std::invalid_argument(
        "angle interval requires 0 < theta_min <= theta_max");
  }
}

bool AngleInterval::rotation_ready() const {
  return gamma() <= kGammaCeil && theta_max_ <= kThetaCeil;
}

RotationChoice choose_r(const AngleInterval& interval) {
  if (!interval.rotation_ready()) {
    throw std::invalid_argument(
        "rotation selection requires gamma <= 1/5 and theta_max <= pi/1000");
  }
  if (interval.width() <= 0.0) {
    throw std::invalid_argument("rotation selection requires theta_min < theta_max");
  }

  RotationChoice choice;
  choice.delta_theta = interval.width();

  // Half-integer ties round up.
  const double k_real = interval.theta_min() / (4.0 * choice.delta_theta);
  choice.k = static_cast<std::int64_t>(std::floor(k_real + 0.5));

  const double r_real = 2.0 * std::numbers::pi *
                        static_cast<double>(choice.k) / interval.theta_min();
  if (!(r_real < static_cast<double>(kMaxRotations))) {
    throw std::overflow_error("rotation count exceeds the 63-bit range");
  }
  choice.r = closest_odd(r_real);
  return choice;
}

std::pair<double, double> r_bounds(const AngleInterval& interval,
                                   double theta) {
  if (!interval.contains(theta)) {
    throw std::invalid_argument("theta must lie inside the interval");
  }
  const double gamma = interval.gamma();
  const double base = std::numbers::pi / (gamma * theta);
  return {base * (0.5 - gamma) - 1.0, base * (0.5 + gamma) + 1.0};
}

AngleInterval update_interval(const AngleInterval& interval,
                              bool heads_majority) {
  const double scale = 1.0 + 0.9 * interval.gamma();
  if (heads_majority) {
    return AngleInterval(interval.theta_max() / scale, interval.theta_max());
  }
  return AngleInterval(interval.theta_min(), scale * interval.theta_min());
}

AngleInterval decision_round(const AngleInterval& interval,
                             CoinBackend& backend, std::uint64_t m,
                             QueryLedger& ledger, IterationRecord* record) {
  if (m < 1) throw std::invalid_argument("decision round requires m >= 1");

  const RotationChoice choice = choose_r(interval);
  const std::uint64_t heads =
      backend.flip_batch(choice.r, m, Phase::kStep2, ledger);
  // "at least half": 2*heads >= m, exact in integers.
  const bool heads_majority = 2 * heads >= m;
  const AngleInterval updated = update_interval(interval, heads_majority);

  if (record != nullptr) {
    record->phase = Phase::kStep2;
    record->r = choice.r;
    record->samples = m;
    record->heads = heads;
    record->interval_after =
        AngleIntervalSnapshot{updated.theta_min(), updated.theta_max()};
  }
  return updated;
}

}  // namespace qcount

#pragma once

#include <cstdint>
#include <utility>

#include "qcount/coin.hpp"

namespace qcount {

// The current bracket [theta_min, theta_max] on the hidden angle. The ratio
// parameter gamma = theta_max/theta_min - 1 must stay <= 1/5 for the rotation
// construction to apply, and theta_max <= pi/1000.
class AngleInterval {
 public:
  AngleInterval(double theta_min, double theta_max);

  double theta_min() const { return theta_min_; }
  double theta_max() const { return theta_max_; }
  double gamma() const { return theta_max_ / theta_min_ - 1.0; }
  double width() const { return theta_max_ - theta_min_; }

  bool contains(double theta) const {
    return theta_min_ <= theta && theta <= theta_max_;
  }

  // True when the interval may be handed to choose_r.
  bool rotation_ready() const;

 private:
  double theta_min_;
  double theta_max_;
};

struct RotationChoice {
  std::int64_t r = 1;      // odd
  std::int64_t k = 0;      // intermediate multiple of 2*pi
  double delta_theta = 0;  // theta_max - theta_min
};

// Builds the odd iteration count that makes the interval endpoints
// statistically distinguishable:
//   delta  := theta_max - theta_min
//   k      := round(theta_min / (4*delta))          (half rounds up)
//   r      := odd integer closest to 2*pi*k/theta_min (tie -> larger)
RotationChoice choose_r(const AngleInterval& interval);

// The guaranteed range pi/(gamma*theta)*(1/2 -+ gamma) -+ 1 for the r above,
// evaluated at a theta inside the interval.
std::pair<double, double> r_bounds(const AngleInterval& interval, double theta);

// Moves exactly one endpoint so that the new ratio is 0.9*gamma: heads
// majority raises theta_min to theta_max/(1+0.9*gamma), otherwise theta_max
// drops to (1+0.9*gamma)*theta_min.
AngleInterval update_interval(const AngleInterval& interval,
                              bool heads_majority);

// One refinement round: m flips at choose_r(interval).r, then the update
// above with heads-majority meaning heads >= m/2 (exact integer comparison).
AngleInterval decision_round(const AngleInterval& interval,
                             CoinBackend& backend, std::uint64_t m,
                             QueryLedger& ledger,
                             IterationRecord* record = nullptr);

}  // namespace qcount

#include "qcount/statevector.hpp"

#include <cmath>
#include <stdexcept>

namespace qcount {

namespace {

struct Mat2 {
  // column-major: m[col][row]
  double a, b, c, d;  // [[a, c], [b, d]]

  Mat2 operator*(const Mat2& o) const {
    return {a * o.a + c * o.b, b * o.a + d * o.b, a * o.c + c * o.d,
            b * o.c + d * o.d};
  }
};

Mat2 mat_pow(Mat2 base, std::uint64_t e) {
  Mat2 acc{1.0, 0.0, 0.0, 1.0};
  while (e > 0) {
    if (e & 1) acc = acc * base;
    base = base * base;
    e >>= 1;
  }
  return acc;
}

void check_dense_args(const MarkedSetProblem& problem, std::uint64_t cap) {
  if (problem.k() == 0 || problem.k() >= problem.n_items()) {
    throw std::invalid_argument(
        "dense simulation requires 1 <= K < N (degenerate rotation subspace)");
  }
  if (problem.n_items() > cap) {
    throw std::invalid_argument("universe exceeds the dense simulation cap");
  }
}

}  // namespace

std::vector<double> statevector_grover_state(const MarkedSetProblem& problem,
                                             std::uint64_t j,
                                             std::uint64_t dense_cap) {
  check_dense_args(problem, dense_cap);
  const std::size_t n = static_cast<std::size_t>(problem.n_items());
  const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n));

  std::vector<double> state(n, inv_sqrt_n);
  for (std::uint64_t step = 0; step < j; ++step) {
    // Oracle: flip the sign of every marked amplitude.
    for (std::uint64_t x : problem.marked()) {
      state[static_cast<std::size_t>(x)] = -state[static_cast<std::size_t>(x)];
    }
    // Diffusion 2|psi><psi| - I; this sign convention cancels the global
    // phase so the amplitudes stay sin/cos of (2j+1)theta.
    double overlap = 0.0;
    for (double amp : state) overlap += amp;
    overlap *= inv_sqrt_n;
    const double shift = 2.0 * overlap * inv_sqrt_n;
    for (double& amp : state) amp = shift - amp;
  }
  return state;
}

double statevector_heads_prob(const MarkedSetProblem& problem, std::int64_t r,
                              std::uint64_t dense_cap) {
  if (r < 1 || r % 2 == 0) {
    throw std::invalid_argument("iteration count r must be odd and positive");
  }
  const std::vector<double> state = statevector_grover_state(
      problem, static_cast<std::uint64_t>((r - 1) / 2), dense_cap);
  double prob = 0.0;
  for (std::uint64_t x : problem.marked()) {
    const double amp = state[static_cast<std::size_t>(x)];
    prob += amp * amp;
  }
  return prob;
}

double subspace_heads_prob(GroverAngle angle, std::int64_t r) {
  if (r < 1 || r % 2 == 0) {
    throw std::invalid_argument("iteration count r must be odd and positive");
  }
  const double s = std::sin(angle.theta());
  const double c = std::cos(angle.theta());

  // Basis: (normalized marked component, normalized unmarked component).
  // G = (2|psi><psi| - I) * U with U = diag(-1, 1).
  const Mat2 grover{-(2.0 * s * s - 1.0), -2.0 * s * c, 2.0 * s * c,
                    2.0 * c * c - 1.0};
  const Mat2 power = mat_pow(grover, static_cast<std::uint64_t>((r - 1) / 2));

  const double marked_amp = power.a * s + power.c * c;
  return marked_amp * marked_amp;
}

}  // namespace qcount

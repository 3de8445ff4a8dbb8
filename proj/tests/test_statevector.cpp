#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "qcount/statevector.hpp"

using namespace qcount;

TEST_CASE("uniform superposition at j = 0") {
  const MarkedSetProblem problem(4, {0});
  const auto state = statevector_grover_state(problem, 0);
  REQUIRE(state.size() == 4);
  for (double amp : state) CHECK(amp == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("one Grover application on N=4, K=1 reaches the marked item") {
  const MarkedSetProblem problem(4, {0});
  const auto state = statevector_grover_state(problem, 1);
  CHECK(state[0] == doctest::Approx(1.0).epsilon(1e-12));
  for (int i = 1; i < 4; ++i) {
    CHECK(std::abs(state[i]) < 1e-12);
  }
  CHECK(statevector_heads_prob(problem, 3) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("N=16 single marked item after one application") {
  const MarkedSetProblem problem(16, {5});
  const auto state = statevector_grover_state(problem, 1);
  const double theta = std::asin(0.25);
  CHECK(state[5] == doctest::Approx(std::sin(3.0 * theta)).epsilon(1e-12));
  CHECK(statevector_heads_prob(problem, 1) == doctest::Approx(1.0 / 16.0).epsilon(1e-12));
}

TEST_CASE("dense state matches the closed-form amplitudes componentwise") {
  for (std::uint64_t n : {4ULL, 8ULL, 16ULL}) {
    for (std::uint64_t k = 1; k < n; ++k) {
      std::vector<std::uint64_t> marked(k);
      for (std::uint64_t i = 0; i < k; ++i) marked[i] = i * (n / k);
      const MarkedSetProblem problem(n, marked);
      const double theta = problem.angle().theta();
      for (std::uint64_t j : {0ULL, 1ULL, 3ULL, 7ULL}) {
        const auto state = statevector_grover_state(problem, j);
        const double r = static_cast<double>(2 * j + 1);
        const double marked_amp = std::sin(r * theta) / std::sqrt(double(k));
        const double unmarked_amp =
            std::cos(r * theta) / std::sqrt(double(n - k));
        for (std::uint64_t x = 0; x < n; ++x) {
          const double expected =
              problem.is_marked(x) ? marked_amp : unmarked_amp;
          CHECK(std::abs(state[x] - expected) <= 1e-9);
        }
      }
    }
  }
}

TEST_CASE("dense and analytic heads probabilities agree to 1e-9") {
  for (std::uint64_t n : {4ULL, 8ULL, 16ULL, 64ULL}) {
    for (std::uint64_t k = 1; k < n; ++k) {
      std::vector<std::uint64_t> marked(k);
      for (std::uint64_t i = 0; i < k; ++i) marked[i] = i;
      const MarkedSetProblem problem(n, marked);
      const GroverAngle angle = problem.angle();
      for (std::int64_t r = 1; r <= 31; r += 2) {
        CHECK(std::abs(statevector_heads_prob(problem, r) -
                       analytic_heads_prob(r, angle)) <= 1e-9);
      }
    }
  }
}

TEST_CASE("subspace reduction reproduces the dense probabilities") {
  const MarkedSetProblem problem(256, {3, 77, 200});
  const GroverAngle angle = problem.angle();
  for (std::int64_t r = 1; r <= 99; r += 2) {
    CHECK(std::abs(subspace_heads_prob(angle, r) -
                   statevector_heads_prob(problem, r)) <= 1e-9);
  }
}

TEST_CASE("subspace path handles huge virtually padded universes") {
  const MarkedSetProblem padded = MarkedSetProblem(1 << 20, {1, 2}).padded(1000000);
  const GroverAngle angle = padded.angle();
  for (std::int64_t r : {1001, 40001, 2000001}) {
    CHECK(std::abs(subspace_heads_prob(angle, r) -
                   analytic_heads_prob(r, angle)) <= 1e-9);
  }
}

TEST_CASE("degenerate subspaces and oversized universes are rejected") {
  CHECK_THROWS_AS(statevector_grover_state(MarkedSetProblem(4, {}), 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      statevector_grover_state(MarkedSetProblem(4, {0, 1, 2, 3}), 1),
      std::invalid_argument);
  CHECK_THROWS_AS(statevector_grover_state(MarkedSetProblem(8192, {0}), 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(statevector_heads_prob(MarkedSetProblem(4, {0}), 4),
                  std::invalid_argument);
}

TEST_CASE("statevector coin agrees with the analytic coin's probabilities") {
  const MarkedSetProblem problem(64, {1, 5, 9});
  StatevectorCoin sv(problem, 17);
  AnalyticCoin an(problem.angle(), 17);
  for (std::int64_t r = 1; r <= 49; r += 2) {
    CHECK(std::abs(sv.heads_prob(r) - an.heads_prob(r)) <= 1e-9);
  }

  // K = 0: the coin is all tails.
  StatevectorCoin zero(MarkedSetProblem(64, {}), 17);
  QueryLedger ledger;
  CHECK(zero.flip_batch(5, 100, Phase::kStep1, ledger) == 0);
}

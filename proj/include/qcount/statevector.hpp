#pragma once

#include <cstdint>
#include <vector>

#include "qcount/coin.hpp"

namespace qcount {

// Exact N-dimensional real state after j applications of the Grover operator
// to the uniform superposition. Requires 1 <= K < N and N <= dense_cap.
// The sign convention fixes the global phase so marked amplitudes equal
// sin((2j+1)theta)/sqrt(K) and unmarked ones cos((2j+1)theta)/sqrt(N-K).
std::vector<double> statevector_grover_state(const MarkedSetProblem& problem,
                                             std::uint64_t j,
                                             std::uint64_t dense_cap = 4096);

// Sum of squared marked amplitudes of the state above with j = (r-1)/2.
double statevector_heads_prob(const MarkedSetProblem& problem, std::int64_t r,
                              std::uint64_t dense_cap = 4096);

// Same probability from the 2-dimensional invariant subspace: the Grover
// operator is a 2x2 matrix there, raised to the power (r-1)/2 by repeated
// squaring. Works for any N, including virtually padded universes.
double subspace_heads_prob(GroverAngle angle, std::int64_t r);

}  // namespace qcount

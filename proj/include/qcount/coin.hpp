#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "qcount/accounting.hpp"
#include "qcount/rng.hpp"

namespace qcount {

// The hidden angle theta = arcsin sqrt(K/N) (counting) or arcsin(a/1000)
// (amplitude estimation).
class GroverAngle {
 public:
  explicit GroverAngle(double theta);

  static GroverAngle from_counts(std::uint64_t k, std::uint64_t n);
  static GroverAngle from_amplitude(double a);

  // Usable only by the zero-detection path.
  static GroverAngle zero_sentinel() { return GroverAngle(); }

  double theta() const { return theta_; }
  bool is_zero() const { return theta_ == 0.0; }

 private:
  GroverAngle() : theta_(0.0) {}
  double theta_;
};

// A universe of n_items indices with a marked subset. Padding never
// materializes storage: any index >= the original size is simply unmarked.
class MarkedSetProblem {
 public:
  MarkedSetProblem(std::uint64_t n_items, std::vector<std::uint64_t> marked);

  std::uint64_t n_items() const { return n_items_; }
  std::uint64_t k() const { return marked_.size(); }
  const std::vector<std::uint64_t>& marked() const { return marked_; }
  bool is_marked(std::uint64_t index) const;

  GroverAngle angle() const;

  // Virtual padding: same marked set, factor * n_items universe.
  MarkedSetProblem padded(std::uint64_t factor) const;

 private:
  std::uint64_t n_items_;
  std::vector<std::uint64_t> marked_;  // sorted, unique
};

// Source of Bernoulli(sin^2(r*theta)) outcomes for odd r. The estimator sees
// only flip_batch; theta stays inside the backend, which enforces the query
// model. Each phase draws from its own rng stream derived from the backend
// seed, so step-1 outcomes do not depend on what step 2 consumes (and in
// particular not on epsilon).
class CoinBackend {
 public:
  virtual ~CoinBackend() = default;

  std::uint64_t flip_batch(std::int64_t r, std::uint64_t m, Phase phase,
                           QueryLedger& ledger);

  virtual double heads_prob(std::int64_t r) const = 0;
  virtual const char* kind() const = 0;

 protected:
  explicit CoinBackend(std::uint64_t stream_seed);

 private:
  Rng step1_rng_;
  Rng step2_rng_;
};

// Exact closed-form coin: heads probability sin^2(r*theta).
class AnalyticCoin : public CoinBackend {
 public:
  AnalyticCoin(GroverAngle angle, std::uint64_t stream_seed);

  double heads_prob(std::int64_t r) const override;
  const char* kind() const override { return "analytic"; }

 private:
  GroverAngle angle_;
};

// Brute-force coin: heads probability obtained by applying the Grover
// operator numerically. Dense N-dimensional simulation up to dense_cap;
// above the cap the exactly 2-dimensional marked/unmarked invariant subspace
// is used instead.
class StatevectorCoin : public CoinBackend {
 public:
  StatevectorCoin(MarkedSetProblem problem, std::uint64_t stream_seed,
                  std::uint64_t dense_cap = 4096);

  // Amplitude-estimation variant: the unitary is represented by its single
  // invariant angle and simulated in the 2-dimensional subspace.
  StatevectorCoin(GroverAngle angle, std::uint64_t stream_seed);

  double heads_prob(std::int64_t r) const override;
  const char* kind() const override { return "statevector"; }

 private:
  GroverAngle angle_;
  bool dense_ = false;
  MarkedSetProblem problem_{1, {}};
  std::uint64_t dense_cap_ = 4096;
};

// Exact sin^2(r*theta) with the usual argument checks (r odd positive).
double analytic_heads_prob(std::int64_t r, GroverAngle angle);

std::unique_ptr<CoinBackend> make_backend(const MarkedSetProblem& problem,
                                          const char* kind,
                                          std::uint64_t stream_seed,
                                          std::uint64_t dense_cap);

}  // namespace qcount

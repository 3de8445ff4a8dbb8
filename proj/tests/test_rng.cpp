#include <doctest.h>

#include <set>

#include "qcount/rng.hpp"

using qcount::Rng;

TEST_CASE("same seed reproduces the stream") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a() == b());
}

TEST_CASE("derived streams differ from each other and the parent") {
  Rng parent(7);
  Rng s1 = Rng::derive(7, 1);
  Rng s2 = Rng::derive(7, 2);
  Rng s1_phase = Rng::derive(7, 1, 99);
  std::set<std::uint64_t> firsts{parent(), s1(), s2(), s1_phase()};
  CHECK(firsts.size() == 4);

  Rng s1_again = Rng::derive(7, 1);
  Rng s1_ref = Rng::derive(7, 1);
  for (int i = 0; i < 50; ++i) CHECK(s1_again() == s1_ref());
}

TEST_CASE("next_double is uniform-ish on [0,1)") {
  Rng rng(123);
  double sum = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.next_double();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    sum += u;
  }
  CHECK(sum / n == doctest::Approx(0.5).epsilon(0.01));
}

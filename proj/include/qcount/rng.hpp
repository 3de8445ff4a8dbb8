#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace qcount {

// xoshiro256** 1.0 (Blackman/Vigna), seeded through splitmix64.
// Streams are derived, not jumped: derive(master, salt...) mixes the salts
// into a fresh 256-bit state, so (seed, trial, phase) keys give independent
// generators that never share state.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& word : state_) word = splitmix64(sm);
  }

  template <typename... Salts>
  static Rng derive(std::uint64_t master, Salts... salts) {
    std::uint64_t sm = master;
    std::uint64_t mixed = splitmix64(sm);
    ((sm ^= static_cast<std::uint64_t>(salts) + 0x9e3779b97f4a7c15ULL +
            (sm << 6) + (sm >> 2),
      mixed = splitmix64(sm)),
     ...);
    return Rng(mixed);
  }

  result_type operator()() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform double in [0, 1) with 53 random bits.
  double next_double() {
    return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<std::uint64_t>::max();
  }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::array<std::uint64_t, 4> state_{};
};

}  // namespace qcount

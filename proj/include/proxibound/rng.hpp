#pragma once

#include <cstdint>
#include <span>

namespace proxibound {

// xoshiro256++ with splitmix64 stream derivation.
//
// Streams are derived, not split from a shared sequence, so any worker layout
// sees identical draws: derive_key(seed, i) = splitmix64(seed + GOLDEN*(i+1)),
// and a generator seeded with key k takes its four state words from four
// successive splitmix64 outputs started at k. Two-level ids chain the rule:
// derive_key(derive_key(seed, i), j).
class Rng {
 public:
  static constexpr const char* kAlgorithmId = "xoshiro256++/splitmix64";
  static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

  explicit Rng(std::uint64_t seed) {
    std::uint64_t s = seed;
    for (auto& word : state_) word = splitmix64(s);
  }

  static std::uint64_t derive_key(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t s = seed + kGolden * (stream + 1);
    return splitmix64(s);
  }

  static Rng derived(std::uint64_t seed, std::uint64_t stream) {
    return Rng(derive_key(seed, stream));
  }

  static Rng derived(std::uint64_t seed, std::uint64_t s1, std::uint64_t s2) {
    return Rng(derive_key(derive_key(seed, s1), s2));
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform on [0, 1) with 53 random bits.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + next_double() * (hi - lo); }

  // Uniform index in [0, n) via multiply-shift.
  std::size_t uniform_index(std::size_t n) {
    return static_cast<std::size_t>((static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

  // Draws from the category whose cumulative mass first exceeds u.
  int categorical(std::span<const double> cumulative) {
    double u = next_double();
    int lo = 0, hi = static_cast<int>(cumulative.size()) - 1;
    while (lo < hi) {
      int mid = (lo + hi) / 2;
      if (cumulative[mid] > u) hi = mid; else lo = mid + 1;
    }
    return lo;
  }

 private:
  static std::uint64_t splitmix64(std::uint64_t& x) {
    std::uint64_t z = (x += kGolden);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  std::uint64_t state_[4];
};

}  // namespace proxibound

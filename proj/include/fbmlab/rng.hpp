#pragma once

#include <array>
#include <cstdint>

#include "fbmlab/stats.hpp"

namespace fbmlab {

// Reproducible random streams.  Replication streams are derived by hashing
// (seed, stream id) with splitmix64, so parallel replications are independent
// of worker count and scheduling.  Normals come from the inverse CDF: exactly
// one uniform per normal, no rejection, no implementation-defined state.

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

class Xoshiro256pp {
 public:
  explicit Xoshiro256pp(std::uint64_t seed) {
    std::uint64_t s = seed;
    for (auto& w : state_) w = splitmix64(s);
  }

  std::uint64_t next() {
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

  // uniform on the open interval (0, 1)
  double next_uniform() {
    return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
  }

  double next_normal() { return normal_quantile(next_uniform()); }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  std::array<std::uint64_t, 4> state_{};
};

// Key derivation: fold the stream coordinates into the seed one word at a
// time.  derive_stream(seed) != derive_stream(seed, 0), so adding coordinates
// never collides with shorter keys in practice.
inline std::uint64_t derive_stream(std::uint64_t seed) {
  std::uint64_t s = seed;
  return splitmix64(s);
}

template <class... Words>
std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t word, Words... rest) {
  std::uint64_t s = seed;
  std::uint64_t mixed = splitmix64(s) ^ (word + 0x9e3779b97f4a7c15ULL);
  if constexpr (sizeof...(rest) == 0) {
    std::uint64_t t = mixed;
    return splitmix64(t);
  } else {
    return derive_stream(mixed, rest...);
  }
}

inline Xoshiro256pp make_stream(std::uint64_t seed) { return Xoshiro256pp(derive_stream(seed)); }

template <class... Words>
Xoshiro256pp make_stream(std::uint64_t seed, Words... coords) {
  return Xoshiro256pp(derive_stream(seed, static_cast<std::uint64_t>(coords)...));
}

}  // namespace fbmlab

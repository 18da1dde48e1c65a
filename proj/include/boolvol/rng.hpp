#pragma once

#include <cstdint>
#include <random>

namespace boolvol {

/// Engine used for every replica stream.
using Engine = std::mt19937_64;

/// Stream salts keep the operations that share a (seed, replica) pair
/// statistically independent.
enum class StreamSalt : std::uint64_t {
  Trajectory = 0x5452414aULL,
  Joint = 0x4a4f494eULL,
  NoisePair = 0x4e4f4953ULL,
  Survival = 0x53555256ULL,
  GridCount = 0x47524944ULL,
  Explorer = 0x45585052ULL,
};

/// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Stream key for replica `replica` of run `seed`:
///   mix64(mix64(mix64(seed) ^ salt) + replica)
constexpr std::uint64_t stream_key(std::uint64_t seed, std::uint64_t replica,
                                   StreamSalt salt) noexcept {
  return mix64(mix64(mix64(seed) ^ static_cast<std::uint64_t>(salt)) + replica);
}

inline Engine make_stream(std::uint64_t seed, std::uint64_t replica, StreamSalt salt) {
  return Engine(stream_key(seed, replica, salt));
}

/// Uniform on [0, 1) with 53 random bits.
inline double uniform01(Engine& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline bool bernoulli(Engine& rng, double p) { return uniform01(rng) < p; }

}  // namespace boolvol

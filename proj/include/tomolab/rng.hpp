#pragma once

#include <cstdint>
#include <random>

namespace tomolab {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer; a bijective 64-bit mixer.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed of substream `stream` under `root`. Streams with different `tag`
/// values are independent even for the same index, so a single root seed can
/// feed several stages of one simulation.
constexpr std::uint64_t substream_seed(std::uint64_t root, std::uint64_t stream,
                                       std::uint64_t tag = 0) noexcept {
  return mix64(mix64(mix64(root) ^ stream) ^ mix64(tag + 0x632be59bd9b4e019ULL));
}

inline Rng make_substream(std::uint64_t root, std::uint64_t stream, std::uint64_t tag = 0) {
  return Rng(substream_seed(root, stream, tag));
}

// Stage tags used across modules.
namespace stream_tag {
inline constexpr std::uint64_t design = 1;
inline constexpr std::uint64_t counts = 2;
inline constexpr std::uint64_t shuffle = 3;
inline constexpr std::uint64_t gaussian = 4;
inline constexpr std::uint64_t perturb = 5;
inline constexpr std::uint64_t sampler = 6;
}  // namespace stream_tag

}  // namespace tomolab

#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace pairflow {

// Philox-4x32-10 counter-based generator. Stateless: every 128-bit output
// block is a pure function of (counter, key), so draws can be indexed by
// (seed, stream, step, mode) and replayed from any point without storing
// generator state.
namespace philox {

using Counter = std::array<std::uint32_t, 4>;
using Key = std::array<std::uint32_t, 2>;

inline constexpr std::uint32_t kMult0 = 0xD2511F53u;
inline constexpr std::uint32_t kMult1 = 0xCD9E8D57u;
inline constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
inline constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline Counter block(Counter x, Key k) {
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = std::uint64_t(kMult0) * x[0];
    const std::uint64_t p1 = std::uint64_t(kMult1) * x[2];
    x = {std::uint32_t(p1 >> 32) ^ x[1] ^ k[0], std::uint32_t(p1),
         std::uint32_t(p0 >> 32) ^ x[3] ^ k[1], std::uint32_t(p0)};
    k[0] += kWeyl0;
    k[1] += kWeyl1;
  }
  return x;
}

// Uniform in (0, 1), never exactly 0 or 1 (safe under log()).
inline double uniform53(std::uint32_t hi, std::uint32_t lo) {
  const std::uint64_t bits = (std::uint64_t(hi) << 32) | lo;
  return (double(bits >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace philox

struct NormalPair {
  double z0;
  double z1;
};

// Two independent standard normals from one Philox block via Box-Muller.
inline NormalPair counter_normals(std::uint64_t seed, std::uint32_t stream_tag,
                                  std::uint64_t position, std::uint32_t lane) {
  const philox::Key key = {std::uint32_t(seed), std::uint32_t(seed >> 32)};
  const philox::Counter ctr = {lane, std::uint32_t(position),
                               std::uint32_t(position >> 32), stream_tag};
  const philox::Counter out = philox::block(ctr, key);
  const double u1 = philox::uniform53(out[0], out[1]);
  const double u2 = philox::uniform53(out[2], out[3]);
  const double r = std::sqrt(-2.0 * std::log(u1));
  constexpr double two_pi = 6.283185307179586476925286766559;
  return {r * std::cos(two_pi * u2), r * std::sin(two_pi * u2)};
}

}  // namespace pairflow

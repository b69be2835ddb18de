#pragma once

#include <array>
#include <cstdint>

namespace sigmalab {

namespace detail {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

// SplitMix64 step; advances `state` and returns the mixed word.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += kGolden);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline std::uint64_t rotl64(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

}  // namespace detail

/// Per-path random stream: xoshiro256++ seeded from (master_seed, path_index)
/// through SplitMix64. Streams for distinct path indices are independent and
/// reproducible, so paths can be generated in any order, on any number of
/// threads, with identical results.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::uint64_t path_index) {
    std::uint64_t st = master_seed;
    const std::uint64_t w0 = detail::splitmix64(st);
    st ^= path_index * detail::kGolden;
    const std::uint64_t w1 = detail::splitmix64(st);
    std::uint64_t st2 = w0 ^ detail::rotl64(w1, 32) ^ path_index;
    for (auto& si : s_) si = detail::splitmix64(st2);
    if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = detail::kGolden;
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = detail::rotl64(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = detail::rotl64(s_[3], 45);
    return result;
  }

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1]; safe to pass to log().
  double uniform_open() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  /// Standard normal via the 128-layer ziggurat.
  double normal();

  /// Standard exponential.
  double exponential();

 private:
  double normal_fix(std::int32_t hz, std::uint32_t iz);
  std::array<std::uint64_t, 4> s_;
};

}  // namespace sigmalab

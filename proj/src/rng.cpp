#include "sigmalab/rng.hpp"

#include <cmath>

namespace sigmalab {

namespace {

// Marsaglia-Tsang ziggurat tables for the standard normal, 128 layers.
// zig_r is the start of the tail layer, zig_v the common layer area.
constexpr double kZigR = 3.442619855899;
constexpr double kZigV = 9.91256303526217e-3;
constexpr double kM1 = 2147483648.0;  // 2^31

struct ZigTables {
  std::uint32_t kn[128];
  double wn[128];
  double fn[128];

  ZigTables() {
    double dn = kZigR;
    double tn = kZigR;
    const double q = kZigV / std::exp(-0.5 * dn * dn);
    kn[0] = static_cast<std::uint32_t>((dn / q) * kM1);
    kn[1] = 0;
    wn[0] = q / kM1;
    wn[127] = dn / kM1;
    fn[0] = 1.0;
    fn[127] = std::exp(-0.5 * dn * dn);
    for (int i = 126; i >= 1; --i) {
      dn = std::sqrt(-2.0 * std::log(kZigV / dn + std::exp(-0.5 * dn * dn)));
      kn[i + 1] = static_cast<std::uint32_t>((dn / tn) * kM1);
      tn = dn;
      fn[i] = std::exp(-0.5 * dn * dn);
      wn[i] = dn / kM1;
    }
  }
};

const ZigTables kZig;

}  // namespace

double RngStream::normal() {
  const std::int32_t hz = static_cast<std::int32_t>(next_u64() >> 32);
  const std::uint32_t iz = static_cast<std::uint32_t>(hz) & 127u;
  const std::uint32_t ahz =
      hz < 0 ? ~static_cast<std::uint32_t>(hz) + 1u : static_cast<std::uint32_t>(hz);
  if (ahz < kZig.kn[iz]) return hz * kZig.wn[iz];
  return normal_fix(hz, iz);
}

double RngStream::normal_fix(std::int32_t hz, std::uint32_t iz) {
  for (;;) {
    if (iz == 0) {
      // Tail layer: Marsaglia's method for x > zig_r.
      double x;
      double y;
      do {
        x = -std::log(uniform_open()) / kZigR;
        y = -std::log(uniform_open());
      } while (y + y < x * x);
      return hz > 0 ? kZigR + x : -(kZigR + x);
    }
    const double x = hz * kZig.wn[iz];
    if (kZig.fn[iz] + uniform() * (kZig.fn[iz - 1] - kZig.fn[iz]) <
        std::exp(-0.5 * x * x)) {
      return x;
    }
    hz = static_cast<std::int32_t>(next_u64() >> 32);
    iz = static_cast<std::uint32_t>(hz) & 127u;
    const std::uint32_t ahz =
        hz < 0 ? ~static_cast<std::uint32_t>(hz) + 1u : static_cast<std::uint32_t>(hz);
    if (ahz < kZig.kn[iz]) return hz * kZig.wn[iz];
  }
}

double RngStream::exponential() { return -std::log(uniform_open()); }

}  // namespace sigmalab

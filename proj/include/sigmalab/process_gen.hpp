#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "sigmalab/functions.hpp"
#include "sigmalab/grid.hpp"
#include "sigmalab/paths.hpp"

namespace sigmalab {

/// Horizon extension for open-ended stops: simulate to the grid horizon, then
/// keep doubling the number of steps up to max_doublings; paths still
/// unstopped at the extended horizon come back flagged truncated.
struct ExtensionPolicy {
  std::size_t max_doublings = 6;
};

/// Brownian motion sampled on the grid: B_0 = x0, independent N(0, dt)
/// increments. Exact in law at grid times.
template <class Rng>
std::vector<double> gen_bm(const TimeGrid& grid, Rng& rng, double x0 = 0.0) {
  std::vector<double> b(grid.size());
  b[0] = x0;
  const double sdt = std::sqrt(grid.dt);
  for (std::size_t k = 0; k < grid.n_steps; ++k) {
    b[k + 1] = b[k] + sdt * rng.normal();
  }
  return b;
}

/// Reflected Brownian motion as a class-(Sigma) path: X = Bbar - B with
/// N = -B and A = Bbar. The decomposition is exact by construction and the
/// structural zeros are the max-update indices (X = 0 there, bitwise).
template <class Rng>
SigmaPath gen_reflected(const TimeGrid& grid, Rng& rng) {
  SigmaPath p;
  p.dt = grid.dt;
  const std::size_t sz = grid.size();
  p.x.resize(sz);
  p.n.resize(sz);
  p.a.resize(sz);
  p.x[0] = 0.0;
  p.n[0] = 0.0;
  p.a[0] = 0.0;
  p.zero_indices.push_back(0);
  double b = 0.0;
  double bbar = 0.0;
  const double sdt = std::sqrt(grid.dt);
  for (std::size_t k = 1; k < sz; ++k) {
    b += sdt * rng.normal();
    if (b >= bbar) {
      bbar = b;
      p.zero_indices.push_back(k);
    }
    p.x[k] = bbar - b;
    p.n[k] = -b;
    p.a[k] = bbar;
  }
  return p;
}

/// Exponential local martingale M_t = exp(B_t - t/2), M_0 = 1, M_inf = 0.
template <class Rng>
MartingalePath gen_exp_martingale(const TimeGrid& grid, Rng& rng) {
  MartingalePath p;
  p.dt = grid.dt;
  const std::size_t sz = grid.size();
  p.m.resize(sz);
  p.m_max.resize(sz);
  p.m[0] = 1.0;
  p.m_max[0] = 1.0;
  double w = 0.0;
  const double drift = -0.5 * grid.dt;
  const double sdt = std::sqrt(grid.dt);
  for (std::size_t k = 1; k < sz; ++k) {
    w += drift + sdt * rng.normal();
    p.m[k] = std::exp(w);
    p.m_max[k] = p.m[k] > p.m_max[k - 1] ? p.m[k] : p.m_max[k - 1];
  }
  return p;
}

/// Brownian motion started at 1, absorbed at 0, stopped at the first grid
/// index where M <= psi(Mbar). Since psi >= 0, absorption at 0 always
/// triggers the stop as well. Arrays end at the stop index (values are frozen
/// from there on); paths that never stop within the extended horizon are
/// flagged truncated.
///
/// With bridge_correction, each surviving step additionally samples whether
/// the Brownian bridge between the two endpoints dipped below the current
/// barrier psi(Mbar), with probability exp(-2*a*b/dt); a triggered bridge
/// stop lands on the barrier itself.
template <class Rng>
MartingalePath gen_psi_stopped(const TimeGrid& grid, Rng& rng,
                               const CeilingFunction& psi,
                               const ExtensionPolicy& ext = {},
                               bool bridge_correction = false) {
  if (!(psi(1.0) < 1.0)) {
    throw std::invalid_argument("gen_psi_stopped: psi(1) must be < 1");
  }
  MartingalePath p;
  p.dt = grid.dt;
  p.m.push_back(1.0);
  p.m_max.push_back(1.0);
  const double sdt = std::sqrt(grid.dt);
  const std::size_t max_steps = grid.n_steps << ext.max_doublings;
  double m = 1.0;
  double mbar = 1.0;
  for (std::size_t k = 1; k <= max_steps; ++k) {
    const double prev = m;
    m += sdt * rng.normal();
    bool absorbed = false;
    if (m <= 0.0) {
      m = 0.0;
      absorbed = true;
    }
    if (m > mbar) mbar = m;
    p.m.push_back(m);
    p.m_max.push_back(mbar);
    const double barrier = psi(mbar);
    if (absorbed || m <= barrier) {
      p.stop_index = k;
      p.stop_overshoot = barrier > m ? barrier - m : 0.0;
      return p;
    }
    if (bridge_correction) {
      const double ga = prev - barrier;
      const double gb = m - barrier;
      if (ga > 0.0 && gb > 0.0 &&
          rng.uniform() < std::exp(-2.0 * ga * gb / grid.dt)) {
        p.m.back() = barrier;
        p.stop_index = k;
        p.stop_overshoot = 0.0;
        return p;
      }
    }
  }
  p.truncated = true;
  return p;
}

/// Max-ratio transform of a nonnegative local martingale started at 1:
///   X = 1 - M/Mbar,  A = log(Mbar),  N = -sum (M_{k+1}-M_k)/Mbar_k
/// (left-endpoint Ito sum), plus the induced weight phi(x) = 1 - psi(e^x)/e^x.
/// Structural zeros sit at the max-update indices, where M = Mbar bitwise.
/// The decomposition residual of the returned path is O(sqrt(dt)).
std::pair<SigmaPath, WeightFunction> transform_max_ratio(const MartingalePath& mp,
                                                         const CeilingFunction& psi);

}  // namespace sigmalab

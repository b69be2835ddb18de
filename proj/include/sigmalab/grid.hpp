#pragma once

#include <cstddef>
#include <stdexcept>

namespace sigmalab {

/// Uniform time grid t_k = k*dt, k = 0..n_steps. The horizon is n_steps*dt
/// and grid times are always computed as k*dt, never accumulated.
struct TimeGrid {
  double dt;
  std::size_t n_steps;

  TimeGrid(double dt_, std::size_t n_steps_) : dt(dt_), n_steps(n_steps_) {
    if (!(dt > 0.0)) throw std::invalid_argument("TimeGrid: dt must be positive");
    if (n_steps < 1) throw std::invalid_argument("TimeGrid: n_steps must be >= 1");
  }

  double time(std::size_t k) const { return static_cast<double>(k) * dt; }
  double horizon() const { return time(n_steps); }
  std::size_t size() const { return n_steps + 1; }
};

}  // namespace sigmalab

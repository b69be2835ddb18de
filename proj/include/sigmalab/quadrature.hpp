#pragma once

#include <functional>

namespace sigmalab {

/// Adaptive Simpson quadrature of f over [a, b].
/// Recursion splits an interval until the Richardson estimate of the local
/// error is below the interval's share of `tol`, or `max_depth` is reached.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-10, int max_depth = 50);

}  // namespace sigmalab

#pragma once

#include "sigmalab/functions.hpp"
#include "sigmalab/rng.hpp"

namespace sigmalab {

/// P(A_T > x) = exp(-Phi(x)) for the stop T = inf{t: phi(A_t) X_t >= 1}.
double survival_a_t(double x, const WeightFunction& phi);

/// P(A_inf > x) = exp(-int_0^x dz/phi(z)) for stopped paths with
/// X_inf = phi(A_inf). Throws if 1/phi is not integrable at 0.
double survival_a_inf(double x, const WeightFunction& phi);

/// P(Mbar_inf > x) = exp(-int_1^x dz/(z - psi(z))), x >= 1. With psi = 0 this
/// is 1/x, the classical maximal identity.
double survival_max(double x, const CeilingFunction& psi);

/// P(Mbar_inf < K) = (K - z)^+ / K for a nonnegative local martingale started
/// at z and vanishing at infinity.
double doob_start_z(double K, double z);

/// Exact sampler for the maximum of the exponential martingale: exp(E) with
/// E ~ Exp(1). Its survival function is survival_max with psi = 0.
double exact_doob_sample(RngStream& stream);

}  // namespace sigmalab

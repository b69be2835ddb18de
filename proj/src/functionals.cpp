#include "sigmalab/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sigmalab {

std::optional<std::size_t> first_crossing(const SigmaPath& p, const WeightFunction& phi) {
  for (std::size_t k = 0; k < p.x.size(); ++k) {
    if (phi(p.a[k]) * p.x[k] >= 1.0) return k;
  }
  return std::nullopt;
}

std::size_t last_zero_before(const SigmaPath& p, std::size_t cutoff) {
  cutoff = std::min(cutoff, p.x.size());
  if (!p.zero_indices.empty()) {
    // zero_indices ascending: last entry strictly below cutoff.
    auto it = std::lower_bound(p.zero_indices.begin(), p.zero_indices.end(), cutoff);
    if (it == p.zero_indices.begin()) return 0;
    return *std::prev(it);
  }
  const double eps = 0.5 * std::sqrt(p.dt);
  for (std::size_t k = cutoff; k-- > 0;) {
    if (p.x[k] <= eps) return k;
  }
  return 0;
}

double balayage_residual(const SigmaPath& p, const WeightFunction& phi) {
  double ito_sum = 0.0;
  double worst = 0.0;
  const std::size_t n = p.x.size();
  for (std::size_t k = 0; k < n; ++k) {
    const double lhs = phi(p.a[k]) * p.x[k];
    const double rhs = ito_sum + phi.antiderivative(p.a[k]);
    worst = std::max(worst, std::abs(lhs - rhs));
    if (k + 1 < n) ito_sum += phi(p.a[k]) * (p.n[k + 1] - p.n[k]);
  }
  return worst;
}

MultiplicativeResiduals multiplicative_check(const SigmaPath& p,
                                             const WeightFunction& phi,
                                             std::optional<std::size_t> t_index) {
  MultiplicativeTracker tracker(phi);
  const std::size_t stop = std::min(t_index.value_or(p.x.size() - 1), p.x.size() - 1);
  for (std::size_t k = 0; k <= stop; ++k) tracker.step(p.a[k], p.x[k]);
  return tracker.residuals();
}

std::vector<double> dual_projection_increment(const MartingalePath& mp,
                                              const CeilingFunction& psi) {
  std::vector<double> out(mp.m_max.size());
  double last_max = -1.0;
  double val = 0.0;
  for (std::size_t k = 0; k < mp.m_max.size(); ++k) {
    if (mp.m_max[k] != last_max) {
      last_max = mp.m_max[k];
      val = psi.survival_exponent(last_max);
    }
    out[k] = val;
  }
  return out;
}

}  // namespace sigmalab

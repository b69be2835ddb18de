#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

#include "sigmalab/functions.hpp"
#include "sigmalab/paths.hpp"

namespace sigmalab {

/// Smallest grid index k with phi(A_k) * X_k >= 1, absent if the path never
/// crosses.
std::optional<std::size_t> first_crossing(const SigmaPath& p, const WeightFunction& phi);

/// Largest zero index strictly before `cutoff`, with sup{} = 0: paths with no
/// zero before the cutoff return 0. Uses the structural zero set when the
/// generator provides one, otherwise a threshold scan at eps = 0.5*sqrt(dt).
std::size_t last_zero_before(const SigmaPath& p, std::size_t cutoff);

/// Max over k of |phi(A_k) X_k - (sum_{j<k} phi(A_j)(N_{j+1}-N_j) + Phi(A_k))|,
/// the discretized balayage representation of phi(A)X.
double balayage_residual(const SigmaPath& p, const WeightFunction& phi);

struct MultiplicativeResiduals {
  /// sup_k |max_{j<=k} Y_j - exp(Phi(A_k))| / exp(Phi(A_k))
  double max_rel_ybar = 0.0;
  /// sup_k |Y_k / max_{j<=k} Y_j - (1 - phi(A_k) X_k)|
  double max_ratio = 0.0;
};

/// Streaming form of the multiplicative decomposition check: feed (A_k, X_k)
/// in path order; Phi and exp(Phi) are recomputed only when A changes, which
/// on class-(Sigma) paths happens at zeros of X only.
class MultiplicativeTracker {
 public:
  explicit MultiplicativeTracker(const WeightFunction& phi) : phi_(&phi) {}

  void step(double a, double x) {
    if (a != last_a_) {
      last_a_ = a;
      phi_a_ = (*phi_)(a);
      exp_phi_ = std::exp(phi_->antiderivative(a));
    }
    const double q = x == 0.0 ? 1.0 : 1.0 - phi_a_ * x;
    const double y = q * exp_phi_;
    if (y > ymax_) ymax_ = y;
    const double r1 = std::abs(ymax_ - exp_phi_) / exp_phi_;
    if (r1 > res_.max_rel_ybar) res_.max_rel_ybar = r1;
    if (ymax_ > 0.0) {
      const double r2 = std::abs(y / ymax_ - q);
      if (r2 > res_.max_ratio) res_.max_ratio = r2;
    }
  }

  const MultiplicativeResiduals& residuals() const { return res_; }

 private:
  const WeightFunction* phi_;
  double last_a_ = std::numeric_limits<double>::quiet_NaN();
  double phi_a_ = 0.0;
  double exp_phi_ = 1.0;
  double ymax_ = 0.0;
  MultiplicativeResiduals res_;
};

/// Pathwise check of the multiplicative decomposition behind the Azema
/// supermartingale of the last zero: with Y = (1 - phi(A)X) exp(Phi(A)) on the
/// stopped path, the running maximum of Y must equal exp(Phi(A)) and Y over
/// its running maximum must equal 1 - phi(A)X. Exact (up to rounding) when A
/// increases only at exact zeros of X.
MultiplicativeResiduals multiplicative_check(const SigmaPath& p,
                                             const WeightFunction& phi,
                                             std::optional<std::size_t> t_index);

/// k -> int_1^{Mbar_k} dz/(z - psi(z)), the dual predictable projection of the
/// last-argmax indicator evaluated along the path. Nondecreasing in k.
std::vector<double> dual_projection_increment(const MartingalePath& mp,
                                              const CeilingFunction& psi);

}  // namespace sigmalab

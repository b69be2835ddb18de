#include "sigmalab/paths.hpp"

#include <algorithm>
#include <cmath>

namespace sigmalab {

std::vector<SigmaViolation> validate_sigma_path(const SigmaPath& p,
                                                const SigmaTolerances& tol) {
  std::vector<SigmaViolation> out;
  const std::size_t n = p.x.size();
  if (n == 0 || p.n.size() != n || p.a.size() != n) {
    out.push_back({"array-sizes", 0, 0.0});
    return out;
  }
  if (p.a[0] != 0.0) out.push_back({"a-starts-at-zero", 0, std::abs(p.a[0])});
  for (std::size_t k = 0; k < n; ++k) {
    if (p.x[k] < -tol.eps_num) {
      out.push_back({"x-nonnegative", k, -p.x[k]});
    }
    const double resid = std::abs(p.x[k] - (p.n[k] + p.a[k]));
    if (resid > tol.eps_decomp) {
      out.push_back({"decomposition", k, resid});
    }
    if (k > 0 && p.a[k] < p.a[k - 1]) {
      out.push_back({"a-nondecreasing", k, p.a[k - 1] - p.a[k]});
    }
  }
  // dA is carried by the zero set: an increment into index k requires k to be
  // a structural zero.
  for (std::size_t k = 1; k < n; ++k) {
    const double da = p.a[k] - p.a[k - 1];
    if (da > tol.increment_slack &&
        !std::binary_search(p.zero_indices.begin(), p.zero_indices.end(), k)) {
      out.push_back({"dA-carried-by-zeros", k, da});
    }
  }
  return out;
}

}  // namespace sigmalab

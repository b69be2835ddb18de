#include "sigmalab/process_gen.hpp"

namespace sigmalab {

std::pair<SigmaPath, WeightFunction> transform_max_ratio(const MartingalePath& mp,
                                                         const CeilingFunction& psi) {
  if (mp.m.empty() || mp.m[0] != 1.0) {
    throw std::invalid_argument("transform_max_ratio: path must start at 1");
  }
  SigmaPath p;
  p.dt = mp.dt;
  const std::size_t sz = mp.m.size();
  p.x.resize(sz);
  p.n.resize(sz);
  p.a.resize(sz);
  double ito = 0.0;
  for (std::size_t k = 0; k < sz; ++k) {
    const double mbar = mp.m_max[k];
    if (!(mbar > 0.0)) {
      throw std::invalid_argument("transform_max_ratio: running maximum must stay positive");
    }
    p.x[k] = 1.0 - mp.m[k] / mbar;
    p.a[k] = std::log(mbar);
    p.n[k] = ito;
    if (mp.m[k] == mbar) p.zero_indices.push_back(k);
    if (k + 1 < sz) ito -= (mp.m[k + 1] - mp.m[k]) / mbar;
  }
  return {std::move(p), psi.induced_weight()};
}

}  // namespace sigmalab

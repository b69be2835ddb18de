#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace sigmalab {

/// Discretized nonnegative local martingale with its running maximum.
/// If stop_index is set, values are frozen from that index on.
struct MartingalePath {
  std::vector<double> m;
  std::vector<double> m_max;
  std::optional<std::size_t> stop_index;
  bool truncated = false;
  double dt = 0.0;
  /// Gap |m - psi(m_max)| at the stop index (grid overshoot of the crossing).
  double stop_overshoot = 0.0;
};

/// Discretized path of a class-(Sigma) submartingale X = N + A together with
/// the indices where the generator knows X = 0 exactly (structural zeros).
struct SigmaPath {
  std::vector<double> x;
  std::vector<double> n;
  std::vector<double> a;
  std::vector<std::size_t> zero_indices;  // ascending
  double dt = 0.0;
};

/// Per-path extracted quantities.
struct PathFunctionals {
  std::optional<std::size_t> t_index;  // T = inf{t: phi(A_t) X_t >= 1}
  std::optional<std::size_t> g_index;  // last zero before T (or horizon)
  double a_at_t = 0.0;                 // A_T
  double max_terminal = 0.0;           // running max at stop/horizon
  bool stopped = false;
  bool truncated = false;
};

struct SigmaTolerances {
  double eps_num = 1e-12;     // nonnegativity slack (double-precision scale)
  double eps_decomp = 0.0;    // |x - (n+a)| slack; 0 for structural generators
  double increment_slack = 0.0;  // slack for "dA carried by zeros" (0: exact)
};

struct SigmaViolation {
  std::string invariant;
  std::size_t index = 0;
  double magnitude = 0.0;
};

/// Checks every SigmaPath invariant within the given tolerances and returns
/// one record per violation (empty means the path is clean). Violations are
/// data, not errors.
std::vector<SigmaViolation> validate_sigma_path(const SigmaPath& p,
                                                const SigmaTolerances& tol);

}  // namespace sigmalab

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace sigmalab {

/// Fully resolved configuration of one scenario run. Every field is echoed
/// into the report so a run can be reproduced from the report alone.
struct ExperimentConfig {
  std::string scenario = "theorem-max";
  std::size_t paths = 100000;
  double dt = 1e-4;
  double horizon = 2.0;  // H0; unstopped paths extend by doubling
  std::size_t max_doublings = 6;
  std::uint64_t seed = 42;
  double alpha = 0.01;
  double truncation_cap = 0.005;
  std::string phi = "const:1";
  std::string psi = "zero";
  std::vector<double> strikes = {0.8, 1.0, 1.2};
  double maturity = 1.0;
  std::size_t checkpoints = 10;
  /// Convergence floor for M -> 0 scenarios: a path counts as converged once
  /// M <= m_floor (the chance of any later max update or level crossing is
  /// below m_floor itself).
  double m_floor = 1e-3;
  /// Brownian-bridge correction for the psi-stop and the phi(A)X >= 1
  /// crossing (accuracy knob, off by default).
  bool bridge_correction = false;
  /// Brownian-bridge sampling of intra-step level crossings in the g_K
  /// detector (put-pricing / lemma scenarios). Sign changes alone undercount
  /// late grazes of the strike, which biases fraction{g_K <= t} upward by
  /// O(sqrt(dt)); bridge sampling makes the per-step crossing indicator exact
  /// in law.
  bool level_bridge = true;
  /// Pathwise multiplicative-decomposition residual tracking on every path.
  bool pathwise_checks = false;
  /// Balayage refinement study (prop-gT check (e)).
  bool refinement = false;
  /// Pointwise survival checks: x values and the absolute tolerance.
  std::vector<double> survival_points;
  double pointwise_tol = 0.012;
  /// Discretization bias allowances, calibrated per scenario by dt-refinement
  /// pilots; the applied allowance is coef * sqrt(dt).
  double ks_allowance_coef = 0.0;
  double cp_allowance_coef = 0.0;
  unsigned threads = 0;  // 0 = SIGMA_LAB_THREADS env or hardware

  std::map<std::string, std::string> echo() const;
};

/// Scenario names: lemma-representation, prop-gT, prop-gInf, theorem-max,
/// put-pricing.
ExperimentConfig scenario_defaults(const std::string& scenario);
std::vector<std::string> scenario_names();

/// Applies one "key = value" override (config-file schema) onto a config.
/// Throws std::invalid_argument for unknown keys or malformed values.
void apply_config_override(ExperimentConfig& cfg, const std::string& key,
                           const std::string& value);

struct CheckRecord {
  std::string name;
  double statistic = 0.0;
  double threshold = 0.0;
  double alpha = 0.0;  // confidence parameter of the band, 0 if not applicable
  std::string verdict;  // "pass" | "fail" | "inconclusive"
  std::string detail;
};

struct EcdfDump {
  std::string name;
  std::vector<double> sorted;
};

struct ExperimentReport {
  std::string scenario;
  std::map<std::string, std::string> config;
  std::uint64_t seed = 0;
  std::size_t paths_requested = 0;
  std::size_t paths_used = 0;
  std::size_t paths_truncated = 0;
  double excluded_fraction = 0.0;
  std::vector<CheckRecord> checks;
  std::vector<EcdfDump> ecdfs;
  std::string verdict;  // worst check verdict: pass < inconclusive < fail
  /// Wall-clock of the run; printed to the console but never serialized
  /// (report files must be byte-identical across reruns).
  double wall_ms = 0.0;
};

ExperimentReport run_lemma_representation(const ExperimentConfig& cfg);
ExperimentReport run_prop_gt(const ExperimentConfig& cfg);
ExperimentReport run_prop_ginf(const ExperimentConfig& cfg);
ExperimentReport run_theorem_max(const ExperimentConfig& cfg);
ExperimentReport run_put_pricing(const ExperimentConfig& cfg);

/// Dispatch on cfg.scenario.
ExperimentReport run_scenario(const ExperimentConfig& cfg);

/// One row of the per-path functional dump emitted by `simulate`:
/// stop/convergence time T, last zero (or argmax) time g, terminal A, and the
/// terminal running maximum.
struct FunctionalRow {
  double t = 0.0;
  double g = 0.0;
  double a_t = 0.0;
  double m_bar = 0.0;
  bool stopped = false;
  bool truncated = false;
};

/// Generators: "reflected" (phi-crossing stop, A = running max of B),
/// "exp-martingale" (convergence at m_floor, A = log Mbar), "psi-stopped".
std::vector<FunctionalRow> simulate_functionals(const std::string& generator,
                                                const ExperimentConfig& cfg);

/// Thread count resolution: explicit request, else SIGMA_LAB_THREADS, else
/// hardware concurrency (minimum 1).
unsigned resolve_threads(unsigned requested);

}  // namespace sigmalab

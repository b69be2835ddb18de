// sigma-lab: Monte Carlo verification harness for the distributional
// identities of nonnegative class-(Sigma) submartingales: maximal laws,
// last-passage laws, and the put-pricing representation.
//
// Subcommands:
//   verify <scenario|all>   run a scenario and write its report
//   law <max|aT|aInf|doob>  print closed-form survival values as CSV
//   simulate <generator>    dump per-path functionals as CSV

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sigmalab/experiments.hpp"
#include "sigmalab/functions.hpp"
#include "sigmalab/laws.hpp"
#include "sigmalab/report_io.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitInconclusive = 2;
constexpr int kExitUsage = 64;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<double> parse_double_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    tok = trim(tok);
    if (!tok.empty()) out.push_back(std::stod(tok));
  }
  return out;
}

void apply_key(sigmalab::ExperimentConfig& cfg, const std::string& key,
               const std::string& value) {
  sigmalab::apply_config_override(cfg, key, value);
}

// Plain-text config: "key = value" lines, '#' comments, one nesting level via
// "scenario.key = value".
std::map<std::string, std::string> load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read config file '" + path + "'");
  std::map<std::string, std::string> kv;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument(path + ":" + std::to_string(lineno) +
                                  ": expected 'key = value'");
    }
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return kv;
}

struct VerifyFlags {
  std::string config_path;
  std::string out_dir = "out";
  std::vector<std::string> sets;
  std::map<std::string, std::string> flag_values;  // pinned flags seen on the CLI
};

sigmalab::ExperimentConfig build_config(const std::string& scenario,
                                        const VerifyFlags& flags) {
  auto cfg = sigmalab::scenario_defaults(scenario);
  if (!flags.config_path.empty()) {
    const auto kv = load_config_file(flags.config_path);
    for (const auto& [k, v] : kv) {  // globals first
      if (k.find('.') == std::string::npos) apply_key(cfg, k, v);
    }
    const std::string prefix = scenario + ".";
    for (const auto& [k, v] : kv) {
      if (k.rfind(prefix, 0) == 0) apply_key(cfg, k.substr(prefix.size()), v);
    }
  }
  for (const auto& [k, v] : flags.flag_values) apply_key(cfg, k, v);
  for (const auto& s : flags.sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("--set expects key=value, got '" + s + "'");
    }
    apply_key(cfg, s.substr(0, eq), s.substr(eq + 1));
  }
  return cfg;
}

int verdict_exit(const std::string& verdict) {
  if (verdict == "pass") return kExitPass;
  if (verdict == "inconclusive") return kExitInconclusive;
  return kExitFail;
}

int cmd_verify(const std::string& scenario_arg, const VerifyFlags& flags) {
  std::vector<std::string> scenarios;
  if (scenario_arg == "all") {
    scenarios = sigmalab::scenario_names();
  } else {
    scenarios = {scenario_arg};
  }
  int exit_code = kExitPass;
  for (const auto& name : scenarios) {
    const auto cfg = build_config(name, flags);
    const auto rep = sigmalab::run_scenario(cfg);
    for (const auto& c : rep.checks) {
      const char* tag = c.verdict == "pass"           ? "PASS"
                        : c.verdict == "inconclusive" ? "INCONCLUSIVE"
                                                      : "FAIL";
      std::printf("%s: [%s] %s statistic=%.6g threshold=%.6g%s%s\n", name.c_str(),
                  tag, c.name.c_str(), c.statistic, c.threshold,
                  c.detail.empty() ? "" : " ", c.detail.c_str());
    }
    const auto path = sigmalab::write_report_files(rep, flags.out_dir);
    std::fprintf(stderr, "%s: verdict %s, report %s (%.1f s)\n", name.c_str(),
                 rep.verdict.c_str(), path.c_str(), rep.wall_ms / 1000.0);
    exit_code = std::max(exit_code, verdict_exit(rep.verdict));
  }
  return exit_code;
}

int cmd_law(const std::string& law, const std::string& phi_spec,
            const std::string& psi_spec, const std::vector<double>& xs, double K) {
  for (double x : xs) {
    double v = 0.0;
    if (law == "max") {
      v = sigmalab::survival_max(x, sigmalab::CeilingFunction::parse(psi_spec));
    } else if (law == "aT") {
      v = sigmalab::survival_a_t(x, sigmalab::WeightFunction::parse(phi_spec));
    } else if (law == "aInf") {
      v = sigmalab::survival_a_inf(x, sigmalab::WeightFunction::parse(phi_spec));
    } else if (law == "doob") {
      v = sigmalab::doob_start_z(K, x);
    } else {
      throw std::invalid_argument("unknown law '" + law + "'");
    }
    std::printf("%.10g,%.10g\n", x, v);
  }
  return kExitPass;
}

int cmd_simulate(const std::string& generator, const sigmalab::ExperimentConfig& cfg,
                 const std::string& out_path) {
  const auto rows = sigmalab::simulate_functionals(generator, cfg);
  std::FILE* out = out_path == "-" ? stdout : std::fopen(out_path.c_str(), "wb");
  if (!out) {
    std::fprintf(stderr, "error: cannot write '%s'\n", out_path.c_str());
    return kExitFail;
  }
  std::fprintf(out, "path,T,g,A_T,M_bar,stopped,truncated\n");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    std::fprintf(out, "%zu,%.17g,%.17g,%.17g,%.17g,%d,%d\n", i, r.t, r.g, r.a_t,
                 r.m_bar, r.stopped ? 1 : 0, r.truncated ? 1 : 0);
  }
  if (out != stdout) std::fclose(out);
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monte Carlo verification harness for class-(Sigma) submartingale identities"};
  app.require_subcommand(1);

  // --- verify ---
  auto* verify = app.add_subcommand("verify", "run a verification scenario");
  std::string scenario;
  VerifyFlags vflags;
  std::map<std::string, std::string> flag_kv;
  verify->add_option("scenario", scenario,
                     "lemma-representation | prop-gT | prop-gInf | theorem-max | "
                     "put-pricing | all")
      ->required();
  verify->add_option("--config", vflags.config_path, "config file (key = value)");
  verify->add_option("--out-dir", vflags.out_dir, "report output directory");
  verify->add_option("--set", vflags.sets, "extra key=value override (repeatable)");
  // Pinned flags; they win over config-file values.
  std::string f_paths, f_dt, f_horizon, f_seed, f_cap, f_alpha, f_phi, f_psi;
  bool f_bridge = false;
  verify->add_option("--paths", f_paths, "number of paths");
  verify->add_option("--dt", f_dt, "grid step");
  verify->add_option("--horizon", f_horizon, "base horizon H0");
  verify->add_option("--seed", f_seed, "master RNG seed");
  verify->add_flag("--bridge-correction", f_bridge,
                   "Brownian-bridge crossing correction for stops");
  verify->add_option("--truncation-cap", f_cap, "max tolerated truncated fraction");
  verify->add_option("--alpha", f_alpha, "confidence parameter per check");
  verify->add_option("--phi", f_phi, "weight function spec (e.g. const:1)");
  verify->add_option("--psi", f_psi, "ceiling function spec (e.g. zero, prop:0.5)");

  // --- law ---
  auto* law = app.add_subcommand("law", "print survival-law values as CSV");
  std::string law_name, law_phi = "const:1", law_psi = "zero", law_x = "1";
  double law_k = 1.0;
  law->add_option("name", law_name, "max | aT | aInf | doob")->required();
  law->add_option("--phi", law_phi, "weight function spec");
  law->add_option("--psi", law_psi, "ceiling function spec");
  law->add_option("--x", law_x, "comma-separated evaluation points");
  law->add_option("--K", law_k, "strike/barrier for the doob law");

  // --- simulate ---
  auto* sim = app.add_subcommand("simulate", "dump per-path functionals as CSV");
  std::string gen_name, sim_out = "-";
  std::map<std::string, std::string> sim_kv;
  std::string s_paths, s_dt, s_horizon, s_seed, s_phi, s_psi, s_floor;
  sim->add_option("generator", gen_name, "reflected | exp-martingale | psi-stopped")
      ->required();
  sim->add_option("--paths", s_paths, "number of paths");
  sim->add_option("--dt", s_dt, "grid step");
  sim->add_option("--horizon", s_horizon, "base horizon H0");
  sim->add_option("--seed", s_seed, "master RNG seed");
  sim->add_option("--phi", s_phi, "weight function spec");
  sim->add_option("--psi", s_psi, "ceiling function spec");
  sim->add_option("--m-floor", s_floor, "convergence floor for exp-martingale");
  sim->add_option("--out", sim_out, "output CSV path ('-' = stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitPass : kExitUsage;
  }

  try {
    if (verify->parsed()) {
      if (!f_paths.empty()) vflags.flag_values["paths"] = f_paths;
      if (!f_dt.empty()) vflags.flag_values["dt"] = f_dt;
      if (!f_horizon.empty()) vflags.flag_values["horizon"] = f_horizon;
      if (!f_seed.empty()) vflags.flag_values["seed"] = f_seed;
      if (!f_cap.empty()) vflags.flag_values["truncation-cap"] = f_cap;
      if (!f_alpha.empty()) vflags.flag_values["alpha"] = f_alpha;
      if (!f_phi.empty()) vflags.flag_values["phi"] = f_phi;
      if (!f_psi.empty()) vflags.flag_values["psi"] = f_psi;
      if (f_bridge) vflags.flag_values["bridge-correction"] = "true";
      if (scenario != "all") {
        const auto names = sigmalab::scenario_names();
        if (std::find(names.begin(), names.end(), scenario) == names.end()) {
          std::fprintf(stderr, "error: unknown scenario '%s'\n", scenario.c_str());
          return kExitUsage;
        }
      }
      return cmd_verify(scenario, vflags);
    }
    if (law->parsed()) {
      return cmd_law(law_name, law_phi, law_psi, parse_double_list(law_x), law_k);
    }
    if (sim->parsed()) {
      auto cfg = sigmalab::scenario_defaults(
          gen_name == "reflected" ? "prop-gT" : "theorem-max");
      cfg.paths = 10;
      if (!s_paths.empty()) apply_key(cfg, "paths", s_paths);
      if (!s_dt.empty()) apply_key(cfg, "dt", s_dt);
      if (!s_horizon.empty()) apply_key(cfg, "horizon", s_horizon);
      if (!s_seed.empty()) apply_key(cfg, "seed", s_seed);
      if (!s_phi.empty()) apply_key(cfg, "phi", s_phi);
      if (!s_psi.empty()) apply_key(cfg, "psi", s_psi);
      if (!s_floor.empty()) apply_key(cfg, "m-floor", s_floor);
      return cmd_simulate(gen_name, cfg, sim_out);
    }
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitFail;
  }
  return kExitUsage;
}

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <string>
#include <vector>

#include "sigmalab/experiments.hpp"
#include "sigmalab/functions.hpp"
#include "sigmalab/laws.hpp"
#include "sigmalab/process_gen.hpp"
#include "sigmalab/report_io.hpp"
#include "sigmalab/rng.hpp"
#include "sigmalab/stats.hpp"

namespace py = pybind11;

namespace {

sigmalab::ExperimentConfig make_config(
    const std::string& scenario,
    const std::map<std::string, std::string>& overrides) {
  auto cfg = sigmalab::scenario_defaults(scenario);
  for (const auto& [k, v] : overrides) sigmalab::apply_config_override(cfg, k, v);
  return cfg;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Monte Carlo verification harness for class-(Sigma) submartingale identities";

  m.def(
      "survival_max",
      [](double x, const std::string& psi) {
        return sigmalab::survival_max(x, sigmalab::CeilingFunction::parse(psi));
      },
      py::arg("x"), py::arg("psi") = "zero",
      "P(Mbar_inf > x) for a martingale with M_inf = psi(Mbar_inf)");

  m.def(
      "survival_a_t",
      [](double x, const std::string& phi) {
        return sigmalab::survival_a_t(x, sigmalab::WeightFunction::parse(phi));
      },
      py::arg("x"), py::arg("phi") = "const:1",
      "P(A_T > x) for the stop T = inf{t: phi(A_t) X_t >= 1}");

  m.def(
      "survival_a_inf",
      [](double x, const std::string& phi) {
        return sigmalab::survival_a_inf(x, sigmalab::WeightFunction::parse(phi));
      },
      py::arg("x"), py::arg("phi") = "const:1",
      "P(A_inf > x) for stopped paths with X_inf = phi(A_inf)");

  m.def("doob_start_z", &sigmalab::doob_start_z, py::arg("K"), py::arg("z"),
        "P(Mbar_inf < K) for a martingale started at z, vanishing at infinity");

  m.def("dkw_threshold", &sigmalab::dkw_threshold, py::arg("n"), py::arg("alpha"));

  m.def(
      "exact_doob_samples",
      [](std::size_t n, std::uint64_t seed) {
        std::vector<double> out(n);
        for (std::size_t i = 0; i < n; ++i) {
          sigmalab::RngStream s(seed, i);
          out[i] = sigmalab::exact_doob_sample(s);
        }
        return out;
      },
      py::arg("n"), py::arg("seed") = 42,
      "n independent draws of exp(E), E ~ Exp(1)");

  m.def(
      "ks_against_survival",
      [](std::vector<double> samples, const std::string& law, const std::string& spec) {
        const auto emp = sigmalab::EmpiricalLaw::from_samples(std::move(samples));
        if (law == "max") {
          const auto psi = sigmalab::CeilingFunction::parse(spec);
          return sigmalab::ks_against(emp, [&](double x) {
            return sigmalab::survival_max(x < 1.0 ? 1.0 : x, psi);
          });
        }
        if (law == "aT") {
          const auto phi = sigmalab::WeightFunction::parse(spec);
          return sigmalab::ks_against(emp, [&](double x) {
            return sigmalab::survival_a_t(x < 0.0 ? 0.0 : x, phi);
          });
        }
        if (law == "aInf") {
          const auto phi = sigmalab::WeightFunction::parse(spec);
          return sigmalab::ks_against(emp, [&](double x) {
            return sigmalab::survival_a_inf(x < 0.0 ? 0.0 : x, phi);
          });
        }
        throw std::invalid_argument("law must be max, aT or aInf");
      },
      py::arg("samples"), py::arg("law"), py::arg("spec"),
      "KS distance between samples and a catalog survival law");

  m.def(
      "run_experiment_json",
      [](const std::string& scenario,
         const std::map<std::string, std::string>& overrides) {
        return sigmalab::report_to_json(
            sigmalab::run_scenario(make_config(scenario, overrides)));
      },
      py::arg("scenario"), py::arg("overrides") = std::map<std::string, std::string>{},
      "Run a scenario and return its report as a JSON string");

  m.def(
      "simulate_functionals",
      [](const std::string& generator,
         const std::map<std::string, std::string>& overrides) {
        const std::string base =
            generator == "reflected" ? "prop-gT" : "theorem-max";
        auto cfg = sigmalab::scenario_defaults(base);
        cfg.paths = 100;
        for (const auto& [k, v] : overrides) sigmalab::apply_config_override(cfg, k, v);
        const auto rows = sigmalab::simulate_functionals(generator, cfg);
        std::map<std::string, std::vector<double>> cols;
        auto& t = cols["T"];
        auto& g = cols["g"];
        auto& a = cols["A_T"];
        auto& mb = cols["M_bar"];
        auto& st = cols["stopped"];
        auto& tr = cols["truncated"];
        for (const auto& r : rows) {
          t.push_back(r.t);
          g.push_back(r.g);
          a.push_back(r.a_t);
          mb.push_back(r.m_bar);
          st.push_back(r.stopped ? 1.0 : 0.0);
          tr.push_back(r.truncated ? 1.0 : 0.0);
        }
        return cols;
      },
      py::arg("generator"), py::arg("overrides") = std::map<std::string, std::string>{},
      "Per-path functionals (T, g, A_T, M_bar) as columns");

  m.def("scenario_names", &sigmalab::scenario_names);

  m.def(
      "default_config",
      [](const std::string& scenario) {
        return sigmalab::scenario_defaults(scenario).echo();
      },
      py::arg("scenario"));
}

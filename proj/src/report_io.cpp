#include "sigmalab/report_io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace sigmalab {

namespace {

std::string csv_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::string report_to_json(const ExperimentReport& rep) {
  nlohmann::ordered_json j;
  j["scenario"] = rep.scenario;
  j["seed"] = rep.seed;
  j["config"] = rep.config;  // std::map: keys come out sorted
  j["paths"] = {{"requested", rep.paths_requested},
                {"used", rep.paths_used},
                {"truncated", rep.paths_truncated},
                {"excluded_fraction", rep.excluded_fraction}};
  nlohmann::ordered_json checks = nlohmann::ordered_json::array();
  for (const auto& c : rep.checks) {
    nlohmann::ordered_json jc;
    jc["name"] = c.name;
    jc["statistic"] = c.statistic;
    jc["threshold"] = c.threshold;
    jc["alpha"] = c.alpha;
    jc["verdict"] = c.verdict;
    jc["detail"] = c.detail;
    checks.push_back(std::move(jc));
  }
  j["checks"] = std::move(checks);
  nlohmann::ordered_json files = nlohmann::ordered_json::array();
  for (const auto& e : rep.ecdfs) {
    files.push_back(rep.scenario + "." + e.name + ".ecdf.csv");
  }
  j["ecdf_files"] = std::move(files);
  j["verdict"] = rep.verdict;
  return j.dump(2) + "\n";
}

std::string write_report_files(const ExperimentReport& rep, const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  const fs::path report_path = fs::path(out_dir) / (rep.scenario + ".report.json");
  {
    std::ofstream out(report_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + report_path.string());
    out << report_to_json(rep);
  }
  for (const auto& e : rep.ecdfs) {
    const fs::path p = fs::path(out_dir) / (rep.scenario + "." + e.name + ".ecdf.csv");
    std::ofstream out(p, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    out << "value,ecdf\n";
    const double n = static_cast<double>(e.sorted.size());
    for (std::size_t i = 0; i < e.sorted.size(); ++i) {
      out << csv_double(e.sorted[i]) << ","
          << csv_double(static_cast<double>(i + 1) / n) << "\n";
    }
  }
  return report_path.string();
}

}  // namespace sigmalab

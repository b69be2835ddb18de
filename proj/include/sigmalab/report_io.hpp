#pragma once

#include <string>

#include "sigmalab/experiments.hpp"

namespace sigmalab {

/// Deterministic JSON rendering of a report. Wall-clock time is intentionally
/// omitted: report bytes must reproduce exactly under a fixed seed.
std::string report_to_json(const ExperimentReport& rep);

/// Writes <out_dir>/<scenario>.report.json plus one
/// <out_dir>/<scenario>.<name>.ecdf.csv file per law check. Creates out_dir
/// if needed and returns the report path. Throws on I/O failure.
std::string write_report_files(const ExperimentReport& rep, const std::string& out_dir);

}  // namespace sigmalab

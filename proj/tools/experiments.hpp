#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "experiment_config.hpp"
#include "hlab/frame.hpp"

namespace hlab::cli {

struct RunResult {
  nlohmann::ordered_json report;
  nlohmann::ordered_json monitors;  // decay / closure / blow_up flags
  std::vector<std::string> outputs; // file names relative to the output dir
  std::string summary;              // human-readable table for stdout
};

/// Checks module preconditions (stability bounds on every grid the run will
/// use, initial-data file shape) without writing anything. Throws ConfigError.
void precheck(const ExperimentConfig& cfg);

/// Runs the experiment and writes its series_*.csv and report.json into dir.
RunResult run_experiment(const ExperimentConfig& cfg, const std::filesystem::path& dir);

/// Initial data as a sphere map / as q on the given grid.
SphereField initial_map(const ExperimentConfig& cfg, const Grid1D& g);
ComplexField initial_profile(const ExperimentConfig& cfg, const Grid1D& g);

}  // namespace hlab::cli

#pragma once

// Flat key = value experiment configuration for hasimoto-lab.
//
// Resolution order: per-experiment defaults, then the config file, then
// --set overrides, then --seed. Every key is validated before anything runs;
// all problems are reported together.

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "hlab/field_core.hpp"

namespace hlab::cli {

inline const std::vector<std::string>& experiment_kinds() {
  static const std::vector<std::string> kinds{"llg",   "heat",     "crosscheck", "identities",
                                              "sllg",  "holonomy", "covariance"};
  return kinds;
}

bool is_experiment(const std::string& kind);

struct ExperimentInfo {
  std::string kind;
  std::string summary;
  std::string module;  // library module that carries the check
};

const std::vector<ExperimentInfo>& experiment_catalog();

/// Defaults for one experiment kind, as strings.
std::map<std::string, std::string> default_values(const std::string& kind);

/// Every recognised key with a one-line description.
const std::map<std::string, std::string>& key_help();

/// Parses "key = value" lines; '#' starts a comment. Throws ConfigError with
/// the offending line numbers.
std::map<std::string, std::string> parse_config_text(const std::string& text,
                                                     const std::string& origin = "config");
std::map<std::string, std::string> read_config_file(const std::string& path);

/// Splits "key=value"; throws ConfigError if there is no '='.
std::pair<std::string, std::string> parse_assignment(const std::string& s);

enum class InitKind { great_circle, twist, wobbly, zero, file };

struct ExperimentConfig {
  std::string experiment;
  DomainSpec domain;
  std::size_t n = 0;
  std::size_t basepoint = 0;
  double alpha = 1.0;
  double beta = 1.0;
  double dt = 1e-3;
  double t_end = 0.1;
  std::size_t output_stride = 1;
  std::string form = "expanded";
  double eps_rel = 1e-8;

  InitKind init = InitKind::twist;
  double k = 1.0;
  double twist_amplitude = 1.0, twist_width = 1.0, twist_center = 0.0, twist_twist = 0.5,
         twist_floor = 1e-7;
  double wobble = 0.4, wobble_shift = 0.3;
  std::string init_file;

  std::uint64_t seed = 1;
  std::size_t noise_modes = 4;
  double noise_decay = 0.0;
  std::size_t paths = 100;
  unsigned threads = 0;

  std::vector<std::size_t> refinements;
  std::vector<unsigned> levels;
  std::vector<std::size_t> trend_modes;
  double holonomy_dt_over_h = 0.125;
  std::size_t holonomy_intervals = 4;

  std::map<std::string, std::string> resolved;  // the full key set, as strings
};

/// Builds and validates the typed config. Throws ConfigError listing every
/// violated precondition.
ExperimentConfig resolve_config(const std::string& experiment,
                                const std::map<std::string, std::string>& file_values,
                                const std::vector<std::pair<std::string, std::string>>& overrides,
                                const std::string* seed_override);

}  // namespace hlab::cli

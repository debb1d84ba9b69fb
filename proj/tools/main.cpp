// hasimoto-lab <experiment> [--config FILE] [--set key=value ...] [--out DIR] [--seed N]

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "experiment_config.hpp"
#include "experiments.hpp"
#include "hlab/errors.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace hlab;
using namespace hlab::cli;

namespace {

constexpr int kExitOther = 1;
constexpr int kExitConfig = 2;
constexpr int kExitBlowUp = 3;

std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream s;
  s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return s.str();
}

fs::path output_dir(const std::string& out, const std::string& experiment) {
  if (!out.empty()) return out;
  if (const char* root = std::getenv("HASIMOTO_LAB_OUT"); root && *root)
    return fs::path(root) / experiment;
  return fs::path("hasimoto-lab-out") / experiment;
}

void write_manifest(const fs::path& dir, const json& m) {
  std::ofstream out(dir / "manifest.json");
  out << m.dump(2) << '\n';
}

void print_catalog() {
  for (const auto& e : experiment_catalog()) {
    std::cout << std::left << std::setw(12) << e.kind << std::setw(14) << e.module << e.summary
              << '\n';
    const auto d = default_values(e.kind);
    std::cout << "            defaults:";
    for (const char* key : {"domain", "n", "dt", "t_end", "init", "paths", "refinements"})
      std::cout << ' ' << key << '=' << d.at(key);
    std::cout << '\n';
  }
}

// Files already written when a run fails part way.
std::vector<std::string> partial_outputs(const fs::path& dir) {
  std::vector<std::string> names;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.path().filename() != "manifest.json") names.push_back(entry.path().filename().string());
  std::sort(names.begin(), names.end());
  return names;
}

void print_keys() {
  for (const auto& [k, v] : key_help()) std::cout << std::left << std::setw(20) << k << v << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hasimoto-lab: numerical experiments for the Hasimoto transform of (S)LLG"};
  app.set_version_flag("--version", HLAB_VERSION);
  std::string experiment, config_file, out, seed;
  std::vector<std::string> sets;
  bool list = false, keys = false;
  app.add_option("experiment", experiment, "experiment kind (see --list)");
  app.add_option("--config", config_file, "key = value config file");
  app.add_option("--set", sets, "override one key (repeatable)")->take_all();
  app.add_option("--out", out, "output directory (default $HASIMOTO_LAB_OUT/<experiment>)");
  app.add_option("--seed", seed, "master seed for stochastic experiments");
  app.add_flag("--list", list, "list experiments and exit");
  app.add_flag("--keys", keys, "list configuration keys and exit");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }
  if (list || experiment == "list-experiments") {
    print_catalog();
    return 0;
  }
  if (keys) {
    print_keys();
    return 0;
  }

  ExperimentConfig cfg;
  try {
    std::map<std::string, std::string> file_values;
    if (!config_file.empty()) file_values = read_config_file(config_file);
    std::vector<std::pair<std::string, std::string>> overrides;
    for (const auto& s : sets) overrides.push_back(parse_assignment(s));
    cfg = resolve_config(experiment, file_values, overrides, seed.empty() ? nullptr : &seed);
    precheck(cfg);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error:\n" << e.what() << '\n';
    return kExitConfig;
  } catch (const PreconditionError& e) {
    std::cerr << "configuration error:\n" << e.what() << '\n';
    return kExitConfig;
  }

  const fs::path dir = output_dir(out, cfg.experiment);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    std::cerr << "cannot create output directory " << dir << ": " << ec.message() << '\n';
    return kExitOther;
  }

  json resolved = json::object();
  for (const auto& [k, v] : cfg.resolved) resolved[k] = v;
  json manifest = {{"tool", "hasimoto-lab"},
                   {"version", HLAB_VERSION},
                   {"experiment", cfg.experiment},
                   {"seed", cfg.seed},
                   {"config", resolved},
                   {"started", utc_now()},
                   {"status", "running"}};
  write_manifest(dir, manifest);

  const auto t0 = std::chrono::steady_clock::now();
  int rc = 0;
  RunResult res;
  try {
    res = run_experiment(cfg, dir);
    manifest["status"] = "complete";
    manifest["monitors"] = res.monitors;
  } catch (const BlowUpError& e) {
    manifest["status"] = "failed";
    manifest["error"] = e.what();
    manifest["monitors"] = {{"blow_up", true}, {"blow_up_time", e.time()}, {"blow_up_step", e.step()}};
    std::cerr << "blow-up at t = " << e.time() << " (step " << e.step() << "): " << e.what() << '\n';
    rc = kExitBlowUp;
  } catch (const ConfigError& e) {
    manifest["status"] = "failed";
    manifest["error"] = e.what();
    std::cerr << "configuration error:\n" << e.what() << '\n';
    rc = kExitConfig;
  } catch (const std::exception& e) {
    manifest["status"] = "failed";
    manifest["error"] = e.what();
    std::cerr << "error: " << e.what() << '\n';
    rc = kExitOther;
  }
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  manifest["wall_clock_seconds"] = wall;
  if (rc == 0) {
    manifest["outputs"] = res.outputs;
  } else {
    manifest["incomplete"] = true;
    manifest["outputs"] = partial_outputs(dir);
  }
  write_manifest(dir, manifest);

  if (rc == 0) {
    std::cout << res.summary;
    std::cout << "wrote " << res.outputs.size() + 1 << " files to " << dir.string() << '\n';
  }
  return rc;
}

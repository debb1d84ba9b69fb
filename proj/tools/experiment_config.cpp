#include "experiment_config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "hlab/errors.hpp"

namespace hlab::cli {

bool is_experiment(const std::string& kind) {
  const auto& k = experiment_kinds();
  return std::find(k.begin(), k.end(), kind) != k.end();
}

const std::vector<ExperimentInfo>& experiment_catalog() {
  static const std::vector<ExperimentInfo> cat{
      {"llg", "integrate the deterministic LLG equation; energy and |u| drift series", "llg_solver"},
      {"heat", "integrate the nonlocal heat equation for q; mass and decay monitor series", "heat_solver"},
      {"crosscheck", "H(u(t)) against q(t) from matched data over a refinement ladder", "validation"},
      {"identities", "pointwise curvature/torsion identities over a refinement ladder", "validation"},
      {"sllg", "stochastic LLG via the heat equation; one path plus the weak residual ensemble", "stochastic"},
      {"holonomy", "space-time frame holonomy for a heat solution and for frozen q", "validation"},
      {"covariance", "Monte Carlo covariance of W~ against the frame formula", "validation"},
  };
  return cat;
}

namespace {

const std::string kTwoPi = "6.283185307179586";

std::map<std::string, std::string> common_defaults() {
  return {{"domain", "line"},
          {"x_min", "-25"},
          {"x_max", "25"},
          {"n", "256"},
          {"basepoint", "0"},
          {"alpha", "1"},
          {"beta", "1"},
          {"dt", "0.001"},
          {"t_end", "0.1"},
          {"output_stride", "10"},
          {"form", "expanded"},
          {"eps_rel", "1e-8"},
          {"init", "twist"},
          {"k", "1"},
          {"twist_amplitude", "1"},
          {"twist_width", "1"},
          {"twist_center", "0"},
          {"twist_twist", "0.5"},
          {"twist_floor", "1e-7"},
          {"wobble", "0.4"},
          {"wobble_shift", "0.3"},
          {"init_file", ""},
          {"seed", "1"},
          {"noise_modes", "4"},
          {"noise_decay", "0"},
          {"paths", "100"},
          {"threads", "0"},
          {"refinements", "128,256,512"},
          {"levels", "4,2,1"},
          {"trend_modes", ""},
          {"holonomy_dt_over_h", "0.125"},
          {"holonomy_intervals", "4"}};
}

}  // namespace

std::map<std::string, std::string> default_values(const std::string& kind) {
  auto d = common_defaults();
  auto circle = [&](const std::string& n) {
    d["domain"] = "periodic";
    d["x_min"] = "0";
    d["x_max"] = kTwoPi;
    d["n"] = n;
  };
  if (kind == "identities") {
    circle("64");
    d["init"] = "wobbly";
    d["refinements"] = "32,64,128,256";
  } else if (kind == "sllg") {
    circle("64");
    d["init"] = "zero";
    d["dt"] = "0.0004";
    d["t_end"] = "0.064";
    d["paths"] = "1000";
  } else if (kind == "covariance") {
    circle("64");
    d["init"] = "great_circle";
    d["k"] = "0.5";
    d["t_end"] = "0.05";
    d["paths"] = "2000";
    d["trend_modes"] = "1,4,16";
  }
  d["experiment"] = kind;
  return d;
}

const std::map<std::string, std::string>& key_help() {
  static const std::map<std::string, std::string> help{
      {"experiment", "experiment kind (llg heat crosscheck identities sllg holonomy covariance)"},
      {"domain", "periodic (circle) or line"},
      {"x_min", "left end / origin of the domain"},
      {"x_max", "right end; circumference = x_max - x_min on a circle"},
      {"n", "number of grid nodes"},
      {"basepoint", "node index of the basepoint a (line grids: must be 0)"},
      {"alpha", "damping coefficient, >= 0"},
      {"beta", "precession coefficient"},
      {"dt", "time step (finest step for sllg); must satisfy dt <= 0.2 h^2 / max(alpha, |beta|)"},
      {"t_end", "final time"},
      {"output_stride", "record every k-th step in time series"},
      {"form", "heat equation form: expanded or compact"},
      {"eps_rel", "relative curvature threshold for the torsion mask"},
      {"init", "initial data: great_circle, twist, wobbly, zero, file"},
      {"k", "great-circle speed (q = k)"},
      {"twist_amplitude", "localized twist amplitude"},
      {"twist_width", "localized twist width"},
      {"twist_center", "localized twist center"},
      {"twist_twist", "localized twist phase amplitude"},
      {"twist_floor", "constant curvature floor of the localized twist"},
      {"wobble", "wobbly loop latitude amplitude"},
      {"wobble_shift", "wobbly loop phase shift"},
      {"init_file", "CSV of initial data: 3 columns (u) or 2 columns (Re q, Im q), one row per node"},
      {"seed", "master seed; stream seeds are derived from (seed, purpose, index)"},
      {"noise_modes", "number L of Fourier noise modes"},
      {"noise_decay", "c_l = l^(-noise_decay)"},
      {"paths", "ensemble size"},
      {"threads", "worker threads for ensembles (0: hardware)"},
      {"refinements", "comma-separated grid sizes for refinement studies"},
      {"levels", "comma-separated dt multipliers (coarse first) for the weak residual"},
      {"trend_modes", "comma-separated L values for the white-noise trend (covariance)"},
      {"holonomy_dt_over_h", "holonomy path sampling interval divided by h"},
      {"holonomy_intervals", "number of time intervals in each holonomy path"},
  };
  return help;
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::pair<std::string, std::string> parse_assignment(const std::string& s) {
  const auto eq = s.find('=');
  if (eq == std::string::npos) throw ConfigError("expected key=value, got '" + s + "'");
  std::string key = trim(s.substr(0, eq));
  if (key.empty()) throw ConfigError("empty key in '" + s + "'");
  return {key, trim(s.substr(eq + 1))};
}

std::map<std::string, std::string> parse_config_text(const std::string& text,
                                                     const std::string& origin) {
  std::map<std::string, std::string> out;
  std::istringstream in(text);
  std::string line;
  std::ostringstream errors;
  for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    try {
      auto [k, v] = parse_assignment(line);
      out[k] = v;
    } catch (const ConfigError& e) {
      errors << origin << ":" << lineno << ": " << e.what() << "; ";
    }
  }
  if (!errors.str().empty()) throw ConfigError(errors.str());
  return out;
}

std::map<std::string, std::string> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), path);
}

namespace {

class Reader {
 public:
  explicit Reader(const std::map<std::string, std::string>& v) : v_(v) {}

  std::string str(const std::string& key) const { return v_.at(key); }

  double real(const std::string& key) {
    const std::string s = v_.at(key);
    double x = 0.0;
    const auto r = std::from_chars(s.data(), s.data() + s.size(), x);
    if (s.empty() || r.ec != std::errc() || r.ptr != s.data() + s.size() || !std::isfinite(x)) {
      fail(key + " = '" + s + "' is not a finite number");
      return 0.0;
    }
    return x;
  }

  std::uint64_t uint(const std::string& key) { return parse_uint(key, v_.at(key)); }

  template <class T>
  std::vector<T> list(const std::string& key) {
    std::vector<T> out;
    std::stringstream ss(v_.at(key));
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      if (!item.empty()) out.push_back(static_cast<T>(parse_uint(key, item)));
    }
    return out;
  }

  void fail(const std::string& msg) { errors_.push_back(msg); }
  const std::vector<std::string>& errors() const { return errors_; }

 private:
  std::uint64_t parse_uint(const std::string& key, const std::string& s) {
    std::uint64_t x = 0;
    const auto r = std::from_chars(s.data(), s.data() + s.size(), x);
    if (s.empty() || r.ec != std::errc() || r.ptr != s.data() + s.size()) {
      fail(key + " = '" + s + "' is not a non-negative integer");
      return 0;
    }
    return x;
  }

  const std::map<std::string, std::string>& v_;
  std::vector<std::string> errors_;
};

}  // namespace

ExperimentConfig resolve_config(const std::string& experiment,
                                const std::map<std::string, std::string>& file_values,
                                const std::vector<std::pair<std::string, std::string>>& overrides,
                                const std::string* seed_override) {
  std::string kind = experiment;
  if (kind.empty()) {
    auto it = file_values.find("experiment");
    if (it != file_values.end()) kind = it->second;
  }
  for (const auto& [k, v] : overrides)
    if (k == "experiment" && kind.empty()) kind = v;
  if (kind.empty()) throw ConfigError("missing required field: experiment");
  if (!is_experiment(kind)) throw ConfigError("unknown experiment '" + kind + "'");

  std::map<std::string, std::string> values = default_values(kind);
  std::vector<std::string> errors;
  auto apply = [&](const std::string& k, const std::string& v, const std::string& origin) {
    if (!key_help().count(k)) {
      errors.push_back("unknown key '" + k + "' (" + origin + ")");
      return;
    }
    if (k == "experiment" && v != kind) {
      errors.push_back("experiment '" + v + "' (" + origin + ") conflicts with '" + kind + "'");
      return;
    }
    values[k] = v;
  };
  for (const auto& [k, v] : file_values) apply(k, v, "config file");
  for (const auto& [k, v] : overrides) apply(k, v, "--set");
  if (seed_override) values["seed"] = *seed_override;

  ExperimentConfig c;
  c.experiment = kind;
  Reader r(values);
  for (const auto& e : errors) r.fail(e);

  const std::string domain = r.str("domain");
  const double x_min = r.real("x_min");
  const double x_max = r.real("x_max");
  if (domain == "periodic")
    c.domain = DomainSpec::periodic(x_max - x_min, x_min);
  else if (domain == "line")
    c.domain = DomainSpec::line(x_min, x_max);
  else
    r.fail("domain must be 'periodic' or 'line', got '" + domain + "'");
  if (!(x_max > x_min)) r.fail("x_max must exceed x_min");

  c.n = r.uint("n");
  c.basepoint = r.uint("basepoint");
  c.alpha = r.real("alpha");
  c.beta = r.real("beta");
  c.dt = r.real("dt");
  c.t_end = r.real("t_end");
  c.output_stride = r.uint("output_stride");
  c.form = r.str("form");
  c.eps_rel = r.real("eps_rel");
  c.k = r.real("k");
  c.twist_amplitude = r.real("twist_amplitude");
  c.twist_width = r.real("twist_width");
  c.twist_center = r.real("twist_center");
  c.twist_twist = r.real("twist_twist");
  c.twist_floor = r.real("twist_floor");
  c.wobble = r.real("wobble");
  c.wobble_shift = r.real("wobble_shift");
  c.init_file = r.str("init_file");
  c.seed = r.uint("seed");
  c.noise_modes = r.uint("noise_modes");
  c.noise_decay = r.real("noise_decay");
  c.paths = r.uint("paths");
  c.threads = static_cast<unsigned>(r.uint("threads"));
  c.refinements = r.list<std::size_t>("refinements");
  c.levels = r.list<unsigned>("levels");
  c.trend_modes = r.list<std::size_t>("trend_modes");
  c.holonomy_dt_over_h = r.real("holonomy_dt_over_h");
  c.holonomy_intervals = r.uint("holonomy_intervals");

  const std::string init = r.str("init");
  if (init == "great_circle") c.init = InitKind::great_circle;
  else if (init == "twist") c.init = InitKind::twist;
  else if (init == "wobbly") c.init = InitKind::wobbly;
  else if (init == "zero") c.init = InitKind::zero;
  else if (init == "file") c.init = InitKind::file;
  else r.fail("init must be great_circle, twist, wobbly, zero or file, got '" + init + "'");

  if (c.n < 4) r.fail("n must be at least 4");
  if (domain == "line" && c.basepoint != 0) r.fail("basepoint must be 0 on a line");
  if (c.n >= 4 && c.basepoint >= c.n) r.fail("basepoint must be a node index below n");
  if (!(c.alpha >= 0.0)) r.fail("alpha must be >= 0");
  if (!(c.dt > 0.0)) r.fail("dt must be positive");
  if (!(c.t_end >= 0.0)) r.fail("t_end must be >= 0");
  if (c.output_stride == 0) r.fail("output_stride must be positive");
  if (c.form != "expanded" && c.form != "compact") r.fail("form must be 'expanded' or 'compact'");
  if (!(c.eps_rel > 0.0)) r.fail("eps_rel must be positive");
  if (!(c.twist_width > 0.0)) r.fail("twist_width must be positive");
  if (!(c.twist_floor >= 0.0)) r.fail("twist_floor must be >= 0");
  if (c.init == InitKind::file && c.init_file.empty())
    r.fail("missing required field: init_file (init = file)");
  const bool ladder = kind == "crosscheck" || kind == "identities" || kind == "holonomy";
  if (ladder && c.init == InitKind::file)
    r.fail("init = file is not available for refinement experiments");
  if (ladder && c.refinements.empty()) r.fail("refinements must list at least one grid size");
  for (std::size_t n : c.refinements)
    if (n < 4) r.fail("refinement grid sizes must be at least 4");
  if ((kind == "sllg" || kind == "covariance") && domain != "periodic")
    r.fail(kind + " runs on a periodic domain");
  if (kind == "sllg" || kind == "covariance") {
    if (2 * (c.noise_modes / 2) + 1 > c.n) r.fail("noise_modes too large for n");
    for (std::size_t l : c.trend_modes)
      if (l == 0 || 2 * (l / 2) + 1 > c.n) r.fail("trend_modes entries must be in 1..n-1");
  }
  if (kind == "sllg" && c.paths > 0 && c.levels.empty()) r.fail("levels must not be empty");
  for (unsigned m : c.levels)
    if (m == 0) r.fail("levels entries must be positive");
  if (kind == "covariance" && c.paths < 2) r.fail("covariance needs paths >= 2");
  if (kind == "sllg" && c.paths == 1) r.fail("sllg needs paths = 0 or paths >= 2");
  if (!(c.holonomy_dt_over_h > 0.0)) r.fail("holonomy_dt_over_h must be positive");
  if (c.holonomy_intervals == 0) r.fail("holonomy_intervals must be positive");

  if (!r.errors().empty()) {
    std::string msg = "invalid configuration:";
    for (const auto& e : r.errors()) msg += "\n  - " + e;
    throw ConfigError(msg);
  }
  c.resolved = values;
  c.resolved["experiment"] = kind;
  return c;
}

}  // namespace hlab::cli

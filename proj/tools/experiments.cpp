#include "experiments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "hlab/hashimoto.hpp"
#include "hlab/heat.hpp"
#include "hlab/initial_data.hpp"
#include "hlab/llg.hpp"
#include "hlab/noise.hpp"
#include "hlab/report_io.hpp"
#include "hlab/stochastic.hpp"
#include "hlab/validation.hpp"

namespace hlab::cli {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

// ------------------------------------------------------------ initial data

std::vector<std::vector<double>> read_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read init_file '" + path + "'");
  std::vector<std::vector<double>> rows;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ss(line);
    std::vector<double> row;
    std::string tok;
    bool numeric = true;
    while (ss >> tok) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(tok, &used));
        if (used != tok.size()) numeric = false;
      } catch (const std::exception&) {
        numeric = false;
      }
    }
    if (row.empty() && numeric) continue;
    if (!numeric) {
      if (first) {  // header line
        first = false;
        continue;
      }
      throw ConfigError("init_file '" + path + "': non-numeric row '" + line + "'");
    }
    first = false;
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ConfigError("init_file '" + path + "' has no data rows");
  const std::size_t cols = rows.front().size();
  if (cols != 2 && cols != 3) throw ConfigError("init_file must have 2 (q) or 3 (u) columns");
  for (const auto& r : rows)
    if (r.size() != cols) throw ConfigError("init_file rows have inconsistent column counts");
  return rows;
}

std::vector<std::vector<double>> file_rows(const ExperimentConfig& cfg, const Grid1D& g) {
  auto rows = read_table(cfg.init_file);
  if (rows.size() != g.size())
    throw ConfigError("init_file has " + std::to_string(rows.size()) + " rows but n = " +
                      std::to_string(g.size()));
  return rows;
}

Frame default_frame() { return {{0.0, 0.0, 1.0}, {1.0, 0.0, 0.0}}; }

LocalizedTwist twist_of(const ExperimentConfig& c) {
  return {c.twist_amplitude, c.twist_width, c.twist_center, c.twist_twist, c.twist_floor};
}

bool init_is_map(const ExperimentConfig& cfg) {
  if (cfg.init == InitKind::wobbly) return true;
  if (cfg.init == InitKind::file) return read_table(cfg.init_file).front().size() == 3;
  return false;
}

// Basepoint frame for q-driven experiments.
Frame basepoint_frame(const ExperimentConfig& cfg, const Grid1D& g) {
  if (!init_is_map(cfg)) return default_frame();
  const SphereField u = initial_map(cfg, g);
  return {u[g.basepoint()], gauge_frame_vector(u, g)};
}

// ----------------------------------------------------------------- output

class Csv {
 public:
  Csv(const fs::path& dir, const std::string& name, const std::vector<std::string>& header,
      std::vector<std::string>& outputs)
      : out_(dir / name) {
    if (!out_) throw std::runtime_error("cannot write " + (dir / name).string());
    outputs.push_back(name);
    for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
    out_ << '\n';
  }
  Csv& cell(double v) { return put(format_double(v)); }
  Csv& cell(std::size_t v) { return put(std::to_string(v)); }
  Csv& cell(const std::string& v) { return put(v); }
  void end() {
    out_ << '\n';
    first_ = true;
  }

 private:
  Csv& put(const std::string& s) {
    out_ << (first_ ? "" : ",") << s;
    first_ = false;
    return *this;
  }
  std::ofstream out_;
  bool first_ = true;
};

void write_json(const fs::path& file, const json& j) {
  std::ofstream out(file);
  if (!out) throw std::runtime_error("cannot write " + file.string());
  out << j.dump(2) << '\n';
}

json base_report(const ExperimentConfig& cfg) {
  return {{"experiment", cfg.experiment}, {"seed", cfg.seed}};
}

std::vector<double> noise_coeffs(std::size_t modes, double decay) {
  std::vector<double> c(modes);
  for (std::size_t l = 0; l < modes; ++l) c[l] = std::pow(static_cast<double>(l + 1), -decay);
  return c;
}

Grid1D main_grid(const ExperimentConfig& cfg) {
  return make_grid(cfg.domain, cfg.n, cfg.basepoint);
}

// ------------------------------------------------------------ experiments

RunResult run_llg(const ExperimentConfig& cfg, const fs::path& dir) {
  RunResult res;
  const Grid1D g = main_grid(cfg);
  const SphereField u0 = initial_map(cfg, g);
  LLGConfig lc;
  lc.alpha = cfg.alpha;
  lc.beta = cfg.beta;
  lc.dt = cfg.dt;
  lc.t_end = cfg.t_end;
  lc.output_stride = cfg.output_stride;
  const LLGTrajectory tr = llg_integrate(u0, g, lc);

  Csv u(dir, "series_u.csv", {"t", "j", "x", "u1", "u2", "u3"}, res.outputs);
  Csv en(dir, "series_energy.csv", {"t", "exchange_energy"}, res.outputs);
  for (std::size_t k = 0; k < tr.states.size(); ++k) {
    for (std::size_t j = 0; j < g.size(); ++j) {
      const Vec3& v = tr.states[k][j];
      u.cell(tr.times[k]).cell(j).cell(g.x(j)).cell(v.x).cell(v.y).cell(v.z).end();
    }
    en.cell(tr.times[k]).cell(exchange_energy(tr.states[k], g)).end();
  }
  res.report = base_report(cfg);
  res.report["dt_effective"] = tr.dt;
  res.report["records"] = tr.states.size();
  res.report["max_norm_drift"] = tr.max_norm_drift;
  res.report["energy_initial"] = exchange_energy(tr.states.front(), g);
  res.report["energy_final"] = exchange_energy(tr.states.back(), g);
  double drift = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j)
    drift = std::max(drift, norm(tr.states.back()[j] - u0[j]));
  res.report["max_displacement"] = drift;
  res.monitors = {{"blow_up", false}};
  std::ostringstream s;
  s << "llg: " << tr.states.size() << " records, |u| drift " << tr.max_norm_drift
    << ", max displacement " << drift << "\n";
  res.summary = s.str();
  return res;
}

RunResult run_heat(const ExperimentConfig& cfg, const fs::path& dir) {
  RunResult res;
  const Grid1D g = main_grid(cfg);
  const ComplexField q0 = initial_profile(cfg, g);
  HeatConfig hc;
  hc.alpha = cfg.alpha;
  hc.beta = cfg.beta;
  hc.dt = cfg.dt;
  hc.t_end = cfg.t_end;
  hc.output_stride = cfg.output_stride;
  hc.form = cfg.form == "compact" ? HeatForm::compact : HeatForm::expanded;
  const HeatTrajectory tr = heat_integrate(q0, g, hc);

  Csv q(dir, "series_q.csv", {"t", "j", "x", "re", "im", "abs"}, res.outputs);
  Csv mass(dir, "series_mass.csv", {"t", "l2_mass", "edge_max", "global_max", "decay_passed"},
           res.outputs);
  double phase_err = 0.0;
  const bool constant = cfg.init == InitKind::great_circle && g.periodic() && cfg.k != 0.0;
  for (std::size_t k = 0; k < tr.states.size(); ++k) {
    for (std::size_t j = 0; j < g.size(); ++j) {
      const Complex v = tr.states[k][j];
      q.cell(tr.times[k]).cell(j).cell(g.x(j)).cell(v.real()).cell(v.imag()).cell(std::abs(v)).end();
      if (constant) {
        const Complex exact = cfg.k * std::polar(1.0, 0.5 * cfg.beta * cfg.k * cfg.k * tr.times[k]);
        phase_err = std::max(phase_err, std::abs(v - exact) / std::abs(cfg.k));
      }
    }
    const DecayMonitor& m = tr.monitors[k];
    mass.cell(tr.times[k]).cell(l2_mass(tr.states[k], g)).cell(m.edge_max).cell(m.global_max)
        .cell(std::string(m.passed ? "1" : "0")).end();
  }
  res.report = base_report(cfg);
  res.report["form"] = cfg.form;
  res.report["dt_effective"] = tr.dt;
  res.report["records"] = tr.states.size();
  res.report["mass_initial"] = l2_mass(tr.states.front(), g);
  res.report["mass_final"] = l2_mass(tr.states.back(), g);
  res.report["decay_warning"] = tr.decay_warning;
  if (constant) res.report["constant_data_relative_error"] = phase_err;
  res.monitors = {{"decay", !tr.decay_warning}, {"blow_up", false}};
  std::ostringstream s;
  s << "heat: " << tr.states.size() << " records, mass " << l2_mass(tr.states.back(), g)
    << (tr.decay_warning ? " (decay monitor FAILED)" : "") << "\n";
  res.summary = s.str();
  return res;
}

RunResult run_crosscheck(const ExperimentConfig& cfg, const fs::path& dir) {
  RunResult res;
  CrossCheckConfig cc;
  cc.domain = cfg.domain;
  cc.ns = cfg.refinements;
  cc.alpha = cfg.alpha;
  cc.beta = cfg.beta;
  cc.t_end = cfg.t_end;
  cc.dt_max = cfg.dt;
  cc.output_stride = cfg.output_stride;
  const CrossCheckReport rep =
      crosscheck_deterministic([&](const Grid1D& g) { return initial_map(cfg, g); }, cc);

  Csv d(dir, "series_discrepancy.csv",
        {"t", "max_discrepancy", "l2_discrepancy", "gauge_phase", "edge_max", "decay_passed"},
        res.outputs);
  for (std::size_t k = 0; k < rep.times.size(); ++k)
    d.cell(rep.times[k]).cell(rep.max_discrepancy[k]).cell(rep.l2_discrepancy[k])
        .cell(rep.gauge_phase[k]).cell(rep.monitors[k].edge_max)
        .cell(std::string(rep.monitors[k].passed ? "1" : "0")).end();
  Csv t(dir, "series_convergence.csv",
        {"n", "h", "dt", "max_discrepancy", "l2_discrepancy", "aligned_discrepancy", "max_gauge_phase", "decay_ok"},
        res.outputs);
  for (const auto& r : rep.table)
    t.cell(r.n).cell(r.h).cell(r.dt).cell(r.max_discrepancy).cell(r.l2_discrepancy)
        .cell(r.aligned_discrepancy).cell(r.max_gauge_phase).cell(std::string(r.decay_ok ? "1" : "0")).end();
  res.report = base_report(cfg);
  res.report.update(to_json(rep));
  res.monitors = {{"decay", !rep.flagged}, {"blow_up", false}};
  res.summary = to_text(rep);
  return res;
}

RunResult run_identities(const ExperimentConfig& cfg, const fs::path& dir) {
  RunResult res;
  std::vector<std::size_t> ns = cfg.refinements;
  std::sort(ns.begin(), ns.end());
  Csv out(dir, "series_identities.csv",
          {"n", "h", "valid_count", "lagrange", "uxx_norm", "u_uxxx", "ratio"}, res.outputs);
  std::vector<double> hs;
  std::map<std::string, std::vector<double>> cols;
  json levels = json::array();
  std::vector<std::vector<std::string>> rows;
  for (std::size_t n : ns) {
    const Grid1D g = make_grid(cfg.domain, n, 0);
    const IdentityReport rep = identity_suite(initial_map(cfg, g), g, cfg.eps_rel);
    out.cell(n).cell(g.spacing()).cell(rep.valid_count);
    std::vector<std::string> row{std::to_string(n)};
    for (const auto& r : rep.rows) {
      out.cell(r.max_residual);
      cols[r.name].push_back(r.max_residual);
      std::ostringstream s;
      s.precision(3);
      s << std::scientific << r.max_residual;
      row.push_back(s.str());
    }
    out.end();
    rows.push_back(row);
    hs.push_back(g.spacing());
    json l = to_json(rep);
    l["n"] = n;
    levels.push_back(l);
  }
  json orders;
  for (const char* name : {"uxx_norm", "u_uxxx", "ratio"}) orders[name] = fit_order(hs, cols[name]);
  res.report = base_report(cfg);
  res.report["levels"] = levels;
  res.report["orders"] = orders;
  res.monitors = json::object();
  res.summary = aligned_table({"n", "lagrange", "uxx_norm", "u_uxxx", "ratio"}, rows);
  return res;
}

RunResult run_sllg_experiment(const ExperimentConfig& cfg, const fs::path& dir) {
  RunResult res;
  const Grid1D g = main_grid(cfg);
  const ComplexField q0 = initial_profile(cfg, g);
  const Frame base = basepoint_frame(cfg, g);
  const std::vector<double> coeffs = noise_coeffs(cfg.noise_modes, cfg.noise_decay);
  const NoiseModel nm(g, coeffs, derive_seed(cfg.seed, seed_tag::sllg_path, 0));

  SLLGConfig sc;
  sc.alpha = cfg.alpha;
  sc.beta = cfg.beta;
  sc.dt = cfg.dt;
  sc.t_end = cfg.t_end;
  sc.record_stride = cfg.output_stride;
  const SLLGPath path = run_sllg(q0, g, base.u, base.e, nm, sc);

  Csv q(dir, "series_q.csv", {"t", "j", "x", "re", "im"}, res.outputs);
  Csv u(dir, "series_u.csv", {"t", "j", "x", "u1", "u2", "u3", "e1", "e2", "e3"}, res.outputs);
  Csv inv(dir, "series_invariants.csv", {"t", "orthonormality_defect", "curve_closure_defect", "l2_mass"},
          res.outputs);
  double worst_closure = 0.0;
  for (std::size_t k = 0; k < path.times.size(); ++k) {
    const double t = path.times[k];
    const FrameField& f = path.frames[k];
    for (std::size_t j = 0; j < g.size(); ++j) {
      q.cell(t).cell(j).cell(g.x(j)).cell(path.q[k][j].real()).cell(path.q[k][j].imag()).end();
      u.cell(t).cell(j).cell(g.x(j)).cell(f.u[j].x).cell(f.u[j].y).cell(f.u[j].z)
          .cell(f.e[j].x).cell(f.e[j].y).cell(f.e[j].z).end();
    }
    const double closure = curve_closure_defect(path.q[k], f, g);
    worst_closure = std::max(worst_closure, closure);
    inv.cell(t).cell(orthonormality_defect(f)).cell(closure).cell(l2_mass(path.q[k], g)).end();
  }

  res.report = base_report(cfg);
  res.report["path"] = {{"steps", path.steps},
                        {"dt", path.dt},
                        {"max_orthonormality_defect", path.max_orthonormality_defect},
                        {"max_c_imag", path.max_c_imag},
                        {"max_dpsi_at_basepoint", path.max_dpsi_at_basepoint},
                        {"max_curve_closure_defect", worst_closure}};
  std::string summary = "sllg path: orthonormality defect " +
                        format_double(path.max_orthonormality_defect) + ", curve closure defect " +
                        format_double(worst_closure) + "\n";
  if (cfg.paths > 0) {
    WeakResidualConfig wc;
    wc.sllg = sc;
    wc.sllg.record_stride = 0;
    wc.levels = cfg.levels;
    wc.paths = cfg.paths;
    wc.master_seed = cfg.seed;
    wc.threads = cfg.threads;
    const std::vector<Vec3Field> phis{bump_test_function(g, {1.0, 0.5, -0.3})};
    const WeakResidualReport wr = sllg_weak_residual(q0, g, base.u, base.e, coeffs, phis, wc);
    Csv r(dir, "series_residual.csv", {"dt", "substeps", "phi", "mean", "std_error"}, res.outputs);
    for (const auto& l : wr.levels)
      for (std::size_t i = 0; i < l.mean.size(); ++i)
        r.cell(l.dt).cell(static_cast<std::size_t>(l.substeps)).cell(i).cell(l.mean[i]).cell(l.std_error[i]).end();
    res.report["weak_residual"] = to_json(wr);
    summary += to_text(wr);
  }
  res.monitors = {{"closure", worst_closure}, {"blow_up", false}};
  res.summary = summary;
  return res;
}

RunResult run_holonomy(const ExperimentConfig& cfg, const fs::path& dir) {
  RunResult res;
  HolonomyConfig hc;
  hc.domain = cfg.domain;
  hc.ns = cfg.refinements;
  hc.alpha = cfg.alpha;
  hc.beta = cfg.beta;
  hc.dt_over_h = cfg.holonomy_dt_over_h;
  hc.intervals = cfg.holonomy_intervals;
  const HolonomyStudy st =
      holonomy_study([&](const Grid1D& g) { return initial_profile(cfg, g); }, hc);
  Csv out(dir, "series_holonomy.csv", {"control", "n", "h", "dt", "max_defect", "mean_defect"},
          res.outputs);
  for (const auto* set : {&st.positive, &st.negative})
    for (const auto& l : *set)
      out.cell(std::string(set == &st.positive ? "solution" : "frozen")).cell(l.n).cell(l.h).cell(l.dt)
          .cell(l.stats.max_defect).cell(l.stats.mean_defect).end();
  res.report = base_report(cfg);
  res.report.update(to_json(st));
  res.monitors = json::object();
  res.summary = to_text(st);
  return res;
}

RunResult run_covariance(const ExperimentConfig& cfg, const fs::path& dir) {
  RunResult res;
  const Grid1D g = main_grid(cfg);
  const ComplexField q0 = initial_profile(cfg, g);
  const Frame base = basepoint_frame(cfg, g);
  CovarianceConfig cc;
  cc.sllg.alpha = cfg.alpha;
  cc.sllg.beta = cfg.beta;
  cc.sllg.dt = cfg.dt;
  cc.sllg.t_end = cfg.t_end;
  cc.paths = cfg.paths;
  cc.master_seed = cfg.seed;
  cc.threads = cfg.threads;
  const auto pairs = covariance_test_pairs(g);
  const auto reps = covariance_check(q0, g, base.u, base.e, noise_coeffs(cfg.noise_modes, cfg.noise_decay),
                                     pairs, cc);
  Csv out(dir, "series_covariance.csv",
          {"pair", "t", "samples", "monte_carlo", "formula", "half_width", "agrees"}, res.outputs);
  json jp = json::array();
  for (std::size_t i = 0; i < reps.size(); ++i) {
    out.cell(i).cell(reps[i].t).cell(reps[i].samples).cell(reps[i].monte_carlo).cell(reps[i].formula)
        .cell(reps[i].half_width).cell(std::string(reps[i].agrees() ? "1" : "0")).end();
    jp.push_back(to_json(reps[i]));
  }
  res.report = base_report(cfg);
  res.report["pairs"] = jp;
  std::string summary = to_text(reps);

  if (!cfg.trend_modes.empty()) {
    const Vec3Field phi = bump_test_function(g, {1.0, 0.5, -0.3});
    double target = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) target += g.spacing() * dot(phi[j], phi[j]);
    const double t_end = step_count(cfg.dt, cfg.t_end) == 0 ? 0.0 : cfg.t_end;
    target *= t_end;
    Csv tr(dir, "series_trend.csv", {"modes", "monte_carlo", "formula", "mc_half_width", "target"},
           res.outputs);
    json jt = json::array();
    std::vector<double> gaps;
    for (std::size_t L : cfg.trend_modes) {
      const auto r = covariance_check(q0, g, base.u, base.e, std::vector<double>(L, 1.0), {{phi, phi}}, cc)[0];
      tr.cell(L).cell(r.monte_carlo).cell(r.formula).cell(r.mc_half_width).cell(target).end();
      jt.push_back({{"modes", L}, {"monte_carlo", r.monte_carlo}, {"formula", r.formula},
                    {"mc_half_width", r.mc_half_width}});
      gaps.push_back(std::abs(target - r.monte_carlo));
    }
    bool monotone = true;
    for (std::size_t i = 1; i < gaps.size(); ++i) monotone = monotone && gaps[i] < gaps[i - 1];
    res.report["trend"] = {{"target", target}, {"levels", jt}, {"monotone", monotone}};
    summary += std::string("white-noise trend toward t<phi,phi>: ") + (monotone ? "monotone" : "NOT monotone") + "\n";
  }
  res.monitors = {{"blow_up", false}};
  res.summary = summary;
  return res;
}

}  // namespace

SphereField initial_map(const ExperimentConfig& cfg, const Grid1D& g) {
  switch (cfg.init) {
    case InitKind::great_circle: return great_circle(g, cfg.k);
    case InitKind::twist: return twist_of(cfg).map(g);
    case InitKind::wobbly: return wobbly_loop(g, cfg.wobble, cfg.wobble_shift);
    case InitKind::zero: return SphereField(Vec3Field(g.size(), default_frame().u));
    case InitKind::file: {
      const auto rows = file_rows(cfg, g);
      if (rows.front().size() == 3) {
        Vec3Field v(rows.size());
        for (std::size_t j = 0; j < rows.size(); ++j) {
          v[j] = {rows[j][0], rows[j][1], rows[j][2]};
          if (std::abs(norm(v[j]) - 1.0) > 1e-6)
            throw ConfigError("init_file row " + std::to_string(j) + " is not a unit vector");
        }
        return SphereField::normalized(std::move(v));
      }
      ComplexField q(rows.size());
      for (std::size_t j = 0; j < rows.size(); ++j) q[j] = {rows[j][0], rows[j][1]};
      const Frame f = default_frame();
      return SphereField::normalized(reconstruct_frame(q, g, f.u, f.e).u);
    }
  }
  throw ConfigError("unknown init kind");
}

ComplexField initial_profile(const ExperimentConfig& cfg, const Grid1D& g) {
  switch (cfg.init) {
    case InitKind::great_circle: return ComplexField(g.size(), Complex{cfg.k, 0.0});
    case InitKind::twist: return twist_of(cfg).profile(g);
    case InitKind::zero: return ComplexField(g.size());
    case InitKind::wobbly: return transform(wobbly_loop(g, cfg.wobble, cfg.wobble_shift), g, cfg.eps_rel);
    case InitKind::file: {
      const auto rows = file_rows(cfg, g);
      if (rows.front().size() == 3) return transform(initial_map(cfg, g), g, cfg.eps_rel);
      ComplexField q(rows.size());
      for (std::size_t j = 0; j < rows.size(); ++j) q[j] = {rows[j][0], rows[j][1]};
      return q;
    }
  }
  throw ConfigError("unknown init kind");
}

void precheck(const ExperimentConfig& cfg) {
  const std::string& kind = cfg.experiment;
  if (kind == "llg" || kind == "heat" || kind == "sllg" || kind == "covariance") {
    const Grid1D g = main_grid(cfg);
    double dt = cfg.dt;
    if (kind == "sllg" && cfg.paths > 0)
      dt *= *std::max_element(cfg.levels.begin(), cfg.levels.end());
    check_time_stepping(g, cfg.alpha, cfg.beta, dt, cfg.t_end);
    if (cfg.init == InitKind::file) file_rows(cfg, g);
    if ((kind == "sllg" || kind == "covariance") && init_is_map(cfg)) {
      const SphereField u = initial_map(cfg, g);
      gauge_frame_vector(u, g);
    }
  } else {
    // Refinement ladders pick dt per level; validate grids and coefficients.
    for (std::size_t n : cfg.refinements) {
      const Grid1D g = make_grid(cfg.domain, n, 0);
      check_time_stepping(g, cfg.alpha, cfg.beta, std::min(cfg.dt, stability_limit(g, cfg.alpha, cfg.beta)),
                          cfg.t_end);
    }
  }
}

RunResult run_experiment(const ExperimentConfig& cfg, const fs::path& dir) {
  RunResult res;
  const std::string& k = cfg.experiment;
  if (k == "llg") res = run_llg(cfg, dir);
  else if (k == "heat") res = run_heat(cfg, dir);
  else if (k == "crosscheck") res = run_crosscheck(cfg, dir);
  else if (k == "identities") res = run_identities(cfg, dir);
  else if (k == "sllg") res = run_sllg_experiment(cfg, dir);
  else if (k == "holonomy") res = run_holonomy(cfg, dir);
  else if (k == "covariance") res = run_covariance(cfg, dir);
  else throw ConfigError("unknown experiment '" + k + "'");
  write_json(dir / "report.json", res.report);
  res.outputs.push_back("report.json");
  return res;
}

}  // namespace hlab::cli

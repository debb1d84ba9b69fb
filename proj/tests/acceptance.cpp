// Acceptance checks 1-10. Prints one PASS/FAIL line per criterion and exits
// nonzero if any fails. `acceptance N ...` runs only the listed criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "experiment_config.hpp"
#include "experiments.hpp"
#include "hlab/hashimoto.hpp"
#include "hlab/heat.hpp"
#include "hlab/initial_data.hpp"
#include "hlab/llg.hpp"
#include "hlab/noise.hpp"
#include "hlab/stochastic.hpp"
#include "hlab/validation.hpp"

using namespace hlab;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string sci(double v) {
  std::ostringstream s;
  s.precision(3);
  s << std::scientific << v;
  return s.str();
}

std::string fixed2(double v) {
  std::ostringstream s;
  s.precision(2);
  s << std::fixed << v;
  return s.str();
}

const double kTwoPi = 2.0 * std::numbers::pi;

// 1. reconstruct_frame then transform, great circles q = k on a line.
Outcome transform_round_trip() {
  double worst256 = 0.0, worst_order = 1e9;
  for (double k : {0.25, 0.5}) {
    std::vector<double> hs, errs;
    for (std::size_t n : {64, 128, 256}) {
      const Grid1D g = make_grid(DomainSpec::line(0.0, 1.0), n);
      const ComplexField q(n, Complex{k, 0.0});
      const FrameField f = reconstruct_frame(q, g, {0, 0, 1}, {1, 0, 0});
      const ComplexField back = transform(SphereField(f.u, 1e-12), g);
      double err = 0.0;
      for (std::size_t j = 0; j < n; ++j) err = std::max(err, std::abs(back[j] - q[j]));
      hs.push_back(g.spacing());
      errs.push_back(err);
      if (n == 256) worst256 = std::max(worst256, err);
    }
    worst_order = std::min(worst_order, fit_order(hs, errs));
  }
  return {worst256 <= 1e-6 && worst_order >= 2.0 - 0.01,
          "max error at n=256 " + sci(worst256) + ", min order " + std::to_string(worst_order)};
}

// 2. H(u(t)) against q(t), localized twist on a line.
Outcome deterministic_equivalence() {
  CrossCheckConfig cfg;
  const LocalizedTwist tw;
  const CrossCheckReport r = crosscheck_deterministic([&](const Grid1D& g) { return tw.map(g); }, cfg);
  const double finest = r.table.back().max_discrepancy;
  bool decreasing = true;
  for (std::size_t i = 1; i < r.table.size(); ++i)
    decreasing = decreasing && r.table[i].max_discrepancy < r.table[i - 1].max_discrepancy;
  return {finest <= 1e-3 && r.observed_order >= 1.0 && decreasing && !r.flagged,
          "finest " + sci(finest) + ", order " + fixed2(r.observed_order) +
              (r.flagged ? ", decay monitor flagged" : "")};
}

// 3. d/dt of (Theta, eta) along LLG against curvature_torsion_rhs.
Outcome curvature_torsion_oracle() {
  const double alpha = 1.0, beta = 1.0;
  std::vector<double> hs, errs;
  for (std::size_t n : {128, 256, 512}) {
    const Grid1D g = make_grid(DomainSpec::periodic(kTwoPi), n);
    const double dt = 0.05 * g.spacing() * g.spacing();
    const std::size_t per = static_cast<std::size_t>(std::llround(0.01 / dt));
    LLGConfig lc;
    lc.alpha = alpha;
    lc.beta = beta;
    lc.dt = dt;
    SphereField u = wobbly_loop(g);
    double err = 0.0;
    for (int sample = 0; sample < 5; ++sample) {
      lc.t_end = dt;
      const LLGTrajectory one = llg_integrate(u, g, lc);
      const CurvatureTorsion c0 = curvature_torsion(u, g);
      const CurvatureTorsion c1 = curvature_torsion(one.states.back(), g);
      const CurvatureTorsionRate rate = curvature_torsion_rhs(c0, g, alpha, beta);
      for (std::size_t j = 0; j < n; ++j) {
        err = std::max(err, std::abs((c1.theta[j] - c0.theta[j]) / dt - rate.dtheta[j]));
        err = std::max(err, std::abs((c1.eta[j] - c0.eta[j]) / dt - rate.deta[j]));
      }
      lc.t_end = static_cast<double>(per) * dt;
      u = llg_integrate(u, g, lc).states.back();
    }
    hs.push_back(g.spacing());
    errs.push_back(err);
  }
  const double order = fit_order(hs, errs);
  // dt ~ h^2, so O(dt + h^2) is order 2 in h.
  return {order >= 0.9 * 2.0,
          "errors " + sci(errs[0]) + " " + sci(errs[1]) + " " + sci(errs[2]) + ", order " + fixed2(order)};
}

// 4. Identity suite on a closed loop.
Outcome identity_suite_check() {
  std::vector<double> hs, errs;
  double lagrange = 0.0;
  for (std::size_t n : {32, 64, 128, 256}) {
    const Grid1D g = make_grid(DomainSpec::periodic(kTwoPi), n);
    const IdentityReport r = identity_suite(wobbly_loop(g), g, 1e-8);
    lagrange = std::max(lagrange, r.find("lagrange")->max_residual);
    hs.push_back(g.spacing());
    errs.push_back(r.find("uxx_norm")->max_residual);
  }
  const double order = fit_order(hs, errs);
  return {lagrange <= 1e-14 && order >= 1.8,
          "lagrange " + sci(lagrange) + ", |u_xx|^2 residual order " + fixed2(order)};
}

// 5. Exact-rotation frame stepping keeps the frame orthonormal.
Outcome geometric_invariants() {
  const Grid1D g = make_grid(DomainSpec::periodic(kTwoPi), 64);
  const SphereField u = wobbly_loop(g);
  const ComplexField q = transform(u, g);
  FrameField f = reconstruct_frame(q, g, u[0], gauge_frame_vector(u, g));
  const NoiseModel nm(g, {1.0, 1.0, 1.0, 1.0}, derive_seed(7, 5, 0));
  const double dt = 1e-3;
  const InternalCoeffs k = internal_coeffs(q, g, 1.0, 1.0, {}, {}, {});
  double worst = orthonormality_defect(f);
  for (std::uint64_t s = 0; s < 10000; ++s) {
    const NoiseFields dw = noise_fields(nm, sample_increments(nm, dt, s));
    f = frame_time_step(f, k, dw, dt);
    worst = std::max(worst, orthonormality_defect(f));
  }
  return {worst <= 1e-10, "max defect after 1e4 steps " + sci(worst)};
}

// 6. Plaquette holonomy: heat solution against frozen q.
Outcome holonomy_check() {
  HolonomyConfig cfg;
  const LocalizedTwist tw;
  const HolonomyStudy s = holonomy_study([&](const Grid1D& g) { return tw.profile(g); }, cfg);
  const bool separated = s.positive_order >= 2.0 && s.negative_order <= s.positive_order - 1.0 &&
                         s.positive.back().stats.max_defect < s.negative.back().stats.max_defect;
  return {separated, "orders: heat solution " + fixed2(s.positive_order) + ", frozen q " +
                         fixed2(s.negative_order)};
}

// 7. Constant k: the heat side rotates by exp(i beta k^2 t / 2), the LLG side is at rest.
Outcome gauge_caveat() {
  const double beta = 1.0, t_end = 0.1;
  const Grid1D g = make_grid(DomainSpec::periodic(kTwoPi), 64);
  double heat_err = 0.0, llg_drift = 0.0;
  for (double k : {1.0, 2.0}) {
    HeatConfig hc;
    hc.beta = beta;
    hc.dt = 1e-4;
    hc.t_end = t_end;
    hc.output_stride = 100;
    const HeatTrajectory h = heat_integrate(ComplexField(g.size(), Complex{k, 0.0}), g, hc);
    for (std::size_t s = 0; s < h.states.size(); ++s) {
      const Complex exact = k * std::polar(1.0, 0.5 * beta * k * k * h.times[s]);
      for (const Complex& v : h.states[s]) heat_err = std::max(heat_err, std::abs(v - exact) / k);
    }
    LLGConfig lc;
    lc.beta = beta;
    lc.dt = 1e-4;
    lc.t_end = t_end;
    lc.output_stride = 100;
    const SphereField u0 = great_circle(g, k);
    const LLGTrajectory l = llg_integrate(u0, g, lc);
    for (const auto& st : l.states)
      for (std::size_t j = 0; j < g.size(); ++j) llg_drift = std::max(llg_drift, norm(st[j] - u0[j]));
  }
  return {heat_err <= 1e-6 && llg_drift <= 1e-10,
          "heat phase error " + sci(heat_err) + ", LLG drift " + sci(llg_drift)};
}

// 8. Weak SLLG residual over three dt levels sharing one Brownian path.
Outcome weak_residual() {
  const Grid1D g = make_grid(DomainSpec::periodic(kTwoPi), 64);
  WeakResidualConfig cfg;
  cfg.sllg.dt = 0.0004;
  cfg.sllg.t_end = 0.064;
  cfg.levels = {4, 2, 1};
  cfg.paths = 1000;
  cfg.master_seed = 1;
  const std::vector<Vec3Field> phis{bump_test_function(g, {1.0, 0.5, -0.3})};
  const WeakResidualReport r = sllg_weak_residual(ComplexField(g.size()), g, {0, 0, 1}, {1, 0, 0},
                                                  {1.0, 1.0, 1.0, 1.0}, phis, cfg);
  std::string d;
  for (const auto& l : r.levels)
    d += (d.empty() ? "" : ", ") + std::string("dt ") + sci(l.dt) + ": " + sci(l.mean[0]) + " +- " +
         sci(l.std_error[0]);
  return {r.within_band.at(0) && r.decreasing.at(0), d};
}

// 9. Covariance of W~ against the frame formula, and the white-noise trend.
Outcome covariance() {
  const Grid1D g = make_grid(DomainSpec::periodic(kTwoPi), 64);
  const ComplexField q0(g.size(), Complex{0.5, 0.0});
  CovarianceConfig cfg;
  cfg.sllg.dt = 1e-3;
  cfg.sllg.t_end = 0.05;
  cfg.paths = 2000;
  cfg.master_seed = 1;
  const auto reps = covariance_check(q0, g, {0, 0, 1}, {1, 0, 0}, {1.0, 1.0, 1.0, 1.0},
                                     covariance_test_pairs(g), cfg);
  bool agree = reps.size() == 3;
  for (const auto& r : reps) agree = agree && r.agrees();

  const Vec3Field phi = bump_test_function(g, {1.0, 0.5, -0.3});
  const double target = cfg.sllg.t_end * inner(phi, phi, g);
  std::vector<double> gaps;
  for (std::size_t L : {1, 4, 16}) {
    const auto r = covariance_check(q0, g, {0, 0, 1}, {1, 0, 0}, std::vector<double>(L, 1.0),
                                    {{phi, phi}}, cfg)[0];
    gaps.push_back(std::abs(r.monte_carlo - target));
  }
  const bool monotone = gaps[1] < gaps[0] && gaps[2] < gaps[1];
  return {agree && monotone, std::string("pairs ") + (agree ? "agree" : "disagree") +
                                 ", distance to t<phi,phi> " + sci(gaps[0]) + " " + sci(gaps[1]) +
                                 " " + sci(gaps[2])};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// 10. Same config and seed twice: byte-identical CSV files.
Outcome determinism() {
  const fs::path root = fs::temp_directory_path() / "hasimoto-lab-acceptance";
  fs::remove_all(root);
  std::size_t compared = 0;
  bool same = true;
  for (const std::string kind : {"sllg", "heat"}) {
    const auto cfg = cli::resolve_config(kind, {}, {{"paths", "50"}, {"t_end", "0.02"}}, nullptr);
    std::vector<std::string> outs[2];
    for (int run = 0; run < 2; ++run) {
      const fs::path dir = root / kind / std::to_string(run);
      fs::create_directories(dir);
      outs[run] = cli::run_experiment(cfg, dir).outputs;
    }
    same = same && outs[0] == outs[1];
    for (const auto& name : outs[0]) {
      if (name.ends_with(".csv")) {
        ++compared;
        same = same && slurp(root / kind / "0" / name) == slurp(root / kind / "1" / name);
      }
    }
  }
  fs::remove_all(root);
  return {same && compared > 0, std::to_string(compared) + " CSV files compared"};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"transform round trip", transform_round_trip},
      {"deterministic equivalence", deterministic_equivalence},
      {"curvature-torsion oracle", curvature_torsion_oracle},
      {"identity suite", identity_suite_check},
      {"geometric invariants", geometric_invariants},
      {"holonomy controls", holonomy_check},
      {"gauge caveat", gauge_caveat},
      {"weak SLLG residual", weak_residual},
      {"covariance", covariance},
      {"determinism", determinism},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::stoi(argv[i]));
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i + 1);
    if (!only.empty() && !only.count(id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << id << " (" << criteria[i].first
              << "): " << o.detail << " [" << fixed2(secs) << " s]" << std::endl;
    failures += o.pass ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}

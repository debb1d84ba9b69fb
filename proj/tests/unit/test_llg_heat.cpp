#include <cmath>
#include <numbers>

#include "doctest.h"
#include "hlab/errors.hpp"
#include "hlab/heat.hpp"
#include "hlab/initial_data.hpp"
#include "hlab/llg.hpp"
#include "hlab/validation.hpp"

using namespace hlab;

namespace {
const double kTwoPi = 2.0 * std::numbers::pi;

SphereField latitude(const Grid1D& g, double k, double phi) {
  Vec3Field v(g.size());
  for (std::size_t j = 0; j < g.size(); ++j)
    v[j] = {std::sin(phi) * std::cos(k * g.x(j)), std::sin(phi) * std::sin(k * g.x(j)), std::cos(phi)};
  return SphereField::normalized(v);
}
}  // namespace

TEST_CASE("stability bound and step count") {
  const Grid1D g = make_grid(DomainSpec::periodic(kTwoPi), 64);
  const double lim = stability_limit(g, 1.0, 2.0);
  CHECK(lim == doctest::Approx(kStabilityFactor * g.spacing() * g.spacing() / 2.0));
  CHECK_NOTHROW(check_time_stepping(g, 1.0, 2.0, lim, 0.1));
  CHECK_THROWS_AS(check_time_stepping(g, 1.0, 2.0, 1.01 * lim, 0.1), ConfigError);
  CHECK_THROWS_AS(check_time_stepping(g, -1.0, 0.0, 1e-6, 0.1), ConfigError);
  CHECK_THROWS_AS(check_time_stepping(g, 1.0, 0.0, -1e-6, 0.1), ConfigError);
  CHECK(step_count(0.01, 0.1) == 10);
  CHECK(step_count(0.03, 0.1) == 4);
  CHECK(step_count(0.01, 0.0) == 0);
}

TEST_CASE("great circles are stationary for LLG") {
  const Grid1D g = make_grid(DomainSpec::periodic(kTwoPi), 64);
  const Vec3Field r = llg_rhs(great_circle(g, 3.0).values(), g, 1.0, 1.0);
  for (const Vec3& v : r) CHECK(norm(v) < 1e-12);
}

TEST_CASE("damped LLG shrinks a circle of latitude toward the pole") {
  // u_xx is the discrete -K u_perp with K = (2 - 2 cos kh) / h^2, so the
  // colatitude obeys tan phi(t) = tan phi0 exp(-alpha K t) exactly in space.
  const Grid1D g = make_grid(DomainSpec::periodic(kTwoPi), 64);
  const double k = 2.0, phi0 = 1.0, alpha = 0.7, beta = 0.4;
  const double h = g.spacing();
  const double K = (2.0 - 2.0 * std::cos(k * h)) / (h * h);
  LLGConfig cfg;
  cfg.alpha = alpha;
  cfg.beta = beta;
  cfg.dt = 1e-4;
  cfg.t_end = 0.2;
  cfg.output_stride = 500;
  const LLGTrajectory tr = llg_integrate(latitude(g, k, phi0), g, cfg);
  for (std::size_t s = 0; s < tr.states.size(); ++s) {
    const double phi = std::atan(std::tan(phi0) * std::exp(-alpha * K * tr.times[s]));
    for (std::size_t j = 0; j < g.size(); ++j) CHECK(tr.states[s][j].z == doctest::Approx(std::cos(phi)).epsilon(1e-9));
  }
  CHECK(tr.max_norm_drift < 1e-8);
  CHECK(exchange_energy(tr.states.back(), g) < exchange_energy(tr.states.front(), g));
}

TEST_CASE("curvature-torsion rhs on a circle of latitude") {
  // Theta = k sin phi, eta = k cos phi: Theta' = -alpha k^3 sin phi cos^2 phi,
  // eta' = alpha k^3 sin^2 phi cos phi.
  const Grid1D g = make_grid(DomainSpec::periodic(kTwoPi), 256);
  const double k = 2.0, phi = 0.9, alpha = 0.8, beta = 1.3;
  const CurvatureTorsionRate r = curvature_torsion_rhs(curvature_torsion(latitude(g, k, phi), g), g, alpha, beta);
  const double s = std::sin(phi), c = std::cos(phi);
  for (std::size_t j = 0; j < g.size(); ++j) {
    CHECK(r.dtheta[j] == doctest::Approx(-alpha * k * k * k * s * c * c).epsilon(1e-3));
    CHECK(r.deta[j] == doctest::Approx(alpha * k * k * k * s * s * c).epsilon(1e-3));
  }
}

TEST_CASE("precessional LLG conserves exchange energy") {
  const Grid1D g = make_grid(DomainSpec::periodic(kTwoPi), 64);
  LLGConfig cfg;
  cfg.alpha = 0.0;
  cfg.dt = 1e-4;
  cfg.t_end = 0.05;
  cfg.output_stride = 500;
  const LLGTrajectory tr = llg_integrate(wobbly_loop(g), g, cfg);
  // u x (discrete Laplacian) conserves the forward-difference energy.
  auto energy = [&](const SphereField& u) {
    double e = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) {
      const Vec3 d = u[(j + 1) % g.size()] - u[j];
      e += dot(d, d) / g.spacing();
    }
    return e;
  };
  CHECK(energy(tr.states.back()) == doctest::Approx(energy(tr.states.front())).epsilon(1e-9));
}

TEST_CASE("Schrodinger plane wave rotates at the discrete dispersion") {
  // alpha = 0, q = A e^{imx}: q_t = i beta (-K + A^2 / 2) q with K the
  // discrete symbol of d^2/dx^2.
  const Grid1D g = make_grid(DomainSpec::periodic(kTwoPi), 64);
  const double A = 0.8, m = 2.0, beta = 1.5;
  const double h = g.spacing();
  const double K = (2.0 - 2.0 * std::cos(m * h)) / (h * h);
  ComplexField q(g.size());
  for (std::size_t j = 0; j < g.size(); ++j) q[j] = std::polar(A, m * g.x(j));
  for (const HeatForm form : {HeatForm::expanded, HeatForm::compact}) {
    HeatConfig cfg;
    cfg.alpha = 0.0;
    cfg.beta = beta;
    cfg.dt = 1e-4;
    cfg.t_end = 0.1;
    cfg.output_stride = 1000;
    cfg.form = form;
    const HeatTrajectory tr = heat_integrate(q, g, cfg);
    const Complex rot = std::polar(1.0, beta * (-K + 0.5 * A * A) * 0.1);
    for (std::size_t j = 0; j < g.size(); ++j) CHECK(std::abs(tr.states.back()[j] - q[j] * rot) < 1e-10);
  }
}

TEST_CASE("expanded and compact forms agree to second order") {
  std::vector<double> hs, errs;
  for (std::size_t n : {201, 401, 801}) {
    const Grid1D g = make_grid(DomainSpec::line(-20.0, 20.0), n);
    const ComplexField q = LocalizedTwist{}.profile(g);
    const ComplexField a = heat_rhs(q, g, 1.0, 1.0, HeatForm::expanded);
    const ComplexField b = heat_rhs(q, g, 1.0, 1.0, HeatForm::compact);
    double e = 0.0;
    for (std::size_t j = 1; j + 1 < n; ++j) e = std::max(e, std::abs(a[j] - b[j]));
    hs.push_back(g.spacing());
    errs.push_back(e);
  }
  CHECK(fit_order(hs, errs) > 1.8);
}

TEST_CASE("heat solver: line endpoints fixed, decay monitor, blow-up") {
  const Grid1D g = make_grid(DomainSpec::line(-25.0, 25.0), 256);
  const ComplexField q0 = LocalizedTwist{}.profile(g);
  HeatConfig cfg;
  cfg.dt = 1e-3;
  cfg.t_end = 0.05;
  const HeatTrajectory tr = heat_integrate(q0, g, cfg);
  CHECK(tr.states.back().front() == q0.front());
  CHECK(tr.states.back().back() == q0.back());
  CHECK_FALSE(tr.decay_warning);
  CHECK(tr.monitors.size() == tr.states.size());

  const HeatTrajectory flat = heat_integrate(ComplexField(g.size(), 1.0), g, cfg);
  CHECK(flat.decay_warning);

  cfg.blowup_threshold = 0.5;
  CHECK_THROWS_AS(heat_integrate(q0, g, cfg), BlowUpError);
  cfg.blowup_threshold = 1e8;
  cfg.dt = 1.0;
  CHECK_THROWS_AS(heat_integrate(q0, g, cfg), ConfigError);
}

TEST_CASE("l2 mass") {
  const Grid1D g = make_grid(DomainSpec::periodic(kTwoPi), 32);
  CHECK(l2_mass(ComplexField(32, Complex{0.0, 2.0}), g) == doctest::Approx(4.0 * kTwoPi));
}

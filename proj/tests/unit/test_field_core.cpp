#include <cmath>
#include <numbers>

#include "doctest.h"
#include "hlab/errors.hpp"
#include "hlab/field_core.hpp"
#include "hlab/validation.hpp"

using namespace hlab;

namespace {
const double kTwoPi = 2.0 * std::numbers::pi;

RealField sample(const Grid1D& g, double (*f)(double)) {
  RealField v(g.size());
  for (std::size_t j = 0; j < g.size(); ++j) v[j] = f(g.x(j));
  return v;
}

double max_err(const RealField& a, double (*f)(double), const Grid1D& g) {
  double e = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) e = std::max(e, std::abs(a[j] - f(g.x(j))));
  return e;
}

double msin(double x) { return std::sin(x); }
double mcos(double x) { return std::cos(x); }
double mneg_sin(double x) { return -std::sin(x); }
double one_minus_cos(double x) { return 1.0 - std::cos(x); }
}  // namespace

TEST_CASE("grid rejects degenerate input") {
  CHECK_THROWS_AS(make_grid(DomainSpec::periodic(kTwoPi), 3), ConfigError);
  CHECK_THROWS_AS(make_grid(DomainSpec::line(1.0, 1.0), 16), ConfigError);
  CHECK_THROWS_AS(make_grid(DomainSpec::line(0.0, 1.0), 16, 16), ConfigError);
}

TEST_CASE("grid spacing on circle and line") {
  const Grid1D c = make_grid(DomainSpec::periodic(kTwoPi), 64);
  CHECK(c.spacing() == doctest::Approx(kTwoPi / 64));
  const Grid1D l = make_grid(DomainSpec::line(0.0, 1.0), 11);
  CHECK(l.spacing() == doctest::Approx(0.1));
  CHECK(l.x(10) == doctest::Approx(1.0));
}

TEST_CASE("periodic derivatives converge at second order") {
  std::vector<double> hs, e1, e2;
  for (std::size_t n : {32, 64, 128}) {
    const Grid1D g = make_grid(DomainSpec::periodic(kTwoPi), n);
    const RealField f = sample(g, msin);
    hs.push_back(g.spacing());
    e1.push_back(max_err(diff1(f, g), mcos, g));
    e2.push_back(max_err(diff2(f, g), mneg_sin, g));
  }
  CHECK(fit_order(hs, e1) == doctest::Approx(2.0).epsilon(0.02));
  CHECK(fit_order(hs, e2) == doctest::Approx(2.0).epsilon(0.02));
}

TEST_CASE("line stencils are exact on quadratics and second order on smooth data") {
  const Grid1D g = make_grid(DomainSpec::line(-1.0, 2.0), 31);
  RealField quad(g.size());
  for (std::size_t j = 0; j < g.size(); ++j) quad[j] = g.x(j) * g.x(j);
  const RealField d1 = diff1(quad, g), d2 = diff2(quad, g);
  for (std::size_t j = 0; j < g.size(); ++j) {
    CHECK(d1[j] == doctest::Approx(2.0 * g.x(j)));
    CHECK(d2[j] == doctest::Approx(2.0));
  }
  std::vector<double> hs, e1, e2;
  for (std::size_t n : {33, 65, 129}) {
    const Grid1D gl = make_grid(DomainSpec::line(-1.0, 2.0), n);
    const RealField f = sample(gl, msin);
    hs.push_back(gl.spacing());
    e1.push_back(max_err(diff1(f, gl), mcos, gl));
    e2.push_back(max_err(diff2(f, gl), mneg_sin, gl));
  }
  CHECK(fit_order(hs, e1) > 1.9);
  CHECK(fit_order(hs, e2) > 1.9);
}

TEST_CASE("cumint starts at the basepoint and integrates in both directions") {
  const Grid1D g = make_grid(DomainSpec::periodic(kTwoPi), 256, 64);
  const RealField F = cumint(sample(g, msin), g);
  CHECK(F[64] == 0.0);
  const double xa = g.x(64);
  double err = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j)
    err = std::max(err, std::abs(F[j] - (std::cos(xa) - std::cos(g.x(j)))));
  CHECK(err < 1e-4);
  const Grid1D g0 = make_grid(DomainSpec::periodic(kTwoPi), 256);
  // Trapezoid bound: length * h^2 / 12 * max |f''|.
  CHECK(max_err(cumint(sample(g0, msin), g0), one_minus_cos, g0) <
        kTwoPi * g0.spacing() * g0.spacing() / 12.0);
}

TEST_CASE("length mismatch is rejected") {
  const Grid1D g = make_grid(DomainSpec::periodic(kTwoPi), 16);
  CHECK_THROWS_AS(diff1(RealField(15), g), PreconditionError);
}

TEST_CASE("inner product and decay monitor") {
  const Grid1D g = make_grid(DomainSpec::periodic(kTwoPi), 64);
  const RealField s = sample(g, msin), c = sample(g, mcos);
  CHECK(inner(s, s, g) == doctest::Approx(std::numbers::pi));
  CHECK(std::abs(inner(s, c, g)) < 1e-12);
  CHECK_FALSE(decay_monitor(ComplexField(64, 1.0), g).applicable);

  const Grid1D line = make_grid(DomainSpec::line(-20.0, 20.0), 201);
  ComplexField bump(line.size()), flat(line.size(), 1.0);
  for (std::size_t j = 0; j < line.size(); ++j) bump[j] = 1.0 / std::cosh(line.x(j));
  CHECK(decay_monitor(bump, line).passed);
  CHECK_FALSE(decay_monitor(flat, line).passed);
}

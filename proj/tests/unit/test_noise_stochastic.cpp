#include <atomic>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "doctest.h"
#include "hlab/ensemble.hpp"
#include "hlab/errors.hpp"
#include "hlab/heat.hpp"
#include "hlab/initial_data.hpp"
#include "hlab/noise.hpp"
#include "hlab/stochastic.hpp"

using namespace hlab;

namespace {
const double kTwoPi = 2.0 * std::numbers::pi;
}

TEST_CASE("seed derivation is keyed and deterministic") {
  CHECK(derive_seed(1, 2, 3) == derive_seed(1, 2, 3));
  CHECK(derive_seed(1, 2, 3) != derive_seed(1, 2, 4));
  CHECK(derive_seed(1, 2, 3) != derive_seed(1, 3, 3));
  CHECK(derive_seed(1, 2, 3) != derive_seed(2, 2, 3));
  CHECK(keyed_normal(9, 1, 2, 3) == keyed_normal(9, 1, 2, 3));
}

TEST_CASE("keyed normals have standard moments") {
  const int N = 200000;
  double s1 = 0.0, s2 = 0.0, s4 = 0.0;
  for (int i = 0; i < N; ++i) {
    const double z = keyed_normal(42, static_cast<std::uint64_t>(i), 0, 0);
    s1 += z;
    s2 += z * z;
    s4 += z * z * z * z;
  }
  CHECK(std::abs(s1 / N) < 5.0 / std::sqrt(N));
  CHECK(s2 / N == doctest::Approx(1.0).epsilon(0.02));
  CHECK(s4 / N == doctest::Approx(3.0).epsilon(0.05));
}

TEST_CASE("Fourier basis is orthonormal on the grid") {
  const Grid1D g = make_grid(DomainSpec::periodic(kTwoPi), 32);
  const NoiseModel nm(g, std::vector<double>(9, 1.0), 1);
  for (std::size_t a = 0; a < 9; ++a)
    for (std::size_t b = 0; b < 9; ++b)
      CHECK(inner(nm.basis(a), nm.basis(b), g) == doctest::Approx(a == b ? 1.0 : 0.0));
  // derivative of sqrt(2/L) cos(2 pi x / L) at x = L/4
  CHECK(fourier_mode_dx(2, kTwoPi, kTwoPi / 4) == doctest::Approx(-std::sqrt(2.0 / kTwoPi)));
  CHECK(fourier_mode(1, kTwoPi, 0.3) == doctest::Approx(1.0 / std::sqrt(kTwoPi)));
}

TEST_CASE("noise model rejects unresolved modes and bad coefficients") {
  const Grid1D g = make_grid(DomainSpec::periodic(kTwoPi), 8);
  CHECK_NOTHROW(NoiseModel(g, std::vector<double>(7, 1.0), 1));
  CHECK_THROWS_AS(NoiseModel(g, std::vector<double>(9, 1.0), 1), ConfigError);
  CHECK_THROWS_AS(NoiseModel(g, {1.0, NAN}, 1), ConfigError);
  const NoiseModel s = NoiseModel::spectral(g, 4, 1, 1.0);
  CHECK(s.coeffs()[3] == doctest::Approx(0.25));
}

TEST_CASE("substepped increments sum the fine path") {
  const Grid1D g = make_grid(DomainSpec::periodic(kTwoPi), 32);
  const NoiseModel nm(g, {1.0, 1.0, 1.0}, 77);
  const double dt = 0.01;
  const BrownianIncrements coarse = sample_increments(nm, dt, 3, 4);
  for (std::size_t c = 0; c < 3; ++c)
    for (std::size_t l = 0; l < 3; ++l) {
      double sum = 0.0;
      for (std::uint64_t s = 12; s < 16; ++s) sum += sample_increments(nm, dt / 4, s).d[c][l];
      CHECK(coarse.d[c][l] == doctest::Approx(sum).epsilon(1e-12));
    }
}

TEST_CASE("increment variance is dt") {
  const Grid1D g = make_grid(DomainSpec::periodic(kTwoPi), 16);
  const NoiseModel nm(g, {1.0}, 5);
  const double dt = 0.004;
  double s2 = 0.0;
  const int N = 20000;
  for (int s = 0; s < N; ++s) {
    const double d = sample_increments(nm, dt, static_cast<std::uint64_t>(s)).d[1][0];
    s2 += d * d;
  }
  CHECK(s2 / N == doctest::Approx(dt).epsilon(0.05));
}

TEST_CASE("parallel_for visits every index and rethrows") {
  std::vector<int> hit(100, 0);
  parallel_for(hit.size(), 4, [&](std::size_t i) { hit[i] += 1; });
  for (int h : hit) CHECK(h == 1);
  CHECK_THROWS_AS(parallel_for(10, 2, [](std::size_t i) {
                    if (i == 7) throw std::runtime_error("x");
                  }),
                  std::runtime_error);
}

TEST_CASE("zero noise stochastic heat step is the deterministic step") {
  const Grid1D g = make_grid(DomainSpec::line(-25.0, 25.0), 128);
  const ComplexField q = LocalizedTwist{}.profile(g);
  StochasticHeatConfig cfg;
  cfg.dt = 1e-3;
  const ComplexField a = stochastic_heat_step(q, g, cfg, NoiseFields::zero(g.size()));
  const ComplexField b = heat_step(q, g, 1.0, 1.0, 1e-3);
  for (std::size_t j = 0; j < g.size(); ++j) CHECK(a[j] == b[j]);
}

TEST_CASE("internal coefficients of constant q") {
  // p = (alpha + i beta) q_x = 0 and C = -beta |q|^2 / 2 for q = k.
  const Grid1D g = make_grid(DomainSpec::periodic(kTwoPi), 32);
  const double k = 1.5;
  const ComplexField q(32, Complex{k, 0.0});
  const InternalCoeffs c = internal_coeffs(q, g, 0.6, 0.9, {}, {}, {});
  for (std::size_t j = 0; j < 32; ++j) {
    CHECK(std::abs(c.p[j]) < 1e-12);
    CHECK(c.C[j] == doctest::Approx(-0.9 * k * k / 2));
    CHECK(c.dPsi[j] == 0.0);
  }
  CHECK(c.c_imag < 1e-12);
  const RealField w(32, 0.1);
  const RealField psi = psi_increment(q, g, w, w);
  CHECK(psi[0] == 0.0);
  // q2 dW1 - q1 dW2 = -k * 0.1 integrated over x
  CHECK(psi[16] == doctest::Approx(-k * 0.1 * g.x(16)));
}

TEST_CASE("time generator and frame step") {
  const FrameGenerator gen = time_generator({0.5, -0.25}, 0.75, 0.1, 0.02, -0.03, 0.01);
  CHECK(gen.a == doctest::Approx(0.005 + 0.02));
  CHECK(gen.b == doctest::Approx(-0.0025 - 0.03));
  CHECK(gen.c == doctest::Approx(0.0075 + 0.1));
  const Frame f{{0, 0, 1}, {1, 0, 0}};
  const Frame r = frame_time_step(f, gen);
  CHECK(orthonormality_defect(r) < 1e-15);

  FrameField bad{{Vec3{0, 0, 1}}, {Vec3{1, 0, 0.5}}};
  const Grid1D g = make_grid(DomainSpec::periodic(kTwoPi), 4);
  bad.u.resize(4, Vec3{0, 0, 1});
  bad.e.resize(4, Vec3{1, 0, 0});
  InternalCoeffs k;
  k.p.assign(4, Complex{});
  k.C.assign(4, 0.0);
  k.dPsi.assign(4, 0.0);
  CHECK_THROWS_AS(frame_time_step(bad, k, NoiseFields::zero(4), 0.01), PreconditionError);
}

TEST_CASE("dW~ is assembled in the moving frame") {
  FrameField f{{Vec3{0, 0, 1}}, {Vec3{1, 0, 0}}};
  NoiseFields dw = NoiseFields::zero(1);
  dw.dw1[0] = 1.0;
  dw.dw2[0] = 2.0;
  dw.dw3[0] = 3.0;
  const Vec3 v = assemble_dw_tilde(f, dw)[0];
  // e dW2 + (e x u) dW1 + u dW3 with e x u = (0, -1, 0)
  CHECK(norm(v - Vec3{2.0, -1.0, 3.0}) < 1e-15);
}

TEST_CASE("run_sllg: zero noise follows the heat flow, paths are reproducible") {
  const Grid1D g = make_grid(DomainSpec::periodic(kTwoPi), 32);
  const ComplexField q0(g.size(), Complex{0.5, 0.0});
  SLLGConfig cfg;
  cfg.dt = 1e-3;
  cfg.t_end = 0.02;
  const SLLGPath quiet = run_sllg(q0, g, {0, 0, 1}, {1, 0, 0}, NoiseModel(g, {0.0}, 1), cfg);
  HeatConfig hc;
  hc.dt = 1e-3;
  hc.t_end = 0.02;
  const ComplexField ref = heat_integrate(q0, g, hc).states.back();
  for (std::size_t j = 0; j < g.size(); ++j) CHECK(std::abs(quiet.q.back()[j] - ref[j]) < 1e-14);

  const NoiseModel nm(g, {1.0, 1.0, 1.0}, 11);
  const SLLGPath a = run_sllg(q0, g, {0, 0, 1}, {1, 0, 0}, nm, cfg);
  const SLLGPath b = run_sllg(q0, g, {0, 0, 1}, {1, 0, 0}, nm, cfg);
  CHECK(a.q.back() == b.q.back());
  CHECK(a.max_orthonormality_defect < 1e-12);
  CHECK(a.max_dpsi_at_basepoint == 0.0);
  CHECK(a.steps == 20);

  CHECK_THROWS_AS(run_sllg(q0, g, {0, 0, 1}, {1, 0, 0.2}, nm, cfg), PreconditionError);
  cfg.blowup_threshold = 0.1;
  CHECK_THROWS_AS(run_sllg(q0, g, {0, 0, 1}, {1, 0, 0}, nm, cfg), BlowUpError);
}

TEST_CASE("observer sees every step") {
  const Grid1D g = make_grid(DomainSpec::periodic(kTwoPi), 16);
  SLLGConfig cfg;
  cfg.dt = 1e-3;
  cfg.t_end = 0.01;
  std::size_t count = 0;
  run_sllg(ComplexField(16), g, {0, 0, 1}, {1, 0, 0}, NoiseModel(g, {1.0}, 3), cfg,
           [&](const SLLGStep& s) {
             CHECK(s.k == count);
             CHECK(s.q_new != nullptr);
             CHECK(s.dw_tilde->size() == 16);
             ++count;
           });
  CHECK(count == 10);
}

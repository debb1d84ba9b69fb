#include "hlab/stochastic.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hlab/hashimoto.hpp"
#include "hlab/heat.hpp"
#include "hlab/llg.hpp"

namespace hlab {

ComplexField c_coefficient_complex(const ComplexField& q, const Grid1D& g, double alpha,
                                   double beta) {
  detail::check_length(q.size(), g, "c_coefficient");
  const std::size_t n = q.size();
  const ComplexField qx = diff1(q, g);
  ComplexField integrand(n);
  for (std::size_t j = 0; j < n; ++j)
    integrand[j] = qx[j] * std::conj(q[j]) - std::conj(qx[j]) * q[j];
  const ComplexField nonlocal = cumint(integrand, g);
  const Complex half_i_alpha{0.0, 0.5 * alpha};
  ComplexField out(n);
  for (std::size_t j = 0; j < n; ++j) out[j] = -0.5 * beta * std::norm(q[j]) + half_i_alpha * nonlocal[j];
  return out;
}

RealField psi_increment(const ComplexField& q, const Grid1D& g, const RealField& dw1,
                        const RealField& dw2) {
  const std::size_t n = q.size();
  if (dw1.empty() && dw2.empty()) return RealField(n, 0.0);
  detail::check_length(dw1.size(), g, "psi_increment");
  detail::check_length(dw2.size(), g, "psi_increment");
  RealField integrand(n);
  for (std::size_t j = 0; j < n; ++j) integrand[j] = q[j].imag() * dw1[j] - q[j].real() * dw2[j];
  return cumint(integrand, g);
}

InternalCoeffs internal_coeffs(const ComplexField& q, const Grid1D& g, double alpha, double beta,
                               const RealField& dw1, const RealField& dw2,
                               const ComplexField& q_mid) {
  InternalCoeffs k;
  const ComplexField qx = diff1(q, g);
  const Complex ab{alpha, beta};
  k.p.resize(q.size());
  for (std::size_t j = 0; j < q.size(); ++j) k.p[j] = ab * qx[j];
  const ComplexField c = c_coefficient_complex(q, g, alpha, beta);
  k.C.resize(q.size());
  for (std::size_t j = 0; j < q.size(); ++j) {
    k.C[j] = c[j].real();
    k.c_imag = std::max(k.c_imag, std::abs(c[j].imag()));
  }
  k.dPsi = psi_increment(q_mid.empty() ? q : q_mid, g, dw1, dw2);
  return k;
}

InternalCoeffs average(const InternalCoeffs& x, const InternalCoeffs& y) {
  InternalCoeffs r = x;
  for (std::size_t j = 0; j < r.p.size(); ++j) {
    r.p[j] = 0.5 * (x.p[j] + y.p[j]);
    r.C[j] = 0.5 * (x.C[j] + y.C[j]);
    r.dPsi[j] = 0.5 * (x.dPsi[j] + y.dPsi[j]);
  }
  r.c_imag = std::max(x.c_imag, y.c_imag);
  return r;
}

FrameGenerator time_generator(Complex p, double C, double dPsi, double dw1, double dw2, double dt) {
  return {p.real() * dt + dw1, p.imag() * dt + dw2, C * dt + dPsi};
}

Frame frame_time_step(const Frame& f, const FrameGenerator& gen) { return rotate(f, gen); }

FrameField frame_time_step(const FrameField& f, const InternalCoeffs& k, const NoiseFields& dw,
                           double dt) {
  if (orthonormality_defect(f) > 1e-10)
    throw PreconditionError("frame_time_step: frame is not orthonormal");
  const std::size_t n = f.size();
  const bool noisy = !dw.dw1.empty();
  FrameField out = f;
  for (std::size_t j = 0; j < n; ++j) {
    const double w1 = noisy ? dw.dw1[j] : 0.0;
    const double w2 = noisy ? dw.dw2[j] : 0.0;
    out.set(j, rotate(f.at(j), time_generator(k.p[j], k.C[j], k.dPsi[j], w1, w2, dt)));
  }
  return out;
}

ComplexField stochastic_heat_step(const ComplexField& q, const Grid1D& g,
                                  const StochasticHeatConfig& cfg, const NoiseFields& dw) {
  ComplexField drift = heat_step(q, g, cfg.alpha, cfg.beta, cfg.dt, HeatForm::expanded);
  if (dw.dw1.empty()) return drift;
  const std::size_t n = q.size();
  const Complex i{0.0, 1.0};

  ComplexField half(n), shifted(n);
  for (std::size_t j = 0; j < n; ++j) {
    half[j] = 0.5 * Complex{dw.dw1_x[j], dw.dw2_x[j]};
    shifted[j] = drift[j] + half[j];
  }
  auto corrector = [&](const RealField& dpsi) {
    ComplexField r(n);
    for (std::size_t j = 0; j < n; ++j) r[j] = std::exp(-i * dpsi[j]) * shifted[j] + half[j];
    return r;
  };
  const ComplexField predicted = corrector(psi_increment(drift, g, dw.dw1, dw.dw2));
  ComplexField mid(n);
  for (std::size_t j = 0; j < n; ++j) mid[j] = 0.5 * (drift[j] + predicted[j]);
  ComplexField out = corrector(psi_increment(mid, g, dw.dw1, dw.dw2));
  if (!g.periodic()) {
    out.front() = q.front();
    out.back() = q.back();
  }
  return out;
}

Vec3Field assemble_dw_tilde(const FrameField& f, const NoiseFields& dw) {
  Vec3Field out(f.size());
  if (dw.dw1.empty()) return out;
  for (std::size_t j = 0; j < f.size(); ++j) {
    const Vec3& u = f.u[j];
    const Vec3& e = f.e[j];
    out[j] = dw.dw2[j] * e + dw.dw1[j] * cross(e, u) + dw.dw3[j] * u;
  }
  return out;
}

SLLGPath run_sllg(const ComplexField& q0, const Grid1D& g, const Vec3& m, const Vec3& e0,
                  const NoiseModel& nm, const SLLGConfig& cfg, const SLLGObserver& observer) {
  detail::check_length(q0.size(), g, "run_sllg");
  require_orthonormal(m, e0);
  check_time_stepping(g, cfg.alpha, cfg.beta, cfg.dt, cfg.t_end);
  if (nm.modes() > 0) detail::check_length(nm.basis(0).size(), g, "run_sllg noise");
  const std::size_t steps = step_count(cfg.dt, cfg.t_end);
  const double dt = steps == 0 ? cfg.dt : cfg.t_end / static_cast<double>(steps);
  const std::size_t n = g.size();
  const std::size_t a = g.basepoint();

  SLLGPath path;
  path.dt = dt;
  path.steps = steps;
  ComplexField q = q0;
  FrameField frame = reconstruct_frame(q, g, m, e0);
  Vec3Field w_tilde(n);
  auto record = [&](double t) {
    path.times.push_back(t);
    path.q.push_back(q);
    path.frames.push_back(frame);
    path.w_tilde.push_back(w_tilde);
  };
  record(0.0);

  const StochasticHeatConfig hc{cfg.alpha, cfg.beta, dt};
  for (std::size_t k = 0; k < steps; ++k) {
    const NoiseFields dw = nm.modes() > 0
                               ? noise_fields(nm, sample_increments(nm, dt, k, cfg.substeps))
                               : NoiseFields::zero(n);
    ComplexField q_new = stochastic_heat_step(q, g, hc, dw);

    double qmax = 0.0;
    bool finite = true;
    for (const auto& v : q_new) {
      finite = finite && std::isfinite(v.real()) && std::isfinite(v.imag());
      qmax = std::max(qmax, std::abs(v));
    }
    if (!finite || qmax > cfg.blowup_threshold) {
      std::ostringstream msg;
      msg << "stochastic heat blow-up at step " << k + 1 << " (max |q| = " << qmax << ")";
      throw BlowUpError(msg.str(), static_cast<double>(k + 1) * dt, k + 1);
    }

    // Basepoint frame: cumulative terms vanish at a, and so does dPsi.
    const InternalCoeffs k_old = internal_coeffs(q, g, cfg.alpha, cfg.beta, {}, {}, {});
    const InternalCoeffs k_new = internal_coeffs(q_new, g, cfg.alpha, cfg.beta, {}, {}, {});
    const InternalCoeffs k_avg = average(k_old, k_new);
    path.max_c_imag = std::max(path.max_c_imag, k_avg.c_imag);
    const RealField dpsi = psi_increment(q, g, dw.dw1, dw.dw2);
    path.max_dpsi_at_basepoint = std::max(path.max_dpsi_at_basepoint, std::abs(dpsi[a]));
    const FrameGenerator gen =
        time_generator(k_avg.p[a], k_avg.C[a], 0.0, dw.dw1[a], dw.dw2[a], dt);
    const Frame base = rotate(frame.at(a), gen);

    FrameField frame_new = reconstruct_frame(q_new, g, base.u, base.e);
    const Vec3Field dwt = assemble_dw_tilde(frame, dw);
    for (std::size_t j = 0; j < n; ++j) w_tilde[j] += dwt[j];

    if (observer) {
      SLLGStep s;
      s.k = k;
      s.t = static_cast<double>(k) * dt;
      s.dt = dt;
      s.q_old = &q;
      s.q_new = &q_new;
      s.frame_old = &frame;
      s.frame_new = &frame_new;
      s.noise = &dw;
      s.dw_tilde = &dwt;
      observer(s);
    }
    q = std::move(q_new);
    frame = std::move(frame_new);
    path.max_orthonormality_defect =
        std::max(path.max_orthonormality_defect, orthonormality_defect(frame));
    const bool last = k + 1 == steps;
    if (last || (cfg.record_stride > 0 && (k + 1) % cfg.record_stride == 0))
      record(static_cast<double>(k + 1) * dt);
  }
  return path;
}

}  // namespace hlab

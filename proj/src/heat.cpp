#include "hlab/heat.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hlab/llg.hpp"
#include "hlab/rk4.hpp"

namespace hlab {

ComplexField heat_rhs(const ComplexField& q, const Grid1D& g, double alpha, double beta,
                      HeatForm form) {
  const std::size_t n = q.size();
  detail::check_length(n, g, "heat_rhs");
  const ComplexField qx = diff1(q, g);
  const ComplexField qxx = diff2(q, g);
  const Complex i{0.0, 1.0};
  ComplexField out(n);

  if (form == HeatForm::expanded) {
    ComplexField integrand(n);
    for (std::size_t j = 0; j < n; ++j)
      integrand[j] = qx[j] * std::conj(q[j]) - q[j] * std::conj(qx[j]);
    const ComplexField nonlocal = cumint(integrand, g);
    for (std::size_t j = 0; j < n; ++j) {
      const double mod2 = std::norm(q[j]);
      out[j] = alpha * (qxx[j] + 0.5 * q[j] * nonlocal[j]) + i * beta * (qxx[j] + 0.5 * mod2 * q[j]);
    }
  } else {
    ComplexField integrand(n);
    for (std::size_t j = 0; j < n; ++j) integrand[j] = q[j] * std::conj(qx[j]);
    const ComplexField nonlocal = cumint(integrand, g);
    const Complex ab{alpha, beta};
    for (std::size_t j = 0; j < n; ++j) {
      const double mod2 = std::norm(q[j]);
      out[j] = ab * (qxx[j] + 0.5 * mod2 * q[j]) - alpha * q[j] * nonlocal[j];
    }
  }
  return out;
}

ComplexField heat_step(const ComplexField& q, const Grid1D& g, double alpha, double beta,
                       double dt, HeatForm form) {
  return rk4_step(q, dt, [&](const ComplexField& v) {
    ComplexField r = heat_rhs(v, g, alpha, beta, form);
    if (!g.periodic()) r.front() = r.back() = Complex{};
    return r;
  });
}

HeatTrajectory heat_integrate(const ComplexField& q0, const Grid1D& g, const HeatConfig& cfg) {
  detail::check_length(q0.size(), g, "heat_integrate");
  check_time_stepping(g, cfg.alpha, cfg.beta, cfg.dt, cfg.t_end);
  const std::size_t stride = std::max<std::size_t>(1, cfg.output_stride);
  const std::size_t steps = step_count(cfg.dt, cfg.t_end);
  const double dt = steps == 0 ? cfg.dt : cfg.t_end / static_cast<double>(steps);

  HeatTrajectory traj;
  traj.dt = dt;
  auto record = [&](double t, const ComplexField& q) {
    traj.times.push_back(t);
    traj.states.push_back(q);
    traj.monitors.push_back(decay_monitor(q, g));
    if (!traj.monitors.back().passed) traj.decay_warning = true;
  };
  record(0.0, q0);

  ComplexField q = q0;
  for (std::size_t k = 1; k <= steps; ++k) {
    q = heat_step(q, g, cfg.alpha, cfg.beta, dt, cfg.form);
    double qmax = 0.0;
    bool finite = true;
    for (const auto& v : q) {
      finite = finite && std::isfinite(v.real()) && std::isfinite(v.imag());
      qmax = std::max(qmax, std::abs(v));
    }
    if (!finite || qmax > cfg.blowup_threshold) {
      std::ostringstream msg;
      msg << "heat blow-up at step " << k << " (max |q| = " << qmax << ")";
      throw BlowUpError(msg.str(), static_cast<double>(k) * dt, k);
    }
    if (k % stride == 0 || k == steps) record(static_cast<double>(k) * dt, q);
  }
  return traj;
}

double l2_mass(const ComplexField& q, const Grid1D& g) {
  double m = 0.0;
  for (const auto& v : q) m += std::norm(v);
  return m * g.spacing();
}

}  // namespace hlab

#include "hlab/llg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "hlab/rk4.hpp"

namespace hlab {

double stability_limit(const Grid1D& g, double alpha, double beta) {
  const double rate = std::max(alpha, std::abs(beta));
  if (rate == 0.0) return std::numeric_limits<double>::infinity();
  return kStabilityFactor * g.spacing() * g.spacing() / rate;
}

void check_time_stepping(const Grid1D& g, double alpha, double beta, double dt, double t_end) {
  std::ostringstream err;
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) err << "alpha must be finite and >= 0; ";
  if (!std::isfinite(beta)) err << "beta must be finite; ";
  if (!(dt > 0.0) || !std::isfinite(dt)) err << "dt must be positive; ";
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) err << "t_end must be finite and >= 0; ";
  const double limit = stability_limit(g, alpha, beta);
  if (dt > limit) err << "dt = " << dt << " exceeds the stability bound " << limit << "; ";
  if (!err.str().empty()) throw ConfigError(err.str());
}

std::size_t step_count(double dt, double t_end) {
  if (t_end <= 0.0) return 0;
  return static_cast<std::size_t>(std::ceil(t_end / dt - 1e-9));
}

Vec3Field llg_rhs(const Vec3Field& u, const Grid1D& g, double alpha, double beta) {
  const Vec3Field uxx = diff2(u, g);
  Vec3Field out(u.size());
  for (std::size_t j = 0; j < u.size(); ++j) {
    const Vec3 w = cross(u[j], uxx[j]);
    out[j] = beta * w - alpha * cross(u[j], w);
  }
  return out;
}

LLGTrajectory llg_integrate(const SphereField& u0, const Grid1D& g, const LLGConfig& cfg) {
  detail::check_length(u0.size(), g, "llg_integrate");
  check_time_stepping(g, cfg.alpha, cfg.beta, cfg.dt, cfg.t_end);
  const std::size_t stride = std::max<std::size_t>(1, cfg.output_stride);
  const std::size_t steps = step_count(cfg.dt, cfg.t_end);
  const double dt = steps == 0 ? cfg.dt : cfg.t_end / static_cast<double>(steps);

  LLGTrajectory traj;
  traj.dt = dt;
  traj.times.push_back(0.0);
  traj.states.push_back(u0);

  auto rhs = [&](const Vec3Field& v) {
    Vec3Field r = llg_rhs(v, g, cfg.alpha, cfg.beta);
    if (!g.periodic()) r.front() = r.back() = Vec3{};
    return r;
  };
  Vec3Field u = u0.values();
  for (std::size_t k = 1; k <= steps; ++k) {
    u = rk4_step(u, dt, rhs);
    for (std::size_t j = 0; j < u.size(); ++j) {
      if (!is_finite(u[j])) {
        std::ostringstream msg;
        msg << "LLG blow-up: non-finite value at node " << j << ", step " << k;
        throw BlowUpError(msg.str(), static_cast<double>(k) * dt, k);
      }
      traj.max_norm_drift = std::max(traj.max_norm_drift, std::abs(norm(u[j]) - 1.0));
      if (cfg.renormalize) u[j] = normalized(u[j]);
    }
    if (k % stride == 0 || k == steps) {
      traj.times.push_back(static_cast<double>(k) * dt);
      traj.states.push_back(SphereField::normalized(u));
    }
  }
  return traj;
}

double exchange_energy(const SphereField& u, const Grid1D& g) {
  const Vec3Field ux = diff1(u.values(), g);
  double e = 0.0;
  for (const auto& v : ux) e += norm2(v);
  return e * g.spacing();
}

CurvatureTorsionRate curvature_torsion_rhs(const CurvatureTorsion& ct, const Grid1D& g,
                                           double alpha, double beta) {
  const std::size_t n = ct.theta.size();
  detail::check_length(n, g, "curvature_torsion_rhs");
  const RealField& th = ct.theta;
  const RealField& eta = ct.eta;
  const RealField th_x = diff1(th, g);
  const RealField th_xx = diff2(th, g);
  const RealField eta_x = diff1(eta, g);
  const RealField eta_xx = diff2(eta, g);

  RealField twist_flux(n);   // eta Theta_x / Theta
  RealField dispersion(n);   // Theta_xx / Theta + Theta^2 / 2 - eta^2
  const double floor = ct.epsilon > 0.0 ? ct.epsilon : std::numeric_limits<double>::min();
  for (std::size_t j = 0; j < n; ++j) {
    const double th_safe = std::max(th[j], floor);
    twist_flux[j] = eta[j] * th_x[j] / th_safe;
    dispersion[j] = th_xx[j] / th_safe + 0.5 * th[j] * th[j] - eta[j] * eta[j];
  }
  const RealField twist_flux_x = diff1(twist_flux, g);
  const RealField dispersion_x = diff1(dispersion, g);

  CurvatureTorsionRate r{RealField(n), RealField(n)};
  for (std::size_t j = 0; j < n; ++j) {
    r.dtheta[j] = alpha * (th_xx[j] - eta[j] * eta[j] * th[j]) -
                  beta * (eta_x[j] * th[j] + 2.0 * th_x[j] * eta[j]);
    r.deta[j] = alpha * eta_xx[j] + 2.0 * alpha * twist_flux_x[j] +
                alpha * eta[j] * th[j] * th[j] + beta * dispersion_x[j];
  }
  return r;
}

}  // namespace hlab

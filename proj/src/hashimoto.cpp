#include "hlab/hashimoto.hpp"

#include <algorithm>
#include <cmath>

namespace hlab {

bool CurvatureTorsion::all_invalid() const {
  return std::none_of(valid.begin(), valid.end(), [](bool v) { return v; });
}

std::size_t CurvatureTorsion::valid_count() const {
  return static_cast<std::size_t>(std::count(valid.begin(), valid.end(), true));
}

CurvatureTorsion curvature_torsion(const SphereField& u, const Grid1D& g, double eps_rel) {
  detail::check_length(u.size(), g, "curvature_torsion");
  const Vec3Field ux = diff1(u.values(), g);
  const Vec3Field uxx = diff2(u.values(), g);
  const std::size_t n = u.size();

  CurvatureTorsion ct;
  ct.theta.resize(n);
  ct.eta.assign(n, 0.0);
  ct.valid.assign(n, false);
  for (std::size_t j = 0; j < n; ++j) ct.theta[j] = norm(ux[j]);
  ct.epsilon = eps_rel * max_abs(ct.theta);
  const double eps2 = ct.epsilon * ct.epsilon;
  for (std::size_t j = 0; j < n; ++j) {
    if (!(ct.theta[j] > ct.epsilon)) continue;
    ct.valid[j] = true;
    const double t2 = std::max(ct.theta[j] * ct.theta[j], eps2);
    ct.eta[j] = dot(cross(u[j], ux[j]), uxx[j]) / t2;
  }
  return ct;
}

RealField accumulated_phase(const CurvatureTorsion& ct, const Grid1D& g) {
  RealField eta(ct.eta.size());
  for (std::size_t j = 0; j < eta.size(); ++j) eta[j] = ct.valid[j] ? ct.eta[j] : 0.0;
  return cumint(eta, g);
}

ComplexField transform(const CurvatureTorsion& ct, const Grid1D& g) {
  const RealField omega = accumulated_phase(ct, g);
  ComplexField q(omega.size());
  for (std::size_t j = 0; j < q.size(); ++j) q[j] = std::polar(ct.theta[j], omega[j]);
  return q;
}

ComplexField transform(const SphereField& u, const Grid1D& g, double eps_rel) {
  return transform(curvature_torsion(u, g, eps_rel), g);
}

CurvatureTorsion inverse_identities(const ComplexField& q, const Grid1D& g, double eps_rel) {
  detail::check_length(q.size(), g, "inverse_identities");
  const ComplexField qx = diff1(q, g);
  const std::size_t n = q.size();

  CurvatureTorsion ct;
  ct.theta.resize(n);
  ct.eta.assign(n, 0.0);
  ct.valid.assign(n, false);
  for (std::size_t j = 0; j < n; ++j) ct.theta[j] = std::abs(q[j]);
  ct.epsilon = eps_rel * max_abs(ct.theta);
  const double eps2 = ct.epsilon * ct.epsilon;
  const Complex i{0.0, 1.0};
  for (std::size_t j = 0; j < n; ++j) {
    if (!(ct.theta[j] > ct.epsilon)) continue;
    ct.valid[j] = true;
    const Complex num = i * (q[j] * std::conj(qx[j]) - qx[j] * std::conj(q[j]));
    ct.eta[j] = num.real() / (2.0 * std::max(std::norm(q[j]), eps2));
  }
  return ct;
}

namespace {

FrameGenerator spatial_generator(const Complex& q_mid, double step) {
  return {step * q_mid.real(), step * q_mid.imag(), 0.0};
}

}  // namespace

FrameField reconstruct_frame(const ComplexField& q, const Grid1D& g, const Vec3& m, const Vec3& e0) {
  detail::check_length(q.size(), g, "reconstruct_frame");
  require_orthonormal(m, e0);
  const std::size_t n = q.size();
  const std::size_t a = g.basepoint();
  const double h = g.spacing();

  FrameField f{Vec3Field(n), Vec3Field(n)};
  f.set(a, Frame{m, e0});
  for (std::size_t j = a; j + 1 < n; ++j)
    f.set(j + 1, rotate(f.at(j), spatial_generator(0.5 * (q[j] + q[j + 1]), h)));
  for (std::size_t j = a; j > 0; --j)
    f.set(j - 1, rotate(f.at(j), spatial_generator(0.5 * (q[j] + q[j - 1]), -h)));
  return f;
}

Vec3 gauge_frame_vector(const SphereField& u, const Grid1D& g) {
  const Vec3Field ux = diff1(u.values(), g);
  const Vec3& t = ux[g.basepoint()];
  // Remove the round-off normal component so that e is tangent at u(a).
  const Vec3 tangent = t - dot(t, u[g.basepoint()]) * u[g.basepoint()];
  const double r = norm(tangent);
  if (!(r > 0.0)) throw PreconditionError("u_x vanishes at the basepoint; gauge frame undefined");
  return tangent / r;
}

double closure_defect(const ComplexField& q, const FrameField& f, const Grid1D& g) {
  if (!g.periodic()) return 0.0;
  const std::size_t n = q.size();
  const Frame wrapped = rotate(f.at(n - 1), spatial_generator(0.5 * (q[n - 1] + q[0]), g.spacing()));
  return std::max(norm(wrapped.u - f.u[0]), norm(wrapped.e - f.e[0]));
}

double curve_closure_defect(const ComplexField& q, const FrameField& f, const Grid1D& g) {
  if (!g.periodic()) return 0.0;
  const std::size_t n = q.size();
  const Frame wrapped = rotate(f.at(n - 1), spatial_generator(0.5 * (q[n - 1] + q[0]), g.spacing()));
  return norm(wrapped.u - f.u[0]);
}

}  // namespace hlab

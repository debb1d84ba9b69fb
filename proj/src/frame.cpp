#include "hlab/frame.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace hlab {

SphereField::SphereField(Vec3Field values, double tolerance) : values_(std::move(values)) {
  for (std::size_t j = 0; j < values_.size(); ++j) {
    const double r = norm(values_[j]);
    if (!(std::abs(r - 1.0) <= tolerance))
      throw PreconditionError("SphereField: node " + std::to_string(j) + " has |u| = " +
                              std::to_string(r));
  }
}

SphereField SphereField::normalized(Vec3Field values) {
  for (auto& v : values) {
    const double r = norm(v);
    if (!(r > 0.0) || !std::isfinite(r)) throw PreconditionError("SphereField: cannot normalize zero or non-finite vector");
    v = v / r;
  }
  return SphereField(std::move(values));
}

namespace {

// sin(t)/t and (1 - cos t)/t^2 with series fallback near zero.
void rodrigues_coefficients(double theta2, double& s, double& c) {
  if (theta2 < 1e-8) {
    s = 1.0 - theta2 / 6.0 + theta2 * theta2 / 120.0;
    c = 0.5 - theta2 / 24.0 + theta2 * theta2 / 720.0;
    return;
  }
  const double t = std::sqrt(theta2);
  s = std::sin(t) / t;
  c = (1.0 - std::cos(t)) / theta2;
}

}  // namespace

Rotation3 Rotation3::identity() {
  Rotation3 r{};
  for (int i = 0; i < 3; ++i) r.m[i][i] = 1.0;
  return r;
}

Rotation3 Rotation3::exp(const FrameGenerator& g) {
  const double G[3][3] = {{0.0, g.a, g.b}, {-g.a, 0.0, g.c}, {-g.b, -g.c, 0.0}};
  double s = 0.0;
  double c = 0.0;
  rodrigues_coefficients(g.a * g.a + g.b * g.b + g.c * g.c, s, c);
  Rotation3 r = identity();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double g2 = 0.0;
      for (int k = 0; k < 3; ++k) g2 += G[i][k] * G[k][j];
      r.m[i][j] += s * G[i][j] + c * g2;
    }
  return r;
}

Rotation3 operator*(const Rotation3& x, const Rotation3& y) {
  Rotation3 r{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double acc = 0.0;
      for (int k = 0; k < 3; ++k) acc += x.m[i][k] * y.m[k][j];
      r.m[i][j] = acc;
    }
  return r;
}

Rotation3 Rotation3::transpose() const {
  Rotation3 r{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r.m[i][j] = m[j][i];
  return r;
}

double Rotation3::angle() const {
  // acos loses precision near zero; use the antisymmetric part for the sine.
  const double tr = m[0][0] + m[1][1] + m[2][2];
  const double sx = m[2][1] - m[1][2];
  const double sy = m[0][2] - m[2][0];
  const double sz = m[1][0] - m[0][1];
  const double sin2 = 0.5 * std::sqrt(sx * sx + sy * sy + sz * sz);
  return std::atan2(sin2, 0.5 * (tr - 1.0));
}

Frame rotate(const Frame& f, const FrameGenerator& g) {
  const Rotation3 r = Rotation3::exp(g);
  const Vec3 w = f.binormal();
  return {r.m[0][0] * f.u + r.m[0][1] * f.e + r.m[0][2] * w,
          r.m[1][0] * f.u + r.m[1][1] * f.e + r.m[1][2] * w};
}

Vec3Field FrameField::binormal() const {
  Vec3Field w(u.size());
  for (std::size_t j = 0; j < u.size(); ++j) w[j] = cross(u[j], e[j]);
  return w;
}

double orthonormality_defect(const Frame& f) {
  return std::max({std::abs(norm(f.u) - 1.0), std::abs(norm(f.e) - 1.0), std::abs(dot(f.u, f.e))});
}

double orthonormality_defect(const FrameField& f) {
  double d = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j) d = std::max(d, orthonormality_defect(f.at(j)));
  return d;
}

void require_orthonormal(const Vec3& m, const Vec3& e0, double tol) {
  if (orthonormality_defect(Frame{m, e0}) > tol)
    throw PreconditionError("initial frame (m, e0) must be orthonormal");
}

}  // namespace hlab

#pragma once

// Sphere-valued fields and orthonormal moving frames (u, e, u x e), with the
// exact rotation update used by both the spatial and the temporal frame
// equations.

#include <cstddef>
#include <vector>

#include "hlab/field_core.hpp"

namespace hlab {

/// A Vec3Field whose entries are unit vectors (| |u_j| - 1 | <= tolerance).
class SphereField {
 public:
  static constexpr double kTolerance = 1e-12;

  SphereField() = default;
  /// Validates; throws PreconditionError if any entry is off the sphere.
  explicit SphereField(Vec3Field values, double tolerance = kTolerance);
  /// Projects every entry onto the sphere. Zero vectors are rejected.
  static SphereField normalized(Vec3Field values);

  const Vec3Field& values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  const Vec3& operator[](std::size_t j) const { return values_[j]; }
  auto begin() const noexcept { return values_.begin(); }
  auto end() const noexcept { return values_.end(); }

 private:
  Vec3Field values_;
};

/// Coefficients of the antisymmetric generator acting on the stacked frame
/// (u, e, w = u x e):
///
///   d(u, e, w)^T = [[0, a, b], [-a, 0, c], [-b, -c, 0]] (u, e, w)^T
struct FrameGenerator {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;

  FrameGenerator& operator+=(const FrameGenerator& o) {
    a += o.a;
    b += o.b;
    c += o.c;
    return *this;
  }
  friend FrameGenerator operator*(double s, FrameGenerator g) { return {s * g.a, s * g.b, s * g.c}; }
  friend FrameGenerator operator+(FrameGenerator x, const FrameGenerator& y) { return x += y; }
};

/// One orthonormal frame at a single node.
struct Frame {
  Vec3 u;
  Vec3 e;
  Vec3 binormal() const { return cross(u, e); }
};

/// Applies exp(G) to the stacked frame. exp(G) is computed in closed
/// (Rodrigues) form, so the result is orthonormal to round-off.
Frame rotate(const Frame& f, const FrameGenerator& g);

/// 3x3 rotation matrix exp(G) in row-major order.
struct Rotation3 {
  double m[3][3];
  static Rotation3 identity();
  static Rotation3 exp(const FrameGenerator& g);
  friend Rotation3 operator*(const Rotation3& x, const Rotation3& y);
  Rotation3 transpose() const;
  /// Rotation angle in [0, pi].
  double angle() const;
};

struct FrameField {
  Vec3Field u;
  Vec3Field e;

  std::size_t size() const noexcept { return u.size(); }
  Frame at(std::size_t j) const { return {u[j], e[j]}; }
  void set(std::size_t j, const Frame& f) {
    u[j] = f.u;
    e[j] = f.e;
  }
  Vec3Field binormal() const;
};

/// Largest of | |u|-1 |, | |e|-1 | and |<u,e>| over all nodes.
double orthonormality_defect(const FrameField& f);
double orthonormality_defect(const Frame& f);

/// Throws PreconditionError unless |m| = |e0| = 1 and <m, e0> = 0 within tol.
void require_orthonormal(const Vec3& m, const Vec3& e0, double tol = 1e-10);

}  // namespace hlab

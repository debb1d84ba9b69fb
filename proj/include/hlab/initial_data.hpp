#pragma once

// Initial data families used by the experiments and tests.

#include "hlab/field_core.hpp"
#include "hlab/frame.hpp"

namespace hlab {

/// u(x) = cos(k (x - x_a)) m + sin(k (x - x_a)) e0, a geodesic traversed at
/// constant speed k. Its transform is q = k.
SphereField great_circle(const Grid1D& g, double k, const Vec3& m = {1, 0, 0},
                         const Vec3& e0 = {0, 1, 0});

/// A sphere map whose derivative is a localized bump:
///
///   q(x) = amplitude (sech(s) + floor) exp(i twist tanh(s)),  s = (x - center) / width,
///
/// so the curvature is a sech bump on top of a small constant floor and the
/// torsion twist sech^2(s) / width is concentrated at the center.
///
/// The floor makes the far field a slow great circle on which both flows are
/// (up to O(floor^2)) stationary. With a pure exponential tail q ~ exp(lambda x)
/// the heat flow would rotate the tail phase at rate Im((alpha + i beta) lambda^2)
/// while the transform pins the phase at the left end, and the two sides would
/// drift apart by a global phase.
struct LocalizedTwist {
  double amplitude = 1.0;
  double width = 1.0;
  double center = 0.0;
  double twist = 0.5;
  double floor = 1e-7;

  ComplexField profile(const Grid1D& g) const;
  /// u = reconstruct_frame(profile, m, e0).u
  SphereField map(const Grid1D& g, const Vec3& m = {0, 0, 1}, const Vec3& e0 = {1, 0, 0}) const;
};

/// Default line domain for localized-twist data: wide enough that the
/// left-edge decay monitor passes while the curvature stays above the
/// default regularization threshold at every node.
DomainSpec default_twist_domain();

/// Closed curve on the sphere with nowhere-vanishing speed, on a circle of
/// circumference 2 pi:
///   u = (cos x cos phi, sin x cos phi, sin phi),  phi = wobble sin(2x + shift).
SphereField wobbly_loop(const Grid1D& g, double wobble = 0.4, double shift = 0.3);

}  // namespace hlab

#pragma once

// The Hashimoto transform u -> q = Theta exp(i int_a^x eta), its inverse
// identities, and reconstruction of (u, e) from q through the spatial frame
// equation
//
//   d/dx (u, e, u x e)^T = [[0, q1, q2], [-q1, 0, 0], [-q2, 0, 0]] (u, e, u x e)^T.

#include <vector>

#include "hlab/field_core.hpp"
#include "hlab/frame.hpp"

namespace hlab {

/// Default relative regularization: epsilon = kDefaultEpsRel * max(Theta).
inline constexpr double kDefaultEpsRel = 1e-8;

/// Curvature Theta = |u_x| and torsion eta = <u x u_x, u_xx> / |u_x|^2.
/// eta is only meaningful where valid[j] (Theta_j > epsilon); it is stored
/// as 0 elsewhere.
struct CurvatureTorsion {
  RealField theta;
  RealField eta;
  std::vector<bool> valid;
  double epsilon = 0.0;

  bool all_invalid() const;
  std::size_t valid_count() const;
};

CurvatureTorsion curvature_torsion(const SphereField& u, const Grid1D& g,
                                   double eps_rel = kDefaultEpsRel);

/// omega = int_a^x eta, masked eta counted as zero; omega(a) = 0.
RealField accumulated_phase(const CurvatureTorsion& ct, const Grid1D& g);

ComplexField transform(const SphereField& u, const Grid1D& g, double eps_rel = kDefaultEpsRel);
ComplexField transform(const CurvatureTorsion& ct, const Grid1D& g);

/// Theta = |q| and eta = i (q conj(q)_x - q_x conj(q)) / (2 |q|^2), with the
/// denominator floored at epsilon^2 and epsilon = eps_rel * max |q|.
CurvatureTorsion inverse_identities(const ComplexField& q, const Grid1D& g,
                                    double eps_rel = kDefaultEpsRel);

/// Integrates the spatial frame equation from the basepoint with u(a) = m,
/// e(a) = e0. Each node-to-node step applies the exact exponential of the
/// generator built from the midpoint value (q_j + q_{j+1}) / 2, so the frame
/// is orthonormal to round-off everywhere.
FrameField reconstruct_frame(const ComplexField& q, const Grid1D& g, const Vec3& m, const Vec3& e0);

/// The e field that pairs with u at the basepoint in the zero-phase gauge,
/// e(a) = u_x(a) / |u_x(a)|. Throws PreconditionError when u_x(a) vanishes.
Vec3 gauge_frame_vector(const SphereField& u, const Grid1D& g);

/// On a circle, the mismatch between the reconstructed frame continued one
/// step past the last node and the frame at the basepoint (0 on a line).
double closure_defect(const ComplexField& q, const FrameField& f, const Grid1D& g);
/// The u part of closure_defect alone: whether the curve closes, ignoring the
/// holonomy of e.
double curve_closure_defect(const ComplexField& q, const FrameField& f, const Grid1D& g);

}  // namespace hlab

#pragma once

// Deterministic Landau-Lifshitz-Gilbert flow
//
//   u_t = beta u x u_xx - alpha u x (u x u_xx)
//
// integrated with classical RK4 and per-node projection back onto the
// sphere, plus the curvature-torsion evolution system used as an
// independent oracle.

#include <cstddef>
#include <utility>
#include <vector>

#include "hlab/field_core.hpp"
#include "hlab/frame.hpp"
#include "hlab/hashimoto.hpp"

namespace hlab {

/// Fraction of h^2 / max(alpha, |beta|) allowed as time step.
inline constexpr double kStabilityFactor = 0.2;

/// Largest time step accepted for the explicit parabolic solvers:
/// kStabilityFactor * h^2 / max(alpha, |beta|) (infinite when both vanish).
double stability_limit(const Grid1D& g, double alpha, double beta);

/// Throws ConfigError unless dt > 0, alpha >= 0, t_end >= 0 and
/// dt <= stability_limit.
void check_time_stepping(const Grid1D& g, double alpha, double beta, double dt, double t_end);

/// Number of equal steps covering [0, t_end] with step at most dt.
std::size_t step_count(double dt, double t_end);

struct LLGConfig {
  double alpha = 1.0;
  double beta = 1.0;
  double dt = 1e-4;
  double t_end = 0.1;
  std::size_t output_stride = 1;  // record every stride-th step (and the last)
  bool renormalize = true;
};

struct LLGTrajectory {
  std::vector<double> times;
  std::vector<SphereField> states;
  double dt = 0.0;              // step actually used
  double max_norm_drift = 0.0;  // max | |u|-1 | before projection
};

Vec3Field llg_rhs(const Vec3Field& u, const Grid1D& g, double alpha, double beta);

/// RK4 + projection. Throws BlowUpError on non-finite values. With
/// renormalize = false the projection is skipped during stepping; recorded
/// states are projected copies and max_norm_drift holds the raw deviation.
LLGTrajectory llg_integrate(const SphereField& u0, const Grid1D& g, const LLGConfig& cfg);

/// E(u) = sum_j h |u_x|_j^2.
double exchange_energy(const SphereField& u, const Grid1D& g);

struct CurvatureTorsionRate {
  RealField dtheta;
  RealField deta;
};

/// Right-hand side of
///   Theta' = alpha (Theta_xx - eta^2 Theta) - beta (eta_x Theta + 2 Theta_x eta)
///   eta'   = alpha eta_xx + 2 alpha (eta Theta_x / Theta)_x + alpha eta Theta^2
///            + beta (Theta_xx / Theta + Theta^2 / 2 - eta^2)_x
/// Divisions by Theta use max(Theta, epsilon) from the same mask as the
/// transform.
CurvatureTorsionRate curvature_torsion_rhs(const CurvatureTorsion& ct, const Grid1D& g,
                                           double alpha, double beta);

}  // namespace hlab

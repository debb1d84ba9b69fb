#pragma once

// Numerical checks of the transform/flow correspondence: deterministic
// cross-checks, pointwise identities, holonomy of the space-time frame
// connection, the weak stochastic LLG residual and the covariance of W~.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "hlab/field_core.hpp"
#include "hlab/frame.hpp"
#include "hlab/heat.hpp"
#include "hlab/noise.hpp"
#include "hlab/stochastic.hpp"

namespace hlab {

/// Least-squares slope of log(err) against log(h). Non-positive errors are
/// skipped; returns NaN with fewer than two usable points.
double fit_order(const std::vector<double>& h, const std::vector<double>& err);

/// dir * sin^4 bump supported on the fraction [lo, hi] of the domain
/// (measured from x_min); zero elsewhere.
Vec3Field bump_test_function(const Grid1D& g, const Vec3& dir, double lo = 0.125, double hi = 0.875);

/// Three smooth (phi, psi) pairs built from low Fourier modes of the domain,
/// used by the covariance experiment.
std::vector<std::pair<Vec3Field, Vec3Field>> covariance_test_pairs(const Grid1D& g);

// ---------------------------------------------------------------- crosscheck

using MapFamily = std::function<SphereField(const Grid1D&)>;

struct CrossCheckConfig {
  DomainSpec domain = DomainSpec::line(-25.0, 25.0);
  std::vector<std::size_t> ns{128, 256, 512};
  double alpha = 1.0;
  double beta = 1.0;
  double t_end = 0.1;
  double dt_max = 1e-3;      // dt = min(dt_max, stability limit)
  std::size_t output_stride = 10;
};

struct CrossCheckLevel {
  std::size_t n = 0;
  double h = 0.0;
  double dt = 0.0;
  double max_discrepancy = 0.0;    // max over t of |H(u(t)) - q(t)|_inf
  double l2_discrepancy = 0.0;     // max over t of the discrete L2 norm
  double aligned_discrepancy = 0.0;  // after removing the best global phase
  double max_gauge_phase = 0.0;    // |arg <H(u), q>| over t
  bool decay_ok = true;
};

struct CrossCheckReport {
  // Time series at the finest level.
  std::vector<double> times;
  std::vector<double> max_discrepancy;
  std::vector<double> l2_discrepancy;
  std::vector<double> gauge_phase;
  std::vector<DecayMonitor> monitors;
  std::vector<CrossCheckLevel> table;  // coarse to fine
  double observed_order = 0.0;         // slope of max_discrepancy against h
  bool flagged = false;                // decay monitor failed: equivalence not claimed
};

CrossCheckReport crosscheck_deterministic(const MapFamily& u0, const CrossCheckConfig& cfg);

// ------------------------------------------------------------- identities

struct IdentityResidual {
  std::string name;
  double max_residual = 0.0;
  bool relative = false;
};

struct IdentityReport {
  bool skipped = false;  // no node passed the curvature threshold
  std::size_t valid_count = 0;
  std::vector<IdentityResidual> rows;
  const IdentityResidual* find(const std::string& name) const;
};

/// Evaluates, with finite-difference derivatives on the valid nodes,
///   lagrange:   |u_x|^2 |u_xx|^2 = |u_x x u_xx|^2 + <u_x, u_xx>^2 (relative)
///   uxx_norm:   |u_xx|^2 = Theta^4 + Theta_x^2 + eta^2 Theta^2
///   u_uxxx:     <u, u_xxx> = -3 Theta Theta_x
///   ratio:      (Theta_x^2 - |u x u_xx|^2) / Theta = -eta^2 Theta
/// On a line the two nodes at each end are left out.
IdentityReport identity_suite(const SphereField& u, const Grid1D& g,
                              double eps_rel = 1e-8);

// --------------------------------------------------------------- holonomy

/// A sampled q path q(t_k), t_k = k dt, optionally with the noise increments
/// driving each interval.
struct QPath {
  std::vector<ComplexField> q;
  double dt = 0.0;
  std::vector<NoiseFields> noise;  // empty, or one entry per interval
};

struct HolonomyStats {
  double max_defect = 0.0;   // largest plaquette rotation angle
  double mean_defect = 0.0;
  std::size_t plaquettes = 0;
};

/// For each plaquette [x_j, x_{j+1}] x [t_k, t_{k+1}] composes the spatial
/// propagator X (midpoint q at fixed t) and the temporal propagator T (frame
/// time generator averaged over the interval) in both orders and measures the
/// rotation angle of (T_{j+1,k} X_{j,k})^{-1} X_{j,k+1} T_{j,k}. The plaquette
/// that wraps around a circle is excluded.
HolonomyStats holonomy_defect(const QPath& path, const Grid1D& g, double alpha, double beta);

struct HolonomyLevel {
  std::size_t n = 0;
  double h = 0.0;
  double dt = 0.0;
  HolonomyStats stats;
};

struct HolonomyStudy {
  std::vector<HolonomyLevel> positive;  // q from heat_integrate
  std::vector<HolonomyLevel> negative;  // q frozen at q0
  double positive_order = 0.0;
  double negative_order = 0.0;
};

struct HolonomyConfig {
  DomainSpec domain = DomainSpec::line(-25.0, 25.0);
  std::vector<std::size_t> ns{128, 256, 512};
  double alpha = 1.0;
  double beta = 1.0;
  double dt_over_h = 0.125;  // sampling interval of the path, proportional to h
  std::size_t intervals = 4;
};

using ProfileFamily = std::function<ComplexField(const Grid1D&)>;

HolonomyStudy holonomy_study(const ProfileFamily& q0, const HolonomyConfig& cfg);

// ----------------------------------------------------------- weak residual

/// Accumulates, along one run_sllg path,
///
///   R(phi) = <u(T) - u(0), phi> - sum_k dt <(F(u_k) + F(u_{k+1})) / 2, phi>
///            - sum_k <(u_k x dW~(frame_k) + u_{k+1} x dW~(frame_{k+1})) / 2, phi>,
///
/// F(u) = beta u x u_xx - alpha u x (u x u_xx), the noise term being the
/// trapezoidal (Stratonovich) sum of u x o dW~.
class WeakResidual {
 public:
  WeakResidual(const Grid1D& g, std::vector<Vec3Field> phis, double alpha, double beta);
  void operator()(const SLLGStep& s);
  const std::vector<double>& values() const noexcept { return r_; }

 private:
  Grid1D g_;
  std::vector<Vec3Field> phis_;
  double alpha_;
  double beta_;
  std::vector<double> r_;
};

struct ResidualLevel {
  double dt = 0.0;
  unsigned substeps = 1;
  std::vector<double> mean;    // per test function
  std::vector<double> std_error;  // per test function
};

struct WeakResidualConfig {
  SLLGConfig sllg;                    // dt is the finest step
  std::vector<unsigned> levels{4, 2, 1};  // dt_level = sllg.dt * m, coarse first
  std::size_t paths = 1000;
  std::uint64_t master_seed = 1;
  unsigned threads = 0;
};

struct WeakResidualReport {
  std::vector<ResidualLevel> levels;
  std::vector<bool> within_band;  // |mean| <= 3 stderr at every level, per phi
  std::vector<bool> decreasing;   // |mean| strictly decreasing under refinement, per phi
};

/// Runs `paths` SLLG paths per level. All levels share each path's Brownian
/// motion: the level with multiplier m sums m increments of the finest step.
WeakResidualReport sllg_weak_residual(const ComplexField& q0, const Grid1D& g, const Vec3& m,
                                      const Vec3& e0, const std::vector<double>& coeffs,
                                      const std::vector<Vec3Field>& phis,
                                      const WeakResidualConfig& cfg);

// -------------------------------------------------------------- covariance

/// sum_l c_l^2 sum_{F in e, u, u x e} (int <phi, F> sigma^l)(int <psi, F> sigma^l),
/// the integrand of the covariance formula for one frame field.
double covariance_density(const FrameField& f, const NoiseModel& nm, const Vec3Field& phi,
                          const Vec3Field& psi, const Grid1D& g);

struct CovarianceReport {
  double t = 0.0;
  std::size_t samples = 0;
  double monte_carlo = 0.0;   // mean of <W~_t, phi><W~_t, psi>
  double formula = 0.0;       // mean over paths of the time-integrated density
  double half_width = 0.0;    // 3 sigma of the paired difference mean
  double mc_half_width = 0.0; // 3 sigma of the Monte Carlo mean alone
  bool agrees() const { return std::abs(monte_carlo - formula) <= half_width; }
};

struct CovarianceConfig {
  SLLGConfig sllg;
  std::size_t paths = 2000;
  std::uint64_t master_seed = 1;
  unsigned threads = 0;
};

/// One report per (phi, psi) pair, all pairs evaluated on the same paths.
std::vector<CovarianceReport> covariance_check(
    const ComplexField& q0, const Grid1D& g, const Vec3& m, const Vec3& e0,
    const std::vector<double>& coeffs,
    const std::vector<std::pair<Vec3Field, Vec3Field>>& pairs, const CovarianceConfig& cfg);

}  // namespace hlab

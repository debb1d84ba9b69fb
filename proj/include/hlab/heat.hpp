#pragma once

// Generalized nonlocal heat equation for q:
//
//   expanded: q_t = alpha [q_xx + (q/2) int_a^x (q_x conj(q) - q conj(q)_x)]
//                   + i beta (q_xx + |q|^2 q / 2)
//   compact:  q_t = (alpha + i beta)[q_xx + q |q|^2 / 2] - alpha q int_a^x q conj(q)_x
//
// The lower limit a is the left endpoint of a line grid (standing in for
// minus infinity, valid for decaying q) or the basepoint on a circle. The two
// forms agree only when q(a) = 0; they differ by alpha q |q(a)|^2 / 2.

#include <cstddef>
#include <vector>

#include "hlab/field_core.hpp"

namespace hlab {

enum class HeatForm { expanded, compact };

struct HeatConfig {
  double alpha = 1.0;
  double beta = 1.0;
  double dt = 1e-4;
  double t_end = 0.1;
  std::size_t output_stride = 1;
  HeatForm form = HeatForm::expanded;
  double blowup_threshold = 1e8;  // max |q| treated as blow-up
};

ComplexField heat_rhs(const ComplexField& q, const Grid1D& g, double alpha, double beta,
                      HeatForm form = HeatForm::expanded);

struct HeatTrajectory {
  std::vector<double> times;
  std::vector<ComplexField> states;
  std::vector<DecayMonitor> monitors;  // one per recorded state
  double dt = 0.0;
  bool decay_warning = false;  // some recorded state failed the decay monitor
};

/// Single RK4 step of the heat flow.
ComplexField heat_step(const ComplexField& q, const Grid1D& g, double alpha, double beta,
                       double dt, HeatForm form = HeatForm::expanded);

/// RK4 over heat_rhs. Throws BlowUpError on non-finite values or when max |q|
/// exceeds cfg.blowup_threshold.
HeatTrajectory heat_integrate(const ComplexField& q0, const Grid1D& g, const HeatConfig& cfg);

/// L2 mass sum_j h |q_j|^2.
double l2_mass(const ComplexField& q, const Grid1D& g);

}  // namespace hlab

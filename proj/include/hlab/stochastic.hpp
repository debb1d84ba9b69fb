#pragma once

// Stochastic frame system and the stochastic nonlinear heat equation.
//
// The frame (u, e, w = u x e) moves in time by the antisymmetric increment
//
//   (a, b, c) = (p1 dt + dW1, p2 dt + dW2, C dt + dPsi)
//
// with p = (alpha + i beta) q_x, C = -beta |q|^2 / 2 + (i alpha / 2) int_a^x (q_x conj(q) - conj(q)_x q)
// and dPsi = int_a^x q2 o dW1 - q1 o dW2. Compatibility with the spatial frame
// equation is the stochastic heat equation
//
//   dq = [expanded heat drift] dt + d d_x (W1 + i W2) - i q dPsi.
//
// run_sllg advances q, moves the frame at the basepoint in time, and rebuilds
// the frame field in space from q. The resulting u solves the stochastic LLG
// equation with u x o dW~, dW~ = e dW2 + (e x u) dW1 + u dW3.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "hlab/field_core.hpp"
#include "hlab/frame.hpp"
#include "hlab/noise.hpp"

namespace hlab {

struct InternalCoeffs {
  ComplexField p;
  RealField C;
  RealField dPsi;
  double c_imag = 0.0;  // max |Im C| before the real part was taken
};

/// C evaluated from its complex formula, before taking the real part.
ComplexField c_coefficient_complex(const ComplexField& q, const Grid1D& g, double alpha,
                                   double beta);

/// p and C from q; dPsi from the Stratonovich midpoint value q_mid.
/// Pass empty dW fields for dPsi = 0.
InternalCoeffs internal_coeffs(const ComplexField& q, const Grid1D& g, double alpha, double beta,
                               const RealField& dw1, const RealField& dw2,
                               const ComplexField& q_mid);

/// dPsi = cumint(q2 dW1 - q1 dW2), zero at the basepoint.
RealField psi_increment(const ComplexField& q, const Grid1D& g, const RealField& dw1,
                        const RealField& dw2);

/// Node-wise mean of two coefficient sets (Heun average of the drift terms).
InternalCoeffs average(const InternalCoeffs& x, const InternalCoeffs& y);

/// Generator (p1 dt + dW1, p2 dt + dW2, C dt + dPsi) at one node.
FrameGenerator time_generator(Complex p, double C, double dPsi, double dw1, double dw2, double dt);

/// Applies the exact rotation of the time generator at every node. Throws
/// PreconditionError if the frame is not orthonormal to 1e-10.
FrameField frame_time_step(const FrameField& f, const InternalCoeffs& k, const NoiseFields& dw,
                           double dt);
Frame frame_time_step(const Frame& f, const FrameGenerator& gen);

struct StochasticHeatConfig {
  double alpha = 1.0;
  double beta = 1.0;
  double dt = 1e-4;
};

/// One step: RK4 heat drift, then the noise part by a symmetric
/// predictor-corrector,
///
///   A = q* + dD/2,  q~ = exp(-i dPsi(q*)) A + dD/2,
///   q_new = exp(-i dPsi((q* + q~)/2)) A + dD/2,
///
/// where q* is the drift step and dD = d d_x W1 + i d d_x W2. With zero noise
/// the result is exactly heat_step(q). Line endpoints are held fixed.
ComplexField stochastic_heat_step(const ComplexField& q, const Grid1D& g,
                                  const StochasticHeatConfig& cfg, const NoiseFields& dw);

struct SLLGConfig {
  double alpha = 1.0;
  double beta = 1.0;
  double dt = 1e-4;
  double t_end = 0.05;
  unsigned substeps = 1;           // Brownian path shared with runs at dt / substeps
  std::size_t record_stride = 0;   // 0: record only the initial and final states
  double blowup_threshold = 1e8;
};

/// Everything an observer may need about one step k -> k + 1.
struct SLLGStep {
  std::size_t k = 0;
  double t = 0.0;  // time at the start of the step
  double dt = 0.0;
  const ComplexField* q_old = nullptr;
  const ComplexField* q_new = nullptr;
  const FrameField* frame_old = nullptr;
  const FrameField* frame_new = nullptr;
  const NoiseFields* noise = nullptr;
  const Vec3Field* dw_tilde = nullptr;  // start-of-step frame, see assemble_dw_tilde
};

using SLLGObserver = std::function<void(const SLLGStep&)>;

struct SLLGPath {
  std::vector<double> times;
  std::vector<ComplexField> q;
  std::vector<FrameField> frames;
  std::vector<Vec3Field> w_tilde;  // W~ at the recorded times
  double max_orthonormality_defect = 0.0;
  double max_c_imag = 0.0;
  double max_dpsi_at_basepoint = 0.0;
  std::size_t steps = 0;
  double dt = 0.0;
};

/// dW~ = e dW2 + (e x u) dW1 + u dW3, node-wise.
Vec3Field assemble_dw_tilde(const FrameField& f, const NoiseFields& dw);

/// Validates m, e0 (unit, orthogonal), the time stepping and the noise grid.
/// Throws BlowUpError on non-finite q or max |q| above the threshold.
SLLGPath run_sllg(const ComplexField& q0, const Grid1D& g, const Vec3& m, const Vec3& e0,
                  const NoiseModel& nm, const SLLGConfig& cfg,
                  const SLLGObserver& observer = nullptr);

}  // namespace hlab

#pragma once

// Truncated spectral Wiener noise
//
//   W^i(t, x) = sum_{l=1}^{L} c_l sigma^l(x) beta^i_l(t),  i = 1, 2, 3,
//
// with sigma^l the real Fourier basis (constant, then cos/sin pairs),
// orthonormal in L2 over one period of the grid's extent.
//
// Brownian increments are a pure function of (seed, step, i, l): a
// splitmix64-style hash of the key feeds a Box-Muller transform. The same
// seed therefore reproduces every increment bit for bit, independently of
// evaluation order or threading.

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "hlab/field_core.hpp"

namespace hlab {

/// Deterministic 64-bit mix of a key sequence (master seed, purpose tag,
/// index, ...). Used for every derived stream seed.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t tag, std::uint64_t index);

/// Purpose tags for derive_seed.
namespace seed_tag {
inline constexpr std::uint64_t sllg_path = 1;
inline constexpr std::uint64_t weak_residual = 2;
inline constexpr std::uint64_t covariance = 3;
inline constexpr std::uint64_t holonomy = 4;
}  // namespace seed_tag

/// Standard normal deviate determined by the key.
double keyed_normal(std::uint64_t seed, std::uint64_t step, std::uint64_t component,
                    std::uint64_t mode);

class NoiseModel {
 public:
  NoiseModel(const Grid1D& g, std::vector<double> coeffs, std::uint64_t seed);

  /// c_l = l^(-decay) for l = 1..modes (decay = 0 is the white-noise truncation).
  static NoiseModel spectral(const Grid1D& g, std::size_t modes, std::uint64_t seed,
                             double decay = 0.0);

  std::size_t modes() const noexcept { return coeffs_.size(); }
  const std::vector<double>& coeffs() const noexcept { return coeffs_; }
  std::uint64_t seed() const noexcept { return seed_; }
  NoiseModel with_seed(std::uint64_t seed) const;

  /// sigma^{l+1} and its analytic derivative sampled on the grid (0-based l).
  const RealField& basis(std::size_t l) const { return basis_[l]; }
  const RealField& basis_dx(std::size_t l) const { return basis_dx_[l]; }

 private:
  std::vector<double> coeffs_;
  std::uint64_t seed_;
  std::vector<RealField> basis_;
  std::vector<RealField> basis_dx_;
};

/// Value and derivative of the l-th (1-based) real Fourier mode with period
/// `period`, evaluated at offset s from the origin.
double fourier_mode(std::size_t l, double period, double s);
double fourier_mode_dx(std::size_t l, double period, double s);

/// Increments delta beta^i_l over one step, i = 0, 1, 2 for W^1, W^2, W^3.
struct BrownianIncrements {
  std::array<std::vector<double>, 3> d;
};

/// N(0, dt) increments for step `step`. With substeps = m the increment is
/// the sum of m finer increments of variance dt / m taken from the fine steps
/// step*m .. step*m + m - 1, so runs at dt and at dt / m see the same
/// Brownian path.
BrownianIncrements sample_increments(const NoiseModel& nm, double dt, std::uint64_t step,
                                     unsigned substeps = 1);

/// Node-wise noise increments and the analytic x-derivatives of dW^1, dW^2.
struct NoiseFields {
  RealField dw1, dw2, dw3;
  RealField dw1_x, dw2_x;

  static NoiseFields zero(std::size_t n);
};

NoiseFields noise_fields(const NoiseModel& nm, const BrownianIncrements& inc);

}  // namespace hlab

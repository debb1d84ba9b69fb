#include "hlab/noise.hpp"

#include <cmath>
#include <numbers>

namespace hlab {

namespace {

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t fold(std::uint64_t h, std::uint64_t v) { return splitmix64(h ^ splitmix64(v)); }

// Uniform in (0, 1]: 53 random mantissa bits, shifted away from zero.
double to_unit_open(std::uint64_t bits) {
  return (static_cast<double>(bits >> 11) + 1.0) * 0x1.0p-53;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t tag, std::uint64_t index) {
  return fold(fold(splitmix64(master), tag), index);
}

double keyed_normal(std::uint64_t seed, std::uint64_t step, std::uint64_t component,
                    std::uint64_t mode) {
  const std::uint64_t key = fold(fold(fold(splitmix64(seed), step), component), mode);
  const double u1 = to_unit_open(splitmix64(key ^ 0x5851F42D4C957F2DULL));
  const double u2 = to_unit_open(splitmix64(key ^ 0x14057B7EF767814FULL));
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double fourier_mode(std::size_t l, double period, double s) {
  if (l == 1) return 1.0 / std::sqrt(period);
  const double k = 2.0 * std::numbers::pi * static_cast<double>(l / 2) / period;
  const double amp = std::sqrt(2.0 / period);
  return l % 2 == 0 ? amp * std::cos(k * s) : amp * std::sin(k * s);
}

double fourier_mode_dx(std::size_t l, double period, double s) {
  if (l == 1) return 0.0;
  const double k = 2.0 * std::numbers::pi * static_cast<double>(l / 2) / period;
  const double amp = std::sqrt(2.0 / period);
  return l % 2 == 0 ? -amp * k * std::sin(k * s) : amp * k * std::cos(k * s);
}

NoiseModel::NoiseModel(const Grid1D& g, std::vector<double> coeffs, std::uint64_t seed)
    : coeffs_(std::move(coeffs)), seed_(seed) {
  const double period = g.extent();
  const std::size_t n = g.size();
  if (2 * (coeffs_.size() / 2) + 1 > n)
    throw ConfigError("noise: number of modes must stay below the grid's Nyquist limit");
  for (std::size_t l = 0; l < coeffs_.size(); ++l) {
    if (!std::isfinite(coeffs_[l])) throw ConfigError("noise: non-finite coefficient");
    RealField b(n), bx(n);
    for (std::size_t j = 0; j < n; ++j) {
      const double s = g.x(j) - g.domain().x_min;
      b[j] = fourier_mode(l + 1, period, s);
      bx[j] = fourier_mode_dx(l + 1, period, s);
    }
    basis_.push_back(std::move(b));
    basis_dx_.push_back(std::move(bx));
  }
}

NoiseModel NoiseModel::spectral(const Grid1D& g, std::size_t modes, std::uint64_t seed,
                                double decay) {
  std::vector<double> c(modes);
  for (std::size_t l = 0; l < modes; ++l) c[l] = std::pow(static_cast<double>(l + 1), -decay);
  return NoiseModel(g, std::move(c), seed);
}

NoiseModel NoiseModel::with_seed(std::uint64_t seed) const {
  NoiseModel copy = *this;
  copy.seed_ = seed;
  return copy;
}

BrownianIncrements sample_increments(const NoiseModel& nm, double dt, std::uint64_t step,
                                     unsigned substeps) {
  if (!(dt > 0.0)) throw PreconditionError("sample_increments: dt must be positive");
  if (substeps == 0) substeps = 1;
  const double scale = std::sqrt(dt / static_cast<double>(substeps));
  BrownianIncrements inc;
  for (std::size_t i = 0; i < 3; ++i) {
    inc.d[i].assign(nm.modes(), 0.0);
    for (std::size_t l = 0; l < nm.modes(); ++l) {
      double acc = 0.0;
      for (unsigned s = 0; s < substeps; ++s)
        acc += keyed_normal(nm.seed(), step * substeps + s, i, l);
      inc.d[i][l] = scale * acc;
    }
  }
  return inc;
}

NoiseFields NoiseFields::zero(std::size_t n) {
  return {RealField(n, 0.0), RealField(n, 0.0), RealField(n, 0.0), RealField(n, 0.0),
          RealField(n, 0.0)};
}

NoiseFields noise_fields(const NoiseModel& nm, const BrownianIncrements& inc) {
  const std::size_t n = nm.modes() > 0 ? nm.basis(0).size() : 0;
  if (n == 0) return {};
  NoiseFields f = NoiseFields::zero(n);
  for (std::size_t l = 0; l < nm.modes(); ++l) {
    const double c = nm.coeffs()[l];
    const RealField& b = nm.basis(l);
    const RealField& bx = nm.basis_dx(l);
    for (std::size_t j = 0; j < n; ++j) {
      f.dw1[j] += c * b[j] * inc.d[0][l];
      f.dw2[j] += c * b[j] * inc.d[1][l];
      f.dw3[j] += c * b[j] * inc.d[2][l];
      f.dw1_x[j] += c * bx[j] * inc.d[0][l];
      f.dw2_x[j] += c * bx[j] * inc.d[1][l];
    }
  }
  return f;
}

}  // namespace hlab

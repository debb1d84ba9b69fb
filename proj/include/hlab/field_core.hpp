#pragma once

// Grids, discrete differential operators and cumulative quadrature shared by
// every solver. All functions are pure.

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "hlab/errors.hpp"
#include "hlab/vec3.hpp"

namespace hlab {

using Complex = std::complex<double>;
using RealField = std::vector<double>;
using ComplexField = std::vector<Complex>;

enum class DomainKind { periodic, line };

/// Spatial extent of a grid: a circle of circumference x_max - x_min, or the
/// closed interval [x_min, x_max].
struct DomainSpec {
  DomainKind kind = DomainKind::periodic;
  double x_min = 0.0;
  double x_max = 1.0;

  static DomainSpec periodic(double circumference, double origin = 0.0) {
    return {DomainKind::periodic, origin, origin + circumference};
  }
  static DomainSpec line(double x_min, double x_max) {
    return {DomainKind::line, x_min, x_max};
  }
};

class Grid1D {
 public:
  Grid1D(DomainSpec domain, std::size_t n, std::size_t basepoint);

  DomainKind kind() const noexcept { return domain_.kind; }
  bool periodic() const noexcept { return domain_.kind == DomainKind::periodic; }
  const DomainSpec& domain() const noexcept { return domain_; }
  std::size_t size() const noexcept { return n_; }
  double spacing() const noexcept { return h_; }
  std::size_t basepoint() const noexcept { return basepoint_; }
  /// Circumference on a circle, x_max - x_min on a line.
  double extent() const noexcept { return domain_.x_max - domain_.x_min; }
  double x(std::size_t j) const noexcept {
    return domain_.x_min + static_cast<double>(j) * h_;
  }
  std::vector<double> coordinates() const;

 private:
  DomainSpec domain_;
  std::size_t n_;
  double h_;
  std::size_t basepoint_;
};

/// Builds a grid; the basepoint defaults to node 0 (the leftmost node on a
/// line). Throws ConfigError for n < 4 or a non-positive extent.
Grid1D make_grid(const DomainSpec& domain, std::size_t n);
Grid1D make_grid(const DomainSpec& domain, std::size_t n, std::size_t basepoint);

namespace detail {
void check_length(std::size_t got, const Grid1D& g, const char* what);
}

/// Second-order central first derivative. Periodic grids wrap around; line
/// grids use the one-sided stencil (-3f0 + 4f1 - f2) / 2h at the endpoints.
template <class T>
std::vector<T> diff1(const std::vector<T>& f, const Grid1D& g) {
  detail::check_length(f.size(), g, "diff1");
  const std::size_t n = f.size();
  const double inv2h = 0.5 / g.spacing();
  std::vector<T> out(n);
  for (std::size_t j = 1; j + 1 < n; ++j) out[j] = (f[j + 1] - f[j - 1]) * inv2h;
  if (g.periodic()) {
    out[0] = (f[1] - f[n - 1]) * inv2h;
    out[n - 1] = (f[0] - f[n - 2]) * inv2h;
  } else {
    out[0] = (f[0] * -3.0 + f[1] * 4.0 - f[2]) * inv2h;
    out[n - 1] = (f[n - 1] * 3.0 - f[n - 2] * 4.0 + f[n - 3]) * inv2h;
  }
  return out;
}

/// Second-order central second derivative; line endpoints use the one-sided
/// stencil (2f0 - 5f1 + 4f2 - f3) / h^2.
template <class T>
std::vector<T> diff2(const std::vector<T>& f, const Grid1D& g) {
  detail::check_length(f.size(), g, "diff2");
  const std::size_t n = f.size();
  const double inv_h2 = 1.0 / (g.spacing() * g.spacing());
  std::vector<T> out(n);
  for (std::size_t j = 1; j + 1 < n; ++j)
    out[j] = (f[j + 1] - f[j] * 2.0 + f[j - 1]) * inv_h2;
  if (g.periodic()) {
    out[0] = (f[1] - f[0] * 2.0 + f[n - 1]) * inv_h2;
    out[n - 1] = (f[0] - f[n - 1] * 2.0 + f[n - 2]) * inv_h2;
  } else {
    out[0] = (f[0] * 2.0 - f[1] * 5.0 + f[2] * 4.0 - f[3]) * inv_h2;
    out[n - 1] = (f[n - 1] * 2.0 - f[n - 2] * 5.0 + f[n - 3] * 4.0 - f[n - 4]) * inv_h2;
  }
  return out;
}

/// Cumulative trapezoid integral from the basepoint a, F(a) = 0. On a circle
/// the integration never wraps: nodes left of a are reached by integrating
/// backwards, so the result is single-sheeted.
template <class T>
std::vector<T> cumint(const std::vector<T>& f, const Grid1D& g) {
  detail::check_length(f.size(), g, "cumint");
  const std::size_t n = f.size();
  const std::size_t a = g.basepoint();
  const double half_h = 0.5 * g.spacing();
  std::vector<T> out(n);
  out[a] = T{};
  for (std::size_t j = a; j + 1 < n; ++j) out[j + 1] = out[j] + (f[j] + f[j + 1]) * half_h;
  for (std::size_t j = a; j > 0; --j) out[j - 1] = out[j] - (f[j] + f[j - 1]) * half_h;
  return out;
}

/// Discrete L2 inner product sum_j h f_j g_j.
double inner(const RealField& f, const RealField& g, const Grid1D& grid);
double inner(const Vec3Field& f, const Vec3Field& g, const Grid1D& grid);

double max_abs(const RealField& f);
double max_abs(const ComplexField& f);

/// Checks that the integrand of the nonlocal terms decays at the left end of
/// a line grid, where integration from the left endpoint stands in for an
/// integral from minus infinity.
struct DecayMonitor {
  bool applicable = false;  // only line grids are monitored
  double edge_max = 0.0;    // max |q| over the leftmost edge_fraction of nodes
  double global_max = 0.0;
  double ratio = 1e-6;
  bool passed = true;
};

DecayMonitor decay_monitor(const ComplexField& q, const Grid1D& g, double ratio = 1e-6,
                           double edge_fraction = 0.05);

}  // namespace hlab

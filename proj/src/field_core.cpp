#include "hlab/field_core.hpp"

#include <algorithm>
#include <cmath>

namespace hlab {

Grid1D::Grid1D(DomainSpec domain, std::size_t n, std::size_t basepoint)
    : domain_(domain), n_(n), h_(0.0), basepoint_(basepoint) {
  const double ext = domain.x_max - domain.x_min;
  if (n < 4) throw ConfigError("grid needs at least 4 nodes, got " + std::to_string(n));
  if (!(ext > 0.0) || !std::isfinite(ext)) throw ConfigError("grid extent must be positive and finite");
  if (basepoint >= n) throw ConfigError("basepoint index out of range");
  h_ = domain.kind == DomainKind::periodic ? ext / static_cast<double>(n)
                                           : ext / static_cast<double>(n - 1);
}

std::vector<double> Grid1D::coordinates() const {
  std::vector<double> xs(n_);
  for (std::size_t j = 0; j < n_; ++j) xs[j] = x(j);
  return xs;
}

Grid1D make_grid(const DomainSpec& domain, std::size_t n) { return Grid1D(domain, n, 0); }

Grid1D make_grid(const DomainSpec& domain, std::size_t n, std::size_t basepoint) {
  return Grid1D(domain, n, basepoint);
}

namespace detail {
void check_length(std::size_t got, const Grid1D& g, const char* what) {
  if (got != g.size())
    throw PreconditionError(std::string(what) + ": field length " + std::to_string(got) +
                            " does not match grid size " + std::to_string(g.size()));
}
}  // namespace detail

double inner(const RealField& f, const RealField& g, const Grid1D& grid) {
  detail::check_length(f.size(), grid, "inner");
  detail::check_length(g.size(), grid, "inner");
  double s = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j) s += f[j] * g[j];
  return s * grid.spacing();
}

double inner(const Vec3Field& f, const Vec3Field& g, const Grid1D& grid) {
  detail::check_length(f.size(), grid, "inner");
  detail::check_length(g.size(), grid, "inner");
  double s = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j) s += dot(f[j], g[j]);
  return s * grid.spacing();
}

double max_abs(const RealField& f) {
  double m = 0.0;
  for (double v : f) m = std::max(m, std::abs(v));
  return m;
}

double max_abs(const ComplexField& f) {
  double m = 0.0;
  for (const auto& v : f) m = std::max(m, std::abs(v));
  return m;
}

DecayMonitor decay_monitor(const ComplexField& q, const Grid1D& g, double ratio,
                           double edge_fraction) {
  detail::check_length(q.size(), g, "decay_monitor");
  DecayMonitor mon;
  mon.ratio = ratio;
  mon.global_max = max_abs(q);
  if (g.periodic()) return mon;
  mon.applicable = true;
  const auto edge = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::ceil(edge_fraction * static_cast<double>(q.size()))));
  for (std::size_t j = 0; j < edge; ++j) mon.edge_max = std::max(mon.edge_max, std::abs(q[j]));
  mon.passed = mon.edge_max <= ratio * mon.global_max;
  return mon;
}

}  // namespace hlab

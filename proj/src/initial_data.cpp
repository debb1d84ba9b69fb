#include "hlab/initial_data.hpp"

#include <cmath>

#include "hlab/hashimoto.hpp"

namespace hlab {

SphereField great_circle(const Grid1D& g, double k, const Vec3& m, const Vec3& e0) {
  require_orthonormal(m, e0);
  const double xa = g.x(g.basepoint());
  Vec3Field u(g.size());
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double s = k * (g.x(j) - xa);
    u[j] = std::cos(s) * m + std::sin(s) * e0;
  }
  return SphereField::normalized(std::move(u));
}

ComplexField LocalizedTwist::profile(const Grid1D& g) const {
  ComplexField q(g.size());
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double s = (g.x(j) - center) / width;
    q[j] = std::polar(amplitude * (1.0 / std::cosh(s) + floor), twist * std::tanh(s));
  }
  return q;
}

SphereField LocalizedTwist::map(const Grid1D& g, const Vec3& m, const Vec3& e0) const {
  return SphereField::normalized(reconstruct_frame(profile(g), g, m, e0).u);
}

DomainSpec default_twist_domain() { return DomainSpec::line(-25.0, 25.0); }

SphereField wobbly_loop(const Grid1D& g, double wobble, double shift) {
  Vec3Field u(g.size());
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double x = g.x(j);
    const double phi = wobble * std::sin(2.0 * x + shift);
    u[j] = {std::cos(x) * std::cos(phi), std::sin(x) * std::cos(phi), std::sin(phi)};
  }
  return SphereField::normalized(std::move(u));
}

}  // namespace hlab

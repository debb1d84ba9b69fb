#pragma once

#include <vector>

namespace hlab {

/// One classical Runge-Kutta step for an autonomous method-of-lines system
/// y' = rhs(y), with y stored node-wise.
template <class T, class Rhs>
std::vector<T> rk4_step(const std::vector<T>& y, double dt, Rhs&& rhs) {
  const std::size_t n = y.size();
  std::vector<T> tmp(n);

  const std::vector<T> k1 = rhs(y);
  for (std::size_t j = 0; j < n; ++j) tmp[j] = y[j] + k1[j] * (0.5 * dt);
  const std::vector<T> k2 = rhs(tmp);
  for (std::size_t j = 0; j < n; ++j) tmp[j] = y[j] + k2[j] * (0.5 * dt);
  const std::vector<T> k3 = rhs(tmp);
  for (std::size_t j = 0; j < n; ++j) tmp[j] = y[j] + k3[j] * dt;
  const std::vector<T> k4 = rhs(tmp);

  std::vector<T> out(n);
  for (std::size_t j = 0; j < n; ++j)
    out[j] = y[j] + (k1[j] + k2[j] * 2.0 + k3[j] * 2.0 + k4[j]) * (dt / 6.0);
  return out;
}

}  // namespace hlab

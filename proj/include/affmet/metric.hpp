// Lorentzian metric fields on a coordinate chart.
#pragma once

#include <functional>
#include <string>

#include "core.hpp"
#include "fd.hpp"

namespace affmet {

// A metric given by a component callable on a validity box.  `reference_partial`
// is an optional analytic derivative (dir in 0..3) that built-in families carry
// for cross-checks; the computational pipeline never reads it.
struct MetricField {
  std::function<Mat4(const Point&)> component;
  std::function<Mat4(const Point&, int)> reference_partial;  // may be empty
  Box box;
  std::string name = "metric";
};

// signature (-,+,+,+): exactly one negative eigenvalue
inline bool is_lorentzian(const Mat4& g, double floor = 1e-10) {
  const Vec4 ev = symmetric_eigenvalues(g);
  int negative = 0;
  for (double e : ev) {
    if (std::abs(e) < floor) return false;
    if (e < 0.0) ++negative;
  }
  return negative == 1;
}

// Validated evaluation: box membership, symmetry, Lorentzian signature.
inline Mat4 metric_at(const MetricField& gf, const Point& p) {
  require_inside(gf.box, p, 0.0, "metric_at");
  const Mat4 g = gf.component(p);
  if (max_asymmetry(g) > 1e-10 * std::max(1.0, max_abs(g)))
    throw ContractError("metric_at: components are not symmetric at " + gf.name);
  if (!is_lorentzian(g))
    throw SignatureError("metric_at: signature is not Lorentzian at " + gf.name);
  return g;
}

inline Mat4 inverse_metric_at(const MetricField& gf, const Point& p) {
  return inverse(metric_at(gf, p));
}

// d g / d x^dir by stencil on the raw components.
inline Mat4 metric_partial(const MetricField& gf, const Point& p, int dir,
                           const FdConfig& fd = {}) {
  require_inside(gf.box, p, fd_margin(fd, 1), "metric_partial");
  return fd_partial([&](const Point& q) { return gf.component(q); }, p, dir, fd);
}

}  // namespace affmet

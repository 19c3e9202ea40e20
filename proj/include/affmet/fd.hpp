// Central finite-difference stencils over fields on the chart.
//
// Fields are callables Point -> V where V is double, Vec<N>, Mat<N>, or any
// type with an axpy(V&, double, const V&) overload visible in this namespace.
#pragma once

#include <cstddef>
#include <span>
#include <utility>

#include "core.hpp"

namespace affmet {

struct FdConfig {
  double step = 1e-3;
  int order = 4;            // 2, 4, or 6
  bool richardson = false;  // combine step and step/2 results
};

inline void axpy(double& y, double a, double x) { y += a * x; }

// recurses through Vec, Mat, and deeper array nests
template <class V, std::size_t N>
void axpy(std::array<V, N>& y, double a, const std::array<V, N>& x) {
  for (std::size_t i = 0; i < N; ++i) axpy(y[i], a, x[i]);
}

namespace detail {

// Central stencils are evaluated as weighted pair differences
// w_k (f(p + k h) - f(p - k h)) so that constant fields difference to an
// exact zero instead of accumulating weight roundoff.
struct StencilTap {
  int offset;     // positive side; the mirrored tap is implied
  double weight;  // weight of the pair difference, to be divided by h
};

inline std::span<const StencilTap> first_derivative_taps(int order) {
  static constexpr StencilTap o2[] = {{1, 0.5}};
  static constexpr StencilTap o4[] = {{1, 8.0 / 12.0}, {2, -1.0 / 12.0}};
  static constexpr StencilTap o6[] = {
      {1, 45.0 / 60.0}, {2, -9.0 / 60.0}, {3, 1.0 / 60.0}};
  switch (order) {
    case 2: return o2;
    case 4: return o4;
    case 6: return o6;
    default: throw ContractError("finite-difference order must be 2, 4, or 6");
  }
}

}  // namespace detail

// Stencil half-width in units of the step.
inline int fd_radius(const FdConfig& fd) {
  detail::first_derivative_taps(fd.order);  // validates order
  return fd.order / 2;
}

// Coordinate-box margin consumed by `levels` nested derivative passes.
inline double fd_margin(const FdConfig& fd, int levels) {
  return static_cast<double>(levels * fd_radius(fd)) * fd.step;
}

// d f / d x^dir at p.  Does not check the validity box; callers that own a
// box do that with fd_margin().
template <class Field>
auto fd_partial(Field&& f, const Point& p, int dir, const FdConfig& fd)
    -> decltype(f(p)) {
  using V = decltype(f(p));
  auto at_step = [&](double h) {
    V acc{};
    for (const auto& tap : detail::first_derivative_taps(fd.order)) {
      Point qp = p, qm = p;
      qp[dir] += tap.offset * h;
      qm[dir] -= tap.offset * h;
      V diff = f(qp);
      axpy(diff, -1.0, f(qm));
      axpy(acc, tap.weight / h, diff);
    }
    return acc;
  };
  if (!fd.richardson) return at_step(fd.step);
  // error ~ C h^order, so (2^order D(h/2) - D(h)) / (2^order - 1)
  const double two_p = std::pow(2.0, fd.order);
  V fine = at_step(fd.step / 2.0);
  V acc{};
  axpy(acc, two_p / (two_p - 1.0), fine);
  axpy(acc, -1.0 / (two_p - 1.0), at_step(fd.step));
  return acc;
}

// Scalar partial derivative with an explicit box check; the public face of
// the stencil machinery.
template <class Field>
double partial_derivative(Field&& f, const Box& box, const Point& p, int dir,
                          const FdConfig& fd = {}) {
  if (dir < 0 || dir > 3) throw ContractError("direction must be in 0..3");
  require_inside(box, p, fd_margin(fd, 1), "partial_derivative");
  return fd_partial(std::forward<Field>(f), p, dir, fd);
}

}  // namespace affmet

// Sections of the extended bundle: a tangent part plus a multiple of the
// distinguished unit direction ξ.
#pragma once

#include <functional>

#include "core.hpp"
#include "fd.hpp"

namespace affmet {

// Value of a section at one point: bar + xi·ξ.
struct FiberValue {
  Vec4 bar{};
  double xi = 0.0;
};

inline FiberValue operator+(const FiberValue& a, const FiberValue& b) {
  return {vadd(a.bar, b.bar), a.xi + b.xi};
}

inline FiberValue operator-(const FiberValue& a, const FiberValue& b) {
  return {vsub(a.bar, b.bar), a.xi - b.xi};
}

inline FiberValue operator*(double c, const FiberValue& a) {
  return {vscale(c, a.bar), c * a.xi};
}

inline void axpy(FiberValue& y, double a, const FiberValue& x) {
  axpy(y.bar, a, x.bar);
  axpy(y.xi, a, x.xi);
}

inline double max_abs(const FiberValue& v) {
  return std::max(max_abs(v.bar), std::abs(v.xi));
}

// ⟨X̄ + fξ, Ȳ + gξ⟩ = ⟨X, Y⟩_g + f g; ξ is unit and orthogonal to tangents.
inline double fiber_inner(const Mat4& g, const FiberValue& a, const FiberValue& b) {
  return quad(g, a.bar, b.bar) + a.xi * b.xi;
}

// Anchor: forget the ξ component.
inline Vec4 anchor(const FiberValue& v) { return v.bar; }

// A section given by component fields on the chart.
struct SectionField {
  std::function<Vec4(const Point&)> bar;
  std::function<double(const Point&)> xi;
};

inline FiberValue value_at(const SectionField& s, const Point& p) {
  return {s.bar(p), s.xi(p)};
}

inline SectionField constant_section(const FiberValue& v) {
  return {[v](const Point&) { return v.bar; }, [v](const Point&) { return v.xi; }};
}

// ē_i: bar-lift of the i-th coordinate vector field.
inline SectionField coordinate_lift(int i) {
  Vec4 e{};
  e[i] = 1.0;
  return constant_section({e, 0.0});
}

inline SectionField xi_section() { return constant_section({Vec4{}, 1.0}); }

// Index 4 addresses the ξ slot when fiber values are flattened to length 5.
inline constexpr int kXiSlot = 4;

inline Vec5 flatten(const FiberValue& v) {
  return {v.bar[0], v.bar[1], v.bar[2], v.bar[3], v.xi};
}

inline FiberValue unflatten(const Vec5& c) {
  return {{c[0], c[1], c[2], c[3]}, c[4]};
}

}  // namespace affmet

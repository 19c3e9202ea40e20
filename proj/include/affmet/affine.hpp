// Affine inner products.
//
// A symmetric pairing S on R^n is 2-affine when it has the shape
//   S(u, v) = offset + (u - center)^T B (v - center)
// for a symmetric bilinear form B, a center point, and a scalar offset.
// This module recovers (B, center, offset) from samples of S alone and
// builds the associated hat space: R^(n+1) with the block metric
// diag(B, offset) and the embedding x |-> (x - center, 1).
#pragma once

#include <cstddef>
#include <functional>

#include "core.hpp"

namespace affmet {

// A pairing available only through point evaluations.
struct AffinePairing {
  std::size_t dim = 0;
  std::function<double(const VecX&, const VecX&)> eval;
};

struct AffineDecomposition {
  MatX bilinear;
  VecX center;
  double offset = 0.0;
};

inline double evaluate(const AffineDecomposition& d, const VecX& u, const VecX& v) {
  const std::size_t n = d.bilinear.n;
  VecX du(n), dv(n);
  for (std::size_t i = 0; i < n; ++i) {
    du[i] = u[i] - d.center[i];
    dv[i] = v[i] - d.center[i];
  }
  return d.offset + quad(d.bilinear, du, dv);
}

// B_ij = S(e_i, e_j) - S(e_i, 0) - S(0, e_j) + S(0, 0).
// The four-term combination cancels both the offset and the center shift.
inline MatX bilinear_part(const AffinePairing& s, double tol = 1e-9) {
  const std::size_t n = s.dim;
  if (n == 0 || !s.eval) throw ContractError("bilinear_part: empty pairing");
  const VecX zero(n, 0.0);
  const double s00 = s.eval(zero, zero);
  VecX si0(n), s0j(n);
  std::vector<VecX> basis(n, zero);
  for (std::size_t i = 0; i < n; ++i) {
    basis[i][i] = 1.0;
    si0[i] = s.eval(basis[i], zero);
    s0j[i] = s.eval(zero, basis[i]);
  }
  MatX b(n);
  double scale = std::max(1.0, std::abs(s00));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      b(i, j) = s.eval(basis[i], basis[j]) - si0[i] - s0j[j] + s00;
      scale = std::max(scale, std::abs(b(i, j)));
    }
  if (max_asymmetry(b) > tol * scale)
    throw ContractError("bilinear_part: sampled pairing is not symmetric");
  // exact symmetrization so downstream solves see B = B^T
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double m = 0.5 * (b(i, j) + b(j, i));
      b(i, j) = m;
      b(j, i) = m;
    }
  return b;
}

// Scale-aware singularity test: |det B| below 1e-10 · (max entry)^dim.
inline bool is_degenerate(const MatX& b, double floor = 1e-10) {
  const double scale = max_abs(b);
  if (scale == 0.0) return true;
  return std::abs(det(b)) < floor * std::pow(scale, static_cast<double>(b.n));
}

// Recover (B, center, offset).  center solves B center = -l with
// l_i = S(e_i, 0) - S(0, 0); offset = S(0, 0) - center^T B center.
// The result is probed against S on random pairs; a mismatch means the
// input was not 2-affine in the first place.
inline AffineDecomposition decompose(const AffinePairing& s, double tol = 1e-8) {
  const std::size_t n = s.dim;
  MatX b = bilinear_part(s, tol);
  if (is_degenerate(b))
    throw DegeneracyError("decompose: bilinear part is degenerate, no center exists");

  const VecX zero(n, 0.0);
  const double s00 = s.eval(zero, zero);
  VecX rhs(n);
  for (std::size_t i = 0; i < n; ++i) {
    VecX ei(n, 0.0);
    ei[i] = 1.0;
    rhs[i] = -(s.eval(ei, zero) - s00);
  }
  VecX center;
  try {
    center = solve(b, rhs);
  } catch (const DegeneracyError&) {
    throw DegeneracyError("decompose: bilinear part is degenerate, no center exists");
  }

  AffineDecomposition d;
  d.bilinear = b;
  d.center = center;
  d.offset = s00 - quad(b, center, center);

  // round-trip probes on deterministic pseudo-random pairs
  Rng rng(0x5eedu + static_cast<std::uint32_t>(n));
  double scale = std::max({1.0, std::abs(s00), max_abs(b)});
  for (int probe = 0; probe < 8; ++probe) {
    VecX u(n), v(n);
    for (std::size_t i = 0; i < n; ++i) {
      u[i] = rng.uniform(-2.0, 2.0);
      v[i] = rng.uniform(-2.0, 2.0);
    }
    const double got = s.eval(u, v);
    const double rebuilt = evaluate(d, u, v);
    scale = std::max(scale, std::abs(got));
    if (std::abs(got - rebuilt) > 1e3 * tol * scale)
      throw ContractError("decompose: pairing is not 2-affine (round-trip probe failed)");
    if (std::abs(got - s.eval(v, u)) > tol * scale)
      throw ContractError("decompose: pairing is not symmetric");
  }
  return d;
}

// Block metric diag(B, offset) on R^(n+1).  Undefined when the offset
// vanishes: the extra direction would be null and the hat construction
// degenerates back to the ordinary inner-product case.
inline MatX hat_metric(const AffineDecomposition& d, double offset_floor = 1e-12) {
  const std::size_t n = d.bilinear.n;
  if (std::abs(d.offset) < offset_floor * std::max(1.0, max_abs(d.bilinear)))
    throw DegeneracyError("hat_metric: zero offset, hat metric is degenerate");
  MatX m(n + 1);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = d.bilinear(i, j);
  m(n, n) = d.offset;
  return m;
}

// x |-> (x - center, 1).  Defined for every decomposition, including
// offset == 0 where hat_metric is not.
inline VecX hat_embed(const AffineDecomposition& d, const VecX& x) {
  const std::size_t n = d.bilinear.n;
  VecX h(n + 1);
  for (std::size_t i = 0; i < n; ++i) h[i] = x[i] - d.center[i];
  h[n] = 1.0;
  return h;
}

// Tangent lift (y, 0); hat_embed(x) + bar_lift(y) == hat_embed(x + y).
inline VecX bar_lift(std::size_t dim, const VecX& y) {
  VecX h(dim + 1, 0.0);
  for (std::size_t i = 0; i < dim; ++i) h[i] = y[i];
  return h;
}

}  // namespace affmet

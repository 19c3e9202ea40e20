// Bracket, metric connection, curvature, and the block field equation on the
// extended bundle.
//
// Closed forms are the computational route; every one of them has a
// definition-chasing counterpart in this header (Koszul right-hand side,
// commutator-of-connections curvature, frame-traced Ricci) used for
// cross-validation.
#pragma once

#include <array>

#include "core.hpp"
#include "curvature.hpp"
#include "em.hpp"
#include "fd.hpp"
#include "metric.hpp"
#include "sections.hpp"

namespace affmet {

// Directional derivative of a scalar field along a fixed chart vector.
// Stencils step along the unit direction and the result is scaled back by
// |dir|, so the excursion never exceeds the coordinate-step margin no matter
// how large the section values get.
template <class Field>
double directional_derivative(Field&& phi, const Point& p, const Vec4& dir,
                              const FdConfig& fd) {
  const double mag = std::sqrt(dot(dir, dir));
  if (mag == 0.0) return 0.0;
  double acc = 0.0;
  for (const auto& tap : detail::first_derivative_taps(fd.order)) {
    Point qp = p, qm = p;
    for (int i = 0; i < 4; ++i) {
      const double shift = tap.offset * fd.step * dir[i] / mag;
      qp[i] += shift;
      qm[i] -= shift;
    }
    acc += (tap.weight / fd.step) * (phi(qp) - phi(qm));
  }
  acc *= mag;
  if (!fd.richardson) return acc;
  FdConfig half = fd;
  half.richardson = false;
  half.step = fd.step / 2.0;
  const double two_p = std::pow(2.0, fd.order);
  const double fine = directional_derivative(phi, p, dir, half);
  return (two_p * fine - acc) / (two_p - 1.0);
}

// [X̄ + fξ, Ȳ + gξ] = bar([X, Y]) + (2⟨F(X), Y⟩ + X(g) - Y(f)) ξ
inline FiberValue bracket(const MetricField& gf, const PotentialField& pf,
                          const SectionField& u, const SectionField& v,
                          const Point& p, const FdConfig& fd = {}) {
  require_inside(gf.box, p, fd_margin(fd, 1), "bracket");
  const Vec4 x = u.bar(p);
  const Vec4 y = v.bar(p);

  FiberValue out{};
  Mat4 du, dv;  // du[d] = ∂_d X, dv[d] = ∂_d Y
  for (int d = 0; d < 4; ++d) {
    du[d] = fd_partial([&](const Point& q) { return u.bar(q); }, p, d, fd);
    dv[d] = fd_partial([&](const Point& q) { return v.bar(q); }, p, d, fd);
  }
  for (int k = 0; k < 4; ++k) {
    double s = 0.0;
    for (int i = 0; i < 4; ++i) s += x[i] * dv[i][k] - y[i] * du[i][k];
    out.bar[k] = s;
  }

  const Faraday f = faraday(gf, pf, p, fd);
  out.xi = 2.0 * quad(f.lowered, x, y) +
           directional_derivative([&](const Point& q) { return v.xi(q); }, p, x, fd) -
           directional_derivative([&](const Point& q) { return u.xi(q); }, p, y, fd);
  return out;
}

// Closed form of the metric connection:
//   ∇̂_{X̄+fξ}(Ȳ+gξ) = bar(∇_X Y - g F(X) - f F(Y)) + (⟨F(X), Y⟩ + X(g)) ξ
inline FiberValue connection(const MetricField& gf, const PotentialField& pf,
                             const SectionField& u, const SectionField& v,
                             const Point& p, const FdConfig& fd = {}) {
  require_inside(gf.box, p, fd_margin(fd, 1), "connection");
  const Vec4 x = u.bar(p);
  const Vec4 y = v.bar(p);
  const double fu = u.xi(p);
  const double gv = v.xi(p);

  const Christoffel gamma = christoffel(gf, p, fd);
  const Faraday f = faraday(gf, pf, p, fd);

  Vec4 nabla_xy{};  // (∇_X Y)^k
  for (int d = 0; d < 4; ++d) {
    const Vec4 dy = fd_partial([&](const Point& q) { return v.bar(q); }, p, d, fd);
    for (int k = 0; k < 4; ++k) nabla_xy[k] += x[d] * dy[k];
  }
  for (int k = 0; k < 4; ++k)
    for (int i = 0; i < 4; ++i)
      for (int m = 0; m < 4; ++m) nabla_xy[k] += gamma[k][i][m] * x[i] * y[m];

  FiberValue out{};
  for (int k = 0; k < 4; ++k) {
    double fx = 0.0, fy = 0.0;  // F(X)^k, F(Y)^k
    for (int m = 0; m < 4; ++m) {
      fx += f.mixed[k][m] * x[m];
      fy += f.mixed[k][m] * y[m];
    }
    out.bar[k] = nabla_xy[k] - gv * fx - fu * fy;
  }
  out.xi = quad(f.lowered, x, y) +
           directional_derivative([&](const Point& q) { return v.xi(q); }, p, x, fd);
  return out;
}

// Right-hand side of the Koszul identity,
//   2⟨∇̂_U V, W⟩ = ρ(U)⟨V,W⟩ + ρ(V)⟨W,U⟩ - ρ(W)⟨U,V⟩
//                + ⟨[U,V], W⟩ - ⟨[V,W], U⟩ + ⟨[W,U], V⟩,
// evaluated with nothing but brackets and directional derivatives.  Used as
// the independent route to the connection.
inline double koszul_rhs(const MetricField& gf, const PotentialField& pf,
                         const SectionField& u, const SectionField& v,
                         const SectionField& w, const Point& p,
                         const FdConfig& fd = {}) {
  require_inside(gf.box, p, fd_margin(fd, 2), "koszul_rhs");
  auto pairing = [&](const SectionField& a, const SectionField& b) {
    return [&gf, &a, &b](const Point& q) {
      return fiber_inner(gf.component(q), value_at(a, q), value_at(b, q));
    };
  };
  const Vec4 ux = u.bar(p);
  const Vec4 vx = v.bar(p);
  const Vec4 wx = w.bar(p);
  const Mat4 g = gf.component(p);

  double s = directional_derivative(pairing(v, w), p, ux, fd) +
             directional_derivative(pairing(w, u), p, vx, fd) -
             directional_derivative(pairing(u, v), p, wx, fd);
  s += fiber_inner(g, bracket(gf, pf, u, v, p, fd), value_at(w, p));
  s -= fiber_inner(g, bracket(gf, pf, v, w, p, fd), value_at(u, p));
  s += fiber_inner(g, bracket(gf, pf, w, u, p, fd), value_at(v, p));
  return s;
}

// Connection recovered from the Koszul identity alone: pair against the
// coordinate lifts and ξ, then invert the fiber metric.
inline FiberValue connection_via_koszul(const MetricField& gf,
                                        const PotentialField& pf,
                                        const SectionField& u,
                                        const SectionField& v, const Point& p,
                                        const FdConfig& fd = {}) {
  Vec4 rhs_bar{};
  for (int l = 0; l < 4; ++l)
    rhs_bar[l] = 0.5 * koszul_rhs(gf, pf, u, v, coordinate_lift(l), p, fd);
  const double rhs_xi = 0.5 * koszul_rhs(gf, pf, u, v, xi_section(), p, fd);
  const Mat4 ginv = inverse(metric_at(gf, p));
  return {matvec(ginv, rhs_bar), rhs_xi};
}

// ---------------------------------------------------------------------------
// Curvature on the extended bundle

// Rhat[a][b][c] = R̂(E_a, E_b) E_c on the basis E_0..E_3 = ē_i, E_4 = ξ.
using HatCurvature = std::array<std::array<std::array<FiberValue, 5>, 5>, 5>;

// Closed forms, assembled from base curvature, F, and ∇F:
//   R̂(X̄,Ȳ)Z̄ = bar(R(X,Y)Z + ⟨Z,F(X)⟩F(Y) - ⟨Z,F(Y)⟩F(X) + 2⟨F(X),Y⟩F(Z))
//             + ⟨Z, (∇_X F)(Y) - (∇_Y F)(X)⟩ ξ
//   R̂(X̄,Ȳ)ξ  = bar((∇_Y F)(X) - (∇_X F)(Y))
//   R̂(X̄,ξ)Z̄  = -bar((∇_X F)(Z)) - ⟨F(X), F(Z)⟩ ξ
//   R̂(X̄,ξ)ξ  = -bar(F(F(X)))
inline HatCurvature curvature_hat(const MetricField& gf, const PotentialField& pf,
                                  const Point& p, const FdConfig& fd = {}) {
  require_inside(gf.box, p, fd_margin(fd, 2), "curvature_hat");
  const Mat4 g = metric_at(gf, p);
  const Riemann4 riem = riemann(gf, p, fd);
  const Faraday f = faraday(gf, pf, p, fd);
  const std::array<Mat4, 4> nf = nabla_faraday(gf, pf, p, fd);

  Mat4 ff{};  // (F²)^l_i
  for (int l = 0; l < 4; ++l)
    for (int i = 0; i < 4; ++i)
      for (int m = 0; m < 4; ++m) ff[l][i] += f.mixed[l][m] * f.mixed[m][i];
  Mat4 fxfz{};  // ⟨F(∂_i), F(∂_k)⟩
  for (int i = 0; i < 4; ++i)
    for (int k = 0; k < 4; ++k) {
      double s = 0.0;
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) s += f.mixed[a][i] * g[a][b] * f.mixed[b][k];
      fxfz[i][k] = s;
    }

  HatCurvature r{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      if (i == j) continue;
      for (int k = 0; k < 4; ++k) {
        FiberValue& out = r[i][j][k];
        for (int l = 0; l < 4; ++l)
          out.bar[l] = riem[l][k][i][j] + f.lowered[i][k] * f.mixed[l][j] -
                       f.lowered[j][k] * f.mixed[l][i] +
                       2.0 * f.lowered[i][j] * f.mixed[l][k];
        double s = 0.0;
        for (int l = 0; l < 4; ++l) s += g[k][l] * (nf[i][l][j] - nf[j][l][i]);
        out.xi = s;
      }
      for (int l = 0; l < 4; ++l) r[i][j][kXiSlot].bar[l] = nf[j][l][i] - nf[i][l][j];
    }
  for (int i = 0; i < 4; ++i) {
    for (int k = 0; k < 4; ++k) {
      FiberValue& out = r[i][kXiSlot][k];
      for (int l = 0; l < 4; ++l) out.bar[l] = -nf[i][l][k];
      out.xi = -fxfz[i][k];
      r[kXiSlot][i][k] = -1.0 * out;
    }
    FiberValue& top = r[i][kXiSlot][kXiSlot];
    for (int l = 0; l < 4; ++l) top.bar[l] = -ff[l][i];
    r[kXiSlot][i][kXiSlot] = -1.0 * top;
  }
  return r;
}

// Trilinear extension of a curvature table to arbitrary fiber values.
inline FiberValue apply_curvature(const HatCurvature& r, const FiberValue& u,
                                  const FiberValue& v, const FiberValue& w) {
  const Vec5 uc = flatten(u), vc = flatten(v), wc = flatten(w);
  FiberValue out{};
  for (int a = 0; a < 5; ++a) {
    if (uc[a] == 0.0) continue;
    for (int b = 0; b < 5; ++b) {
      if (vc[b] == 0.0) continue;
      for (int c = 0; c < 5; ++c) {
        const double coeff = uc[a] * vc[b] * wc[c];
        if (coeff == 0.0) continue;
        axpy(out, coeff, r[a][b][c]);
      }
    }
  }
  return out;
}

// Definition-chasing curvature:
//   R̂(U,V)W = ∇̂_U ∇̂_V W - ∇̂_V ∇̂_U W - ∇̂_[U,V] W,
// with the inner connections evaluated as fields and differenced numerically.
// The connection is tensorial in its direction slot, so the bracket enters
// through its pointwise value only.
inline FiberValue curvature_hat_oracle(const MetricField& gf,
                                       const PotentialField& pf,
                                       const SectionField& u, const SectionField& v,
                                       const SectionField& w, const Point& p,
                                       const FdConfig& fd = {}) {
  require_inside(gf.box, p, fd_margin(fd, 3), "curvature_hat_oracle");
  auto nested = [&](const SectionField& a, const SectionField& b) {
    return SectionField{
        [&gf, &pf, a, b, fd](const Point& q) { return connection(gf, pf, a, b, q, fd).bar; },
        [&gf, &pf, a, b, fd](const Point& q) { return connection(gf, pf, a, b, q, fd).xi; }};
  };
  const FiberValue term1 = connection(gf, pf, u, nested(v, w), p, fd);
  const FiberValue term2 = connection(gf, pf, v, nested(u, w), p, fd);
  const FiberValue br = bracket(gf, pf, u, v, p, fd);
  const FiberValue term3 = connection(gf, pf, constant_section(br), w, p, fd);
  return term1 - term2 - term3;
}

// ---------------------------------------------------------------------------
// Ricci on the extended bundle

// Mixed Ricci endomorphism on the (ē_i, ξ) basis:
//   R̂ic(X̄) = bar(Ric(X) + 2 F(F(X))) + ⟨div F, X⟩ ξ
//   R̂ic(ξ)  = bar(div F) - tr(F∘F) ξ
// Column A holds the components of R̂ic(E_A).
inline Mat5 ricci_hat(const MetricField& gf, const PotentialField& pf,
                      const Point& p, const FdConfig& fd = {}) {
  require_inside(gf.box, p, fd_margin(fd, 2), "ricci_hat");
  const CurvaturePack pack = curvature_pack(gf, p, fd);
  const Faraday f = faraday(gf, pf, p, fd);
  const std::array<Mat4, 4> nf = nabla_faraday(gf, pf, p, fd);
  const Vec4 divf = div_faraday(pack.ginv, nf);
  const Vec4 divf_low = matvec(pack.g, divf);

  Mat5 m{};
  for (int l = 0; l < 4; ++l)
    for (int j = 0; j < 4; ++j) {
      double ffsq = 0.0;
      for (int k = 0; k < 4; ++k) ffsq += f.mixed[l][k] * f.mixed[k][j];
      m[l][j] = pack.ric_mixed[l][j] + 2.0 * ffsq;
    }
  for (int j = 0; j < 4; ++j) {
    m[kXiSlot][j] = divf_low[j];
    m[j][kXiSlot] = divf[j];
  }
  m[kXiSlot][kXiSlot] = -trace_ff(f);
  return m;
}

// Frame-trace route: R̂ic(E) = Σ_a ε̂_a R̂(E, Ê_a) Ê_a over an orthonormal
// hat frame (orthonormal base frame plus ξ).  Independent of the closed form
// above except for the shared curvature table.
inline Mat5 ricci_hat_from_trace(const HatCurvature& r, const Mat4& g) {
  const OrthonormalFrame frame = orthonormal_frame(g);
  std::array<FiberValue, 5> hat_frame{};
  Vec5 eps{};
  for (int a = 0; a < 4; ++a) {
    hat_frame[a] = {frame.e[a], 0.0};
    eps[a] = frame.eps[a];
  }
  hat_frame[4] = {Vec4{}, 1.0};
  eps[4] = 1.0;

  Mat5 m{};
  for (int col = 0; col < 5; ++col) {
    FiberValue e_col{};
    if (col < 4)
      e_col.bar[col] = 1.0;
    else
      e_col.xi = 1.0;
    FiberValue acc{};
    for (int a = 0; a < 5; ++a)
      axpy(acc, eps[a], apply_curvature(r, e_col, hat_frame[a], hat_frame[a]));
    const Vec5 comps = flatten(acc);
    for (int row = 0; row < 5; ++row) m[row][col] = comps[row];
  }
  return m;
}

// ĝ = diag(g, 1); lowering the mixed Ricci must give a symmetric matrix.
inline Mat5 lower_hat(const Mat4& g, const Mat5& mixed) {
  Mat5 low{};
  for (int a = 0; a < 5; ++a)
    for (int b = 0; b < 5; ++b) {
      double s = 0.0;
      for (int c = 0; c < 5; ++c) {
        const double ghat = (a < 4 && c < 4) ? g[a][c] : (a == c ? 1.0 : 0.0);
        s += ghat * mixed[c][b];
      }
      low[a][b] = s;
    }
  return low;
}

// Scalar curvature of the extended bundle as a frame trace of the mixed
// Ricci; equals tr over the basis, kept in frame form as a consistency hook.
inline double scalar_hat_from(const Mat4& g, const Mat5& mixed_ricci) {
  const OrthonormalFrame frame = orthonormal_frame(g);
  double s = 0.0;
  for (int a = 0; a < 5; ++a) {
    Vec5 e{};
    double eps;
    if (a < 4) {
      for (int i = 0; i < 4; ++i) e[i] = frame.e[a][i];
      eps = frame.eps[a];
    } else {
      e[4] = 1.0;
      eps = 1.0;
    }
    Vec5 me{};
    for (int r = 0; r < 5; ++r)
      for (int c = 0; c < 5; ++c) me[r] += mixed_ricci[r][c] * e[c];
    const FiberValue mv = unflatten(me), ev = unflatten(e);
    s += eps * fiber_inner(g, mv, ev);
  }
  return s;
}

// ---------------------------------------------------------------------------
// Block field equation

// The three independent blocks of Ĝ = R̂ic♭ - ½ R̂ ĝ:
//   tangent-tangent  Ric_ij + 2(F∘F)_ij - ½ (R + trFF) g_ij
//   tangent-ξ        (div F)♭
//   ξ-ξ              -½ (R + 3 trFF)
struct EinsteinBlocks {
  Mat4 barbar{};
  Vec4 mixed{};
  double xixi = 0.0;
  double scalar = 0.0;      // base scalar curvature R
  double trff = 0.0;        // tr(F∘F)
  double scalar_hat = 0.0;  // R + trFF
  Mat4 g{};                 // metric at the evaluation point, kept for lowering
};

inline EinsteinBlocks einstein_blocks(const MetricField& gf,
                                      const PotentialField& pf, const Point& p,
                                      const FdConfig& fd = {}) {
  require_inside(gf.box, p, fd_margin(fd, 2), "einstein_blocks");
  const CurvaturePack pack = curvature_pack(gf, p, fd);
  const Faraday f = faraday(gf, pf, p, fd);
  const std::array<Mat4, 4> nf = nabla_faraday(gf, pf, p, fd);
  const Vec4 divf = div_faraday(pack.ginv, nf);

  EinsteinBlocks out;
  out.g = pack.g;
  out.scalar = pack.scalar;
  out.trff = trace_ff(f);
  out.scalar_hat = out.scalar + out.trff;
  const Mat4 ff = ff_lowered(pack.g, f);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      out.barbar[i][j] =
          pack.ric[i][j] + 2.0 * ff[i][j] - 0.5 * out.scalar_hat * pack.g[i][j];
  out.mixed = matvec(pack.g, divf);
  out.xixi = -0.5 * (out.scalar + 3.0 * out.trff);
  return out;
}

// Full lowered Ĝ assembled from the hat Ricci, for cross-checking the blocks.
inline Mat5 einstein_hat(const Mat4& g, const Mat5& mixed_ricci) {
  const Mat5 low = lower_hat(g, mixed_ricci);
  double rhat = 0.0;
  for (int a = 0; a < 5; ++a) rhat += mixed_ricci[a][a];
  Mat5 out{};
  for (int a = 0; a < 5; ++a)
    for (int b = 0; b < 5; ++b) {
      const double ghat = (a < 4 && b < 4) ? g[a][b] : (a == b ? 1.0 : 0.0);
      out[a][b] = low[a][b] - 0.5 * rhat * ghat;
    }
  return out;
}

// Matter sources: dust stress block, current, and charge-density scalar
// H = η²/ρ (charge per unit mass squared times density).
struct Sources {
  Mat4 mass_stress{};  // T^mass_ij, lowered
  Vec4 current{};      // J^i, contravariant
  double charge_scalar = 0.0;
};

// Each block residual carries max-abs and Frobenius norms; the aggregate is
// the full lowered 5×5 mismatch Ĝ - 8π T̂.
struct BlockResiduals {
  double barbar_max = 0.0;   // over G_barbar - 8π T^mass
  double barbar_frob = 0.0;
  double mixed_max = 0.0;    // over (div F)♭ - 8π J♭
  double mixed_frob = 0.0;
  double xixi_signed = 0.0;  // G_ξξ - 8π H, sign kept
  double xixi_max = 0.0;
  double total_max = 0.0;
  double total_frob = 0.0;
};

inline BlockResiduals block_residuals(const EinsteinBlocks& blocks,
                                      const Sources& src) {
  BlockResiduals r;
  Mat5 mismatch{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      const double d = blocks.barbar[i][j] - kEightPi * src.mass_stress[i][j];
      mismatch[i][j] = d;
      r.barbar_max = std::max(r.barbar_max, std::abs(d));
      r.barbar_frob += d * d;
    }
  r.barbar_frob = std::sqrt(r.barbar_frob);
  const Vec4 j_low = matvec(blocks.g, src.current);
  for (int i = 0; i < 4; ++i) {
    const double d = blocks.mixed[i] - kEightPi * j_low[i];
    mismatch[i][kXiSlot] = d;
    mismatch[kXiSlot][i] = d;
    r.mixed_max = std::max(r.mixed_max, std::abs(d));
    r.mixed_frob += d * d;
  }
  r.mixed_frob = std::sqrt(r.mixed_frob);
  r.xixi_signed = blocks.xixi - kEightPi * src.charge_scalar;
  r.xixi_max = std::abs(r.xixi_signed);
  mismatch[kXiSlot][kXiSlot] = r.xixi_signed;
  r.total_max = max_abs(mismatch);
  r.total_frob = frobenius(mismatch);
  return r;
}

}  // namespace affmet

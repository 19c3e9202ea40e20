// Levi-Civita connection and curvature by nested finite differences.
#pragma once

#include <array>

#include "core.hpp"
#include "fd.hpp"
#include "metric.hpp"

namespace affmet {

// Gamma[k][i][j] = Γ^k_{ij}
using Christoffel = std::array<Mat4, 4>;

// R[l][k][i][j]: l output slot, k argument slot, (i, j) plane, meaning
// R(∂_i, ∂_j)∂_k = R[l][k][i][j] ∂_l.
using Riemann4 = std::array<std::array<Mat4, 4>, 4>;

struct OrthonormalFrame {
  Mat4 e;    // e[a] = chart components of frame vector a
  Vec4 eps;  // ⟨e_a, e_a⟩, -1 for the first vector, +1 for the rest
};

// Γ^k_{ij} = ½ g^{kl} (∂_i g_{lj} + ∂_j g_{li} - ∂_l g_{ij})
inline Christoffel christoffel(const MetricField& gf, const Point& p,
                               const FdConfig& fd = {}) {
  require_inside(gf.box, p, fd_margin(fd, 1), "christoffel");
  const Mat4 ginv = inverse(metric_at(gf, p));
  std::array<Mat4, 4> dg;
  for (int d = 0; d < 4; ++d)
    dg[d] = fd_partial([&](const Point& q) { return gf.component(q); }, p, d, fd);
  Christoffel gamma{};
  for (int k = 0; k < 4; ++k)
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        double s = 0.0;
        for (int l = 0; l < 4; ++l)
          s += ginv[k][l] * (dg[i][l][j] + dg[j][l][i] - dg[l][i][j]);
        gamma[k][i][j] = 0.5 * s;
      }
  return gamma;
}

// R^l_{kij} = ∂_i Γ^l_{jk} - ∂_j Γ^l_{ik} + Γ^l_{im} Γ^m_{jk} - Γ^l_{jm} Γ^m_{ik}
inline Riemann4 riemann(const MetricField& gf, const Point& p,
                        const FdConfig& fd = {}) {
  require_inside(gf.box, p, fd_margin(fd, 2), "riemann");
  const Christoffel gamma = christoffel(gf, p, fd);
  std::array<Christoffel, 4> dgamma;  // dgamma[d][k][i][j] = ∂_d Γ^k_{ij}
  for (int d = 0; d < 4; ++d)
    dgamma[d] = fd_partial([&](const Point& q) { return christoffel(gf, q, fd); },
                           p, d, fd);
  Riemann4 r{};
  for (int l = 0; l < 4; ++l)
    for (int k = 0; k < 4; ++k)
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
          double s = dgamma[i][l][j][k] - dgamma[j][l][i][k];
          for (int m = 0; m < 4; ++m)
            s += gamma[l][i][m] * gamma[m][j][k] - gamma[l][j][m] * gamma[m][i][k];
          r[l][k][i][j] = s;
        }
  return r;
}

// Ric_ij = R^k_{ikj}
inline Mat4 ricci_from_riemann(const Riemann4& r) {
  Mat4 ric{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      double s = 0.0;
      for (int k = 0; k < 4; ++k) s += r[k][i][k][j];
      ric[i][j] = s;
    }
  return ric;
}

inline Mat4 ricci(const MetricField& gf, const Point& p, const FdConfig& fd = {}) {
  return ricci_from_riemann(riemann(gf, p, fd));
}

inline double scalar_curvature(const Mat4& ginv, const Mat4& ric) {
  double s = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) s += ginv[i][j] * ric[i][j];
  return s;
}

// Everything downstream consumers need at one point, computed once.
struct CurvaturePack {
  Mat4 g;
  Mat4 ginv;
  Christoffel gamma;
  Riemann4 riem;
  Mat4 ric;        // Ric_ij
  Mat4 ric_mixed;  // Ric^i_j
  double scalar = 0.0;
};

inline CurvaturePack curvature_pack(const MetricField& gf, const Point& p,
                                    const FdConfig& fd = {}) {
  CurvaturePack pack;
  pack.g = metric_at(gf, p);
  pack.ginv = inverse(pack.g);
  pack.gamma = christoffel(gf, p, fd);
  pack.riem = riemann(gf, p, fd);
  pack.ric = ricci_from_riemann(pack.riem);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      double s = 0.0;
      for (int k = 0; k < 4; ++k) s += pack.ginv[i][k] * pack.ric[k][j];
      pack.ric_mixed[i][j] = s;
    }
  pack.scalar = scalar_curvature(pack.ginv, pack.ric);
  return pack;
}

// Gram-Schmidt frame from the coordinate basis, timelike vector first.
inline OrthonormalFrame orthonormal_frame(const Mat4& g) {
  OrthonormalFrame frame{};
  Mat4 u{};
  for (int a = 0; a < 4; ++a) {
    Vec4 v{};
    v[a] = 1.0;
    for (int b = 0; b < a; ++b) {
      const double proj = frame.eps[b] * quad(g, v, u[b]);
      for (int i = 0; i < 4; ++i) v[i] -= proj * u[b][i];
    }
    const double nn = quad(g, v, v);
    if (std::abs(nn) < 1e-10 * std::max(1.0, max_abs(g)))
      throw FrameError("orthonormal_frame: near-null pivot in Gram-Schmidt");
    const double inv_len = 1.0 / std::sqrt(std::abs(nn));
    for (int i = 0; i < 4; ++i) u[a][i] = v[i] * inv_len;
    frame.eps[a] = nn < 0.0 ? -1.0 : 1.0;
  }
  int negative = 0;
  for (double e : frame.eps)
    if (e < 0.0) ++negative;
  if (negative != 1 || frame.eps[0] > 0.0)
    throw FrameError("orthonormal_frame: coordinate basis does not lead with time");
  frame.e = u;
  return frame;
}

inline OrthonormalFrame orthonormal_frame(const MetricField& gf, const Point& p) {
  return orthonormal_frame(metric_at(gf, p));
}

}  // namespace affmet

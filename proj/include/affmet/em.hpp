// Faraday tensor of a vector potential, its covariant derivative, divergence,
// and electromagnetic stress-energy.
//
// Conventions: the potential is stored contravariantly; the half-strength
// tensor F_ij = ½(∂_i A♭_j - ∂_j A♭_i) is the object every downstream formula
// consumes, so a uniform field of conventional strength B appears here as
// F_xy = B/2.
#pragma once

#include <array>
#include <functional>
#include <string>

#include "core.hpp"
#include "curvature.hpp"
#include "fd.hpp"
#include "metric.hpp"

namespace affmet {

struct PotentialField {
  std::function<Vec4(const Point&)> component;  // A^i
  std::string name = "potential";
};

struct Faraday {
  Mat4 lowered;  // lowered[i][j] = F_ij = ⟨F(∂_i), ∂_j⟩, antisymmetric by construction
  // mixed[k][j] = F(∂_j)^k, the endomorphism with ⟨F(u), w⟩ = u^i F_ij w^j;
  // (F u)^k = mixed[k][j] u^j.  Raising the other index would flip the sign.
  Mat4 mixed;
};

// Exterior-derivative route: difference the lowered one-form A♭ = g A and
// antisymmetrize exactly.
inline Faraday faraday(const MetricField& gf, const PotentialField& pf,
                       const Point& p, const FdConfig& fd = {}) {
  require_inside(gf.box, p, fd_margin(fd, 1), "faraday");
  auto lowered_potential = [&](const Point& q) {
    return matvec(gf.component(q), pf.component(q));
  };
  Mat4 d;  // d[i][j] = ∂_i A♭_j
  for (int i = 0; i < 4; ++i) d[i] = fd_partial(lowered_potential, p, i, fd);
  Faraday f{};
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) {
      const double v = 0.5 * (d[i][j] - d[j][i]);
      f.lowered[i][j] = v;
      f.lowered[j][i] = -v;
    }
  const Mat4 ginv = inverse(metric_at(gf, p));
  for (int k = 0; k < 4; ++k)
    for (int j = 0; j < 4; ++j) {
      double s = 0.0;
      for (int i = 0; i < 4; ++i) s += ginv[k][i] * f.lowered[j][i];
      f.mixed[k][j] = s;
    }
  return f;
}

// Covariant-derivative route: F_ij = ½(⟨∇_i A, ∂_j⟩ - ⟨∇_j A, ∂_i⟩).
// Agrees with the exterior route because the connection terms cancel in the
// antisymmetrization; kept as an independent computation for validation.
inline Mat4 faraday_covariant(const MetricField& gf, const PotentialField& pf,
                              const Point& p, const FdConfig& fd = {}) {
  require_inside(gf.box, p, fd_margin(fd, 1), "faraday_covariant");
  const Mat4 g = metric_at(gf, p);
  const Christoffel gamma = christoffel(gf, p, fd);
  const Vec4 a = pf.component(p);
  Mat4 da;  // da[i][m] = ∂_i A^m
  for (int i = 0; i < 4; ++i)
    da[i] = fd_partial([&](const Point& q) { return pf.component(q); }, p, i, fd);
  Mat4 nabla_a;  // nabla_a[i][m] = ∇_i A^m
  for (int i = 0; i < 4; ++i)
    for (int m = 0; m < 4; ++m) {
      double s = da[i][m];
      for (int k = 0; k < 4; ++k) s += gamma[m][i][k] * a[k];
      nabla_a[i][m] = s;
    }
  Mat4 low;  // low[i][j] = g_jm ∇_i A^m
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      double s = 0.0;
      for (int m = 0; m < 4; ++m) s += g[j][m] * nabla_a[i][m];
      low[i][j] = s;
    }
  Mat4 f{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) f[i][j] = 0.5 * (low[i][j] - low[j][i]);
  return f;
}

// (F∘F)_ij = ⟨F(F(∂_i)), ∂_j⟩ = F_im g^mn F_nj; symmetric regardless of the
// overall sign convention on F.
inline Mat4 ff_lowered(const Mat4& g, const Faraday& f) {
  Mat4 mm{};  // (F²)^k_i
  for (int k = 0; k < 4; ++k)
    for (int i = 0; i < 4; ++i) {
      double s = 0.0;
      for (int m = 0; m < 4; ++m) s += f.mixed[k][m] * f.mixed[m][i];
      mm[k][i] = s;
    }
  Mat4 out{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      double s = 0.0;
      for (int k = 0; k < 4; ++k) s += g[j][k] * mm[k][i];
      out[i][j] = s;
    }
  return out;
}

// tr(F∘F) = F^i_m F^m_i = -F_mn F^mn
inline double trace_ff(const Faraday& f) {
  double s = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int m = 0; m < 4; ++m) s += f.mixed[i][m] * f.mixed[m][i];
  return s;
}

// (∇_k F)^i_j = ∂_k F^i_j + Γ^i_{km} F^m_j - Γ^m_{kj} F^i_m
inline std::array<Mat4, 4> nabla_faraday(const MetricField& gf,
                                         const PotentialField& pf, const Point& p,
                                         const FdConfig& fd = {}) {
  require_inside(gf.box, p, fd_margin(fd, 2), "nabla_faraday");
  const Christoffel gamma = christoffel(gf, p, fd);
  const Faraday f = faraday(gf, pf, p, fd);
  std::array<Mat4, 4> df;  // df[k] = ∂_k F^i_j
  for (int k = 0; k < 4; ++k)
    df[k] = fd_partial([&](const Point& q) { return faraday(gf, pf, q, fd).mixed; },
                       p, k, fd);
  std::array<Mat4, 4> nf{};
  for (int k = 0; k < 4; ++k)
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        double s = df[k][i][j];
        for (int m = 0; m < 4; ++m)
          s += gamma[i][k][m] * f.mixed[m][j] - gamma[m][k][j] * f.mixed[i][m];
        nf[k][i][j] = s;
      }
  return nf;
}

// (div F)^i = g^{kj} (∇_k F)^i_j
inline Vec4 div_faraday(const Mat4& ginv, const std::array<Mat4, 4>& nf) {
  Vec4 d{};
  for (int i = 0; i < 4; ++i) {
    double s = 0.0;
    for (int k = 0; k < 4; ++k)
      for (int j = 0; j < 4; ++j) s += ginv[k][j] * nf[k][i][j];
    d[i] = s;
  }
  return d;
}

inline Vec4 div_faraday(const MetricField& gf, const PotentialField& pf,
                        const Point& p, const FdConfig& fd = {}) {
  return div_faraday(inverse(metric_at(gf, p)), nabla_faraday(gf, pf, p, fd));
}

// Same trace taken through an orthonormal frame: Σ_a ε_a (∇_{e_a} F)(e_a).
inline Vec4 div_faraday_frame(const OrthonormalFrame& frame,
                              const std::array<Mat4, 4>& nf) {
  Vec4 d{};
  for (int a = 0; a < 4; ++a)
    for (int i = 0; i < 4; ++i) {
      double s = 0.0;
      for (int k = 0; k < 4; ++k)
        for (int j = 0; j < 4; ++j) s += frame.e[a][k] * nf[k][i][j] * frame.e[a][j];
      d[i] += frame.eps[a] * s;
    }
  return d;
}

// T = (-1/4π) (F∘F - ¼ tr(F∘F) g); trace-free, quadratic in F.
inline Mat4 stress_energy_em(const Mat4& g, const Faraday& f) {
  const Mat4 ff = ff_lowered(g, f);
  const double tr = trace_ff(f);
  Mat4 t{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      t[i][j] = (-1.0 / (4.0 * kPi)) * (ff[i][j] - 0.25 * tr * g[i][j]);
  return t;
}

// Classical indexed form (1/4π)(F_im F_j{}^m - ¼ g_ij F_mn F^mn), written
// against the lowered tensor alone; agrees with stress_energy_em identically.
inline Mat4 stress_energy_em_indexed(const Mat4& g, const Mat4& ginv,
                                     const Mat4& lowered) {
  Mat4 up{};  // F^mn
  for (int m = 0; m < 4; ++m)
    for (int n = 0; n < 4; ++n) {
      double s = 0.0;
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) s += ginv[m][a] * ginv[n][b] * lowered[a][b];
      up[m][n] = s;
    }
  double fsq = 0.0;  // F_mn F^mn
  for (int m = 0; m < 4; ++m)
    for (int n = 0; n < 4; ++n) fsq += lowered[m][n] * up[m][n];
  Mat4 t{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      double fifj = 0.0;  // F_im F_j{}^m
      for (int m = 0; m < 4; ++m)
        for (int n = 0; n < 4; ++n) fifj += lowered[i][m] * ginv[m][n] * lowered[j][n];
      t[i][j] = (1.0 / (4.0 * kPi)) * (fifj - 0.25 * g[i][j] * fsq);
    }
  return t;
}

}  // namespace affmet

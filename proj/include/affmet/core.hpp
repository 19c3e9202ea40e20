// Small fixed-size / small dynamic linear algebra and shared plumbing.
#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace affmet {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kEightPi = 8.0 * kPi;

template <std::size_t N>
using Vec = std::array<double, N>;
template <std::size_t N>
using Mat = std::array<std::array<double, N>, N>;

using Vec4 = Vec<4>;
using Mat4 = Mat<4>;
using Vec5 = Vec<5>;
using Mat5 = Mat<5>;

// Chart coordinates of a spacetime event.
using Point = Vec4;

// ---------------------------------------------------------------------------
// Errors

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Bilinear part (or a matrix that must be inverted) is numerically singular.
struct DegeneracyError : Error {
  using Error::Error;
};

// Input violates a documented contract (asymmetric form, non-affine sample, ...).
struct ContractError : Error {
  using Error::Error;
};

// Point or stencil leaves the chart validity box.
struct BoxError : Error {
  using Error::Error;
};

// Metric fails the required Lorentzian signature.
struct SignatureError : Error {
  using Error::Error;
};

// Orthonormal frame construction hit a near-null pivot.
struct FrameError : Error {
  using Error::Error;
};

// Malformed scenario / input file.  Carries a line number when known.
struct ConfigError : Error {
  explicit ConfigError(const std::string& msg, int line = 0)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg), line_no(line) {}
  int line_no;
};

// ---------------------------------------------------------------------------
// Fixed-size helpers

template <std::size_t N>
Mat<N> identity() {
  Mat<N> m{};
  for (std::size_t i = 0; i < N; ++i) m[i][i] = 1.0;
  return m;
}

template <std::size_t N>
double dot(const Vec<N>& a, const Vec<N>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < N; ++i) s += a[i] * b[i];
  return s;
}

template <std::size_t N>
Vec<N> matvec(const Mat<N>& m, const Vec<N>& v) {
  Vec<N> r{};
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) r[i] += m[i][j] * v[j];
  return r;
}

template <std::size_t N>
Mat<N> matmul(const Mat<N>& a, const Mat<N>& b) {
  Mat<N> r{};
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t k = 0; k < N; ++k) {
      const double aik = a[i][k];
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < N; ++j) r[i][j] += aik * b[k][j];
    }
  return r;
}

// v^T m w
template <std::size_t N>
double quad(const Mat<N>& m, const Vec<N>& v, const Vec<N>& w) {
  double s = 0.0;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) s += v[i] * m[i][j] * w[j];
  return s;
}

template <std::size_t N>
Vec<N> vadd(const Vec<N>& a, const Vec<N>& b) {
  Vec<N> r;
  for (std::size_t i = 0; i < N; ++i) r[i] = a[i] + b[i];
  return r;
}

template <std::size_t N>
Vec<N> vsub(const Vec<N>& a, const Vec<N>& b) {
  Vec<N> r;
  for (std::size_t i = 0; i < N; ++i) r[i] = a[i] - b[i];
  return r;
}

template <std::size_t N>
Vec<N> vscale(double c, const Vec<N>& a) {
  Vec<N> r;
  for (std::size_t i = 0; i < N; ++i) r[i] = c * a[i];
  return r;
}

template <std::size_t N>
Mat<N> madd(const Mat<N>& a, const Mat<N>& b) {
  Mat<N> r;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) r[i][j] = a[i][j] + b[i][j];
  return r;
}

template <std::size_t N>
Mat<N> msub(const Mat<N>& a, const Mat<N>& b) {
  Mat<N> r;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) r[i][j] = a[i][j] - b[i][j];
  return r;
}

template <std::size_t N>
Mat<N> mscale(double c, const Mat<N>& a) {
  Mat<N> r;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) r[i][j] = c * a[i][j];
  return r;
}

template <std::size_t N>
double max_abs(const Vec<N>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

template <std::size_t N>
double max_abs(const Mat<N>& a) {
  double m = 0.0;
  for (const auto& row : a)
    for (double x : row) m = std::max(m, std::abs(x));
  return m;
}

template <std::size_t N>
double frobenius(const Mat<N>& a) {
  double s = 0.0;
  for (const auto& row : a)
    for (double x : row) s += x * x;
  return std::sqrt(s);
}

template <std::size_t N>
double norm2(const Vec<N>& v) {
  return std::sqrt(dot(v, v));
}

template <std::size_t N>
double max_asymmetry(const Mat<N>& a) {
  double m = 0.0;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = i + 1; j < N; ++j) m = std::max(m, std::abs(a[i][j] - a[j][i]));
  return m;
}

template <std::size_t N>
bool all_finite(const Vec<N>& v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

// Gauss-Jordan inverse with partial pivoting.  Throws DegeneracyError on a
// pivot below floor * max|entry|.
template <std::size_t N>
Mat<N> inverse(const Mat<N>& a, double rel_floor = 1e-13) {
  Mat<N> m = a;
  Mat<N> inv = identity<N>();
  const double scale = std::max(max_abs(a), 1e-300);
  for (std::size_t col = 0; col < N; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < N; ++r)
      if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
    if (std::abs(m[piv][col]) < rel_floor * scale)
      throw DegeneracyError("singular matrix in inverse()");
    std::swap(m[piv], m[col]);
    std::swap(inv[piv], inv[col]);
    const double d = 1.0 / m[col][col];
    for (std::size_t j = 0; j < N; ++j) {
      m[col][j] *= d;
      inv[col][j] *= d;
    }
    for (std::size_t r = 0; r < N; ++r) {
      if (r == col) continue;
      const double f = m[r][col];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < N; ++j) {
        m[r][j] -= f * m[col][j];
        inv[r][j] -= f * inv[col][j];
      }
    }
  }
  return inv;
}

// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations.
template <std::size_t N>
Vec<N> symmetric_eigenvalues(const Mat<N>& a, int max_sweeps = 50) {
  Mat<N> m = a;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = i + 1; j < N; ++j) off += m[i][j] * m[i][j];
    if (off < 1e-30) break;
    for (std::size_t p = 0; p < N; ++p)
      for (std::size_t q = p + 1; q < N; ++q) {
        if (std::abs(m[p][q]) < 1e-300) continue;
        const double theta = (m[q][q] - m[p][p]) / (2.0 * m[p][q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < N; ++k) {
          const double mkp = m[k][p], mkq = m[k][q];
          m[k][p] = c * mkp - s * mkq;
          m[k][q] = s * mkp + c * mkq;
        }
        for (std::size_t k = 0; k < N; ++k) {
          const double mpk = m[p][k], mqk = m[q][k];
          m[p][k] = c * mpk - s * mqk;
          m[q][k] = s * mpk + c * mqk;
        }
      }
  }
  Vec<N> ev;
  for (std::size_t i = 0; i < N; ++i) ev[i] = m[i][i];
  return ev;
}

// ---------------------------------------------------------------------------
// Dynamic-size matrix / vector (used by the affine-algebra module, where the
// dimension comes from input data).

using VecX = std::vector<double>;

struct MatX {
  std::size_t n = 0;
  std::vector<double> a;

  MatX() = default;
  explicit MatX(std::size_t dim) : n(dim), a(dim * dim, 0.0) {}

  double& operator()(std::size_t i, std::size_t j) { return a[i * n + j]; }
  double operator()(std::size_t i, std::size_t j) const { return a[i * n + j]; }

  static MatX eye(std::size_t dim) {
    MatX m(dim);
    for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
  }
};

inline VecX matvec(const MatX& m, const VecX& v) {
  VecX r(m.n, 0.0);
  for (std::size_t i = 0; i < m.n; ++i)
    for (std::size_t j = 0; j < m.n; ++j) r[i] += m(i, j) * v[j];
  return r;
}

// v^T m w
inline double quad(const MatX& m, const VecX& v, const VecX& w) {
  double s = 0.0;
  for (std::size_t i = 0; i < m.n; ++i)
    for (std::size_t j = 0; j < m.n; ++j) s += v[i] * m(i, j) * w[j];
  return s;
}

inline double max_abs(const MatX& m) {
  double r = 0.0;
  for (double x : m.a) r = std::max(r, std::abs(x));
  return r;
}

inline double max_abs(const VecX& v) {
  double r = 0.0;
  for (double x : v) r = std::max(r, std::abs(x));
  return r;
}

inline double max_asymmetry(const MatX& m) {
  double r = 0.0;
  for (std::size_t i = 0; i < m.n; ++i)
    for (std::size_t j = i + 1; j < m.n; ++j)
      r = std::max(r, std::abs(m(i, j) - m(j, i)));
  return r;
}

// LU determinant (partial pivoting).
inline double det(const MatX& m0) {
  MatX m = m0;
  const std::size_t n = m.n;
  double d = 1.0;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(m(r, col)) > std::abs(m(piv, col))) piv = r;
    if (m(piv, col) == 0.0) return 0.0;
    if (piv != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(piv, j), m(col, j));
      d = -d;
    }
    d *= m(col, col);
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = m(r, col) / m(col, col);
      for (std::size_t j = col; j < n; ++j) m(r, j) -= f * m(col, j);
    }
  }
  return d;
}

// Solve m x = b by Gaussian elimination with partial pivoting.
inline VecX solve(const MatX& m0, const VecX& b0, double rel_floor = 1e-13) {
  MatX m = m0;
  VecX b = b0;
  const std::size_t n = m.n;
  const double scale = std::max(max_abs(m0), 1e-300);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(m(r, col)) > std::abs(m(piv, col))) piv = r;
    if (std::abs(m(piv, col)) < rel_floor * scale)
      throw DegeneracyError("singular system in solve()");
    if (piv != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(piv, j), m(col, j));
      std::swap(b[piv], b[col]);
    }
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = m(r, col) / m(col, col);
      for (std::size_t j = col; j < n; ++j) m(r, j) -= f * m(col, j);
      b[r] -= f * b[col];
    }
  }
  VecX x(n, 0.0);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= m(i, j) * x[j];
    x[i] = s / m(i, i);
  }
  return x;
}

// ---------------------------------------------------------------------------
// Chart validity box

struct Box {
  Vec4 lo{-1.0, -1.0, -1.0, -1.0};
  Vec4 hi{1.0, 1.0, 1.0, 1.0};

  bool contains(const Point& p, double margin = 0.0) const {
    for (int i = 0; i < 4; ++i) {
      if (!std::isfinite(p[i])) return false;
      if (p[i] < lo[i] + margin || p[i] > hi[i] - margin) return false;
    }
    return true;
  }
};

inline void require_inside(const Box& box, const Point& p, double margin,
                           const char* what) {
  if (!box.contains(p, margin))
    throw BoxError(std::string(what) + ": point (or its stencil) leaves the validity box");
}

// ---------------------------------------------------------------------------
// Deterministic RNG.  Raw mt19937 draws are mapped to doubles directly so the
// stream does not depend on the standard library's distribution internals.

struct Rng {
  std::mt19937 gen;

  explicit Rng(std::uint32_t seed) : gen(seed) {}

  // uniform in [0, 1), 53 random bits
  double unit() {
    const double a = static_cast<double>(gen() >> 5);  // 27 bits
    const double b = static_cast<double>(gen() >> 6);  // 26 bits
    return (a * 67108864.0 + b) * (1.0 / 9007199254740992.0);
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

  int index(int n) { return static_cast<int>(gen() % static_cast<std::uint32_t>(n)); }
};

}  // namespace affmet

// Built-in metric and potential families, keyed by name + parameter map.
//
// Charts: Minkowski-like families use (t, x, y, z); the spherical families
// use (t, r, theta, phi).  Every family fixes its own validity box; scenario
// regions are intersected with it.
#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "core.hpp"
#include "em.hpp"
#include "metric.hpp"
#include "sections.hpp"

namespace affmet {

using ParamMap = std::map<std::string, double>;

inline double param_or(const ParamMap& params, const std::string& key,
                       double fallback) {
  auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

// ---------------------------------------------------------------------------
// Sparse polynomials in the four chart coordinates, with exact derivatives.

struct Poly4 {
  struct Term {
    double coef;
    std::array<int, 4> expo;
  };
  std::vector<Term> terms;

  double operator()(const Point& p) const {
    double s = 0.0;
    for (const Term& t : terms) {
      double m = t.coef;
      for (int i = 0; i < 4; ++i)
        for (int e = 0; e < t.expo[i]; ++e) m *= p[i];
      s += m;
    }
    return s;
  }

  Poly4 partial(int dir) const {
    Poly4 d;
    for (const Term& t : terms) {
      if (t.expo[dir] == 0) continue;
      Term dt = t;
      dt.coef *= t.expo[dir];
      dt.expo[dir] -= 1;
      d.terms.push_back(dt);
    }
    return d;
  }

  static Poly4 random(Rng& rng, int n_terms, int max_degree, double amp) {
    Poly4 p;
    for (int t = 0; t < n_terms; ++t) {
      Term term;
      term.coef = rng.uniform(-amp, amp);
      int budget = rng.index(max_degree + 1);
      term.expo = {0, 0, 0, 0};
      for (int d = 0; d < budget; ++d) term.expo[rng.index(4)] += 1;
      p.terms.push_back(term);
    }
    return p;
  }
};

// ---------------------------------------------------------------------------
// Metric families

inline MetricField make_minkowski() {
  MetricField gf;
  gf.name = "minkowski";
  gf.box = Box{{-1e6, -1e6, -1e6, -1e6}, {1e6, 1e6, 1e6, 1e6}};
  gf.component = [](const Point&) {
    Mat4 g{};
    g[0][0] = -1.0;
    g[1][1] = g[2][2] = g[3][3] = 1.0;
    return g;
  };
  gf.reference_partial = [](const Point&, int) { return Mat4{}; };
  return gf;
}

// diag(-f, 1/f, r², r² sin²θ) with f = 1 - 2M/r (+ Q²/r² when charged)
inline MetricField make_spherical_static(double mass, double charge,
                                         const std::string& name) {
  auto f_of = [mass, charge](double r) {
    return 1.0 - 2.0 * mass / r + charge * charge / (r * r);
  };
  auto fprime = [mass, charge](double r) {
    return 2.0 * mass / (r * r) - 2.0 * charge * charge / (r * r * r);
  };
  MetricField gf;
  gf.name = name;
  const double rq = std::sqrt(std::max(mass * mass - charge * charge, 0.0));
  const double horizon = mass + rq;
  gf.box = Box{{-1e6, horizon * 1.02 + 0.05, 0.05, -1e6},
               {1e6, 1e4, kPi - 0.05, 1e6}};
  gf.component = [f_of](const Point& p) {
    const double r = p[1], th = p[2];
    Mat4 g{};
    g[0][0] = -f_of(r);
    g[1][1] = 1.0 / f_of(r);
    g[2][2] = r * r;
    g[3][3] = r * r * std::sin(th) * std::sin(th);
    return g;
  };
  gf.reference_partial = [f_of, fprime](const Point& p, int dir) {
    const double r = p[1], th = p[2];
    Mat4 d{};
    if (dir == 1) {
      const double f = f_of(r), fp = fprime(r);
      d[0][0] = -fp;
      d[1][1] = -fp / (f * f);
      d[2][2] = 2.0 * r;
      d[3][3] = 2.0 * r * std::sin(th) * std::sin(th);
    } else if (dir == 2) {
      d[3][3] = 2.0 * r * r * std::sin(th) * std::cos(th);
    }
    return d;
  };
  return gf;
}

// Minkowski plus a random symmetric polynomial perturbation, small enough to
// stay Lorentzian on the unit box.
inline MetricField make_poly_metric(std::uint32_t seed, double amp) {
  auto perturb = std::make_shared<std::array<std::array<Poly4, 4>, 4>>();
  Rng rng(seed);
  for (int i = 0; i < 4; ++i)
    for (int j = i; j < 4; ++j) {
      (*perturb)[i][j] = Poly4::random(rng, 6, 3, amp);
      (*perturb)[j][i] = (*perturb)[i][j];
    }
  MetricField gf;
  gf.name = "poly";
  gf.box = Box{{-0.5, -0.5, -0.5, -0.5}, {0.5, 0.5, 0.5, 0.5}};
  gf.component = [perturb](const Point& p) {
    Mat4 g{};
    g[0][0] = -1.0;
    g[1][1] = g[2][2] = g[3][3] = 1.0;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) g[i][j] += (*perturb)[i][j](p);
    return g;
  };
  gf.reference_partial = [perturb](const Point& p, int dir) {
    Mat4 d{};
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) d[i][j] = (*perturb)[i][j].partial(dir)(p);
    return d;
  };
  return gf;
}

inline MetricField make_metric(const std::string& name, const ParamMap& params) {
  if (name == "minkowski") return make_minkowski();
  if (name == "schwarzschild")
    return make_spherical_static(param_or(params, "M", 1.0), 0.0, name);
  if (name == "reissner_nordstrom")
    return make_spherical_static(param_or(params, "M", 1.0),
                                 param_or(params, "Q", 0.5), name);
  if (name == "poly")
    return make_poly_metric(
        static_cast<std::uint32_t>(param_or(params, "seed", 1.0)),
        param_or(params, "amp", 0.02));
  throw ConfigError("unknown metric family '" + name +
                    "' (known: minkowski, schwarzschild, reissner_nordstrom, poly)");
}

// ---------------------------------------------------------------------------
// Potential families.  Each is defined by its lowered one-form A♭ and raised
// through the metric, except the polynomial family which is directly
// contravariant.

inline PotentialField raise_form(const MetricField& gf,
                                 std::function<Vec4(const Point&)> lowered,
                                 const std::string& name) {
  PotentialField pf;
  pf.name = name;
  auto metric = gf.component;
  pf.component = [metric, lowered](const Point& p) {
    return matvec(inverse(metric(p)), lowered(p));
  };
  return pf;
}

inline PotentialField make_potential(const std::string& name,
                                     const ParamMap& params,
                                     const MetricField& gf) {
  if (name == "zero") {
    PotentialField pf;
    pf.name = "zero";
    pf.component = [](const Point&) { return Vec4{}; };
    return pf;
  }
  if (name == "uniform") {
    // A♭ = (0, 0, B x¹, 0): F_xy = B/2
    const double b = param_or(params, "B", 1.0);
    return raise_form(
        gf, [b](const Point& p) { return Vec4{0.0, 0.0, b * p[1], 0.0}; }, name);
  }
  if (name == "coulomb") {
    // A♭ = (-scale·q/r, 0, 0, 0) on a spherical chart; scale 2 makes the
    // stored half-strength F match the unit system's source convention
    const double q = param_or(params, "q", 1.0);
    const double scale = param_or(params, "scale", 2.0);
    return raise_form(
        gf,
        [q, scale](const Point& p) {
          return Vec4{-scale * q / p[1], 0.0, 0.0, 0.0};
        },
        name);
  }
  if (name == "plane_wave") {
    const double amp = param_or(params, "amp", 0.1);
    const double omega = param_or(params, "omega", 1.0);
    return raise_form(
        gf,
        [amp, omega](const Point& p) {
          return Vec4{0.0, 0.0, amp * std::sin(omega * (p[0] - p[1])), 0.0};
        },
        name);
  }
  if (name == "poly") {
    auto comps = std::make_shared<std::array<Poly4, 4>>();
    Rng rng(static_cast<std::uint32_t>(param_or(params, "seed", 2.0)) ^ 0x9e3779b9u);
    for (int i = 0; i < 4; ++i)
      (*comps)[i] = Poly4::random(rng, 6, 3, param_or(params, "amp", 0.1));
    PotentialField pf;
    pf.name = "poly";
    pf.component = [comps](const Point& p) {
      Vec4 a;
      for (int i = 0; i < 4; ++i) a[i] = (*comps)[i](p);
      return a;
    };
    return pf;
  }
  throw ConfigError("unknown potential family '" + name +
                    "' (known: zero, uniform, coulomb, plane_wave, poly)");
}

// ---------------------------------------------------------------------------
// Deterministic pools of smooth sections for oracle sweeps: polynomial bar
// components and xi coefficient, so stencils are near-exact.

inline std::vector<SectionField> random_sections(std::uint32_t seed, int count,
                                                 double amp = 0.6) {
  std::vector<SectionField> pool;
  Rng rng(seed);
  for (int s = 0; s < count; ++s) {
    auto bar = std::make_shared<std::array<Poly4, 4>>();
    auto xi = std::make_shared<Poly4>(Poly4::random(rng, 4, 3, amp));
    for (int i = 0; i < 4; ++i) (*bar)[i] = Poly4::random(rng, 4, 3, amp);
    pool.push_back(SectionField{
        [bar](const Point& p) {
          Vec4 v;
          for (int i = 0; i < 4; ++i) v[i] = (*bar)[i](p);
          return v;
        },
        [xi](const Point& p) { return (*xi)(p); }});
  }
  return pool;
}

}  // namespace affmet

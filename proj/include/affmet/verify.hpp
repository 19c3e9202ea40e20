// Identity suites run by `affmet verify` and by the acceptance harness:
// Koszul equivalence, curvature equivalence, Ricci trace chain, and the
// scalar identity, each reporting its worst violation over a grid.
#pragma once

#include <string>
#include <vector>

#include "algebroid.hpp"
#include "core.hpp"
#include "families.hpp"
#include "scenario.hpp"
#include "sections.hpp"

namespace affmet {

struct SuiteResult {
  std::string name;
  double worst = 0.0;
  double tol = 0.0;
  long checks = 0;
  bool pass() const { return worst < tol; }
};

// |a - b| over a scale that saturates at 1 so tiny values are compared
// absolutely and large values relatively.
inline double rel_gap(double a, double b) {
  return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

inline double rel_gap(const FiberValue& a, const FiberValue& b) {
  const double scale = std::max({1.0, max_abs(a), max_abs(b)});
  return max_abs(a - b) / scale;
}

// Deterministic pool: polynomial sections plus the coordinate lifts and ξ.
inline std::vector<SectionField> verify_section_pool(std::uint32_t seed) {
  std::vector<SectionField> pool = random_sections(seed, 6);
  for (int i = 0; i < 4; ++i) pool.push_back(coordinate_lift(i));
  pool.push_back(xi_section());
  return pool;
}

// ⟨closed-form ∇̂_U V, W⟩ against the six-term Koszul right-hand side.
inline SuiteResult koszul_suite(const MetricField& gf, const PotentialField& pf,
                                const std::vector<Point>& points,
                                const FdConfig& fd, std::uint32_t seed,
                                double tol, int triples_per_point = 20) {
  SuiteResult res{"koszul", 0.0, tol, 0};
  const auto pool = verify_section_pool(seed);
  Rng rng(seed ^ 0xabcd1234u);
  for (const Point& p : points) {
    for (int t = 0; t < triples_per_point; ++t) {
      const SectionField& u = pool[rng.index(static_cast<int>(pool.size()))];
      const SectionField& v = pool[rng.index(static_cast<int>(pool.size()))];
      const SectionField& w = pool[rng.index(static_cast<int>(pool.size()))];
      const double lhs = 2.0 * fiber_inner(gf.component(p),
                                           connection(gf, pf, u, v, p, fd),
                                           value_at(w, p));
      const double rhs = koszul_rhs(gf, pf, u, v, w, p, fd);
      res.worst = std::max(res.worst, rel_gap(lhs, rhs));
      ++res.checks;
    }
  }
  return res;
}

// Brute-force R̂ from the connection against the closed-form table.
inline SuiteResult curvature_suite(const MetricField& gf, const PotentialField& pf,
                                   const std::vector<Point>& points,
                                   const FdConfig& fd, std::uint32_t seed,
                                   double tol, int triples_per_point = 6) {
  SuiteResult res{"curvature", 0.0, tol, 0};
  const auto pool = verify_section_pool(seed);
  Rng rng(seed ^ 0x5a5a5a5au);
  for (const Point& p : points) {
    const HatCurvature table = curvature_hat(gf, pf, p, fd);
    for (int t = 0; t < triples_per_point; ++t) {
      const SectionField& u = pool[rng.index(static_cast<int>(pool.size()))];
      const SectionField& v = pool[rng.index(static_cast<int>(pool.size()))];
      const SectionField& w = pool[rng.index(static_cast<int>(pool.size()))];
      const FiberValue closed =
          apply_curvature(table, value_at(u, p), value_at(v, p), value_at(w, p));
      const FiberValue brute = curvature_hat_oracle(gf, pf, u, v, w, p, fd);
      res.worst = std::max(res.worst, rel_gap(closed, brute));
      ++res.checks;
    }
  }
  return res;
}

// Closed-form hat Ricci against the frame trace of the curvature table.
inline SuiteResult ricci_trace_suite(const MetricField& gf,
                                     const PotentialField& pf,
                                     const std::vector<Point>& points,
                                     const FdConfig& fd, double tol) {
  SuiteResult res{"ricci_trace", 0.0, tol, 0};
  for (const Point& p : points) {
    const Mat5 closed = ricci_hat(gf, pf, p, fd);
    const Mat5 traced = ricci_hat_from_trace(curvature_hat(gf, pf, p, fd),
                                             metric_at(gf, p));
    double scale = 1.0;
    for (int a = 0; a < 5; ++a)
      for (int b = 0; b < 5; ++b)
        scale = std::max({scale, std::abs(closed[a][b]), std::abs(traced[a][b])});
    for (int a = 0; a < 5; ++a)
      for (int b = 0; b < 5; ++b) {
        res.worst = std::max(res.worst, std::abs(closed[a][b] - traced[a][b]) / scale);
        ++res.checks;
      }
  }
  return res;
}

// Frame trace of the hat Ricci against R + tr(F∘F).
inline SuiteResult scalar_suite(const MetricField& gf, const PotentialField& pf,
                                const std::vector<Point>& points,
                                const FdConfig& fd, double tol) {
  SuiteResult res{"scalar_identity", 0.0, tol, 0};
  for (const Point& p : points) {
    const Mat4 g = metric_at(gf, p);
    const double lhs = scalar_hat_from(g, ricci_hat(gf, pf, p, fd));
    const CurvaturePack pack = curvature_pack(gf, p, fd);
    const double rhs = pack.scalar + trace_ff(faraday(gf, pf, p, fd));
    res.worst = std::max(res.worst, rel_gap(lhs, rhs));
    ++res.checks;
  }
  return res;
}

inline std::vector<SuiteResult> run_verify_suites(const ScenarioRun& run) {
  const Scenario& sc = run.sc;
  std::vector<SuiteResult> out;
  out.push_back(koszul_suite(run.gf, run.pf, run.grid, sc.fd, sc.seed,
                             tolerance(sc, "koszul", 1e-6)));
  out.push_back(curvature_suite(run.gf, run.pf, run.grid, sc.fd, sc.seed,
                                tolerance(sc, "curvature", 1e-5)));
  out.push_back(ricci_trace_suite(run.gf, run.pf, run.grid, sc.fd,
                                  tolerance(sc, "ricci_trace", 1e-6)));
  out.push_back(scalar_suite(run.gf, run.pf, run.grid, sc.fd,
                             tolerance(sc, "scalar", 1e-6)));
  return out;
}

}  // namespace affmet

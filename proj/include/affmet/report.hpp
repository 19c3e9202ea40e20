// Deterministic text reports: fixed formatting, fixed key order, and the
// unit-system banner on everything.
#pragma once

#include <cstdio>
#include <ostream>
#include <string>

#include "algebroid.hpp"
#include "core.hpp"
#include "dynamics.hpp"
#include "scenario.hpp"
#include "verify.hpp"

namespace affmet {

inline std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12e", x);
  return buf;
}

inline const char* kUnitBanner = "# units: c=1 G=1 eps0=1/(16*pi)";

inline void write_banner(std::ostream& out, const std::string& title,
                         const Scenario& sc) {
  out << "# " << title << "\n" << kUnitBanner << "\n";
  if (!sc.origin.empty()) out << "# scenario: " << sc.origin << "\n";
  out << "# metric: " << sc.metric_name << "  potential: " << sc.potential_name
      << "\n";
}

inline void write_mat4(std::ostream& out, const std::string& key, const Mat4& m) {
  for (int i = 0; i < 4; ++i) {
    out << key << ".row" << i << " =";
    for (int j = 0; j < 4; ++j) out << " " << fmt(m[i][j]);
    out << "\n";
  }
}

inline void write_mat5(std::ostream& out, const std::string& key, const Mat5& m) {
  for (int i = 0; i < 5; ++i) {
    out << key << ".row" << i << " =";
    for (int j = 0; j < 5; ++j) out << " " << fmt(m[i][j]);
    out << "\n";
  }
}

inline void write_verify_report(std::ostream& out, const Scenario& sc,
                                std::size_t grid_size,
                                const std::vector<SuiteResult>& suites) {
  write_banner(out, "affmet verify", sc);
  out << "# grid: " << grid_size << " points  seed: " << sc.seed << "\n";
  bool all_pass = true;
  for (const SuiteResult& s : suites) {
    out << s.name << " checks " << s.checks << "  worst " << fmt(s.worst)
        << "  tol " << fmt(s.tol) << "  " << (s.pass() ? "pass" : "FAIL") << "\n";
    all_pass = all_pass && s.pass();
  }
  out << "result = " << (all_pass ? "pass" : "FAIL") << "\n";
}

// Key order: point, R, trFF, Rhat, ricci_hat rows, blocks.
inline void write_curvature_report(std::ostream& out, const Scenario& sc,
                                   const Point& p, const Mat5& ricci,
                                   const EinsteinBlocks& blocks) {
  write_banner(out, "affmet curvature", sc);
  out << "point =";
  for (double c : p) out << " " << fmt(c);
  out << "\n";
  out << "R = " << fmt(blocks.scalar) << "\n";
  out << "trFF = " << fmt(blocks.trff) << "\n";
  out << "Rhat = " << fmt(blocks.scalar_hat) << "\n";
  write_mat5(out, "ricci_hat", ricci);
  write_mat4(out, "einstein.barbar", blocks.barbar);
  out << "einstein.mixed =";
  for (double c : blocks.mixed) out << " " << fmt(c);
  out << "\n";
  out << "einstein.xixi = " << fmt(blocks.xixi) << "\n";
}

struct ResidualRecord {
  Point p{};
  BlockResiduals res;
  double scalar = 0.0;
  double trff = 0.0;
  double scalar_hat = 0.0;
};

inline void write_residual_report(std::ostream& out, const Scenario& sc,
                                  const std::vector<ResidualRecord>& records) {
  write_banner(out, "affmet residuals", sc);
  out << "# per point: coordinates, block residual norms (max, frobenius), "
         "scalar invariants\n";
  BlockResiduals worst;
  for (std::size_t k = 0; k < records.size(); ++k) {
    const ResidualRecord& r = records[k];
    out << "point " << k << " =";
    for (double c : r.p) out << " " << fmt(c);
    out << "\n";
    out << "  residual.einstein = " << fmt(r.res.barbar_max) << " "
        << fmt(r.res.barbar_frob) << "\n";
    out << "  residual.maxwell = " << fmt(r.res.mixed_max) << " "
        << fmt(r.res.mixed_frob) << "\n";
    out << "  residual.scalar = " << fmt(r.res.xixi_max) << " signed "
        << fmt(r.res.xixi_signed) << "\n";
    out << "  residual.total = " << fmt(r.res.total_max) << " "
        << fmt(r.res.total_frob) << "\n";
    out << "  R = " << fmt(r.scalar) << "  trFF = " << fmt(r.trff)
        << "  Rhat = " << fmt(r.scalar_hat) << "\n";
    worst.barbar_max = std::max(worst.barbar_max, r.res.barbar_max);
    worst.mixed_max = std::max(worst.mixed_max, r.res.mixed_max);
    worst.xixi_max = std::max(worst.xixi_max, r.res.xixi_max);
    worst.total_max = std::max(worst.total_max, r.res.total_max);
  }
  out << "summary.einstein.max = " << fmt(worst.barbar_max) << "\n";
  out << "summary.maxwell.max = " << fmt(worst.mixed_max) << "\n";
  out << "summary.scalar.max = " << fmt(worst.xixi_max) << "\n";
  out << "summary.total.max = " << fmt(worst.total_max) << "\n";
}

inline void write_trajectory(std::ostream& out, const Scenario& sc,
                             const Trajectory& traj) {
  write_banner(out, "affmet geodesic", sc);
  out << "# lambda = " << fmt(traj.lambda) << "\n";
  out << "# columns: tau x0 x1 x2 x3 u0 u1 u2 u3 norm_drift\n";
  for (const TrajectorySample& s : traj.samples) {
    out << fmt(s.tau);
    for (double c : s.x) out << " " << fmt(c);
    for (double c : s.u) out << " " << fmt(c);
    out << " " << fmt(s.norm_drift) << "\n";
  }
  out << "# status: "
      << (traj.status == TrajectoryStatus::complete ? "complete" : "left_box");
  if (!traj.note.empty()) out << " (" << traj.note << ")";
  out << "\n# max_norm_drift = " << fmt(traj.max_norm_drift) << "\n";
}

}  // namespace affmet

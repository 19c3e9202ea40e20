// World-lines of charged particles: fixed-step 4th-order integration of
//   du^k/dτ = -Γ^k_{ij} u^i u^j + 2λ F^k_j u^j,
// the base-manifold shadow of a straight line in the extended bundle whose
// constant fifth component λ is the charge-to-mass ratio.
#pragma once

#include <string>
#include <vector>

#include "algebroid.hpp"
#include "core.hpp"
#include "curvature.hpp"
#include "em.hpp"
#include "fd.hpp"
#include "metric.hpp"

namespace affmet {

struct WorldlineState {
  Point x{};
  Vec4 u{};
  double lambda = 0.0;
  double tau = 0.0;
};

struct TrajectorySample {
  double tau = 0.0;
  Point x{};
  Vec4 u{};
  double norm_u = 0.0;      // ⟨u,u⟩ at the sample
  double norm_drift = 0.0;  // ⟨u,u⟩ - ⟨u,u⟩ at τ0
  double energy = 0.0;      // -(g u)_0; constant when ∂_t is Killing
};

enum class TrajectoryStatus { complete, left_box };

struct Trajectory {
  std::vector<TrajectorySample> samples;
  TrajectoryStatus status = TrajectoryStatus::complete;
  std::string note;
  double lambda = 0.0;
  double max_norm_drift = 0.0;
};

struct IntegrateOptions {
  bool normalize = false;    // rescale timelike u0 to ⟨u,u⟩ = -1
  double norm_tol = 1e-9;    // acceptance band for already-normalized input
};

// dx = u; du^k = -Γ^k_{ij} u^i u^j + 2λ F^k_j u^j.
inline std::pair<Vec4, Vec4> geodesic_rhs(const MetricField& gf,
                                          const PotentialField& pf,
                                          const WorldlineState& s,
                                          const FdConfig& fd = {}) {
  require_inside(gf.box, s.x, fd_margin(fd, 1), "geodesic_rhs");
  const Christoffel gamma = christoffel(gf, s.x, fd);
  Vec4 du{};
  for (int k = 0; k < 4; ++k) {
    double a = 0.0;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) a -= gamma[k][i][j] * s.u[i] * s.u[j];
    du[k] = a;
  }
  if (pf.component) {
    const Faraday f = faraday(gf, pf, s.x, fd);
    for (int k = 0; k < 4; ++k) {
      double lorentz = 0.0;
      for (int j = 0; j < 4; ++j) lorentz += f.mixed[k][j] * s.u[j];
      du[k] += 2.0 * s.lambda * lorentz;
    }
  }
  return {s.u, du};
}

inline TrajectorySample make_sample(const MetricField& gf, const WorldlineState& s,
                                    double norm0) {
  TrajectorySample out;
  out.tau = s.tau;
  out.x = s.x;
  out.u = s.u;
  const Mat4 g = gf.component(s.x);
  out.norm_u = quad(g, s.u, s.u);
  out.norm_drift = out.norm_u - norm0;
  out.energy = -dot(matvec(g, s.u), Vec4{1.0, 0.0, 0.0, 0.0});
  return out;
}

// Classic fixed-step RK4.  Stops with a partial trajectory when a stage
// point leaves the validity box; throws on non-finite state.  A negative
// step integrates backward.
inline Trajectory integrate(const MetricField& gf, const PotentialField& pf,
                            WorldlineState s0, double step, int n_steps,
                            const FdConfig& fd = {},
                            const IntegrateOptions& opts = {}) {
  if (step == 0.0) throw ContractError("integrate: step must be nonzero");
  if (n_steps < 1) throw ContractError("integrate: need at least one step");
  require_inside(gf.box, s0.x, fd_margin(fd, 1), "integrate");

  const Mat4 g0 = metric_at(gf, s0.x);
  double norm0 = quad(g0, s0.u, s0.u);
  if (opts.normalize) {
    if (norm0 >= 0.0)
      throw ContractError("integrate: cannot normalize non-timelike velocity");
    const double inv = 1.0 / std::sqrt(-norm0);
    for (double& c : s0.u) c *= inv;
    norm0 = quad(g0, s0.u, s0.u);
  } else if (std::abs(norm0 + 1.0) > opts.norm_tol) {
    throw ContractError(
        "integrate: initial velocity is not proper-time normalized "
        "(pass normalize to rescale)");
  }

  Trajectory traj;
  traj.lambda = s0.lambda;
  traj.samples.push_back(make_sample(gf, s0, norm0));

  WorldlineState s = s0;
  for (int n = 0; n < n_steps; ++n) {
    WorldlineState stage = s;
    std::pair<Vec4, Vec4> k1, k2, k3, k4;
    try {
      k1 = geodesic_rhs(gf, pf, stage, fd);
      stage.x = vadd(s.x, vscale(0.5 * step, k1.first));
      stage.u = vadd(s.u, vscale(0.5 * step, k1.second));
      k2 = geodesic_rhs(gf, pf, stage, fd);
      stage.x = vadd(s.x, vscale(0.5 * step, k2.first));
      stage.u = vadd(s.u, vscale(0.5 * step, k2.second));
      k3 = geodesic_rhs(gf, pf, stage, fd);
      stage.x = vadd(s.x, vscale(step, k3.first));
      stage.u = vadd(s.u, vscale(step, k3.second));
      k4 = geodesic_rhs(gf, pf, stage, fd);
    } catch (const BoxError&) {
      traj.status = TrajectoryStatus::left_box;
      traj.note = "stopped at step " + std::to_string(n) + ": left validity box";
      break;
    }
    for (int i = 0; i < 4; ++i) {
      s.x[i] += (step / 6.0) *
                (k1.first[i] + 2.0 * k2.first[i] + 2.0 * k3.first[i] + k4.first[i]);
      s.u[i] += (step / 6.0) * (k1.second[i] + 2.0 * k2.second[i] +
                                2.0 * k3.second[i] + k4.second[i]);
    }
    s.tau += step;
    if (!all_finite(s.x) || !all_finite(s.u))
      throw Error("integrate: state became non-finite at tau = " +
                  std::to_string(s.tau));
    if (!gf.box.contains(s.x, fd_margin(fd, 1))) {
      traj.status = TrajectoryStatus::left_box;
      traj.note = "stopped at step " + std::to_string(n) + ": left validity box";
      break;
    }
    traj.samples.push_back(make_sample(gf, s, norm0));
  }
  for (const TrajectorySample& smp : traj.samples)
    traj.max_norm_drift = std::max(traj.max_norm_drift, std::abs(smp.norm_drift));
  return traj;
}

inline Trajectory integrate(const MetricField& gf, WorldlineState s0, double step,
                            int n_steps, const FdConfig& fd = {},
                            const IntegrateOptions& opts = {}) {
  return integrate(gf, PotentialField{}, s0, step, n_steps, fd, opts);
}

// Direct evaluation of the lifted-geodesic condition along a numerical
// trajectory: with α̂ = bar(α') + λξ,
//   ∇̂_{α̂} α̂ = bar(∇_{α'} α' - 2λ F(α')) + ⟨F(α'), α'⟩ ξ,
// where dα'/dτ comes from stencils over the stored samples.  Returns the
// max component norm over the interior samples.
inline double lift_check(const Trajectory& traj, const MetricField& gf,
                         const PotentialField& pf, const FdConfig& fd = {}) {
  const std::size_t n = traj.samples.size();
  if (n < 3) throw ContractError("lift_check: need at least three samples");
  const double h = traj.samples[1].tau - traj.samples[0].tau;
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const TrajectorySample& smp = traj.samples[i];
    Vec4 dudt{};
    if (i >= 2 && i + 2 < n) {
      for (int c = 0; c < 4; ++c)
        dudt[c] = (-traj.samples[i + 2].u[c] + 8.0 * traj.samples[i + 1].u[c] -
                   8.0 * traj.samples[i - 1].u[c] + traj.samples[i - 2].u[c]) /
                  (12.0 * h);
    } else {
      for (int c = 0; c < 4; ++c)
        dudt[c] = (traj.samples[i + 1].u[c] - traj.samples[i - 1].u[c]) / (2.0 * h);
    }
    const Christoffel gamma = christoffel(gf, smp.x, fd);
    FiberValue violation{};
    for (int k = 0; k < 4; ++k) {
      double a = dudt[k];
      for (int p = 0; p < 4; ++p)
        for (int q = 0; q < 4; ++q) a += gamma[k][p][q] * smp.u[p] * smp.u[q];
      violation.bar[k] = a;
    }
    if (pf.component) {
      const Faraday f = faraday(gf, pf, smp.x, fd);
      for (int k = 0; k < 4; ++k) {
        double lorentz = 0.0;
        for (int j = 0; j < 4; ++j) lorentz += f.mixed[k][j] * smp.u[j];
        violation.bar[k] -= 2.0 * traj.lambda * lorentz;
      }
      violation.xi = quad(f.lowered, smp.u, smp.u);
    }
    worst = std::max(worst, max_abs(violation));
  }
  return worst;
}

}  // namespace affmet

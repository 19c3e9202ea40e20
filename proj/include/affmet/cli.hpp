// Command-line front end.  run_cli is a library function so the test suite
// can drive every subcommand without spawning processes.
//
// Exit codes: 0 all checks passed, 1 computation or identity violation,
// 2 usage or configuration error.
#pragma once

#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "affine.hpp"
#include "algebroid.hpp"
#include "core.hpp"
#include "dynamics.hpp"
#include "report.hpp"
#include "scenario.hpp"
#include "verify.hpp"

namespace affmet {

namespace detail {

inline Vec4 parse_csv4(const std::string& text, const std::string& what) {
  Vec4 v{};
  std::istringstream in(text);
  std::string tok;
  int i = 0;
  while (std::getline(in, tok, ',')) {
    if (i >= 4) throw ConfigError(what + ": expected 4 comma-separated numbers");
    v[i++] = parse_real(tok, 0);
  }
  if (i != 4) throw ConfigError(what + ": expected 4 comma-separated numbers");
  return v;
}

// Writes to --out when given, stdout otherwise.
struct OutputTarget {
  std::ofstream file;
  std::ostream* stream;

  OutputTarget(const std::string& path, std::ostream& fallback) {
    if (path.empty()) {
      stream = &fallback;
    } else {
      file.open(path);
      if (!file) throw ConfigError("cannot open output file '" + path + "'");
      stream = &file;
    }
  }
  std::ostream& out() { return *stream; }
};

struct AffineInput {
  std::size_t dim = 0;
  MatX b;
  VecX z;
  double lambda = 0.0;
};

inline AffineInput load_affine_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open input file '" + path + "'");
  AffineInput data;
  std::vector<double> b_vals, z_vals;
  bool has_b = false;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      if (!tokens_of(line).empty()) throw ConfigError("expected 'key = value'", line_no);
      continue;
    }
    const auto key_toks = tokens_of(line.substr(0, eq));
    if (key_toks.size() != 1) throw ConfigError("malformed key", line_no);
    const std::string key = key_toks[0];
    const auto vals = tokens_of(line.substr(eq + 1));
    if (key == "dim") {
      data.dim = static_cast<std::size_t>(parse_real(vals.at(0), line_no));
      if (data.dim < 1 || data.dim > 16)
        throw ConfigError("dim must be between 1 and 16", line_no);
    } else if (key == "B") {
      for (const std::string& t : vals) b_vals.push_back(parse_real(t, line_no));
      has_b = true;
    } else if (key == "z") {
      for (const std::string& t : vals) z_vals.push_back(parse_real(t, line_no));
    } else if (key == "lambda") {
      data.lambda = parse_real(vals.at(0), line_no);
    } else {
      throw ConfigError("unknown key '" + key + "'", line_no);
    }
  }
  if (data.dim == 0) throw ConfigError("input is missing required key dim");
  if (!has_b || b_vals.size() != data.dim * data.dim)
    throw ConfigError("B must hold dim*dim numbers");
  data.b = MatX(data.dim);
  for (std::size_t i = 0; i < data.dim; ++i)
    for (std::size_t j = 0; j < data.dim; ++j)
      data.b(i, j) = b_vals[i * data.dim + j];
  data.z.assign(data.dim, 0.0);
  if (!z_vals.empty()) {
    if (z_vals.size() != data.dim) throw ConfigError("z must hold dim numbers");
    data.z = z_vals;
  }
  return data;
}

}  // namespace detail

inline int cmd_verify(const std::string& scenario_path, long seed_override,
                      const std::string& out_path, std::ostream& out) {
  Scenario sc = load_scenario(scenario_path);
  if (seed_override >= 0) sc.seed = static_cast<std::uint32_t>(seed_override);
  const ScenarioRun run = instantiate(sc);
  const std::vector<SuiteResult> suites = run_verify_suites(run);
  detail::OutputTarget target(out_path, out);
  write_verify_report(target.out(), sc, run.grid.size(), suites);
  for (const SuiteResult& s : suites)
    if (!s.pass()) return 1;
  return 0;
}

inline int cmd_curvature(const std::string& scenario_path, const std::string& at,
                         const std::string& out_path, std::ostream& out) {
  const Scenario sc = load_scenario(scenario_path);
  const ScenarioRun run = instantiate(sc);
  const Point p = detail::parse_csv4(at, "--at");
  const Mat5 ricci = ricci_hat(run.gf, run.pf, p, sc.fd);
  const EinsteinBlocks blocks = einstein_blocks(run.gf, run.pf, p, sc.fd);
  detail::OutputTarget target(out_path, out);
  write_curvature_report(target.out(), sc, p, ricci, blocks);
  return 0;
}

inline int cmd_geodesic(const std::string& scenario_path, const std::string& at,
                        const std::string& u_text, double lambda, double step,
                        long steps, bool normalize, const std::string& out_path,
                        std::ostream& out) {
  const Scenario sc = load_scenario(scenario_path);
  const ScenarioRun run = instantiate(sc);
  WorldlineState s0;
  s0.x = detail::parse_csv4(at, "--at");
  s0.u = detail::parse_csv4(u_text, "--u");
  s0.lambda = lambda;
  IntegrateOptions opts;
  opts.normalize = normalize;
  const Trajectory traj =
      integrate(run.gf, run.pf, s0, step, static_cast<int>(steps), sc.fd, opts);
  detail::OutputTarget target(out_path, out);
  write_trajectory(target.out(), sc, traj);
  if (!out_path.empty())
    out << "samples " << traj.samples.size() << "  max_norm_drift "
        << fmt(traj.max_norm_drift) << "  status "
        << (traj.status == TrajectoryStatus::complete ? "complete" : "left_box")
        << "\n";
  return 0;
}

inline int cmd_residuals(const std::string& scenario_path,
                         const std::string& out_path, std::ostream& out) {
  const Scenario sc = load_scenario(scenario_path);
  const ScenarioRun run = instantiate(sc);
  std::vector<ResidualRecord> records;
  for (std::size_t k = 0; k < run.grid.size(); ++k) {
    ResidualRecord rec;
    rec.p = run.grid[k];
    const EinsteinBlocks blocks = einstein_blocks(run.gf, run.pf, rec.p, sc.fd);
    rec.res = block_residuals(blocks, run.sources[k]);
    rec.scalar = blocks.scalar;
    rec.trff = blocks.trff;
    rec.scalar_hat = blocks.scalar_hat;
    records.push_back(rec);
  }
  detail::OutputTarget target(out_path, out);
  write_residual_report(target.out(), sc, records);
  return 0;
}

inline int cmd_affine(const std::string& mode, const std::string& input_path,
                      const std::string& out_path, std::ostream& out) {
  const detail::AffineInput data = detail::load_affine_input(input_path);
  // exercise the black-box path: sample the pairing, do not copy the inputs
  AffinePairing s;
  s.dim = data.dim;
  s.eval = [&data](const VecX& u, const VecX& v) {
    VecX du(data.dim), dv(data.dim);
    for (std::size_t i = 0; i < data.dim; ++i) {
      du[i] = u[i] - data.z[i];
      dv[i] = v[i] - data.z[i];
    }
    return data.lambda + quad(data.b, du, dv);
  };
  const AffineDecomposition dec = decompose(s);
  detail::OutputTarget target(out_path, out);
  std::ostream& o = target.out();
  o << "# affmet affine " << mode << "\n" << kUnitBanner << "\n";
  o << "dim = " << data.dim << "\n";
  if (mode == "decompose") {
    for (std::size_t i = 0; i < data.dim; ++i) {
      o << "B.row" << i << " =";
      for (std::size_t j = 0; j < data.dim; ++j) o << " " << fmt(dec.bilinear(i, j));
      o << "\n";
    }
    o << "z =";
    for (double c : dec.center) o << " " << fmt(c);
    o << "\nlambda = " << fmt(dec.offset) << "\n";
  } else {
    const MatX hat = hat_metric(dec);
    for (std::size_t i = 0; i <= data.dim; ++i) {
      o << "hat.row" << i << " =";
      for (std::size_t j = 0; j <= data.dim; ++j) o << " " << fmt(hat(i, j));
      o << "\n";
    }
  }
  return 0;
}

inline int run_cli(const std::vector<std::string>& args, std::ostream& out,
                   std::ostream& err) {
  CLI::App app{"numerical lab for affine-metric extended bundles"};
  app.require_subcommand(1);

  std::string scenario_path, at_text, u_text, out_path, mode, input_path;
  double lambda = 0.0, step = 1e-3;
  long steps = 1000, seed_override = -1;
  bool normalize = false;

  CLI::App* verify = app.add_subcommand("verify", "run identity suites over a grid");
  verify->add_option("--scenario", scenario_path, "scenario file")->required();
  verify->add_option("--seed", seed_override, "override the scenario seed");
  verify->add_option("--out", out_path, "write the report to a file");

  CLI::App* curvature =
      app.add_subcommand("curvature", "curvature and block report at a point");
  curvature->add_option("--scenario", scenario_path, "scenario file")->required();
  curvature->add_option("--at", at_text, "point t,x,y,z")->required();
  curvature->add_option("--out", out_path, "write the report to a file");

  CLI::App* geodesic = app.add_subcommand("geodesic", "integrate a world-line");
  geodesic->add_option("--scenario", scenario_path, "scenario file")->required();
  geodesic->add_option("--at", at_text, "initial point t,x,y,z")->required();
  geodesic->add_option("--u", u_text, "initial 4-velocity u0,u1,u2,u3")->required();
  geodesic->add_option("--lambda", lambda, "charge-to-mass ratio");
  geodesic->add_option("--step", step, "proper-time step")
      ->check(CLI::PositiveNumber);
  geodesic->add_option("--steps", steps, "number of steps")
      ->check(CLI::PositiveNumber);
  geodesic->add_flag("--normalize", normalize, "rescale u to proper time");
  geodesic->add_option("--out", out_path, "write the trajectory to a file");

  CLI::App* residuals =
      app.add_subcommand("residuals", "field-equation residuals over the grid");
  residuals->add_option("--scenario", scenario_path, "scenario file")->required();
  residuals->add_option("--out", out_path, "write the report to a file");

  CLI::App* affine = app.add_subcommand("affine", "affine inner-product tools");
  affine->add_option("mode", mode, "decompose or hat-metric")
      ->required()
      ->check(CLI::IsMember({"decompose", "hat-metric"}));
  affine->add_option("input", input_path, "numeric input file")->required();
  affine->add_option("--out", out_path, "write the report to a file");

  std::vector<char*> argv;
  std::vector<std::string> storage = args;
  storage.insert(storage.begin(), "affmet");
  argv.reserve(storage.size());
  for (std::string& s : storage) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (verify->parsed())
      return cmd_verify(scenario_path, seed_override, out_path, out);
    if (curvature->parsed())
      return cmd_curvature(scenario_path, at_text, out_path, out);
    if (geodesic->parsed())
      return cmd_geodesic(scenario_path, at_text, u_text, lambda, step, steps,
                          normalize, out_path, out);
    if (residuals->parsed()) return cmd_residuals(scenario_path, out_path, out);
    if (affine->parsed()) return cmd_affine(mode, input_path, out_path, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  err << "usage error: no subcommand\n";
  return 2;
}

}  // namespace affmet

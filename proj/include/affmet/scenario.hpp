// Scenario files: flat dotted key-value text describing a metric family,
// potential family, evaluation region, grid, stencil settings, tolerances,
// and optional matter sources.
//
// Grammar, one entry per line:
//   key = value [value ...]
// '#' starts a comment; blank lines are ignored.  Keys are dotted names
// (metric.name, metric.M, region.min, tol.koszul, ...).  Unknown keys are
// rejected with the line number.
#pragma once

#include <array>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "algebroid.hpp"
#include "core.hpp"
#include "families.hpp"
#include "fd.hpp"

namespace affmet {

struct Scenario {
  std::string metric_name;
  ParamMap metric_params;
  std::string potential_name = "zero";
  ParamMap potential_params;

  bool has_region = false;
  Vec4 region_min{};
  Vec4 region_max{};

  std::array<int, 4> grid_n{2, 2, 2, 2};
  FdConfig fd;
  std::map<std::string, double> tolerances;
  std::uint32_t seed = 1;

  bool has_const_sources = false;
  Sources const_sources;
  std::string source_table;  // path, relative to the scenario file
  std::string origin;        // where this scenario was parsed from
};

namespace detail {

inline std::vector<std::string> tokens_of(const std::string& text) {
  std::istringstream in(text);
  std::vector<std::string> toks;
  std::string t;
  while (in >> t) toks.push_back(t);
  return toks;
}

inline double parse_real(const std::string& tok, int line) {
  char* end = nullptr;
  const double v = std::strtod(tok.c_str(), &end);
  if (end == nullptr || *end != '\0')
    throw ConfigError("expected a number, got '" + tok + "'", line);
  return v;
}

inline std::vector<double> parse_reals(const std::vector<std::string>& toks,
                                       std::size_t want, int line) {
  if (toks.size() != want)
    throw ConfigError("expected " + std::to_string(want) + " numbers, got " +
                          std::to_string(toks.size()),
                      line);
  std::vector<double> vals;
  for (const std::string& t : toks) vals.push_back(parse_real(t, line));
  return vals;
}

inline Mat4 symmetric_from_upper(const std::vector<double>& v) {
  // order: t00 t01 t02 t03 t11 t12 t13 t22 t23 t33
  Mat4 m{};
  int k = 0;
  for (int i = 0; i < 4; ++i)
    for (int j = i; j < 4; ++j) {
      m[i][j] = v[k];
      m[j][i] = v[k];
      ++k;
    }
  return m;
}

}  // namespace detail

inline Scenario parse_scenario(std::istream& in, const std::string& origin) {
  Scenario sc;
  sc.origin = origin;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      if (!detail::tokens_of(line).empty())
        throw ConfigError("expected 'key = value'", line_no);
      continue;
    }
    const auto key_toks = detail::tokens_of(line.substr(0, eq));
    if (key_toks.size() != 1) throw ConfigError("malformed key", line_no);
    const std::string key = key_toks[0];
    const auto vals = detail::tokens_of(line.substr(eq + 1));
    if (vals.empty()) throw ConfigError("missing value for '" + key + "'", line_no);

    auto one_real = [&]() { return detail::parse_reals(vals, 1, line_no)[0]; };

    if (key == "metric.name") {
      sc.metric_name = vals[0];
    } else if (key.rfind("metric.", 0) == 0) {
      sc.metric_params[key.substr(7)] = one_real();
    } else if (key == "potential.name") {
      sc.potential_name = vals[0];
    } else if (key.rfind("potential.", 0) == 0) {
      sc.potential_params[key.substr(10)] = one_real();
    } else if (key == "region.min" || key == "region.max") {
      const auto v = detail::parse_reals(vals, 4, line_no);
      Vec4& dst = (key == "region.min") ? sc.region_min : sc.region_max;
      for (int i = 0; i < 4; ++i) dst[i] = v[i];
      sc.has_region = true;
    } else if (key == "grid.n") {
      const auto v = detail::parse_reals(vals, 4, line_no);
      for (int i = 0; i < 4; ++i) {
        sc.grid_n[i] = static_cast<int>(v[i]);
        if (sc.grid_n[i] < 1 || sc.grid_n[i] != v[i])
          throw ConfigError("grid.n entries must be positive integers", line_no);
      }
    } else if (key == "fd.step") {
      sc.fd.step = one_real();
      if (sc.fd.step <= 0.0) throw ConfigError("fd.step must be positive", line_no);
    } else if (key == "fd.order") {
      const double v = one_real();
      if (v != 2 && v != 4 && v != 6)
        throw ConfigError("fd.order must be 2, 4, or 6", line_no);
      sc.fd.order = static_cast<int>(v);
    } else if (key == "fd.richardson") {
      sc.fd.richardson = one_real() != 0.0;
    } else if (key.rfind("tol.", 0) == 0) {
      const double v = one_real();
      if (v <= 0.0) throw ConfigError("tolerances must be positive", line_no);
      sc.tolerances[key.substr(4)] = v;
    } else if (key == "seed") {
      sc.seed = static_cast<std::uint32_t>(one_real());
    } else if (key == "source.T") {
      sc.const_sources.mass_stress =
          detail::symmetric_from_upper(detail::parse_reals(vals, 10, line_no));
      sc.has_const_sources = true;
    } else if (key == "source.J") {
      const auto v = detail::parse_reals(vals, 4, line_no);
      for (int i = 0; i < 4; ++i) sc.const_sources.current[i] = v[i];
      sc.has_const_sources = true;
    } else if (key == "source.H") {
      sc.const_sources.charge_scalar = one_real();
      sc.has_const_sources = true;
    } else if (key == "source.table") {
      sc.source_table = vals[0];
    } else {
      throw ConfigError("unknown key '" + key + "'", line_no);
    }
  }
  if (sc.metric_name.empty())
    throw ConfigError("scenario is missing required key metric.name");
  return sc;
}

inline Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario file '" + path + "'");
  return parse_scenario(in, path);
}

inline double tolerance(const Scenario& sc, const std::string& name,
                        double fallback) {
  auto it = sc.tolerances.find(name);
  return it == sc.tolerances.end() ? fallback : it->second;
}

// Evenly spaced interior points, inset from the box edges far enough for the
// deepest stencil nest used anywhere (4 levels).
inline std::vector<Point> grid_points(const Box& box, const std::array<int, 4>& n,
                                      const FdConfig& fd) {
  const double inset = fd_margin(fd, 4);
  std::array<std::vector<double>, 4> axes;
  for (int d = 0; d < 4; ++d) {
    const double lo = box.lo[d] + inset;
    const double hi = box.hi[d] - inset;
    if (lo > hi)
      throw ConfigError("region too small for stencils along axis " +
                        std::to_string(d));
    if (n[d] == 1) {
      axes[d].push_back(0.5 * (lo + hi));
    } else {
      for (int k = 0; k < n[d]; ++k)
        axes[d].push_back(lo + (hi - lo) * k / (n[d] - 1));
    }
  }
  std::vector<Point> pts;
  for (double t : axes[0])
    for (double x : axes[1])
      for (double y : axes[2])
        for (double z : axes[3]) pts.push_back(Point{t, x, y, z});
  return pts;
}

// A scenario materialized: fields built, region intersected, grid laid out,
// per-point sources resolved.
struct ScenarioRun {
  Scenario sc;
  MetricField gf;
  PotentialField pf;
  std::vector<Point> grid;
  std::vector<Sources> sources;  // one per grid point
};

inline ScenarioRun instantiate(const Scenario& sc) {
  ScenarioRun run;
  run.sc = sc;
  run.gf = make_metric(sc.metric_name, sc.metric_params);
  if (sc.has_region) {
    Box clipped = run.gf.box;
    for (int i = 0; i < 4; ++i) {
      clipped.lo[i] = std::max(clipped.lo[i], sc.region_min[i]);
      clipped.hi[i] = std::min(clipped.hi[i], sc.region_max[i]);
      if (clipped.lo[i] >= clipped.hi[i])
        throw ConfigError("region is empty after clipping to the '" +
                          sc.metric_name + "' validity box");
    }
    run.gf.box = clipped;
  }
  run.pf = make_potential(sc.potential_name, sc.potential_params, run.gf);
  run.grid = grid_points(run.gf.box, sc.grid_n, sc.fd);

  run.sources.assign(run.grid.size(), sc.const_sources);
  if (!sc.source_table.empty()) {
    std::string path = sc.source_table;
    const std::size_t slash = sc.origin.find_last_of('/');
    if (slash != std::string::npos && path.front() != '/')
      path = sc.origin.substr(0, slash + 1) + path;
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open source table '" + path + "'");
    std::string line;
    int line_no = 0;
    std::size_t row = 0;
    while (std::getline(in, line)) {
      ++line_no;
      const std::size_t hash = line.find('#');
      if (hash != std::string::npos) line.resize(hash);
      const auto toks = detail::tokens_of(line);
      if (toks.empty()) continue;
      if (row >= run.grid.size())
        throw ConfigError("source table has more rows than grid points", line_no);
      const auto v = detail::parse_reals(toks, 15, line_no);
      Sources& s = run.sources[row];
      s.mass_stress = detail::symmetric_from_upper(
          std::vector<double>(v.begin(), v.begin() + 10));
      for (int i = 0; i < 4; ++i) s.current[i] = v[10 + i];
      s.charge_scalar = v[14];
      ++row;
    }
    if (row != run.grid.size())
      throw ConfigError("source table has " + std::to_string(row) +
                        " rows but the grid has " +
                        std::to_string(run.grid.size()) + " points");
  }
  return run;
}

}  // namespace affmet

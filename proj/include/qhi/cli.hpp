#pragma once

// Library side of the qhi command-line tool: configuration and the five table commands.
// The executable in tools/ only parses flags and does I/O.

#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qhi/csv.hpp"
#include "qhi/dyson.hpp"
#include "qhi/evolution.hpp"
#include "qhi/exceptional.hpp"
#include "qhi/metric.hpp"
#include "qhi/spectral.hpp"

namespace qhi::cli {

enum ExitCode : int { kSuccess = 0, kUsageError = 1, kNumericFailure = 2 };

struct GridSpec {
  double start = -2.0;
  double stop = 2.0;
  int count = 81;

  // start == stop collapses to the single point `start`.
  std::vector<double> points() const {
    if (start == stop) return {start};
    return linspace(start, stop, count);
  }
};

struct SweepConfig {
  HamiltonianPencil pencil{PencilFamily::hermitian, 1.0};
  GridSpec grid;
  double tol = kRealityTol;
  std::string out;  // empty: standard output
  unsigned threads = 0;  // 0: available parallelism
  bool gnuplot = false;

  std::optional<MetricParams> metric_params;  // metric: explicit (c,d,f,g)
  Continuation continuation = Continuation::own_matrix;  // hermitize
  double kind_probe = 1e-2;  // ep

  double eta = 0.5;  // evolve
  std::vector<Complex> state;  // evolve, empty: e1
  double tmax = 10.0;
  int steps = 100;
};

struct CommandResult {
  csv::Table table;
  int exit_code = kSuccess;
  std::vector<std::string> diagnostics;
};

using Entries = std::map<std::string, std::string>;

// ---------------------------------------------------------------- parsing

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, sep)) out.push_back(trim(item));
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

inline double to_double(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != v.size() || !std::isfinite(x))
    throw InvalidArgument(key + ": expected a finite number, got '" + v + "'");
  return x;
}

inline long to_long(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  long x = 0;
  try {
    x = std::stol(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != v.size()) throw InvalidArgument(key + ": expected an integer, got '" + v + "'");
  return x;
}

inline std::vector<double> to_doubles(const std::string& key, const std::string& v, std::size_t n) {
  const auto parts = split(v, ',');
  if (parts.size() != n) throw InvalidArgument(key + ": expected " + std::to_string(n) + " comma-separated numbers");
  std::vector<double> out;
  for (const auto& p : parts) out.push_back(to_double(key, p));
  return out;
}

inline bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw InvalidArgument(key + ": expected true or false, got '" + v + "'");
}

}  // namespace detail

inline PencilFamily parse_family(const std::string& v) {
  if (v == "hermitian") return PencilFamily::hermitian;
  if (v == "nonhermitian") return PencilFamily::nonhermitian;
  if (v == "unified") return PencilFamily::unified;
  throw InvalidArgument("family: expected hermitian, nonhermitian or unified, got '" + v + "'");
}

/// START:STOP:COUNT
inline GridSpec parse_grid(const std::string& v) {
  const auto parts = detail::split(v, ':');
  if (parts.size() != 3) throw InvalidArgument("grid: expected START:STOP:COUNT, got '" + v + "'");
  GridSpec g;
  g.start = detail::to_double("grid", parts[0]);
  g.stop = detail::to_double("grid", parts[1]);
  const long count = detail::to_long("grid", parts[2]);
  if (count < 2) throw InvalidArgument("grid: count must be >= 2");
  if (count > 10'000'000) throw InvalidArgument("grid: count is too large");
  if (g.start > g.stop) throw InvalidArgument("grid: start must not exceed stop");
  g.count = static_cast<int>(count);
  return g;
}

/// `key = value` lines; '#' starts a comment; blank lines ignored.
inline Entries parse_config_text(const std::string& text) {
  Entries out;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw InvalidArgument("config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = detail::trim(line.substr(0, eq));
    if (key.empty()) throw InvalidArgument("config line " + std::to_string(lineno) + ": empty key");
    out[key] = detail::trim(line.substr(eq + 1));
  }
  return out;
}

inline Entries load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("config: cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

/// Applies entries on top of `cfg`. Unknown keys are usage errors.
inline void apply_entries(SweepConfig& cfg, const Entries& entries) {
  for (const auto& [key, v] : entries) {
    if (key == "family") {
      cfg.pencil.family = parse_family(v);
    } else if (key == "lambda") {
      cfg.pencil.lambda = detail::to_double(key, v);
    } else if (key == "grid") {
      cfg.grid = parse_grid(v);
    } else if (key == "tol") {
      cfg.tol = detail::to_double(key, v);
      if (!(cfg.tol > 0.0)) throw InvalidArgument("tol: must be > 0");
    } else if (key == "out") {
      cfg.out = v;
    } else if (key == "threads") {
      const long n = detail::to_long(key, v);
      if (n < 0 || n > 1024) throw InvalidArgument("threads: must be in [0, 1024]");
      cfg.threads = static_cast<unsigned>(n);
    } else if (key == "gnuplot") {
      cfg.gnuplot = detail::to_bool(key, v);
    } else if (key == "params") {
      const auto p = detail::to_doubles(key, v, 4);
      cfg.metric_params = MetricParams{p[0], p[1], p[2], p[3]};
    } else if (key == "continuation") {
      if (v == "own")
        cfg.continuation = Continuation::own_matrix;
      else if (v == "constant")
        cfg.continuation = Continuation::constant;
      else
        throw InvalidArgument("continuation: expected own or constant");
    } else if (key == "probe") {
      cfg.kind_probe = detail::to_double(key, v);
      if (!(cfg.kind_probe > 0.0)) throw InvalidArgument("probe: must be > 0");
    } else if (key == "eta") {
      cfg.eta = detail::to_double(key, v);
    } else if (key == "state") {
      const auto amps = detail::to_doubles(key, v, kModelDim);
      cfg.state.assign(amps.begin(), amps.end());
    } else if (key == "tmax") {
      cfg.tmax = detail::to_double(key, v);
      if (!(cfg.tmax > 0.0)) throw InvalidArgument("tmax: must be > 0");
    } else if (key == "steps") {
      const long n = detail::to_long(key, v);
      if (n < 1 || n > 10'000'000) throw InvalidArgument("steps: must be in [1, 1e7]");
      cfg.steps = static_cast<int>(n);
    } else {
      throw InvalidArgument("unknown configuration key '" + key + "'");
    }
  }
}

/// defaults < config file < flags.
inline SweepConfig resolve_config(const Entries& file_entries, const Entries& flag_entries) {
  SweepConfig cfg;
  apply_entries(cfg, file_entries);
  apply_entries(cfg, flag_entries);
  return cfg;
}

// ---------------------------------------------------------------- commands

namespace detail {

inline std::string fmt(double v) { return csv::format(v); }

inline std::string param_note(const SweepConfig& cfg, double param) {
  return std::string(cfg.pencil.sweep_param_name()) + "=" + fmt(param);
}

}  // namespace detail

inline CommandResult cmd_spectrum(const SweepConfig& cfg) {
  CommandResult res;
  const int n = cfg.pencil.dim();
  res.table.header.push_back("param");
  for (int i = 1; i <= n; ++i) res.table.header.push_back("ReE" + std::to_string(i));
  for (int i = 1; i <= n; ++i) res.table.header.push_back("ImE" + std::to_string(i));
  res.table.header.push_back("reality_flag");

  struct Row {
    std::optional<Spectrum> spectrum;
    std::string error;
  };
  const auto grid = cfg.grid.points();
  const auto rows = ordered_parallel_map(grid.size(), cfg.threads, [&](std::size_t i) {
    Row r;
    try {
      r.spectrum = eigenvalues(cfg.pencil.at(grid[i]), cfg.tol);
    } catch (const Error& e) {
      r.error = e.what();
    }
    return r;
  });

  for (std::size_t i = 0; i < grid.size(); ++i) {
    std::vector<std::string> cells{detail::fmt(grid[i])};
    if (rows[i].spectrum) {
      const auto& s = *rows[i].spectrum;
      for (const auto& v : s.values) cells.push_back(detail::fmt(v.real()));
      for (const auto& v : s.values) cells.push_back(detail::fmt(v.imag()));
      cells.emplace_back(to_string(s.reality));
    } else {
      for (int k = 0; k < 2 * n; ++k) cells.emplace_back("nan");
      cells.emplace_back("error");
      res.diagnostics.push_back("error at " + detail::param_note(cfg, grid[i]) + ": " + rows[i].error);
      res.exit_code = kNumericFailure;
    }
    res.table.add_row(std::move(cells));
  }
  return res;
}

/// The metric cmd_metric reports at `param`.
inline ComplexMatrix sweep_metric(const SweepConfig& cfg, double param) {
  if (cfg.metric_params) {
    if (cfg.pencil.family == PencilFamily::nonhermitian ||
        (cfg.pencil.family == PencilFamily::unified && param > 0.0))
      return metric_from_params(param, cfg.pencil.lambda, *cfg.metric_params);
  }
  return interface_metric(cfg.pencil, param);
}

inline CommandResult cmd_metric(const SweepConfig& cfg) {
  CommandResult res;
  const int n = cfg.pencil.dim();
  res.table.header.push_back("param");
  for (int i = 1; i <= n; ++i) res.table.header.push_back("theta_eig" + std::to_string(i));
  res.table.header.push_back("is_pd");

  struct Row {
    std::optional<PositivityReport> report;
    std::string marker;
    std::string error;
  };
  const auto grid = cfg.grid.points();
  const auto rows = ordered_parallel_map(grid.size(), cfg.threads, [&](std::size_t i) {
    Row r;
    try {
      r.report = check_positive_definite(sweep_metric(cfg, grid[i]), cfg.tol);
    } catch (const MetricSingularity& e) {
      r.marker = "singular";
      r.error = e.what();
    } catch (const Error& e) {
      r.marker = "error";
      r.error = e.what();
    }
    return r;
  });

  for (std::size_t i = 0; i < grid.size(); ++i) {
    std::vector<std::string> cells{detail::fmt(grid[i])};
    if (rows[i].report) {
      for (double e : rows[i].report->eigenvalues) cells.push_back(detail::fmt(e));
      cells.emplace_back(rows[i].report->is_pd ? "true" : "false");
    } else {
      for (int k = 0; k < n; ++k) cells.emplace_back("nan");
      cells.push_back(rows[i].marker);
      res.diagnostics.push_back(rows[i].marker + " at " + detail::param_note(cfg, grid[i]) + ": " + rows[i].error);
      if (rows[i].marker != "singular") res.exit_code = kNumericFailure;
    }
    res.table.add_row(std::move(cells));
  }
  return res;
}

inline CommandResult cmd_ep(const SweepConfig& cfg) {
  CommandResult res;
  res.table.header = {"param_value", "kind", "level_pair", "residual_gap", "multiplicity"};
  const auto nodes = cfg.grid.points();
  if (nodes.size() < 2) {
    res.diagnostics.push_back("warning: ep needs a grid with start < stop; no EP searched");
    return res;
  }
  EpSearchOptions opts;
  opts.reality_tol = cfg.tol;
  std::vector<ExceptionalPoint> eps;
  try {
    eps = scan_eps(cfg.pencil, nodes, cfg.kind_probe, cfg.tol, opts);
  } catch (const AmbiguousEp& e) {
    res.diagnostics.push_back(std::string("error: ") + e.what() + " (first_kind " + detail::fmt(e.first_kind_candidate()) +
                              ", second_kind " + detail::fmt(e.second_kind_candidate()) + ")");
    res.exit_code = kNumericFailure;
    return res;
  } catch (const NumericFailure& e) {
    res.diagnostics.push_back(std::string("error: ") + e.what());
    res.exit_code = kNumericFailure;
    return res;
  }
  if (eps.empty()) res.diagnostics.push_back("warning: no exceptional point found on the grid");
  for (const auto& ep : eps) {
    res.table.add_row({detail::fmt(ep.param_value), std::string(to_string(ep.kind)),
                       std::to_string(ep.level_pair.first + 1) + ":" + std::to_string(ep.level_pair.second + 1),
                       detail::fmt(ep.residual_gap), std::to_string(ep.multiplicity)});
  }
  return res;
}

inline CommandResult cmd_hermitize(const SweepConfig& cfg) {
  CommandResult res;
  res.table.header = {"param", "hermiticity_defect", "isospectral_defect", "theta_condition_number", "status"};
  const auto grid = cfg.grid.points();
  const auto points = hermitized_pencil(cfg.pencil, grid, cfg.continuation, cfg.tol, cfg.threads);
  for (const auto& pt : points) {
    if (pt.decomposition) {
      const auto& d = *pt.decomposition;
      res.table.add_row({detail::fmt(pt.param), detail::fmt(d.hermiticity_defect), detail::fmt(d.isospectral_defect),
                         detail::fmt(d.theta_condition_number), pt.status});
    } else {
      res.table.add_row({detail::fmt(pt.param), "nan", "nan", "nan", pt.status});
      res.diagnostics.push_back(pt.status + " at " + detail::param_note(cfg, pt.param) + ": " + pt.error);
      res.exit_code = kNumericFailure;
    }
  }
  return res;
}

inline CommandResult cmd_evolve(const SweepConfig& cfg) {
  CommandResult res;
  res.table.header = {"t", "theta_norm", "naive_norm", "mapped_norm"};

  StateVector psi0 = StateVector::Zero(cfg.pencil.dim());
  if (cfg.state.empty()) {
    psi0(0) = 1.0;
  } else {
    for (std::size_t i = 0; i < cfg.state.size(); ++i) psi0(static_cast<Eigen::Index>(i)) = cfg.state[i];
  }
  if (psi0.norm() == 0.0) throw InvalidArgument("state: must have at least one nonzero amplitude");

  const auto times = linspace(0.0, cfg.tmax, cfg.steps + 1);
  const ComplexMatrix h = cfg.pencil.at(cfg.eta);

  std::optional<ComplexMatrix> theta;
  try {
    ComplexMatrix th = interface_metric(cfg.pencil, cfg.eta);
    if (check_positive_definite(th, cfg.tol).is_pd)
      theta = std::move(th);
    else
      res.diagnostics.push_back("warning: metric not positive definite at " + detail::param_note(cfg, cfg.eta) +
                                "; theta_norm and mapped_norm are nan");
  } catch (const MetricSingularity& e) {
    res.diagnostics.push_back(std::string("warning: ") + e.what() + "; theta_norm and mapped_norm are nan");
  }

  try {
    if (theta) {
      const auto tr = unitarity_report(h, *theta, psi0, times, cfg.tol);
      for (std::size_t i = 0; i < tr.times.size(); ++i)
        res.table.add_row({detail::fmt(tr.times[i]), detail::fmt(tr.theta_norms[i]), detail::fmt(tr.naive_norms[i]),
                           detail::fmt(tr.mapped_norms[i])});
    } else {
      const Propagator prop(h);
      for (double t : times) res.table.add_row({detail::fmt(t), "nan", detail::fmt(prop(psi0, t).norm()), "nan"});
    }
  } catch (const Error& e) {
    res.table.rows.clear();
    res.diagnostics.push_back(std::string("error: ") + e.what());
    res.exit_code = kNumericFailure;
  }
  return res;
}

inline CommandResult run_command(const std::string& name, const SweepConfig& cfg) {
  if (name == "spectrum") return cmd_spectrum(cfg);
  if (name == "metric") return cmd_metric(cfg);
  if (name == "ep") return cmd_ep(cfg);
  if (name == "hermitize") return cmd_hermitize(cfg);
  if (name == "evolve") return cmd_evolve(cfg);
  throw InvalidArgument("unknown command '" + name + "'");
}

/// gnuplot companion script: every numeric column against the first one.
inline std::string gnuplot_script(const std::string& command, const std::string& csv_path, const csv::Table& t) {
  std::ostringstream gp;
  gp << "# qhi " << command << "\n"
     << "set datafile separator ','\n"
     << "set key autotitle columnhead\n"
     << "set xlabel '" << (t.header.empty() ? "x" : t.header.front()) << "'\n";
  std::vector<std::size_t> cols;
  for (std::size_t c = 1; c < t.header.size(); ++c) {
    const auto& h = t.header[c];
    if (h == "reality_flag" || h == "is_pd" || h == "status" || h == "kind" || h == "level_pair") continue;
    cols.push_back(c + 1);
  }
  const char* style = command == "ep" ? "points" : "linespoints";
  gp << "plot ";
  for (std::size_t k = 0; k < cols.size(); ++k) {
    if (k) gp << ", \\\n     ";
    gp << "'" << csv_path << "' using 1:" << cols[k] << " with " << style;
  }
  gp << "\n";
  return gp.str();
}

}  // namespace qhi::cli

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "netflux/current.hpp"
#include "netflux/error.hpp"
#include "netflux/graph.hpp"
#include "netflux/mcflow.hpp"
#include "netflux/netgen.hpp"
#include "netflux/parallel.hpp"
#include "netflux/rng.hpp"
#include "netflux/stats.hpp"
#include "netflux/theory.hpp"
#include "netflux/transport.hpp"

namespace netflux {

enum class GraphModel { ER, SF, File };
enum class TransportKind { Flow, Current, McFlow };

struct GraphSpec {
  GraphModel model = GraphModel::ER;
  std::size_t N = 1024;
  double mean_degree = 8.0;
  double gamma = 2.5;
  std::size_t m = 2;
  std::string path;
};

struct ExperimentConfig {
  GraphSpec graph;
  TransportKind kind = TransportKind::Flow;
  std::vector<std::size_t> n_values;
  std::size_t realizations = 50;
  std::size_t samples = 20;
  std::uint64_t seed = 1;
  double tol = 1e-10;
  std::size_t workers = 1;
  McMethod mc_method = McMethod::Auto;
  double mc_epsilon = 0.1;
  bool record_lengths = false;
  std::string output;
};

inline std::string to_string(GraphModel m) {
  switch (m) {
  case GraphModel::ER: return "er";
  case GraphModel::SF: return "sf";
  case GraphModel::File: return "file";
  }
  return "?";
}

inline std::string to_string(TransportKind k) {
  switch (k) {
  case TransportKind::Flow: return "flow";
  case TransportKind::Current: return "current";
  case TransportKind::McFlow: return "mcflow";
  }
  return "?";
}

inline std::string to_string(McMethod m) {
  switch (m) {
  case McMethod::Auto: return "auto";
  case McMethod::Lp: return "lp";
  case McMethod::Mwu: return "mwu";
  }
  return "?";
}

inline GraphModel parse_graph_model(const std::string& s) {
  if (s == "er") return GraphModel::ER;
  if (s == "sf") return GraphModel::SF;
  if (s == "file") return GraphModel::File;
  throw ParameterError("unknown graph model '" + s + "'");
}

inline TransportKind parse_transport_kind(const std::string& s) {
  if (s == "flow") return TransportKind::Flow;
  if (s == "current") return TransportKind::Current;
  if (s == "mcflow") return TransportKind::McFlow;
  throw ParameterError("unknown transport kind '" + s + "'");
}

inline McMethod parse_mc_method(const std::string& s) {
  if (s == "auto") return McMethod::Auto;
  if (s == "lp") return McMethod::Lp;
  if (s == "mwu") return McMethod::Mwu;
  throw ParameterError("unknown mcflow method '" + s + "'");
}

inline nlohmann::json to_json(const ExperimentConfig& c) {
  return {{"model", to_string(c.graph.model)},
          {"N", c.graph.N},
          {"mean_degree", c.graph.mean_degree},
          {"gamma", c.graph.gamma},
          {"m", c.graph.m},
          {"path", c.graph.path},
          {"transport", to_string(c.kind)},
          {"n_values", c.n_values},
          {"realizations", c.realizations},
          {"samples", c.samples},
          {"seed", c.seed},
          {"tol", c.tol},
          {"workers", c.workers},
          {"mc_method", to_string(c.mc_method)},
          {"mc_epsilon", c.mc_epsilon},
          {"record_lengths", c.record_lengths},
          {"output", c.output}};
}

// Missing fields keep their defaults.
inline ExperimentConfig config_from_json(const nlohmann::json& j) {
  ExperimentConfig c;
  c.graph.model = parse_graph_model(j.value("model", to_string(c.graph.model)));
  c.graph.N = j.value("N", c.graph.N);
  c.graph.mean_degree = j.value("mean_degree", c.graph.mean_degree);
  c.graph.gamma = j.value("gamma", c.graph.gamma);
  c.graph.m = j.value("m", c.graph.m);
  c.graph.path = j.value("path", c.graph.path);
  c.kind = parse_transport_kind(j.value("transport", to_string(c.kind)));
  c.n_values = j.value("n_values", c.n_values);
  c.realizations = j.value("realizations", c.realizations);
  c.samples = j.value("samples", c.samples);
  c.seed = j.value("seed", c.seed);
  c.tol = j.value("tol", c.tol);
  c.workers = j.value("workers", c.workers);
  c.mc_method = parse_mc_method(j.value("mc_method", to_string(c.mc_method)));
  c.mc_epsilon = j.value("mc_epsilon", c.mc_epsilon);
  c.record_lengths = j.value("record_lengths", c.record_lengths);
  c.output = j.value("output", c.output);
  return c;
}

// Geometric grid 1, 2, 3, 5, 8, ... (ratio ~1.5, rounded, deduplicated) up to
// `top`, with `top` itself always included.
inline std::vector<std::size_t> geometric_grid(std::size_t top, double ratio = 1.5) {
  std::vector<std::size_t> grid;
  double x = 1.0;
  while (static_cast<std::size_t>(std::llround(x)) < top) {
    auto v = static_cast<std::size_t>(std::llround(x));
    if (grid.empty() || v > grid.back())
      grid.push_back(v);
    x *= ratio;
  }
  if (grid.empty() || grid.back() != top)
    grid.push_back(top);
  return grid;
}

struct Sample {
  double value = 0.0;
  double z1 = 0.0;
  double z2 = 0.0;
  bool failed = false;
  std::map<std::size_t, std::int64_t> per_length;
};

// Holds the loaded graph for file-backed configs so ensembles reuse it.
class Ensemble {
public:
  explicit Ensemble(ExperimentConfig cfg) : cfg_(std::move(cfg)) {
    if (cfg_.realizations * cfg_.samples < 1)
      throw ParameterError("experiment: realizations * samples must be at least 1");
    if (cfg_.graph.model == GraphModel::File) {
      file_graph_ = std::make_shared<Graph>(load_edge_list(cfg_.graph.path).graph);
      cfg_.graph.N = file_graph_->num_nodes();
    }
  }

  const ExperimentConfig& config() const { return cfg_; }

  TerminalMode mode() const {
    return cfg_.kind == TransportKind::McFlow ? TerminalMode::OrderedPairs
                                              : TerminalMode::DisjointSets;
  }

  void check_n(std::size_t n) const {
    const std::size_t N = cfg_.graph.N;
    bool ok = mode() == TerminalMode::DisjointSets ? (n >= 1 && 2 * n <= N) : (n >= 1 && n <= N);
    if (!ok)
      throw ParameterError("experiment: n = " + std::to_string(n) + " out of range for N = " +
                           std::to_string(N));
  }

  std::uint64_t graph_seed(std::size_t n, std::size_t r) const {
    return derive_seed(cfg_.seed, 0x47, n, r);
  }
  std::uint64_t terminal_seed(std::size_t n, std::size_t r, std::size_t t) const {
    return derive_seed(cfg_.seed, 0x54 + (static_cast<std::uint64_t>(t) << 8), n, r);
  }

  std::shared_ptr<const Graph> graph(std::size_t n, std::size_t r) const {
    if (file_graph_)
      return file_graph_;
    const auto& gs = cfg_.graph;
    if (gs.model == GraphModel::ER)
      return std::make_shared<Graph>(gen_er(gs.N, gs.mean_degree, graph_seed(n, r)));
    return std::make_shared<Graph>(gen_sf_config(gs.N, gs.gamma, gs.m, graph_seed(n, r)));
  }

  Sample evaluate(const Graph& g, const TerminalSet& t) const {
    Sample s;
    s.z1 = static_cast<double>(degree_sum(g, t.sources));
    s.z2 = static_cast<double>(degree_sum(g, t.sinks));
    try {
      switch (cfg_.kind) {
      case TransportKind::Flow:
        if (cfg_.record_lengths) {
          auto r = flow_decompose_by_length(g, t);
          s.value = r.value;
          s.per_length = std::move(r.per_length_flow);
        } else {
          s.value = max_flow(g, t).value;
        }
        break;
      case TransportKind::Current:
        s.value = electrical_current(g, t, CurrentOptions{cfg_.tol}).value;
        break;
      case TransportKind::McFlow:
        s.value = mc_flow_fractional(g, t, McFlowOptions{cfg_.mc_method, 256, cfg_.mc_epsilon}).value;
        break;
      }
    } catch (const ConvergenceError&) {
      s.failed = true;
    }
    return s;
  }

  // All R * T samples for one n, ordered by (realization, sample). A
  // realization whose graph cannot be generated counts as T failed samples.
  std::vector<Sample> run(std::size_t n) const {
    check_n(n);
    const std::size_t R = cfg_.realizations, T = cfg_.samples;
    std::vector<Sample> out(R * T);
    parallel_for(R, cfg_.workers, [&](std::size_t r) {
      std::shared_ptr<const Graph> g;
      try {
        g = graph(n, r);
      } catch (const GenerationError&) {
        for (std::size_t t = 0; t < T; ++t)
          out[r * T + t].failed = true;
        return;
      }
      for (std::size_t t = 0; t < T; ++t)
        out[r * T + t] = evaluate(*g, sample_terminals(*g, n, mode(), terminal_seed(n, r, t)));
    });
    return out;
  }

private:
  ExperimentConfig cfg_;
  std::shared_ptr<const Graph> file_graph_;
};

struct SweepPoint {
  std::size_t n = 0;
  Accumulator stats;
  std::size_t failures = 0;
  // Sum of F_l over successful samples; mean is sum / stats.count.
  std::map<std::size_t, double> length_sums;

  double mean() const { return stats.mean(); }
  double std_error() const { return stats.std_error(); }
  double mean_per_n() const { return stats.mean() / static_cast<double>(n); }
  double std_error_per_n() const { return stats.std_error() / static_cast<double>(n); }
  double length_mean(std::size_t len) const {
    auto it = length_sums.find(len);
    return it == length_sums.end() || stats.count == 0
               ? 0.0
               : it->second / static_cast<double>(stats.count);
  }
};

struct SweepResult {
  ExperimentConfig config;
  std::vector<SweepPoint> points;
  std::vector<std::string> theory_names;
  std::vector<std::vector<double>> theory;  // theory[point][column]

  std::vector<std::size_t> n_grid() const {
    std::vector<std::size_t> g;
    for (const auto& p : points)
      g.push_back(p.n);
    return g;
  }

  double theory_value(std::size_t point, const std::string& name) const {
    auto it = std::find(theory_names.begin(), theory_names.end(), name);
    if (it == theory_names.end())
      throw ParameterError("no theory column '" + name + "'");
    return theory[point][static_cast<std::size_t>(it - theory_names.begin())];
  }
};

inline SweepPoint aggregate(std::size_t n, const std::vector<Sample>& samples) {
  SweepPoint pt;
  pt.n = n;
  for (const auto& s : samples) {
    if (s.failed) {
      ++pt.failures;
      continue;
    }
    pt.stats.add(s.value);
    for (auto [len, units] : s.per_length)
      pt.length_sums[len] += static_cast<double>(units);
  }
  return pt;
}

inline constexpr double kMaxFailureFraction = 0.1;

inline SweepResult run_sweep(const ExperimentConfig& cfg) {
  Ensemble ens(cfg);
  SweepResult res;
  res.config = ens.config();
  for (std::size_t n : cfg.n_values) {
    auto samples = ens.run(n);
    auto pt = aggregate(n, samples);
    if (static_cast<double>(pt.failures) > kMaxFailureFraction * static_cast<double>(samples.size()))
      throw ConvergenceError("run_sweep: solver failures for n = " + std::to_string(n),
                             static_cast<double>(pt.failures) / static_cast<double>(samples.size()),
                             samples.size());
    res.points.push_back(std::move(pt));
  }
  return res;
}

// ---------------------------------------------------------------------------
// Theory overlay.

enum class TheoryColumn {
  SmallN,         // flow: mean min of degree sums; current: harmonic mean law; mcflow: n mu(<k>)
  LargeN,         // flow / current path-length decomposition (F3 upper bound)
  PathLengths,    // f1, f2, f3 upper and lower
  McRecursion,    // effective-degree recursion
};

struct TheoryTable {
  std::vector<std::size_t> n_grid;
  std::vector<std::string> names;
  std::vector<std::vector<double>> rows;
};

inline TheoryTable theory_table(TransportKind kind, const TheoryParams& base,
                                const std::vector<std::size_t>& n_grid,
                                const std::vector<TheoryColumn>& columns) {
  TheoryTable tab;
  tab.n_grid = n_grid;
  std::optional<McFlowCurve> mc;
  std::size_t n_top = n_grid.empty() ? 1 : *std::max_element(n_grid.begin(), n_grid.end());
  for (auto col : columns) {
    switch (col) {
    case TheoryColumn::SmallN:
      tab.names.push_back("theory_small_n");
      break;
    case TheoryColumn::LargeN:
      tab.names.push_back("theory_large_n");
      break;
    case TheoryColumn::PathLengths:
      tab.names.insert(tab.names.end(), {"theory_f1", "theory_f2", "theory_f3_upper", "theory_f3_lower"});
      break;
    case TheoryColumn::McRecursion:
      tab.names.push_back("theory_mc_recursion");
      mc = mc_flow_theory(base, n_top);
      break;
    }
  }
  for (std::size_t n : n_grid) {
    TheoryParams prm = base;
    prm.n = n;
    std::vector<double> row;
    const bool disjoint_ok = 2 * n <= base.N;
    const double nan = std::nan("");
    for (auto col : columns) {
      switch (col) {
      case TheoryColumn::SmallN:
        if (kind == TransportKind::McFlow)
          row.push_back(static_cast<double>(n) * mu(base.mean_degree));
        else if (!disjoint_ok)
          row.push_back(nan);
        else if (kind == TransportKind::Flow)
          row.push_back(mean_flow_small_n(prm).total);
        else
          row.push_back(mean_current_small_n(prm));
        break;
      case TheoryColumn::LargeN:
        if (!disjoint_ok)
          row.push_back(nan);
        else
          row.push_back(kind == TransportKind::Current ? mean_current_large_n(prm)
                                                       : mean_flow_large_n(prm));
        break;
      case TheoryColumn::PathLengths:
        if (!disjoint_ok) {
          row.insert(row.end(), {nan, nan, nan, nan});
        } else {
          auto pred = large_n_prediction(prm);
          row.insert(row.end(), {pred.f1, pred.f2, pred.f3, pred.f3_lower});
        }
        break;
      case TheoryColumn::McRecursion:
        row.push_back(mc->flow[n - 1]);
        break;
      }
    }
    tab.rows.push_back(std::move(row));
  }
  return tab;
}

inline SweepResult overlay_theory(SweepResult sweep, const TheoryTable& table) {
  if (table.names.empty())
    return sweep;
  if (table.n_grid != sweep.n_grid())
    throw ParameterError("overlay_theory: n grid of theory table does not match the sweep");
  const std::size_t base = sweep.theory_names.size();
  sweep.theory_names.insert(sweep.theory_names.end(), table.names.begin(), table.names.end());
  for (const auto& name : table.names)
    sweep.theory_names.push_back("rel_dev_" + name.substr(7));
  sweep.theory.resize(sweep.points.size());
  for (std::size_t i = 0; i < sweep.points.size(); ++i) {
    auto& row = sweep.theory[i];
    row.resize(base, std::nan(""));
    row.insert(row.end(), table.rows[i].begin(), table.rows[i].end());
    for (double th : table.rows[i])
      row.push_back((sweep.points[i].mean() - th) / th);
  }
  return sweep;
}

inline SweepResult overlay_theory(SweepResult sweep, const TheoryParams& params,
                                  const std::vector<TheoryColumn>& columns) {
  if (columns.empty())
    return sweep;
  if (params.N != sweep.config.graph.N)
    throw ParameterError("overlay_theory: theory N does not match the sweep");
  auto table = theory_table(sweep.config.kind, params, sweep.n_grid(), columns);
  return overlay_theory(std::move(sweep), table);
}

// ---------------------------------------------------------------------------
// Optimum of transport per terminal.

struct Optimum {
  std::size_t n_opt = 0;
  double value = 0.0;
  bool at_boundary = false;
  bool beyond_validity_scale = false;
};

inline Optimum optimum_finder(const SweepResult& sweep, double validity_scale = 0.0) {
  if (sweep.points.size() < 3)
    throw ParameterError("optimum_finder: need at least 3 sweep points");
  std::size_t best = 0;
  for (std::size_t i = 1; i < sweep.points.size(); ++i)
    if (sweep.points[i].mean_per_n() > sweep.points[best].mean_per_n())
      best = i;
  Optimum o;
  o.n_opt = sweep.points[best].n;
  o.value = sweep.points[best].mean_per_n();
  o.at_boundary = best == 0 || best + 1 == sweep.points.size();
  o.beyond_validity_scale = static_cast<double>(o.n_opt) >= validity_scale;
  return o;
}

// ---------------------------------------------------------------------------
// Histograms.

struct FlowHistogram {
  std::size_t n = 0;
  bool logarithmic = false;
  double collapse_exponent = 0.0;  // densities divided by n^collapse_exponent
  std::size_t samples = 0;
  std::vector<HistogramBin> bins;

  double collapsed_density(const HistogramBin& b) const {
    return b.density / std::pow(static_cast<double>(n), collapse_exponent);
  }
};

struct HistogramOptions {
  bool logarithmic = false;
  double ratio = 1.3;
  // 2 gamma - 2 for scale-free collapse; 0 leaves densities untouched.
  double collapse_exponent = 0.0;
};

inline FlowHistogram make_histogram(std::size_t n, const std::vector<double>& values,
                                    const HistogramOptions& opt) {
  if (values.empty())
    throw ParameterError("flow_histogram: empty histogram");
  FlowHistogram h;
  h.n = n;
  h.logarithmic = opt.logarithmic;
  h.collapse_exponent = opt.collapse_exponent;
  h.samples = values.size();
  h.bins = integer_histogram(values, opt.logarithmic, opt.ratio);
  return h;
}

inline std::vector<FlowHistogram> flow_histogram(const ExperimentConfig& cfg,
                                                 const std::vector<std::size_t>& n_list,
                                                 const HistogramOptions& opt = {}) {
  Ensemble ens(cfg);
  std::vector<FlowHistogram> out;
  for (std::size_t n : n_list) {
    std::vector<double> values;
    for (const auto& s : ens.run(n))
      if (!s.failed)
        values.push_back(s.value);
    out.push_back(make_histogram(n, values, opt));
  }
  return out;
}

// ---------------------------------------------------------------------------
// CSV output. Numbers use %.17g so reruns are byte-identical.

inline std::string format_number(double v) {
  if (std::isnan(v))
    return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void write_sweep_csv(std::ostream& out, const SweepResult& sweep) {
  std::size_t max_len = 0;
  for (const auto& p : sweep.points)
    if (!p.length_sums.empty())
      max_len = std::max(max_len, p.length_sums.rbegin()->first);
  out << "n,mean,stderr,count,failures,mean_per_n,stderr_per_n";
  for (std::size_t l = 1; l <= max_len; ++l)
    out << ",mean_f" << l;
  for (const auto& name : sweep.theory_names)
    out << ',' << name;
  out << '\n';
  for (std::size_t i = 0; i < sweep.points.size(); ++i) {
    const auto& p = sweep.points[i];
    out << p.n << ',' << format_number(p.mean()) << ',' << format_number(p.std_error()) << ','
        << p.stats.count << ',' << p.failures << ',' << format_number(p.mean_per_n()) << ','
        << format_number(p.std_error_per_n());
    for (std::size_t l = 1; l <= max_len; ++l)
      out << ',' << format_number(p.length_mean(l));
    if (i < sweep.theory.size())
      for (double v : sweep.theory[i])
        out << ',' << format_number(v);
    out << '\n';
  }
}

inline void write_histogram_csv(std::ostream& out, const FlowHistogram& h) {
  out << "bin_left,bin_right,mass,count,density,collapsed_density\n";
  for (const auto& b : h.bins)
    out << format_number(b.left) << ',' << format_number(b.right) << ',' << format_number(b.mass)
        << ',' << b.count << ',' << format_number(b.density) << ','
        << format_number(h.collapsed_density(b)) << '\n';
}

inline void write_theory_csv(std::ostream& out, const TheoryTable& t) {
  out << "n";
  for (const auto& name : t.names)
    out << ',' << name;
  out << '\n';
  for (std::size_t i = 0; i < t.n_grid.size(); ++i) {
    out << t.n_grid[i];
    for (double v : t.rows[i])
      out << ',' << format_number(v);
    out << '\n';
  }
}

}  // namespace netflux

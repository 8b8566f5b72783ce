// netflux command-line driver.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "netflux/experiments.hpp"

namespace fs = std::filesystem;
using namespace netflux;
using nlohmann::json;

namespace {

enum Exit { kOk = 0, kUsage = 1, kNumerical = 2, kIo = 3 };

struct IoError : Error {
  using Error::Error;
};

std::uint64_t default_seed() {
  if (const char* s = std::getenv("NETFLUX_SEED"))
    return std::stoull(s);
  return 1;
}

void print_config(const json& cfg) { std::cerr << "resolved config: " << cfg.dump() << '\n'; }

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path())
    fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw IoError("cannot write " + path.string());
  out << text;
  if (!out)
    throw IoError("write failed for " + path.string());
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw IoError("cannot read " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ParameterError(path + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// generate

struct GenerateArgs {
  std::string model;
  std::size_t N = 0;
  double kavg = 4.0;
  double gamma = 2.5;
  std::size_t m = 2;
  std::uint64_t seed = 1;
  std::string out;
};

int cmd_generate(const GenerateArgs& a) {
  json cfg{{"model", a.model}, {"N", a.N}, {"seed", a.seed}, {"out", a.out}};
  if (a.model == "er")
    cfg["mean_degree"] = a.kavg;
  else
    cfg["gamma"] = a.gamma, cfg["m"] = a.m;
  print_config(cfg);
  Graph g = a.model == "er" ? gen_er(a.N, a.kavg, a.seed) : gen_sf_config(a.N, a.gamma, a.m, a.seed);
  std::ostringstream text;
  write_edge_list(text, g);
  write_file(a.out, text.str());
  std::cout << "N " << g.num_nodes() << "\nedges " << g.num_edges() << "\nmean_degree "
            << format_number(2.0 * double(g.num_edges()) / double(g.num_nodes())) << '\n';
  return kOk;
}

// ---------------------------------------------------------------------------
// flow / current / mcflow

struct TransportArgs {
  std::string graph;
  std::size_t n = 1;
  std::string mode;
  std::uint64_t seed = 1;
  bool lengths = false;
  double tol = 1e-10;
  std::string method = "auto";
  double epsilon = 0.1;
};

int cmd_transport(TransportKind kind, const TransportArgs& a) {
  TerminalMode mode = kind == TransportKind::McFlow ? TerminalMode::OrderedPairs
                                                    : TerminalMode::DisjointSets;
  if (!a.mode.empty())
    mode = a.mode == "pairs" ? TerminalMode::OrderedPairs : TerminalMode::DisjointSets;
  json cfg{{"transport", to_string(kind)},
           {"graph", a.graph},
           {"n", a.n},
           {"mode", mode == TerminalMode::OrderedPairs ? "pairs" : "disjoint"},
           {"seed", a.seed}};
  if (kind == TransportKind::Flow)
    cfg["lengths"] = a.lengths;
  if (kind == TransportKind::Current)
    cfg["tol"] = a.tol;
  if (kind == TransportKind::McFlow)
    cfg["method"] = a.method, cfg["epsilon"] = a.epsilon;
  print_config(cfg);

  Graph g = load_edge_list(a.graph).graph;
  TerminalSet t = sample_terminals(g, a.n, mode, a.seed);
  TransportResult r;
  switch (kind) {
  case TransportKind::Flow:
    r = a.lengths ? flow_decompose_by_length(g, t) : max_flow(g, t);
    break;
  case TransportKind::Current:
    r = electrical_current(g, t, a.tol);
    break;
  case TransportKind::McFlow: {
    const bool fits_exact = g.num_nodes() <= kExactMaxNodes && t.n() <= kExactMaxPairs;
    if (a.method == "exact" || (a.method == "auto" && fits_exact)) {
      r = mc_flow_integral_exact(g, t);
    } else {
      McFlowOptions opt;
      opt.method = a.method == "auto" ? McMethod::Auto : parse_mc_method(a.method);
      opt.epsilon = a.epsilon;
      r = mc_flow_fractional(g, t, opt);
    }
    break;
  }
  }
  std::cout << to_json(r).dump(2) << '\n';
  return kOk;
}

// ---------------------------------------------------------------------------
// theory

struct TheoryArgs {
  std::string kind = "flow";
  std::size_t N = 1024;
  double kavg = 8.0;
  double gamma = 2.5;
  std::size_t m = 2;
  double c = 1.0;
  std::vector<std::size_t> n_values;
  std::size_t pdf_n = 0;
  std::string pdf_model = "er";
  bool nstar = false;
  std::string out;
};

std::vector<TheoryColumn> default_columns(TransportKind kind) {
  if (kind == TransportKind::McFlow)
    return {TheoryColumn::SmallN, TheoryColumn::McRecursion};
  return {TheoryColumn::SmallN, TheoryColumn::LargeN, TheoryColumn::PathLengths};
}

int cmd_theory(TheoryArgs a) {
  TheoryParams prm;
  prm.N = a.N;
  prm.mean_degree = a.kavg;
  prm.gamma = a.gamma;
  prm.m = a.m;
  prm.c = a.c;
  const auto kind = parse_transport_kind(a.kind);
  if (a.n_values.empty())
    a.n_values = geometric_grid(kind == TransportKind::McFlow ? a.N : a.N / 2);
  json cfg{{"transport", a.kind}, {"N", a.N},         {"mean_degree", a.kavg}, {"gamma", a.gamma},
           {"m", a.m},            {"c", a.c},         {"n_values", a.n_values}, {"pdf_n", a.pdf_n},
           {"pdf_model", a.pdf_model}, {"nstar", a.nstar}, {"out", a.out}};
  print_config(cfg);

  std::ostringstream text;
  if (a.nstar) {
    auto b = n_star_bounds(prm);
    text << json{{"lower", b.lower}, {"upper", b.upper}, {"recursion", b.recursion}}.dump(2) << '\n';
  } else if (a.pdf_n > 0) {
    prm.n = a.pdf_n;
    Pdf pdf = a.pdf_model == "sf" ? flow_pdf_sf(prm) : flow_pdf_er(prm);
    text << "F,mass\n";
    for (std::size_t i = 0; i < pdf.size(); ++i)
      text << format_number(pdf.support[i]) << ',' << format_number(pdf.mass[i]) << '\n';
  } else {
    write_theory_csv(text, theory_table(kind, prm, a.n_values, default_columns(kind)));
  }
  if (a.out.empty())
    std::cout << text.str();
  else
    write_file(a.out, text.str());
  return kOk;
}

// ---------------------------------------------------------------------------
// Figure runs. A run is one sweep or one histogram set; its JSON form is
// what the manifest stores, so a rerun from the manifest is the same run.

struct FigureRun {
  std::string name;
  std::string type;  // "sweep" or "histogram"
  ExperimentConfig cfg;
  std::vector<std::string> theory;  // small_n, large_n, lengths, mc_recursion, small_n_sf
  std::vector<std::size_t> hist_n;
  HistogramOptions hist;
};

json run_to_json(const FigureRun& r) {
  json j{{"name", r.name}, {"type", r.type}, {"config", to_json(r.cfg)}};
  if (r.type == "sweep") {
    j["theory"] = r.theory;
  } else {
    j["histogram_n"] = r.hist_n;
    j["logarithmic"] = r.hist.logarithmic;
    j["ratio"] = r.hist.ratio;
    j["collapse_exponent"] = r.hist.collapse_exponent;
  }
  return j;
}

FigureRun run_from_json(const json& j) {
  FigureRun r;
  r.name = j.at("name").get<std::string>();
  r.type = j.at("type").get<std::string>();
  r.cfg = config_from_json(j.at("config"));
  if (r.type == "sweep") {
    r.theory = j.value("theory", std::vector<std::string>{});
  } else if (r.type == "histogram") {
    r.hist_n = j.at("histogram_n").get<std::vector<std::size_t>>();
    r.hist.logarithmic = j.value("logarithmic", false);
    r.hist.ratio = j.value("ratio", 1.3);
    r.hist.collapse_exponent = j.value("collapse_exponent", 0.0);
  } else {
    throw ParameterError("manifest: unknown run type '" + r.type + "'");
  }
  return r;
}

TheoryParams theory_params(const ExperimentConfig& c) {
  TheoryParams p;
  p.N = c.graph.N;
  p.mean_degree = c.graph.mean_degree;
  p.gamma = c.graph.gamma;
  p.m = c.graph.m;
  return p;
}

struct CsvFile {
  std::string name;
  std::string text;
};

std::vector<CsvFile> execute_run(const FigureRun& r) {
  std::vector<CsvFile> files;
  if (r.type == "histogram") {
    for (const auto& h : flow_histogram(r.cfg, r.hist_n, r.hist)) {
      std::ostringstream text;
      write_histogram_csv(text, h);
      files.push_back({r.name + "_n" + std::to_string(h.n) + ".csv", text.str()});
    }
    return files;
  }
  SweepResult s = run_sweep(r.cfg);
  const TheoryParams prm = theory_params(r.cfg);
  std::vector<TheoryColumn> cols;
  bool sf_small_n = false;
  for (const auto& name : r.theory) {
    if (name == "small_n") cols.push_back(TheoryColumn::SmallN);
    else if (name == "large_n") cols.push_back(TheoryColumn::LargeN);
    else if (name == "lengths") cols.push_back(TheoryColumn::PathLengths);
    else if (name == "mc_recursion") cols.push_back(TheoryColumn::McRecursion);
    else if (name == "small_n_sf") sf_small_n = true;
    else throw ParameterError("unknown theory column '" + name + "'");
  }
  s = overlay_theory(std::move(s), prm, cols);
  if (sf_small_n) {
    TheoryTable tab;
    tab.n_grid = s.n_grid();
    tab.names = {"theory_small_n_sf"};
    for (std::size_t n : tab.n_grid) {
      TheoryParams q = prm;
      q.n = n;
      tab.rows.push_back({flow_pdf_sf(q).mean()});
    }
    s = overlay_theory(std::move(s), tab);
  }
  std::ostringstream text;
  write_sweep_csv(text, s);
  files.push_back({r.name + ".csv", text.str()});
  return files;
}

ExperimentConfig er_sweep(std::size_t N, double k, TransportKind kind, std::size_t R, std::size_t T,
                          std::vector<std::size_t> grid, std::uint64_t seed) {
  ExperimentConfig c;
  c.graph.model = GraphModel::ER;
  c.graph.N = N;
  c.graph.mean_degree = k;
  c.kind = kind;
  c.realizations = R;
  c.samples = T;
  c.n_values = std::move(grid);
  c.seed = seed;
  return c;
}

std::string k_tag(double k) { return "k" + format_number(k); }

// Desk presets keep each figure within minutes on one core; full presets use
// N = 4096 for most ER and SF sweeps, a second degree and larger ensembles.
std::vector<FigureRun> figure_preset(const std::string& id, bool full, std::uint64_t seed) {
  std::vector<FigureRun> runs;
  auto sweep = [&](std::string name, ExperimentConfig c, std::vector<std::string> theory) {
    FigureRun r;
    r.name = std::move(name);
    r.type = "sweep";
    r.cfg = std::move(c);
    r.theory = std::move(theory);
    runs.push_back(std::move(r));
  };
  const std::size_t N_er = full ? 4096 : 1024;
  const std::size_t R = full ? 50 : 20, T = 20;
  const std::vector<double> ks_flow = full ? std::vector<double>{8, 16} : std::vector<double>{8};

  if (id == "1") {
    for (double k : ks_flow)
      sweep("fig1_" + k_tag(k), er_sweep(N_er, k, TransportKind::Flow, R, T, geometric_grid(N_er / 2), seed),
            {"small_n", "large_n"});
  } else if (id == "2a") {
    FigureRun r;
    r.name = "fig2a";
    r.type = "histogram";
    r.cfg.graph.model = GraphModel::SF;
    r.cfg.graph.N = 4096;
    r.cfg.graph.gamma = 2.5;
    r.cfg.graph.m = 2;
    r.cfg.kind = TransportKind::Flow;
    r.cfg.realizations = full ? 200 : 100;
    r.cfg.samples = 100;
    r.cfg.seed = seed;
    r.hist_n = {1, 3, 5, 10};
    r.hist.logarithmic = true;
    r.hist.collapse_exponent = 2.0 * r.cfg.graph.gamma - 2.0;
    runs.push_back(std::move(r));
  } else if (id == "2b") {
    ExperimentConfig c;
    c.graph.model = GraphModel::SF;
    c.graph.N = full ? 4096 : 1024;
    c.graph.gamma = 2.5;
    c.graph.m = 2;
    c.kind = TransportKind::Flow;
    c.realizations = full ? 50 : 10;
    c.samples = full ? 20 : 10;
    c.n_values = geometric_grid(c.graph.N / 2);
    c.seed = seed;
    sweep("fig2b", c, {"small_n_sf"});
  } else if (id == "3a") {
    for (double k : ks_flow) {
      auto c = er_sweep(N_er, k, TransportKind::Flow, full ? 50 : 10, full ? 20 : 10,
                        geometric_grid(N_er / 2), seed);
      c.record_lengths = true;
      sweep("fig3a_" + k_tag(k), c, {"small_n", "large_n", "lengths"});
    }
  } else if (id == "3b") {
    const std::vector<double> ks = full ? std::vector<double>{4, 8} : std::vector<double>{4};
    for (double k : ks)
      sweep("fig3b_" + k_tag(k),
            er_sweep(1024, k, TransportKind::Current, full ? 50 : 10, full ? 20 : 10,
                     geometric_grid(512), seed),
            {"small_n", "large_n"});
  } else if (id == "4") {
    for (double k : ks_flow) {
      for (auto kind : {TransportKind::Flow, TransportKind::Current}) {
        auto c = er_sweep(N_er, k, kind, full ? 50 : 10, full ? 20 : 10, geometric_grid(N_er / 2), seed);
        sweep("fig4_" + to_string(kind) + "_" + k_tag(k), c, {"small_n", "large_n"});
      }
    }
  } else if (id == "5b") {
    const std::vector<std::size_t> grid{1, 2, 3, 4, 5, 6, 8, 10, 13, 16, 20, 25, 32, 40};
    for (double k : {3.0, 4.0, 5.0, 6.0}) {
      auto c = er_sweep(128, k, TransportKind::McFlow, full ? 10 : 2, full ? 10 : 2, grid, seed);
      c.mc_method = McMethod::Lp;
      sweep("fig5b_" + k_tag(k), c, {"small_n", "mc_recursion"});
    }
  } else {
    throw ParameterError("unknown figure id '" + id + "' (expected 1, 2a, 2b, 3a, 3b, 4 or 5b)");
  }
  return runs;
}

struct FigureArgs {
  std::string id;
  std::string scale = "desk";
  std::string out;
  std::string manifest;
  std::size_t workers = 1;
  std::uint64_t seed = 1;
};

int cmd_reproduce_figure(const FigureArgs& a) {
  json manifest;
  if (!a.manifest.empty()) {
    manifest = read_json_file(a.manifest);
  } else {
    if (a.id.empty())
      throw ParameterError("reproduce-figure: give a figure id or --manifest");
    if (a.scale != "desk" && a.scale != "full")
      throw ParameterError("reproduce-figure: --scale must be desk or full");
    manifest = {{"figure", a.id}, {"scale", a.scale}, {"seed", a.seed}, {"runs", json::array()}};
    for (const auto& r : figure_preset(a.id, a.scale == "full", a.seed))
      manifest["runs"].push_back(run_to_json(r));
  }
  const fs::path dir =
      a.out.empty() ? fs::path("figure_" + manifest.at("figure").get<std::string>()) : fs::path(a.out);
  print_config(json{{"manifest", manifest}, {"out", dir.string()}, {"workers", a.workers}});

  std::vector<FigureRun> runs;
  for (const auto& j : manifest.at("runs"))
    runs.push_back(run_from_json(j));
  write_file(dir / "manifest.json", manifest.dump(2) + "\n");
  for (auto& r : runs) {
    r.cfg.workers = a.workers;
    for (const auto& f : execute_run(r)) {
      write_file(dir / f.name, f.text);
      std::cout << (dir / f.name).string() << '\n';
    }
  }
  return kOk;
}

// ---------------------------------------------------------------------------
// sweep

struct SweepArgs {
  std::string config;
  std::string model = "er";
  std::string graph;
  std::size_t N = 1024;
  double kavg = 8.0;
  double gamma = 2.5;
  std::size_t m = 2;
  std::string kind = "flow";
  std::vector<std::size_t> n_values;
  std::size_t R = 50;
  std::size_t T = 20;
  std::uint64_t seed = 1;
  std::size_t workers = 1;
  std::string mc_method = "auto";
  double mc_epsilon = 0.1;
  double tol = 1e-10;
  bool lengths = false;
  std::vector<std::string> theory;
  std::string out;
};

int cmd_sweep(const SweepArgs& a) {
  ExperimentConfig c;
  if (!a.config.empty()) {
    c = config_from_json(read_json_file(a.config));
  } else {
    c.graph.model = parse_graph_model(a.graph.empty() ? a.model : "file");
    c.graph.N = a.N;
    c.graph.mean_degree = a.kavg;
    c.graph.gamma = a.gamma;
    c.graph.m = a.m;
    c.graph.path = a.graph;
    c.kind = parse_transport_kind(a.kind);
    c.realizations = a.R;
    c.samples = a.T;
    c.seed = a.seed;
    c.mc_method = parse_mc_method(a.mc_method);
    c.mc_epsilon = a.mc_epsilon;
    c.tol = a.tol;
    c.record_lengths = a.lengths;
    c.output = a.out;
    c.n_values = a.n_values;
  }
  c.workers = a.workers;
  if (c.graph.model == GraphModel::File)
    c.graph.N = load_edge_list(c.graph.path).graph.num_nodes();
  if (c.n_values.empty())
    c.n_values = geometric_grid(c.kind == TransportKind::McFlow ? c.graph.N : c.graph.N / 2);
  if (!a.out.empty())
    c.output = a.out;
  print_config(to_json(c));
  FigureRun r{"sweep", "sweep", c, a.theory, {}, {}};
  if (c.graph.model == GraphModel::File && !r.theory.empty())
    throw ParameterError("sweep: theory columns need a generated graph model");
  const auto files = execute_run(r);
  if (c.output.empty())
    std::cout << files[0].text;
  else
    write_file(c.output, files[0].text);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"netflux: transport between many sources and sinks on random networks"};
  app.require_subcommand(1);
  const std::uint64_t seed0 = default_seed();

  GenerateArgs gen;
  gen.seed = seed0;
  auto* g = app.add_subcommand("generate", "Generate a random graph and write its edge list");
  g->add_option("--model", gen.model, "er or sf")->required()->check(CLI::IsMember({"er", "sf"}));
  g->add_option("--n", gen.N, "number of nodes")->required();
  g->add_option("--kavg", gen.kavg, "ER mean degree")->capture_default_str();
  g->add_option("--gamma", gen.gamma, "SF degree exponent")->capture_default_str();
  g->add_option("--m", gen.m, "SF minimum degree")->capture_default_str();
  g->add_option("--seed", gen.seed, "seed (default $NETFLUX_SEED or 1)");
  g->add_option("--out", gen.out, "output edge-list path")->required();

  TransportArgs tr;
  tr.seed = seed0;
  std::map<std::string, TransportKind> kinds{
      {"flow", TransportKind::Flow}, {"current", TransportKind::Current}, {"mcflow", TransportKind::McFlow}};
  std::map<std::string, CLI::App*> tcmds;
  for (auto& [name, kind] : kinds) {
    auto* c = app.add_subcommand(name, "Compute " + name + " between random terminals of a graph");
    c->add_option("--graph", tr.graph, "edge-list file")->required();
    c->add_option("--n", tr.n, "number of sources (sinks) or pairs")->required();
    c->add_option("--seed", tr.seed, "terminal sampling seed (default $NETFLUX_SEED or 1)");
    c->add_option("--mode", tr.mode, "disjoint or pairs")->check(CLI::IsMember({"disjoint", "pairs"}));
    if (kind == TransportKind::Flow)
      c->add_flag("--lengths", tr.lengths, "report flow per augmenting-path length");
    if (kind == TransportKind::Current)
      c->add_option("--tol", tr.tol, "relative residual tolerance")->capture_default_str();
    if (kind == TransportKind::McFlow) {
      c->add_option("--method", tr.method, "auto, exact, lp or mwu")
          ->check(CLI::IsMember({"auto", "exact", "lp", "mwu"}))
          ->capture_default_str();
      c->add_option("--epsilon", tr.epsilon, "MWU accuracy")->capture_default_str();
    }
    tcmds[name] = c;
  }

  TheoryArgs th;
  auto* t = app.add_subcommand("theory", "Tabulate theory predictions for ER networks");
  t->add_option("--kind", th.kind, "flow, current or mcflow")
      ->check(CLI::IsMember({"flow", "current", "mcflow"}))
      ->capture_default_str();
  t->add_option("--N", th.N, "number of nodes")->capture_default_str();
  t->add_option("--kavg", th.kavg, "mean degree")->capture_default_str();
  t->add_option("--gamma", th.gamma, "SF degree exponent (pdf only)")->capture_default_str();
  t->add_option("--m", th.m, "SF minimum degree (pdf only)")->capture_default_str();
  t->add_option("--c", th.c, "current prefactor")->capture_default_str();
  t->add_option("--n", th.n_values, "n grid (default geometric)")->delimiter(',');
  t->add_option("--pdf", th.pdf_n, "print the flow pdf for this n instead");
  t->add_option("--pdf-model", th.pdf_model, "er or sf")->check(CLI::IsMember({"er", "sf"}));
  t->add_flag("--nstar", th.nstar, "print saturation bounds for MC flow");
  t->add_option("--out", th.out, "output path (default stdout)");

  SweepArgs sw;
  sw.seed = seed0;
  auto* s = app.add_subcommand("sweep", "Run an ensemble sweep over n and write CSV");
  s->add_option("--config", sw.config, "JSON experiment config (replaces the flags below)");
  s->add_option("--model", sw.model, "er or sf")->check(CLI::IsMember({"er", "sf"}))->capture_default_str();
  s->add_option("--graph", sw.graph, "edge-list file instead of a generated model");
  s->add_option("--N", sw.N, "number of nodes")->capture_default_str();
  s->add_option("--kavg", sw.kavg, "ER mean degree")->capture_default_str();
  s->add_option("--gamma", sw.gamma, "SF degree exponent")->capture_default_str();
  s->add_option("--m", sw.m, "SF minimum degree")->capture_default_str();
  s->add_option("--kind", sw.kind, "flow, current or mcflow")
      ->check(CLI::IsMember({"flow", "current", "mcflow"}))
      ->capture_default_str();
  s->add_option("--n", sw.n_values, "n grid (default geometric)")->delimiter(',');
  s->add_option("--realizations,-R", sw.R, "graphs per n")->capture_default_str();
  s->add_option("--samples,-T", sw.T, "terminal sets per graph")->capture_default_str();
  s->add_option("--seed", sw.seed, "base seed (default $NETFLUX_SEED or 1)");
  s->add_option("--workers", sw.workers, "worker threads")->capture_default_str();
  s->add_option("--mc-method", sw.mc_method, "auto, lp or mwu")
      ->check(CLI::IsMember({"auto", "lp", "mwu"}))
      ->capture_default_str();
  s->add_option("--mc-epsilon", sw.mc_epsilon, "MWU accuracy")->capture_default_str();
  s->add_option("--tol", sw.tol, "current solver tolerance")->capture_default_str();
  s->add_flag("--lengths", sw.lengths, "record flow per path length");
  s->add_option("--theory", sw.theory, "small_n, large_n, lengths, mc_recursion, small_n_sf")
      ->delimiter(',');
  s->add_option("--out", sw.out, "CSV path (default stdout)");

  FigureArgs fig;
  fig.seed = seed0;
  auto* f = app.add_subcommand("reproduce-figure", "Run a figure preset and write CSV plus manifest");
  f->add_option("figure", fig.id, "1, 2a, 2b, 3a, 3b, 4 or 5b");
  f->add_option("--scale", fig.scale, "desk or full")->capture_default_str();
  f->add_option("--out", fig.out, "output directory (default figure_<id>)");
  f->add_option("--manifest", fig.manifest, "rerun the runs recorded in a manifest");
  f->add_option("--workers", fig.workers, "worker threads")->capture_default_str();
  f->add_option("--seed", fig.seed, "base seed (default $NETFLUX_SEED or 1)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  }

  try {
    if (g->parsed())
      return cmd_generate(gen);
    for (auto& [name, c] : tcmds)
      if (c->parsed())
        return cmd_transport(kinds.at(name), tr);
    if (t->parsed())
      return cmd_theory(th);
    if (s->parsed())
      return cmd_sweep(sw);
    if (f->parsed())
      return cmd_reproduce_figure(fig);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIo;
  } catch (const LoadError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIo;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIo;
  } catch (const ConvergenceError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumerical;
  } catch (const GenerationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumerical;
  } catch (const FitError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumerical;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

#pragma once

#include <algorithm>
#include <bitset>
#include <cmath>
#include <cstdint>
#include <limits>
#include <queue>
#include <string>
#include <vector>

#include "netflux/error.hpp"
#include "netflux/graph.hpp"
#include "netflux/rng.hpp"
#include "netflux/transport.hpp"

namespace netflux {

// Directed view of an undirected graph: edge e gives arc 2e (first->second)
// and arc 2e+1 (second->first), each with capacity 1.
class ArcGraph {
public:
  explicit ArcGraph(const Graph& g) : num_nodes_(g.num_nodes()) {
    const auto& edges = g.edges();
    tail_.resize(2 * edges.size());
    head_.resize(2 * edges.size());
    for (std::size_t e = 0; e < edges.size(); ++e) {
      tail_[2 * e] = edges[e].first;
      head_[2 * e] = edges[e].second;
      tail_[2 * e + 1] = edges[e].second;
      head_[2 * e + 1] = edges[e].first;
    }
    out_offsets_.assign(num_nodes_ + 1, 0);
    for (auto t : tail_)
      ++out_offsets_[t + 1];
    for (std::size_t v = 0; v < num_nodes_; ++v)
      out_offsets_[v + 1] += out_offsets_[v];
    out_arcs_.resize(tail_.size());
    std::vector<std::size_t> cursor(out_offsets_.begin(), out_offsets_.end() - 1);
    for (std::uint32_t a = 0; a < tail_.size(); ++a)
      out_arcs_[cursor[tail_[a]]++] = a;
  }

  std::size_t num_nodes() const { return num_nodes_; }
  std::size_t num_arcs() const { return tail_.size(); }
  NodeId tail(std::uint32_t a) const { return tail_[a]; }
  NodeId head(std::uint32_t a) const { return head_[a]; }
  std::span<const std::uint32_t> out_arcs(NodeId v) const {
    return {out_arcs_.data() + out_offsets_[v], out_offsets_[v + 1] - out_offsets_[v]};
  }

  // Dijkstra under non-negative arc lengths. Returns the arc sequence of a
  // shortest s->t path (empty if unreachable) and its length.
  std::pair<std::vector<std::uint32_t>, double> shortest_path(NodeId s, NodeId t,
                                                              std::span<const double> length) const {
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<double> dist(num_nodes_, inf);
    std::vector<std::int64_t> via(num_nodes_, -1);
    using Item = std::pair<double, NodeId>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    dist[s] = 0.0;
    heap.emplace(0.0, s);
    while (!heap.empty()) {
      auto [d, u] = heap.top();
      heap.pop();
      if (d > dist[u])
        continue;
      if (u == t)
        break;
      for (auto a : out_arcs(u)) {
        double nd = d + length[a];
        NodeId w = head_[a];
        if (nd < dist[w]) {
          dist[w] = nd;
          via[w] = a;
          heap.emplace(nd, w);
        }
      }
    }
    std::vector<std::uint32_t> path;
    if (dist[t] == inf)
      return {path, inf};
    for (NodeId v = t; v != s; v = tail_[static_cast<std::uint32_t>(via[v])])
      path.push_back(static_cast<std::uint32_t>(via[v]));
    std::reverse(path.begin(), path.end());
    return {path, dist[t]};
  }

private:
  std::size_t num_nodes_;
  std::vector<NodeId> tail_, head_;
  std::vector<std::size_t> out_offsets_;
  std::vector<std::uint32_t> out_arcs_;
};

namespace detail {

// Revised simplex on the path formulation of max-sum multicommodity flow:
//   max sum_P x_P  s.t.  sum_{P through a} x_P <= 1 for every arc a,  x >= 0.
// Columns are priced by shortest paths under the arc duals, so the master
// only holds basic columns. With k basic paths exactly k capacity rows are
// tight, and the basis inverse reduces to the k x k inverse Q of the
// path/tight-row incidence block; every pivot updates Q in O(k^2).
// Right-hand sides carry a tiny deterministic perturbation against
// degenerate cycling; the reported value re-solves the final basis with the
// exact right-hand side.
class PathLp {
public:
  PathLp(const ArcGraph& arcs, const TerminalSet& t) : arcs_(arcs), pairs_(t) {
    const std::size_t A = arcs.num_arcs();
    tight_pos_.assign(A, -1);
    rhs_.resize(A);
    for (std::uint32_t a = 0; a < A; ++a)
      rhs_[a] = 1.0 + perturbation(a);
    usage_.assign(A, 0.0);
    acc_.assign(A, 0.0);
    mark_.assign(A, 0);
  }

  struct Outcome {
    double value = 0.0;
    double dual_bound = 0.0;
    std::size_t pivots = 0;
  };

  Outcome solve(std::size_t max_pivots = 1000000) {
    Outcome out;
    std::vector<double> length(arcs_.num_arcs(), 0.0);
    while (true) {
      if (out.pivots >= max_pivots)
        throw ConvergenceError("mc_flow_fractional: pivot limit", gap_estimate(), out.pivots);
      if (out.pivots > 0 && out.pivots % kRefactorEvery == 0)
        refactor();
      compute_duals();

      // A negative dual means that row's slack can re-enter; do that first so
      // paths are always priced under non-negative lengths.
      std::int64_t enter_slack = -1;
      double best_rc = kPriceTol;
      for (std::size_t t = 0; t < tight_.size(); ++t)
        if (-dual_[t] > best_rc) {
          best_rc = -dual_[t];
          enter_slack = static_cast<std::int64_t>(t);
        }

      if (enter_slack >= 0) {
        pivot_slack(static_cast<std::size_t>(enter_slack));
      } else {
        std::fill(length.begin(), length.end(), 0.0);
        for (std::size_t t = 0; t < tight_.size(); ++t)
          length[tight_[t]] = std::max(0.0, dual_[t]);
        Path best;
        for (std::size_t i = 0; i < pairs_.n(); ++i) {
          auto [path, dist] = arcs_.shortest_path(pairs_.sources[i], pairs_.sinks[i], length);
          if (path.empty())
            continue;
          double rc = 1.0 - dist;
          if (rc > best_rc) {
            best_rc = rc;
            best.arcs = std::move(path);
            best.commodity = i;
          }
        }
        if (best.arcs.empty())
          break;
        pivot_path(std::move(best));
      }
      ++out.pivots;
    }
    out.value = exact_value();
    out.dual_bound = 0.0;
    for (double y : dual_)
      out.dual_bound += std::max(0.0, y);
    return out;
  }

  struct PathFlow {
    std::size_t commodity = 0;
    std::vector<std::uint32_t> arcs;
    double flow = 0.0;
  };

  // Basic paths with their flow after solve().
  std::vector<PathFlow> solution() const {
    std::vector<PathFlow> out;
    for (std::size_t j = 0; j < paths_.size(); ++j)
      out.push_back({paths_[j].commodity, paths_[j].arcs, x_final_[j]});
    return out;
  }

  // Capacity duals per arc (zero on loose arcs).
  std::vector<double> arc_duals() const {
    std::vector<double> y(arcs_.num_arcs(), 0.0);
    for (std::size_t t = 0; t < tight_.size(); ++t)
      y[tight_[t]] = dual_[t];
    return y;
  }

private:
  static constexpr double kPriceTol = 1e-9;
  static constexpr double kPivotTol = 1e-9;
  static constexpr std::size_t kRefactorEvery = 100;

  struct Path {
    std::size_t commodity = 0;
    std::vector<std::uint32_t> arcs;
  };

  static double perturbation(std::uint32_t arc) {
    return 1e-7 * static_cast<double>(mix64(arc + 1) >> 11) * 0x1.0p-53;
  }

  bool uses(const Path& p, std::uint32_t arc) const {
    return std::find(p.arcs.begin(), p.arcs.end(), arc) != p.arcs.end();
  }

  void compute_duals() {
    const std::size_t k = tight_.size();
    dual_.assign(k, 0.0);
    for (std::size_t j = 0; j < k; ++j)
      for (std::size_t t = 0; t < k; ++t)
        dual_[t] += q_[j][t];
  }

  // x = Q rhs_T and the arc usage of the basic paths.
  void compute_primal() {
    const std::size_t k = tight_.size();
    x_.assign(k, 0.0);
    for (std::size_t j = 0; j < k; ++j) {
      double s = 0.0;
      for (std::size_t t = 0; t < k; ++t)
        s += q_[j][t] * rhs_[tight_[t]];
      x_[j] = s;
    }
    for (auto a : touched_)
      usage_[a] = 0.0;
    touched_.clear();
    for (std::size_t j = 0; j < k; ++j)
      for (auto a : paths_[j].arcs) {
        if (!mark_[a]) {
          mark_[a] = 1;
          touched_.push_back(a);
        }
        usage_[a] += x_[j];
      }
    for (auto a : touched_)
      mark_[a] = 0;
  }

  // Loose-row direction: acc_[a] = sum of d_j over basic paths through a.
  void accumulate(const std::vector<double>& d, std::vector<std::uint32_t>& rows) {
    for (std::size_t j = 0; j < paths_.size(); ++j) {
      if (d[j] == 0.0)
        continue;
      for (auto a : paths_[j].arcs) {
        if (!mark_[a]) {
          mark_[a] = 1;
          rows.push_back(a);
        }
        acc_[a] += d[j];
      }
    }
  }

  struct Leave {
    bool path = false;     // a basic path leaves (else a loose row turns tight)
    std::size_t index = 0; // path index or arc id
    double theta = std::numeric_limits<double>::infinity();
    double pivot = 0.0;
  };

  void consider(Leave& best, bool is_path, std::size_t index, double value, double d) const {
    if (d <= kPivotTol)
      return;
    double ratio = std::max(0.0, value) / d;
    if (ratio < best.theta - 1e-15 || (ratio <= best.theta + 1e-15 && d > best.pivot)) {
      best = Leave{is_path, index, ratio, d};
    }
  }

  // Direction for a new path column. For arcs shared with basic paths the
  // loose-row coefficient is [arc on path] - sum of d_j.
  void pivot_path(Path col) {
    const std::size_t k = tight_.size();
    std::vector<double> d(k, 0.0);
    for (auto a : col.arcs)
      if (tight_pos_[a] >= 0) {
        const auto t = static_cast<std::size_t>(tight_pos_[a]);
        for (std::size_t j = 0; j < k; ++j)
          d[j] += q_[j][t];
      }
    std::vector<std::uint32_t> rows;
    accumulate(d, rows);
    Leave best;
    for (std::size_t j = 0; j < k; ++j)
      consider(best, true, j, x_[j], d[j]);
    for (auto a : col.arcs)
      if (tight_pos_[a] < 0)
        consider(best, false, a, rhs_[a] - usage_[a], 1.0 - acc_[a]);
    for (auto a : rows)
      if (tight_pos_[a] < 0 && !uses(col, a))
        consider(best, false, a, rhs_[a] - usage_[a], -acc_[a]);
    for (auto a : rows) {
      acc_[a] = 0.0;
      mark_[a] = 0;
    }
    if (!std::isfinite(best.theta))
      throw ConvergenceError("mc_flow_fractional: unbounded ratio test", 0.0, 0);

    if (best.path) {
      // Column replacement.
      const std::size_t p = best.index;
      const double inv = 1.0 / d[p];
      auto& prow = q_[p];
      for (auto& v : prow)
        v *= inv;
      for (std::size_t j = 0; j < k; ++j) {
        if (j == p || d[j] == 0.0)
          continue;
        const double f = d[j];
        for (std::size_t t = 0; t < k; ++t)
          q_[j][t] -= f * prow[t];
      }
      paths_[p] = std::move(col);
    } else {
      // Row l becomes tight and the path joins the basis: bordered inverse.
      const auto l = static_cast<std::uint32_t>(best.index);
      const double sigma = best.pivot;
      std::vector<double> w(k, 0.0);
      for (std::size_t j = 0; j < k; ++j)
        if (uses(paths_[j], l))
          for (std::size_t t = 0; t < k; ++t)
            w[t] += q_[j][t];
      for (std::size_t j = 0; j < k; ++j) {
        const double f = d[j] / sigma;
        if (f != 0.0)
          for (std::size_t t = 0; t < k; ++t)
            q_[j][t] += f * w[t];
        q_[j].push_back(-f);
      }
      std::vector<double> last(k + 1);
      for (std::size_t t = 0; t < k; ++t)
        last[t] = -w[t] / sigma;
      last[k] = 1.0 / sigma;
      q_.push_back(std::move(last));
      tight_pos_[l] = static_cast<std::int64_t>(k);
      tight_.push_back(l);
      paths_.push_back(std::move(col));
    }
    compute_primal();
  }

  // Slack of tight row at position t enters.
  void pivot_slack(std::size_t t) {
    const std::size_t k = tight_.size();
    std::vector<double> d(k);
    for (std::size_t j = 0; j < k; ++j)
      d[j] = q_[j][t];
    std::vector<std::uint32_t> rows;
    accumulate(d, rows);
    Leave best;
    for (std::size_t j = 0; j < k; ++j)
      consider(best, true, j, x_[j], d[j]);
    for (auto a : rows)
      if (tight_pos_[a] < 0)
        consider(best, false, a, rhs_[a] - usage_[a], -acc_[a]);
    for (auto a : rows) {
      acc_[a] = 0.0;
      mark_[a] = 0;
    }
    if (!std::isfinite(best.theta))
      throw ConvergenceError("mc_flow_fractional: unbounded ratio test", 0.0, 0);

    const std::uint32_t r = tight_[t];
    if (best.path) {
      // Drop path p and tight row r.
      const std::size_t p = best.index;
      const double piv = q_[p][t];
      for (std::size_t j = 0; j < k; ++j) {
        if (j == p)
          continue;
        const double f = q_[j][t] / piv;
        if (f != 0.0)
          for (std::size_t c = 0; c < k; ++c)
            q_[j][c] -= f * q_[p][c];
      }
      q_.erase(q_.begin() + static_cast<std::ptrdiff_t>(p));
      for (auto& row : q_)
        row.erase(row.begin() + static_cast<std::ptrdiff_t>(t));
      paths_.erase(paths_.begin() + static_cast<std::ptrdiff_t>(p));
      tight_.erase(tight_.begin() + static_cast<std::ptrdiff_t>(t));
      tight_pos_[r] = -1;
      for (std::size_t c = t; c < tight_.size(); ++c)
        tight_pos_[tight_[c]] = static_cast<std::int64_t>(c);
    } else {
      // Loose row l replaces tight row r.
      const auto l = static_cast<std::uint32_t>(best.index);
      std::vector<double> w(k, 0.0);
      double pd = 0.0;
      for (std::size_t j = 0; j < k; ++j)
        if (uses(paths_[j], l)) {
          pd += d[j];
          for (std::size_t c = 0; c < k; ++c)
            w[c] += q_[j][c];
        }
      w[t] -= 1.0;
      for (std::size_t j = 0; j < k; ++j) {
        const double f = d[j] / pd;
        if (f != 0.0)
          for (std::size_t c = 0; c < k; ++c)
            q_[j][c] -= f * w[c];
      }
      tight_pos_[r] = -1;
      tight_pos_[l] = static_cast<std::int64_t>(t);
      tight_[t] = l;
    }
    compute_primal();
  }

  // Rebuilds Q from the incidence block by Gauss-Jordan with partial pivoting.
  void refactor() {
    const std::size_t k = tight_.size();
    if (k == 0)
      return;
    std::vector<std::vector<double>> a(k, std::vector<double>(2 * k, 0.0));
    for (std::size_t j = 0; j < k; ++j) {
      for (auto arc : paths_[j].arcs)
        if (tight_pos_[arc] >= 0)
          a[static_cast<std::size_t>(tight_pos_[arc])][j] += 1.0;
    }
    for (std::size_t t = 0; t < k; ++t)
      a[t][k + t] = 1.0;
    for (std::size_t c = 0; c < k; ++c) {
      std::size_t piv = c;
      for (std::size_t r = c + 1; r < k; ++r)
        if (std::abs(a[r][c]) > std::abs(a[piv][c]))
          piv = r;
      if (std::abs(a[piv][c]) < 1e-12)
        return;  // keep the updated inverse
      std::swap(a[piv], a[c]);
      const double inv = 1.0 / a[c][c];
      for (auto& v : a[c])
        v *= inv;
      for (std::size_t r = 0; r < k; ++r) {
        if (r == c || a[r][c] == 0.0)
          continue;
        const double f = a[r][c];
        for (std::size_t j = c; j < 2 * k; ++j)
          a[r][j] -= f * a[c][j];
      }
    }
    // a now holds [I | M^-1] with rows indexed by path.
    for (std::size_t j = 0; j < k; ++j)
      q_[j].assign(a[j].begin() + static_cast<std::ptrdiff_t>(k), a[j].end());
    compute_primal();
  }

  double exact_value() {
    const std::size_t k = tight_.size();
    std::vector<double> x(k, 0.0);
    double value = 0.0, perturbed = 0.0, lowest = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      for (std::size_t t = 0; t < k; ++t)
        x[j] += q_[j][t];
      lowest = std::min(lowest, x[j]);
      value += x[j];
      perturbed += x_[j];
    }
    std::vector<double> use(arcs_.num_arcs(), 0.0);
    for (std::size_t j = 0; j < k; ++j)
      for (auto a : paths_[j].arcs)
        use[a] += x[j];
    double worst = 0.0;
    for (double u : use)
      worst = std::max(worst, u);
    if (lowest >= -1e-9 && worst <= 1.0 + 1e-9) {
      x_final_ = std::move(x);
      return value;
    }
    // Basis not feasible for the exact rhs: scale the perturbed solution down.
    double max_rhs = 1.0;
    for (double r : rhs_)
      max_rhs = std::max(max_rhs, r);
    x_final_ = x_;
    for (auto& v : x_final_)
      v = std::max(0.0, v) / max_rhs;
    return perturbed / max_rhs;
  }

  double gap_estimate() const {
    double dual = 0.0, primal = 0.0;
    for (double y : dual_)
      dual += std::max(0.0, y);
    for (double v : x_)
      primal += v;
    return dual - primal;
  }

  const ArcGraph& arcs_;
  const TerminalSet& pairs_;
  std::vector<double> rhs_, usage_, acc_;
  std::vector<char> mark_;
  std::vector<std::uint32_t> touched_;
  std::vector<std::int64_t> tight_pos_;
  std::vector<std::uint32_t> tight_;
  std::vector<Path> paths_;
  std::vector<std::vector<double>> q_;
  std::vector<double> x_, x_final_, dual_;
};

}  // namespace detail

enum class McMethod { Auto, Lp, Mwu };

struct McFlowOptions {
  McMethod method = McMethod::Auto;
  // Auto uses the LP up to this many nodes and multiplicative weights above.
  std::size_t lp_max_nodes = 256;
  double epsilon = 0.1;
};

inline void validate_pairs(const Graph& g, const TerminalSet& t) {
  if (t.mode != TerminalMode::OrderedPairs)
    throw ParameterError("multicommodity flow requires ordered pairs");
  validate_terminals(g, t);
}

inline TransportResult mc_flow_lp(const Graph& g, const TerminalSet& t) {
  validate_pairs(g, t);
  ArcGraph arcs(g);
  detail::PathLp lp(arcs, t);
  auto out = lp.solve();
  TransportResult r;
  r.value = out.value;
  r.residual = std::max(0.0, out.dual_bound - out.value);
  r.iterations = out.pivots;
  r.method = "lp-column-generation";
  return r;
}

// Fleischer's phase variant of Garg-Koenemann. The returned flow is feasible
// and within a factor (1 - epsilon)^3 of the optimum.
inline TransportResult mc_flow_mwu(const Graph& g, const TerminalSet& t, double epsilon) {
  validate_pairs(g, t);
  if (!(epsilon > 0.0 && epsilon < 0.5))
    throw ParameterError("mc_flow_mwu: epsilon must lie in (0, 0.5)");
  ArcGraph arcs(g);
  TransportResult r;
  r.method = "mwu(eps=" + std::to_string(epsilon).substr(0, 6) + ")";
  const std::size_t m = arcs.num_arcs();
  if (m == 0)
    return r;
  const double delta = (1.0 + epsilon) *
                       std::pow((1.0 + epsilon) * static_cast<double>(m), -1.0 / epsilon);
  std::vector<double> length(m, delta);
  double routed = 0.0;
  std::size_t iterations = 0;
  for (double alpha = delta * (1.0 + epsilon); alpha < 1.0 + epsilon; alpha *= (1.0 + epsilon)) {
    const double cap = std::min(1.0, alpha);
    for (std::size_t i = 0; i < t.n(); ++i) {
      while (true) {
        auto [path, dist] = arcs.shortest_path(t.sources[i], t.sinks[i], length);
        ++iterations;
        if (path.empty() || dist >= cap)
          break;
        for (auto a : path)
          length[a] *= (1.0 + epsilon);
        routed += 1.0;
      }
    }
  }
  r.value = routed / (std::log((1.0 + epsilon) / delta) / std::log1p(epsilon));
  r.iterations = iterations;
  return r;
}

inline TransportResult mc_flow_fractional(const Graph& g, const TerminalSet& t,
                                          const McFlowOptions& opt = {}) {
  McMethod m = opt.method;
  if (m == McMethod::Auto)
    m = g.num_nodes() <= opt.lp_max_nodes ? McMethod::Lp : McMethod::Mwu;
  return m == McMethod::Lp ? mc_flow_lp(g, t) : mc_flow_mwu(g, t, opt.epsilon);
}

inline constexpr std::size_t kExactMaxNodes = 12;
inline constexpr std::size_t kExactMaxPairs = 4;

namespace detail {

// Branch and bound over systems of arc-disjoint simple paths. Paths of one
// commodity are added in increasing order of their first arc (arc-disjoint
// paths from one source have distinct first arcs), which removes permutation
// symmetry. The bound adds each remaining commodity's single-commodity max
// flow on the unused arcs.
class IntegralMcSearch {
public:
  static constexpr std::size_t kMaxArcs = 2 * kExactMaxNodes * (kExactMaxNodes - 1) / 2;
  using ArcSet = std::bitset<kMaxArcs>;

  IntegralMcSearch(const ArcGraph& arcs, const TerminalSet& t) : arcs_(arcs), t_(t) {}

  std::int64_t run() {
    best_ = 0;
    used_.reset();
    search(0, -1, 0);
    return best_;
  }

  std::size_t nodes_visited() const { return visited_; }

private:
  int single_max_flow(NodeId s, NodeId d) const {
    const std::size_t n = arcs_.num_nodes();
    std::vector<std::vector<int>> cap(n, std::vector<int>(n, 0));
    for (std::uint32_t a = 0; a < arcs_.num_arcs(); ++a)
      if (!used_[a])
        cap[arcs_.tail(a)][arcs_.head(a)] += 1;
    int flow = 0;
    std::vector<int> parent(n);
    while (true) {
      std::fill(parent.begin(), parent.end(), -1);
      parent[s] = static_cast<int>(s);
      std::vector<NodeId> queue{s};
      for (std::size_t qi = 0; qi < queue.size() && parent[d] < 0; ++qi) {
        NodeId u = queue[qi];
        for (NodeId w = 0; w < n; ++w)
          if (cap[u][w] > 0 && parent[w] < 0) {
            parent[w] = static_cast<int>(u);
            queue.push_back(w);
          }
      }
      if (parent[d] < 0)
        return flow;
      for (NodeId v = d; v != s; v = static_cast<NodeId>(parent[v])) {
        --cap[static_cast<std::size_t>(parent[v])][v];
        ++cap[v][static_cast<std::size_t>(parent[v])];
      }
      ++flow;
    }
  }

  void search(std::size_t i, std::int64_t last_first_arc, std::int64_t count) {
    ++visited_;
    best_ = std::max(best_, count);
    if (i == t_.n())
      return;
    std::int64_t bound = count;
    for (std::size_t j = i; j < t_.n(); ++j)
      bound += single_max_flow(t_.sources[j], t_.sinks[j]);
    if (bound <= best_)
      return;
    const NodeId s = t_.sources[i];
    for (auto a : arcs_.out_arcs(s)) {
      if (static_cast<std::int64_t>(a) <= last_first_arc || used_[a])
        continue;
      on_path_.assign(arcs_.num_nodes(), 0);
      on_path_[s] = 1;
      extend(i, a, a, count);
    }
    search(i + 1, -1, count);
  }

  // Depth-first extension of a simple path starting with arc `first`.
  void extend(std::size_t i, std::uint32_t first, std::uint32_t arc, std::int64_t count) {
    used_[arc] = true;
    NodeId v = arcs_.head(arc);
    if (v == t_.sinks[i]) {
      auto saved = on_path_;
      search(i, first, count + 1);
      on_path_ = std::move(saved);
    } else if (!on_path_[v]) {
      on_path_[v] = 1;
      for (auto b : arcs_.out_arcs(v))
        if (!used_[b] && !on_path_[arcs_.head(b)])
          extend(i, first, b, count);
      on_path_[v] = 0;
    }
    used_[arc] = false;
  }

  const ArcGraph& arcs_;
  const TerminalSet& t_;
  ArcSet used_;
  std::vector<char> on_path_;
  std::int64_t best_ = 0;
  std::size_t visited_ = 0;
};

}  // namespace detail

inline TransportResult mc_flow_integral_exact(const Graph& g, const TerminalSet& t) {
  validate_pairs(g, t);
  if (g.num_nodes() > kExactMaxNodes || t.n() > kExactMaxPairs)
    throw SizeError("mc_flow_integral_exact: instance exceeds N <= 12, n <= 4");
  ArcGraph arcs(g);
  detail::IntegralMcSearch search(arcs, t);
  TransportResult r;
  r.value = static_cast<double>(search.run());
  r.iterations = search.nodes_visited();
  r.method = "integral-exact";
  return r;
}

}  // namespace netflux

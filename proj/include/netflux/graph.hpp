#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <numeric>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "netflux/error.hpp"

namespace netflux {

using NodeId = std::uint32_t;
using Edge = std::pair<NodeId, NodeId>;

// Immutable simple undirected graph in CSR form. Edges are stored with
// first < second and sorted, so two graphs with the same edge set compare equal.
class Graph {
public:
  Graph() = default;

  // Validates: ids < num_nodes, no self-loops, no duplicates.
  Graph(std::size_t num_nodes, std::vector<Edge> edges) : num_nodes_(num_nodes) {
    for (auto& [u, v] : edges) {
      if (u >= num_nodes || v >= num_nodes)
        throw ParameterError("edge endpoint out of range");
      if (u == v)
        throw ParameterError("self-loop in edge list");
      if (u > v)
        std::swap(u, v);
    }
    std::sort(edges.begin(), edges.end());
    if (std::adjacent_find(edges.begin(), edges.end()) != edges.end())
      throw ParameterError("duplicate edge in edge list");
    edges_ = std::move(edges);
    build_adjacency();
  }

  std::size_t num_nodes() const { return num_nodes_; }
  std::size_t num_edges() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }

  std::size_t degree(NodeId v) const { return offsets_[v + 1] - offsets_[v]; }

  std::span<const NodeId> neighbors(NodeId v) const {
    return {adjacency_.data() + offsets_[v], degree(v)};
  }

  // Edge index of each adjacency entry, parallel to neighbors(v).
  std::span<const std::uint32_t> incident_edges(NodeId v) const {
    return {edge_ids_.data() + offsets_[v], degree(v)};
  }

  double mean_degree() const {
    return num_nodes_ ? 2.0 * static_cast<double>(edges_.size()) / static_cast<double>(num_nodes_)
                      : 0.0;
  }

  std::size_t max_degree() const {
    std::size_t best = 0;
    for (NodeId v = 0; v < num_nodes_; ++v)
      best = std::max(best, degree(v));
    return best;
  }

  std::size_t min_degree() const {
    if (num_nodes_ == 0)
      return 0;
    std::size_t best = degree(0);
    for (NodeId v = 1; v < num_nodes_; ++v)
      best = std::min(best, degree(v));
    return best;
  }

  bool has_edge(NodeId u, NodeId v) const {
    if (degree(u) > degree(v))
      std::swap(u, v);
    auto nb = neighbors(u);
    return std::binary_search(nb.begin(), nb.end(), v);
  }

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.num_nodes_ == b.num_nodes_ && a.edges_ == b.edges_;
  }

private:
  void build_adjacency() {
    offsets_.assign(num_nodes_ + 1, 0);
    for (auto [u, v] : edges_) {
      ++offsets_[u + 1];
      ++offsets_[v + 1];
    }
    std::partial_sum(offsets_.begin(), offsets_.end(), offsets_.begin());
    adjacency_.resize(2 * edges_.size());
    edge_ids_.resize(2 * edges_.size());
    std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
    // Edges are sorted by (u, v), so every adjacency list comes out sorted.
    for (std::uint32_t e = 0; e < edges_.size(); ++e) {
      auto [u, v] = edges_[e];
      adjacency_[cursor[u]] = v;
      edge_ids_[cursor[u]++] = e;
    }
    for (std::uint32_t e = 0; e < edges_.size(); ++e) {
      auto [u, v] = edges_[e];
      adjacency_[cursor[v]] = u;
      edge_ids_[cursor[v]++] = e;
    }
    for (NodeId v = 0; v < num_nodes_; ++v) {
      auto first = offsets_[v], last = offsets_[v + 1];
      std::vector<std::pair<NodeId, std::uint32_t>> tmp;
      tmp.reserve(last - first);
      for (auto i = first; i < last; ++i)
        tmp.emplace_back(adjacency_[i], edge_ids_[i]);
      std::sort(tmp.begin(), tmp.end());
      for (auto i = first; i < last; ++i)
        std::tie(adjacency_[i], edge_ids_[i]) = tmp[i - first];
    }
  }

  std::size_t num_nodes_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_{0};
  std::vector<NodeId> adjacency_;
  std::vector<std::uint32_t> edge_ids_;
};

inline std::size_t degree_sum(const Graph& g, std::span<const NodeId> nodes) {
  std::size_t z = 0;
  for (NodeId v : nodes)
    z += g.degree(v);
  return z;
}

enum class TerminalMode { DisjointSets, OrderedPairs };

// Disjoint sets: sources and sinks are disjoint node sets of equal size.
// Ordered pairs: (sources[i], sinks[i]) is commodity i; nodes may repeat.
struct TerminalSet {
  TerminalMode mode = TerminalMode::DisjointSets;
  std::vector<NodeId> sources;
  std::vector<NodeId> sinks;

  std::size_t n() const { return sources.size(); }
};

inline void validate_terminals(const Graph& g, const TerminalSet& t) {
  if (t.sources.size() != t.sinks.size())
    throw ParameterError("source and sink lists differ in length");
  for (auto v : t.sources)
    if (v >= g.num_nodes())
      throw ParameterError("terminal out of range");
  for (auto v : t.sinks)
    if (v >= g.num_nodes())
      throw ParameterError("terminal out of range");
  if (t.mode == TerminalMode::DisjointSets) {
    std::vector<char> seen(g.num_nodes(), 0);
    for (auto v : t.sources) {
      if (seen[v])
        throw ParameterError("repeated source node");
      seen[v] = 1;
    }
    for (auto v : t.sinks) {
      if (seen[v])
        throw ParameterError(seen[v] == 1 ? "sources and sinks overlap" : "repeated sink node");
      seen[v] = 2;
    }
  } else {
    for (std::size_t i = 0; i < t.n(); ++i)
      if (t.sources[i] == t.sinks[i])
        throw ParameterError("pair " + std::to_string(i) + " has identical source and sink");
  }
}

struct EdgeListLoad {
  Graph graph;
  std::size_t duplicates = 0;
  std::size_t self_loops = 0;
  // Original token for each node id.
  std::vector<std::string> labels;
};

// Whitespace-separated id pairs, '#' comment lines ignored. Ids are arbitrary
// tokens remapped to 0..N-1 in order of first appearance, except when a
// "# nodes N" header is present and every token is an integer below N: then
// ids are kept verbatim, which makes write_edge_list output round-trip exactly
// (including isolated nodes).
inline EdgeListLoad parse_edge_list(std::istream& in) {
  std::vector<std::pair<std::string, std::string>> raw;
  std::size_t declared = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos)
      continue;
    if (line[first] == '#') {
      std::istringstream header(line.substr(first + 1));
      std::string key;
      std::size_t count = 0;
      if (raw.empty() && header >> key && key == "nodes" && header >> count)
        declared = count;
      continue;
    }
    std::istringstream fields(line);
    std::string a, b, extra;
    if (!(fields >> a >> b))
      throw LoadError("expected two node ids", line_no);
    if (fields >> extra)
      throw LoadError("unexpected token '" + extra + "'", line_no);
    raw.emplace_back(std::move(a), std::move(b));
  }

  auto as_index = [](const std::string& tok, std::size_t bound) -> long long {
    if (tok.empty() || tok.size() > 18 ||
        !std::all_of(tok.begin(), tok.end(), [](char c) { return c >= '0' && c <= '9'; }))
      return -1;
    auto v = std::stoll(tok);
    return static_cast<std::size_t>(v) < bound ? v : -1;
  };
  bool verbatim = declared > 0 && std::all_of(raw.begin(), raw.end(), [&](const auto& p) {
                    return as_index(p.first, declared) >= 0 && as_index(p.second, declared) >= 0;
                  });

  EdgeListLoad out;
  std::unordered_map<std::string, NodeId> ids;
  auto intern = [&](const std::string& tok) {
    auto [it, inserted] = ids.try_emplace(tok, static_cast<NodeId>(out.labels.size()));
    if (inserted)
      out.labels.push_back(tok);
    return it->second;
  };
  if (verbatim) {
    out.labels.resize(declared);
    for (std::size_t i = 0; i < declared; ++i)
      out.labels[i] = std::to_string(i);
  }

  std::vector<Edge> edges;
  edges.reserve(raw.size());
  for (const auto& [a, b] : raw) {
    NodeId u = verbatim ? static_cast<NodeId>(as_index(a, declared)) : intern(a);
    NodeId v = verbatim ? static_cast<NodeId>(as_index(b, declared)) : intern(b);
    if (u == v) {
      ++out.self_loops;
      continue;
    }
    edges.emplace_back(std::min(u, v), std::max(u, v));
  }
  std::sort(edges.begin(), edges.end());
  auto last = std::unique(edges.begin(), edges.end());
  out.duplicates = static_cast<std::size_t>(edges.end() - last);
  edges.erase(last, edges.end());
  out.graph = Graph(out.labels.size(), std::move(edges));
  return out;
}

inline EdgeListLoad load_edge_list(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw LoadError("cannot open " + path);
  return parse_edge_list(in);
}

inline void write_edge_list(std::ostream& out, const Graph& g) {
  out << "# nodes " << g.num_nodes() << '\n';
  for (auto [u, v] : g.edges())
    out << u << ' ' << v << '\n';
}

inline void save_edge_list(const std::string& path, const Graph& g) {
  std::ofstream out(path);
  if (!out)
    throw LoadError("cannot write " + path);
  write_edge_list(out, g);
  if (!out)
    throw LoadError("write failed for " + path);
}

}  // namespace netflux

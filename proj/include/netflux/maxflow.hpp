#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <vector>

#include "netflux/graph.hpp"

namespace netflux {

// Residual network for unit-capacity undirected max flow between two node sets.
// Undirected edge {u,v} is the arc pair u->v, v->u, each the other's reverse
// with capacity 1, so the net flow on the edge is in [-1, 1]. A super-source
// feeds every source and every sink drains into a super-sink through
// unbounded arcs. Augmentation follows Dinic's layered phases, so every
// augmenting path in a phase has the same hop count, and phases are visited
// in increasing hop count.
class UnitFlowNetwork {
public:
  struct Phase {
    std::size_t hops;   // edges between the first source and the last sink
    std::int64_t units; // augmenting paths found at that length
  };

  UnitFlowNetwork(const Graph& g, std::span<const NodeId> sources, std::span<const NodeId> sinks)
      : n_(g.num_nodes() + 2), source_(static_cast<NodeId>(g.num_nodes())),
        sink_(static_cast<NodeId>(g.num_nodes() + 1)) {
    head_.assign(n_, -1);
    arcs_.reserve(2 * g.num_edges() + 2 * (sources.size() + sinks.size()));
    for (auto [u, v] : g.edges())
      add_pair(u, v, 1, 1);
    for (auto s : sources)
      add_pair(source_, s, kInf, 0);
    for (auto t : sinks)
      add_pair(t, sink_, kInf, 0);
  }

  std::int64_t run() {
    std::int64_t total = 0;
    while (bfs()) {
      next_ = head_;
      std::int64_t units = 0;
      while (std::int64_t f = dfs(source_, kInf))
        units += f;
      if (units == 0)
        break;
      phases_.push_back({static_cast<std::size_t>(level_[sink_]) - 2, units});
      total += units;
    }
    return total;
  }

  const std::vector<Phase>& phases() const { return phases_; }

  // Net flow on the i-th input edge, directed from edges()[i].first to .second.
  int edge_flow(std::size_t edge_index) const {
    return 1 - static_cast<int>(arcs_[2 * edge_index].cap);
  }

private:
  static constexpr std::int64_t kInf = std::numeric_limits<std::int32_t>::max();

  struct Arc {
    NodeId to;
    std::int32_t next;
    std::int64_t cap;
  };

  void add_pair(NodeId u, NodeId v, std::int64_t cap_uv, std::int64_t cap_vu) {
    arcs_.push_back({v, head_[u], cap_uv});
    head_[u] = static_cast<std::int32_t>(arcs_.size() - 1);
    arcs_.push_back({u, head_[v], cap_vu});
    head_[v] = static_cast<std::int32_t>(arcs_.size() - 1);
  }

  bool bfs() {
    level_.assign(n_, -1);
    queue_.clear();
    level_[source_] = 0;
    queue_.push_back(source_);
    for (std::size_t qi = 0; qi < queue_.size(); ++qi) {
      NodeId u = queue_[qi];
      for (auto a = head_[u]; a != -1; a = arcs_[a].next) {
        const Arc& arc = arcs_[a];
        if (arc.cap > 0 && level_[arc.to] < 0) {
          level_[arc.to] = level_[u] + 1;
          queue_.push_back(arc.to);
        }
      }
    }
    return level_[sink_] >= 0;
  }

  // Iterative would avoid deep recursion, but the depth is bounded by the
  // BFS distance to the sink, which stays small on the graphs used here.
  std::int64_t dfs(NodeId u, std::int64_t limit) {
    if (u == sink_)
      return limit;
    for (auto& a = next_[u]; a != -1; a = arcs_[a].next) {
      Arc& arc = arcs_[a];
      if (arc.cap > 0 && level_[arc.to] == level_[u] + 1) {
        std::int64_t pushed = dfs(arc.to, std::min(limit, arc.cap));
        if (pushed > 0) {
          arc.cap -= pushed;
          arcs_[a ^ 1].cap += pushed;
          return pushed;
        }
      }
    }
    return 0;
  }

  std::size_t n_;
  NodeId source_, sink_;
  std::vector<std::int32_t> head_, next_;
  std::vector<Arc> arcs_;
  std::vector<int> level_;
  std::vector<NodeId> queue_;
  std::vector<Phase> phases_;
};

}  // namespace netflux

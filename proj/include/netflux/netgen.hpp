#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <unordered_set>
#include <vector>

#include "netflux/error.hpp"
#include "netflux/graph.hpp"
#include "netflux/rng.hpp"

namespace netflux {

// G(N, p) with p = mean_degree / (N - 1). Pairs are visited in the order
// (1,0), (2,0), (2,1), (3,0), ... and consecutive gaps are drawn from the
// geometric distribution, so the cost is O(N + |E|).
inline Graph gen_er(std::size_t num_nodes, double mean_degree, std::uint64_t seed) {
  if (num_nodes < 2)
    throw ParameterError("gen_er: need at least 2 nodes");
  if (!(mean_degree > 0.0) || mean_degree > static_cast<double>(num_nodes - 1))
    throw ParameterError("gen_er: mean degree must lie in (0, N-1]");
  const double p = mean_degree / static_cast<double>(num_nodes - 1);
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(mean_degree * static_cast<double>(num_nodes) * 0.5 * 1.1) + 16);
  if (p >= 1.0) {
    for (NodeId v = 1; v < num_nodes; ++v)
      for (NodeId w = 0; w < v; ++w)
        edges.emplace_back(w, v);
    return Graph(num_nodes, std::move(edges));
  }
  Rng rng(seed, /*stream=*/0x4552);
  const double log_q = std::log1p(-p);
  std::int64_t v = 1, w = -1;
  const auto n = static_cast<std::int64_t>(num_nodes);
  while (v < n) {
    double r = rng.uniform_open_low();
    w += 1 + static_cast<std::int64_t>(std::floor(std::log(r) / log_q));
    while (w >= v && v < n) {
      w -= v;
      ++v;
    }
    if (v < n)
      edges.emplace_back(static_cast<NodeId>(w), static_cast<NodeId>(v));
  }
  return Graph(num_nodes, std::move(edges));
}

// Exact discrete power law P(k) ∝ k^-gamma on [m, k_max], sampled by inverse CDF.
class PowerLawDegrees {
public:
  PowerLawDegrees(double gamma, std::size_t min_degree, std::size_t max_degree)
      : min_(min_degree) {
    if (min_degree < 1 || max_degree < min_degree)
      throw ParameterError("power law: need 1 <= m <= k_max");
    cdf_.reserve(max_degree - min_degree + 1);
    double acc = 0.0;
    for (std::size_t k = min_degree; k <= max_degree; ++k) {
      acc += std::pow(static_cast<double>(k), -gamma);
      cdf_.push_back(acc);
    }
    for (auto& c : cdf_)
      c /= acc;
    cdf_.back() = 1.0;
  }

  std::size_t operator()(Rng& rng) const {
    double u = rng.uniform();
    auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    return min_ + static_cast<std::size_t>(it - cdf_.begin());
  }

  double pmf(std::size_t k) const {
    if (k < min_ || k >= min_ + cdf_.size())
      return 0.0;
    std::size_t i = k - min_;
    return i == 0 ? cdf_[0] : cdf_[i] - cdf_[i - 1];
  }

  std::size_t min_degree() const { return min_; }
  std::size_t max_degree() const { return min_ + cdf_.size() - 1; }

private:
  std::size_t min_;
  std::vector<double> cdf_;
};

struct ConfigModelOptions {
  // Total rewiring attempts = rewire_factor * N.
  std::size_t rewire_factor = 100;
  // Generation fails if more than this fraction of stubs had to be deleted.
  double max_deleted_fraction = 0.05;
};

struct ConfigModelResult {
  Graph graph;
  std::vector<std::size_t> drawn_degrees;
  std::size_t total_stubs = 0;
  std::size_t collisions = 0;       // self-loops and multi-edges after the initial matching
  std::size_t rewired = 0;          // collisions repaired by a double-edge swap
  std::size_t deleted_stubs = 0;
  std::size_t rewire_attempts = 0;

  double deleted_fraction() const {
    return total_stubs ? static_cast<double>(deleted_stubs) / static_cast<double>(total_stubs) : 0.0;
  }
};

// Configuration model: i.i.d. power-law degrees, uniform stub matching.
// Self-loops and multi-edges are repaired by random double-edge swaps with
// accepted edges; whatever is left after the swap budget is deleted.
inline ConfigModelResult gen_sf_config_detailed(std::size_t num_nodes, double gamma,
                                                std::size_t min_degree, std::uint64_t seed,
                                                const ConfigModelOptions& opt = {}) {
  if (!(gamma > 2.0))
    throw ParameterError("gen_sf_config: gamma must exceed 2");
  if (min_degree < 1)
    throw ParameterError("gen_sf_config: m must be at least 1");
  if (num_nodes < 2 || min_degree >= num_nodes)
    throw ParameterError("gen_sf_config: need m < N");

  Rng rng(seed, /*stream=*/0x5346);
  PowerLawDegrees law(gamma, min_degree, num_nodes - 1);
  ConfigModelResult res;
  auto& deg = res.drawn_degrees;
  deg.resize(num_nodes);
  std::size_t total = 0;
  for (auto& k : deg) {
    k = law(rng);
    total += k;
  }
  while (total % 2 != 0) {
    total -= deg.back();
    deg.back() = law(rng);
    total += deg.back();
  }
  res.total_stubs = total;

  std::vector<NodeId> stubs;
  stubs.reserve(total);
  for (NodeId v = 0; v < num_nodes; ++v)
    stubs.insert(stubs.end(), deg[v], v);
  rng.shuffle(std::span<NodeId>(stubs));

  auto key = [](NodeId a, NodeId b) {
    if (a > b)
      std::swap(a, b);
    return (static_cast<std::uint64_t>(a) << 32) | b;
  };
  std::vector<Edge> accepted;
  accepted.reserve(total / 2);
  std::unordered_set<std::uint64_t> present;
  present.reserve(total);
  std::vector<Edge> bad;
  for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) {
    NodeId u = stubs[i], v = stubs[i + 1];
    if (u != v && present.insert(key(u, v)).second)
      accepted.emplace_back(u, v);
    else
      bad.emplace_back(u, v);
  }
  res.collisions = bad.size();

  const std::size_t budget = opt.rewire_factor * num_nodes;
  std::vector<Edge> leftover;
  for (auto [u, v] : bad) {
    bool fixed = false;
    while (!fixed && res.rewire_attempts < budget && !accepted.empty()) {
      ++res.rewire_attempts;
      std::size_t e = rng.below(accepted.size());
      auto [a, b] = accepted[e];
      if (rng.below(2))
        std::swap(a, b);
      // (u,v) + (a,b) -> (u,a) + (v,b)
      if (u == a || v == b || present.count(key(u, a)) || present.count(key(v, b)) ||
          key(u, a) == key(v, b))
        continue;
      present.erase(key(a, b));
      present.insert(key(u, a));
      present.insert(key(v, b));
      accepted[e] = {u, a};
      accepted.emplace_back(v, b);
      ++res.rewired;
      fixed = true;
    }
    if (!fixed)
      leftover.emplace_back(u, v);
  }
  res.deleted_stubs = 2 * leftover.size();
  if (res.deleted_fraction() > opt.max_deleted_fraction)
    throw GenerationError("gen_sf_config: " + std::to_string(res.deleted_stubs) + " of " +
                          std::to_string(total) + " stubs deleted after " +
                          std::to_string(res.rewire_attempts) + " rewiring attempts (" +
                          std::to_string(res.collisions) + " initial collisions)");
  res.graph = Graph(num_nodes, std::move(accepted));
  return res;
}

inline Graph gen_sf_config(std::size_t num_nodes, double gamma, std::size_t min_degree,
                           std::uint64_t seed) {
  return gen_sf_config_detailed(num_nodes, gamma, min_degree, seed).graph;
}

inline TerminalSet sample_terminals(const Graph& g, std::size_t n, TerminalMode mode,
                                    std::uint64_t seed) {
  const std::size_t N = g.num_nodes();
  Rng rng(seed, /*stream=*/0x5445);
  TerminalSet t;
  t.mode = mode;
  if (mode == TerminalMode::DisjointSets) {
    if (n < 1 || 2 * n > N)
      throw ParameterError("sample_terminals: need 1 <= n <= N/2 for disjoint sets");
    // Partial Fisher-Yates: the first 2n slots are a uniform 2n-subset in random order.
    std::vector<NodeId> perm(N);
    std::iota(perm.begin(), perm.end(), NodeId{0});
    for (std::size_t i = 0; i < 2 * n; ++i)
      std::swap(perm[i], perm[i + rng.below(N - i)]);
    t.sources.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(n));
    t.sinks.assign(perm.begin() + static_cast<std::ptrdiff_t>(n),
                   perm.begin() + static_cast<std::ptrdiff_t>(2 * n));
  } else {
    if (n < 1 || n > N || N < 2)
      throw ParameterError("sample_terminals: need 1 <= n <= N for ordered pairs");
    for (std::size_t i = 0; i < n; ++i) {
      auto s = static_cast<NodeId>(rng.below(N));
      auto d = static_cast<NodeId>(rng.below(N - 1));
      if (d >= s)
        ++d;
      t.sources.push_back(s);
      t.sinks.push_back(d);
    }
  }
  return t;
}

}  // namespace netflux

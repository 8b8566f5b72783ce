#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "netflux/error.hpp"
#include "netflux/graph.hpp"
#include "netflux/rng.hpp"
#include "netflux/transport.hpp"

namespace netflux {

struct CurrentOptions {
  double tol = 1e-10;
  // Iteration cap = max_iter_factor * N.
  std::size_t max_iter_factor = 50;
};

struct PotentialSolution {
  std::vector<double> potential;  // per node; 0 on nodes cut off from every terminal
  double sink_current = 0.0;      // total current entering the sink set
  double source_current = 0.0;    // total current leaving the source set
  double residual = 0.0;          // ||b - Ax|| / ||b|| on the free-node system
  std::size_t iterations = 0;
};

// Sources held at potential 1, sinks at 0, unit resistors on every edge.
// Solves the Laplacian restricted to free nodes (those in a component with at
// least one terminal) by Jacobi-preconditioned conjugate gradients.
inline PotentialSolution solve_potentials(const Graph& g, const TerminalSet& t,
                                          const CurrentOptions& opt = {}) {
  if (t.mode != TerminalMode::DisjointSets)
    throw ParameterError("electrical_current requires disjoint terminal sets");
  if (!(opt.tol > 0.0))
    throw ParameterError("electrical_current: tolerance must be positive");
  validate_terminals(g, t);
  const std::size_t N = g.num_nodes();

  enum : std::uint8_t { kFree, kSource, kSink };
  std::vector<std::uint8_t> role(N, kFree);
  for (auto s : t.sources)
    role[s] = kSource;
  for (auto s : t.sinks)
    role[s] = kSink;

  // Free nodes reachable from a terminal get an unknown; the rest are inert.
  constexpr std::uint32_t kInert = UINT32_MAX;
  std::vector<std::uint32_t> index(N, kInert);
  std::vector<NodeId> free_nodes;
  std::vector<NodeId> stack;
  std::vector<char> seen(N, 0);
  for (NodeId v = 0; v < N; ++v) {
    if (role[v] == kFree)
      continue;
    seen[v] = 1;
    stack.push_back(v);
  }
  while (!stack.empty()) {
    NodeId u = stack.back();
    stack.pop_back();
    for (NodeId w : g.neighbors(u)) {
      if (seen[w])
        continue;
      seen[w] = 1;
      index[w] = static_cast<std::uint32_t>(free_nodes.size());
      free_nodes.push_back(w);
      stack.push_back(w);
    }
  }

  const std::size_t m = free_nodes.size();
  std::vector<double> b(m, 0.0), diag(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    NodeId v = free_nodes[i];
    diag[i] = static_cast<double>(g.degree(v));
    for (NodeId w : g.neighbors(v))
      if (role[w] == kSource)
        b[i] += 1.0;
  }
  auto apply = [&](const std::vector<double>& x, std::vector<double>& y) {
    for (std::size_t i = 0; i < m; ++i) {
      double acc = diag[i] * x[i];
      for (NodeId w : g.neighbors(free_nodes[i]))
        if (index[w] != kInert)
          acc -= x[index[w]];
      y[i] = acc;
    }
  };
  auto dot = [](const std::vector<double>& a, const std::vector<double>& c) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
      s += a[i] * c[i];
    return s;
  };

  PotentialSolution sol;
  std::vector<double> x(m, 0.0);
  const double bnorm = std::sqrt(dot(b, b));
  if (bnorm > 0.0) {
    std::vector<double> r = b, z(m), p(m), q(m);
    for (std::size_t i = 0; i < m; ++i)
      z[i] = r[i] / diag[i];
    p = z;
    double rz = dot(r, z);
    const std::size_t cap = std::max<std::size_t>(opt.max_iter_factor * N, 1);
    double rel = 1.0;
    std::size_t it = 0;
    while (true) {
      rel = std::sqrt(dot(r, r)) / bnorm;
      if (rel <= opt.tol)
        break;
      if (it >= cap)
        throw ConvergenceError("electrical_current: tolerance not reached", rel, it);
      apply(p, q);
      double alpha = rz / dot(p, q);
      for (std::size_t i = 0; i < m; ++i) {
        x[i] += alpha * p[i];
        r[i] -= alpha * q[i];
      }
      ++it;
      // Recompute the true residual now and then to stop drift from the recurrence.
      if (it % 50 == 0) {
        apply(x, q);
        for (std::size_t i = 0; i < m; ++i)
          r[i] = b[i] - q[i];
      }
      for (std::size_t i = 0; i < m; ++i)
        z[i] = r[i] / diag[i];
      double rz_next = dot(r, z);
      double beta = rz_next / rz;
      rz = rz_next;
      for (std::size_t i = 0; i < m; ++i)
        p[i] = z[i] + beta * p[i];
    }
    // Report the true residual, not the recurrence one.
    apply(x, q);
    double rr = 0.0;
    for (std::size_t i = 0; i < m; ++i)
      rr += (b[i] - q[i]) * (b[i] - q[i]);
    sol.residual = std::sqrt(rr) / bnorm;
    sol.iterations = it;
  }

  sol.potential.assign(N, 0.0);
  for (auto s : t.sources)
    sol.potential[s] = 1.0;
  for (std::size_t i = 0; i < m; ++i)
    sol.potential[free_nodes[i]] = x[i];
  for (auto s : t.sinks)
    for (NodeId w : g.neighbors(s))
      sol.sink_current += sol.potential[w];
  for (auto s : t.sources)
    for (NodeId w : g.neighbors(s))
      sol.source_current += 1.0 - sol.potential[w];
  return sol;
}

inline TransportResult electrical_current(const Graph& g, const TerminalSet& t,
                                          const CurrentOptions& opt = {}) {
  auto sol = solve_potentials(g, t, opt);
  TransportResult r;
  r.value = sol.sink_current;
  r.residual = sol.residual;
  r.iterations = sol.iterations;
  r.method = "pcg-jacobi";
  return r;
}

inline TransportResult electrical_current(const Graph& g, const TerminalSet& t, double tol) {
  return electrical_current(g, t, CurrentOptions{tol});
}

struct EscapeEstimate {
  double probability = 0.0;
  double std_error = 0.0;
  std::size_t walkers = 0;
};

// Walkers start at a source picked with probability proportional to degree
// and step to uniform neighbors until they hit a sink (escape) or any source.
inline EscapeEstimate random_walk_escape_detailed(const Graph& g, const TerminalSet& t,
                                                  std::size_t walkers, std::uint64_t seed) {
  if (t.mode != TerminalMode::DisjointSets)
    throw ParameterError("random_walk_escape requires disjoint terminal sets");
  if (walkers < 1)
    throw ParameterError("random_walk_escape: need at least one walker");
  validate_terminals(g, t);
  std::vector<std::int8_t> role(g.num_nodes(), 0);
  for (auto s : t.sources)
    role[s] = 1;
  for (auto s : t.sinks)
    role[s] = -1;
  std::vector<std::size_t> cumulative;
  std::size_t z1 = 0;
  for (auto s : t.sources) {
    z1 += g.degree(s);
    cumulative.push_back(z1);
  }
  EscapeEstimate est;
  est.walkers = walkers;
  if (z1 == 0)
    return est;

  Rng rng(seed, /*stream=*/0x5257);
  std::size_t escaped = 0;
  for (std::size_t w = 0; w < walkers; ++w) {
    // Picking a stub uniformly picks the source by degree and the first step uniformly.
    std::size_t stub = rng.below(z1);
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), stub);
    std::size_t si = static_cast<std::size_t>(it - cumulative.begin());
    std::size_t offset = stub - (si ? cumulative[si - 1] : 0);
    NodeId at = g.neighbors(t.sources[si])[offset];
    while (role[at] == 0) {
      auto nb = g.neighbors(at);
      at = nb[rng.below(nb.size())];
    }
    if (role[at] < 0)
      ++escaped;
  }
  const double p = static_cast<double>(escaped) / static_cast<double>(walkers);
  est.probability = p;
  est.std_error = std::sqrt(p * (1.0 - p) / static_cast<double>(walkers));
  return est;
}

inline double random_walk_escape(const Graph& g, const TerminalSet& t, std::size_t walkers,
                                 std::uint64_t seed) {
  return random_walk_escape_detailed(g, t, walkers, seed).probability;
}

}  // namespace netflux

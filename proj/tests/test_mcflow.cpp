#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "netflux/mcflow.hpp"
#include "netflux/netgen.hpp"
#include "oracles.hpp"

using namespace netflux;
using namespace netflux::oracle;

namespace {

TerminalSet pairs(std::vector<NodeId> s, std::vector<NodeId> t) {
  return {TerminalMode::OrderedPairs, std::move(s), std::move(t)};
}

// Two commodities A->A' and B->B' whose only route is the arc u->v.
Graph gadget() {
  // A=0, B=1, u=2, v=3, A'=4, B'=5
  return Graph(6, {{0, 2}, {1, 2}, {2, 3}, {3, 4}, {3, 5}});
}

struct Certificate {
  double value = 0.0;
  bool integral = true;
};

// Checks primal feasibility, dual feasibility and a zero duality gap of the
// LP solution, independently of the solver's own bookkeeping.
Certificate check_lp_certificate(const Graph& g, const TerminalSet& t) {
  ArcGraph arcs(g);
  detail::PathLp lp(arcs, t);
  auto out = lp.solve();
  Certificate cert;
  std::vector<double> load(arcs.num_arcs(), 0.0);
  double primal = 0.0;
  for (const auto& pf : lp.solution()) {
    EXPECT_GE(pf.flow, -1e-9);
    EXPECT_FALSE(pf.arcs.empty());
    EXPECT_EQ(arcs.tail(pf.arcs.front()), t.sources[pf.commodity]);
    EXPECT_EQ(arcs.head(pf.arcs.back()), t.sinks[pf.commodity]);
    for (std::size_t i = 0; i + 1 < pf.arcs.size(); ++i)
      EXPECT_EQ(arcs.head(pf.arcs[i]), arcs.tail(pf.arcs[i + 1]));
    for (auto a : pf.arcs)
      load[a] += pf.flow;
    primal += pf.flow;
    if (std::abs(pf.flow - std::round(pf.flow)) > 1e-9)
      cert.integral = false;
  }
  for (double l : load)
    EXPECT_LE(l, 1.0 + 1e-9);
  auto y = lp.arc_duals();
  double dual = 0.0;
  for (double v : y) {
    EXPECT_GE(v, -1e-9);
    dual += std::max(0.0, v);
  }
  std::vector<double> len(y.size());
  for (std::size_t a = 0; a < y.size(); ++a)
    len[a] = std::max(0.0, y[a]);
  for (std::size_t i = 0; i < t.n(); ++i) {
    auto [path, dist] = arcs.shortest_path(t.sources[i], t.sinks[i], len);
    if (!path.empty())
      EXPECT_GE(dist, 1.0 - 1e-7) << "commodity " << i;
  }
  EXPECT_NEAR(primal, dual, 1e-6);
  EXPECT_NEAR(primal, out.value, 1e-9);
  cert.value = out.value;
  return cert;
}

}  // namespace

TEST(ArcGraph, ArcsPairUp) {
  Graph g(3, {{0, 1}, {1, 2}});
  ArcGraph a(g);
  EXPECT_EQ(a.num_arcs(), 4u);
  EXPECT_EQ(a.tail(0), 0u);
  EXPECT_EQ(a.head(0), 1u);
  EXPECT_EQ(a.tail(1), 1u);
  EXPECT_EQ(a.head(1), 0u);
  std::vector<double> len(4, 1.0);
  auto [path, dist] = a.shortest_path(0, 2, len);
  EXPECT_EQ(path.size(), 2u);
  EXPECT_EQ(dist, 2.0);
}

TEST(McFlow, DirectEdge) {
  Graph g(2, {{0, 1}});
  EXPECT_NEAR(mc_flow_fractional(g, pairs({0}, {1})).value, 1.0, 1e-12);
  EXPECT_EQ(mc_flow_integral_exact(g, pairs({0}, {1})).value, 1.0);
}

TEST(McFlow, SharedBottleneckGadget) {
  auto g = gadget();
  auto t = pairs({0, 1}, {4, 5});
  auto frac = mc_flow_fractional(g, t);
  EXPECT_LE(frac.value, 1.0 + 1e-12);
  EXPECT_NEAR(frac.value, 1.0, 1e-12);
  EXPECT_EQ(mc_flow_integral_exact(g, t).value, 1.0);
  // Opposite directions use the two different arcs of the edge.
  EXPECT_NEAR(mc_flow_fractional(g, pairs({0, 5}, {4, 1})).value, 2.0, 1e-12);
}

TEST(McFlow, CompleteGraphSinglePair) {
  auto k4 = gen_er(4, 3.0, 1);
  EXPECT_EQ(mc_flow_integral_exact(k4, pairs({0}, {3})).value, 3.0);
  EXPECT_NEAR(mc_flow_fractional(k4, pairs({0}, {3})).value, 3.0, 1e-12);
}

TEST(McFlow, DisconnectedPair) {
  Graph g(4, {{0, 1}, {2, 3}});
  EXPECT_EQ(mc_flow_integral_exact(g, pairs({0}, {3})).value, 0.0);
  EXPECT_EQ(mc_flow_fractional(g, pairs({0}, {3})).value, 0.0);
}

TEST(McFlow, TriangleFractionalGap) {
  // Commodities 0->1, 1->2, 2->0 each own a forward arc. Their two-hop
  // detours share the three backward arcs pairwise, so half of each detour
  // fits fractionally (3 + 3/2) while integrally only one detour fits.
  Graph ring(3, {{0, 1}, {1, 2}, {0, 2}});
  auto t = pairs({0, 1, 2}, {1, 2, 0});
  EXPECT_NEAR(mc_flow_fractional(ring, t).value, 4.5, 1e-9);
  EXPECT_EQ(mc_flow_integral_exact(ring, t).value, 4.0);
}

TEST(McFlow, RequiresPairs) {
  Graph g(2, {{0, 1}});
  TerminalSet t{TerminalMode::DisjointSets, {0}, {1}};
  EXPECT_THROW(mc_flow_fractional(g, t), ParameterError);
  EXPECT_THROW(mc_flow_fractional(g, pairs({1}, {1})), ParameterError);
}

TEST(McFlow, IntegralSizeCap) {
  auto g = gen_er(13, 3.0, 1);
  EXPECT_THROW(mc_flow_integral_exact(g, pairs({0}, {1})), SizeError);
  auto h = gen_er(12, 3.0, 1);
  EXPECT_THROW(mc_flow_integral_exact(h, pairs({0, 1, 2, 3, 4}, {5, 6, 7, 8, 9})), SizeError);
}

TEST(McFlow, TinyInstancesCertifiedAndAboveIntegral) {
  Rng rng(31);
  int integral_cases = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t N = 3 + rng.below(6);
    auto g = random_graph(N, 0.25 + 0.5 * rng.uniform(), rng);
    auto t = sample_terminals(g, 1 + rng.below(3), TerminalMode::OrderedPairs, rng.next_u64());
    auto cert = check_lp_certificate(g, t);
    double integral = mc_flow_integral_exact(g, t).value;
    ASSERT_GE(cert.value, integral - 1e-9) << "trial " << trial;
    if (cert.integral) {
      ASSERT_NEAR(cert.value, integral, 1e-9) << "trial " << trial;
      ++integral_cases;
    }
  }
  EXPECT_GT(integral_cases, 200);
}

TEST(McFlow, MediumInstancesCertified) {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    auto g = gen_er(128, 4.0, seed);
    auto t = sample_terminals(g, 8 + 2 * seed, TerminalMode::OrderedPairs, seed + 99);
    check_lp_certificate(g, t);
  }
}

TEST(McFlow, BoundedByMaxFlowBetweenUnions) {
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    auto g = gen_er(60, 3.5, seed);
    auto t = sample_terminals(g, 5, TerminalMode::OrderedPairs, seed + 3);
    std::set<NodeId> src(t.sources.begin(), t.sources.end());
    std::set<NodeId> dst(t.sinks.begin(), t.sinks.end());
    bool disjoint = true;
    for (auto v : dst)
      disjoint &= !src.count(v);
    if (!disjoint || src.size() != dst.size())
      continue;
    TerminalSet u{TerminalMode::DisjointSets, {src.begin(), src.end()}, {dst.begin(), dst.end()}};
    ASSERT_LE(mc_flow_fractional(g, t).value, max_flow(g, u).value + 1e-9);
    ++checked;
  }
  EXPECT_GT(checked, 30);
}

TEST(McFlow, MultiplicativeWeightsWithinGuarantee) {
  const double eps = 0.1;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    auto g = gen_er(100, 4.0, seed);
    auto t = sample_terminals(g, 10, TerminalMode::OrderedPairs, seed + 17);
    double exact = mc_flow_lp(g, t).value;
    auto approx = mc_flow_mwu(g, t, eps);
    EXPECT_LE(approx.value, exact + 1e-9);
    EXPECT_GE(approx.value, std::pow(1 - eps, 3) * exact);
    EXPECT_NE(approx.method.find("mwu"), std::string::npos);
  }
  Graph g(2, {{0, 1}});
  EXPECT_THROW(mc_flow_mwu(g, pairs({0}, {1}), 0.0), ParameterError);
}

TEST(McFlow, AutoDispatchReportsMethod) {
  auto small = gen_er(50, 4.0, 1);
  auto ts = sample_terminals(small, 3, TerminalMode::OrderedPairs, 2);
  EXPECT_EQ(mc_flow_fractional(small, ts).method, "lp-column-generation");
  auto big = gen_er(300, 4.0, 1);
  auto tb = sample_terminals(big, 3, TerminalMode::OrderedPairs, 2);
  EXPECT_NE(mc_flow_fractional(big, tb).method.find("mwu"), std::string::npos);
  McFlowOptions force;
  force.method = McMethod::Lp;
  EXPECT_EQ(mc_flow_fractional(big, tb, force).method, "lp-column-generation");
}

TEST(McFlow, SinglePairIsMaxFlow) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto g = gen_er(80, 4.0, seed);
    auto t = sample_terminals(g, 1, TerminalMode::OrderedPairs, seed);
    TerminalSet d{TerminalMode::DisjointSets, t.sources, t.sinks};
    EXPECT_NEAR(mc_flow_fractional(g, t).value, max_flow(g, d).value, 1e-9);
  }
}

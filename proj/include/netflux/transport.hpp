#pragma once

#include <cstdint>
#include <map>
#include <string>

#include <nlohmann/json.hpp>

#include "netflux/graph.hpp"
#include "netflux/maxflow.hpp"

namespace netflux {

struct TransportResult {
  double value = 0.0;
  // Hop length -> units of flow; filled by flow_decompose_by_length only.
  std::map<std::size_t, std::int64_t> per_length_flow;
  // Relative residual of the potential solve (current) or duality gap (LP).
  double residual = 0.0;
  std::string method;
  std::string decomposition_policy;
  std::size_t iterations = 0;
};

inline nlohmann::json to_json(const TransportResult& r) {
  nlohmann::json per_length = nlohmann::json::object();
  for (auto [len, units] : r.per_length_flow)
    per_length[std::to_string(len)] = units;
  return {{"value", r.value},
          {"per_length_flow", per_length},
          {"residual", r.residual},
          {"method", r.method},
          {"decomposition_policy", r.decomposition_policy},
          {"iterations", r.iterations}};
}

inline TransportResult transport_result_from_json(const nlohmann::json& j) {
  TransportResult r;
  r.value = j.at("value").get<double>();
  for (auto& [k, v] : j.at("per_length_flow").items())
    r.per_length_flow[std::stoul(k)] = v.get<std::int64_t>();
  r.residual = j.at("residual").get<double>();
  r.method = j.at("method").get<std::string>();
  r.decomposition_policy = j.value("decomposition_policy", "");
  r.iterations = j.value("iterations", std::size_t{0});
  return r;
}

inline constexpr const char* kShortestFirstPolicy = "shortest-augmenting-path";

inline TransportResult max_flow(const Graph& g, const TerminalSet& t) {
  if (t.mode != TerminalMode::DisjointSets)
    throw ParameterError("max_flow requires disjoint terminal sets");
  validate_terminals(g, t);
  UnitFlowNetwork net(g, t.sources, t.sinks);
  TransportResult r;
  r.value = static_cast<double>(net.run());
  r.method = "dinic-unit";
  r.iterations = net.phases().size();
  return r;
}

// Same flow as max_flow plus F_l: the units found by augmenting paths of
// l hops. Augmentation is shortest-first, so F_1 is saturated before F_2 etc.
inline TransportResult flow_decompose_by_length(const Graph& g, const TerminalSet& t) {
  if (t.mode != TerminalMode::DisjointSets)
    throw ParameterError("flow_decompose_by_length requires disjoint terminal sets");
  validate_terminals(g, t);
  UnitFlowNetwork net(g, t.sources, t.sinks);
  TransportResult r;
  r.value = static_cast<double>(net.run());
  r.method = "dinic-unit";
  r.decomposition_policy = kShortestFirstPolicy;
  r.iterations = net.phases().size();
  for (const auto& ph : net.phases())
    r.per_length_flow[ph.hops] += ph.units;
  return r;
}

}  // namespace netflux

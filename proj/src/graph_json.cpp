#include "sirg/graph_json.hpp"

#include <json.hpp>

namespace sirg {

std::string graph_to_json(const SpinnedGraph& graph) {
  nlohmann::ordered_json j;
  j["n"] = graph.n;
  j["seed"] = graph.seed;
  j["spins"] = graph.spins;
  auto& edges = j["edges"] = nlohmann::ordered_json::array();
  for (const auto& [u, v] : graph.edges) edges.push_back({u, v});
  return j.dump();
}

SpinnedGraph graph_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("graph JSON unparsable: ") + e.what());
  }

  SpinnedGraph g;
  try {
    g.n = j.at("n").get<std::int64_t>();
    g.seed = j.at("seed").get<std::uint64_t>();
    g.spins.clear();
    for (const auto& s : j.at("spins")) {
      const int v = s.get<int>();
      if (v != 1 && v != -1) throw ConfigError("spins must be +1 or -1");
      g.spins.push_back(static_cast<std::int8_t>(v));
    }
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 2) throw ConfigError("edges must be [u,v] pairs");
      g.edges.emplace_back(e[0].get<std::uint32_t>(), e[1].get<std::uint32_t>());
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("graph JSON malformed: ") + e.what());
  }

  if (g.n < 1) throw ConfigError("graph JSON: n must be >= 1");
  if (static_cast<std::int64_t>(g.spins.size()) != g.n)
    throw ConfigError("graph JSON: spins length != n");
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    const auto& [u, v] = g.edges[i];
    if (u >= v || v >= static_cast<std::uint64_t>(g.n))
      throw ConfigError("graph JSON: edges must satisfy u < v < n");
    if (i > 0 && g.edges[i] <= g.edges[i - 1])
      throw ConfigError("graph JSON: edges must be sorted and unique");
  }
  return g;
}

}  // namespace sirg

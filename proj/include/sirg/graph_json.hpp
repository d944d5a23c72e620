#pragma once

#include <string>

#include "sirg/graph.hpp"

namespace sirg {

// Canonical interchange: {"n": ..., "seed": ..., "spins": [...], "edges": [[u,v], ...]}
// with edges sorted lexicographically.  Serialization is byte-deterministic.
std::string graph_to_json(const SpinnedGraph& graph);

// Parses and validates; throws ConfigError on malformed input.
SpinnedGraph graph_from_json(const std::string& text);

}  // namespace sirg

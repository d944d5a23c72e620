#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "sirg/model.hpp"
#include "sirg/rng.hpp"

namespace sirg {

// A sampled graph together with the spin assignment that generated it.
// Edges are stored with u < v, sorted lexicographically.
struct SpinnedGraph {
  std::int64_t n = 0;
  std::uint64_t seed = 0;
  std::vector<std::int8_t> spins;                            // +1 / -1 per vertex
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;

  std::int64_t edge_count() const { return static_cast<std::int64_t>(edges.size()); }
};

// Exponential tilt: f acts on vertices, g on edge spin-pair classes.
struct TiltSpec {
  double f_minus = 0, f_plus = 0;
  double g_mm = 0, g_pm = 0, g_pp = 0;

  double f(int spin) const { return spin > 0 ? f_plus : f_minus; }
  double g(int a, int b) const {
    if (a > 0 && b > 0) return g_pp;
    if (a < 0 && b < 0) return g_mm;
    return g_pm;
  }
};

struct TiltedLaw {
  ProbPair law;
  double log_normalizer = 0;  // U_f = log sum_a e^{f(a)} l(a)
};

// Vertex-tilted spin law: l~(a) = e^{f(a) - U_f} l(a).
TiltedLaw tilted_spin_law(ProbPair spin_law, const TiltSpec& tilt);

// Edge-tilted connection probability p~ = p e^g / (1 - p + p e^g).
double tilted_edge_probability(double p, double g);

// Pair-interaction compensator h~_n = -n log(1 - p + p e^g).
// With p = C/n this converges to (1 - e^g) * C as n grows.
double h_tilde(std::int64_t n, double p, double g);

enum class EdgeSampler {
  Pairwise,  // independent Bernoulli per vertex pair, O(n^2)
  Block,     // geometric skips within the three pair classes, O(n + |E|)
};

// Draw spins i.i.d. from spin_law, then link each pair u < v independently
// with the class probability min(C_ab / n, 1).  Deterministic given the seed.
SpinnedGraph sample_graph(std::int64_t n, const Kernel& kernel,
                          const ModelParams& params, ProbPair spin_law,
                          std::uint64_t seed,
                          EdgeSampler sampler = EdgeSampler::Pairwise);

// Same, under the tilted spin law and tilted edge probabilities.  With a zero
// tilt this consumes randomness identically to sample_graph and reproduces it.
SpinnedGraph sample_tilted_graph(std::int64_t n, const Kernel& kernel,
                                 const ModelParams& params, ProbPair spin_law,
                                 const TiltSpec& tilt, std::uint64_t seed,
                                 EdgeSampler sampler = EdgeSampler::Pairwise);

struct RadonNikodymForms {
  double direct = 0;     // product over vertices, edges and the full pair set
  double empirical = 0;  // the same density through the empirical measures
};

// Both evaluations of log d(tilted) / d(base) at the given graph.
RadonNikodymForms radon_nikodym_forms(const SpinnedGraph& graph,
                                      const Kernel& kernel,
                                      const ModelParams& params,
                                      ProbPair spin_law, const TiltSpec& tilt);

// log d(tilted)/d(base); the two internal forms must agree to 1e-9 relative,
// otherwise IdentityViolation is thrown (that would be a bug, not bad input).
double radon_nikodym_log(const SpinnedGraph& graph, const Kernel& kernel,
                         const ModelParams& params, ProbPair spin_law,
                         const TiltSpec& tilt);

}  // namespace sirg

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sirg/graph.hpp"
#include "sirg/model.hpp"

namespace sirg {

// Spin assignments are free summation variables over a fixed edge set; the
// graph's own spins only ever matter for how the edges were generated.
using SpinConfig = std::vector<std::int8_t>;

// beta * sum_{(u,v) in E} eta_u eta_v + sum_u B(eta_u) * eta_u
double hamiltonian(const SpinnedGraph& graph, std::span<const std::int8_t> config,
                   const ModelParams& params);

// log sum over all 2^n configurations of exp(hamiltonian), by Gray-code
// enumeration with a running log-sum-exp.  n <= 30 (SizeLimit above).
double quenched_log_partition(const SpinnedGraph& graph, const ModelParams& params);

// quenched_log_partition / n.
double pressure_finite(const SpinnedGraph& graph, const ModelParams& params);

// (1/n) log of the edge-averaged partition function
//   sum_eta prod_{u<v} (1 - p_uv + p_uv e^{beta eta_u eta_v}) e^{sum_u B(eta_u) eta_u}
// where p_uv is the class probability of (eta_u, eta_v).  The product depends
// on eta only through the number of plus spins, so the sum collapses to n + 1
// binomial-weighted terms.  n <= 26.
double annealed_log_partition_exact(std::int64_t n, const Kernel& kernel,
                                    const ModelParams& params);

// Full Boltzmann table over 2^n configurations, indexed by bit mask
// (bit u set means eta_u = +1).  Sums to 1.  n <= 16.
std::vector<double> boltzmann_distribution_exact(const SpinnedGraph& graph,
                                                 const ModelParams& params);

struct GlauberResult {
  double magnetization = 0;       // time average of (1/n) sum eta_u
  double energy_per_site = 0;     // time average of hamiltonian / n
  std::vector<double> marginal_plus;  // per-site frequency of eta_u = +1
};

// Heat-bath dynamics targeting the Boltzmann law on the given edge set.
// Sites are updated in systematic sweep order; observables are measured once
// per sweep after burn_in sweeps.
GlauberResult glauber_sample(const SpinnedGraph& graph, const ModelParams& params,
                             std::int64_t sweeps, std::int64_t burn_in,
                             std::uint64_t seed);

// Single-step random-scan transition matrix (2^n x 2^n, n <= 4).  Satisfies
// detailed balance against the exact Boltzmann law at machine precision.
std::vector<std::vector<double>> glauber_transition_matrix(const SpinnedGraph& graph,
                                                           const ModelParams& params);

}  // namespace sirg

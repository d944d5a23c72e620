#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "sirg/graph.hpp"
#include "sirg/model.hpp"

namespace sirg {

// Empirical spin frequencies; counts are kept in integer form so exact
// identities stay exact.
struct SpinMeasure {
  std::int64_t n = 0;
  std::int64_t count_minus = 0, count_plus = 0;

  double density(int spin) const {
    return static_cast<double>(spin > 0 ? count_plus : count_minus) /
           static_cast<double>(n);
  }
};

// Symmetric pair measure on {-1,+1}^2 with integer counts.  For the edge
// measure every edge contributes one count to each orientation, so the total
// count is exactly 2|E| and the mass is 2|E|/n as a ratio of integers.
struct PairMeasure {
  std::int64_t n = 0;
  std::int64_t counts[2][2] = {{0, 0}, {0, 0}};

  std::int64_t total_count() const {
    return counts[0][0] + counts[0][1] + counts[1][0] + counts[1][1];
  }
  double mass() const { return static_cast<double>(total_count()) / static_cast<double>(n); }
  double density(int a, int b) const {
    return static_cast<double>(counts[spin_index(a)][spin_index(b)]) /
           static_cast<double>(n);
  }
};

struct EmpiricalMeasures {
  SpinMeasure l1;
  PairMeasure l2;       // oriented edge ends
  PairMeasure l1_diag;  // L1 placed on the diagonal, mass 1
};

EmpiricalMeasures empirical_measures(const SpinnedGraph& graph);

// A symmetric nonnegative 2x2 measure given by its three distinct entries.
struct SymPair {
  double mm = 0, pm = 0, pp = 0;

  double at(int a, int b) const {
    if (a > 0 && b > 0) return pp;
    if (a < 0 && b < 0) return mm;
    return pm;
  }
  double mass() const { return mm + 2 * pm + pp; }
};

// H(omega || ell) = sum omega log(omega/ell); 0 log 0 = 0; +infinity as soon
// as omega charges a point ell does not.
double relative_entropy(ProbPair omega, ProbPair ell);

// The reference pair measure C * omega x omega.
SymPair c_omega_omega(const EffectiveKernel& kernel, ProbPair omega);

// H(pi || mu) + |mu| - |pi| with mu = C * omega x omega, evaluated as
// sum mu * xi(pi/mu), xi(x) = x log x - x + 1.  +infinity if pi is not
// absolutely continuous w.r.t. mu.
double hc_divergence(const SymPair& pi, ProbPair omega, const EffectiveKernel& kernel);

// Large-deviation cost of observing (omega, pi) as (L1, L2):
//   H(omega || ell) + hc_divergence(pi, omega) / 2.
double rate_function(ProbPair omega, const SymPair& pi, ProbPair ell,
                     const EffectiveKernel& kernel);

// ---- decay probe ----------------------------------------------------------

using MeasureEvent = std::function<bool(const SpinMeasure&, const PairMeasure&)>;

struct ProbePoint {
  std::int64_t n = 0;
  double log_prob_over_n = 0;  // (1/n) log P_n(event)
  double se = 0;               // standard error of log_prob_over_n
  std::int64_t hits = 0;
  std::int64_t samples = 0;
};

struct ProbeResult {
  std::vector<ProbePoint> points;
  double slope = 0;  // least-squares slope of log P_n against n
};

// Estimate P_n(event) by direct frequency, or by importance sampling when a
// tilt is given (weights exp(-radon_nikodym_log)).  Per-sample RNG streams are
// derived from (seed, n-index, sample-index), so results do not depend on
// batching.  Throws EstimateDegenerate when no weighted hit was seen.
ProbeResult ldp_decay_probe(const MeasureEvent& event,
                            const std::vector<std::int64_t>& n_list,
                            std::int64_t samples, const Kernel& kernel,
                            const ModelParams& params, ProbPair spin_law,
                            const std::optional<TiltSpec>& tilt,
                            std::uint64_t seed,
                            EdgeSampler sampler = EdgeSampler::Pairwise);

inline std::vector<std::int64_t> default_probe_sizes() { return {50, 100, 200}; }

// CSV rows "n,log_prob_over_n,stderr,hits,samples" (17 significant digits).
std::string probe_to_csv(const ProbeResult& result);

}  // namespace sirg

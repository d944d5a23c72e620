#include "sirg/graph.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace sirg {

namespace {

// Connection probabilities for the three spin-pair classes.
struct ClassProbs {
  double mm = 0, pm = 0, pp = 0;

  double at(int a, int b) const {
    if (a > 0 && b > 0) return pp;
    if (a < 0 && b < 0) return mm;
    return pm;
  }
};

ClassProbs class_probs(const Kernel& kernel, const ModelParams& params,
                       std::int64_t n) {
  const EffectiveKernel ek = effective_kernel(kernel, params);
  const double nn = static_cast<double>(n);
  return {std::min(ek.c_mm / nn, 1.0), std::min(ek.c_pm / nn, 1.0),
          std::min(ek.c_pp / nn, 1.0)};
}

std::vector<std::int8_t> draw_spins(std::int64_t n, ProbPair law, SplitMix64& rng) {
  std::vector<std::int8_t> spins(static_cast<std::size_t>(n));
  for (auto& s : spins) s = rng.next_unit() < law.plus ? std::int8_t{1} : std::int8_t{-1};
  return spins;
}

using EdgeList = std::vector<std::pair<std::uint32_t, std::uint32_t>>;

EdgeList sample_edges_pairwise(const std::vector<std::int8_t>& spins,
                               const ClassProbs& probs, SplitMix64& rng) {
  const std::size_t n = spins.size();
  EdgeList edges;
  for (std::size_t u = 0; u + 1 < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v)
      if (rng.bernoulli(probs.at(spins[u], spins[v])))
        edges.emplace_back(static_cast<std::uint32_t>(u),
                           static_cast<std::uint32_t>(v));
  return edges;
}

// Decode linear index k in [0, t(t-1)/2) to an unordered pair (i < j) listed
// row by row: (0,1) (0,2) ... (0,t-1) (1,2) ...
std::pair<std::size_t, std::size_t> decode_pair(std::uint64_t k, std::size_t t) {
  std::size_t i = 0;
  std::uint64_t row = t - 1;  // pairs in row i
  while (k >= row) {
    k -= row;
    --row;
    ++i;
  }
  return {i, i + 1 + static_cast<std::size_t>(k)};
}

// Visit the indices of a Bernoulli(p) thinning of {0, ..., m-1} via geometric
// skips; identical in law to m independent coin flips.
template <typename Visit>
void skip_sample(std::uint64_t m, double p, SplitMix64& rng, Visit visit) {
  if (m == 0 || p <= 0.0) return;
  if (p >= 1.0) {
    for (std::uint64_t j = 0; j < m; ++j) visit(j);
    return;
  }
  const double log1mp = std::log1p(-p);
  double pos = -1.0;
  for (;;) {
    const double u = rng.next_unit();
    if (u <= 0.0) return;
    pos += 1.0 + std::floor(std::log(u) / log1mp);
    if (pos >= static_cast<double>(m)) return;
    visit(static_cast<std::uint64_t>(pos));
  }
}

EdgeList sample_edges_block(const std::vector<std::int8_t>& spins,
                            const ClassProbs& probs, SplitMix64& rng) {
  std::vector<std::uint32_t> plus, minus;
  for (std::size_t u = 0; u < spins.size(); ++u)
    (spins[u] > 0 ? plus : minus).push_back(static_cast<std::uint32_t>(u));

  EdgeList edges;
  auto within = [&](const std::vector<std::uint32_t>& side, double p) {
    const std::size_t t = side.size();
    if (t < 2) return;
    skip_sample(static_cast<std::uint64_t>(t) * (t - 1) / 2, p, rng,
                [&](std::uint64_t k) {
                  auto [i, j] = decode_pair(k, t);
                  edges.emplace_back(side[i], side[j]);
                });
  };
  within(plus, probs.pp);
  if (!minus.empty() && !plus.empty())
    skip_sample(static_cast<std::uint64_t>(minus.size()) * plus.size(), probs.pm,
                rng, [&](std::uint64_t k) {
                  edges.emplace_back(minus[k / plus.size()], plus[k % plus.size()]);
                });
  within(minus, probs.mm);

  for (auto& e : edges)
    if (e.first > e.second) std::swap(e.first, e.second);
  std::sort(edges.begin(), edges.end());
  return edges;
}

SpinnedGraph sample_impl(std::int64_t n, const Kernel& kernel,
                         const ModelParams& params, ProbPair spin_law,
                         const TiltSpec& tilt, bool tilted, std::uint64_t seed,
                         EdgeSampler sampler) {
  if (n < 1) throw EmptyGraph("graph sampling needs n >= 1");
  params.validate();

  ClassProbs probs = class_probs(kernel, params, n);
  ProbPair law = spin_law;
  if (tilted) {
    law = tilted_spin_law(spin_law, tilt).law;
    probs = {tilted_edge_probability(probs.mm, tilt.g_mm),
             tilted_edge_probability(probs.pm, tilt.g_pm),
             tilted_edge_probability(probs.pp, tilt.g_pp)};
  }

  SplitMix64 rng(seed);
  SpinnedGraph g;
  g.n = n;
  g.seed = seed;
  g.spins = draw_spins(n, law, rng);
  g.edges = sampler == EdgeSampler::Pairwise
                ? sample_edges_pairwise(g.spins, probs, rng)
                : sample_edges_block(g.spins, probs, rng);
  return g;
}

}  // namespace

TiltedLaw tilted_spin_law(ProbPair spin_law, const TiltSpec& tilt) {
  const double shift = std::max(tilt.f_minus, tilt.f_plus);
  const double zm = std::exp(tilt.f_minus - shift) * spin_law.minus;
  const double zp = std::exp(tilt.f_plus - shift) * spin_law.plus;
  const double z = zm + zp;
  if (!(z > 0.0)) throw DomainError("tilted spin law has zero mass");
  return {ProbPair{zm / z, zp / z}, shift + std::log(z)};
}

double tilted_edge_probability(double p, double g) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("edge probability outside [0,1]");
  if (p == 0.0 || p == 1.0) return p;  // tilting fixes the degenerate cases
  const double w = p * std::exp(g);
  return w / (1.0 - p + w);
}

double h_tilde(std::int64_t n, double p, double g) {
  const double growth = p * std::expm1(g);  // (1 - p + p e^g) - 1
  if (!(1.0 + growth > 0.0)) throw DomainError("h_tilde: log argument <= 0");
  return -static_cast<double>(n) * std::log1p(growth);
}

SpinnedGraph sample_graph(std::int64_t n, const Kernel& kernel,
                          const ModelParams& params, ProbPair spin_law,
                          std::uint64_t seed, EdgeSampler sampler) {
  return sample_impl(n, kernel, params, spin_law, TiltSpec{}, false, seed, sampler);
}

SpinnedGraph sample_tilted_graph(std::int64_t n, const Kernel& kernel,
                                 const ModelParams& params, ProbPair spin_law,
                                 const TiltSpec& tilt, std::uint64_t seed,
                                 EdgeSampler sampler) {
  return sample_impl(n, kernel, params, spin_law, tilt, true, seed, sampler);
}

RadonNikodymForms radon_nikodym_forms(const SpinnedGraph& graph,
                                      const Kernel& kernel,
                                      const ModelParams& params,
                                      ProbPair spin_law, const TiltSpec& tilt) {
  if (graph.n < 1) throw EmptyGraph("radon_nikodym needs a nonempty graph");
  const std::int64_t n = graph.n;
  const ClassProbs base = class_probs(kernel, params, n);
  const ClassProbs tilted = {tilted_edge_probability(base.mm, tilt.g_mm),
                             tilted_edge_probability(base.pm, tilt.g_pm),
                             tilted_edge_probability(base.pp, tilt.g_pp)};
  const TiltedLaw tl = tilted_spin_law(spin_law, tilt);

  // Per-class vertex and edge counts.
  std::int64_t n_minus = 0;
  for (auto s : graph.spins)
    if (s < 0) ++n_minus;
  const std::int64_t n_plus = n - n_minus;

  std::int64_t e_mm = 0, e_pm = 0, e_pp = 0;
  for (const auto& [u, v] : graph.edges) {
    const int a = graph.spins[u], b = graph.spins[v];
    if (a > 0 && b > 0)
      ++e_pp;
    else if (a < 0 && b < 0)
      ++e_mm;
    else
      ++e_pm;
  }
  const std::int64_t pairs_mm = n_minus * (n_minus - 1) / 2;
  const std::int64_t pairs_pm = n_minus * n_plus;
  const std::int64_t pairs_pp = n_plus * (n_plus - 1) / 2;

  struct ClassRow {
    std::int64_t pairs, edges;
    double p, pt, g;
    int a, b;
  };
  const ClassRow rows[3] = {
      {pairs_mm, e_mm, base.mm, tilted.mm, tilt.g_mm, -1, -1},
      {pairs_pm, e_pm, base.pm, tilted.pm, tilt.g_pm, -1, +1},
      {pairs_pp, e_pp, base.pp, tilted.pp, tilt.g_pp, +1, +1},
  };

  for (const auto& r : rows) {
    if (r.pairs == 0) continue;
    if (r.p >= 1.0)
      throw DomainError("radon_nikodym needs base edge probabilities < 1");
    if (r.p == 0.0 && r.edges > 0)
      throw DomainError("graph has an edge whose base probability is 0");
  }

  // Direct form: density ratio factor by factor (vertices, edges, non-edges
  // across the full pair set).
  double direct = 0.0;
  if (n_minus > 0)
    direct += static_cast<double>(n_minus) *
              (std::log(tl.law.minus) - std::log(spin_law.minus));
  if (n_plus > 0)
    direct += static_cast<double>(n_plus) *
              (std::log(tl.law.plus) - std::log(spin_law.plus));
  for (const auto& r : rows) {
    if (r.pairs == 0 || r.p == 0.0) continue;
    direct += static_cast<double>(r.edges) * (std::log(r.pt) - std::log(r.p));
    direct += static_cast<double>(r.pairs - r.edges) *
              (std::log1p(-r.pt) - std::log1p(-r.p));
  }

  // Empirical-measure form:
  //   n<L1, f - U_f> + n<L2/2, g> + n<(L1 x L1)/2, h~_n> - <L1_diag/2, h~_n>.
  double empirical = 0.0;
  empirical += static_cast<double>(n_minus) * (tilt.f_minus - tl.log_normalizer);
  empirical += static_cast<double>(n_plus) * (tilt.f_plus - tl.log_normalizer);
  empirical += static_cast<double>(e_mm) * tilt.g_mm +
               static_cast<double>(e_pm) * tilt.g_pm +
               static_cast<double>(e_pp) * tilt.g_pp;
  const double h_mm = h_tilde(n, base.mm, tilt.g_mm);
  const double h_pm = h_tilde(n, base.pm, tilt.g_pm);
  const double h_pp = h_tilde(n, base.pp, tilt.g_pp);
  const double nm = static_cast<double>(n_minus), np = static_cast<double>(n_plus);
  const double nd = static_cast<double>(n);
  empirical += (nm * nm * h_mm + 2.0 * nm * np * h_pm + np * np * h_pp) / (2.0 * nd);
  empirical -= (nm * h_mm + np * h_pp) / (2.0 * nd);

  return {direct, empirical};
}

double radon_nikodym_log(const SpinnedGraph& graph, const Kernel& kernel,
                         const ModelParams& params, ProbPair spin_law,
                         const TiltSpec& tilt) {
  const RadonNikodymForms f = radon_nikodym_forms(graph, kernel, params, spin_law, tilt);
  const double scale = std::max(1.0, std::abs(f.direct));
  if (std::abs(f.direct - f.empirical) > 1e-9 * scale) {
    std::ostringstream os;
    os << "radon_nikodym forms disagree: direct " << f.direct << " vs empirical "
       << f.empirical;
    throw IdentityViolation(os.str());
  }
  return f.direct;
}

}  // namespace sirg

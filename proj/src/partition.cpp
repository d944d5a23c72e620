#include "sirg/partition.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <future>
#include <limits>
#include <thread>

namespace sirg {

namespace {

// Running log-sum-exp accumulator; associative under merge.
struct LogSumExp {
  double max = -std::numeric_limits<double>::infinity();
  double sum = 0.0;

  void add(double h) {
    if (h <= max) {
      sum += std::exp(h - max);
    } else {
      sum = sum * std::exp(max - h) + 1.0;
      max = h;
    }
  }
  void merge(const LogSumExp& o) {
    if (o.max == -std::numeric_limits<double>::infinity()) return;
    if (o.max <= max) {
      sum += o.sum * std::exp(o.max - max);
    } else {
      sum = sum * std::exp(max - o.max) + o.sum;
      max = o.max;
    }
  }
  double value() const { return max + std::log(sum); }
};

std::vector<std::vector<std::uint32_t>> adjacency(const SpinnedGraph& graph) {
  std::vector<std::vector<std::uint32_t>> adj(static_cast<std::size_t>(graph.n));
  for (const auto& [u, v] : graph.edges) {
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  return adj;
}

double field_term(const ModelParams& p, int spin) {
  return spin > 0 ? p.field_plus : -p.field_minus;  // B(eta) * eta
}

void check_config(const SpinnedGraph& graph, std::span<const std::int8_t> config) {
  if (static_cast<std::int64_t>(config.size()) != graph.n)
    throw ShapeError("config length does not match graph size");
  for (auto s : config)
    if (s != 1 && s != -1) throw ShapeError("config values must be +1 or -1");
}

// Log-sum-exp of exp(H) over the Gray-code configuration range [k0, k1).
LogSumExp enumerate_range(const SpinnedGraph& graph,
                          const std::vector<std::vector<std::uint32_t>>& adj,
                          const ModelParams& params, std::uint64_t k0,
                          std::uint64_t k1) {
  const std::int64_t n = graph.n;
  std::vector<std::int8_t> spins(static_cast<std::size_t>(n));
  const std::uint64_t start = k0 ^ (k0 >> 1);  // Gray code of k0
  for (std::int64_t u = 0; u < n; ++u)
    spins[u] = (start >> u) & 1 ? std::int8_t{1} : std::int8_t{-1};

  double h = 0.0;
  for (const auto& [u, v] : graph.edges)
    h += params.beta * spins[u] * spins[v];
  for (auto s : spins) h += field_term(params, s);

  LogSumExp acc;
  acc.add(h);
  for (std::uint64_t k = k0 + 1; k < k1; ++k) {
    const int u = std::countr_zero(k);  // bit flipped between gray(k-1), gray(k)
    int neighbor_sum = 0;
    for (auto v : adj[u]) neighbor_sum += spins[v];
    const int old_spin = spins[u];
    h -= params.beta * old_spin * neighbor_sum + field_term(params, old_spin);
    spins[u] = static_cast<std::int8_t>(-old_spin);
    h += params.beta * spins[u] * neighbor_sum + field_term(params, spins[u]);
    acc.add(h);
  }
  return acc;
}

}  // namespace

double hamiltonian(const SpinnedGraph& graph, std::span<const std::int8_t> config,
                   const ModelParams& params) {
  params.validate();
  check_config(graph, config);
  double h = 0.0;
  for (const auto& [u, v] : graph.edges)
    h += params.beta * config[u] * config[v];
  for (auto s : config) h += field_term(params, s);
  return h;
}

double quenched_log_partition(const SpinnedGraph& graph, const ModelParams& params) {
  params.validate();
  if (graph.n < 1) throw EmptyGraph("quenched_log_partition needs n >= 1");
  if (graph.n > 30) throw SizeLimit("quenched enumeration is capped at n = 30");

  const auto adj = adjacency(graph);
  const std::uint64_t total = std::uint64_t{1} << graph.n;
  // Restarting each block from scratch also bounds incremental float drift.
  const std::uint64_t block = std::min<std::uint64_t>(total, std::uint64_t{1} << 18);

  const unsigned workers = std::max(1u, std::thread::hardware_concurrency());
  if (workers == 1 || total <= block) {
    LogSumExp acc;
    for (std::uint64_t k0 = 0; k0 < total; k0 += block)
      acc.merge(enumerate_range(graph, adj, params, k0, std::min(total, k0 + block)));
    return acc.value();
  }

  std::vector<std::future<LogSumExp>> futs;
  const std::uint64_t chunk = (total / block + workers - 1) / workers * block;
  for (std::uint64_t c0 = 0; c0 < total; c0 += chunk) {
    futs.push_back(std::async(std::launch::async, [&, c0] {
      LogSumExp acc;
      const std::uint64_t c1 = std::min(total, c0 + chunk);
      for (std::uint64_t k0 = c0; k0 < c1; k0 += block)
        acc.merge(enumerate_range(graph, adj, params, k0, std::min(c1, k0 + block)));
      return acc;
    }));
  }
  LogSumExp acc;
  for (auto& f : futs) acc.merge(f.get());  // merge in block order: deterministic
  return acc.value();
}

double pressure_finite(const SpinnedGraph& graph, const ModelParams& params) {
  return quenched_log_partition(graph, params) / static_cast<double>(graph.n);
}

double annealed_log_partition_exact(std::int64_t n, const Kernel& kernel,
                                    const ModelParams& params) {
  params.validate();
  if (n < 1) throw EmptyGraph("annealed_log_partition_exact needs n >= 1");
  if (n > 26) throw SizeLimit("annealed enumeration is capped at n = 26");

  const EffectiveKernel ek = effective_kernel(kernel, params);
  const double nd = static_cast<double>(n);
  const double p_pp = std::min(ek.c_pp / nd, 1.0);
  const double p_pm = std::min(ek.c_pm / nd, 1.0);
  const double p_mm = std::min(ek.c_mm / nd, 1.0);

  // log E[e^{beta eta_u eta_v 1_edge}] per pair class; exactly 0 at beta = 0.
  const double log_aligned_pp = std::log1p(p_pp * std::expm1(params.beta));
  const double log_aligned_mm = std::log1p(p_mm * std::expm1(params.beta));
  const double log_opposed = std::log1p(p_pm * std::expm1(-params.beta));

  // Exact binomial coefficients (n <= 26 keeps them well inside 2^53).
  std::vector<double> binom(static_cast<std::size_t>(n) + 1, 0.0);
  binom[0] = 1.0;
  for (std::int64_t k = 1; k <= n; ++k)
    for (std::int64_t j = k; j > 0; --j) binom[j] += binom[j - 1];

  LogSumExp acc;
  for (std::int64_t k = 0; k <= n; ++k) {  // k = number of plus spins
    const double kp = static_cast<double>(k);
    const double km = static_cast<double>(n - k);
    const double pairs_pp = kp * (kp - 1) / 2;
    const double pairs_mm = km * (km - 1) / 2;
    const double pairs_pm = kp * km;
    acc.add(std::log(binom[k]) + pairs_pp * log_aligned_pp +
            pairs_mm * log_aligned_mm + pairs_pm * log_opposed +
            params.field_plus * kp - params.field_minus * km);
  }
  return acc.value() / nd;
}

std::vector<double> boltzmann_distribution_exact(const SpinnedGraph& graph,
                                                 const ModelParams& params) {
  params.validate();
  if (graph.n < 1) throw EmptyGraph("boltzmann_distribution_exact needs n >= 1");
  if (graph.n > 16) throw SizeLimit("Boltzmann table is capped at n = 16");

  const std::uint64_t total = std::uint64_t{1} << graph.n;
  std::vector<double> log_w(total);
  std::vector<std::int8_t> config(static_cast<std::size_t>(graph.n));
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    for (std::int64_t u = 0; u < graph.n; ++u)
      config[u] = (mask >> u) & 1 ? std::int8_t{1} : std::int8_t{-1};
    log_w[mask] = hamiltonian(graph, config, params);
  }
  const double log_z = [&] {
    LogSumExp acc;
    for (double h : log_w) acc.add(h);
    return acc.value();
  }();
  for (auto& w : log_w) w = std::exp(w - log_z);
  return log_w;
}

namespace {

// Heat-bath conditional P(eta_u = +1 | rest) = sigmoid(2 beta S_u + B(1) + B(-1)).
double heat_bath_plus(double beta, int neighbor_sum, const ModelParams& p) {
  const double x = 2.0 * beta * neighbor_sum + p.field_plus + p.field_minus;
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace

GlauberResult glauber_sample(const SpinnedGraph& graph, const ModelParams& params,
                             std::int64_t sweeps, std::int64_t burn_in,
                             std::uint64_t seed) {
  params.validate();
  if (graph.n < 1) throw EmptyGraph("glauber_sample needs n >= 1");
  if (sweeps <= burn_in || burn_in < 0)
    throw DomainError("glauber_sample needs sweeps > burn_in >= 0");

  const auto adj = adjacency(graph);
  const std::int64_t n = graph.n;
  std::vector<std::int8_t> spins = graph.spins;  // deterministic start
  SplitMix64 rng(seed);

  double h = hamiltonian(graph, spins, params);
  GlauberResult out;
  out.marginal_plus.assign(static_cast<std::size_t>(n), 0.0);
  double mag_sum = 0.0, energy_sum = 0.0;
  std::int64_t measures = 0;

  for (std::int64_t sweep = 0; sweep < sweeps; ++sweep) {
    for (std::int64_t u = 0; u < n; ++u) {
      int neighbor_sum = 0;
      for (auto v : adj[u]) neighbor_sum += spins[v];
      const double p_plus = heat_bath_plus(params.beta, neighbor_sum, params);
      const std::int8_t next = rng.next_unit() < p_plus ? std::int8_t{1} : std::int8_t{-1};
      if (next != spins[u]) {
        h -= params.beta * spins[u] * neighbor_sum + field_term(params, spins[u]);
        spins[u] = next;
        h += params.beta * spins[u] * neighbor_sum + field_term(params, spins[u]);
      }
    }
    if (sweep < burn_in) continue;
    ++measures;
    std::int64_t total_spin = 0;
    for (std::int64_t u = 0; u < n; ++u) {
      total_spin += spins[u];
      if (spins[u] > 0) out.marginal_plus[u] += 1.0;
    }
    mag_sum += static_cast<double>(total_spin) / static_cast<double>(n);
    energy_sum += h / static_cast<double>(n);
  }

  const double md = static_cast<double>(measures);
  out.magnetization = mag_sum / md;
  out.energy_per_site = energy_sum / md;
  for (auto& m : out.marginal_plus) m /= md;
  return out;
}

std::vector<std::vector<double>> glauber_transition_matrix(const SpinnedGraph& graph,
                                                           const ModelParams& params) {
  params.validate();
  if (graph.n < 1) throw EmptyGraph("glauber_transition_matrix needs n >= 1");
  if (graph.n > 4) throw SizeLimit("transition matrix is capped at n = 4");

  const auto adj = adjacency(graph);
  const std::int64_t n = graph.n;
  const std::size_t total = std::size_t{1} << n;
  std::vector<std::vector<double>> mat(total, std::vector<double>(total, 0.0));

  std::vector<std::int8_t> spins(static_cast<std::size_t>(n));
  for (std::size_t mask = 0; mask < total; ++mask) {
    for (std::int64_t u = 0; u < n; ++u)
      spins[u] = (mask >> u) & 1 ? std::int8_t{1} : std::int8_t{-1};
    double stay = 0.0;
    for (std::int64_t u = 0; u < n; ++u) {
      int neighbor_sum = 0;
      for (auto v : adj[u]) neighbor_sum += spins[v];
      const double p_plus = heat_bath_plus(params.beta, neighbor_sum, params);
      const double p_keep = spins[u] > 0 ? p_plus : 1.0 - p_plus;
      stay += p_keep / static_cast<double>(n);
      mat[mask][mask ^ (std::size_t{1} << u)] =
          (spins[u] > 0 ? 1.0 - p_plus : p_plus) / static_cast<double>(n);
    }
    mat[mask][mask] = stay;
  }
  return mat;
}

}  // namespace sirg

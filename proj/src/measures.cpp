#include "sirg/measures.hpp"

#include <cmath>
#include <cstdio>
#include <future>
#include <limits>
#include <sstream>
#include <thread>

namespace sirg {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

EmpiricalMeasures empirical_measures(const SpinnedGraph& graph) {
  if (graph.n < 1) throw EmptyGraph("empirical_measures needs n >= 1");
  EmpiricalMeasures m;
  m.l1.n = m.l2.n = m.l1_diag.n = graph.n;
  for (auto s : graph.spins) (s > 0 ? m.l1.count_plus : m.l1.count_minus) += 1;
  for (const auto& [u, v] : graph.edges) {
    const int a = spin_index(graph.spins[u]);
    const int b = spin_index(graph.spins[v]);
    m.l2.counts[a][b] += 1;
    m.l2.counts[b][a] += 1;
  }
  m.l1_diag.counts[0][0] = m.l1.count_minus;
  m.l1_diag.counts[1][1] = m.l1.count_plus;
  return m;
}

double relative_entropy(ProbPair omega, ProbPair ell) {
  double h = 0.0;
  for (int spin : {-1, +1}) {
    const double w = omega.at(spin);
    if (w == 0.0) continue;
    const double l = ell.at(spin);
    if (l == 0.0) return kInf;
    h += w * std::log(w / l);
  }
  return h;
}

SymPair c_omega_omega(const EffectiveKernel& kernel, ProbPair omega) {
  return {kernel.c_mm * omega.minus * omega.minus,
          kernel.c_pm * omega.minus * omega.plus,
          kernel.c_pp * omega.plus * omega.plus};
}

namespace {

// xi(x) = x log x - x + 1, the integrand of the pair-measure divergence.
double xi(double x) {
  if (x == 0.0) return 1.0;
  return x * std::log(x) - x + 1.0;
}

// One cell of sum mu * xi(pi/mu), with the zero conventions spelled out.
double cell_divergence(double pi, double mu) {
  if (mu == 0.0) return pi == 0.0 ? 0.0 : kInf;
  return mu * xi(pi / mu);
}

}  // namespace

double hc_divergence(const SymPair& pi, ProbPair omega, const EffectiveKernel& kernel) {
  if (pi.mm < 0 || pi.pm < 0 || pi.pp < 0)
    throw DomainError("pair measure must be nonnegative");
  const SymPair mu = c_omega_omega(kernel, omega);
  return cell_divergence(pi.mm, mu.mm) + 2.0 * cell_divergence(pi.pm, mu.pm) +
         cell_divergence(pi.pp, mu.pp);
}

double rate_function(ProbPair omega, const SymPair& pi, ProbPair ell,
                     const EffectiveKernel& kernel) {
  const double h1 = relative_entropy(omega, ell);
  if (h1 == kInf) return kInf;
  const double h2 = hc_divergence(pi, omega, kernel);
  if (h2 == kInf) return kInf;
  return h1 + 0.5 * h2;
}

// ---- decay probe ----------------------------------------------------------

namespace {

struct BatchStats {
  double sum = 0, sum_sq = 0;
  std::int64_t hits = 0;

  void merge(const BatchStats& o) {
    sum += o.sum;
    sum_sq += o.sum_sq;
    hits += o.hits;
  }
};

}  // namespace

ProbeResult ldp_decay_probe(const MeasureEvent& event,
                            const std::vector<std::int64_t>& n_list,
                            std::int64_t samples, const Kernel& kernel,
                            const ModelParams& params, ProbPair spin_law,
                            const std::optional<TiltSpec>& tilt,
                            std::uint64_t seed, EdgeSampler sampler) {
  if (samples < 2) throw DomainError("ldp_decay_probe needs samples >= 2");

  ProbeResult result;
  for (std::size_t ni = 0; ni < n_list.size(); ++ni) {
    const std::int64_t n = n_list[ni];
    const std::uint64_t size_seed = derive_stream(seed, ni);

    auto run_range = [&](std::int64_t s0, std::int64_t s1) {
      BatchStats st;
      for (std::int64_t s = s0; s < s1; ++s) {
        const std::uint64_t stream = derive_stream(size_seed, static_cast<std::uint64_t>(s));
        SpinnedGraph g =
            tilt ? sample_tilted_graph(n, kernel, params, spin_law, *tilt, stream, sampler)
                 : sample_graph(n, kernel, params, spin_law, stream, sampler);
        const EmpiricalMeasures m = empirical_measures(g);
        if (!event(m.l1, m.l2)) continue;
        const double w =
            tilt ? std::exp(-radon_nikodym_log(g, kernel, params, spin_law, *tilt))
                 : 1.0;
        st.sum += w;
        st.sum_sq += w * w;
        st.hits += 1;
      }
      return st;
    };

    // Per-sample streams make the aggregate independent of the batch split.
    const unsigned workers = std::max(1u, std::thread::hardware_concurrency());
    BatchStats stats;
    if (workers == 1 || samples < 256) {
      stats = run_range(0, samples);
    } else {
      std::vector<std::future<BatchStats>> futs;
      const std::int64_t step = (samples + workers - 1) / workers;
      for (std::int64_t s0 = 0; s0 < samples; s0 += step)
        futs.push_back(std::async(std::launch::async, run_range, s0,
                                  std::min(samples, s0 + step)));
      for (auto& f : futs) stats.merge(f.get());
    }

    if (stats.hits == 0 || stats.sum <= 0.0) {
      std::ostringstream os;
      os << "no " << (tilt ? "weighted " : "") << "hits at n = " << n
         << "; event frequency below 1/" << samples << " (log bound "
         << std::log(1.0 / static_cast<double>(samples)) / static_cast<double>(n)
         << " per site)";
      throw EstimateDegenerate(os.str());
    }

    const double s_dbl = static_cast<double>(samples);
    const double mean = stats.sum / s_dbl;
    const double var =
        std::max(0.0, (stats.sum_sq - s_dbl * mean * mean) / (s_dbl - 1.0));
    const double se_mean = std::sqrt(var / s_dbl);

    ProbePoint pt;
    pt.n = n;
    pt.samples = samples;
    pt.hits = stats.hits;
    pt.log_prob_over_n = std::log(mean) / static_cast<double>(n);
    pt.se = (se_mean / mean) / static_cast<double>(n);  // delta method
    result.points.push_back(pt);
  }

  // Least-squares slope of log P_n against n; the decay rate estimate is -slope.
  const std::size_t k = result.points.size();
  if (k >= 2) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& p : result.points) {
      const double x = static_cast<double>(p.n);
      const double y = p.log_prob_over_n * static_cast<double>(p.n);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    const double denom = static_cast<double>(k) * sxx - sx * sx;
    result.slope = denom != 0.0 ? (static_cast<double>(k) * sxy - sx * sy) / denom : 0.0;
  } else if (k == 1) {
    result.slope = result.points[0].log_prob_over_n;
  }
  return result;
}

std::string probe_to_csv(const ProbeResult& result) {
  std::string out = "n,log_prob_over_n,stderr,hits,samples\n";
  char buf[160];
  for (const auto& p : result.points) {
    std::snprintf(buf, sizeof(buf), "%lld,%.17g,%.17g,%lld,%lld\n",
                  static_cast<long long>(p.n), p.log_prob_over_n, p.se,
                  static_cast<long long>(p.hits), static_cast<long long>(p.samples));
    out += buf;
  }
  return out;
}

}  // namespace sirg

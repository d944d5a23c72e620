#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "sirg/errors.hpp"
#include "sirg/graph.hpp"
#include "sirg/graph_json.hpp"
#include "sirg/measures.hpp"
#include "sirg/model.hpp"
#include "sirg/partition.hpp"
#include "sirg/rng.hpp"

using namespace sirg;

namespace {

ModelParams make(double beta, double b_plus, double b_minus) {
  ModelParams p;
  p.beta = beta;
  p.field_plus = b_plus;
  p.field_minus = b_minus;
  return p;
}

TiltSpec make_tilt(double f_minus, double f_plus, double g_mm, double g_pm, double g_pp) {
  TiltSpec t;
  t.f_minus = f_minus;
  t.f_plus = f_plus;
  t.g_mm = g_mm;
  t.g_pm = g_pm;
  t.g_pp = g_pp;
  return t;
}

}  // namespace

TEST_CASE("degenerate sampler inputs") {
  const ProbPair law;
  CHECK_THROWS_AS(sample_graph(0, Kernel::constant(1), make(0.5, 0, 0), law, 1),
                  EmptyGraph);
  const SpinnedGraph one = sample_graph(1, Kernel::constant(5), make(0.5, 0, 0), law, 1);
  CHECK(one.n == 1);
  CHECK(one.spins.size() == 1);
  CHECK(one.edges.empty());
  const SpinnedGraph empty =
      sample_graph(40, Kernel::constant(0), make(0.5, 0, 0), law, 2);
  CHECK(empty.edges.empty());
}

TEST_CASE("sampling is deterministic in the seed") {
  const ProbPair law;
  const ModelParams p = make(0.6, 0.2, -0.1);
  const SpinnedGraph a = sample_graph(50, Kernel::constant(2), p, law, 99);
  const SpinnedGraph b = sample_graph(50, Kernel::constant(2), p, law, 99);
  const SpinnedGraph c = sample_graph(50, Kernel::constant(2), p, law, 100);
  CHECK(graph_to_json(a) == graph_to_json(b));
  CHECK(graph_to_json(a) != graph_to_json(c));
  CHECK(a.seed == 99);
}

TEST_CASE("edge count concentrates on (n-1) C / 2 for a constant kernel") {
  const ProbPair law;
  const ModelParams p = make(1, 0, 0);
  const std::int64_t n = 10000;
  double total = 0;
  const int seeds = 100;
  for (int s = 0; s < seeds; ++s) {
    const SpinnedGraph g = sample_graph(n, Kernel::constant(3), p, law,
                                        derive_stream(7, s), EdgeSampler::Block);
    total += static_cast<double>(g.edges.size());
  }
  const double mean = total / seeds;
  const double expected = static_cast<double>(n - 1) * 3 / 2;  // 14998.5
  const double sigma_mean = std::sqrt(expected / seeds);       // binomial, p small
  CHECK(std::abs(mean - expected) <= 3 * sigma_mean);
}

TEST_CASE("pairwise and block samplers agree in distribution") {
  const ProbPair law;
  const ModelParams p = make(0.8, 0.3, 0.1);
  const Kernel kernel = Kernel::block(2, 4, 1);
  const std::int64_t n = 300;
  const int seeds = 400;
  double mean_pair = 0, mean_block = 0, var_pair = 0, var_block = 0;
  for (int s = 0; s < seeds; ++s) {
    const auto pair_graph =
        sample_graph(n, kernel, p, law, derive_stream(11, s), EdgeSampler::Pairwise);
    const auto block_graph =
        sample_graph(n, kernel, p, law, derive_stream(12, s), EdgeSampler::Block);
    mean_pair += static_cast<double>(pair_graph.edges.size());
    mean_block += static_cast<double>(block_graph.edges.size());
    var_pair += static_cast<double>(pair_graph.edges.size()) *
                static_cast<double>(pair_graph.edges.size());
    var_block += static_cast<double>(block_graph.edges.size()) *
                 static_cast<double>(block_graph.edges.size());
  }
  mean_pair /= seeds;
  mean_block /= seeds;
  var_pair = var_pair / seeds - mean_pair * mean_pair;
  var_block = var_block / seeds - mean_block * mean_block;
  const double se_diff = std::sqrt(var_pair / seeds + var_block / seeds);
  CHECK(std::abs(mean_pair - mean_block) <= 4.5 * se_diff);
}

TEST_CASE("block sampler emits valid ordered unique edges") {
  const ProbPair law;
  const SpinnedGraph g = sample_graph(500, Kernel::block(3, 1, 2), make(0.5, 0.2, 0.4),
                                      law, 5, EdgeSampler::Block);
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    CHECK(g.edges[i].first < g.edges[i].second);
    CHECK(g.edges[i].second < 500);
    if (i > 0) CHECK(g.edges[i - 1] < g.edges[i]);
  }
}

TEST_CASE("tilted spin law closed cases") {
  ProbPair law;
  law.minus = 0.5;
  law.plus = 0.5;

  const TiltedLaw identity = tilted_spin_law(law, make_tilt(0, 0, 0, 0, 0));
  CHECK(identity.law.minus == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(identity.log_normalizer == doctest::Approx(0.0).epsilon(1e-15));

  const TiltedLaw shifted = tilted_spin_law(law, make_tilt(2.5, 2.5, 0, 0, 0));
  CHECK(shifted.law.plus == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(shifted.log_normalizer == doctest::Approx(2.5).epsilon(1e-14));

  const TiltedLaw skewed = tilted_spin_law(law, make_tilt(0, std::log(3.0), 0, 0, 0));
  CHECK(skewed.law.minus == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(skewed.law.plus == doctest::Approx(0.75).epsilon(1e-14));
  CHECK(skewed.log_normalizer == doctest::Approx(std::log(2.0)).epsilon(1e-14));
}

TEST_CASE("tilted edge probability closed cases") {
  CHECK(tilted_edge_probability(0.37, 0) == doctest::Approx(0.37).epsilon(1e-15));
  CHECK(tilted_edge_probability(0, 1.7) == 0.0);
  CHECK(tilted_edge_probability(1, -3.2) == 1.0);
  CHECK(tilted_edge_probability(0.25, std::log(3.0)) ==
        doctest::Approx(0.5).epsilon(1e-14));
  CHECK_THROWS_AS(tilted_edge_probability(1.2, 0), DomainError);
}

TEST_CASE("pair exponent h matches its sparse limit") {
  CHECK(h_tilde(100, 0.3, 0) == 0.0);
  CHECK(h_tilde(100, 0, 1.7) == 0.0);
  const double value = h_tilde(1000000, 2e-6, std::log(2.0));
  CHECK(std::abs(value - (-2.0)) <= 1e-5);
  // p = 1 with a log-argument underflowing to zero.
  CHECK_THROWS_AS(h_tilde(10, 1.0, -800), DomainError);
}

TEST_CASE("sparse-limit error of h decays like 1/n") {
  for (const auto& [capacity, g] : std::vector<std::pair<double, double>>{
           {5.0, -2.0}, {5.0, 2.0}, {0.5, 1.0}}) {
    const double limit = (1 - std::exp(g)) * capacity;
    double prev_err = std::abs(h_tilde(100, capacity / 100, g) - limit);
    for (double n : {1e3, 1e4, 1e5}) {
      const double err = std::abs(h_tilde(static_cast<std::int64_t>(n), capacity / n, g) -
                                  limit);
      CHECK(err < prev_err);
      prev_err = err;
    }
    // Leading error term is capacity^2 expm1(g)^2 / (2n); allow 20% slack.
    const double k_case = 0.6 * capacity * capacity * std::expm1(g) * std::expm1(g);
    CHECK(prev_err <= k_case / 1e5);
  }
}

TEST_CASE("zero tilt reproduces the base sampler byte for byte") {
  const ProbPair law;
  const ModelParams p = make(0.7, 0.4, 0.2);
  const SpinnedGraph base = sample_graph(80, Kernel::constant(2), p, law, 31415);
  const SpinnedGraph tilted = sample_tilted_graph(80, Kernel::constant(2), p, law,
                                                  make_tilt(0, 0, 0, 0, 0), 31415);
  CHECK(graph_to_json(base) == graph_to_json(tilted));
}

TEST_CASE("strong vertex tilt drives the spin fraction") {
  const ProbPair law;
  const ModelParams p = make(0.2, 0, 0);
  const SpinnedGraph g = sample_tilted_graph(10000, Kernel::constant(1), p, law,
                                             make_tilt(0, 10, 0, 0, 0), 8,
                                             EdgeSampler::Block);
  std::int64_t plus = 0;
  for (const auto s : g.spins) plus += (s > 0);
  const double frac = static_cast<double>(plus) / 10000;
  const double target = std::exp(10.0) / (1 + std::exp(10.0));
  CHECK(std::abs(frac - target) <= 3 * std::sqrt(target * (1 - target) / 10000) + 1e-4);
}

TEST_CASE("strong negative edge tilt suppresses edges") {
  const ProbPair law;
  const SpinnedGraph g =
      sample_tilted_graph(400, Kernel::constant(3), make(0.5, 0, 0), law,
                          make_tilt(0, 0, -50, -50, -50), 9);
  CHECK(g.edges.size() <= 1);
}

TEST_CASE("log density forms agree and the vertex-only case is exact") {
  const ProbPair law;
  const ModelParams p = make(0.4, 0.25, 0.4);
  const Kernel kernel = Kernel::constant(2);
  for (int t = 0; t < 30; ++t) {
    SplitMix64 rng(derive_stream(77, t));
    const TiltSpec tilt =
        make_tilt(2 * rng.next_unit() - 1, 2 * rng.next_unit() - 1,
                  2 * rng.next_unit() - 1, 2 * rng.next_unit() - 1,
                  2 * rng.next_unit() - 1);
    const SpinnedGraph g =
        sample_tilted_graph(50, kernel, p, law, tilt, derive_stream(78, t));
    const RadonNikodymForms forms = radon_nikodym_forms(g, kernel, p, law, tilt);
    CHECK(std::abs(forms.direct - forms.empirical) <=
          1e-9 * std::max(1.0, std::abs(forms.direct)));
    CHECK_NOTHROW(radon_nikodym_log(g, kernel, p, law, tilt));
  }

  // Pure vertex tilt: the density reduces to n<L1, f> - n U.
  const TiltSpec vertex_only = make_tilt(-0.3, 0.8, 0, 0, 0);
  const SpinnedGraph g = sample_tilted_graph(60, kernel, p, law, vertex_only, 5);
  std::int64_t plus = 0;
  for (const auto s : g.spins) plus += (s > 0);
  const double u = tilted_spin_law(law, vertex_only).log_normalizer;
  const double expected =
      static_cast<double>(plus) * (0.8 - u) + static_cast<double>(60 - plus) * (-0.3 - u);
  CHECK(radon_nikodym_log(g, kernel, p, law, vertex_only) ==
        doctest::Approx(expected).epsilon(1e-12));

  const TiltSpec zero = make_tilt(0, 0, 0, 0, 0);
  CHECK(radon_nikodym_log(g, kernel, p, law, zero) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("log density rejects degenerate base probabilities") {
  const ProbPair law;
  const TiltSpec tilt = make_tilt(0, 0, 0.5, 0.5, 0.5);
  // Capped probability p = 1 on every pair.
  const SpinnedGraph dense = sample_graph(3, Kernel::constant(100), make(0.5, 0, 0), law, 1);
  CHECK_THROWS_AS(radon_nikodym_forms(dense, Kernel::constant(100), make(0.5, 0, 0), law, tilt),
                  DomainError);
  // p = 0 with an edge present is inconsistent.
  SpinnedGraph fake;
  fake.n = 3;
  fake.spins = {1, 1, -1};
  fake.edges = {{0, 1}};
  CHECK_THROWS_AS(radon_nikodym_forms(fake, Kernel::constant(0), make(0.5, 0, 0), law, tilt),
                  DomainError);
  // p = 0 without edges carries no edge information and is fine.
  fake.edges.clear();
  CHECK_NOTHROW(radon_nikodym_forms(fake, Kernel::constant(0), make(0.5, 0, 0), law, tilt));
}

TEST_CASE("importance sampling is unbiased against full enumeration at n = 4") {
  const std::int64_t n = 4;
  const ProbPair law;
  const ModelParams params = make(0.5, 0.1, -0.2);
  const Kernel kernel = Kernel::constant(2);
  const double p = edge_probability(kernel, n, 0, 0);  // 0.5 for every pair

  const std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs = {
      {0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
  auto statistic = [](const SpinnedGraph& g) {
    std::int64_t plus = 0;
    for (const auto s : g.spins) plus += (s > 0);
    return static_cast<double>((g.edges.size() + 1) * (plus + 1));
  };

  // Exact expectation under the base law by enumerating 2^4 spin assignments
  // and 2^6 edge subsets.
  double exact = 0;
  for (int spin_mask = 0; spin_mask < 16; ++spin_mask) {
    SpinnedGraph g;
    g.n = n;
    for (int u = 0; u < n; ++u)
      g.spins.push_back((spin_mask >> u) & 1 ? 1 : -1);
    const double spin_prob = 1.0 / 16.0;  // uniform law
    for (int edge_mask = 0; edge_mask < 64; ++edge_mask) {
      g.edges.clear();
      double edge_prob = 1;
      for (int e = 0; e < 6; ++e) {
        if ((edge_mask >> e) & 1) {
          g.edges.push_back(pairs[static_cast<std::size_t>(e)]);
          edge_prob *= p;
        } else {
          edge_prob *= 1 - p;
        }
      }
      exact += spin_prob * edge_prob * statistic(g);
    }
  }

  const TiltSpec tilt = make_tilt(0.3, -0.2, 0.2, -0.4, 0.5);
  const int samples = 200000;
  double sum = 0, sum_sq = 0;
  for (int s = 0; s < samples; ++s) {
    const SpinnedGraph g =
        sample_tilted_graph(n, kernel, params, law, tilt, derive_stream(4242, s));
    const double w = statistic(g) * std::exp(-radon_nikodym_log(g, kernel, params, law, tilt));
    sum += w;
    sum_sq += w * w;
  }
  const double mean = sum / samples;
  const double se = std::sqrt((sum_sq / samples - mean * mean) / samples);
  CHECK(std::abs(mean - exact) <= 3 * se);
}

TEST_CASE("importance sampling matches base sampling at n = 6") {
  const std::int64_t n = 6;
  const ProbPair law;
  const ModelParams params = make(0.5, 0.1, -0.2);
  const Kernel kernel = Kernel::constant(2);
  auto statistic = [](const SpinnedGraph& g) {
    std::int64_t plus = 0;
    for (const auto s : g.spins) plus += (s > 0);
    return static_cast<double>(g.edges.size()) + 0.5 * static_cast<double>(plus);
  };

  const int samples = 120000;
  double base_sum = 0, base_sq = 0;
  for (int s = 0; s < samples; ++s) {
    const SpinnedGraph g = sample_graph(n, kernel, params, law, derive_stream(10101, s));
    const double v = statistic(g);
    base_sum += v;
    base_sq += v * v;
  }
  const double base_mean = base_sum / samples;
  const double base_se = std::sqrt((base_sq / samples - base_mean * base_mean) / samples);

  const TiltSpec tilt = make_tilt(-0.4, 0.3, 0.3, 0.1, -0.5);
  double is_sum = 0, is_sq = 0;
  for (int s = 0; s < samples; ++s) {
    const SpinnedGraph g =
        sample_tilted_graph(n, kernel, params, law, tilt, derive_stream(20202, s));
    const double w = statistic(g) * std::exp(-radon_nikodym_log(g, kernel, params, law, tilt));
    is_sum += w;
    is_sq += w * w;
  }
  const double is_mean = is_sum / samples;
  const double is_se = std::sqrt((is_sq / samples - is_mean * is_mean) / samples);
  CHECK(std::abs(is_mean - base_mean) <= 3 * std::sqrt(base_se * base_se + is_se * is_se));
}

TEST_CASE("graph json round trip and validation") {
  const ProbPair law;
  const SpinnedGraph g = sample_graph(20, Kernel::constant(3), make(0.4, 0.1, 0.2), law, 55);
  const std::string text = graph_to_json(g);
  const SpinnedGraph back = graph_from_json(text);
  CHECK(back.n == g.n);
  CHECK(back.seed == g.seed);
  CHECK(back.spins == g.spins);
  CHECK(back.edges == g.edges);
  CHECK(graph_to_json(back) == text);

  CHECK_THROWS_AS(graph_from_json("not json"), ConfigError);
  CHECK_THROWS_AS(graph_from_json("{}"), ConfigError);
  CHECK_THROWS_AS(graph_from_json(R"({"n":0,"seed":0,"spins":[],"edges":[]})"),
                  ConfigError);
  CHECK_THROWS_AS(graph_from_json(R"({"n":2,"seed":0,"spins":[1],"edges":[]})"),
                  ConfigError);
  CHECK_THROWS_AS(graph_from_json(R"({"n":2,"seed":0,"spins":[1,2],"edges":[]})"),
                  ConfigError);
  CHECK_THROWS_AS(graph_from_json(R"({"n":2,"seed":0,"spins":[1,-1],"edges":[[1,0]]})"),
                  ConfigError);
  CHECK_THROWS_AS(graph_from_json(R"({"n":2,"seed":0,"spins":[1,-1],"edges":[[0,2]]})"),
                  ConfigError);
  CHECK_THROWS_AS(
      graph_from_json(R"({"n":3,"seed":0,"spins":[1,-1,1],"edges":[[0,1],[0,1]]})"),
      ConfigError);
  CHECK_THROWS_AS(
      graph_from_json(R"({"n":3,"seed":0,"spins":[1,-1,1],"edges":[[1,2],[0,1]]})"),
      ConfigError);
}

TEST_CASE("rng streams are stable and decorrelated") {
  SplitMix64 rng(0);
  const std::uint64_t first = rng.next();
  SplitMix64 again(0);
  CHECK(again.next() == first);
  CHECK(derive_stream(1, 2) != derive_stream(1, 3));
  CHECK(derive_stream(1, 2) != derive_stream(2, 2));
  for (int i = 0; i < 1000; ++i) {
    const double u = SplitMix64(derive_stream(9, i)).next_unit();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

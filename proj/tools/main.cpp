// Command-line front end: sweeps, sampling, pressure comparisons, critical
// point search, Glauber runs, rate-function evaluation, and the verification
// suites.  Exit codes: 0 success, 1 verification failure, 2 config error,
// 3 computation limit/error.
#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "sirg/errors.hpp"
#include "sirg/graph.hpp"
#include "sirg/graph_json.hpp"
#include "sirg/measures.hpp"
#include "sirg/model.hpp"
#include "sirg/partition.hpp"
#include "sirg/rng.hpp"
#include "sirg/thermo.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kVerifyFailure = 1;
constexpr int kConfigError = 2;
constexpr int kComputeError = 3;

std::string format_real(double v) {
  if (std::isnan(v)) return "NaN";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw sirg::ConfigError("cannot open output file: " + path);
  out << content;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw sirg::ConfigError("cannot open input file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<double> parse_reals(const std::string& text, std::size_t count,
                                const char* what) {
  std::vector<double> values;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    try {
      std::size_t used = 0;
      values.push_back(std::stod(item, &used));
      while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used])))
        ++used;
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw sirg::ConfigError(std::string(what) + ": cannot parse real '" + item + "'");
    }
  }
  if (values.size() != count)
    throw sirg::ConfigError(std::string(what) + ": expected " + std::to_string(count) +
                            " comma-separated reals, got " + std::to_string(values.size()));
  return values;
}

sirg::ProbPair parse_law(const std::string& text, const char* what) {
  const std::vector<double> v = parse_reals(text, 2, what);
  if (!(v[0] >= 0 && v[1] >= 0 && std::abs(v[0] + v[1] - 1.0) <= 1e-12))
    throw sirg::ConfigError(std::string(what) + ": entries must be >= 0 and sum to 1");
  sirg::ProbPair law;
  law.minus = v[0];
  law.plus = v[1];
  return law;
}

// All subcommand parameters; only the fields bound by the active subcommand
// are meaningful.
struct Config {
  std::string kernel_spec = "constant:1";
  double beta = 0;
  double beta_min = 0;
  double beta_max = 1;
  int beta_steps = 2;
  double b_plus = 0;
  std::string b_minus = "0";  // real literal or "solve"
  std::int64_t n = 10;
  std::uint64_t seed = 1;
  std::int64_t samples = 1000;
  std::int64_t sweeps = 10000;
  std::int64_t burn_in = 1000;
  std::string out;
  std::string format = "csv";
  std::string suite;
  double rn_tol = 1e-9;
  std::string graph_path;
  std::string ell = "0.5,0.5";
  std::string omega;  // empty = use ell
  std::string pi;     // empty = use the kernel-weighted product measure
};

double resolve_b_minus(const sirg::Kernel& kernel, double beta, double b_plus,
                       const std::string& spec) {
  if (spec == "solve") return sirg::solve_field(kernel, beta, b_plus);
  try {
    std::size_t used = 0;
    const double value = std::stod(spec, &used);
    if (used != spec.size()) throw std::invalid_argument(spec);
    return value;
  } catch (const std::exception&) {
    throw sirg::ConfigError("b-minus must be a real number or 'solve', got '" + spec + "'");
  }
}

sirg::ModelParams make_params(const sirg::Kernel& kernel, double beta,
                              const Config& cfg) {
  sirg::ModelParams params;
  params.beta = beta;
  params.field_plus = cfg.b_plus;
  params.field_minus = resolve_b_minus(kernel, beta, cfg.b_plus, cfg.b_minus);
  params.validate();
  return params;
}

// ---- subcommands -----------------------------------------------------------

int cmd_sweep(const Config& cfg) {
  if (cfg.beta_steps < 2) throw sirg::ConfigError("sweep needs --beta-steps >= 2");
  if (!(cfg.beta_min <= cfg.beta_max))
    throw sirg::ConfigError("sweep needs --beta-min <= --beta-max");
  if (cfg.beta_min < 0) throw sirg::ConfigError("sweep needs --beta-min >= 0");

  const sirg::Kernel kernel = sirg::Kernel::parse(cfg.kernel_spec);
  std::ostringstream csv;
  csv << "beta,phi,x_star,M,U,heat,chi,constraint_residual\n";
  for (int i = 0; i < cfg.beta_steps; ++i) {
    const double beta = cfg.beta_min + (cfg.beta_max - cfg.beta_min) *
                                           static_cast<double>(i) /
                                           (cfg.beta_steps - 1);
    const sirg::ModelParams params = make_params(kernel, beta, cfg);
    const sirg::ThermoPoint point = sirg::thermo_point(kernel, params);
    csv << format_real(point.beta) << ',' << format_real(point.phi) << ','
        << format_real(point.x_star) << ','
        << (point.magnetization ? format_real(*point.magnetization) : "NaN") << ','
        << format_real(point.internal_energy) << ','
        << format_real(point.specific_heat) << ','
        << format_real(point.susceptibility) << ','
        << format_real(point.constraint_residual) << '\n';
  }
  write_output(cfg.out, csv.str());
  return kOk;
}

int cmd_sample(const Config& cfg) {
  const sirg::Kernel kernel = sirg::Kernel::parse(cfg.kernel_spec);
  const sirg::ModelParams params = make_params(kernel, cfg.beta, cfg);
  const sirg::ProbPair law = parse_law(cfg.ell, "--ell");
  const sirg::SpinnedGraph graph =
      sirg::sample_graph(cfg.n, kernel, params, law, cfg.seed);
  write_output(cfg.out, sirg::graph_to_json(graph) + "\n");
  return kOk;
}

int cmd_pressure(const Config& cfg) {
  const sirg::Kernel kernel = sirg::Kernel::parse(cfg.kernel_spec);
  const sirg::ModelParams params = make_params(kernel, cfg.beta, cfg);
  const sirg::ProbPair law = parse_law(cfg.ell, "--ell");

  const double residual = sirg::energetic_preference_residual(kernel, params);
  if (std::abs(residual) > 1e-8)
    std::cerr << "warning: field constraint residual is " << format_real(residual)
              << "; the limit formula assumes it vanishes\n";

  const sirg::SpinnedGraph graph =
      sirg::sample_graph(cfg.n, kernel, params, law, cfg.seed);
  const double phi_n = sirg::pressure_finite(graph, params);
  const double phi_annealed =
      sirg::annealed_log_partition_exact(cfg.n, kernel, params);
  const double phi_limit = sirg::variational_pressure(kernel, params).phi;

  nlohmann::ordered_json j;
  j["n"] = cfg.n;
  j["beta"] = params.beta;
  j["b_plus"] = params.field_plus;
  j["b_minus"] = params.field_minus;
  j["phi_n"] = phi_n;
  j["phi_annealed_n"] = phi_annealed;
  j["phi_limit"] = phi_limit;
  write_output(cfg.out, j.dump() + "\n");
  return kOk;
}

int cmd_critical(const Config& cfg) {
  const sirg::Kernel kernel = sirg::Kernel::parse(cfg.kernel_spec);
  sirg::FieldPolicy policy;
  policy.b_plus = cfg.b_plus;
  if (cfg.b_minus == "solve") {
    policy.b_minus = std::nullopt;
  } else {
    policy.b_minus = resolve_b_minus(kernel, 0.0, cfg.b_plus, cfg.b_minus);
  }
  if (!(cfg.beta_max > 0)) throw sirg::ConfigError("critical needs --beta-max > 0");
  const double beta_c = sirg::critical_beta(kernel, policy, cfg.beta_max);

  nlohmann::ordered_json j;
  j["beta_c"] = beta_c;
  write_output(cfg.out, j.dump() + "\n");
  return kOk;
}

int cmd_mcmc(const Config& cfg) {
  if (cfg.graph_path.empty()) throw sirg::ConfigError("mcmc needs --graph <file>");
  const sirg::SpinnedGraph graph = sirg::graph_from_json(read_file(cfg.graph_path));
  const sirg::Kernel kernel = sirg::Kernel::parse(cfg.kernel_spec);
  const sirg::ModelParams params = make_params(kernel, cfg.beta, cfg);
  const sirg::GlauberResult result =
      sirg::glauber_sample(graph, params, cfg.sweeps, cfg.burn_in, cfg.seed);

  nlohmann::ordered_json j;
  j["n"] = graph.n;
  j["sweeps"] = cfg.sweeps;
  j["burn_in"] = cfg.burn_in;
  j["magnetization"] = result.magnetization;
  j["energy_per_site"] = result.energy_per_site;
  j["marginal_plus"] = result.marginal_plus;
  write_output(cfg.out, j.dump() + "\n");
  return kOk;
}

int cmd_rate(const Config& cfg) {
  const sirg::Kernel kernel = sirg::Kernel::parse(cfg.kernel_spec);
  const sirg::ModelParams params = make_params(kernel, cfg.beta, cfg);
  const sirg::EffectiveKernel ek = sirg::effective_kernel(kernel, params);
  const sirg::ProbPair ell = parse_law(cfg.ell, "--ell");
  const sirg::ProbPair omega = cfg.omega.empty() ? ell : parse_law(cfg.omega, "--omega");
  sirg::SymPair pi;
  if (cfg.pi.empty()) {
    pi = sirg::c_omega_omega(ek, omega);
  } else {
    const std::vector<double> v = parse_reals(cfg.pi, 3, "--pi");
    pi.mm = v[0];
    pi.pm = v[1];
    pi.pp = v[2];
  }
  const double rate = sirg::rate_function(omega, pi, ell, ek);

  nlohmann::ordered_json j;
  if (std::isfinite(rate)) {
    j["rate"] = rate;
  } else {
    j["rate"] = "infinity";
  }
  write_output(cfg.out, j.dump() + "\n");
  return kOk;
}

// ---- verification suites ---------------------------------------------------

struct SuiteResult {
  bool passed = true;
  std::string detail;

  void fail(const std::string& message) {
    if (passed) {
      passed = false;
      detail = message;
    }
  }
};

SuiteResult suite_radon_nikodym(std::uint64_t seed, double tol) {
  SuiteResult result;
  const sirg::Kernel kernel = sirg::Kernel::constant(2);
  sirg::ModelParams params;
  params.beta = 0.4;
  params.field_plus = 0.25;
  params.field_minus = 0.4;
  const sirg::ProbPair law;
  for (int t = 0; t < 20 && result.passed; ++t) {
    sirg::SplitMix64 rng(sirg::derive_stream(seed, 9000 + t));
    sirg::TiltSpec tilt;
    tilt.f_minus = 2 * rng.next_unit() - 1;
    tilt.f_plus = 2 * rng.next_unit() - 1;
    tilt.g_mm = 2 * rng.next_unit() - 1;
    tilt.g_pm = 2 * rng.next_unit() - 1;
    tilt.g_pp = 2 * rng.next_unit() - 1;
    const sirg::SpinnedGraph graph = sirg::sample_tilted_graph(
        50, kernel, params, law, tilt, sirg::derive_stream(seed, 100 + t));
    const sirg::RadonNikodymForms forms =
        sirg::radon_nikodym_forms(graph, kernel, params, law, tilt);
    const double rel = std::abs(forms.direct - forms.empirical) /
                       std::max(1.0, std::abs(forms.direct));
    if (!(rel <= tol))
      result.fail("graph " + std::to_string(t) + ": relative gap " + format_real(rel) +
                  " exceeds " + format_real(tol));
  }
  return result;
}

SuiteResult suite_rate_zero(std::uint64_t seed) {
  SuiteResult result;
  struct Case {
    sirg::Kernel kernel;
    double beta, b_plus, b_minus;
  };
  const std::vector<Case> cases = {
      {sirg::Kernel::constant(2), 0.3, 0.2, 0.1},
      {sirg::Kernel::block(1, 2, 3), std::log(2.0), 0.4, -0.2},
      {sirg::Kernel::product(1.5), 0.7, 0.3, -0.5},
  };
  const sirg::ProbPair ell;
  for (std::size_t i = 0; i < cases.size() && result.passed; ++i) {
    sirg::ModelParams params;
    params.beta = cases[i].beta;
    params.field_plus = cases[i].b_plus;
    params.field_minus = cases[i].b_minus;
    const sirg::EffectiveKernel ek = sirg::effective_kernel(cases[i].kernel, params);
    const sirg::SymPair mu = sirg::c_omega_omega(ek, ell);
    const double at_zero = sirg::rate_function(ell, mu, ell, ek);
    if (!(std::abs(at_zero) <= 1e-14))
      result.fail("case " + std::to_string(i) + ": rate at the minimizer is " +
                  format_real(at_zero));
    sirg::SplitMix64 rng(sirg::derive_stream(seed, 7000 + i));
    for (int t = 0; t < 100 && result.passed; ++t) {
      sirg::ProbPair omega;
      omega.plus = rng.next_unit();
      omega.minus = 1 - omega.plus;
      sirg::SymPair pi;
      pi.mm = 4 * rng.next_unit();
      pi.pm = 4 * rng.next_unit();
      pi.pp = 4 * rng.next_unit();
      const double value = sirg::rate_function(omega, pi, ell, ek);
      if (!(value >= 0))
        result.fail("case " + std::to_string(i) + ": negative rate " + format_real(value));
    }
  }
  return result;
}

SuiteResult suite_euler(std::uint64_t) {
  SuiteResult result;
  const double capacity = 2.0;
  const double g = std::log(2.0);
  const double limit = (1 - std::exp(g)) * capacity;
  std::vector<double> log_n, log_err;
  for (double n : {1e2, 1e3, 1e4, 1e5}) {
    const double value = sirg::h_tilde(static_cast<std::int64_t>(n), capacity / n, g);
    const double err = std::abs(value - limit);
    if (!(err > 0 && std::isfinite(err))) {
      result.fail("degenerate error term at n = " + format_real(n));
      return result;
    }
    log_n.push_back(std::log(n));
    log_err.push_back(std::log(err));
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double m = static_cast<double>(log_n.size());
  for (std::size_t i = 0; i < log_n.size(); ++i) {
    sx += log_n[i];
    sy += log_err[i];
    sxx += log_n[i] * log_n[i];
    sxy += log_n[i] * log_err[i];
  }
  const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  if (!(slope > -1.2 && slope < -0.8))
    result.fail("log-log error slope " + format_real(slope) + " is not close to -1");
  const double tail = std::abs(
      sirg::h_tilde(100000, capacity / 1e5, g) - limit);
  if (!(tail <= 1e-3))
    result.fail("error at n = 1e5 is " + format_real(tail));
  return result;
}

SuiteResult suite_detailed_balance(std::uint64_t) {
  SuiteResult result;
  sirg::ModelParams params;
  params.beta = 0.7;
  params.field_plus = 0.2;
  params.field_minus = 0.1;

  std::vector<sirg::SpinnedGraph> graphs(2);
  graphs[0].n = 3;
  graphs[0].spins = {1, -1, 1};
  graphs[0].edges = {{0, 1}, {1, 2}};
  graphs[1].n = 4;
  graphs[1].spins = {1, 1, -1, -1};
  graphs[1].edges = {{0, 1}, {0, 2}, {1, 3}, {2, 3}};

  for (std::size_t gi = 0; gi < graphs.size() && result.passed; ++gi) {
    const auto transition = sirg::glauber_transition_matrix(graphs[gi], params);
    const auto weights = sirg::boltzmann_distribution_exact(graphs[gi], params);
    const std::size_t states = weights.size();
    for (std::size_t a = 0; a < states && result.passed; ++a) {
      for (std::size_t b = 0; b < states; ++b) {
        const double flow_ab = weights[a] * transition[a][b];
        const double flow_ba = weights[b] * transition[b][a];
        const double gap = std::abs(flow_ab - flow_ba);
        if (gap > 1e-12 * std::max({flow_ab, flow_ba, 1e-300})) {
          result.fail("graph " + std::to_string(gi) + ": flow mismatch " +
                      format_real(gap) + " between states " + std::to_string(a) +
                      " and " + std::to_string(b));
          break;
        }
      }
    }
  }
  return result;
}

SuiteResult suite_mass(std::uint64_t seed) {
  SuiteResult result;
  const sirg::Kernel kernel = sirg::Kernel::constant(3);
  sirg::ModelParams params;
  params.beta = 0.5;
  params.field_plus = 0.1;
  params.field_minus = -0.1;
  const sirg::ProbPair law;
  for (int t = 0; t < 50 && result.passed; ++t) {
    const std::int64_t n = 2 + 4 * t;  // 2..198
    const sirg::SpinnedGraph graph =
        sirg::sample_graph(n, kernel, params, law, sirg::derive_stream(seed, 500 + t));
    const sirg::EmpiricalMeasures em = sirg::empirical_measures(graph);
    const std::int64_t oriented = em.l2.total_count();
    if (oriented != 2 * static_cast<std::int64_t>(graph.edges.size()))
      result.fail("n = " + std::to_string(n) + ": oriented count " +
                  std::to_string(oriented) + " != 2|E|");
  }
  return result;
}

int cmd_verify(const Config& cfg) {
  struct Suite {
    const char* name;
    std::function<SuiteResult()> run;
  };
  const std::vector<Suite> suites = {
      {"radon-nikodym", [&] { return suite_radon_nikodym(cfg.seed, cfg.rn_tol); }},
      {"rate-zero", [&] { return suite_rate_zero(cfg.seed); }},
      {"euler", [&] { return suite_euler(cfg.seed); }},
      {"detailed-balance", [&] { return suite_detailed_balance(cfg.seed); }},
      {"mass", [&] { return suite_mass(cfg.seed); }},
  };

  if (!cfg.suite.empty()) {
    const bool known = std::any_of(suites.begin(), suites.end(), [&](const Suite& s) {
      return cfg.suite == s.name;
    });
    if (!known) throw sirg::ConfigError("unknown suite: " + cfg.suite);
  }

  std::vector<std::string> failures;
  for (const Suite& suite : suites) {
    if (!cfg.suite.empty() && cfg.suite != suite.name) continue;
    SuiteResult result;
    try {
      result = suite.run();
    } catch (const std::exception& e) {
      result.fail(std::string("threw: ") + e.what());
    }
    if (result.passed) {
      std::cout << "PASS " << suite.name << "\n";
    } else {
      std::cout << "FAIL " << suite.name << ": " << result.detail << "\n";
      failures.push_back(suite.name);
    }
  }
  if (!failures.empty()) {
    std::cerr << "verification failed:";
    for (const std::string& name : failures) std::cerr << ' ' << name;
    std::cerr << "\n";
    return kVerifyFailure;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ising model on sparse spin-dependent random graphs"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Read defaults from a key=value file");

  Config cfg;

  auto add_kernel = [&](CLI::App* cmd) {
    cmd->add_option("--kernel", cfg.kernel_spec,
                    "Kernel spec: constant:v | block:c11,c1m1,cm1m1 | product:c");
  };
  auto add_fields = [&](CLI::App* cmd) {
    cmd->add_option("--b-plus", cfg.b_plus, "External field B(+1)");
    cmd->add_option("--b-minus", cfg.b_minus, "External field B(-1), or 'solve'");
  };
  auto add_seed = [&](CLI::App* cmd) {
    cmd->add_option("--seed", cfg.seed, "RNG seed")->envname("SIRG_SEED");
  };
  auto add_out = [&](CLI::App* cmd) {
    cmd->add_option("--out", cfg.out, "Output file (default: stdout)");
  };

  CLI::App* sweep = app.add_subcommand("sweep", "Temperature sweep to CSV");
  add_kernel(sweep);
  add_fields(sweep);
  add_out(sweep);
  sweep->add_option("--beta-min", cfg.beta_min, "Sweep start");
  sweep->add_option("--beta-max", cfg.beta_max, "Sweep end");
  sweep->add_option("--beta-steps", cfg.beta_steps, "Number of grid points (>= 2)");

  CLI::App* sample = app.add_subcommand("sample", "Sample a spinned graph to JSON");
  add_kernel(sample);
  add_fields(sample);
  add_seed(sample);
  add_out(sample);
  sample->add_option("--n", cfg.n, "Number of sites");
  sample->add_option("--beta", cfg.beta, "Inverse temperature");
  sample->add_option("--ell", cfg.ell, "Spin law 'l(-1),l(+1)'");

  CLI::App* pressure = app.add_subcommand(
      "pressure", "Compare finite-n, annealed, and limit pressures");
  add_kernel(pressure);
  add_fields(pressure);
  add_seed(pressure);
  add_out(pressure);
  pressure->add_option("--n", cfg.n, "Number of sites (exact caps apply)");
  pressure->add_option("--beta", cfg.beta, "Inverse temperature");
  pressure->add_option("--ell", cfg.ell, "Spin law 'l(-1),l(+1)'");

  CLI::App* critical = app.add_subcommand("critical", "Locate the critical beta");
  add_kernel(critical);
  add_fields(critical);
  add_out(critical);
  critical->add_option("--beta-max", cfg.beta_max, "Scan upper bound")
      ->default_val(5.0);

  CLI::App* mcmc = app.add_subcommand("mcmc", "Run Glauber dynamics on a graph");
  add_kernel(mcmc);
  add_fields(mcmc);
  add_seed(mcmc);
  add_out(mcmc);
  mcmc->add_option("--graph", cfg.graph_path, "Input graph JSON file")->required();
  mcmc->add_option("--beta", cfg.beta, "Inverse temperature");
  mcmc->add_option("--sweeps", cfg.sweeps, "Total sweeps");
  mcmc->add_option("--burn-in", cfg.burn_in, "Sweeps discarded before measuring");

  CLI::App* rate = app.add_subcommand("rate", "Evaluate the large-deviation rate");
  add_kernel(rate);
  add_fields(rate);
  add_out(rate);
  rate->add_option("--beta", cfg.beta, "Inverse temperature");
  rate->add_option("--ell", cfg.ell, "Spin law 'l(-1),l(+1)'");
  rate->add_option("--omega", cfg.omega, "Spin measure 'w(-1),w(+1)' (default: ell)");
  rate->add_option("--pi", cfg.pi,
                   "Pair measure 'mm,pm,pp' (default: kernel-weighted product)");

  CLI::App* verify = app.add_subcommand("verify", "Run the invariant suites");
  add_seed(verify);
  verify->add_option("--suite", cfg.suite,
                     "Run one suite: radon-nikodym | rate-zero | euler | "
                     "detailed-balance | mass");
  verify->add_option("--rn-tol", cfg.rn_tol,
                     "Relative tolerance for the Radon-Nikodym suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  }

  try {
    if (sweep->parsed()) return cmd_sweep(cfg);
    if (sample->parsed()) return cmd_sample(cfg);
    if (pressure->parsed()) return cmd_pressure(cfg);
    if (critical->parsed()) return cmd_critical(cfg);
    if (mcmc->parsed()) return cmd_mcmc(cfg);
    if (rate->parsed()) return cmd_rate(cfg);
    if (verify->parsed()) return cmd_verify(cfg);
    std::cerr << "config error: no subcommand selected\n";
    return kConfigError;
  } catch (const sirg::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const sirg::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kComputeError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kComputeError;
  }
}

#include "sirg/thermo.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include "sirg/errors.hpp"

namespace sirg {

namespace {

// Binary entropy with the 0 log 0 = 0 convention.
double entropy_term(double x) {
  double h = 0;
  if (x > 0) h -= x * std::log(x);
  if (x < 1) h -= (1 - x) * std::log(1 - x);
  return h;
}

struct BestPoint {
  double x = 0.5;
  double value = -std::numeric_limits<double>::infinity();

  void offer(double cand_x, double cand_value) {
    if (cand_value > value) {
      value = cand_value;
      x = cand_x;
    }
  }
};

// Golden-section refinement of a maximizer inside [lo, hi].
void golden_refine(const std::function<double(double)>& f, double lo, double hi,
                   BestPoint* best) {
  constexpr double kInvPhi = 0.6180339887498949;
  double a = lo, b = hi;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c), fd = f(d);
  best->offer(c, fc);
  best->offer(d, fd);
  while (b - a > 1e-10) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
      best->offer(c, fc);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
      best->offer(d, fd);
    }
  }
  const double mid = 0.5 * (a + b);
  best->offer(mid, f(mid));
}

// Generic scalar root finder on a bracket: bisection to machine-level width,
// then a short secant polish.  Mirrors the field solver's guarantees.
double bisect_root(const std::function<double(double)>& f, double lo, double hi,
                   const char* what) {
  if (!(lo < hi)) throw DomainError("root bracket must satisfy lo < hi");
  double flo = f(lo), fhi = f(hi);
  if (!std::isfinite(flo) || !std::isfinite(fhi))
    throw NoRoot(std::string(what) + ": residual is not finite on the bracket");
  if (flo == 0) return lo;
  if (fhi == 0) return hi;
  if ((flo < 0) == (fhi < 0))
    throw NoRoot(std::string(what) + ": no sign change on the bracket");

  double a = lo, b = hi, fa = flo, fb = fhi;
  for (int it = 0; it < 200 && (b - a) > 1e-15 * std::max(1.0, std::abs(a) + std::abs(b));
       ++it) {
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    if (fm == 0) return m;
    if ((fm < 0) == (fa < 0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
      fb = fm;
    }
  }
  double best_x = std::abs(fa) < std::abs(fb) ? a : b;
  double best_f = std::abs(fa) < std::abs(fb) ? fa : fb;
  double x0 = a, f0 = fa, x1 = b, f1 = fb;
  for (int it = 0; it < 16 && f1 != f0; ++it) {
    const double x2 = x1 - f1 * (x1 - x0) / (f1 - f0);
    if (!std::isfinite(x2) || x2 < lo || x2 > hi) break;
    const double f2 = f(x2);
    if (std::abs(f2) < std::abs(best_f)) {
      best_f = f2;
      best_x = x2;
    }
    x0 = x1;
    f0 = f1;
    x1 = x2;
    f1 = f2;
    if (f2 == 0) break;
  }
  if (!(std::abs(best_f) < 1e-12))
    throw NoRoot(std::string(what) + ": residual stayed at " + std::to_string(best_f));
  return best_x;
}

// B(1) such that the energetic-preference residual vanishes at fixed B(-1).
double solve_plus_field(const Kernel& kernel, double beta, double field_minus,
                        const Bracket& bracket) {
  auto residual = [&](double b_plus) {
    ModelParams p;
    p.beta = beta;
    p.field_plus = b_plus;
    p.field_minus = field_minus;
    return energetic_preference_residual(kernel, p);
  };
  return bisect_root(residual, bracket.lo, bracket.hi, "solve_plus_field");
}

// Pressure on the constraint manifold, parameterized by (beta, B(1)).
double phi_resolved_minus(const Kernel& kernel, double beta, double field_plus,
                          const Bracket& bracket) {
  ModelParams p;
  p.beta = beta;
  p.field_plus = field_plus;
  try {
    p.field_minus = solve_field(kernel, beta, field_plus, bracket);
  } catch (const NoRoot& e) {
    throw ConstraintLost(std::string("field re-solve failed: ") + e.what());
  }
  return variational_pressure(kernel, p).phi;
}

// Pressure on the constraint manifold, parameterized by (beta, B(-1)).
double phi_resolved_plus(const Kernel& kernel, double beta, double field_minus,
                         const Bracket& bracket) {
  ModelParams p;
  p.beta = beta;
  p.field_minus = field_minus;
  try {
    p.field_plus = solve_plus_field(kernel, beta, field_minus, bracket);
  } catch (const NoRoot& e) {
    throw ConstraintLost(std::string("field re-solve failed: ") + e.what());
  }
  return variational_pressure(kernel, p).phi;
}

// -d(phi)/dbeta along the manifold; one-sided at the boundary beta ~ 0.
double internal_energy_fd_at(const Kernel& kernel, double beta, double field_plus,
                             const Bracket& bracket) {
  const double h = 1e-4;
  auto phi = [&](double b) { return phi_resolved_minus(kernel, b, field_plus, bracket); };
  double dphi;
  if (beta >= h) {
    dphi = (phi(beta + h) - phi(beta - h)) / (2 * h);
  } else {
    dphi = (-3 * phi(beta) + 4 * phi(beta + h) - phi(beta + 2 * h)) / (2 * h);
  }
  return -dphi;
}

}  // namespace

VariationalCoeffs variational_coeffs(const EffectiveKernel& kernel, double beta) {
  VariationalCoeffs c;
  c.a1 = 0.5 * kernel.c_pp * std::expm1(beta);
  c.a2 = 0.5 * kernel.c_mm * std::expm1(beta);
  c.a3 = kernel.c_pm * std::expm1(-beta);
  return c;
}

double lambda_objective(double x, const VariationalCoeffs& coeffs,
                        const ModelParams& params) {
  if (!(x >= 0 && x <= 1))
    throw DomainError("lambda_objective needs x in [0, 1]");
  return entropy_term(x) + coeffs.a1 * x * x + coeffs.a2 * (1 - x) * (1 - x) +
         coeffs.a3 * x * (1 - x) + params.field_plus * x -
         params.field_minus * (1 - x);
}

VariationalResult variational_pressure(const Kernel& kernel, const ModelParams& params) {
  params.validate();
  const VariationalCoeffs coeffs = variational_coeffs(effective_kernel(kernel, params),
                                                      params.beta);
  auto f = [&](double x) { return lambda_objective(x, coeffs, params); };

  constexpr int kGridPoints = 2001;
  BestPoint best;
  int best_index = 0;
  for (int i = 0; i < kGridPoints; ++i) {
    const double x = static_cast<double>(i) / (kGridPoints - 1);
    const double v = f(x);
    if (v > best.value) best_index = i;
    best.offer(x, v);
  }
  const double lo = static_cast<double>(std::max(0, best_index - 1)) / (kGridPoints - 1);
  const double hi = static_cast<double>(std::min(kGridPoints - 1, best_index + 1)) /
                    (kGridPoints - 1);
  golden_refine(f, lo, hi, &best);

  // Tie rule: prefer the symmetric point whenever it attains the supremum.
  const double at_half = f(0.5);
  const double scale = std::max(1.0, std::abs(best.value));
  VariationalResult result;
  if (at_half >= best.value - 1e-13 * scale) {
    result.x_star = 0.5;
    result.phi = std::max(at_half, best.value);
  } else {
    result.x_star = best.x;
    result.phi = best.value;
  }
  return result;
}

double closed_form_pressure(const Kernel& kernel, const ModelParams& params) {
  params.validate();
  const EffectiveKernel ek = effective_kernel(kernel, params);
  return std::log(2.0) +
         0.25 * (std::expm1(params.beta) * ek.c_pp + std::expm1(-params.beta) * ek.c_pm) +
         0.25 * (3 * params.field_plus - params.field_minus);
}

SymPair stationarity_pair(double x, double beta, const EffectiveKernel& kernel) {
  if (!(x >= 0 && x <= 1)) throw DomainError("stationarity_pair needs x in [0, 1]");
  SymPair omega;
  omega.pp = kernel.c_pp * x * x;
  omega.pm = kernel.c_pm * x * (1 - x);
  omega.mm = kernel.c_mm * (1 - x) * (1 - x);
  SymPair pi;
  pi.pp = std::exp(beta) * omega.pp;
  pi.pm = std::exp(-beta) * omega.pm;
  pi.mm = std::exp(beta) * omega.mm;
  return pi;
}

std::optional<double> magnetization_analytic(const Kernel& kernel,
                                             const ModelParams& params) {
  params.validate();
  const EffectiveKernel ek = effective_kernel(kernel, params);
  const double eb = std::exp(params.beta);
  const double emb = std::exp(-params.beta);
  const double numer = eb * ek.c_pp - emb * ek.c_pm + std::expm1(params.beta) * ek.d_pp +
                       std::expm1(-params.beta) * ek.d_pm;
  const double denom = eb * (ek.c_pp - ek.c_mm) +
                       std::expm1(params.beta) * (ek.d_pp - ek.d_mm);
  if (std::abs(denom) < 1e-12) return std::nullopt;
  return 0.5 - numer / denom;
}

double internal_energy_analytic(const Kernel& kernel, const ModelParams& params) {
  params.validate();
  const EffectiveKernel ek = effective_kernel(kernel, params);
  return -0.25 * (ek.c_mm * std::exp(params.beta) - ek.c_pm * std::exp(-params.beta) +
                  std::expm1(-params.beta) * ek.d_pm + std::expm1(params.beta) * ek.d_mm);
}

double specific_heat_analytic(const Kernel& kernel, const ModelParams& params) {
  params.validate();
  const EffectiveKernel ek = effective_kernel(kernel, params);
  const double eb = std::exp(params.beta);
  const double emb = std::exp(-params.beta);
  const double bracket = ek.c_mm * eb + ek.c_pm * eb + eb * ek.d_mm - 2 * emb * ek.d_pm +
                         std::expm1(-params.beta) * ek.d_pm +
                         std::expm1(params.beta) * ek.d_mm + eb * ek.d_mm;
  return 0.25 * params.beta * params.beta * bracket;
}

double specific_heat_consistency_gap(const Kernel& kernel, const ModelParams& params) {
  params.validate();
  const double h = 1e-3;
  auto energy_at = [&](double beta) {
    ModelParams p = params;
    p.beta = beta;
    return internal_energy_analytic(kernel, p);
  };
  double du;
  if (params.beta >= h) {
    du = (energy_at(params.beta + h) - energy_at(params.beta - h)) / (2 * h);
  } else {
    du = (-3 * energy_at(params.beta) + 4 * energy_at(params.beta + h) -
          energy_at(params.beta + 2 * h)) /
         (2 * h);
  }
  const double from_derivative = -params.beta * params.beta * du;
  return specific_heat_analytic(kernel, params) - from_derivative;
}

FdObservables observables_fd(const Kernel& kernel, const ModelParams& params) {
  params.validate();
  const Bracket bracket;
  const double beta = params.beta;
  FdObservables out;

  out.internal_energy = internal_energy_fd_at(kernel, beta, params.field_plus, bracket);

  {
    const double h = 1e-3;
    auto energy = [&](double b) {
      return internal_energy_fd_at(kernel, b, params.field_plus, bracket);
    };
    double du;
    if (beta >= h) {
      du = (energy(beta + h) - energy(beta - h)) / (2 * h);
    } else {
      du = (-3 * energy(beta) + 4 * energy(beta + h) - energy(beta + 2 * h)) / (2 * h);
    }
    out.specific_heat = -beta * beta * du;
  }

  {
    const double h = 1e-4;
    const double d_plus = (phi_resolved_minus(kernel, beta, params.field_plus + h, bracket) -
                           phi_resolved_minus(kernel, beta, params.field_plus - h, bracket)) /
                          (2 * h);
    const double d_minus = (phi_resolved_plus(kernel, beta, params.field_minus + h, bracket) -
                            phi_resolved_plus(kernel, beta, params.field_minus - h, bracket)) /
                           (2 * h);
    out.magnetization = d_plus + d_minus;
  }

  {
    const double h = 1e-4;
    auto phi_at = [&](double b_plus, double b_minus) {
      ModelParams p = params;
      p.field_plus = b_plus;
      p.field_minus = b_minus;
      return variational_pressure(kernel, p).phi;
    };
    const double phi0 = phi_at(params.field_plus, params.field_minus);
    const double along_plus = (phi_at(params.field_plus + h, params.field_minus) - 2 * phi0 +
                               phi_at(params.field_plus - h, params.field_minus)) /
                              (h * h);
    const double along_minus = (phi_at(params.field_plus, params.field_minus + h) - 2 * phi0 +
                                phi_at(params.field_plus, params.field_minus - h)) /
                               (h * h);
    out.susceptibility = along_plus + along_minus;
  }

  return out;
}

double criticality_residual(const Kernel& kernel, const ModelParams& params) {
  params.validate();
  const EffectiveKernel ek = effective_kernel(kernel, params);
  return ek.c_pm - 0.5 * ek.c_pp - 0.5 * ek.c_mm;
}

double critical_beta(const Kernel& kernel, const FieldPolicy& policy, double beta_max) {
  if (!(beta_max > 0) || !std::isfinite(beta_max))
    throw DomainError("critical_beta needs beta_max > 0");

  auto params_at = [&](double beta) {
    ModelParams p;
    p.beta = beta;
    p.field_plus = policy.b_plus;
    if (policy.b_minus) {
      p.field_minus = *policy.b_minus;
    } else {
      try {
        p.field_minus = solve_field(kernel, beta, policy.b_plus, policy.bracket);
      } catch (const NoRoot& e) {
        throw NoCriticalPoint(std::string("field re-solve failed during the scan: ") +
                              e.what());
      }
    }
    return p;
  };
  // Convexity gauge at the symmetric point; negative means x = 1/2 is a local
  // maximum.  Identically -2 at beta = 0 because every coefficient vanishes.
  auto gauge = [&](double beta) {
    const ModelParams p = params_at(beta);
    const VariationalCoeffs c = variational_coeffs(effective_kernel(kernel, p), beta);
    return c.a1 + c.a2 - c.a3 - 2;
  };

  constexpr int kScanPoints = 512;
  double prev_beta = 0;
  double prev_gauge = -2;
  double root = -1;
  for (int j = 1; j <= kScanPoints; ++j) {
    const double b = beta_max * static_cast<double>(j) / kScanPoints;
    const double g = gauge(b);
    if (g == 0) {
      root = b;
      break;
    }
    if ((g < 0) != (prev_gauge < 0)) {
      double lo = prev_beta, hi = b;
      double flo = prev_gauge;
      while (hi - lo > 1e-10) {
        const double mid = 0.5 * (lo + hi);
        const double fm = gauge(mid);
        if (fm == 0) {
          lo = hi = mid;
          break;
        }
        if ((fm < 0) == (flo < 0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      root = 0.5 * (lo + hi);
      break;
    }
    prev_beta = b;
    prev_gauge = g;
  }
  if (root < 0)
    throw NoCriticalPoint("the symmetric point stays locally maximal up to beta_max");

  // Cross-check: the maximizer must actually leave 1/2 just above the root.
  const double probe_beta = root + std::max(1e-3, 0.01 * root);
  const VariationalResult probe = variational_pressure(kernel, params_at(probe_beta));
  if (std::abs(probe.x_star - 0.5) <= 1e-6)
    throw NoCriticalPoint("the maximizer does not leave the symmetric point above the root");
  return root;
}

ThermoPoint thermo_point(const Kernel& kernel, const ModelParams& params) {
  params.validate();
  ThermoPoint point;
  point.beta = params.beta;

  const VariationalResult vr = variational_pressure(kernel, params);
  point.phi = vr.phi;
  point.x_star = vr.x_star;
  point.constraint_residual = energetic_preference_residual(kernel, params);

  const Bracket bracket;
  point.internal_energy =
      internal_energy_fd_at(kernel, params.beta, params.field_plus, bracket);
  {
    const double h = 1e-3;
    auto energy = [&](double b) {
      return internal_energy_fd_at(kernel, b, params.field_plus, bracket);
    };
    double du;
    if (params.beta >= h) {
      du = (energy(params.beta + h) - energy(params.beta - h)) / (2 * h);
    } else {
      du = (-3 * energy(params.beta) + 4 * energy(params.beta + h) -
            energy(params.beta + 2 * h)) /
           (2 * h);
    }
    point.specific_heat = -params.beta * params.beta * du;
  }

  try {
    const double h = 1e-4;
    const double d_plus =
        (phi_resolved_minus(kernel, params.beta, params.field_plus + h, bracket) -
         phi_resolved_minus(kernel, params.beta, params.field_plus - h, bracket)) /
        (2 * h);
    const double d_minus =
        (phi_resolved_plus(kernel, params.beta, params.field_minus + h, bracket) -
         phi_resolved_plus(kernel, params.beta, params.field_minus - h, bracket)) /
        (2 * h);
    point.magnetization = d_plus + d_minus;
  } catch (const ConstraintLost&) {
    point.magnetization = std::nullopt;  // degenerate: field direction unresolvable
  }

  {
    const double h = 1e-4;
    auto phi_at = [&](double b_plus, double b_minus) {
      ModelParams p = params;
      p.field_plus = b_plus;
      p.field_minus = b_minus;
      return variational_pressure(kernel, p).phi;
    };
    const double phi0 = phi_at(params.field_plus, params.field_minus);
    const double along_plus = (phi_at(params.field_plus + h, params.field_minus) - 2 * phi0 +
                               phi_at(params.field_plus - h, params.field_minus)) /
                              (h * h);
    const double along_minus = (phi_at(params.field_plus, params.field_minus + h) - 2 * phi0 +
                                phi_at(params.field_plus, params.field_minus - h)) /
                               (h * h);
    point.susceptibility = along_plus + along_minus;
  }

  return point;
}

}  // namespace sirg

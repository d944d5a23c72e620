#pragma once

#include <array>
#include <functional>
#include <string>

#include "sirg/errors.hpp"

namespace sirg {

// Spins live in {-1, +1}.  Pair-valued data is stored (minus, plus).
inline int spin_index(int spin) { return spin > 0 ? 1 : 0; }

// A probability (or generic) pair indexed by spin value.
struct ProbPair {
  double minus = 0.5;
  double plus = 0.5;

  double at(int spin) const { return spin > 0 ? plus : minus; }
};

// Inverse temperature and external fields B(+1), B(-1).
struct ModelParams {
  double beta = 0.0;
  double field_plus = 0.0;   // B(+1)
  double field_minus = 0.0;  // B(-1)

  // Spin coordinates s(eta) = sqrt(beta) * B(eta) * eta at which two-argument
  // kernels are evaluated.
  double s_plus() const;
  double s_minus() const;

  void validate() const;  // beta >= 0, everything finite
};

// Symmetric nonnegative connection kernel C(x, y).  Built-in forms:
//   constant(lambda)          C = lambda everywhere
//   block(c_pp, c_pm, c_mm)   one weight per spin-pair class, coordinate-free
//   product(c)                C(x, y) = c * x * y
//   custom(f [, df])          arbitrary symmetric eval, optional analytic
//                             beta-derivative of the three effective entries
class Kernel {
 public:
  enum class Form { Constant, Block, Product, Custom };

  using EvalFn = std::function<double(double, double)>;
  // Analytic d/dbeta of the effective entries (d_pp, d_pm, d_mm) at params.
  using EntryDerivFn = std::function<std::array<double, 3>(const ModelParams&)>;

  static Kernel constant(double lambda);
  static Kernel block(double c_pp, double c_pm, double c_mm);
  static Kernel product(double scale);
  static Kernel custom(EvalFn eval, EntryDerivFn deriv = nullptr);

  Form form() const { return form_; }

  // Point evaluation.  Block kernels classify their arguments by sign
  // (x < 0 reads as the minus class); everything else evaluates literally.
  double eval(double x, double y) const;

  // The kernel with both arguments negated: K'(x, y) = K(-x, -y).  For block
  // kernels this swaps the diagonal entries.  Composing flipped() with a field
  // swap realizes the label-swap symmetry of the effective entries.
  Kernel flipped() const;

  // Grammar: "constant:l" | "block:c_pp,c_pm,c_mm" | "product:c".
  static Kernel parse(const std::string& spec);
  std::string describe() const;

  // Analytic entry derivative supplied at construction, or null.
  const EntryDerivFn& entry_deriv() const { return deriv_; }

 private:
  Kernel() = default;

  Form form_ = Form::Constant;
  double p0_ = 0, p1_ = 0, p2_ = 0;
  EvalFn eval_;
  EntryDerivFn deriv_;
};

// The three effective connection weights for the spin-pair classes
// (+,+), (-,+), (-,-), together with their beta-derivatives.
struct EffectiveKernel {
  double c_pp = 0, c_pm = 0, c_mm = 0;
  double d_pp = 0, d_pm = 0, d_mm = 0;

  double entry(int a, int b) const {
    if (a > 0 && b > 0) return c_pp;
    if (a < 0 && b < 0) return c_mm;
    return c_pm;
  }
  double deriv(int a, int b) const {
    if (a > 0 && b > 0) return d_pp;
    if (a < 0 && b < 0) return d_mm;
    return d_pm;
  }
};

// Restrict a kernel to its effective entries at the given parameters.
// Derivatives come from the analytic form when the kernel carries one
// (built-ins always do), otherwise from central finite differences with step
// 1e-6 * max(1, beta), one-sided at beta = 0.  Throws KernelInvalid if any
// entry is negative or non-finite.
EffectiveKernel effective_kernel(const Kernel& kernel, const ModelParams& params);

// Connection probability for one vertex pair: min(C(s_u, s_v) / n, 1).
double edge_probability(const Kernel& kernel, long long n, double s_u, double s_v);

// Residual of the energetic preference condition
//   (e^beta - 1) * (c_mm - c_pp) - 2 * (B(-1) + B(+1));
// zero means fields and kernel are matched.
double energetic_preference_residual(const Kernel& kernel, const ModelParams& params);

struct Bracket {
  double lo = -100.0;
  double hi = 100.0;
};

// Solve energetic_preference_residual = 0 for B(-1) at fixed (beta, B(+1)).
// Bisection plus secant polish; |residual| < 1e-12 at the returned root.
// Throws NoRoot if the bracket shows no sign change.
double solve_field(const Kernel& kernel, double beta, double field_plus,
                   Bracket bracket = {});

}  // namespace sirg

#include "sirg/model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>
#include <utility>
#include <vector>

namespace sirg {

double ModelParams::s_plus() const { return std::sqrt(beta) * field_plus; }
double ModelParams::s_minus() const { return -std::sqrt(beta) * field_minus; }

void ModelParams::validate() const {
  if (!(beta >= 0.0) || !std::isfinite(beta))
    throw DomainError("beta must be finite and >= 0");
  if (!std::isfinite(field_plus) || !std::isfinite(field_minus))
    throw DomainError("fields must be finite");
}

Kernel Kernel::constant(double lambda) {
  Kernel k;
  k.form_ = Form::Constant;
  k.p0_ = lambda;
  return k;
}

Kernel Kernel::block(double c_pp, double c_pm, double c_mm) {
  Kernel k;
  k.form_ = Form::Block;
  k.p0_ = c_pp;
  k.p1_ = c_pm;
  k.p2_ = c_mm;
  return k;
}

Kernel Kernel::product(double scale) {
  Kernel k;
  k.form_ = Form::Product;
  k.p0_ = scale;
  return k;
}

Kernel Kernel::custom(EvalFn eval, EntryDerivFn deriv) {
  Kernel k;
  k.form_ = Form::Custom;
  k.eval_ = std::move(eval);
  k.deriv_ = std::move(deriv);
  return k;
}

double Kernel::eval(double x, double y) const {
  switch (form_) {
    case Form::Constant:
      return p0_;
    case Form::Block:
      if (x < 0 && y < 0) return p2_;
      if (x < 0 || y < 0) return p1_;
      return p0_;
    case Form::Product:
      return p0_ * x * y;
    case Form::Custom:
      return eval_(x, y);
  }
  return 0.0;  // unreachable
}

Kernel Kernel::flipped() const {
  switch (form_) {
    case Form::Constant:
      return *this;
    case Form::Block:
      return block(p2_, p1_, p0_);
    case Form::Product:
      return *this;  // (-x)(-y) = xy
    case Form::Custom: {
      EvalFn f = eval_;
      return custom([f](double x, double y) { return f(-x, -y); });
    }
  }
  return *this;
}

Kernel Kernel::parse(const std::string& spec) {
  auto colon = spec.find(':');
  if (colon == std::string::npos)
    throw ConfigError("kernel spec needs the form name:args, got '" + spec + "'");
  const std::string name = spec.substr(0, colon);
  const std::string args = spec.substr(colon + 1);

  std::vector<double> vals;
  std::stringstream ss(args);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t used = 0;
      vals.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw ConfigError("bad kernel argument '" + tok + "' in '" + spec + "'");
    }
  }

  if (name == "constant" && vals.size() == 1) return constant(vals[0]);
  if (name == "block" && vals.size() == 3) return block(vals[0], vals[1], vals[2]);
  if (name == "product" && vals.size() == 1) return product(vals[0]);
  throw ConfigError("unknown kernel spec '" + spec + "'");
}

std::string Kernel::describe() const {
  std::ostringstream os;
  switch (form_) {
    case Form::Constant:
      os << "constant:" << p0_;
      break;
    case Form::Block:
      os << "block:" << p0_ << "," << p1_ << "," << p2_;
      break;
    case Form::Product:
      os << "product:" << p0_;
      break;
    case Form::Custom:
      os << "custom";
      break;
  }
  return os.str();
}

namespace {

struct RawEntries {
  double pp, pm, mm;
};

// Effective entries without the nonnegativity gate, as a function of beta.
// Used both for the final values and for finite-difference derivatives.
RawEntries raw_entries(const Kernel& kernel, const ModelParams& params) {
  switch (kernel.form()) {
    case Kernel::Form::Constant:
    case Kernel::Form::Block: {
      // Coordinate-free: one weight per spin-pair class.
      const double pp = kernel.eval(1.0, 1.0);
      const double pm = kernel.eval(-1.0, 1.0);
      const double mm = kernel.eval(-1.0, -1.0);
      return {pp, pm, mm};
    }
    default: {
      const double sp = params.s_plus();
      const double sm = params.s_minus();
      return {kernel.eval(sp, sp), kernel.eval(sm, sp), kernel.eval(sm, sm)};
    }
  }
}

void check_entry(double v, const char* which) {
  if (!std::isfinite(v) || v < 0.0) {
    std::ostringstream os;
    os << "effective kernel entry " << which << " = " << v
       << " (must be finite and >= 0)";
    throw KernelInvalid(os.str());
  }
}

}  // namespace

EffectiveKernel effective_kernel(const Kernel& kernel, const ModelParams& params) {
  params.validate();
  const RawEntries e = raw_entries(kernel, params);
  check_entry(e.pp, "c_pp");
  check_entry(e.pm, "c_pm");
  check_entry(e.mm, "c_mm");

  EffectiveKernel out;
  out.c_pp = e.pp;
  out.c_pm = e.pm;
  out.c_mm = e.mm;

  switch (kernel.form()) {
    case Kernel::Form::Constant:
    case Kernel::Form::Block:
      break;  // class weights do not move with beta
    case Kernel::Form::Product: {
      // Entries are scale * (coordinate product), each proportional to beta.
      const double bp = params.field_plus;
      const double bm = params.field_minus;
      const double scale = kernel.eval(1.0, 1.0);
      out.d_pp = scale * bp * bp;
      out.d_pm = -scale * bm * bp;
      out.d_mm = scale * bm * bm;
      break;
    }
    case Kernel::Form::Custom:
      break;  // handled below
  }

  if (kernel.form() == Kernel::Form::Custom) {
    if (kernel.entry_deriv()) {
      const std::array<double, 3> d = kernel.entry_deriv()(params);
      out.d_pp = d[0];
      out.d_pm = d[1];
      out.d_mm = d[2];
      return out;
    }
    const double h = 1e-6 * std::max(1.0, params.beta);
    auto at = [&](double beta) {
      ModelParams p = params;
      p.beta = beta;
      return raw_entries(kernel, p);
    };
    if (params.beta >= h) {
      const RawEntries up = at(params.beta + h);
      const RawEntries dn = at(params.beta - h);
      out.d_pp = (up.pp - dn.pp) / (2 * h);
      out.d_pm = (up.pm - dn.pm) / (2 * h);
      out.d_mm = (up.mm - dn.mm) / (2 * h);
    } else {
      const RawEntries up = at(params.beta + h);
      out.d_pp = (up.pp - e.pp) / h;
      out.d_pm = (up.pm - e.pm) / h;
      out.d_mm = (up.mm - e.mm) / h;
    }
  }
  return out;
}

double edge_probability(const Kernel& kernel, long long n, double s_u, double s_v) {
  if (n < 1) throw DomainError("edge_probability needs n >= 1");
  const double v = kernel.eval(s_u, s_v);
  if (!std::isfinite(v) || v < 0.0) {
    std::ostringstream os;
    os << "kernel value " << v << " at (" << s_u << ", " << s_v << ")";
    throw KernelInvalid(os.str());
  }
  return std::min(v / static_cast<double>(n), 1.0);
}

double energetic_preference_residual(const Kernel& kernel, const ModelParams& params) {
  const EffectiveKernel ek = effective_kernel(kernel, params);
  return std::expm1(params.beta) * (ek.c_mm - ek.c_pp) -
         2.0 * (params.field_minus + params.field_plus);
}

double solve_field(const Kernel& kernel, double beta, double field_plus,
                   Bracket bracket) {
  auto residual = [&](double field_minus) {
    ModelParams p{beta, field_plus, field_minus};
    return energetic_preference_residual(kernel, p);
  };

  double lo = bracket.lo, hi = bracket.hi;
  double flo = residual(lo), fhi = residual(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (std::signbit(flo) == std::signbit(fhi))
    throw NoRoot("no sign change of the field residual in the bracket");

  // Bisect to a tight interval, then polish with secant steps.
  for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(lo)); ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fmid = residual(mid);
    if (fmid == 0.0) return mid;
    if (std::signbit(fmid) == std::signbit(flo)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
      fhi = fmid;
    }
  }

  double best = std::abs(flo) < std::abs(fhi) ? lo : hi;
  double fbest = residual(best);
  double x0 = lo, f0 = flo, x1 = hi, f1 = fhi;
  for (int it = 0; it < 16 && f1 != f0; ++it) {
    const double x2 = x1 - f1 * (x1 - x0) / (f1 - f0);
    if (!std::isfinite(x2)) break;
    const double f2 = residual(x2);
    x0 = x1;
    f0 = f1;
    x1 = x2;
    f1 = f2;
    if (std::abs(f2) < std::abs(fbest)) {
      best = x2;
      fbest = f2;
    }
    if (f2 == 0.0) break;
  }

  if (std::abs(fbest) >= 1e-12)
    throw NoRoot("field residual tolerance 1e-12 not reached");
  return best;
}

}  // namespace sirg

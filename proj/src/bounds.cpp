#include "bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "constants.hpp"
#include "error.hpp"
#include "specfun.hpp"

namespace ltb {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = std::numbers::pi;
const double kSqrt2Pi = std::sqrt(2.0 * kPi);

double phi_one_floor() { return specfun::std_normal_cdf(1.0) - 0.5; }

ConstantBound make(BoundTarget target, BoundKind kind, const BoundParams& params, double value,
                   std::optional<double> witness, std::string formula) {
  return {target, kind, params, value, witness, std::move(formula)};
}

void check_p(double p) {
  if (!(p > 0.5 && p < 1.0)) {
    std::ostringstream os;
    os << "p must lie in (1/2, 1), got " << p;
    throw DomainError(os.str());
  }
}

}  // namespace

const char* bound_target_name(BoundTarget target) noexcept {
  switch (target) {
    case BoundTarget::AE_Esseen_AEX_upper: return "AE_Esseen_AEX_upper";
    case BoundTarget::AE_Rozovskii_AEX_upper: return "AE_Rozovskii_AEX_upper";
    case BoundTarget::C_E_lower: return "C_E_lower";
    case BoundTarget::C_R_lower: return "C_R_lower";
    case BoundTarget::A_E_lower: return "A_E_lower";
    case BoundTarget::A_R_lower: return "A_R_lower";
    case BoundTarget::C_E_g1_lower: return "C_E_g1_lower";
    case BoundTarget::C_R_g1_lower: return "C_R_g1_lower";
    case BoundTarget::ABE_g0_Esseen: return "ABE_g0_Esseen";
    case BoundTarget::ABE_g0_Rozovskii: return "ABE_g0_Rozovskii";
    case BoundTarget::LowAEX: return "LowAEX";
    case BoundTarget::CondUpAEX_g0: return "CondUpAEX_g0";
    case BoundTarget::CondUpAEX_g1: return "CondUpAEX_g1";
    case BoundTarget::AEX_g0_Esseen: return "AEX_g0_Esseen";
    case BoundTarget::AEX_g0_Rozovskii: return "AEX_g0_Rozovskii";
  }
  return "unknown";
}

const char* bound_kind_name(BoundKind kind) noexcept {
  return kind == BoundKind::Upper ? "upper" : "lower";
}

void BoundParams::validate() const {
  if (!(epsilon > 0.0) || !(gamma > 0.0)) {
    std::ostringstream os;
    os << "epsilon and gamma must be positive (inf allowed), got epsilon=" << epsilon
       << ", gamma=" << gamma;
    throw DomainError(os.str());
  }
}

void Optimizer1D::validate() const {
  if (grid_points < 100 || refine_iters < 0 || !(clamp_delta > 0.0 && clamp_delta < 0.25)) {
    throw DomainError("optimizer requires grid_points >= 100, refine_iters >= 0, 0 < clamp_delta < 1/4");
  }
}

PExtremum sup_over_p(const std::function<double(double)>& f, const Optimizer1D& opt) {
  opt.validate();
  const double lo = 0.5 + opt.clamp_delta;
  const double hi = 1.0 - opt.clamp_delta;
  const int n = opt.grid_points;
  const auto eval = [&](double p) {
    const double v = f(p);
    if (!std::isfinite(v)) {
      std::ostringstream os;
      os.precision(17);
      os << "objective is not finite at p=" << p << " (value " << v << ")";
      throw DomainError(os.str());
    }
    return v;
  };
  const auto grid = [&](int i) { return lo + (hi - lo) * i / (n - 1); };
  int best_i = 0;
  double best_v = eval(grid(0));
  for (int i = 1; i < n; ++i) {
    const double v = eval(grid(i));
    if (v > best_v) {
      best_v = v;
      best_i = i;
    }
  }
  const double a = grid(std::max(best_i - 1, 0));
  const double b = grid(std::min(best_i + 1, n - 1));
  const auto refined = specfun::golden_section_max(eval, a, b, opt.refine_iters);
  if (refined.value > best_v) return {refined.x, refined.value};
  return {grid(best_i), best_v};
}

ConstantBound aex_upper_esseen(const BoundParams& params) {
  params.validate();
  const auto& c = constants();
  const double eps = params.epsilon;
  const double gamma = params.gamma;
  const double coef = std::isinf(gamma)
                          ? std::sqrt(c.kappa / 3.0)
                          : std::sqrt(2.0 * (6.0 * c.kappa * gamma * gamma + 1.0)) / (6.0 * gamma);
  const double head = 4.0 / kSqrt2Pi;
  double value;
  if (std::isinf(eps)) {
    value = head + coef * (std::sqrt(kPi) / 2.0) / kPi;
  } else {
    const double t = t_thresholds(gamma).t_gamma;
    const double x = t * t / (2.0 * eps * eps);
    value = head + (c.kappa / eps * specfun::lower_gamma(1.0, x) +
                    eps / 12.0 * specfun::lower_gamma(2.0, x) +
                    coef * specfun::upper_gamma(1.5, x)) / kPi;
  }
  return make(BoundTarget::AE_Esseen_AEX_upper, BoundKind::Upper, params, value, std::nullopt,
              "incomplete-gamma upper bound (Esseen type)");
}

ConstantBound aex_upper_rozovskii(const BoundParams& params) {
  params.validate();
  const auto& c = constants();
  const double eps = params.epsilon;
  const double gamma = params.gamma;
  double value = kInf;
  if (std::isfinite(eps)) {
    const TGammaTriple t = t_thresholds(gamma);
    const double x1 = t.t1_gamma * t.t1_gamma / (2.0 * eps * eps);
    const double x2 = t.t2_gamma * t.t2_gamma / (2.0 * eps * eps);
    const double third = std::isinf(gamma) ? 0.0 : std::numbers::sqrt2 / (6.0 * gamma);
    value = 4.0 / kSqrt2Pi +
            (c.kappa / eps * specfun::lower_gamma(1.0, x1) +
             eps / 12.0 * specfun::lower_gamma(2.0, x1) +
             eps / 6.0 * specfun::upper_gamma(2.0, x2) +
             third * (std::sqrt(kPi) / 2.0 - specfun::lower_gamma(1.5, x1) -
                      specfun::upper_gamma(1.5, x2))) / kPi;
  }
  return make(BoundTarget::AE_Rozovskii_AEX_upper, BoundKind::Upper, params, value,
              std::nullopt, "incomplete-gamma upper bound (Rozovskii type)");
}

const char* k_function_name(KFunction which) noexcept {
  switch (which) {
    case KFunction::E0: return "K_E0";
    case KFunction::R0: return "K_R0";
    case KFunction::EStar: return "K_Estar";
    case KFunction::RStar: return "K_Rstar";
    case KFunction::E1: return "K_E1";
    case KFunction::R1: return "K_R1";
  }
  return "K";
}

double k_function(KFunction which, double p, const BoundParams& params) {
  params.validate();
  check_p(p);
  const double q = 1.0 - p;
  const double eps = params.epsilon;
  const double gamma = params.gamma;
  const double delta = delta1(p);
  const double sq = std::sqrt(q / p);
  const double a3 = std::sqrt(q * q * q / p);
  const double spq = std::sqrt(p * q);
  const double big = std::sqrt(p * p * p / q);
  const double w = std::isinf(eps) ? 0.0 : gamma / eps;

  if (eps <= 1.0) {
    const bool inner = p <= 1.0 / (eps * eps + 1.0);
    switch (which) {
      case KFunction::E0:
      case KFunction::EStar:
        return inner ? delta / eps : delta / std::max(sq, gamma * a3 + eps * p);
      case KFunction::R0:
      case KFunction::RStar:
        return inner ? delta / eps : delta / (gamma * a3 + std::max(sq, eps * p));
      case KFunction::E1:
        return inner ? delta : delta / std::max(1.0, gamma * q + p);
      case KFunction::R1:
        return inner ? delta : delta / (1.0 + w * a3);
    }
  }
  // eps > 1: split at p = eps^2/(eps^2+1), which is 1 for eps = inf.
  const bool upper = std::isfinite(eps) && p >= eps * eps / (eps * eps + 1.0);
  switch (which) {
    case KFunction::E0: {
      // Below the split the large atom lies inside (1, eps) and contributes
      // gamma (p-q)/p to the n = 1 fraction.
      double denom = std::max(sq, gamma * a3 + p);
      if (!upper) denom = std::max(denom, gamma * (p - q) / p);
      return delta / denom;
    }
    case KFunction::EStar:
      return upper ? delta / std::max(sq, gamma * a3 + eps * p)
                   : delta * spq / std::max({q, gamma * q * q + p * p, gamma * (p - q)});
    case KFunction::R0:
      return upper ? delta / (w * a3 + std::max(sq, p))
                   : delta / (w * (p - q) / spq + std::max(sq, p));
    case KFunction::RStar:
      return upper ? delta / (gamma * a3 + std::max(sq, eps * p))
                   : delta / (gamma * (p - q) / spq + std::max(sq, big));
    case KFunction::E1:
      return upper ? delta / std::max({1.0, gamma * q + p, gamma * std::pow(q, 1.5) / std::sqrt(p) + p * eps})
                   : delta / std::max({1.0, gamma * q + p, (gamma * q * q + p * p) / spq,
                                       gamma * (p - q) / spq});
    case KFunction::R1:
      return upper ? delta / (gamma * a3 + std::max(eps * p, 1.0))
                   : delta / (gamma * (p - q) / spq + std::max(big, 1.0));
  }
  throw DomainError("unknown K function");
}

std::vector<ConstantBound> exact_constant_lower_bounds(const BoundParams& params,
                                                       const Optimizer1D& opt) {
  params.validate();
  std::vector<ConstantBound> out;
  const double floor_value = phi_one_floor() / std::min(1.0, params.epsilon);
  for (BoundTarget t : {BoundTarget::C_E_lower, BoundTarget::C_R_lower, BoundTarget::A_E_lower,
                        BoundTarget::A_R_lower}) {
    out.push_back(make(t, BoundKind::Lower, params, floor_value, std::nullopt,
                       "(Phi(1)-1/2)/min(1,eps), two-point law at p=1/2"));
  }
  for (BoundTarget t : {BoundTarget::C_E_g1_lower, BoundTarget::C_R_g1_lower}) {
    out.push_back(make(t, BoundKind::Lower, params, phi_one_floor(), std::nullopt,
                       "Phi(1)-1/2, two-point law at p=1/2"));
  }
  const auto sup_k = [&](BoundTarget target, KFunction which) {
    const PExtremum e =
        sup_over_p([&](double p) { return k_function(which, p, params); }, opt);
    out.push_back(make(target, BoundKind::Lower, params, e.value, e.p,
                       std::string("sup_p ") + k_function_name(which)));
  };
  sup_k(BoundTarget::C_E_lower, KFunction::E0);
  sup_k(BoundTarget::C_R_lower, KFunction::R0);
  if (params.epsilon > 1.0) {
    sup_k(BoundTarget::A_E_lower, KFunction::EStar);
    sup_k(BoundTarget::A_R_lower, KFunction::RStar);
  }
  sup_k(BoundTarget::C_E_g1_lower, KFunction::E1);
  sup_k(BoundTarget::C_R_g1_lower, KFunction::R1);
  return out;
}

ConstantBound abe_lower_esseen(double gamma, const Optimizer1D& opt) {
  if (!(gamma > 0.0) || std::isinf(gamma)) {
    std::ostringstream os;
    os << "abe_lower_esseen: gamma must be positive and finite, got " << gamma;
    throw DomainError(os.str());
  }
  const PExtremum e = sup_over_p(
      [gamma](double p) {
        const double q = 1.0 - p;
        return (p + 1.0) /
               (3.0 * kSqrt2Pi * std::max({q, gamma * q * q + p * p, gamma * (p - q)}));
      },
      opt);
  return make(BoundTarget::ABE_g0_Esseen, BoundKind::Lower, {kInf, gamma}, e.value, e.p,
              "sup_p (p+1)/(3 sqrt(2pi) max{q, gamma q^2+p^2, gamma(p-q)})");
}

ConstantBound abe_lower_rozovskii(const BoundParams& params) {
  params.validate();
  // a = gamma/max(eps, 1); inf/inf is resolved to the smaller (outer) branch.
  const double a = std::isinf(params.gamma) ? kInf : params.gamma / std::max(params.epsilon, 1.0);
  const double s5 = std::sqrt(5.0);
  const double value = a < 2.0 / 3.0
                           ? (1.0 + s5) / (3.0 * kSqrt2Pi * (2.0 * a * (s5 - 2.0) + 3.0 - s5))
                           : 1.0 / kSqrt2Pi;
  return make(BoundTarget::ABE_g0_Rozovskii, BoundKind::Lower, params, value, std::nullopt,
              a < 2.0 / 3.0 ? "(1+sqrt5)/(3 sqrt(2pi)(2a(sqrt5-2)+3-sqrt5)), a=gamma/max(eps,1)"
                            : "1/sqrt(2pi), a=gamma/max(eps,1) >= 2/3");
}

AlphaStar alpha_star() {
  const auto f = [](double a) { return std::sqrt(a) * specfun::bessel_i0_scaled(a); };
  const auto e = specfun::golden_section_max(f, 0.05, 5.0, 200);
  return {e.x, e.value};
}

std::vector<ConstantBound> asymptotic_lower_bounds(const BoundParams& params) {
  params.validate();
  std::vector<ConstantBound> out;
  out.push_back(make(BoundTarget::LowAEX, BoundKind::Lower, params, 1.0 / (2.0 * kSqrt2Pi),
                     std::nullopt, "1/(2 sqrt(2pi))"));
  out.push_back(make(BoundTarget::CondUpAEX_g0, BoundKind::Lower, params,
                     1.0 / (2.0 * std::min(params.epsilon, 1.0)), std::nullopt,
                     "1/(2 min(eps,1))"));
  const double eps = params.epsilon;
  double value;
  std::string formula;
  if (eps <= 1.0) {
    value = 0.5;
    formula = "1/2";
  } else {
    const AlphaStar star = alpha_star();
    const double alpha = 1.0 / (eps * eps);
    if (alpha >= star.alpha) {
      value = 0.5 * std::sqrt(alpha) * specfun::bessel_i0_scaled(alpha);
      formula = "f(1/eps^2)/2, f(a)=sqrt(a) exp(-a) I0(a)";
    } else {
      value = 0.5 * star.value;
      formula = "f(alpha*)/2, f(a)=sqrt(a) exp(-a) I0(a)";
    }
  }
  out.push_back(make(BoundTarget::CondUpAEX_g1, BoundKind::Lower, params, value, std::nullopt,
                     formula));
  return out;
}

double gamma0() {
  static const double cached = [] {
    const double target = 1.0 / (2.0 * kSqrt2Pi);
    specfun::Tolerance tol;
    tol.abs_tol = 1e-12;
    return specfun::find_root(
        [target](double g) { return abe_lower_esseen(g).value - target; }, {1.0, 100.0}, tol);
  }();
  return cached;
}

AexTwoSided aex_two_sided(const BoundParams& params) {
  params.validate();
  AexTwoSided out;
  const double g = std::min(params.gamma, gamma0());
  ConstantBound ess = abe_lower_esseen(g);
  ess.target = BoundTarget::AEX_g0_Esseen;
  ess.params = params;
  ess.formula = "ABE lower bound at min(gamma, gamma0)";
  out.esseen = {ess, aex_upper_esseen(params)};
  ConstantBound roz = abe_lower_rozovskii(params);
  roz.target = BoundTarget::AEX_g0_Rozovskii;
  out.rozovskii = {roz, aex_upper_rozovskii(params)};
  return out;
}

std::vector<BoundParams> aex_esseen_table_cells() {
  const double gs = constants().gamma_star;
  return {{0.6, 0.3},   {1.21, 0.2},  {2.06, 0.2}, {kInf, 0.2}, {1.48, 0.4},  {kInf, 0.4},
          {1.89, gs},   {2.03, gs},   {kInf, gs},  {1.0, gs},   {1.0, 0.67},  {1.0, kInf},
          {2.24, 1.0},  {kInf, 1.0},  {3.07, kInf}, {3.2, 5.0}, {3.28, 4.0},  {4.0, 2.4},
          {5.0, 2.06},  {5.37, 2.0},  {kInf, 1.83}, {kInf, kInf}};
}

std::vector<BoundParams> aex_rozovskii_table_cells() {
  const double gs = constants().gamma_star;
  return {{1.21, 0.2}, {1.89, 0.2}, {2.77, 0.2}, {5.39, 0.2}, {1.41, 0.4}, {1.76, 0.4},
          {1.99, 0.4}, {2.63, 0.4}, {0.5, gs},   {1.0, gs},   {1.52, gs},  {1.89, gs},
          {1.99, gs},  {2.12, gs},  {3.0, gs},   {5.0, gs}};
}

std::vector<double> abe_table_gammas() {
  return {0.1, 0.2, 0.4, 0.56, 1.0, 1.5, 2.0, 3.0, 4.0, 5.0};
}

const std::vector<ReferenceCell>& reference_table(ReferenceTable which) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  static const std::vector<ReferenceCell> esseen = {
      {1.21, 0.2, 2.8904, false, false, false},  {1.24, 0.2, 2.8900, false, false, false},
      {kInf, 0.2, 2.8846, false, false, false},  {1.76, 0.4, 2.7360, false, false, false},
      {5.94, 0.4, 2.7300, false, false, false},  {kInf, 0.4, 2.7299, false, false, false},
      {1.0, nan, 2.7367, false, true, false},    {1.87, nan, 2.6999, false, true, false},
      {kInf, nan, 2.6919, false, true, false},   {1.0, 0.72, 2.7298, false, false, false},
      {1.0, kInf, 2.7286, false, false, false},  {4.35, 1.0, 2.6600, false, false, false},
      {kInf, 1.0, 2.6588, false, false, false},  {kInf, 0.97, 2.6599, false, false, false},
      {2.56, kInf, 2.6500, false, false, false}, {2.62, 5.0, 2.6500, false, false, false},
      {2.65, 4.0, 2.6500, false, false, false},  {2.74, 3.0, 2.6500, false, false, false},
      {3.13, 2.0, 2.6500, false, false, false},  {4.0, 1.62, 2.6500, false, false, false},
      {5.37, 1.5, 2.6500, false, false, false},  {kInf, 1.43, 2.6500, false, false, false},
      {kInf, kInf, 2.6409, false, false, false}, {0.0, nan, kInf, true, false, true},
  };
  static const std::vector<ReferenceCell> rozovskii = {
      {1.21, 0.2, 2.8700, false, false, false}, {5.39, 0.2, 2.8635, false, false, false},
      {1.76, 0.4, 2.6999, false, false, false}, {2.63, 0.4, 2.6933, false, false, false},
      {0.5, nan, 3.0396, false, true, false},   {1.0, nan, 2.7286, false, true, false},
      {1.99, nan, 2.6600, false, true, false},  {2.12, nan, 2.6593, false, true, false},
      {3.0, nan, 2.6769, false, true, false},   {5.0, nan, 2.7562, false, true, false},
      {0.0, nan, kInf, true, false, true},
  };
  return which == ReferenceTable::EsseenA ? esseen : rozovskii;
}

std::optional<double> reference_lookup(ReferenceTable which, double epsilon, double gamma) {
  const double gs = constants().gamma_star;
  for (const ReferenceCell& cell : reference_table(which)) {
    if (cell.epsilon_zero_plus) continue;
    if (cell.epsilon != epsilon) continue;
    const bool gamma_match = cell.gamma_is_star ? std::fabs(gamma - gs) <= 1e-9 * gs
                                                : cell.gamma == gamma;
    if (gamma_match) return cell.value;
  }
  return std::nullopt;
}

}  // namespace ltb

#include "constants.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "error.hpp"

namespace ltb {

using specfun::std_normal_cdf;

namespace {

void check_open_unit(double p, const char* who) {
  if (!(p > 0.0 && p < 1.0)) {
    std::ostringstream os;
    os << who << ": p must lie in (0, 1), got " << p;
    throw DomainError(os.str());
  }
}

}  // namespace

Constants compute_constants(const specfun::Tolerance& tol) {
  using std::cos;
  using std::sin;
  constexpr double pi = std::numbers::pi;
  Constants c{};

  const auto trig = [](double x) {
    return 8.0 * (cos(x) - 1.0) + 8.0 * x * sin(x) - 4.0 * x * x * cos(x) -
           x * x * x * sin(x);
  };
  c.x0 = specfun::find_root(trig, {pi, 2.0 * pi}, tol);
  const double x = c.x0;
  c.kappa = std::hypot(cos(x) - 1.0 + 0.5 * x * x, sin(x) - x) / (x * x);
  c.gamma_star = 1.0 / std::sqrt(6.0 * c.kappa);

  const double rhs = 1.0 / std::sqrt(8.0 * pi);
  const auto stationary = [rhs](double t) {
    const double s = 1.0 + t * t;
    return t * std::exp(0.5 * t * t) / (s * s) - rhs;
  };
  c.x_phi = specfun::find_root(stationary, {0.0, 1.0}, tol);
  c.c_phi = psi(c.x_phi);
  c.p_phi = 1.0 / (c.x_phi * c.x_phi + 1.0);

  c.p0 = specfun::find_root([](double p) { return p * p * p + p - 1.0; }, {0.5, 1.0}, tol);
  return c;
}

const Constants& constants() {
  static const Constants cached = compute_constants();
  return cached;
}

double psi(double x) {
  return 1.0 / (1.0 + x * x) - std_normal_cdf(-std::fabs(x));
}

double psi_tilde(double p) {
  check_open_unit(p, "psi_tilde");
  const double q = 1.0 - p;
  return std_normal_cdf(std::sqrt(q / p)) - q;
}

double delta1(double p) {
  check_open_unit(p, "delta1");
  const double q = 1.0 - p;
  if (p >= 0.5) return std_normal_cdf(std::sqrt(q / p)) - q;
  return std_normal_cdf(std::sqrt(p / q)) - p;
}

TGammaTriple t_thresholds(double gamma) {
  if (!(gamma > 0.0)) {
    std::ostringstream os;
    os << "t_thresholds: gamma must be positive, got " << gamma;
    throw DomainError(os.str());
  }
  const double gs = constants().gamma_star;
  TGammaTriple t{};
  if (std::isinf(gamma)) {
    t.t_gamma = 2.0 / gs;
    t.t2_gamma = 2.0 / gs;
    t.t1_gamma = t.t2_gamma;
    return t;
  }
  const double a = gamma / gs;
  // (2/gamma)(sqrt(a^2+1) - 1) without cancellation for small gamma.
  t.t_gamma = 2.0 * gamma / (gs * gs * (std::sqrt(a * a + 1.0) + 1.0));
  t.t2_gamma = 2.0 * std::max(1.0 / gamma, 1.0 / gs);
  const double slack = 1.0 - a * a;
  t.t1_gamma = t.t2_gamma * (1.0 - std::sqrt(slack > 0.0 ? slack : 0.0));
  return t;
}

}  // namespace ltb

#include "specfun.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "error.hpp"

namespace ltb::specfun {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTiny = std::numeric_limits<double>::min() / kEps;
constexpr int kMaxGammaIter = 10000;

void check_gamma_args(double r, double x, const char* who) {
  if (!(r > 0.0) || !std::isfinite(r)) {
    std::ostringstream os;
    os << who << ": order must be positive and finite, got r=" << r;
    throw DomainError(os.str());
  }
  if (!(x >= 0.0)) {
    std::ostringstream os;
    os << who << ": argument must be non-negative, got x=" << x;
    throw DomainError(os.str());
  }
}

// x^r e^-x / Gamma(r), the common prefactor of the regularized forms.
double gamma_prefactor(double r, double x) {
  return std::exp(r * std::log(x) - x - std::lgamma(r));
}

// Regularized lower function P(r, x) by its power series; x < r + 1.
double lower_regularized_series(double r, double x) {
  double term = 1.0 / r;
  double sum = term;
  double denom = r;
  for (int k = 1; k < kMaxGammaIter; ++k) {
    denom += 1.0;
    term *= x / denom;
    sum += term;
    if (std::fabs(term) < std::fabs(sum) * kEps) {
      return sum * gamma_prefactor(r, x);
    }
  }
  throw ConvergenceError("incomplete gamma series did not converge");
}

// Regularized upper function Q(r, x) by the Legendre continued fraction
// (modified Lentz); x >= r + 1.
double upper_regularized_fraction(double r, double x) {
  double b = x + 1.0 - r;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxGammaIter; ++i) {
    const double an = -i * (i - r);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) <= kEps) {
      return h * gamma_prefactor(r, x);
    }
  }
  throw ConvergenceError("incomplete gamma continued fraction did not converge");
}

// Power series for I0(z); all terms positive.
double bessel_i0_series(double z) {
  const double quarter_z2 = 0.25 * z * z;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 500; ++k) {
    term *= quarter_z2 / (static_cast<double>(k) * k);
    sum += term;
    if (term < sum * kEps * 0.5) break;
  }
  return sum;
}

// Hankel expansion exp(-z) I0(z) ~ (2 pi z)^-1/2 sum_k ((2k-1)!!)^2 / (k! (8z)^k),
// truncated at its smallest term.
double bessel_i0_scaled_asymptotic(double z) {
  double term = 1.0;
  double sum = 1.0;
  for (int k = 0; k < 200; ++k) {
    const double ratio = (2.0 * k + 1.0) * (2.0 * k + 1.0) / (8.0 * (k + 1.0) * z);
    if (ratio >= 1.0) break;
    term *= ratio;
    sum += term;
    if (term < sum * kEps * 0.5) break;
  }
  return sum / std::sqrt(2.0 * std::numbers::pi * z);
}

constexpr double kBesselSeriesLimit = 15.0;

}  // namespace

void Tolerance::validate() const {
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0) || max_iter < 1) {
    throw DomainError("tolerance requires abs_tol > 0, rel_tol > 0, max_iter >= 1");
  }
}

double std_normal_cdf(double x) {
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double std_normal_pdf(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

double upper_gamma(double r, double x) {
  check_gamma_args(r, x, "upper_gamma");
  const double full = std::tgamma(r);
  if (x == 0.0) return full;
  if (std::isinf(x)) return 0.0;
  if (x < r + 1.0) return full * (1.0 - lower_regularized_series(r, x));
  return full * upper_regularized_fraction(r, x);
}

double lower_gamma(double r, double x) {
  check_gamma_args(r, x, "lower_gamma");
  const double full = std::tgamma(r);
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return full;
  if (x < r + 1.0) return full * lower_regularized_series(r, x);
  return full * (1.0 - upper_regularized_fraction(r, x));
}

double bessel_i0_scaled(double z) {
  if (!(z >= 0.0)) {
    std::ostringstream os;
    os << "bessel_i0: argument must be non-negative, got z=" << z;
    throw DomainError(os.str());
  }
  if (std::isinf(z)) return 0.0;
  if (z <= kBesselSeriesLimit) return bessel_i0_series(z) * std::exp(-z);
  return bessel_i0_scaled_asymptotic(z);
}

double bessel_i0(double z) {
  const double scaled = bessel_i0_scaled(z);
  if (z <= kBesselSeriesLimit) return bessel_i0_series(z);
  return scaled * std::exp(z);
}

double find_root(const std::function<double(double)>& f, Bracket bracket,
                 const Tolerance& tol) {
  tol.validate();
  double lo = bracket.lo;
  double hi = bracket.hi;
  if (!(lo < hi)) {
    throw DomainError("find_root: bracket requires lo < hi");
  }
  double f_lo = f(lo);
  double f_hi = f(hi);
  if (f_lo == 0.0) return lo;
  if (f_hi == 0.0) return hi;
  if (!std::isfinite(f_lo) || !std::isfinite(f_hi) ||
      std::signbit(f_lo) == std::signbit(f_hi)) {
    std::ostringstream os;
    os << "find_root: no sign change on [" << lo << ", " << hi << "] (f(lo)=" << f_lo
       << ", f(hi)=" << f_hi << ")";
    throw NoSignChangeError(os.str());
  }
  for (int iter = 0; iter < tol.max_iter; ++iter) {
    const double mid = 0.5 * (lo + hi);
    const double width = hi - lo;
    if (width <= std::max(tol.abs_tol, tol.rel_tol * std::fabs(mid))) return mid;

    double x = mid;
    if (iter % 2 == 0) {
      const double secant = hi - f_hi * (hi - lo) / (f_hi - f_lo);
      if (secant > lo + 0.05 * width && secant < hi - 0.05 * width) x = secant;
    }
    const double fx = f(x);
    if (fx == 0.0) return x;
    if (std::signbit(fx) == std::signbit(f_lo)) {
      lo = x;
      f_lo = fx;
    } else {
      hi = x;
      f_hi = fx;
    }
  }
  std::ostringstream os;
  os << "find_root: no convergence after " << tol.max_iter << " iterations, bracket ["
     << lo << ", " << hi << "]";
  throw ConvergenceError(os.str());
}

Extremum golden_section_max(const std::function<double(double)>& f, double lo,
                            double hi, int iterations) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo;
  double b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  Extremum best{lo, f(lo)};
  if (const double fb = f(hi); fb > best.value) best = {hi, fb};
  for (int i = 0; i < iterations && b - a > 0.0; ++i) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  if (fc > best.value) best = {c, fc};
  if (fd > best.value) best = {d, fd};
  return best;
}

}  // namespace ltb::specfun

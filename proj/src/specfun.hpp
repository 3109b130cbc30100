#pragma once

#include <functional>

namespace ltb::specfun {

/// Stopping rule for iterative solvers. A bracket is accepted once its width
/// drops below max(abs_tol, rel_tol * |midpoint|).
struct Tolerance {
  double abs_tol = 1e-15;
  double rel_tol = 1e-15;
  int max_iter = 300;

  void validate() const;
};

/// Closed interval known to contain a sign change of the target function.
struct Bracket {
  double lo;
  double hi;
};

/// Standard normal distribution function.
double std_normal_cdf(double x);

/// Standard normal density.
double std_normal_pdf(double x);

/// Unregularized upper incomplete gamma function, integral of t^(r-1) e^-t over [x, inf).
double upper_gamma(double r, double x);

/// Unregularized lower incomplete gamma function, integral over [0, x].
double lower_gamma(double r, double x);

/// Modified Bessel function of the first kind, order zero.
double bessel_i0(double z);

/// exp(-z) * I0(z), finite for every z >= 0.
double bessel_i0_scaled(double z);

/// Bracketed root of a continuous function: alternating secant and bisection
/// steps, so the bracket at least halves every two iterations.
double find_root(const std::function<double(double)>& f, Bracket bracket,
                 const Tolerance& tol = {});

/// Maximizer of a unimodal function on [lo, hi] by golden-section search.
struct Extremum {
  double x;
  double value;
};
Extremum golden_section_max(const std::function<double(double)>& f, double lo,
                            double hi, int iterations);

}  // namespace ltb::specfun

#pragma once

#include "specfun.hpp"

namespace ltb {

struct Constants {
  double x0;          // root of 8(cos x - 1) + 8x sin x - 4x^2 cos x - x^3 sin x on (pi, 2pi)
  double kappa;
  double gamma_star;  // 1 / sqrt(6 kappa)
  double x_phi;       // maximizer of psi on (0, inf)
  double c_phi;       // psi(x_phi)
  double p_phi;       // 1 / (x_phi^2 + 1)
  double p0;          // root of p^3 + p - 1
};

struct TGammaTriple {
  double t_gamma;
  double t1_gamma;
  double t2_gamma;
};

Constants compute_constants(const specfun::Tolerance& tol = {});

/// Process-wide cached result of compute_constants() with default tolerance.
const Constants& constants();

/// 1/(1+x^2) - Phi(-|x|).
double psi(double x);

/// psi(sqrt((1-p)/p)) = Phi(sqrt((1-p)/p)) - (1-p).
double psi_tilde(double p);

/// Uniform distance between the standard two-point law with parameter p and Phi.
double delta1(double p);

/// Integration thresholds of the incomplete-gamma upper bounds. gamma may be +inf.
TGammaTriple t_thresholds(double gamma);

}  // namespace ltb

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "bounds.hpp"
#include "constants.hpp"
#include "discrete.hpp"
#include "error.hpp"
#include "specfun.hpp"

using namespace ltb;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

long double normal_cdf_ld(long double x) { return 0.5L * std::erfc(-x / std::sqrt(2.0L)); }

// Largest gap between the two-point law and Phi, over the one-sided limits at both atoms.
double delta1_oracle(double p) {
  const long double q = 1.0L - p;
  const long double lo = -std::sqrt(p / q);
  const long double hi = std::sqrt(q / p);
  const long double f1 = normal_cdf_ld(lo);
  const long double f2 = q - normal_cdf_ld(lo);
  const long double f3 = normal_cdf_ld(hi) - q;
  const long double f4 = 1.0L - normal_cdf_ld(hi);
  return static_cast<double>(std::max({std::fabs(f1), std::fabs(f2), std::fabs(f3), std::fabs(f4)}));
}

}  // namespace

TEST_CASE("named constants") {
  const Constants& c = constants();
  CHECK_THAT(c.x0, WithinAbs(5.487414539984539, 1e-12));
  CHECK_THAT(c.kappa, WithinAbs(0.5315518294543019, 1e-12));
  CHECK_THAT(c.gamma_star, WithinAbs(0.5599529876763902, 1e-12));
  CHECK_THAT(c.x_phi, WithinAbs(0.213105, 1e-6));
  CHECK_THAT(c.c_phi, WithinAbs(0.54093, 1e-5));
  CHECK_THAT(c.p_phi, WithinAbs(0.9565, 1e-4));
  CHECK_THAT(c.p0, WithinAbs(0.6823, 1e-4));
  CHECK_THAT(gamma0(), WithinAbs(4.7010, 1e-3));
}

TEST_CASE("constants satisfy their defining relations") {
  const Constants& c = constants();
  const long double x = c.x0;
  const long double trig = 8 * (std::cos(x) - 1) + 8 * x * std::sin(x) - 4 * x * x * std::cos(x) -
                           x * x * x * std::sin(x);
  CHECK(std::fabs(static_cast<double>(trig)) < 1e-12);
  CHECK(c.x0 > std::numbers::pi);
  CHECK(c.x0 < 2 * std::numbers::pi);
  const long double k =
      std::sqrt(std::pow(std::cos(x) - 1 + x * x / 2, 2) + std::pow(std::sin(x) - x, 2)) / (x * x);
  CHECK_THAT(c.kappa, WithinRel(static_cast<double>(k), 1e-14));
  CHECK_THAT(c.gamma_star * c.gamma_star * 6.0 * c.kappa, WithinRel(1.0, 1e-14));
  CHECK_THAT(c.p0 * c.p0 * c.p0 + c.p0 - 1.0, WithinAbs(0.0, 1e-15));
  CHECK_THAT(c.p_phi, WithinRel(1.0 / (c.x_phi * c.x_phi + 1.0), 1e-15));
}

TEST_CASE("x_phi maximizes psi") {
  const Constants& c = constants();
  double best = 0.0, arg = 0.0;
  for (int i = 1; i <= 200000; ++i) {
    const double x = i * 5e-6;
    const double v = 1.0 / (1.0 + x * x) - static_cast<double>(normal_cdf_ld(-x));
    if (v > best) {
      best = v;
      arg = x;
    }
  }
  CHECK_THAT(c.x_phi, WithinAbs(arg, 1e-5));
  CHECK_THAT(c.c_phi, WithinAbs(best, 1e-11));
  CHECK(psi(c.x_phi) >= psi(c.x_phi + 1e-4));
  CHECK(psi(c.x_phi) >= psi(c.x_phi - 1e-4));
  CHECK_THAT(delta1(c.p_phi), WithinRel(c.c_phi, 1e-13));
}

TEST_CASE("delta1 matches the one-sided atom gaps") {
  for (int i = 1; i < 1000; ++i) {
    const double p = i / 1000.0;
    INFO("p=" << p);
    CHECK_THAT(delta1(p), WithinAbs(delta1_oracle(p), 1e-15));
  }
  CHECK_THROWS_AS(delta1(0.0), DomainError);
  CHECK_THROWS_AS(delta1(1.0), DomainError);
  CHECK_THAT(delta1(0.5), WithinAbs(specfun::std_normal_cdf(1.0) - 0.5, 1e-16));
}

TEST_CASE("two-point uniform distance equals delta1") {
  for (int i = 0; i < 1000; ++i) {
    const double p = 0.0005 + 0.999 * i / 999.0;
    const DiscreteDistribution d = two_point(p);
    const double dist = uniform_distance_to_normal(convolve_iid(d, 1));
    INFO("p=" << p);
    CHECK_THAT(dist, WithinRel(delta1(p), 1e-12));
  }
}

TEST_CASE("psi_tilde equals delta1 on the upper half") {
  for (double p : {0.5, 0.6, 0.75, 0.9, 0.99}) CHECK_THAT(psi_tilde(p), WithinAbs(delta1(p), 1e-16));
}

TEST_CASE("integration thresholds") {
  const double gs = constants().gamma_star;
  const TGammaTriple at_star = t_thresholds(gs);
  CHECK_THAT(at_star.t1_gamma, WithinRel(at_star.t2_gamma, 1e-12));
  const TGammaTriple t = t_thresholds(1.0);
  CHECK_THAT(t.t_gamma, WithinRel(2.0 * (std::sqrt(1.0 / (gs * gs) + 1.0) - 1.0), 1e-14));
  const TGammaTriple inf = t_thresholds(INFINITY);
  CHECK_THAT(inf.t_gamma, WithinRel(2.0 / gs, 1e-15));
  const TGammaTriple tiny = t_thresholds(1e-9);
  CHECK_THAT(tiny.t_gamma, WithinRel(1e-9 / (gs * gs), 1e-6));
  CHECK_THROWS_AS(t_thresholds(0.0), DomainError);
}

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "discrete.hpp"
#include "error.hpp"
#include "fractions.hpp"

using namespace ltb;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

const std::vector<double> kGridP = {0.5, 0.55, 0.6, 0.65, 0.7, 0.75, 0.8, 0.85, 0.9, 0.95};
const std::vector<int> kGridN = {1, 2, 5, 10, 37, 100};
const std::vector<double> kGridEps = {0.3, 1.0, 1.5, 3.0, INFINITY};
const std::vector<double> kGridGamma = {0.2, 0.56, 1.0, 2.0, 5.0};

std::vector<WeightFunction> canonical_weights() {
  return {WeightFunction::g_star(), WeightFunction::g_const(), WeightFunction::g0(), WeightFunction::g1()};
}

// Direct evaluation of the definitions on a candidate set of z values.
struct Oracle {
  std::vector<DiscreteDistribution> dists;
  long double b;

  explicit Oracle(std::vector<DiscreteDistribution> d) : dists(std::move(d)) {
    long double v = 0;
    for (const auto& x : dists) v += x.variance();
    b = std::sqrt(v);
  }

  long double lind(long double z) const {
    long double s = 0;
    for (const auto& d : dists)
      for (const Atom& a : d.atoms())
        if (std::fabs(a.value) >= z * b) s += static_cast<long double>(a.value) * a.value * a.prob;
    return s / (b * b);
  }

  long double third(long double z) const {
    long double s = 0;
    for (const auto& d : dists)
      for (const Atom& a : d.atoms())
        if (std::fabs(a.value) < z * b) s += static_cast<long double>(a.value) * a.value * a.value * a.prob;
    return s / (b * b * b);
  }

  static long double weight(WeightKind kind, long double u, long double bb) {
    switch (kind) {
      case WeightKind::GStar: return u;
      case WeightKind::GConst: return 1;
      case WeightKind::G0: return std::min(u, bb);
      case WeightKind::G1: return std::max(u, bb);
      default: return 0;
    }
  }

  std::vector<long double> candidates(double eps) const {
    std::vector<long double> z;
    for (int i = 0; i <= 4000; ++i) z.push_back(eps * std::pow(1e-6L, 1.0L - i / 4000.0L));
    for (const auto& d : dists)
      for (const Atom& a : d.atoms())
        for (long double f : {1.0L - 1e-12L, 1.0L, 1.0L + 1e-12L}) z.push_back(std::fabs(a.value) / b * f);
    for (long double f : {1.0L - 1e-12L, 1.0L, 1.0L + 1e-12L}) z.push_back(f);
    z.push_back(eps * (1.0L - 1e-13L));
    std::erase_if(z, [eps](long double x) { return !(x > 0 && x < eps); });
    return z;
  }

  double esseen(WeightKind kind, double eps, double gamma) const {
    long double best = 0;
    for (long double z : candidates(eps)) {
      const long double h = weight(kind, z * b, b) / weight(kind, b, b) * (gamma * std::fabs(third(z)) / z + lind(z));
      best = std::max(best, h);
    }
    return static_cast<double>(best);
  }

  double rozovskii(WeightKind kind, double eps, double gamma) const {
    long double best = 0;
    for (long double z : candidates(eps)) best = std::max(best, weight(kind, z * b, b) / weight(kind, b, b) * lind(z));
    const long double head = gamma * weight(kind, eps * b, b) / (eps * weight(kind, b, b)) * std::fabs(third(eps));
    return static_cast<double>(head + best);
  }
};

DiscreteDistribution random_law(std::mt19937_64& rng, bool lattice) {
  std::uniform_int_distribution<int> count(2, 5);
  std::uniform_real_distribution<double> u(0.05, 1.0);
  std::uniform_real_distribution<double> x(-4.0, 4.0);
  const int k = count(rng);
  std::vector<double> values;
  while (static_cast<int>(values.size()) < k) {
    const double v = lattice ? std::round(x(rng)) : x(rng);
    if (std::find(values.begin(), values.end(), v) == values.end()) values.push_back(v);
  }
  std::vector<double> probs(values.size());
  double s = 0;
  for (double& p : probs) s += (p = u(rng));
  double m = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) m += (probs[i] /= s) * values[i];
  std::vector<Atom> atoms;
  for (std::size_t i = 0; i < values.size(); ++i) atoms.push_back({values[i] - m, probs[i]});
  return DiscreteDistribution::from_atoms(atoms, {false, 1e-12, 1e-10});
}

WeightFunction random_custom(std::mt19937_64& rng, double scale) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double c0 = u(rng), c1 = u(rng), c2 = u(rng), c3 = u(rng) + 0.3;
  const double knee = 0.2 + 3.0 * u(rng);
  const double power = 0.1 + 0.8 * u(rng);
  return WeightFunction::custom([=](double v) {
    return scale * (c0 + c1 * std::min(v, knee) + c2 * v + c3 * std::pow(v, power));
  });
}

}  // namespace

TEST_CASE("two-point closed forms agree with brute force on the full grid") {
  int cases = 0, mismatches = 0;
  for (double p : kGridP)
    for (int n : kGridN)
      for (double eps : kGridEps)
        for (double gamma : kGridGamma)
          for (const WeightFunction& g : canonical_weights())
            for (FractionType type : {FractionType::Esseen, FractionType::Rozovskii}) {
              const FractionParams params{eps, gamma};
              const double brute = fraction(type, two_point(p), n, g, params).value;
              const double closed = two_point_fraction_closed_form(type, g, p, n, params);
              ++cases;
              if (!(std::fabs(brute - closed) <= 1e-12 * std::fabs(closed))) {
                ++mismatches;
                UNSCOPED_INFO((type == FractionType::Esseen ? "esseen " : "rozovskii ")
                              << g.name() << " p=" << p << " n=" << n << " eps=" << eps << " gamma=" << gamma
                              << " brute=" << brute << " closed=" << closed);
              }
            }
  CHECK(cases >= 6000);
  CHECK(mismatches == 0);
}

TEST_CASE("brute force matches the direct definition on random laws") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> gamma_dist(0.1, 4.0);
  const std::vector<double> eps_values = {0.2, 0.7, 1.0, 1.3, 4.0};
  for (int trial = 0; trial < 60; ++trial) {
    std::vector<DiscreteDistribution> dists;
    const int k = 1 + trial % 3;
    for (int i = 0; i < k; ++i) dists.push_back(random_law(rng, trial % 2 == 0));
    const Oracle oracle(dists);
    const double eps = eps_values[static_cast<std::size_t>(trial) % eps_values.size()];
    const FractionParams params{eps, gamma_dist(rng)};
    for (const WeightFunction& g : canonical_weights()) {
      INFO("trial " << trial << " g=" << g.name() << " eps=" << eps);
      const double e = esseen_fraction(dists, g, params).value;
      const double r = rozovskii_fraction(dists, g, params).value;
      CHECK_THAT(e, WithinRel(oracle.esseen(g.kind(), eps, params.gamma), 1e-9));
      CHECK_THAT(r, WithinRel(oracle.rozovskii(g.kind(), eps, params.gamma), 1e-9));
    }
  }
}

TEST_CASE("i.i.d. and explicit-summand overloads agree") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const auto d = random_law(rng, true);
    const int n = 1 + trial;
    const std::vector<DiscreteDistribution> copies(static_cast<std::size_t>(n), d);
    const FractionParams params{1.5, 0.8};
    for (const WeightFunction& g : canonical_weights()) {
      CHECK_THAT(esseen_fraction(d, n, g, params).value, WithinRel(esseen_fraction(copies, g, params).value, 1e-13));
      CHECK_THAT(rozovskii_fraction(d, n, g, params).value, WithinRel(rozovskii_fraction(copies, g, params).value, 1e-13));
    }
  }
}

TEST_CASE("documented two-point values") {
  const double p = 0.8, q = 0.2;
  const FractionParams unit{1.0, 1.0};
  const double expected = std::sqrt(q * q * q / p) + std::max(std::sqrt(q / p), p);
  CHECK_THAT(rozovskii_fraction(two_point(p), 1, WeightFunction::g_star(), unit).value, WithinRel(expected, 1e-14));

  for (int n : {1, 3, 50})
    for (double eps : {0.2, 1.0, 4.0, double(INFINITY)})
      for (double gamma : {0.3, 2.0}) {
        const FractionParams params{eps, gamma};
        CHECK_THAT(rozovskii_fraction(two_point(0.5), n, WeightFunction::g_const(), params).value, WithinRel(1.0, 1e-14));
        CHECK_THAT(esseen_fraction(two_point(0.5), n, WeightFunction::g_star(), params).value,
                   WithinRel(std::min(eps, 1.0 / std::sqrt(n)), 1e-14));
      }
  for (double pp : {0.6, 0.9})
    CHECK_THAT(rozovskii_fraction(two_point(pp), 4, WeightFunction::g_const(), {INFINITY, 1.5}).value, WithinRel(1.0, 1e-14));

  for (double pp : {0.6, 0.75, 0.9})
    for (int n : {4, 20}) {
      const double qq = 1 - pp;
      const double v = esseen_fraction(two_point(pp), n, WeightFunction::g_star(), {INFINITY, 1.0}).value;
      CHECK_THAT(v, WithinRel((qq * qq + pp * pp) / std::sqrt(n * pp * qq), 1e-13));
    }
  CHECK_THAT(esseen_fraction(two_point(0.5), 7, WeightFunction::g1(), {2.5, 3.0}).value, WithinRel(1.0, 1e-14));

  {
    const double pp = 0.7, qq = 0.3, eps = 2.0, gamma = 1.3;
    const int n = 5;  // n > p/q
    const double expected_r = gamma * (pp - qq) / (eps * std::sqrt(n * pp * qq)) +
                              std::max(std::sqrt(qq / (n * pp)), std::sqrt(pp * pp * pp / (n * qq)));
    CHECK_THAT(rozovskii_fraction(two_point(pp), n, WeightFunction::g0(), {eps, gamma}).value, WithinRel(expected_r, 1e-13));
  }
}

TEST_CASE("weight-class sandwich, scale invariance and g1 bounds") {
  std::mt19937_64 rng(99);
  const auto check_law = [&](const DiscreteDistribution& d, int n, const FractionParams& params) {
    const std::uint64_t s = rng();
    std::mt19937_64 r1(s), r2(s);
    const WeightFunction g = random_custom(r1, 1.0);
    const WeightFunction g7 = random_custom(r2, (s % 2) ? 7.0 : 0.1);
    for (FractionType type : {FractionType::Esseen, FractionType::Rozovskii}) {
      const double l0 = fraction(type, d, n, WeightFunction::g0(), params).value;
      const double l1 = fraction(type, d, n, WeightFunction::g1(), params).value;
      const double lg = fraction(type, d, n, g, params).value;
      const double lg7 = fraction(type, d, n, g7, params).value;
      CHECK(l0 <= lg * (1 + 1e-9));
      CHECK(lg <= l1 * (1 + 1e-9));
      CHECK_THAT(lg7, WithinRel(lg, 1e-12));
    }
  };
  for (double p : {0.5, 0.65, 0.8, 0.95})
    for (int n : {1, 5, 37})
      for (double eps : {0.3, 1.0, 3.0})
        for (double gamma : {0.2, 1.0, 5.0}) check_law(two_point(p), n, {eps, gamma});
  for (int trial = 0; trial < 40; ++trial) check_law(random_law(rng, trial % 2 == 1), 1 + trial % 4, {0.3 + 0.1 * trial, 1.7});

  for (double p : kGridP)
    for (int n : kGridN)
      for (double eps : kGridEps)
        for (double gamma : kGridGamma) {
          const FractionParams params{eps, gamma};
          const double e = esseen_fraction(two_point(p), n, WeightFunction::g1(), params).value;
          const double r = rozovskii_fraction(two_point(p), n, WeightFunction::g1(), params).value;
          const double m = std::max(eps, 1.0);
          CHECK(e >= 1 - 1e-12);
          CHECK(e <= m * std::max(gamma, 1.0) * (1 + 1e-12));
          CHECK(r >= 1 - 1e-12);
          CHECK(r <= m * (gamma + 1) * (1 + 1e-12));
        }
}

TEST_CASE("custom weights reproduce the canonical ones") {
  std::mt19937_64 rng(8);
  const WeightFunction identity = WeightFunction::custom([](double u) { return u; });
  const WeightFunction constant = WeightFunction::custom([](double) { return 2.5; });
  for (int trial = 0; trial < 20; ++trial) {
    const auto d = random_law(rng, trial % 2 == 0);
    const FractionParams params{0.4 + 0.2 * trial, 1.1};
    for (FractionType type : {FractionType::Esseen, FractionType::Rozovskii}) {
      CHECK_THAT(fraction(type, d, 3, identity, params).value,
                 WithinRel(fraction(type, d, 3, WeightFunction::g_star(), params).value, 1e-11));
      CHECK_THAT(fraction(type, d, 3, constant, params).value,
                 WithinRel(fraction(type, d, 3, WeightFunction::g_const(), params).value, 1e-11));
    }
  }
}

TEST_CASE("third moment is dominated by the absolute third moment") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> z(0.01, 3.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<DiscreteDistribution> dists = {random_law(rng, false), random_law(rng, true)};
    for (int i = 0; i < 10; ++i) {
      const double zz = i == 0 ? INFINITY : z(rng);
      CHECK(std::fabs(third_moment_fraction(dists, zz)) <= abs_third_moment_fraction(dists, zz) * (1 + 1e-14));
    }
  }
}

TEST_CASE("Esseen integrand is monotone between atom magnitudes") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 30; ++trial) {
    const std::vector<DiscreteDistribution> dists = {random_law(rng, false)};
    const double gamma = 1.0;
    std::vector<double> mags;
    const double b = std::sqrt(dists[0].variance());
    for (const Atom& a : dists[0].atoms()) mags.push_back(std::fabs(a.value) / b);
    mags.push_back(0.0);
    std::sort(mags.begin(), mags.end());
    for (std::size_t i = 0; i + 1 < mags.size(); ++i) {
      const double lo = mags[i], hi = mags[i + 1];
      if (hi - lo < 1e-6) continue;
      const auto integrand = [&](double z, bool star) {
        const double core = gamma * std::fabs(third_moment_fraction(dists, z)) / z + lindeberg_fraction(dists, z);
        return star ? z * core : core;
      };
      double prev_star = -1, prev_c = INFINITY;
      for (int j = 1; j < 50; ++j) {
        const double z = lo + (hi - lo) * j / 50.0;
        const double s = integrand(z, true), c = integrand(z, false);
        CHECK(s >= prev_star - 1e-14);
        CHECK(c <= prev_c + 1e-14);
        prev_star = s;
        prev_c = c;
      }
    }
  }
}

TEST_CASE("fraction errors") {
  const auto d = two_point(0.7);
  const WeightFunction custom = WeightFunction::custom([](double u) { return std::sqrt(u); });
  CHECK_THROWS_AS(rozovskii_fraction(d, 2, custom, {INFINITY, 1.0}), DomainError);
  CHECK(std::isfinite(esseen_fraction(d, 2, custom, {INFINITY, 1.0}).value));
  CHECK_THROWS_AS(esseen_fraction(d, 2, WeightFunction::g_star(), {1.0, INFINITY}), DomainError);
  CHECK_THROWS_AS(esseen_fraction(d, 2, WeightFunction::g_star(), {0.0, 1.0}), DomainError);
  CHECK_THROWS_AS(WeightFunction::custom([](double u) { return 1.0 / u; }), ValidationError);
  CHECK_THROWS_AS(WeightFunction::custom([](double u) { return u * u; }), ValidationError);
  CHECK_THROWS_AS(two_point_fraction_closed_form(FractionType::Esseen, custom, 0.7, 1, {1.0, 1.0}), UnsupportedError);
  CHECK_THROWS_AS(two_point_fraction_closed_form(FractionType::Esseen, WeightFunction::g0(), 0.3, 1, {1.0, 1.0}), DomainError);
  CHECK(WeightFunction::g_star().ratio_at_infinity() == 1.0);
  CHECK(WeightFunction::g0().ratio_at_infinity() == 0.0);
  CHECK_THROWS_AS(custom.ratio_at_infinity(), DomainError);
}

TEST_CASE("supremum location is reported") {
  const FractionValue v = rozovskii_fraction(two_point(0.5), 1, WeightFunction::g_const(), {1.0, 1.0});
  CHECK(v.method == FractionMethod::BruteForce);
  CHECK(std::string(sup_location_name(v.location)).size() > 0);
}

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "discrete.hpp"
#include "error.hpp"
#include "specfun.hpp"

using namespace ltb;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// Brute-force sup |F(x) - Phi(x)| over both one-sided limits at every atom.
double distance_oracle(const std::vector<Atom>& atoms) {
  long double below = 0.0L, worst = 0.0L;
  for (const Atom& a : atoms) {
    const long double phi = 0.5L * std::erfc(-static_cast<long double>(a.value) / std::sqrt(2.0L));
    worst = std::max(worst, std::fabs(below - phi));
    below += a.prob;
    worst = std::max(worst, std::fabs(below - phi));
  }
  return static_cast<double>(worst);
}

double log_binom(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

}  // namespace

TEST_CASE("distribution validation") {
  CHECK_THROWS_AS(DiscreteDistribution::from_atoms({}), ValidationError);
  CHECK_THROWS_AS(DiscreteDistribution::from_atoms({{1.0, 1.0}}), ValidationError);
  CHECK_THROWS_AS(DiscreteDistribution::from_atoms({{-1.0, 0.5}, {1.0, 0.6}}), ValidationError);
  CHECK_THROWS_AS(DiscreteDistribution::from_atoms({{-1.0, 0.5}, {-1.0, 0.5}}), ValidationError);
  CHECK_THROWS_AS(DiscreteDistribution::from_atoms({{-1.0, -0.5}, {1.0, 1.5}}), ValidationError);
  CHECK_THROWS_AS(DiscreteDistribution::from_atoms({{0.0, 0.5}, {2.0, 0.5}}), ValidationError);
  CHECK_THROWS_AS(DiscreteDistribution::from_atoms({{-1.0, 0.5}, {NAN, 0.5}}), ValidationError);
  DistributionOptions shifted;
  shifted.allow_nonzero_mean = true;
  const auto d = DiscreteDistribution::from_atoms({{2.0, 0.5}, {0.0, 0.5}}, shifted);
  CHECK(d.atoms().front().value == 0.0);
  CHECK_THAT(d.mean(), WithinAbs(1.0, 1e-15));
  CHECK_THAT(d.variance(), WithinAbs(1.0, 1e-15));
}

TEST_CASE("standard laws") {
  for (double p : {0.1, 0.5, 0.7, 0.95}) {
    const auto d = two_point(p);
    CHECK_THAT(d.mean(), WithinAbs(0.0, 1e-15));
    CHECK_THAT(d.variance(), WithinRel(1.0, 1e-14));
    const auto t = symmetric_three_point(p);
    CHECK(t.size() == 3);
    CHECK_THAT(t.variance(), WithinRel(p, 1e-14));
  }
  CHECK_THROWS_AS(symmetric_three_point(1.0), DomainError);
  CHECK_THROWS_AS(two_point(1.0), DomainError);
  CHECK_THROWS_AS(symmetric_three_point(0.0), DomainError);
}

TEST_CASE("truncated moments") {
  const auto d = two_point(0.8);  // atoms -2 (0.2), 0.5 (0.8)
  double small = 0;
  for (const Atom& a : d.atoms())
    if (a.value > 0) small = a.value;
  CHECK_THAT(tail_second_moment(d, small), WithinAbs(1.0, 1e-15));
  CHECK_THAT(tail_second_moment(d, 0.6), WithinAbs(0.8, 1e-15));
  CHECK_THAT(tail_second_moment(d, 2.1), WithinAbs(0.0, 1e-15));
  CHECK_THAT(trunc_third_moment(d, small), WithinAbs(0.0, 1e-15));
  CHECK_THAT(trunc_third_moment(d, 0.6), WithinAbs(0.8 * 0.125, 1e-15));
  CHECK_THAT(trunc_third_moment(d, INFINITY), WithinAbs(0.1 - 1.6, 1e-14));
  CHECK_THAT(trunc_abs_third_moment(d, INFINITY), WithinAbs(0.1 + 1.6, 1e-14));
  CHECK_THROWS_AS(tail_second_moment(d, 0.0), DomainError);
}

TEST_CASE("i.i.d. convolution of the two-point law is binomial") {
  const double p = 0.7;
  const int n = 60;
  const SumLaw law = convolve_iid(two_point(p), n);
  REQUIRE(law.atoms.size() == static_cast<std::size_t>(n + 1));
  const double q = 1.0 - p;
  for (int k = 0; k <= n; ++k) {
    const double expected = std::exp(log_binom(n, k) + k * std::log(p) + (n - k) * std::log(q));
    CHECK_THAT(law.atoms[static_cast<std::size_t>(k)].prob, WithinRel(expected, 1e-11));
  }
  CHECK_THAT(law.b_n, WithinRel(std::sqrt(60.0), 1e-14));
  long double total = 0.0L, mean = 0.0L, second = 0.0L;
  for (const Atom& a : law.atoms) {
    total += a.prob;
    mean += a.prob * a.value;
    second += a.prob * a.value * a.value;
  }
  CHECK_THAT(static_cast<double>(total), WithinAbs(1.0, 1e-14));
  CHECK_THAT(static_cast<double>(mean), WithinAbs(0.0, 1e-13));
  CHECK_THAT(static_cast<double>(second), WithinRel(1.0, 1e-12));
}

TEST_CASE("lattice and generic convolution agree") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.1, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<Atom> atoms = {{-2.0, u(rng)}, {0.0, u(rng)}, {1.0, u(rng)}, {3.0, u(rng)}};
    double s = 0, m = 0;
    for (auto& a : atoms) s += a.prob;
    for (auto& a : atoms) a.prob /= s;
    for (auto& a : atoms) m += a.prob * a.value;
    for (auto& a : atoms) a.value -= m;
    const auto d = DiscreteDistribution::from_atoms(atoms);
    const int n = 7;
    const SumLaw lattice = convolve_iid(d, n);
    const std::vector<DiscreteDistribution> copies(n, d);
    const SumLaw generic = convolve(copies);
    REQUIRE(lattice.atoms.size() == generic.atoms.size());
    for (std::size_t i = 0; i < lattice.atoms.size(); ++i) {
      CHECK_THAT(lattice.atoms[i].value, WithinAbs(generic.atoms[i].value, 1e-12));
      CHECK_THAT(lattice.atoms[i].prob, WithinAbs(generic.atoms[i].prob, 1e-15));
    }
    CHECK_THAT(uniform_distance_to_normal(lattice), WithinAbs(uniform_distance_to_normal(generic), 1e-14));
  }
}

TEST_CASE("uniform distance against the one-sided limit oracle") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Atom> atoms;
    for (int k = 0; k < 5; ++k) atoms.push_back({u(rng), 0.2});
    double m = 0, v = 0;
    for (auto& a : atoms) m += 0.2 * a.value;
    for (auto& a : atoms) v += 0.2 * (a.value - m) * (a.value - m);
    for (auto& a : atoms) a.value = (a.value - m) / std::sqrt(v);
    const auto d = DiscreteDistribution::from_atoms(atoms, {false, 1e-12, 1e-10});
    const SumLaw law = convolve_iid(d, 3);
    CHECK_THAT(uniform_distance_to_normal(law), WithinAbs(distance_oracle(law.atoms), 1e-14));
  }
}

TEST_CASE("stepping sequence matches direct convolution") {
  IidSumSequence seq(two_point(0.65));
  for (int n = 1; n <= 40; ++n) {
    seq.advance();
    CHECK(seq.n() == n);
    const double direct = uniform_distance_to_normal(convolve_iid(two_point(0.65), n));
    CHECK_THAT(seq.uniform_distance(), WithinAbs(direct, 1e-15));
  }
  const DistributionOptions any_mean{true, 1e-12, 1e-12};
  const auto irregular =
      DiscreteDistribution::from_atoms({{-1.0, 0.5}, {std::sqrt(2.0) - 1.0, 0.25}, {1.0, 0.25}}, any_mean);
  CHECK_THROWS_AS(IidSumSequence(irregular), UnsupportedError);
}

TEST_CASE("probability of a sum value") {
  const SumLaw law = convolve_iid(symmetric_three_point(0.5), 4);
  // Zero sum: four zeros, one +-1 pair (12 orderings), or two pairs (6 orderings).
  const double direct = std::pow(0.5, 4) + 12.0 * std::pow(0.25, 2) * std::pow(0.5, 2) + 6.0 * std::pow(0.25, 4);
  CHECK_THAT(law.prob_of_sum(0.0), WithinRel(direct, 1e-14));
  CHECK(law.prob_of_sum(0.5) == 0.0);
}

TEST_CASE("size limit") {
  ConvolutionOptions small;
  small.max_atoms = 100;
  CHECK_THROWS_AS(convolve_iid(two_point(0.6), 500, small), SizeLimitError);
}

TEST_CASE("json parsing") {
  const auto d = parse_distribution_json(R"({"atoms":[{"x":-1,"p":0.5},{"x":1,"p":0.5}]})");
  CHECK(d.size() == 2);
  try {
    parse_distribution_json("{\n  \"atoms\": [\n    {\"x\": 1,, }\n]}");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
    CHECK(e.column() > 0);
  }
  CHECK_THROWS_AS(parse_distribution_json(R"({"atom":[]})"), ParseError);
  CHECK_THROWS_AS(parse_distribution_json(R"({"atoms":[{"x":"a","p":1}]})"), ParseError);
  CHECK_THROWS_AS(parse_distribution_json(R"({"atoms":[{"x":-1,"p":0.4},{"x":1,"p":0.4}]})"), ValidationError);
}

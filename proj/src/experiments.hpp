#pragma once

#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "discrete.hpp"
#include "fractions.hpp"

namespace ltb {

struct ConvergenceReport {
  std::string experiment;
  std::vector<int> n_values;
  std::vector<double> observed;
  double target = 0.0;
  double max_abs_error_at_tail = 0.0;
};

/// observed_i = Delta_n sqrt(n) for n i.i.d. copies of two_point(p); the
/// tail error compares the running max over the last 20% of n_values with
/// (p+1)/(3 sqrt(2 pi p q)).
ConvergenceReport esseen_expansion_experiment(double p, const std::vector<int>& n_values);

/// observed_i = P(S_n = 0)/2 for symmetric_three_point(alpha/n); target
/// exp(-alpha) I0(alpha)/2. Tail error is the max |observed - target| over the
/// last 20% of n_values.
ConvergenceReport three_point_bessel_experiment(double alpha, const std::vector<int>& n_values);

/// (1-p)^n sum_k n!/((n-2k)! (k!)^2) (p/(2(1-p)))^{2k}, evaluated in log space.
double three_point_zero_probability(double p, int n);

enum class FuzzFamily { Lattice, RealValued, TwoPoint, ThreePoint };

const char* fuzz_family_name(FuzzFamily family) noexcept;

struct FuzzConfig {
  std::vector<FuzzFamily> families = {FuzzFamily::Lattice, FuzzFamily::RealValued,
                                      FuzzFamily::TwoPoint, FuzzFamily::ThreePoint};
  int max_n = 200;
  int max_n_real = 6;
  bool check_properties = true;

  void validate() const;
};

/// One comparison Delta_n <= constant * L.
struct FuzzRecord {
  int trial;
  std::string constant;   // A_E, C_E_g0, A_R, C_R_g0
  int n;
  double epsilon;
  double gamma;
  double delta;
  double fraction;
  double ratio;           // delta / fraction
  double reference;       // constant used on the right-hand side
};

struct FuzzViolation {
  int trial;
  std::uint64_t sub_seed;
  std::string family;
  std::string what;
  std::string distribution_json;
  int n;
};

struct FuzzMax {
  double ratio = 0.0;
  double reference = 0.0;
  int trial = -1;
};

struct FuzzReport {
  std::uint64_t seed = 0;
  int trials = 0;
  std::vector<FuzzRecord> records;
  std::vector<FuzzViolation> violations;
  std::map<std::string, FuzzMax> max_ratio;       // by constant
  std::map<std::string, int> property_checks;    // by property name
  std::map<std::string, int> family_counts;
};

/// Sub-seed of trial i: SplitMix64 applied to seed + i.
std::uint64_t fuzz_sub_seed(std::uint64_t seed, int trial);

/// Delta_n / L for n i.i.d. copies of d with a canonical weight.
double delta_over_fraction(const DiscreteDistribution& d, int n, FractionType type,
                           const WeightFunction& g, const FractionParams& params);

FuzzReport inequality_fuzzer(std::uint64_t seed, int trials, const FuzzConfig& config = {});

/// Header: experiment,n,observed,target,error (error = observed - target).
void write_convergence_csv(std::ostream& os, const ConvergenceReport& report);
/// Same schema; experiment is fuzz:<constant>, observed the ratio, target the constant.
void write_fuzz_csv(std::ostream& os, const FuzzReport& report);

std::string distribution_to_json(const DiscreteDistribution& d);

}  // namespace ltb

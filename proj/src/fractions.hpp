#pragma once

#include <functional>
#include <span>
#include <string>

#include "discrete.hpp"

namespace ltb {

enum class WeightKind { GStar, GConst, G0, G1, Custom };

/// Member of the weight class: g nondecreasing, positive, with z/g(z)
/// nondecreasing. g0 and g1 depend on B_n and are evaluated with it.
class WeightFunction {
 public:
  using Evaluator = std::function<double(double)>;

  static WeightFunction g_star() { return WeightFunction(WeightKind::GStar, {}); }
  static WeightFunction g_const() { return WeightFunction(WeightKind::GConst, {}); }
  static WeightFunction g0() { return WeightFunction(WeightKind::G0, {}); }
  static WeightFunction g1() { return WeightFunction(WeightKind::G1, {}); }
  /// Throws ValidationError if g fails the class checks on a log grid over [1e-6, 1e6].
  static WeightFunction custom(Evaluator g);

  WeightKind kind() const noexcept { return kind_; }
  bool canonical() const noexcept { return kind_ != WeightKind::Custom; }
  const char* name() const noexcept;

  double operator()(double z, double b) const;

  /// lim_{z->inf} (g(z)/z) * (b/g(b)); defined for canonical weights only.
  double ratio_at_infinity() const;

 private:
  WeightFunction(WeightKind kind, Evaluator g) : kind_(kind), g_(std::move(g)) {}

  WeightKind kind_;
  Evaluator g_;
};

/// Truncation level epsilon (may be +inf) and third-moment weight gamma.
struct FractionParams {
  double epsilon;
  double gamma;

  void validate() const;
};

enum class FractionType { Esseen, Rozovskii };
enum class FractionMethod { BruteForce, ClosedForm };

/// How the supremum is reached at attained_z: at the point itself, as z
/// decreases to it, or as z increases to it.
enum class SupLocation { Attained, RightLimit, LeftLimit, NotTracked };

struct FractionValue {
  double value;
  double attained_z;
  SupLocation location;
  FractionMethod method;
};

const char* sup_location_name(SupLocation loc) noexcept;

/// L_n(z) = B_n^-2 sum_k E X_k^2 1(|X_k| >= z B_n).
double lindeberg_fraction(std::span<const DiscreteDistribution> dists, double z);
double lindeberg_fraction(const DiscreteDistribution& d, int n, double z);

/// M_n(z) = B_n^-3 sum_k E X_k^3 1(|X_k| < z B_n); z may be +inf.
double third_moment_fraction(std::span<const DiscreteDistribution> dists, double z);
/// Lambda_n(z), the absolute counterpart of M_n(z).
double abs_third_moment_fraction(std::span<const DiscreteDistribution> dists, double z);

FractionValue esseen_fraction(std::span<const DiscreteDistribution> dists,
                              const WeightFunction& g, const FractionParams& params);
FractionValue esseen_fraction(const DiscreteDistribution& d, int n, const WeightFunction& g,
                              const FractionParams& params);

FractionValue rozovskii_fraction(std::span<const DiscreteDistribution> dists,
                                 const WeightFunction& g, const FractionParams& params);
FractionValue rozovskii_fraction(const DiscreteDistribution& d, int n,
                                 const WeightFunction& g, const FractionParams& params);

FractionValue fraction(FractionType type, const DiscreteDistribution& d, int n,
                       const WeightFunction& g, const FractionParams& params);

/// Closed form for n i.i.d. copies of two_point(p), p in [1/2, 1), canonical g.
double two_point_fraction_closed_form(FractionType type, const WeightFunction& g, double p,
                                      int n, const FractionParams& params);

}  // namespace ltb

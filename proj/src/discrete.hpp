#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ltb {

struct Atom {
  double value;
  double prob;
};

struct DistributionOptions {
  bool allow_nonzero_mean = false;
  double prob_sum_tol = 1e-12;
  double mean_tol = 1e-12;
};

/// Finite discrete law with strictly increasing atom values and positive
/// probabilities summing to one. Zero variance is rejected.
class DiscreteDistribution {
 public:
  static DiscreteDistribution from_atoms(std::vector<Atom> atoms,
                                         const DistributionOptions& options = {});

  const std::vector<Atom>& atoms() const noexcept { return atoms_; }
  std::size_t size() const noexcept { return atoms_.size(); }
  double mean() const noexcept { return mean_; }
  double variance() const noexcept { return variance_; }
  double max_abs_value() const noexcept;

 private:
  DiscreteDistribution(std::vector<Atom> atoms, double mean, double variance)
      : atoms_(std::move(atoms)), mean_(mean), variance_(variance) {}

  std::vector<Atom> atoms_;
  double mean_;
  double variance_;
};

/// P(X = sqrt(q/p)) = p, P(X = -sqrt(p/q)) = q.
DiscreteDistribution two_point(double p);

/// P(X = -1) = P(X = 1) = p/2, P(X = 0) = 1 - p.
DiscreteDistribution symmetric_three_point(double p);

/// E X^2 1(|X| >= z).
double tail_second_moment(const DiscreteDistribution& d, double z);
/// E X^3 1(|X| < z).
double trunc_third_moment(const DiscreteDistribution& d, double z);
/// E |X|^3 1(|X| < z).
double trunc_abs_third_moment(const DiscreteDistribution& d, double z);

/// Exact law of the standardized sum (S_n - E S_n) / B_n.
struct SumLaw {
  int n = 0;
  double b_n = 0.0;
  double mean = 0.0;                 // mean of one summand
  std::vector<Atom> atoms;           // standardized, strictly increasing
  long double dropped_mass = 0.0L;   // total of probabilities below the storage floor

  /// Probability that the unstandardized sum S_n equals s; 0 when s is not an atom.
  double prob_of_sum(double s) const;
};

struct ConvolutionOptions {
  std::size_t max_atoms = 2'000'000;
};

SumLaw convolve_iid(const DiscreteDistribution& d, int n,
                    const ConvolutionOptions& options = {});

/// Law of the standardized sum of independent, non-identical summands.
SumLaw convolve(std::span<const DiscreteDistribution> summands,
                const ConvolutionOptions& options = {});

/// sup_x |P(S < x) - Phi(x)| for a law given by sorted atoms.
double uniform_distance_to_normal(std::span<const Atom> atoms);
double uniform_distance_to_normal(const SumLaw& law);

/// Steps a lattice i.i.d. sum one summand at a time; each step costs O(support).
class IidSumSequence {
 public:
  explicit IidSumSequence(const DiscreteDistribution& base,
                          const ConvolutionOptions& options = {});

  void advance();
  int n() const noexcept { return n_; }
  double uniform_distance() const;
  SumLaw law() const;

 private:
  std::vector<long double> base_probs_;   // by lattice index
  std::vector<long double> probs_;        // current sum, indices offset_..offset_+size-1
  std::size_t offset_ = 0;
  double origin_;                         // smallest base atom
  double span_;                           // lattice span
  double mean_;
  double variance_;
  int n_ = 0;
  long double dropped_mass_ = 0.0L;
  std::size_t max_atoms_;
};

/// Distribution from {"atoms":[{"x":..,"p":..},...]}. Throws ParseError with
/// 1-based line/column on malformed input, ValidationError on bad atoms.
DiscreteDistribution parse_distribution_json(std::string_view text,
                                             const DistributionOptions& options = {});

}  // namespace ltb

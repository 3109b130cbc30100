#include "discrete.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

#include <json.hpp>

#include "error.hpp"
#include "specfun.hpp"

namespace ltb {

namespace {

// Probabilities below this are dropped during convolution (and tallied) so
// that binomial tails never reach the slow subnormal range.
constexpr long double kProbFloor = 1e-300L;
constexpr int kMaxLatticeDivisor = 64;
constexpr double kLatticeRelTol = 1e-12;
constexpr double kMergeRelTol = 1e-12;

struct Lattice {
  double origin;
  double span;
  std::vector<std::size_t> index;  // per atom
  std::size_t max_index;
};

std::optional<Lattice> detect_lattice(const std::vector<Atom>& atoms) {
  if (atoms.size() < 2) return std::nullopt;
  const double origin = atoms.front().value;
  const double width = atoms.back().value - origin;
  const double first_gap = atoms[1].value - origin;
  for (int k = 1; k <= kMaxLatticeDivisor; ++k) {
    const double h = first_gap / k;
    Lattice lat{origin, h, {}, 0};
    lat.index.reserve(atoms.size());
    bool ok = true;
    for (const Atom& a : atoms) {
      const double r = (a.value - origin) / h;
      const double idx = std::round(r);
      if (std::fabs(r - idx) * h > kLatticeRelTol * width) {
        ok = false;
        break;
      }
      lat.index.push_back(static_cast<std::size_t>(idx));
    }
    if (ok) {
      lat.max_index = lat.index.back();
      return lat;
    }
  }
  return std::nullopt;
}

void check_size(std::size_t count, const ConvolutionOptions& options) {
  if (count > options.max_atoms) {
    std::ostringstream os;
    os << "convolution would need " << count << " atoms, limit is " << options.max_atoms;
    throw SizeLimitError(os.str());
  }
}

// One convolution step on index arrays; returns the new offset.
std::size_t lattice_step(std::vector<long double>& probs, std::size_t offset,
                         const std::vector<long double>& base,
                         long double& dropped) {
  std::vector<long double> next(probs.size() + base.size() - 1, 0.0L);
  for (std::size_t i = 0; i < probs.size(); ++i) {
    const long double pi = probs[i];
    if (pi == 0.0L) continue;
    for (std::size_t j = 0; j < base.size(); ++j) next[i + j] += pi * base[j];
  }
  for (auto& v : next) {
    if (v != 0.0L && v < kProbFloor) {
      dropped += v;
      v = 0.0L;
    }
  }
  std::size_t lo = 0;
  while (lo < next.size() && next[lo] == 0.0L) ++lo;
  std::size_t hi = next.size();
  while (hi > lo && next[hi - 1] == 0.0L) --hi;
  probs.assign(next.begin() + static_cast<std::ptrdiff_t>(lo),
               next.begin() + static_cast<std::ptrdiff_t>(hi));
  return offset + lo;
}

std::vector<long double> lattice_probs(const std::vector<Atom>& atoms, const Lattice& lat) {
  std::vector<long double> base(lat.max_index + 1, 0.0L);
  for (std::size_t i = 0; i < atoms.size(); ++i) base[lat.index[i]] += atoms[i].prob;
  return base;
}

template <class ValueAt, class ProbAt>
double distance_impl(std::size_t count, ValueAt value_at, ProbAt prob_at) {
  // Left of zero use prefix sums against Phi(v); right of zero use suffix sums
  // against Phi(-v), so both tails keep full relative accuracy.
  double best = 0.0;
  long double below = 0.0L;  // P(S < v_i)
  for (std::size_t i = 0; i < count; ++i) {
    const double v = value_at(i);
    const long double p = prob_at(i);
    if (v > 0.0) break;
    const long double phi = specfun::std_normal_cdf(v);
    best = std::max(best, static_cast<double>(std::fabs(below - phi)));
    below += p;
    best = std::max(best, static_cast<double>(std::fabs(below - phi)));
  }
  long double above = 0.0L;  // P(S > v_i)
  for (std::size_t k = count; k-- > 0;) {
    const double v = value_at(k);
    const long double p = prob_at(k);
    if (v <= 0.0) break;
    const long double tail = specfun::std_normal_cdf(-v);
    best = std::max(best, static_cast<double>(std::fabs(above - tail)));
    above += p;
    best = std::max(best, static_cast<double>(std::fabs(above - tail)));
  }
  return best;
}

struct RawSum {
  std::vector<std::pair<double, long double>> atoms;  // unstandardized, sorted
};

RawSum generic_product(const RawSum& acc, const std::vector<Atom>& next, double scale,
                       const ConvolutionOptions& options) {
  check_size(acc.atoms.size() * next.size(), options);
  std::vector<std::pair<double, long double>> raw;
  raw.reserve(acc.atoms.size() * next.size());
  for (const auto& [v, p] : acc.atoms) {
    for (const Atom& a : next) raw.emplace_back(v + a.value, p * a.prob);
  }
  std::sort(raw.begin(), raw.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  RawSum out;
  const double tol = kMergeRelTol * scale;
  for (const auto& [v, p] : raw) {
    if (!out.atoms.empty() && v - out.atoms.back().first <= tol) {
      out.atoms.back().second += p;
    } else {
      out.atoms.emplace_back(v, p);
    }
  }
  check_size(out.atoms.size(), options);
  return out;
}

SumLaw finish_generic(const RawSum& raw, int n, double total_mean, double total_var,
                      double per_summand_mean) {
  SumLaw law;
  law.n = n;
  law.mean = per_summand_mean;
  law.b_n = std::sqrt(total_var);
  law.atoms.reserve(raw.atoms.size());
  for (const auto& [v, p] : raw.atoms) {
    law.atoms.push_back({(v - total_mean) / law.b_n, static_cast<double>(p)});
  }
  return law;
}

}  // namespace

DiscreteDistribution DiscreteDistribution::from_atoms(std::vector<Atom> atoms,
                                                      const DistributionOptions& options) {
  if (atoms.empty()) throw ValidationError("distribution has no atoms");
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    const Atom& a = atoms[i];
    if (!std::isfinite(a.value)) {
      std::ostringstream os;
      os << "atom " << i << ": value must be finite";
      throw ValidationError(os.str());
    }
    if (!std::isfinite(a.prob) || !(a.prob > 0.0)) {
      std::ostringstream os;
      os << "atom " << i << ": probability must be positive, got " << a.prob;
      throw ValidationError(os.str());
    }
  }
  std::sort(atoms.begin(), atoms.end(),
            [](const Atom& a, const Atom& b) { return a.value < b.value; });
  for (std::size_t i = 1; i < atoms.size(); ++i) {
    if (atoms[i].value == atoms[i - 1].value) {
      std::ostringstream os;
      os << "duplicate atom value " << atoms[i].value;
      throw ValidationError(os.str());
    }
  }
  long double total = 0.0L;
  long double first = 0.0L;
  double max_abs = 0.0;
  for (const Atom& a : atoms) {
    total += a.prob;
    first += static_cast<long double>(a.prob) * a.value;
    max_abs = std::max(max_abs, std::fabs(a.value));
  }
  if (std::fabs(static_cast<double>(total) - 1.0) > options.prob_sum_tol) {
    std::ostringstream os;
    os.precision(17);
    os << "probabilities sum to " << static_cast<double>(total) << ", expected 1";
    throw ValidationError(os.str());
  }
  const double mean = static_cast<double>(first);
  if (!options.allow_nonzero_mean &&
      std::fabs(mean) > options.mean_tol * std::max(1.0, max_abs)) {
    std::ostringstream os;
    os.precision(17);
    os << "mean is " << mean << ", expected 0";
    throw ValidationError(os.str());
  }
  long double second = 0.0L;
  for (const Atom& a : atoms) {
    const long double c = static_cast<long double>(a.value) - mean;
    second += a.prob * c * c;
  }
  const double variance = static_cast<double>(second);
  if (!(variance > 0.0)) throw ValidationError("distribution is degenerate (zero variance)");
  return DiscreteDistribution(std::move(atoms), mean, variance);
}

double DiscreteDistribution::max_abs_value() const noexcept {
  return std::max(std::fabs(atoms_.front().value), std::fabs(atoms_.back().value));
}

DiscreteDistribution two_point(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    std::ostringstream os;
    os << "two_point: p must lie in (0, 1), got " << p;
    throw DomainError(os.str());
  }
  const double q = 1.0 - p;
  return DiscreteDistribution::from_atoms(
      {{-std::sqrt(p / q), q}, {std::sqrt(q / p), p}});
}

DiscreteDistribution symmetric_three_point(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    std::ostringstream os;
    os << "symmetric_three_point: p must lie in (0, 1), got " << p;
    throw DomainError(os.str());
  }
  return DiscreteDistribution::from_atoms({{-1.0, 0.5 * p}, {0.0, 1.0 - p}, {1.0, 0.5 * p}});
}

namespace {

void check_level(double z, const char* who) {
  if (!(z > 0.0)) {
    std::ostringstream os;
    os << who << ": truncation level must be positive, got " << z;
    throw DomainError(os.str());
  }
}

}  // namespace

double tail_second_moment(const DiscreteDistribution& d, double z) {
  check_level(z, "tail_second_moment");
  long double s = 0.0L;
  for (const Atom& a : d.atoms()) {
    if (std::fabs(a.value) >= z) s += static_cast<long double>(a.prob) * a.value * a.value;
  }
  return static_cast<double>(s);
}

double trunc_third_moment(const DiscreteDistribution& d, double z) {
  check_level(z, "trunc_third_moment");
  long double s = 0.0L;
  for (const Atom& a : d.atoms()) {
    if (std::fabs(a.value) < z) {
      s += static_cast<long double>(a.prob) * a.value * a.value * a.value;
    }
  }
  return static_cast<double>(s);
}

double trunc_abs_third_moment(const DiscreteDistribution& d, double z) {
  check_level(z, "trunc_abs_third_moment");
  long double s = 0.0L;
  for (const Atom& a : d.atoms()) {
    const double m = std::fabs(a.value);
    if (m < z) s += static_cast<long double>(a.prob) * m * m * m;
  }
  return static_cast<double>(s);
}

double SumLaw::prob_of_sum(double s) const {
  const double v = (s - n * mean) / b_n;
  const double tol = 1e-9 * std::max(1.0, std::fabs(v));
  auto it = std::lower_bound(atoms.begin(), atoms.end(), v - tol,
                             [](const Atom& a, double x) { return a.value < x; });
  if (it != atoms.end() && std::fabs(it->value - v) <= tol) return it->prob;
  return 0.0;
}

SumLaw convolve_iid(const DiscreteDistribution& d, int n, const ConvolutionOptions& options) {
  if (n < 1) {
    std::ostringstream os;
    os << "convolve_iid: n must be at least 1, got " << n;
    throw DomainError(os.str());
  }
  if (auto lat = detect_lattice(d.atoms())) {
    check_size(static_cast<std::size_t>(n) * lat->max_index + 1, options);
    IidSumSequence seq(d, options);
    for (int k = 0; k < n; ++k) seq.advance();
    return seq.law();
  }
  const double scale = n * d.max_abs_value();
  RawSum acc;
  acc.atoms.emplace_back(0.0, 1.0L);
  for (int k = 0; k < n; ++k) acc = generic_product(acc, d.atoms(), scale, options);
  return finish_generic(acc, n, n * d.mean(), n * d.variance(), d.mean());
}

SumLaw convolve(std::span<const DiscreteDistribution> summands,
                const ConvolutionOptions& options) {
  if (summands.empty()) throw DomainError("convolve: no summands");
  double scale = 0.0;
  double total_mean = 0.0;
  double total_var = 0.0;
  for (const auto& d : summands) {
    scale += d.max_abs_value();
    total_mean += d.mean();
    total_var += d.variance();
  }
  RawSum acc;
  acc.atoms.emplace_back(0.0, 1.0L);
  for (const auto& d : summands) acc = generic_product(acc, d.atoms(), scale, options);
  const int n = static_cast<int>(summands.size());
  return finish_generic(acc, n, total_mean, total_var, total_mean / n);
}

double uniform_distance_to_normal(std::span<const Atom> atoms) {
  return distance_impl(
      atoms.size(), [&](std::size_t i) { return atoms[i].value; },
      [&](std::size_t i) { return static_cast<long double>(atoms[i].prob); });
}

double uniform_distance_to_normal(const SumLaw& law) {
  return uniform_distance_to_normal(std::span<const Atom>(law.atoms));
}

IidSumSequence::IidSumSequence(const DiscreteDistribution& base,
                               const ConvolutionOptions& options)
    : origin_(base.atoms().front().value),
      span_(0.0),
      mean_(base.mean()),
      variance_(base.variance()),
      max_atoms_(options.max_atoms) {
  auto lat = detect_lattice(base.atoms());
  if (!lat) throw UnsupportedError("IidSumSequence requires a lattice distribution");
  span_ = lat->span;
  base_probs_ = lattice_probs(base.atoms(), *lat);
  probs_ = {1.0L};
}

void IidSumSequence::advance() {
  check_size(probs_.size() + base_probs_.size() - 1, ConvolutionOptions{max_atoms_});
  offset_ = lattice_step(probs_, offset_, base_probs_, dropped_mass_);
  ++n_;
}

double IidSumSequence::uniform_distance() const {
  if (n_ == 0) throw DomainError("IidSumSequence: no summands yet");
  const double b = std::sqrt(n_ * variance_);
  const double shift = n_ * (origin_ - mean_);
  return distance_impl(
      probs_.size(),
      [&](std::size_t i) {
        return (shift + static_cast<double>(offset_ + i) * span_) / b;
      },
      [&](std::size_t i) { return probs_[i]; });
}

SumLaw IidSumSequence::law() const {
  if (n_ == 0) throw DomainError("IidSumSequence: no summands yet");
  SumLaw law;
  law.n = n_;
  law.mean = mean_;
  law.b_n = std::sqrt(n_ * variance_);
  law.dropped_mass = dropped_mass_;
  const double shift = n_ * (origin_ - mean_);
  for (std::size_t i = 0; i < probs_.size(); ++i) {
    if (probs_[i] == 0.0L) continue;
    law.atoms.push_back({(shift + static_cast<double>(offset_ + i) * span_) / law.b_n,
                         static_cast<double>(probs_[i])});
  }
  return law;
}

namespace {

std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte) {
  // nlohmann reports a 1-based byte count of characters read so far.
  const std::size_t end = std::min(byte > 0 ? byte - 1 : 0, text.size());
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i < end; ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace

DiscreteDistribution parse_distribution_json(std::string_view text,
                                             const DistributionOptions& options) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    const auto [line, col] = line_column(text, e.byte);
    std::ostringstream os;
    os << "malformed JSON at line " << line << ", column " << col << ": " << e.what();
    throw ParseError(os.str(), line, col);
  }
  if (!doc.is_object() || !doc.contains("atoms")) {
    throw ParseError("expected an object with an \"atoms\" array", 0, 0);
  }
  const auto& arr = doc["atoms"];
  if (!arr.is_array()) throw ParseError("\"atoms\" must be an array", 0, 0);
  std::vector<Atom> atoms;
  atoms.reserve(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const auto& item = arr[i];
    const auto field = [&](const char* key) {
      if (!item.is_object() || !item.contains(key) || !item[key].is_number()) {
        std::ostringstream os;
        os << "atoms[" << i << "]." << key << ": expected a number";
        throw ParseError(os.str(), 0, 0);
      }
      return item[key].get<double>();
    };
    atoms.push_back({field("x"), field("p")});
  }
  return DiscreteDistribution::from_atoms(std::move(atoms), options);
}

}  // namespace ltb

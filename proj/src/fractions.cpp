#include "fractions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>
#include <vector>

#include "error.hpp"

namespace ltb {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Atom magnitudes this close to eps*B_n are treated as sitting exactly at the
// truncation point; the closed forms use the same tolerance on their case splits.
constexpr double kTieRelTol = 1e-12;
constexpr double kBranchBoundRelGap = 1e-13;
constexpr std::size_t kBranchBoundMaxNodes = 1'000'000;
constexpr int kCustomGridPoints = 1000;

bool tie_le(double x, double y) { return x <= y + kTieRelTol * std::fabs(y); }

// Per-magnitude moment sums over all summands.
struct Profile {
  std::vector<double> mags;        // distinct positive |x|, increasing
  std::vector<long double> tail2;  // tail2[j] = sum over mags[k], k >= j, of p x^2
  std::vector<long double> head3;  // head3[j] = sum over mags[k], k < j, of p x^3
  double b = 0.0;
};

Profile make_profile(std::span<const DiscreteDistribution> dists, int multiplicity) {
  struct Entry {
    double mag;
    long double x2;
    long double x3;
  };
  std::vector<Entry> entries;
  long double var = 0.0L;
  for (const auto& d : dists) {
    var += static_cast<long double>(d.variance()) * multiplicity;
    for (const Atom& a : d.atoms()) {
      if (a.value == 0.0) continue;
      const long double w = static_cast<long double>(a.prob) * multiplicity;
      const long double x = a.value;
      entries.push_back({std::fabs(a.value), w * x * x, w * x * x * x});
    }
  }
  if (!(var > 0.0L)) throw ValidationError("summands have zero total variance");
  std::sort(entries.begin(), entries.end(),
            [](const Entry& l, const Entry& r) { return l.mag < r.mag; });
  Profile prof;
  std::vector<long double> x2;
  std::vector<long double> x3;
  for (const Entry& e : entries) {
    if (!prof.mags.empty() && prof.mags.back() == e.mag) {
      x2.back() += e.x2;
      x3.back() += e.x3;
    } else {
      prof.mags.push_back(e.mag);
      x2.push_back(e.x2);
      x3.push_back(e.x3);
    }
  }
  const std::size_t m = prof.mags.size();
  prof.tail2.assign(m + 1, 0.0L);
  prof.head3.assign(m + 1, 0.0L);
  for (std::size_t j = m; j-- > 0;) prof.tail2[j] = prof.tail2[j + 1] + x2[j];
  for (std::size_t j = 0; j < m; ++j) prof.head3[j + 1] = prof.head3[j] + x3[j];
  prof.b = std::sqrt(static_cast<double>(var));
  return prof;
}

// Number of magnitudes strictly inside (0, cap); snaps cap onto a magnitude
// within tolerance.
std::size_t count_below(const Profile& prof, double& cap) {
  if (std::isinf(cap)) return prof.mags.size();
  const double guard = cap * (1.0 - kTieRelTol);
  const auto it = std::upper_bound(prof.mags.begin(), prof.mags.end(), guard);
  const std::size_t j = static_cast<std::size_t>(it - prof.mags.begin());
  if (j < prof.mags.size() && std::fabs(prof.mags[j] - cap) <= kTieRelTol * cap) {
    cap = prof.mags[j];
  }
  return j;
}

struct Best {
  double value = -1.0;
  double u = 0.0;
  SupLocation loc = SupLocation::Attained;

  void offer(double v, double at, SupLocation where) {
    if (v > value) {
      value = v;
      u = at;
      loc = where;
    }
  }
};

// Piece (lo, hi] of u on which sigma^2 and mu are constant.
struct Piece {
  double lo;
  double hi;
  bool closed_right;
  double a;  // gamma |sum mu| / B^2
  double s;  // sum sigma^2 / B^2
};

class EsseenIntegrand {
 public:
  EsseenIntegrand(const WeightFunction& g, double b) : g_(g), b_(b), gb_(g(b, b)) {}

  double operator()(double u, double a, double s) const {
    return g_(u, b_) / gb_ * (a / u + s);
  }
  // Upper bound on [lo, hi] from g nondecreasing and g(u)/u nonincreasing.
  double upper_bound(double lo, double hi, double a, double s) const {
    return (a * g_(lo, b_) / lo + s * g_(hi, b_)) / gb_;
  }

 private:
  const WeightFunction& g_;
  double b_;
  double gb_;
};

void branch_and_bound(const EsseenIntegrand& h, const Piece& piece, double b, Best& best,
                      std::size_t& nodes) {
  struct Node {
    double lo;
    double hi;
    double ub;
    bool operator<(const Node& o) const { return ub < o.ub; }
  };
  const auto gap = [&] { return kBranchBoundRelGap * std::max(best.value, 1e-300); };
  std::priority_queue<Node> heap;
  heap.push({piece.lo, piece.hi, h.upper_bound(piece.lo, piece.hi, piece.a, piece.s)});
  while (!heap.empty()) {
    const Node top = heap.top();
    if (top.ub <= best.value + gap()) break;
    heap.pop();
    const double mid = std::sqrt(top.lo * top.hi);
    if (!(mid > top.lo && mid < top.hi)) continue;
    if (++nodes > kBranchBoundMaxNodes) {
      throw ConvergenceError("branch and bound for custom weight exceeded node limit");
    }
    best.offer(h(mid, piece.a, piece.s), mid / b, SupLocation::Attained);
    for (const auto& [lo, hi] : {std::pair{top.lo, mid}, std::pair{mid, top.hi}}) {
      const double ub = h.upper_bound(lo, hi, piece.a, piece.s);
      if (ub > best.value + gap()) heap.push({lo, hi, ub});
    }
  }
}

FractionValue esseen_impl(const Profile& prof, const WeightFunction& g,
                          const FractionParams& params) {
  params.validate();
  const double b = prof.b;
  const double b2 = b * b;
  const double gamma = params.gamma;
  double cap = std::isinf(params.epsilon) ? kInf : params.epsilon * b;
  const std::size_t below = count_below(prof, cap);

  std::vector<Piece> pieces;
  for (std::size_t j = 0; j <= below; ++j) {
    const bool last = j == below;
    Piece pc{j == 0 ? 0.0 : prof.mags[j - 1], last ? cap : prof.mags[j], !last,
             gamma * static_cast<double>(std::fabs(prof.head3[j])) / b2,
             static_cast<double>(prof.tail2[j]) / b2};
    if (g.canonical() && pc.lo < b && b < pc.hi) {
      pieces.push_back({pc.lo, b, true, pc.a, pc.s});
      pc.lo = b;
    }
    pieces.push_back(pc);
  }

  const EsseenIntegrand h(g, b);
  Best best;
  for (const Piece& pc : pieces) {
    // At lo == 0 no atom lies below, so a == 0 and h is nondecreasing there.
    if (pc.lo > 0.0) best.offer(h(pc.lo, pc.a, pc.s), pc.lo / b, SupLocation::RightLimit);
    // Beyond the last atom s == 0 and h is nonincreasing.
    if (std::isfinite(pc.hi)) {
      best.offer(h(pc.hi, pc.a, pc.s), pc.hi / b,
                 pc.closed_right ? SupLocation::Attained : SupLocation::LeftLimit);
    }
  }
  if (!g.canonical()) {
    std::size_t nodes = 0;
    for (const Piece& pc : pieces) {
      if (pc.lo > 0.0 && std::isfinite(pc.hi) && pc.a > 0.0 && pc.s > 0.0) {
        branch_and_bound(h, pc, b, best, nodes);
      }
    }
  }
  return {std::max(best.value, 0.0), best.u, best.loc, FractionMethod::BruteForce};
}

FractionValue rozovskii_impl(const Profile& prof, const WeightFunction& g,
                             const FractionParams& params) {
  params.validate();
  const double b = prof.b;
  const double b2 = b * b;
  const double gb = g(b, b);
  double cap = std::isinf(params.epsilon) ? kInf : params.epsilon * b;
  const std::size_t below = count_below(prof, cap);

  Best best;
  for (std::size_t j = 0; j < below; ++j) {
    const double m = prof.mags[j];
    best.offer(g(m, b) / gb * static_cast<double>(prof.tail2[j]) / b2, m / b,
               SupLocation::Attained);
  }
  const double third = static_cast<double>(std::fabs(prof.head3[below])) / (b2 * b);
  double endpoint_term = 0.0;
  if (std::isfinite(cap)) {
    best.offer(g(cap, b) / gb * static_cast<double>(prof.tail2[below]) / b2,
               params.epsilon, SupLocation::LeftLimit);
    endpoint_term = params.gamma * g(cap, b) / (params.epsilon * gb) * third;
  } else if (third > 0.0) {
    endpoint_term = params.gamma * g.ratio_at_infinity() * third;
  }
  return {endpoint_term + std::max(best.value, 0.0), best.u, best.loc,
          FractionMethod::BruteForce};
}

void check_n(int n) {
  if (n < 1) {
    std::ostringstream os;
    os << "number of summands must be at least 1, got " << n;
    throw DomainError(os.str());
  }
}

}  // namespace

WeightFunction WeightFunction::custom(Evaluator g) {
  if (!g) throw ValidationError("custom weight: empty evaluator");
  const double lo = std::log(1e-6);
  const double hi = std::log(1e6);
  double prev_z = 0.0;
  double prev_g = 0.0;
  for (int i = 0; i < kCustomGridPoints; ++i) {
    const double z = std::exp(lo + (hi - lo) * i / (kCustomGridPoints - 1));
    const double v = g(z);
    std::ostringstream os;
    os.precision(17);
    if (!std::isfinite(v) || !(v > 0.0)) {
      os << "custom weight: g(" << z << ") = " << v << " is not positive and finite";
      throw ValidationError(os.str());
    }
    if (i > 0) {
      if (v < prev_g * (1.0 - 1e-12)) {
        os << "custom weight: g decreases between z=" << prev_z << " and z=" << z;
        throw ValidationError(os.str());
      }
      if (v / z > prev_g / prev_z * (1.0 + 1e-12)) {
        os << "custom weight: z/g(z) decreases between z=" << prev_z << " and z=" << z;
        throw ValidationError(os.str());
      }
    }
    prev_z = z;
    prev_g = v;
  }
  return WeightFunction(WeightKind::Custom, std::move(g));
}

const char* WeightFunction::name() const noexcept {
  switch (kind_) {
    case WeightKind::GStar: return "gstar";
    case WeightKind::GConst: return "gc";
    case WeightKind::G0: return "g0";
    case WeightKind::G1: return "g1";
    case WeightKind::Custom: return "custom";
  }
  return "custom";
}

double WeightFunction::operator()(double z, double b) const {
  switch (kind_) {
    case WeightKind::GStar: return z;
    case WeightKind::GConst: return 1.0;
    case WeightKind::G0: return std::min(z, b);
    case WeightKind::G1: return std::max(z, b);
    case WeightKind::Custom: return g_(z);
  }
  return g_(z);
}

double WeightFunction::ratio_at_infinity() const {
  switch (kind_) {
    case WeightKind::GStar:
    case WeightKind::G1: return 1.0;
    case WeightKind::GConst:
    case WeightKind::G0: return 0.0;
    case WeightKind::Custom: break;
  }
  throw DomainError("infinite epsilon with a custom weight: g(eps B)/eps has no computable limit");
}

void FractionParams::validate() const {
  if (!(epsilon > 0.0)) {
    std::ostringstream os;
    os << "epsilon must be positive (or inf), got " << epsilon;
    throw DomainError(os.str());
  }
  if (!(gamma > 0.0) || std::isinf(gamma)) {
    std::ostringstream os;
    os << "gamma must be positive and finite, got " << gamma;
    throw DomainError(os.str());
  }
}

const char* sup_location_name(SupLocation loc) noexcept {
  switch (loc) {
    case SupLocation::Attained: return "attained";
    case SupLocation::RightLimit: return "right-limit";
    case SupLocation::LeftLimit: return "left-limit";
    case SupLocation::NotTracked: return "n/a";
  }
  return "n/a";
}

double lindeberg_fraction(std::span<const DiscreteDistribution> dists, double z) {
  const Profile prof = make_profile(dists, 1);
  if (!(z > 0.0)) throw DomainError("lindeberg_fraction: z must be positive");
  long double s = 0.0L;
  for (const auto& d : dists) s += tail_second_moment(d, z * prof.b);
  return static_cast<double>(s) / (prof.b * prof.b);
}

double lindeberg_fraction(const DiscreteDistribution& d, int n, double z) {
  check_n(n);
  if (!(z > 0.0)) throw DomainError("lindeberg_fraction: z must be positive");
  const double b = std::sqrt(n * d.variance());
  return n * tail_second_moment(d, z * b) / (b * b);
}

double third_moment_fraction(std::span<const DiscreteDistribution> dists, double z) {
  const Profile prof = make_profile(dists, 1);
  if (!(z > 0.0)) throw DomainError("third_moment_fraction: z must be positive");
  long double s = 0.0L;
  for (const auto& d : dists) s += trunc_third_moment(d, z * prof.b);
  return static_cast<double>(s) / (prof.b * prof.b * prof.b);
}

double abs_third_moment_fraction(std::span<const DiscreteDistribution> dists, double z) {
  const Profile prof = make_profile(dists, 1);
  if (!(z > 0.0)) throw DomainError("abs_third_moment_fraction: z must be positive");
  long double s = 0.0L;
  for (const auto& d : dists) s += trunc_abs_third_moment(d, z * prof.b);
  return static_cast<double>(s) / (prof.b * prof.b * prof.b);
}

FractionValue esseen_fraction(std::span<const DiscreteDistribution> dists,
                              const WeightFunction& g, const FractionParams& params) {
  return esseen_impl(make_profile(dists, 1), g, params);
}

FractionValue esseen_fraction(const DiscreteDistribution& d, int n, const WeightFunction& g,
                              const FractionParams& params) {
  check_n(n);
  return esseen_impl(make_profile(std::span(&d, 1), n), g, params);
}

FractionValue rozovskii_fraction(std::span<const DiscreteDistribution> dists,
                                 const WeightFunction& g, const FractionParams& params) {
  return rozovskii_impl(make_profile(dists, 1), g, params);
}

FractionValue rozovskii_fraction(const DiscreteDistribution& d, int n,
                                 const WeightFunction& g, const FractionParams& params) {
  check_n(n);
  return rozovskii_impl(make_profile(std::span(&d, 1), n), g, params);
}

FractionValue fraction(FractionType type, const DiscreteDistribution& d, int n,
                       const WeightFunction& g, const FractionParams& params) {
  return type == FractionType::Esseen ? esseen_fraction(d, n, g, params)
                                      : rozovskii_fraction(d, n, g, params);
}

namespace {

class TwoPointClosedForm {
 public:
  TwoPointClosedForm(double p, int n, double gamma)
      : p_(p), q_(1.0 - p), n_(n), gamma_(gamma), spq_(std::sqrt(n * p * q_)) {}

  // Position of n eps^2 relative to q/p and p/q: 1, 2 or 3.
  int region(double eps) const {
    if (std::isinf(eps)) return 3;
    const double ne2 = n_ * eps * eps;
    if (tie_le(ne2, q_ / p_)) return 1;
    if (tie_le(ne2, p_ / q_)) return 2;
    return 3;
  }
  bool n_le(double x) const { return tie_le(static_cast<double>(n_), x); }
  bool ne2_le_pq(double eps) const {
    return !std::isinf(eps) && tie_le(n_ * eps * eps, p_ / q_);
  }

  double esseen_gstar(double eps) const {
    switch (region(eps)) {
      case 1: return eps;
      case 2: return std::max(small(), gamma_ * a3() + eps * p_);
      default:
        return std::max({q_, p_ > 0.5 ? gamma_ * q_ * q_ + p_ * p_ : 0.0,
                         gamma_ * (p_ - q_)}) / spq_;
    }
  }
  double esseen_gc(double eps) const {
    switch (region(eps)) {
      case 1: return 1.0;
      case 2: return std::max(1.0, gamma_ * q_ + p_);
      default:
        return std::max({1.0, p_ > 0.5 ? gamma_ * q_ + p_ : 0.0, gamma_ * (p_ - q_) / p_});
    }
  }
  double rozovskii_gstar(double eps) const {
    switch (region(eps)) {
      case 1: return eps;
      case 2: return gamma_ * a3() + std::max(small(), eps * p_);
      default: return gamma_ * ad() + std::max(small(), large());
    }
  }
  double rozovskii_gc(double eps) const {
    const double w = gamma_ / eps;  // 0 for eps = inf
    switch (region(eps)) {
      case 1: return 1.0;
      case 2: return w * a3() + 1.0;
      default: return w * ad() + 1.0;
    }
  }
  // Beyond z = 1 the g0 integrand is gamma |M(z)| / z + L(z); once the large
  // atom sqrt(p/(nq)) >= 1 falls inside (1, eps) its right limit adds
  // gamma (p - q) / p to the g* value at eps = 1.
  double esseen_g0(double eps) const {
    const double base = esseen_gstar(std::min(eps, 1.0));
    if (eps > 1.0 && n_le(p_ / q_) && !ne2_le_pq(eps)) {
      return std::max(base, gamma_ * (p_ - q_) / p_);
    }
    return base;
  }
  // eps > 1.
  double esseen_g1(double eps) const {
    if (p_ == 0.5) return 1.0;
    const double base = std::max(1.0, gamma_ * q_ + p_);
    if (ne2_le_pq(eps)) {
      return std::max(base, gamma_ * std::pow(q_, 1.5) / std::sqrt(n_ * p_) + p_ * eps);
    }
    if (n_le(p_ / q_)) {
      return std::max({base, (gamma_ * q_ * q_ + p_ * p_) / spq_, gamma_ * ad()});
    }
    return std::max(base, gamma_ * (p_ - q_) / p_);
  }
  // eps > 1.
  double rozovskii_g0(double eps) const {
    const double w = gamma_ / eps;
    if (n_le(q_ / p_)) return (ne2_le_pq(eps) ? w * a3() : w * ad()) + 1.0;
    if (ne2_le_pq(eps)) return w * a3() + std::max(small(), p_);
    if (n_le(p_ / q_)) return w * ad() + std::max(small(), p_);
    return w * ad() + std::max(small(), large());
  }
  // eps > 1.
  double rozovskii_g1(double eps) const {
    if (n_le(q_ / p_)) {
      return ne2_le_pq(eps) ? gamma_ * a3() + std::max(small(), eps * p_)
                            : gamma_ * ad() + std::max(small(), large());
    }
    if (ne2_le_pq(eps)) return gamma_ * a3() + std::max(eps * p_, 1.0);
    if (n_le(p_ / q_)) return gamma_ * ad() + std::max(large(), 1.0);
    return gamma_ * ad() + 1.0;
  }

 private:
  double small() const { return std::sqrt(q_ / (n_ * p_)); }          // sqrt(q/(np))
  double large() const { return std::sqrt(p_ * p_ * p_ / (n_ * q_)); }  // sqrt(p^3/(nq))
  double a3() const { return std::sqrt(q_ * q_ * q_ / (n_ * p_)); }     // sqrt(q^3/(np))
  double ad() const { return (p_ - q_) / spq_; }                         // (p-q)/sqrt(npq)

  double p_;
  double q_;
  int n_;
  double gamma_;
  double spq_;
};

}  // namespace

double two_point_fraction_closed_form(FractionType type, const WeightFunction& g, double p,
                                      int n, const FractionParams& params) {
  params.validate();
  check_n(n);
  if (!(p >= 0.5 && p < 1.0)) {
    std::ostringstream os;
    os << "closed form requires p in [1/2, 1), got " << p;
    throw DomainError(os.str());
  }
  if (!g.canonical()) throw UnsupportedError("closed form is available for canonical weights only");
  const TwoPointClosedForm cf(p, n, params.gamma);
  const double eps = params.epsilon;
  const bool wide = eps > 1.0;
  if (type == FractionType::Esseen) {
    switch (g.kind()) {
      case WeightKind::GStar: return cf.esseen_gstar(eps);
      case WeightKind::G0: return cf.esseen_g0(eps);
      case WeightKind::GConst: return cf.esseen_gc(eps);
      case WeightKind::G1: return wide ? cf.esseen_g1(eps) : cf.esseen_gc(eps);
      case WeightKind::Custom: break;
    }
  } else {
    switch (g.kind()) {
      case WeightKind::GStar: return cf.rozovskii_gstar(eps);
      case WeightKind::GConst: return cf.rozovskii_gc(eps);
      case WeightKind::G0: return wide ? cf.rozovskii_g0(eps) : cf.rozovskii_gstar(eps);
      case WeightKind::G1: return wide ? cf.rozovskii_g1(eps) : cf.rozovskii_gc(eps);
      case WeightKind::Custom: break;
    }
  }
  throw UnsupportedError("closed form is available for canonical weights only");
}

}  // namespace ltb

#include "experiments.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include <json.hpp>

#include "bounds.hpp"
#include "constants.hpp"
#include "error.hpp"
#include "specfun.hpp"

namespace ltb {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_n_values(const std::vector<int>& n_values) {
  if (n_values.empty()) throw DomainError("n_values must not be empty");
  for (std::size_t i = 0; i < n_values.size(); ++i) {
    if (n_values[i] < 1) throw DomainError("n_values must be positive");
    if (i > 0 && n_values[i] <= n_values[i - 1]) {
      throw DomainError("n_values must be strictly increasing");
    }
  }
}

std::size_t tail_begin(std::size_t size) {
  return static_cast<std::size_t>(std::floor(0.8 * static_cast<double>(size)));
}

}  // namespace

ConvergenceReport esseen_expansion_experiment(double p, const std::vector<int>& n_values) {
  if (!(p >= 0.5 && p < 1.0)) {
    std::ostringstream os;
    os << "esseen expansion: p must lie in [1/2, 1), got " << p;
    throw DomainError(os.str());
  }
  check_n_values(n_values);
  const double q = 1.0 - p;
  ConvergenceReport report;
  report.experiment = "esseen";
  report.n_values = n_values;
  report.target = (p + 1.0) / (3.0 * std::sqrt(2.0 * std::numbers::pi * p * q));
  IidSumSequence seq(two_point(p));
  for (int n : n_values) {
    while (seq.n() < n) seq.advance();
    report.observed.push_back(seq.uniform_distance() * std::sqrt(static_cast<double>(n)));
  }
  const auto first = report.observed.begin() + static_cast<std::ptrdiff_t>(tail_begin(n_values.size()));
  const double running_max = *std::max_element(first, report.observed.end());
  report.max_abs_error_at_tail = std::fabs(running_max - report.target);
  return report;
}

double three_point_zero_probability(double p, int n) {
  if (!(p > 0.0 && p <= 1.0) || n < 1) throw DomainError("three_point_zero_probability: bad p or n");
  // Terms with k pairs of +-1 and n-2k zeros.
  const double lp = std::log(p / 2.0);
  const double lq = p < 1.0 ? std::log1p(-p) : -kInf;
  long double sum = 0.0L;
  for (int k = 0; 2 * k <= n; ++k) {
    const int zeros = n - 2 * k;
    if (zeros > 0 && p == 1.0) continue;
    const double lt = std::lgamma(n + 1.0) - std::lgamma(zeros + 1.0) - 2.0 * std::lgamma(k + 1.0) +
                      2.0 * k * lp + (zeros > 0 ? zeros * lq : 0.0);
    sum += std::exp(static_cast<long double>(lt));
  }
  return static_cast<double>(sum);
}

ConvergenceReport three_point_bessel_experiment(double alpha, const std::vector<int>& n_values) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw DomainError("alpha must be positive and finite");
  check_n_values(n_values);
  for (int n : n_values) {
    if (n % 2 != 0 || !(n > alpha)) {
      std::ostringstream os;
      os << "bessel experiment: n must be even and exceed alpha, got n=" << n;
      throw DomainError(os.str());
    }
  }
  ConvergenceReport report;
  report.experiment = "bessel";
  report.n_values = n_values;
  report.target = 0.5 * specfun::bessel_i0_scaled(alpha);
  for (int n : n_values) {
    const SumLaw law = convolve_iid(symmetric_three_point(alpha / n), n);
    report.observed.push_back(0.5 * law.prob_of_sum(0.0));
  }
  double worst = 0.0;
  for (std::size_t i = tail_begin(n_values.size()); i < n_values.size(); ++i) {
    worst = std::max(worst, std::fabs(report.observed[i] - report.target));
  }
  report.max_abs_error_at_tail = worst;
  return report;
}

const char* fuzz_family_name(FuzzFamily family) noexcept {
  switch (family) {
    case FuzzFamily::Lattice: return "lattice";
    case FuzzFamily::RealValued: return "real";
    case FuzzFamily::TwoPoint: return "two_point";
    case FuzzFamily::ThreePoint: return "three_point";
  }
  return "unknown";
}

void FuzzConfig::validate() const {
  if (families.empty()) throw DomainError("fuzz config needs at least one family");
  if (max_n < 1 || max_n > 200) throw DomainError("fuzz max_n must lie in [1, 200]");
  if (max_n_real < 1 || max_n_real > 6) throw DomainError("fuzz max_n_real must lie in [1, 6]");
}

std::uint64_t fuzz_sub_seed(std::uint64_t seed, int trial) {
  std::uint64_t z = seed + static_cast<std::uint64_t>(trial) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double delta_over_fraction(const DiscreteDistribution& d, int n, FractionType type,
                           const WeightFunction& g, const FractionParams& params) {
  const double delta = uniform_distance_to_normal(convolve_iid(d, n));
  return delta / fraction(type, d, n, g, params).value;
}

std::string distribution_to_json(const DiscreteDistribution& d) {
  nlohmann::json atoms = nlohmann::json::array();
  for (const Atom& a : d.atoms()) atoms.push_back({{"x", a.value}, {"p", a.prob}});
  return nlohmann::json{{"atoms", atoms}}.dump();
}

namespace {

using Rng = std::mt19937_64;

double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

int uniform_int(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

std::vector<double> simplex(Rng& rng, std::size_t k) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> w(k);
  double total = 0.0;
  for (double& x : w) {
    x = e(rng) + 1e-3;
    total += x;
  }
  for (double& x : w) x /= total;
  return w;
}

DiscreteDistribution standardized(std::vector<double> values, const std::vector<double>& probs) {
  double mean = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) mean += values[i] * probs[i];
  double var = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) var += (values[i] - mean) * (values[i] - mean) * probs[i];
  const double sd = std::sqrt(var);
  std::vector<Atom> atoms;
  for (std::size_t i = 0; i < values.size(); ++i) atoms.push_back({(values[i] - mean) / sd, probs[i]});
  DistributionOptions opt;
  opt.mean_tol = 1e-10;
  return DiscreteDistribution::from_atoms(std::move(atoms), opt);
}

DiscreteDistribution draw_lattice(Rng& rng) {
  const int k = uniform_int(rng, 2, 6);
  std::vector<int> pool;
  for (int v = -5; v <= 5; ++v) pool.push_back(v);
  std::shuffle(pool.begin(), pool.end(), rng);
  std::vector<double> values(pool.begin(), pool.begin() + k);
  return standardized(std::move(values), simplex(rng, static_cast<std::size_t>(k)));
}

DiscreteDistribution draw_real(Rng& rng) {
  const int k = uniform_int(rng, 2, 6);
  std::vector<double> values;
  while (static_cast<int>(values.size()) < k) {
    const double v = uniform(rng, -5.0, 5.0);
    bool close = false;
    for (double w : values) close = close || std::fabs(v - w) < 1e-3;
    if (!close) values.push_back(v);
  }
  return standardized(std::move(values), simplex(rng, static_cast<std::size_t>(k)));
}

struct Cell {
  double epsilon;
  double gamma;
  double value;
};

std::vector<Cell> usable_cells(ReferenceTable which) {
  const double gs = constants().gamma_star;
  std::vector<Cell> out;
  for (const ReferenceCell& c : reference_table(which)) {
    if (c.epsilon_zero_plus || c.gamma_any) continue;
    const double gamma = c.gamma_is_star ? gs : c.gamma;
    if (std::isinf(gamma)) continue;
    out.push_back({c.epsilon, gamma, c.value});
  }
  return out;
}

// Table constant usable for the g0 Esseen fraction at (eps, gamma): the fraction
// is nondecreasing in eps and gamma, so a cell at eps = 1 with gamma' <= gamma works.
std::optional<double> esseen_g0_constant(const Cell& cell) {
  if (cell.epsilon <= 1.0) return cell.value;
  const double gs = constants().gamma_star;
  if (cell.gamma >= 0.72) return *reference_lookup(ReferenceTable::EsseenA, 1.0, 0.72);
  if (cell.gamma >= gs) return *reference_lookup(ReferenceTable::EsseenA, 1.0, gs);
  return std::nullopt;
}

WeightFunction random_custom(Rng& rng, double scale) {
  std::array<double, 4> w{};
  for (double& x : w) x = uniform(rng, 0.0, 1.0);
  w[static_cast<std::size_t>(uniform_int(rng, 0, 3))] += 0.5;
  const double knee = uniform(rng, 0.2, 3.0);
  const double power = uniform(rng, 0.1, 0.9);
  return WeightFunction::custom([=](double u) {
    return scale * (w[0] + w[1] * std::min(u, knee) + w[2] * u + w[3] * std::pow(u, power));
  });
}

class Trial {
 public:
  Trial(FuzzReport& report, int index, std::uint64_t sub_seed, std::string family,
        const DiscreteDistribution& d, int n)
      : report_(report), index_(index), sub_seed_(sub_seed), family_(std::move(family)), d_(d), n_(n) {}

  void fail(const std::string& what) {
    report_.violations.push_back({index_, sub_seed_, family_, what, distribution_to_json(d_), n_});
  }

  void property(const std::string& name, bool ok, const std::string& detail) {
    ++report_.property_checks[name];
    if (!ok) fail(name + ": " + detail);
  }

  void inequality(const std::string& constant, double delta, double frac, double reference,
                  double eps, double gamma) {
    const double ratio = delta / frac;
    report_.records.push_back({index_, constant, n_, eps, gamma, delta, frac, ratio, reference});
    FuzzMax& m = report_.max_ratio[constant];
    if (m.trial < 0 || ratio / reference > m.ratio / m.reference) m = {ratio, reference, index_};
    if (!(delta <= reference * frac * (1.0 + 1e-12))) {
      std::ostringstream os;
      os.precision(17);
      os << constant << " violated at eps=" << eps << " gamma=" << gamma << ": Delta=" << delta
         << " > " << reference << " * " << frac;
      fail(os.str());
    }
  }

 private:
  FuzzReport& report_;
  int index_;
  std::uint64_t sub_seed_;
  std::string family_;
  const DiscreteDistribution& d_;
  int n_;
};

bool close_rel(double a, double b, double tol) {
  return std::fabs(a - b) <= tol * std::max({std::fabs(a), std::fabs(b), 1e-300});
}

std::string fmt(double a, double b) {
  std::ostringstream os;
  os.precision(17);
  os << a << " vs " << b;
  return os.str();
}

void check_properties(Trial& t, Rng& rng, const DiscreteDistribution& d, int n, bool symmetric) {
  constexpr std::array<double, 5> kEps = {0.3, 0.7, 1.0, 1.5, 3.0};
  const FractionParams params{kEps[static_cast<std::size_t>(uniform_int(rng, 0, 4))],
                              uniform(rng, 0.1, 5.0)};
  const std::uint64_t custom_seed = rng();
  for (FractionType type : {FractionType::Esseen, FractionType::Rozovskii}) {
    const char* tname = type == FractionType::Esseen ? "esseen" : "rozovskii";
    Rng crng(custom_seed);
    const WeightFunction g = random_custom(crng, 1.0);
    Rng crng2(custom_seed);
    const double c = uniform(rng, 0.0, 1.0) < 0.5 ? 0.1 : 7.0;
    const WeightFunction cg = random_custom(crng2, c);
    const double l0 = fraction(type, d, n, WeightFunction::g0(), params).value;
    const double l1 = fraction(type, d, n, WeightFunction::g1(), params).value;
    const double lg = fraction(type, d, n, g, params).value;
    const double lcg = fraction(type, d, n, cg, params).value;
    t.property(std::string("sandwich_") + tname,
               l0 <= lg * (1.0 + 1e-9) && lg <= l1 * (1.0 + 1e-9),
               fmt(l0, lg) + " vs " + fmt(lg, l1));
    t.property(std::string("scale_") + tname, close_rel(lg, lcg, 1e-12), fmt(lg, lcg));
    const double e1 = std::max(params.epsilon, 1.0);
    const double upper = type == FractionType::Esseen ? e1 * std::max(params.gamma, 1.0)
                                                      : e1 * (params.gamma + 1.0);
    t.property(std::string("g1_bounds_") + tname,
               l1 >= 1.0 - 1e-12 && l1 <= upper * (1.0 + 1e-12), fmt(l1, upper));
  }
  const std::vector<DiscreteDistribution> copies(static_cast<std::size_t>(n), d);
  std::vector<double> zs = {uniform(rng, 0.01, 3.0), kInf};
  const double b = std::sqrt(static_cast<double>(n) * d.variance());
  for (const Atom& a : d.atoms()) {
    if (a.value != 0.0) zs.push_back(std::fabs(a.value) / b);
  }
  for (double z : zs) {
    const double m = third_moment_fraction(copies, z);
    const double lam = abs_third_moment_fraction(copies, z);
    t.property("abs_third_moment_dominates", std::fabs(m) <= lam * (1.0 + 1e-12) + 1e-300,
               fmt(m, lam));
  }
  if (symmetric) {
    const double le = esseen_fraction(d, n, WeightFunction::g_star(), params).value;
    const double lr = rozovskii_fraction(d, n, WeightFunction::g_star(), params).value;
    t.property("symmetric_esseen_equals_rozovskii", close_rel(le, lr, 1e-12), fmt(le, lr));
  }
}

}  // namespace

FuzzReport inequality_fuzzer(std::uint64_t seed, int trials, const FuzzConfig& config) {
  if (trials < 1) throw DomainError("fuzzer needs at least one trial");
  config.validate();
  const std::vector<Cell> esseen_cells = usable_cells(ReferenceTable::EsseenA);
  const std::vector<Cell> rozovskii_cells = usable_cells(ReferenceTable::RozovskiiA);
  FuzzReport report;
  report.seed = seed;
  report.trials = trials;
  for (int i = 0; i < trials; ++i) {
    const std::uint64_t sub = fuzz_sub_seed(seed, i);
    Rng rng(sub);
    const FuzzFamily family =
        config.families[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(config.families.size()) - 1))];
    std::optional<DiscreteDistribution> d;
    int n = 1;
    bool symmetric = false;
    switch (family) {
      case FuzzFamily::Lattice:
        d = draw_lattice(rng);
        n = uniform_int(rng, 1, config.max_n);
        break;
      case FuzzFamily::RealValued:
        d = draw_real(rng);
        n = uniform_int(rng, 1, config.max_n_real);
        break;
      case FuzzFamily::TwoPoint: {
        const double p = uniform(rng, 0.5, 0.99);
        d = two_point(p);
        n = uniform_int(rng, 1, config.max_n);
        symmetric = p == 0.5;
        break;
      }
      case FuzzFamily::ThreePoint:
        d = symmetric_three_point(uniform(rng, 0.01, 1.0));
        n = uniform_int(rng, 1, config.max_n);
        symmetric = true;
        break;
    }
    ++report.family_counts[fuzz_family_name(family)];
    Trial t(report, i, sub, fuzz_family_name(family), *d, n);
    try {
      const double delta = uniform_distance_to_normal(convolve_iid(*d, n));
      const Cell& ce = esseen_cells[static_cast<std::size_t>(
          uniform_int(rng, 0, static_cast<int>(esseen_cells.size()) - 1))];
      const Cell& cr = rozovskii_cells[static_cast<std::size_t>(
          uniform_int(rng, 0, static_cast<int>(rozovskii_cells.size()) - 1))];
      const FractionParams pe{ce.epsilon, ce.gamma};
      const FractionParams pr{cr.epsilon, cr.gamma};
      t.inequality("A_E", delta,
                   esseen_fraction(*d, n, WeightFunction::g_star(), pe).value, ce.value,
                   ce.epsilon, ce.gamma);
      if (auto c = esseen_g0_constant(ce)) {
        t.inequality("C_E_g0", delta, esseen_fraction(*d, n, WeightFunction::g0(), pe).value, *c,
                     ce.epsilon, ce.gamma);
      }
      t.inequality("A_R", delta,
                   rozovskii_fraction(*d, n, WeightFunction::g_star(), pr).value, cr.value,
                   cr.epsilon, cr.gamma);
      // L_R(g*) <= max(eps, 1) L_R(g0).
      t.inequality("C_R_g0", delta, rozovskii_fraction(*d, n, WeightFunction::g0(), pr).value,
                   std::max(cr.epsilon, 1.0) * cr.value, cr.epsilon, cr.gamma);
      if (config.check_properties) check_properties(t, rng, *d, n, symmetric);
    } catch (const Error& e) {
      t.fail(std::string("error: ") + e.what());
    }
  }
  return report;
}

namespace {

std::string num(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

}  // namespace

void write_convergence_csv(std::ostream& os, const ConvergenceReport& report) {
  os << "experiment,n,observed,target,error\n";
  for (std::size_t i = 0; i < report.n_values.size(); ++i) {
    os << report.experiment << ',' << report.n_values[i] << ',' << num(report.observed[i]) << ','
       << num(report.target) << ',' << num(report.observed[i] - report.target) << '\n';
  }
}

void write_fuzz_csv(std::ostream& os, const FuzzReport& report) {
  os << "experiment,n,observed,target,error\n";
  for (const FuzzRecord& r : report.records) {
    os << "fuzz:" << r.constant << ',' << r.n << ',' << num(r.ratio) << ',' << num(r.reference)
       << ',' << num(r.ratio - r.reference) << '\n';
  }
}

}  // namespace ltb

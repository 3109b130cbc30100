#include "ltbounds/ltbounds.h"

#include <cmath>
#include <limits>
#include <memory>
#include <new>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "bounds.hpp"
#include "constants.hpp"
#include "discrete.hpp"
#include "error.hpp"
#include "experiments.hpp"
#include "fractions.hpp"
#include "specfun.hpp"

struct ltb_distribution {
  ltb::DiscreteDistribution d;
};

struct ltb_weight {
  ltb::WeightFunction g;
};

struct ltb_bound_list {
  std::vector<ltb::ConstantBound> bounds;
};

struct ltb_report {
  ltb::ConvergenceReport report;
  std::string csv;
};

struct ltb_fuzz_report {
  ltb::FuzzReport report;
  std::vector<std::pair<std::string, ltb::FuzzMax>> maxima;
  std::vector<std::pair<std::string, int>> properties;
  std::string csv;
};

namespace {

thread_local std::string g_last_error;
thread_local int g_parse_line = 0;
thread_local int g_parse_column = 0;

ltb_status fail(ltb_status status, const std::string& what) {
  g_last_error = what;
  return status;
}

template <class F>
ltb_status guard(F&& body) {
  try {
    body();
    return LTB_OK;
  } catch (const ltb::ParseError& e) {
    g_parse_line = static_cast<int>(e.line());
    g_parse_column = static_cast<int>(e.column());
    return fail(LTB_ERR_PARSE, e.what());
  } catch (const ltb::Error& e) {
    return fail(static_cast<ltb_status>(static_cast<int>(e.code())), e.what());
  } catch (const std::bad_alloc&) {
    return fail(LTB_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(LTB_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(LTB_ERR_INTERNAL, "unknown failure");
  }
}

void need(const void* ptr, const char* name) {
  if (ptr == nullptr) {
    throw ltb::Error(ltb::ErrorCode::InvalidArgument, std::string(name) + " must not be null");
  }
}

ltb::FractionType fraction_type(ltb_fraction_type type) {
  switch (type) {
    case LTB_ESSEEN: return ltb::FractionType::Esseen;
    case LTB_ROZOVSKII: return ltb::FractionType::Rozovskii;
  }
  throw ltb::Error(ltb::ErrorCode::InvalidArgument, "unknown fraction type");
}

std::vector<int> n_list(const int* n_values, size_t count) {
  if (count > 0) need(n_values, "n_values");
  return std::vector<int>(n_values, n_values + count);
}

ltb::ReferenceTable reference_which(int which) {
  if (which == 1) return ltb::ReferenceTable::EsseenA;
  if (which == 2) return ltb::ReferenceTable::RozovskiiA;
  throw ltb::Error(ltb::ErrorCode::InvalidArgument, "reference table must be 1 or 2");
}

}  // namespace

extern "C" {

const char* ltb_version(void) { return "0.1.0"; }

const char* ltb_status_name(ltb_status status) {
  switch (status) {
    case LTB_OK: return "ok";
    case LTB_ERR_INTERNAL: return "internal";
    default: break;
  }
  const int code = static_cast<int>(status);
  if (code >= 1 && code <= 9) return ltb::error_code_name(static_cast<ltb::ErrorCode>(code));
  return "unknown";
}

const char* ltb_last_error(void) { return g_last_error.c_str(); }

void ltb_last_parse_position(int* line, int* column) {
  if (line) *line = g_parse_line;
  if (column) *column = g_parse_column;
}

ltb_status ltb_get_constants(ltb_constants* out) {
  return guard([&] {
    need(out, "out");
    const auto& c = ltb::constants();
    *out = {c.x0, c.kappa, c.gamma_star, c.x_phi, c.c_phi, c.p_phi, c.p0, ltb::gamma0()};
  });
}

ltb_status ltb_delta1(double p, double* out) {
  return guard([&] {
    need(out, "out");
    *out = ltb::delta1(p);
  });
}

ltb_status ltb_bessel_i0_scaled(double z, double* out) {
  return guard([&] {
    need(out, "out");
    *out = ltb::specfun::bessel_i0_scaled(z);
  });
}

ltb_status ltb_alpha_star(double* alpha, double* value) {
  return guard([&] {
    const ltb::AlphaStar a = ltb::alpha_star();
    if (alpha) *alpha = a.alpha;
    if (value) *value = a.value;
  });
}

ltb_status ltb_distribution_from_atoms(const double* values, const double* probs, size_t count,
                                       ltb_distribution** out) {
  return guard([&] {
    need(out, "out");
    need(values, "values");
    need(probs, "probs");
    std::vector<ltb::Atom> atoms;
    for (size_t i = 0; i < count; ++i) atoms.push_back({values[i], probs[i]});
    *out = new ltb_distribution{ltb::DiscreteDistribution::from_atoms(std::move(atoms))};
  });
}

ltb_status ltb_distribution_from_json(const char* text, ltb_distribution** out) {
  g_parse_line = 0;
  g_parse_column = 0;
  return guard([&] {
    need(out, "out");
    need(text, "text");
    *out = new ltb_distribution{ltb::parse_distribution_json(text)};
  });
}

ltb_status ltb_distribution_two_point(double p, ltb_distribution** out) {
  return guard([&] {
    need(out, "out");
    *out = new ltb_distribution{ltb::two_point(p)};
  });
}

ltb_status ltb_distribution_three_point(double p, ltb_distribution** out) {
  return guard([&] {
    need(out, "out");
    *out = new ltb_distribution{ltb::symmetric_three_point(p)};
  });
}

void ltb_distribution_free(ltb_distribution* d) { delete d; }

size_t ltb_distribution_size(const ltb_distribution* d) { return d ? d->d.size() : 0; }

ltb_status ltb_distribution_atom(const ltb_distribution* d, size_t index, double* value,
                                 double* prob) {
  return guard([&] {
    need(d, "distribution");
    if (index >= d->d.size()) {
      throw ltb::Error(ltb::ErrorCode::InvalidArgument, "atom index out of range");
    }
    if (value) *value = d->d.atoms()[index].value;
    if (prob) *prob = d->d.atoms()[index].prob;
  });
}

ltb_status ltb_distribution_variance(const ltb_distribution* d, double* out) {
  return guard([&] {
    need(d, "distribution");
    need(out, "out");
    *out = d->d.variance();
  });
}

ltb_status ltb_uniform_distance(const ltb_distribution* d, int n, double* out) {
  return guard([&] {
    need(d, "distribution");
    need(out, "out");
    *out = ltb::uniform_distance_to_normal(ltb::convolve_iid(d->d, n));
  });
}

ltb_status ltb_weight_canonical(ltb_weight_kind kind, ltb_weight** out) {
  return guard([&] {
    need(out, "out");
    switch (kind) {
      case LTB_WEIGHT_GSTAR: *out = new ltb_weight{ltb::WeightFunction::g_star()}; return;
      case LTB_WEIGHT_GC: *out = new ltb_weight{ltb::WeightFunction::g_const()}; return;
      case LTB_WEIGHT_G0: *out = new ltb_weight{ltb::WeightFunction::g0()}; return;
      case LTB_WEIGHT_G1: *out = new ltb_weight{ltb::WeightFunction::g1()}; return;
    }
    throw ltb::Error(ltb::ErrorCode::InvalidArgument, "unknown weight kind");
  });
}

ltb_status ltb_weight_custom(ltb_weight_fn fn, void* user, ltb_weight** out) {
  return guard([&] {
    need(out, "out");
    if (fn == nullptr) throw ltb::Error(ltb::ErrorCode::InvalidArgument, "fn must not be null");
    *out = new ltb_weight{ltb::WeightFunction::custom([fn, user](double u) { return fn(u, user); })};
  });
}

void ltb_weight_free(ltb_weight* g) { delete g; }

const char* ltb_weight_name(const ltb_weight* g) { return g ? g->g.name() : ""; }

ltb_status ltb_fraction(ltb_fraction_type type, const ltb_distribution* d, int n,
                        const ltb_weight* g, double epsilon, double gamma,
                        ltb_fraction_result* out) {
  return guard([&] {
    need(d, "distribution");
    need(g, "weight");
    need(out, "out");
    const ltb::FractionValue v =
        ltb::fraction(fraction_type(type), d->d, n, g->g, {epsilon, gamma});
    *out = {v.value, v.attained_z, ltb::sup_location_name(v.location)};
  });
}

ltb_status ltb_fraction_closed_form(ltb_fraction_type type, const ltb_weight* g, double p, int n,
                                    double epsilon, double gamma, double* out) {
  return guard([&] {
    need(g, "weight");
    need(out, "out");
    *out = ltb::two_point_fraction_closed_form(fraction_type(type), g->g, p, n, {epsilon, gamma});
  });
}

ltb_status ltb_lindeberg_fraction(const ltb_distribution* d, int n, double z, double* out) {
  return guard([&] {
    need(d, "distribution");
    need(out, "out");
    *out = ltb::lindeberg_fraction(d->d, n, z);
  });
}

ltb_status ltb_bounds_compute(double epsilon, double gamma, ltb_bound_list** out) {
  return guard([&] {
    need(out, "out");
    const ltb::BoundParams params{epsilon, gamma};
    auto list = std::make_unique<ltb_bound_list>();
    auto& b = list->bounds;
    b.push_back(ltb::aex_upper_esseen(params));
    b.push_back(ltb::aex_upper_rozovskii(params));
    for (auto& x : ltb::exact_constant_lower_bounds(params)) b.push_back(std::move(x));
    if (std::isfinite(gamma)) {
      ltb::ConstantBound abe = ltb::abe_lower_esseen(gamma);
      abe.params = params;
      b.push_back(std::move(abe));
    }
    b.push_back(ltb::abe_lower_rozovskii(params));
    for (auto& x : ltb::asymptotic_lower_bounds(params)) b.push_back(std::move(x));
    const ltb::AexTwoSided two = ltb::aex_two_sided(params);
    const auto pair = [&](const ltb::TwoSidedBound& tb, ltb::BoundTarget target) {
      b.push_back(tb.lower);
      ltb::ConstantBound up = tb.upper;
      up.target = target;
      b.push_back(std::move(up));
    };
    pair(two.esseen, ltb::BoundTarget::AEX_g0_Esseen);
    pair(two.rozovskii, ltb::BoundTarget::AEX_g0_Rozovskii);
    *out = list.release();
  });
}

size_t ltb_bound_list_size(const ltb_bound_list* list) { return list ? list->bounds.size() : 0; }

ltb_status ltb_bound_list_get(const ltb_bound_list* list, size_t index, ltb_bound* out) {
  return guard([&] {
    need(list, "list");
    need(out, "out");
    if (index >= list->bounds.size()) {
      throw ltb::Error(ltb::ErrorCode::InvalidArgument, "bound index out of range");
    }
    const ltb::ConstantBound& c = list->bounds[index];
    *out = {ltb::bound_target_name(c.target),
            ltb::bound_kind_name(c.kind),
            c.params.epsilon,
            c.params.gamma,
            c.value,
            c.witness_p.has_value() ? 1 : 0,
            c.witness_p.value_or(std::numeric_limits<double>::quiet_NaN()),
            c.formula.c_str()};
  });
}

void ltb_bound_list_free(ltb_bound_list* list) { delete list; }

ltb_status ltb_k_function_eval(ltb_k_function which, double p, double epsilon, double gamma,
                               double* out) {
  return guard([&] {
    need(out, "out");
    if (which < LTB_K_E0 || which > LTB_K_R1) {
      throw ltb::Error(ltb::ErrorCode::InvalidArgument, "unknown K function");
    }
    *out = ltb::k_function(static_cast<ltb::KFunction>(which), p, {epsilon, gamma});
  });
}

ltb_status ltb_aex_upper(ltb_fraction_type type, double epsilon, double gamma, double* out) {
  return guard([&] {
    need(out, "out");
    *out = fraction_type(type) == ltb::FractionType::Esseen
               ? ltb::aex_upper_esseen({epsilon, gamma}).value
               : ltb::aex_upper_rozovskii({epsilon, gamma}).value;
  });
}

ltb_status ltb_abe_lower_esseen(double gamma, double* value, double* witness_p) {
  return guard([&] {
    const ltb::ConstantBound b = ltb::abe_lower_esseen(gamma);
    if (value) *value = b.value;
    if (witness_p) *witness_p = b.witness_p.value_or(std::numeric_limits<double>::quiet_NaN());
  });
}

ltb_status ltb_abe_lower_rozovskii(double epsilon, double gamma, double* value) {
  return guard([&] {
    need(value, "value");
    *value = ltb::abe_lower_rozovskii({epsilon, gamma}).value;
  });
}

size_t ltb_aex_table_size(ltb_fraction_type type) {
  return type == LTB_ESSEEN ? ltb::aex_esseen_table_cells().size()
                            : ltb::aex_rozovskii_table_cells().size();
}

ltb_status ltb_aex_table_cell(ltb_fraction_type type, size_t index, double* epsilon,
                              double* gamma) {
  return guard([&] {
    const auto cells = fraction_type(type) == ltb::FractionType::Esseen
                           ? ltb::aex_esseen_table_cells()
                           : ltb::aex_rozovskii_table_cells();
    if (index >= cells.size()) {
      throw ltb::Error(ltb::ErrorCode::InvalidArgument, "table index out of range");
    }
    if (epsilon) *epsilon = cells[index].epsilon;
    if (gamma) *gamma = cells[index].gamma;
  });
}

size_t ltb_abe_table_size(void) { return ltb::abe_table_gammas().size(); }

ltb_status ltb_abe_table_gamma(size_t index, double* gamma) {
  return guard([&] {
    need(gamma, "gamma");
    const auto g = ltb::abe_table_gammas();
    if (index >= g.size()) throw ltb::Error(ltb::ErrorCode::InvalidArgument, "index out of range");
    *gamma = g[index];
  });
}

size_t ltb_reference_table_size(int which) {
  if (which != 1 && which != 2) return 0;
  return ltb::reference_table(reference_which(which)).size();
}

ltb_status ltb_reference_table_cell(int which, size_t index, ltb_reference_cell* out) {
  return guard([&] {
    need(out, "out");
    const auto& t = ltb::reference_table(reference_which(which));
    if (index >= t.size()) throw ltb::Error(ltb::ErrorCode::InvalidArgument, "index out of range");
    const ltb::ReferenceCell& c = t[index];
    *out = {c.epsilon, c.gamma, c.value, c.epsilon_zero_plus ? 1 : 0, c.gamma_is_star ? 1 : 0,
            c.gamma_any ? 1 : 0};
  });
}

namespace {

ltb_report* wrap_report(ltb::ConvergenceReport report) {
  auto r = std::make_unique<ltb_report>();
  r->report = std::move(report);
  std::ostringstream os;
  ltb::write_convergence_csv(os, r->report);
  r->csv = os.str();
  return r.release();
}

}  // namespace

ltb_status ltb_experiment_esseen(double p, const int* n_values, size_t count, ltb_report** out) {
  return guard([&] {
    need(out, "out");
    *out = wrap_report(ltb::esseen_expansion_experiment(p, n_list(n_values, count)));
  });
}

ltb_status ltb_experiment_bessel(double alpha, const int* n_values, size_t count,
                                 ltb_report** out) {
  return guard([&] {
    need(out, "out");
    *out = wrap_report(ltb::three_point_bessel_experiment(alpha, n_list(n_values, count)));
  });
}

size_t ltb_report_size(const ltb_report* r) { return r ? r->report.n_values.size() : 0; }

ltb_status ltb_report_row(const ltb_report* r, size_t index, int* n, double* observed) {
  return guard([&] {
    need(r, "report");
    if (index >= r->report.n_values.size()) {
      throw ltb::Error(ltb::ErrorCode::InvalidArgument, "row index out of range");
    }
    if (n) *n = r->report.n_values[index];
    if (observed) *observed = r->report.observed[index];
  });
}

double ltb_report_target(const ltb_report* r) {
  return r ? r->report.target : std::numeric_limits<double>::quiet_NaN();
}

double ltb_report_tail_error(const ltb_report* r) {
  return r ? r->report.max_abs_error_at_tail : std::numeric_limits<double>::quiet_NaN();
}

const char* ltb_report_csv(const ltb_report* r) { return r ? r->csv.c_str() : ""; }

void ltb_report_free(ltb_report* r) { delete r; }

void ltb_fuzz_config_default(ltb_fuzz_config* out) {
  if (!out) return;
  const ltb::FuzzConfig d;
  *out = {1, 1, 1, 1, d.max_n, d.max_n_real, d.check_properties ? 1 : 0};
}

ltb_status ltb_fuzz_run(uint64_t seed, int trials, const ltb_fuzz_config* config,
                        ltb_fuzz_report** out) {
  return guard([&] {
    need(out, "out");
    ltb::FuzzConfig cfg;
    if (config) {
      cfg.families.clear();
      if (config->lattice) cfg.families.push_back(ltb::FuzzFamily::Lattice);
      if (config->real_valued) cfg.families.push_back(ltb::FuzzFamily::RealValued);
      if (config->two_point) cfg.families.push_back(ltb::FuzzFamily::TwoPoint);
      if (config->three_point) cfg.families.push_back(ltb::FuzzFamily::ThreePoint);
      cfg.max_n = config->max_n;
      cfg.max_n_real = config->max_n_real;
      cfg.check_properties = config->check_properties != 0;
    }
    auto r = std::make_unique<ltb_fuzz_report>();
    r->report = ltb::inequality_fuzzer(seed, trials, cfg);
    r->maxima.assign(r->report.max_ratio.begin(), r->report.max_ratio.end());
    r->properties.assign(r->report.property_checks.begin(), r->report.property_checks.end());
    std::ostringstream os;
    ltb::write_fuzz_csv(os, r->report);
    r->csv = os.str();
    *out = r.release();
  });
}

size_t ltb_fuzz_violation_count(const ltb_fuzz_report* r) {
  return r ? r->report.violations.size() : 0;
}

ltb_status ltb_fuzz_violation_get(const ltb_fuzz_report* r, size_t index, ltb_fuzz_violation* out) {
  return guard([&] {
    need(r, "report");
    need(out, "out");
    if (index >= r->report.violations.size()) {
      throw ltb::Error(ltb::ErrorCode::InvalidArgument, "violation index out of range");
    }
    const ltb::FuzzViolation& v = r->report.violations[index];
    *out = {v.trial, v.sub_seed, v.family.c_str(), v.what.c_str(), v.distribution_json.c_str(), v.n};
  });
}

size_t ltb_fuzz_max_count(const ltb_fuzz_report* r) { return r ? r->maxima.size() : 0; }

ltb_status ltb_fuzz_max_get(const ltb_fuzz_report* r, size_t index, ltb_fuzz_max* out) {
  return guard([&] {
    need(r, "report");
    need(out, "out");
    if (index >= r->maxima.size()) throw ltb::Error(ltb::ErrorCode::InvalidArgument, "index out of range");
    const auto& [name, m] = r->maxima[index];
    *out = {name.c_str(), m.ratio, m.reference, m.trial};
  });
}

size_t ltb_fuzz_property_count(const ltb_fuzz_report* r) { return r ? r->properties.size() : 0; }

ltb_status ltb_fuzz_property_get(const ltb_fuzz_report* r, size_t index, const char** name,
                                 int* checks) {
  return guard([&] {
    need(r, "report");
    if (index >= r->properties.size()) {
      throw ltb::Error(ltb::ErrorCode::InvalidArgument, "index out of range");
    }
    if (name) *name = r->properties[index].first.c_str();
    if (checks) *checks = r->properties[index].second;
  });
}

size_t ltb_fuzz_record_count(const ltb_fuzz_report* r) { return r ? r->report.records.size() : 0; }

const char* ltb_fuzz_csv(const ltb_fuzz_report* r) { return r ? r->csv.c_str() : ""; }

void ltb_fuzz_report_free(ltb_fuzz_report* r) { delete r; }

}  // extern "C"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ltbounds/ltbounds.h"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitUser = 1;
constexpr int kExitInternal = 2;
constexpr int kExitViolation = 3;

struct Failure {
  int code;
  std::string message;
};

bool user_status(ltb_status s) {
  switch (s) {
    case LTB_ERR_DOMAIN:
    case LTB_ERR_VALIDATION:
    case LTB_ERR_PARSE:
    case LTB_ERR_UNSUPPORTED:
    case LTB_ERR_INVALID_ARGUMENT:
    case LTB_ERR_IO:
    case LTB_ERR_SIZE_LIMIT:
      return true;
    default:
      return false;
  }
}

void check(ltb_status s) {
  if (s == LTB_OK) return;
  std::string msg = std::string(ltb_status_name(s)) + ": " + ltb_last_error();
  if (s == LTB_ERR_PARSE) {
    int line = 0, column = 0;
    ltb_last_parse_position(&line, &column);
    if (line > 0 && msg.find("line ") == std::string::npos) msg += " (line " + std::to_string(line) + ", column " + std::to_string(column) + ")";
  }
  throw Failure{user_status(s) ? kExitUser : kExitInternal, msg};
}

double gamma_star() {
  ltb_constants c;
  check(ltb_get_constants(&c));
  return c.gamma_star;
}

// Accepts decimal literals, "inf", and (when allowed) "gstar".
double parse_real(const std::string& text, const char* flag, bool allow_gstar) {
  if (text == "inf" || text == "infinity") return std::numeric_limits<double>::infinity();
  if (allow_gstar && text == "gstar") return gamma_star();
  double value = 0.0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw Failure{kExitUser, std::string("invalid value for ") + flag + ": '" + text + "'"};
  }
  return value;
}

std::string fixed(double x, int digits) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

// Shortest representation that round-trips.
std::string full(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

json jnum(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return nullptr;
  return x > 0 ? "inf" : "-inf";
}

// Fixed notation with trailing zeros removed.
std::string compact(double x) {
  std::string s = fixed(x, 6);
  if (std::isfinite(x)) {
    s.erase(s.find_last_not_of('0') + 1);
    if (s.back() == '.') s.pop_back();
  }
  return s;
}

std::string gamma_label(double g) {
  if (std::isfinite(g) && std::fabs(g - gamma_star()) <= 1e-12) return "gstar";
  return compact(g);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

enum class Format { Table, Csv, Json };

// Column-aligned text table.
void print_table(std::ostream& os, const std::vector<std::string>& header,
                 const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width(header.size());
  for (std::size_t i = 0; i < header.size(); ++i) width[i] = header[i].size();
  for (const auto& r : rows)
    for (std::size_t i = 0; i < r.size(); ++i) width[i] = std::max(width[i], r[i].size());
  const auto line = [&](const std::vector<std::string>& r) {
    for (std::size_t i = 0; i < r.size(); ++i) {
      os << r[i];
      if (i + 1 < r.size()) os << std::string(width[i] - r[i].size() + 2, ' ');
    }
    os << '\n';
  };
  line(header);
  for (const auto& r : rows) line(r);
}

void print_csv(std::ostream& os, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
  const auto line = [&](const std::vector<std::string>& r) {
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << csv_field(r[i]);
    os << '\n';
  };
  line(header);
  for (const auto& r : rows) line(r);
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Failure{kExitUser, "cannot open output file '" + path + "'"};
  out << text;
  if (!out) throw Failure{kExitInternal, "failed writing '" + path + "'"};
}

// ---- constants ----

int cmd_constants(Format format) {
  ltb_constants c;
  check(ltb_get_constants(&c));
  const std::vector<std::pair<std::string, double>> items = {
      {"x0", c.x0},       {"kappa", c.kappa}, {"gamma_star", c.gamma_star}, {"x_phi", c.x_phi},
      {"c_phi", c.c_phi}, {"p_phi", c.p_phi}, {"p0", c.p0},                 {"gamma0", c.gamma0}};
  if (format == Format::Json) {
    json j = json::object();
    for (const auto& [k, v] : items) j[k] = v;
    std::cout << j.dump(2) << '\n';
    return kExitOk;
  }
  std::vector<std::vector<std::string>> rows;
  for (const auto& [k, v] : items) rows.push_back({k, fixed(v, 10)});
  if (format == Format::Csv) print_csv(std::cout, {"name", "value"}, rows);
  else print_table(std::cout, {"name", "value"}, rows);
  return kExitOk;
}

// ---- table ----

struct TableData {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  json j;
};

TableData table3() {
  TableData t{{"type", "epsilon", "gamma", "value"}, {}, json::array()};
  for (ltb_fraction_type type : {LTB_ESSEEN, LTB_ROZOVSKII}) {
    const char* name = type == LTB_ESSEEN ? "esseen" : "rozovskii";
    for (size_t i = 0; i < ltb_aex_table_size(type); ++i) {
      double eps = 0, gamma = 0, value = 0;
      check(ltb_aex_table_cell(type, i, &eps, &gamma));
      check(ltb_aex_upper(type, eps, gamma, &value));
      t.rows.push_back({name, compact(eps), gamma_label(gamma), fixed(value, 5)});
      t.j.push_back({{"type", name}, {"epsilon", jnum(eps)}, {"gamma", gamma_label(gamma) == "gstar" ? json("gstar") : jnum(gamma)}, {"value", value}});
    }
  }
  return t;
}

TableData table4() {
  TableData t{{"gamma", "p", "bound"}, {}, json::array()};
  for (size_t i = 0; i < ltb_abe_table_size(); ++i) {
    double gamma = 0, value = 0, p = 0;
    check(ltb_abe_table_gamma(i, &gamma));
    check(ltb_abe_lower_esseen(gamma, &value, &p));
    // Lower bounds are truncated, not rounded, so the printed value stays valid.
    t.rows.push_back({compact(gamma), fixed(p, 4), fixed(std::floor(value * 1e4) / 1e4, 4)});
    t.j.push_back({{"gamma", gamma}, {"p", p}, {"bound", value}});
  }
  return t;
}

TableData reference(int which) {
  TableData t{{"epsilon", "gamma", "value"}, {}, json::array()};
  for (size_t i = 0; i < ltb_reference_table_size(which); ++i) {
    ltb_reference_cell c;
    check(ltb_reference_table_cell(which, i, &c));
    const std::string eps = c.epsilon_zero_plus ? "0+" : compact(c.epsilon);
    const std::string gamma = c.gamma_any ? "any" : c.gamma_is_star ? "gstar" : compact(c.gamma);
    t.rows.push_back({eps, gamma, fixed(c.value, 4)});
    t.j.push_back({{"epsilon", eps}, {"gamma", gamma}, {"value", jnum(c.value)}});
  }
  return t;
}

int cmd_table(const std::string& which, Format format, const std::string& csv_path) {
  TableData t;
  bool ref = false;
  if (which == "3") t = table3();
  else if (which == "4") t = table4();
  else if (which == "ref1" || which == "ref2") {
    t = reference(which == "ref1" ? 1 : 2);
    ref = true;
  } else {
    throw Failure{kExitUser, "unknown table '" + which + "' (expected 3, 4, ref1, ref2)"};
  }
  const char* banner = "# reference data quoted from prior work";
  if (format == Format::Json) {
    json j = {{"table", which}, {"rows", t.j}};
    if (ref) j["provenance"] = "reference data quoted from prior work";
    std::cout << j.dump(2) << '\n';
  } else if (format == Format::Csv) {
    if (ref) std::cout << banner << '\n';
    print_csv(std::cout, t.header, t.rows);
  } else if (which == "4") {
    std::vector<std::string> g{"gamma"}, p{"p"}, b{"bound"};
    for (const auto& r : t.rows) {
      g.push_back(r[0]);
      p.push_back(r[1]);
      b.push_back(r[2]);
    }
    print_table(std::cout, g, {p, b});
  } else {
    if (ref) std::cout << banner << '\n';
    print_table(std::cout, t.header, t.rows);
  }
  if (!csv_path.empty()) {
    std::ostringstream os;
    if (ref) os << banner << '\n';
    print_csv(os, t.header, t.rows);
    write_file(csv_path, os.str());
  }
  return kExitOk;
}

// ---- fraction ----

struct FractionArgs {
  std::string dist_file;
  int n = 1;
  std::string g = "gstar";
  std::string eps = "1";
  std::string gamma = "1";
  std::string type = "esseen";
  bool closed_form = false;
};

ltb_weight_kind weight_kind(const std::string& g) {
  if (g == "gstar") return LTB_WEIGHT_GSTAR;
  if (g == "gc") return LTB_WEIGHT_GC;
  if (g == "g0") return LTB_WEIGHT_G0;
  if (g == "g1") return LTB_WEIGHT_G1;
  throw Failure{kExitUser, "unknown weight '" + g + "'"};
}

int cmd_fraction(const FractionArgs& a, Format format) {
  std::ifstream in(a.dist_file, std::ios::binary);
  if (!in) throw Failure{kExitUser, "cannot read distribution file '" + a.dist_file + "'"};
  std::stringstream buf;
  buf << in.rdbuf();
  const double eps = parse_real(a.eps, "--eps", false);
  const double gamma = parse_real(a.gamma, "--gamma", true);
  const ltb_fraction_type type =
      a.type == "esseen" ? LTB_ESSEEN
      : a.type == "rozovskii" ? LTB_ROZOVSKII
      : throw Failure{kExitUser, "unknown --type '" + a.type + "'"};

  ltb_distribution* d = nullptr;
  check(ltb_distribution_from_json(buf.str().c_str(), &d));
  std::unique_ptr<ltb_distribution, void (*)(ltb_distribution*)> dist(d, ltb_distribution_free);
  ltb_weight* w = nullptr;
  check(ltb_weight_canonical(weight_kind(a.g), &w));
  std::unique_ptr<ltb_weight, void (*)(ltb_weight*)> weight(w, ltb_weight_free);

  ltb_fraction_result r;
  check(ltb_fraction(type, dist.get(), a.n, weight.get(), eps, gamma, &r));
  std::vector<std::string> header{"type", "g", "n", "epsilon", "gamma", "value", "attained_z", "location"};
  std::vector<std::string> row{a.type, a.g, std::to_string(a.n), full(eps), full(gamma),
                               full(r.value), full(r.attained_z), r.location};
  json j = {{"type", a.type}, {"g", a.g},          {"n", a.n},
            {"epsilon", jnum(eps)}, {"gamma", jnum(gamma)}, {"value", r.value},
            {"attained_z", jnum(r.attained_z)}, {"location", r.location}};
  if (a.closed_form) {
    if (ltb_distribution_size(dist.get()) != 2) {
      throw Failure{kExitUser, "--closed-form requires a two-point distribution"};
    }
    double x_hi = 0, p_hi = 0;
    check(ltb_distribution_atom(dist.get(), 1, &x_hi, &p_hi));
    // A standardized two-point law has its positive atom sqrt(q/p) with mass p; the
    // closed form expects the larger mass on that atom.
    double p = p_hi;
    double x_lo = 0, p_lo = 0;
    check(ltb_distribution_atom(dist.get(), 0, &x_lo, &p_lo));
    if (p_lo > p_hi) p = p_lo;
    double closed = 0;
    check(ltb_fraction_closed_form(type, weight.get(), p, a.n, eps, gamma, &closed));
    header.insert(header.end(), {"closed_form", "difference"});
    row.insert(row.end(), {full(closed), full(r.value - closed)});
    j["closed_form"] = closed;
    j["difference"] = r.value - closed;
  }
  if (format == Format::Json) std::cout << j.dump(2) << '\n';
  else if (format == Format::Csv) print_csv(std::cout, header, {row});
  else {
    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 0; i < header.size(); ++i) rows.push_back({header[i], row[i]});
    print_table(std::cout, {"field", "value"}, rows);
  }
  return kExitOk;
}

// ---- bounds ----

int cmd_bounds(const std::string& eps_text, const std::string& gamma_text, Format format) {
  const double eps = parse_real(eps_text, "--eps", false);
  const double gamma = parse_real(gamma_text, "--gamma", true);
  ltb_bound_list* l = nullptr;
  check(ltb_bounds_compute(eps, gamma, &l));
  std::unique_ptr<ltb_bound_list, void (*)(ltb_bound_list*)> list(l, ltb_bound_list_free);
  const std::vector<std::string> header{"target", "kind", "epsilon", "gamma", "value", "witness_p", "formula"};
  std::vector<std::vector<std::string>> rows;
  json arr = json::array();
  for (size_t i = 0; i < ltb_bound_list_size(list.get()); ++i) {
    ltb_bound b;
    check(ltb_bound_list_get(list.get(), i, &b));
    const std::string witness = b.has_witness ? fixed(b.witness_p, 6) : "";
    rows.push_back({b.target, b.kind, full(b.epsilon), full(b.gamma),
                    format == Format::Table ? fixed(b.value, 6) : full(b.value), witness, b.formula});
    arr.push_back({{"target", b.target},
                   {"kind", b.kind},
                   {"epsilon", jnum(b.epsilon)},
                   {"gamma", jnum(b.gamma)},
                   {"value", jnum(b.value)},
                   {"witness_p", b.has_witness ? json(b.witness_p) : json(nullptr)},
                   {"formula", b.formula}});
  }
  if (format == Format::Json) std::cout << json{{"epsilon", jnum(eps)}, {"gamma", jnum(gamma)}, {"bounds", arr}}.dump(2) << '\n';
  else if (format == Format::Csv) print_csv(std::cout, header, rows);
  else print_table(std::cout, header, rows);
  return kExitOk;
}

// ---- experiment ----

struct ExperimentArgs {
  std::string which;
  double p = 0.75;
  double alpha = 1.0;
  int n_min = 1;
  int n_max = 0;
  int points = 20;
  std::uint64_t seed = 7;
  int trials = 500;
  std::string output;
};

std::vector<int> bessel_grid(double alpha, int n_max, int points) {
  int start = static_cast<int>(std::floor(alpha)) + 1;
  if (start % 2) ++start;
  if (n_max % 2) --n_max;
  if (n_max < start) throw Failure{kExitUser, "--n-max must be an even number above alpha"};
  std::vector<int> ns;
  const double ratio = points > 1 ? std::pow(static_cast<double>(n_max) / start, 1.0 / (points - 1)) : 1.0;
  for (int i = 0; i < points; ++i) {
    int n = static_cast<int>(std::lround(start * std::pow(ratio, i)));
    n += n % 2;
    n = std::min(n, n_max);
    if (ns.empty() || n > ns.back()) ns.push_back(n);
  }
  if (ns.back() != n_max) ns.push_back(n_max);
  return ns;
}

int cmd_experiment(const ExperimentArgs& a, Format format) {
  const std::string path = a.output.empty() ? "experiment_" + a.which + ".csv" : a.output;
  if (a.which == "esseen" || a.which == "bessel") {
    std::vector<int> ns;
    ltb_report* r = nullptr;
    if (a.which == "esseen") {
      const int n_max = a.n_max > 0 ? a.n_max : 10000;
      if (a.n_min < 1 || a.n_min > n_max) throw Failure{kExitUser, "need 1 <= --n-min <= --n-max"};
      for (int n = a.n_min; n <= n_max; ++n) ns.push_back(n);
      check(ltb_experiment_esseen(a.p, ns.data(), ns.size(), &r));
    } else {
      ns = bessel_grid(a.alpha, a.n_max > 0 ? a.n_max : 2000, a.points);
      check(ltb_experiment_bessel(a.alpha, ns.data(), ns.size(), &r));
    }
    std::unique_ptr<ltb_report, void (*)(ltb_report*)> report(r, ltb_report_free);
    write_file(path, ltb_report_csv(report.get()));
    int last_n = 0;
    double last = 0;
    check(ltb_report_row(report.get(), ltb_report_size(report.get()) - 1, &last_n, &last));
    if (format == Format::Json) {
      std::cout << json{{"experiment", a.which},
                        {"csv", path},
                        {"rows", ltb_report_size(report.get())},
                        {"target", ltb_report_target(report.get())},
                        {"last_n", last_n},
                        {"last_observed", last},
                        {"tail_error", ltb_report_tail_error(report.get())}}
                       .dump(2)
                << '\n';
    } else {
      print_table(std::cout, {"field", "value"},
                  {{"experiment", a.which},
                   {"csv", path},
                   {"rows", std::to_string(ltb_report_size(report.get()))},
                   {"target", full(ltb_report_target(report.get()))},
                   {"last_n", std::to_string(last_n)},
                   {"last_observed", full(last)},
                   {"tail_error", full(ltb_report_tail_error(report.get()))}});
    }
    return kExitOk;
  }
  if (a.which != "fuzz") {
    throw Failure{kExitUser, "unknown experiment '" + a.which + "' (expected esseen, bessel, fuzz)"};
  }
  ltb_fuzz_config cfg;
  ltb_fuzz_config_default(&cfg);
  if (a.n_max > 0) cfg.max_n = a.n_max;
  ltb_fuzz_report* r = nullptr;
  check(ltb_fuzz_run(a.seed, a.trials, &cfg, &r));
  std::unique_ptr<ltb_fuzz_report, void (*)(ltb_fuzz_report*)> report(r, ltb_fuzz_report_free);
  write_file(path, ltb_fuzz_csv(report.get()));
  json j = {{"experiment", "fuzz"}, {"csv", path}, {"seed", a.seed}, {"trials", a.trials},
            {"records", ltb_fuzz_record_count(report.get())}};
  std::vector<std::vector<std::string>> rows = {{"seed", std::to_string(a.seed)},
                                                {"trials", std::to_string(a.trials)},
                                                {"csv", path},
                                                {"records", std::to_string(ltb_fuzz_record_count(report.get()))}};
  for (size_t i = 0; i < ltb_fuzz_max_count(report.get()); ++i) {
    ltb_fuzz_max m;
    check(ltb_fuzz_max_get(report.get(), i, &m));
    rows.push_back({std::string("max_ratio:") + m.constant,
                    fixed(m.ratio, 6) + " (reference " + fixed(m.reference, 4) + ", trial " + std::to_string(m.trial) + ")"});
    j["max_ratio"][m.constant] = {{"ratio", m.ratio}, {"reference", m.reference}, {"trial", m.trial}};
  }
  for (size_t i = 0; i < ltb_fuzz_property_count(report.get()); ++i) {
    const char* name = nullptr;
    int checks = 0;
    check(ltb_fuzz_property_get(report.get(), i, &name, &checks));
    rows.push_back({std::string("checks:") + name, std::to_string(checks)});
    j["property_checks"][name] = checks;
  }
  const size_t violations = ltb_fuzz_violation_count(report.get());
  rows.push_back({"violations", std::to_string(violations)});
  j["violations"] = json::array();
  for (size_t i = 0; i < violations; ++i) {
    ltb_fuzz_violation v;
    check(ltb_fuzz_violation_get(report.get(), i, &v));
    j["violations"].push_back({{"trial", v.trial}, {"sub_seed", v.sub_seed}, {"family", v.family},
                               {"what", v.what}, {"n", v.n}, {"distribution", json::parse(v.distribution_json)}});
    std::cerr << "VIOLATION trial " << v.trial << " (sub-seed " << v.sub_seed << ", " << v.family
              << ", n=" << v.n << "): " << v.what << "\n  distribution: " << v.distribution_json << '\n';
  }
  if (format == Format::Json) std::cout << j.dump(2) << '\n';
  else print_table(std::cout, {"field", "value"}, rows);
  return violations == 0 ? kExitOk : kExitViolation;
}

Format parse_format(const std::string& f) {
  if (f == "table") return Format::Table;
  if (f == "csv") return Format::Csv;
  return Format::Json;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Truncated-moment fractions and constant bounds in the central limit theorem"};
  app.set_version_flag("--version", std::string(ltb_version()));
  app.require_subcommand(1);
  std::string format_text = "table";
  app.add_option("--format", format_text, "Output format")
      ->check(CLI::IsMember({"table", "csv", "json"}))
      ->capture_default_str();

  auto* constants = app.add_subcommand("constants", "Print the numeric constants");

  auto* table = app.add_subcommand("table", "Print a computed or reference table");
  std::string table_which;
  std::string table_csv;
  table->add_option("which", table_which, "3, 4, ref1 or ref2")->required();
  table->add_option("--csv", table_csv, "Also write the table as CSV to this path");

  auto* fraction = app.add_subcommand("fraction", "Evaluate a fraction for n i.i.d. copies of a distribution");
  FractionArgs fa;
  fraction->add_option("dist_file", fa.dist_file, "Distribution JSON file")->required();
  fraction->add_option("--n", fa.n, "Number of summands")->capture_default_str();
  fraction->add_option("--g", fa.g, "Weight: gstar, gc, g0, g1")->capture_default_str();
  fraction->add_option("--eps", fa.eps, "Truncation level (number or inf)")->capture_default_str();
  fraction->add_option("--gamma", fa.gamma, "Third-moment weight (number or gstar)")->capture_default_str();
  fraction->add_option("--type", fa.type, "esseen or rozovskii")->capture_default_str();
  fraction->add_flag("--closed-form", fa.closed_form, "Also evaluate the two-point closed form");

  auto* bounds = app.add_subcommand("bounds", "Print every constant bound for (eps, gamma)");
  std::string b_eps = "1", b_gamma = "1";
  bounds->add_option("--eps", b_eps, "Truncation level (number or inf)")->capture_default_str();
  bounds->add_option("--gamma", b_gamma, "Third-moment weight (number, gstar or inf)")->capture_default_str();

  auto* experiment = app.add_subcommand("experiment", "Run a convergence experiment or the fuzzer");
  ExperimentArgs ea;
  experiment->add_option("which", ea.which, "esseen, bessel or fuzz")->required();
  experiment->add_option("--p", ea.p, "Two-point parameter (esseen)")->capture_default_str();
  experiment->add_option("--alpha", ea.alpha, "Three-point scale (bessel)")->capture_default_str();
  experiment->add_option("--n-min", ea.n_min, "Smallest n (esseen)")->capture_default_str();
  experiment->add_option("--n-max", ea.n_max, "Largest n (fuzz: cap on n)");
  experiment->add_option("--points", ea.points, "Number of n values (bessel)")->capture_default_str();
  experiment->add_option("--seed", ea.seed, "Fuzzer seed")->capture_default_str();
  experiment->add_option("--trials", ea.trials, "Fuzzer trials")->capture_default_str();
  experiment->add_option("--output", ea.output, "CSV output path");

  for (auto* sub : {constants, table, fraction, bounds, experiment}) {
    sub->add_option("--format", format_text, "Output format")
        ->check(CLI::IsMember({"table", "csv", "json"}));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUser;
  }

  const Format format = parse_format(format_text);
  try {
    if (*constants) return cmd_constants(format);
    if (*table) return cmd_table(table_which, format, table_csv);
    if (*fraction) return cmd_fraction(fa, format);
    if (*bounds) return cmd_bounds(b_eps, b_gamma, format);
    if (*experiment) return cmd_experiment(ea, format);
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << '\n';
    return f.code;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitInternal;
}

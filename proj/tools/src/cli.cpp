#include "momentlab/cli/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdint>
#include <functional>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include <nlohmann/json.hpp>

#include "momentlab/cli/sequence_file.hpp"
#include "momentlab/distributions.hpp"
#include "momentlab/divisibility.hpp"
#include "momentlab/errors.hpp"
#include "momentlab/moment_algebra.hpp"
#include "momentlab/semigroup.hpp"
#include "momentlab/simulator.hpp"
#include "momentlab/stieltjes.hpp"

namespace momentlab::cli {

namespace {

using nlohmann::json;
using Table = std::vector<std::vector<std::string>>;

// ---------------------------------------------------------------------------------------------
// formatting

std::string str(const BigRational& q) { return momentlab::to_string(q); }
std::string str(const Real& x) { return momentlab::to_string(x); }
std::string short_str(const BigRational& q) { return momentlab::to_string(q); }
std::string short_str(const Real& x) { return momentlab::to_string(x, 12); }

std::string fixed(double x, int digits = 6) {
  std::ostringstream o;
  o << std::setprecision(digits) << x;
  return o.str();
}

void print_table(std::ostream& out, const std::vector<std::string>& header, const Table& rows) {
  std::vector<std::size_t> width(header.size(), 0);
  for (std::size_t c = 0; c < header.size(); ++c) width[c] = header[c].size();
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size() && c < width.size(); ++c) width[c] = std::max(width[c], row[c].size());
  }
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t c = 0; c < cells.size(); ++c) {
      out << std::left << std::setw(static_cast<int>(width[c])) << cells[c];
      if (c + 1 < cells.size()) out << "  ";
    }
    out << '\n';
  };
  line(header);
  std::vector<std::string> rule;
  for (auto w : width) rule.emplace_back(w, '-');
  line(rule);
  for (const auto& row : rows) line(row);
}

void emit(std::ostream& out, const json& j) { out << j.dump(2) << '\n'; }

// ---------------------------------------------------------------------------------------------
// flag parsing

BigRational rational_flag(const std::string& text, const std::string& name) {
  try {
    return parse_rational(text);
  } catch (const InputError& e) {
    throw InputError("--" + name + ": " + e.what());
  }
}

BigRational exact_flag(const std::string& text, const std::string& name) {
  try {
    return parse_exact_rational(text);
  } catch (const InputError& e) {
    throw InputError("--" + name + ": " + e.what());
  }
}

std::vector<BigRational> rational_list(const std::string& text, const std::string& name) {
  std::vector<BigRational> out;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(rational_flag(item, name));
  if (out.empty()) throw InputError("--" + name + " is empty");
  return out;
}

double double_flag(const std::string& text, const std::string& name) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size() || !std::isfinite(v)) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw InputError("--" + name + ": not a number: '" + text + "'");
  }
}

std::vector<double> double_list(const std::string& text, const std::string& name) {
  std::vector<double> out;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(double_flag(item, name));
  if (out.empty()) throw InputError("--" + name + " is empty");
  return out;
}

std::pair<double, double> double_pair(const std::string& text, const std::string& name) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw InputError("--" + name + " expects 'x:y'");
  return {double_flag(text.substr(0, colon), name), double_flag(text.substr(colon + 1), name)};
}

struct PrecisionFlags {
  unsigned bits = 128;
  std::string tol = "1e-20";

  Precision get() const {
    Precision p;
    p.bits = bits;
    p.abs_tol = double_flag(tol, "tol");
    p.validate();
    return p;
  }
};

void add_precision(CLI::App* app, PrecisionFlags& p) {
  app->add_option("--precision", p.bits, "working precision in bits (>= 64)")->capture_default_str();
  app->add_option("--tol", p.tol, "absolute quadrature tolerance")->capture_default_str();
}

struct OutputFlags {
  bool table = false;
  bool csv = false;
};

// ---------------------------------------------------------------------------------------------
// moments

struct MomentsFlags {
  std::string alpha = "0";
  std::string sigma2 = "1";
  std::string q = "2";
  std::string r = "1";
  std::string logb = "-1.4";
  std::string a = "1";
  std::string b = "2";
  std::string leipnik_a = "1";
  std::string lambda = "1";
  std::string rho = "1/2";
  std::optional<std::string> mp_logb;
  unsigned long N = 10;
  std::size_t upto = 6;
  std::size_t kmax = 17;
  PrecisionFlags precision;
};

distributions::LognormalSpec lognormal_spec(const MomentsFlags& f) {
  distributions::LognormalSpec s{rational_flag(f.alpha, "alpha"), rational_flag(f.sigma2, "sigma2")};
  s.validate();
  return s;
}

json params_json(const std::vector<std::pair<std::string, std::string>>& kv) {
  json j = json::object();
  for (const auto& [k, v] : kv) j[k] = v;
  return j;
}

json real_array(const std::vector<Real>& v, int digits = 0) {
  json a = json::array();
  for (const auto& x : v) a.push_back(digits ? momentlab::to_string(x, digits) : momentlab::to_string(x));
  return a;
}

void write_sequence(std::ostream& out, const SequenceFile& f, const OutputFlags& o, const json& diagnostics = json()) {
  if (o.csv) {
    out << to_csv(f);
    return;
  }
  if (o.table) {
    Table rows;
    for (std::size_t i = 0; i < f.size(); ++i) {
      std::vector<std::string> row{std::to_string(i), f.exact ? str(f.exact_values[i]) : short_str(f.decimal_values[i])};
      if (!f.abs_errors.empty()) row.push_back(momentlab::to_string(f.abs_errors[i], 3));
      rows.push_back(row);
    }
    std::vector<std::string> header{"n", f.kind == FileKind::pmf ? "p_n" : "value"};
    if (!f.abs_errors.empty()) header.push_back("abs_error");
    print_table(out, header, rows);
    if (f.tail_mass) out << "tail mass: " << momentlab::to_string(*f.tail_mass, 6) << '\n';
    return;
  }
  json j = to_json(f);
  if (!diagnostics.is_null()) j["diagnostics"] = diagnostics;
  emit(out, j);
}

void cmd_moments(const std::string& source, const MomentsFlags& f, const OutputFlags& o, std::ostream& out) {
  json diagnostics;
  SequenceFile file;
  json provenance;
  provenance["generator"] = source;
  if (source == "lognormal") {
    const auto p = f.precision.get();
    file = SequenceFile::from(distributions::lognormal_moments(lognormal_spec(f), f.upto, p));
    provenance["params"] = params_json({{"alpha", f.alpha}, {"sigma2", f.sigma2}});
    provenance["formula"] = "exp(n alpha + n^2 sigma2 / 2)";
  } else if (source == "lattice") {
    const BigRational q = exact_flag(f.q, "q");
    if (q.get_den() != 1) throw InputError("--q must be an integer");
    file = SequenceFile::from(distributions::lattice_lognormal_moments(q.get_num(), rational_flag(f.r, "r"), f.upto));
    provenance["params"] = params_json({{"q", f.q}, {"r", f.r}});
    provenance["formula"] = "r^n q^(n^2)";
  } else if (source == "truncated") {
    const auto p = f.precision.get();
    const auto report = distributions::truncated_lognormal_moments(
        lognormal_spec(f), distributions::CensorSpec::left_truncate(rational_flag(f.logb, "logb")), f.upto, p);
    file = SequenceFile::from(report.moments);
    file.abs_errors = report.abs_errors;
    provenance["params"] = params_json({{"alpha", f.alpha}, {"sigma2", f.sigma2}, {"logb", f.logb}});
    diagnostics["retained_integrals"] = real_array(report.quadrature);
    diagnostics["psi_form"] = real_array(report.psi_form);
    diagnostics["psi_form_difference"] = real_array(report.psi_form_difference, 6);
    diagnostics["psi_ratio_form"] = real_array(report.psi_ratio_form);
    diagnostics["psi_ratio_form_difference"] = real_array(report.psi_ratio_form_difference, 6);
    diagnostics["moved_mass"] = momentlab::to_string(report.moved_mass);
    diagnostics["authoritative"] = "quadrature";
  } else if (source == "gap") {
    const auto p = f.precision.get();
    const auto report = distributions::gap_censored_lognormal_moments(lognormal_spec(f), rational_flag(f.a, "a"),
                                                                      rational_flag(f.b, "b"), f.upto, p);
    file = SequenceFile::from(report.moments);
    file.abs_errors = report.abs_errors;
    provenance["params"] = params_json({{"alpha", f.alpha}, {"sigma2", f.sigma2}, {"a", f.a}, {"b", f.b}});
    diagnostics["removed"] = real_array(report.removed);
    diagnostics["removed_mass_cdf"] = momentlab::to_string(report.removed_mass_cdf);
  } else if (source == "leipnik") {
    const auto p = f.precision.get();
    const auto report = distributions::leipnik_discrete_moments(rational_flag(f.sigma2, "sigma2"), rational_flag(f.alpha, "alpha"),
                                                                f.upto, p, rational_flag(f.leipnik_a, "a"));
    file = SequenceFile::from(report.moments);
    provenance["params"] = params_json({{"alpha", f.alpha}, {"sigma2", f.sigma2}, {"a", f.leipnik_a}});
    const auto lognormal = distributions::lognormal_moments(lognormal_spec(f), f.upto, p).approx_values();
    const auto values = report.moments.approx_values();
    std::vector<Real> rel;
    {
      PrecisionScope scope(p.bits);
      for (std::size_t n = 0; n < values.size(); ++n) rel.push_back(values[n] / lognormal[n] - 1);
    }
    diagnostics["lognormal"] = real_array(lognormal);
    diagnostics["relative_difference"] = real_array(rel, 6);
    diagnostics["tolerance"] = f.precision.tol;
    diagnostics["n_cut"] = report.n_cut;
    diagnostics["relative_tail_bound"] = momentlab::to_string(report.relative_tail_bound, 6);
  } else if (source == "mixed-poisson") {
    const auto p = f.precision.get();
    distributions::MixedPoissonSpec s;
    s.intensity = lognormal_spec(f);
    if (f.mp_logb) s.log_b = rational_flag(*f.mp_logb, "logb");
    s.N = f.N;
    const auto pmf = distributions::mixed_poisson_pmf(s, f.kmax, p);
    file = SequenceFile::from(pmf);
    provenance["params"] = params_json({{"alpha", f.alpha}, {"sigma2", f.sigma2}, {"N", std::to_string(f.N)}});
    if (f.mp_logb) provenance["params"]["logb"] = *f.mp_logb;
    diagnostics["tail_error"] = momentlab::to_string(pmf.tail_error, 6);
    diagnostics["tail_flag"] = pmf.tail_flag;
  } else if (source == "poisson") {
    file = SequenceFile::from(distributions::poisson_moments(rational_flag(f.lambda, "lambda"), f.upto));
    provenance["params"] = params_json({{"lambda", f.lambda}});
  } else if (source == "poisson-pmf") {
    const auto p = f.precision.get();
    file = SequenceFile::from(distributions::poisson_pmf(rational_flag(f.lambda, "lambda"), f.kmax, p));
    provenance["params"] = params_json({{"lambda", f.lambda}});
  } else if (source == "geometric") {
    file = SequenceFile::from_exact_pmf(distributions::geometric_pmf(rational_flag(f.rho, "rho"), f.kmax));
    provenance["params"] = params_json({{"rho", f.rho}});
  } else {
    throw InputError("unknown moment source '" + source + "'");
  }
  if (!file.exact) {
    provenance["precision_bits"] = f.precision.bits;
    provenance["tolerance"] = f.precision.tol;
  }
  file.provenance = provenance;
  write_sequence(out, file, o, diagnostics);
}

// ---------------------------------------------------------------------------------------------
// analyze

struct AnalyzeFlags {
  std::string file;
  std::optional<std::size_t> stieltjes_depth;
  std::optional<std::size_t> fekete;
  std::size_t fekete_shift = 0;
  std::optional<std::size_t> indeterminacy;
  bool logconvex = false;
  std::optional<std::string> c46;
  std::optional<std::string> tolerance;
};

std::string to_string(stieltjes::Definiteness d) {
  switch (d) {
    case stieltjes::Definiteness::strictly_positive: return "strictly_positive";
    case stieltjes::Definiteness::semi_definite: return "semi_definite";
    case stieltjes::Definiteness::not_stieltjes: return "not_stieltjes";
  }
  return "?";
}

std::string to_string(stieltjes::TotalPositivity k) {
  switch (k) {
    case stieltjes::TotalPositivity::strictly_tp: return "strictly_tp";
    case stieltjes::TotalPositivity::semi_definite: return "semi_definite";
    case stieltjes::TotalPositivity::not_tp: return "not_tp";
  }
  return "?";
}

std::string to_string(stieltjes::LogConvexity k) {
  switch (k) {
    case stieltjes::LogConvexity::strictly_log_convex: return "strictly_log_convex";
    case stieltjes::LogConvexity::log_convex: return "log_convex";
    case stieltjes::LogConvexity::not_log_convex: return "not_log_convex";
  }
  return "?";
}

std::string to_string(stieltjes::C46Status s) {
  switch (s) {
    case stieltjes::C46Status::holds: return "holds";
    case stieltjes::C46Status::violated: return "violated";
    case stieltjes::C46Status::precondition_failed: return "precondition_failed";
  }
  return "?";
}

template <class T>
json record_json(const stieltjes::DeterminantRecord<T>& r) {
  return {{"shift", r.query.shift}, {"size", r.query.size}, {"value", str(r.value)}, {"sign", r.sign}};
}

template <class T>
json optional_series(const std::vector<std::optional<T>>& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(x ? json(str(*x)) : json(nullptr));
  return a;
}

template <class T>
json ratio_json(const stieltjes::RatioSeries<T>& r) {
  return {{"values", optional_series(r.values)}, {"degenerate", r.degenerate}, {"appears_bounded_away", r.appears_bounded_away}};
}

template <class T>
json analyze_sequence(std::span<const T> a, const AnalyzeFlags& f, const stieltjes::SignOptions& so, std::ostream* table) {
  json report;
  const std::size_t n = a.size();
  if (f.stieltjes_depth) {
    const auto v = stieltjes::stieltjes_verdict(a, *f.stieltjes_depth, so);
    json j{{"requested_depth", v.requested_depth}, {"depth_shift0", v.depth_shift0}, {"verdict", to_string(v.kind)}};
    j["depth_shift1"] = v.depth_shift1 ? json(*v.depth_shift1) : json(nullptr);
    j["witness"] = v.witness ? record_json(*v.witness) : json(nullptr);
    json dets = json::array();
    Table rows;
    for (const auto& d : v.determinants) {
      dets.push_back(record_json(d));
      rows.push_back({std::to_string(d.query.shift), std::to_string(d.query.size), short_str(d.value), std::to_string(d.sign)});
    }
    j["determinants"] = dets;
    report["stieltjes"] = j;
    if (table) {
      *table << "Stieltjes check to depth " << v.requested_depth << ": " << to_string(v.kind) << '\n';
      print_table(*table, {"shift", "size", "det", "sign"}, rows);
      *table << '\n';
    }
  }
  if (f.fekete) {
    const stieltjes::HankelQuery q{f.fekete_shift, *f.fekete};
    const auto r = stieltjes::fekete_total_positivity(a, q, so);
    json j{{"shift", q.shift},
           {"depth", q.size},
           {"verdict", to_string(r.kind)},
           {"minors_checked", r.minors_checked},
           {"determinants_evaluated", r.determinants_evaluated}};
    if (r.witness) {
      j["witness"] = {{"row", r.witness->row},
                      {"col", r.witness->col},
                      {"order", r.witness->order},
                      {"value", str(r.witness->value)},
                      {"sign", r.witness->sign}};
    } else {
      j["witness"] = nullptr;
    }
    report["fekete"] = j;
    if (table) {
      *table << "Fekete total positivity, shift " << q.shift << ", depth " << q.size << ": " << to_string(r.kind) << " ("
             << r.minors_checked << " minors)\n";
      if (r.witness) {
        *table << "witness: rows " << r.witness->row << ".., cols " << r.witness->col << ".., order " << r.witness->order
               << ", value " << short_str(r.witness->value) << '\n';
      }
      *table << '\n';
    }
  }
  if (f.indeterminacy) {
    const auto r = stieltjes::indeterminacy_ratios(a, *f.indeterminacy, so);
    const auto c1 = stieltjes::c1_sequence(a, *f.indeterminacy, so);
    report["indeterminacy"] = {{"depth", r.depth},
                               {"shift0", ratio_json(r.shift0)},
                               {"shift1", ratio_json(r.shift1)},
                               {"c1",
                                {{"mu1", str(c1.mu1)},
                                 {"values", optional_series(c1.values)},
                                 {"degenerate", c1.degenerate},
                                 {"monotone_nondecreasing", c1.monotone_nondecreasing},
                                 {"strictly_below_mu1", c1.strictly_below_mu1}}}};
    if (table) {
      Table rows;
      for (std::size_t i = 0; i < r.depth; ++i) {
        auto cell = [](const std::optional<T>& x) { return x ? short_str(*x) : std::string("-"); };
        rows.push_back({std::to_string(i + 1), cell(r.shift0.values[i]), cell(r.shift1.values[i]), cell(c1.values[i])});
      }
      *table << "Indeterminacy ratios (finite-depth heuristic)\n";
      print_table(*table, {"n", "shift0", "shift1", "c1"}, rows);
      *table << "shift0 bounded away: " << (r.shift0.appears_bounded_away ? "yes" : "no")
             << ", shift1 bounded away: " << (r.shift1.appears_bounded_away ? "yes" : "no") << "\n\n";
    }
  }
  if (f.logconvex) {
    const auto r = stieltjes::log_convexity_report(a, so);
    json theta = json::array();
    Table rows;
    for (std::size_t i = 0; i < r.theta.size(); ++i) {
      theta.push_back(str(r.theta[i]));
      rows.push_back({std::to_string(i + 1), short_str(r.theta[i])});
    }
    report["logconvex"] = {{"theta", theta},
                           {"theta_sup", str(r.theta_sup)},
                           {"sup_index", r.sup_index},
                           {"tail_sup", str(r.tail_sup)},
                           {"tail_from", r.tail_from},
                           {"tail_to", r.tail_to},
                           {"verdict", to_string(r.verdict)}};
    if (table) {
      *table << "Log-convexity: " << to_string(r.verdict) << ", sup theta = " << short_str(r.theta_sup) << " at n = " << r.sup_index
             << '\n';
      print_table(*table, {"n", "theta_n"}, rows);
      *table << '\n';
    }
  }
  if (f.c46) {
    T theta;
    if constexpr (std::is_same_v<T, BigRational>) {
      theta = rational_flag(*f.c46, "c46");
    } else {
      theta = to_real(rational_flag(*f.c46, "c46"));
    }
    const auto r = stieltjes::c46_check(a, theta, so);
    json j{{"theta", *f.c46}, {"status", to_string(r.status)}, {"pairs_checked", r.pairs_checked}, {"equalities", r.equalities}};
    j["precondition_index"] = r.precondition_index ? json(*r.precondition_index) : json(nullptr);
    if (r.first_violation) {
      j["first_violation"] = {{"k", r.first_violation->k},
                              {"n", r.first_violation->n},
                              {"lhs", str(r.first_violation->lhs)},
                              {"rhs", str(r.first_violation->rhs)}};
    } else {
      j["first_violation"] = nullptr;
    }
    report["c46"] = j;
    if (table) *table << "Product bound for theta = " << *f.c46 << ": " << to_string(r.status) << "\n\n";
  }
  (void)n;
  return report;
}

void cmd_analyze(AnalyzeFlags f, const OutputFlags& o, std::ostream& out) {
  const auto file = read_sequence_file(f.file, FileKind::moments);
  const auto m = file.moments();
  if (!f.stieltjes_depth && !f.fekete && !f.indeterminacy && !f.logconvex && !f.c46) {
    f.stieltjes_depth = (m.size() - 1) / 2;
    f.logconvex = m.size() >= 3 && m.all_positive();
  }
  stieltjes::SignOptions so;
  if (!m.is_exact()) {
    if (!f.tolerance) {
      throw InputError("decimal input: exact analyses are refused without --tolerance (a relative sign tolerance)");
    }
    so.relative_tolerance = double_flag(*f.tolerance, "tolerance");
    if (!(so.relative_tolerance > 0)) throw InputError("--tolerance must be positive");
  }
  json j;
  j["schema_version"] = schema_version;
  j["command"] = "analyze";
  j["input"] = {{"kind", to_string(file.kind)}, {"backend", file.exact ? "exact" : "decimal"}, {"length", m.size()}};
  if (!m.is_exact()) {
    j["input"]["precision_bits"] = m.precision_bits();
    j["relative_tolerance"] = so.relative_tolerance;
  }
  std::ostream* table = o.table ? &out : nullptr;
  json report;
  if (m.is_exact()) {
    report = analyze_sequence(std::span<const BigRational>(m.exact_values()), f, so, table);
  } else {
    PrecisionScope scope(m.precision_bits());
    const auto values = m.approx_values();
    report = analyze_sequence(std::span<const Real>(values), f, so, table);
  }
  for (auto it = report.begin(); it != report.end(); ++it) j[it.key()] = it.value();
  if (!o.table) emit(out, j);
}

// ---------------------------------------------------------------------------------------------
// katti

struct KattiFlags {
  std::string file;
  std::optional<std::size_t> kmax;
};

void cmd_katti(const KattiFlags& f, const OutputFlags& o, std::ostream& out) {
  const auto file = read_sequence_file(f.file, FileKind::pmf);
  if (file.kind != FileKind::pmf) throw InputError("katti needs a pmf file");
  if (file.size() < 2) throw InputError("katti needs at least two masses");
  const std::size_t kmax = f.kmax ? *f.kmax : std::min<std::size_t>(16, file.size() - 2);
  if (kmax + 2 > file.size()) throw InputError("--kmax needs masses up to index kmax+1");
  json j;
  j["schema_version"] = schema_version;
  j["command"] = "katti";
  j["kmax"] = kmax;
  j["backend"] = file.exact ? "exact" : "decimal";
  Table rows;
  if (file.exact) {
    for (const auto& v : file.exact_values) {
      if (v < 0) throw InputError("pmf masses must be non-negative");
    }
    const auto r = divisibility::katti_r_exact(std::span<const BigRational>(file.exact_values), kmax);
    json values = json::array();
    json negatives = json::array();
    for (std::size_t k = 0; k < r.r.size(); ++k) {
      values.push_back(str(r.r[k]));
      if (r.r[k] < 0) negatives.push_back(k);
      rows.push_back({std::to_string(k), str(r.r[k]), "0", r.r[k] < 0 ? "negative" : ""});
    }
    j["r"] = values;
    j["radius"] = json::array();
    j["first_negative"] = r.first_negative ? json(*r.first_negative) : json(nullptr);
    j["certified_negative"] = negatives;
    j["error_bound"] = "0";
    j["verdict"] = divisibility::to_string(r.first_negative ? divisibility::KattiVerdict::not_infinitely_divisible
                                                            : divisibility::KattiVerdict::no_certified_negative);
    const auto lc = divisibility::logconvex_pmf_check(std::span<const BigRational>(file.exact_values));
    j["logconvex"] = {{"verdict", divisibility::to_string(lc.verdict)}, {"checked", lc.checked}};
  } else {
    const auto pmf = file.pmf();
    const auto r = divisibility::katti_r(pmf, kmax);
    PrecisionScope scope(pmf.bits);
    j["r"] = real_array(r.r);
    j["radius"] = real_array(r.radius, 6);
    j["first_negative"] = r.first_negative ? json(*r.first_negative) : json(nullptr);
    j["certified_negative"] = r.certified_negative;
    j["error_bound"] = momentlab::to_string(r.error_bound, 6);
    j["verdict"] = divisibility::to_string(r.verdict);
    for (std::size_t k = 0; k < r.r.size(); ++k) {
      std::string sign = "uncertain";
      if (r.r[k] - r.radius[k] > 0) sign = "positive";
      if (r.r[k] + r.radius[k] < 0) sign = "negative";
      rows.push_back({std::to_string(k), short_str(r.r[k]), momentlab::to_string(r.radius[k], 3), sign});
    }
    const auto lc = divisibility::logconvex_pmf_check(pmf);
    j["logconvex"] = {{"verdict", divisibility::to_string(lc.verdict)}, {"checked", lc.checked}};
  }
  if (o.table) {
    print_table(out, {"k", "r_k", "radius", "sign"}, rows);
    out << "verdict: " << j["verdict"].get<std::string>() << '\n';
    return;
  }
  emit(out, j);
}

// ---------------------------------------------------------------------------------------------
// compose

struct ComposeFlags {
  std::string file;
  std::string op = "mb";
  std::optional<std::string> t;
  std::optional<unsigned> k;
  std::optional<std::size_t> upto;
  std::optional<std::string> with;
  bool symbolic = false;
};

MomentSequence classical_power(const MomentSequence& m, unsigned k, std::size_t upto) {
  MomentSequence acc = m.prefix(upto);
  for (unsigned i = 1; i < k; ++i) acc = algebra::classical_convolve(acc, m, upto);
  return acc;
}

void cmd_compose(const ComposeFlags& f, const OutputFlags& o, std::ostream& out) {
  const auto file = read_sequence_file(f.file, FileKind::moments);
  const auto m = file.moments();
  const std::size_t upto = f.upto ? *f.upto : m.max_index();
  if (upto > m.max_index()) throw InputError("--upto exceeds the length of the input");
  if (f.t && f.k) throw InputError("give either --t or --k, not both");
  json provenance{{"generator", "compose"}, {"op", f.op}, {"input", f.file}};
  std::optional<MomentSequence> result;

  if (f.op == "classical") {
    if (f.t) throw InputError("--op classical takes --k (or --with), not --t");
    if (f.with) {
      const auto other = read_sequence_file(*f.with, FileKind::moments).moments();
      result = algebra::classical_convolve(m, other, upto);
      provenance["with"] = *f.with;
    } else {
      const unsigned k = f.k ? *f.k : 2;
      if (k < 1) throw InputError("--k must be >= 1");
      result = classical_power(m, k, upto);
      provenance["k"] = k;
    }
  } else if (f.op == "mb") {
    if (f.with) throw InputError("--op mb does not take --with");
    if (f.symbolic) {
      if (!m.is_exact()) throw BackendError("--symbolic needs exact input");
      const auto polys = algebra::mb_compose_t(m, upto);
      json j;
      j["schema_version"] = schema_version;
      j["command"] = "compose";
      j["op"] = "mb";
      j["symbolic"] = true;
      j["variable"] = "t";
      json rows = json::array();
      Table table;
      for (std::size_t n = 0; n < polys.size(); ++n) {
        json coeffs = json::array();
        for (const auto& c : polys[n].coefficients()) coeffs.push_back(str(c));
        rows.push_back({{"n", n}, {"coefficients", coeffs}, {"polynomial", polys[n].to_string("t")}});
        table.push_back({std::to_string(n), polys[n].to_string("t")});
      }
      j["polynomials"] = rows;
      j["provenance"] = provenance;
      if (o.table) {
        print_table(out, {"n", "mu^{o t}_n"}, table);
      } else {
        emit(out, j);
      }
      return;
    }
    if (f.k) {
      if (*f.k < 1) throw InputError("--k must be >= 1");
      result = algebra::mb_compose_integer(m, *f.k, upto);
      provenance["k"] = *f.k;
    } else if (f.t) {
      const BigRational t = rational_flag(*f.t, "t");
      provenance["t"] = str(t);
      if (m.is_exact()) {
        result = algebra::evaluate_at(algebra::mb_compose_t(m, upto), t);
      } else {
        PrecisionScope scope(m.precision_bits());
        const auto values = m.approx_values();
        auto composed = algebra::kernels::mb_compose_at(std::span<const Real>(values), t, upto);
        result = MomentSequence::approximate(std::move(composed), m.precision_bits());
      }
    } else {
      throw InputError("--op mb needs --t, --k or --symbolic");
    }
  } else if (f.op == "boolean") {
    if (f.with) {
      const auto other = read_sequence_file(*f.with, FileKind::moments).moments();
      result = algebra::boolean_convolve(m, other, upto);
      provenance["with"] = *f.with;
    } else {
      BigRational t = 2;
      if (f.t) t = rational_flag(*f.t, "t");
      if (f.k) t = BigRational(*f.k);
      result = algebra::boolean_power_t(m, t, upto);
      provenance["t"] = str(t);
    }
  } else {
    throw InputError("--op must be classical, mb or boolean");
  }
  auto seq = SequenceFile::from(*result);
  seq.provenance = provenance;
  write_sequence(out, seq, o);
}

// ---------------------------------------------------------------------------------------------
// simulate

struct SimulateFlags {
  std::optional<std::string> atoms;
  std::optional<std::string> poisson_jumps;
  std::optional<std::string> lognormal_jumps;
  std::string rate = "1";
  std::string epsilon = "0";
  std::string t = "1";
  std::size_t trials = 100000;
  std::optional<std::uint64_t> seed;
  std::string level = "0.99";
  // spectrum
  std::string a = "0.5";
  std::string b = "1.5";
  unsigned n = 2;
  std::optional<std::string> gap;
  // epsilon
  std::string eps_grid = "0.2,0.1,0.05";
  std::string eta = "0.1";
};

simulator::JumpSpec jump_spec(const SimulateFlags& f) {
  const int given = (f.atoms ? 1 : 0) + (f.poisson_jumps ? 1 : 0) + (f.lognormal_jumps ? 1 : 0);
  if (given != 1) throw InputError("give exactly one of --atoms, --poisson-jumps, --lognormal-jumps");
  simulator::JumpSpec spec;
  spec.rate = double_flag(f.rate, "rate");
  spec.epsilon = double_flag(f.epsilon, "epsilon");
  if (f.atoms) {
    simulator::AtomLaw law;
    std::istringstream in(*f.atoms);
    std::string item;
    while (std::getline(in, item, ',')) {
      const auto [x, w] = double_pair(item, "atoms");
      law.atoms.push_back({x, w});
    }
    spec.law = law;
  } else if (f.poisson_jumps) {
    spec.law = simulator::PoissonLaw{double_flag(*f.poisson_jumps, "poisson-jumps")};
  } else {
    const auto [alpha, sigma2] = double_pair(*f.lognormal_jumps, "lognormal-jumps");
    spec.law = simulator::LognormalLaw{alpha, sigma2};
  }
  spec.validate();
  return spec;
}

json spec_json(const simulator::JumpSpec& spec) {
  json law;
  if (const auto* a = std::get_if<simulator::AtomLaw>(&spec.law)) {
    law["type"] = "atoms";
    json atoms = json::array();
    for (const auto& at : a->atoms) atoms.push_back({{"x", at.x}, {"w", at.w}});
    law["atoms"] = atoms;
  } else if (const auto* p = std::get_if<simulator::PoissonLaw>(&spec.law)) {
    law = {{"type", "poisson"}, {"lambda", p->lambda}};
  } else {
    const auto& l = std::get<simulator::LognormalLaw>(spec.law);
    law = {{"type", "lognormal"}, {"alpha", l.alpha}, {"sigma2", l.sigma2}};
  }
  return {{"rate", spec.rate}, {"epsilon", spec.epsilon}, {"jump_law", law}};
}

json estimate_json(const simulator::BinomialEstimate& e) {
  return {{"count", e.count}, {"p_hat", e.p_hat}, {"standard_error", e.standard_error}, {"ci", {e.ci_low, e.ci_high}}};
}

void cmd_simulate_spectrum(const SimulateFlags& f, const OutputFlags& o, std::ostream& out) {
  if (!f.seed) throw InputError("--seed is required");
  const auto spec = jump_spec(f);
  std::optional<std::pair<double, double>> gap;
  if (f.gap) gap = double_pair(*f.gap, "gap");
  const auto r = simulator::spectrum_gap_test(spec, double_flag(f.a, "a"), double_flag(f.b, "b"), f.n, f.trials, *f.seed,
                                              double_flag(f.level, "level"), double_flag(f.t, "t"), gap);
  json j;
  j["schema_version"] = schema_version;
  j["command"] = "simulate spectrum";
  j["spec"] = spec_json(spec);
  j["interval"] = {r.a, r.b};
  j["n"] = r.n;
  j["scaled_interval"] = {r.n * r.a, r.n * r.b};
  j["t"] = r.t;
  j["trials"] = r.trials;
  j["seed"] = r.seed;
  j["level"] = r.level;
  j["gap"] = r.gap ? json{r.gap->first, r.gap->second} : json(nullptr);
  j["ab"] = estimate_json(r.ab);
  j["nanb"] = estimate_json(r.nanb);
  j["replication_lower_bound"] = r.replication_lower_bound;
  j["replication_jump_count"] = r.replication_jump_count ? json(*r.replication_jump_count) : json(nullptr);
  j["z_score"] = r.z_score ? json(*r.z_score) : json(nullptr);
  j["verdict"] = simulator::to_string(r.verdict);
  if (o.table) {
    print_table(out, {"interval", "count", "p_hat", "std_err", "ci_low", "ci_high"},
                {{"(" + fixed(r.a) + ", " + fixed(r.b) + ")", std::to_string(r.ab.count), fixed(r.ab.p_hat), fixed(r.ab.standard_error),
                  fixed(r.ab.ci_low), fixed(r.ab.ci_high)},
                 {"(" + fixed(r.n * r.a) + ", " + fixed(r.n * r.b) + ")", std::to_string(r.nanb.count), fixed(r.nanb.p_hat),
                  fixed(r.nanb.standard_error), fixed(r.nanb.ci_low), fixed(r.nanb.ci_high)}});
    out << "trials " << r.trials << ", level " << r.level << ", replication lower bound " << fixed(r.replication_lower_bound)
        << ", verdict " << simulator::to_string(r.verdict) << '\n';
    return;
  }
  emit(out, j);
}

void cmd_simulate_epsilon(const SimulateFlags& f, const OutputFlags& o, std::ostream& out) {
  if (!f.seed) throw InputError("--seed is required");
  const auto spec = jump_spec(f);
  const auto r = simulator::epsilon_truncation_drift(spec, double_list(f.eps_grid, "eps-grid"), double_flag(f.eta, "eta"), f.trials,
                                                     *f.seed, double_flag(f.level, "level"), double_flag(f.t, "t"));
  json j;
  j["schema_version"] = schema_version;
  j["command"] = "simulate epsilon";
  j["spec"] = spec_json(spec);
  j["eta"] = r.eta;
  j["t"] = r.t;
  j["trials"] = r.trials;
  j["seed"] = r.seed;
  j["level"] = r.level;
  json rows = json::array();
  Table table;
  for (const auto& row : r.rows) {
    json e = estimate_json(row.estimate);
    e["epsilon"] = row.epsilon;
    rows.push_back(e);
    table.push_back({fixed(row.epsilon), std::to_string(row.estimate.count), fixed(row.estimate.p_hat),
                     fixed(row.estimate.standard_error), fixed(row.estimate.ci_low), fixed(row.estimate.ci_high)});
  }
  j["rows"] = rows;
  j["monotone_counts"] = r.monotone_counts;
  j["monotone_within_bands"] = r.monotone_within_bands;
  if (o.table) {
    out << "P[|X - X_eps| > " << r.eta << "], " << r.trials << " trials\n";
    print_table(out, {"epsilon", "count", "p_hat", "std_err", "ci_low", "ci_high"}, table);
    out << "monotone: " << (r.monotone_within_bands ? "yes" : "no") << '\n';
    return;
  }
  emit(out, j);
}

// ---------------------------------------------------------------------------------------------
// scan

struct ScanFlags {
  std::string theta_grid = "1/100,1/49,1/25,1/16,1/9,4/25,9/49,1/4,4/9,9/16";
  std::string t_grid = "1/4,1/2,3/4";
  std::size_t depth = 5;
  std::optional<std::string> delta;
};

void cmd_scan(const ScanFlags& f, const OutputFlags& o, std::ostream& out) {
  const auto thetas = rational_list(f.theta_grid, "theta-grid");
  const auto ts = rational_list(f.t_grid, "t-grid");
  std::optional<BigRational> delta;
  if (f.delta) delta = rational_flag(*f.delta, "delta");
  const auto r = semigroup::theta_threshold_scan(thetas, ts, f.depth, delta);
  json j;
  j["schema_version"] = schema_version;
  j["command"] = "scan";
  j["depth"] = r.depth;
  json tg = json::array();
  for (const auto& t : r.t_grid) tg.push_back(str(t));
  j["t_grid"] = tg;
  json rows = json::array();
  Table table;
  for (std::size_t i = 0; i < r.theta_grid.size(); ++i) {
    json cells = json::array();
    std::vector<std::string> trow{str(r.theta_grid[i]), str(semigroup::q_for_theta(r.theta_grid[i])), short_str(to_real(r.sufficiency_ratio[i]))};
    for (std::size_t k = 0; k < r.t_grid.size(); ++k) {
      const auto& c = r.pass_matrix[i][k];
      json cell{{"t", str(r.t_grid[k])}, {"pass", c.stieltjes_ok}, {"kind", to_string(c.kind)}};
      cell["witness"] = c.witness ? json{{"shift", c.witness->shift}, {"size", c.witness->size}} : json(nullptr);
      cells.push_back(cell);
      trow.push_back(c.stieltjes_ok ? "pass" : "FAIL");
    }
    rows.push_back({{"theta", str(r.theta_grid[i])},
                    {"q", str(semigroup::q_for_theta(r.theta_grid[i]))},
                    {"sufficiency_ratio", str(r.sufficiency_ratio[i])},
                    {"cells", cells}});
    table.push_back(trow);
  }
  j["rows"] = rows;
  j["monotone_in_theta"] = r.monotone_in_theta;
  j["delta"] = r.delta ? json(str(*r.delta)) : json(nullptr);
  j["empirical_theta_max"] = r.empirical_theta_max ? json(str(*r.empirical_theta_max)) : json(nullptr);
  j["conjectured_threshold"] = str(r.conjectured_threshold);
  j["note"] = "finite-depth evidence only; the 1/6 threshold is a conjecture";
  if (o.table) {
    std::vector<std::string> header{"theta", "q", "theta/(1-theta)^2"};
    for (const auto& t : r.t_grid) header.push_back("t=" + str(t));
    print_table(out, header, table);
    out << "empirical theta max: " << (r.empirical_theta_max ? str(*r.empirical_theta_max) : std::string("none"))
        << ", conjectured threshold: " << str(r.conjectured_threshold) << '\n';
    return;
  }
  emit(out, j);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"momentlab: moment sequences, infinite divisibility and Stieltjes checks"};
  app.require_subcommand(1);
  app.fallthrough();
  OutputFlags output;
  app.add_flag("--table", output.table, "human-readable aligned table instead of JSON");

  // moments
  auto* moments = app.add_subcommand("moments", "generate a moment sequence or pmf");
  moments->require_subcommand(1);
  MomentsFlags mf;
  moments->add_flag("--csv", output.csv, "CSV instead of JSON");
  std::string source;
  auto add_source = [&](const std::string& name, const std::string& help) {
    auto* s = moments->add_subcommand(name, help);
    s->callback([&source, name] { source = name; });
    return s;
  };
  {
    auto* s = add_source("lognormal", "mu_n = exp(n alpha + n^2 sigma2/2)");
    s->add_option("--alpha", mf.alpha)->capture_default_str();
    s->add_option("--sigma2", mf.sigma2)->capture_default_str();
    s->add_option("--upto", mf.upto)->capture_default_str();
    add_precision(s, mf.precision);
  }
  {
    auto* s = add_source("lattice", "mu_n = r^n q^(n^2), exact");
    s->add_option("--q", mf.q)->capture_default_str();
    s->add_option("--r", mf.r)->capture_default_str();
    s->add_option("--upto", mf.upto)->capture_default_str();
  }
  {
    auto* s = add_source("truncated", "left-truncated lognormal, mass moved to the origin");
    s->add_option("--alpha", mf.alpha)->capture_default_str();
    s->add_option("--sigma2", mf.sigma2)->capture_default_str();
    s->add_option("--logb", mf.logb, "truncation point in log space")->capture_default_str();
    s->add_option("--upto", mf.upto)->capture_default_str();
    add_precision(s, mf.precision);
  }
  {
    auto* s = add_source("gap", "gap-censored lognormal, mass on (a,b) moved to the origin");
    s->add_option("--alpha", mf.alpha)->capture_default_str();
    s->add_option("--sigma2", mf.sigma2)->capture_default_str();
    s->add_option("--a", mf.a)->capture_default_str();
    s->add_option("--b", mf.b)->capture_default_str();
    s->add_option("--upto", mf.upto)->capture_default_str();
    add_precision(s, mf.precision);
  }
  {
    auto* s = add_source("leipnik", "discrete lattice law with lognormal moments");
    s->add_option("--alpha", mf.alpha)->capture_default_str();
    s->add_option("--sigma2", mf.sigma2)->capture_default_str();
    s->add_option("--a", mf.leipnik_a, "lattice offset a > 0")->capture_default_str();
    s->add_option("--upto", mf.upto)->capture_default_str();
    add_precision(s, mf.precision);
  }
  {
    auto* s = add_source("mixed-poisson", "pmf of a Poisson law with (truncated) lognormal intensity N e^X");
    s->add_option("--alpha", mf.alpha)->capture_default_str();
    s->add_option("--sigma2", mf.sigma2)->capture_default_str();
    s->add_option("--logb", mf.mp_logb, "truncation point of X; omitted means no truncation");
    s->add_option("--N", mf.N)->capture_default_str();
    s->add_option("--kmax", mf.kmax, "last pmf index")->capture_default_str();
    add_precision(s, mf.precision);
  }
  {
    auto* s = add_source("poisson", "Poisson moments (Touchard polynomials), exact");
    s->add_option("--lambda", mf.lambda)->capture_default_str();
    s->add_option("--upto", mf.upto)->capture_default_str();
  }
  {
    auto* s = add_source("poisson-pmf", "Poisson pmf");
    s->add_option("--lambda", mf.lambda)->capture_default_str();
    s->add_option("--kmax", mf.kmax)->capture_default_str();
    add_precision(s, mf.precision);
  }
  {
    auto* s = add_source("geometric", "geometric pmf (1-rho) rho^k, exact");
    s->add_option("--rho", mf.rho)->capture_default_str();
    s->add_option("--kmax", mf.kmax)->capture_default_str();
  }

  // analyze
  auto* analyze = app.add_subcommand("analyze", "Hankel analyses of a moment sequence file");
  AnalyzeFlags af;
  analyze->add_option("file", af.file, "JSON or CSV moment file")->required();
  analyze->add_option("--stieltjes-depth", af.stieltjes_depth, "check Delta_{m,0}, Delta_{m,1} for m <= depth");
  analyze->add_option("--fekete", af.fekete, "exhaustive consecutive minors of the Hankel matrix of this size");
  analyze->add_option("--fekete-shift", af.fekete_shift)->capture_default_str();
  analyze->add_option("--indeterminacy", af.indeterminacy, "determinant ratios and c_1 sequence to this depth");
  analyze->add_flag("--logconvex", af.logconvex, "log-convexity report");
  analyze->add_option("--c46", af.c46, "product bound check at this theta");
  analyze->add_option("--tolerance", af.tolerance, "relative sign tolerance, required for decimal input");

  // katti
  auto* katti = app.add_subcommand("katti", "Katti's recursion on a pmf file");
  KattiFlags kf;
  katti->add_option("file", kf.file, "JSON or CSV pmf file")->required();
  katti->add_option("--kmax", kf.kmax, "last r index (default min(16, K-1))");

  // compose
  auto* compose = app.add_subcommand("compose", "compose a moment sequence");
  ComposeFlags cf;
  compose->add_option("file", cf.file)->required();
  compose->add_option("--op", cf.op, "classical | mb | boolean")->capture_default_str();
  compose->add_option("--t", cf.t, "rational time parameter");
  compose->add_option("--k", cf.k, "integer power");
  compose->add_option("--upto", cf.upto);
  compose->add_option("--with", cf.with, "second operand for classical or boolean convolution");
  compose->add_flag("--symbolic", cf.symbolic, "mb only: polynomials in t");
  compose->add_flag("--csv", output.csv, "CSV instead of JSON");

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Monte-Carlo compound-Poisson checks");
  simulate->require_subcommand(1);
  SimulateFlags sf;
  auto add_jump_flags = [&](CLI::App* s) {
    s->add_option("--atoms", sf.atoms, "jump atoms 'x:w,x:w,...'");
    s->add_option("--poisson-jumps", sf.poisson_jumps, "Poisson(lambda) jumps");
    s->add_option("--lognormal-jumps", sf.lognormal_jumps, "lognormal 'alpha:sigma2' jumps");
    s->add_option("--rate", sf.rate)->capture_default_str();
    s->add_option("--t", sf.t)->capture_default_str();
    s->add_option("--trials", sf.trials)->capture_default_str();
    s->add_option("--seed", sf.seed, "64-bit seed")->required();
    s->add_option("--level", sf.level, "confidence level")->capture_default_str();
  };
  auto* spectrum = simulate->add_subcommand("spectrum", "P[X in (a,b)] > 0 implies P[X in (na,nb)] > 0");
  add_jump_flags(spectrum);
  spectrum->add_option("--epsilon", sf.epsilon)->capture_default_str();
  spectrum->add_option("--a", sf.a)->capture_default_str();
  spectrum->add_option("--b", sf.b)->capture_default_str();
  spectrum->add_option("--n", sf.n)->capture_default_str();
  spectrum->add_option("--gap", sf.gap, "post-hoc gap censoring 'a:b' of the samples");
  auto* epsilon = simulate->add_subcommand("epsilon", "P[|X - X_eps| > eta] across an epsilon grid");
  add_jump_flags(epsilon);
  epsilon->add_option("--eps-grid", sf.eps_grid)->capture_default_str();
  epsilon->add_option("--eta", sf.eta)->capture_default_str();

  // scan
  auto* scan = app.add_subcommand("scan", "theta-threshold scan on mu_n = q^(n^2)");
  ScanFlags scf;
  scan->add_option("--theta-grid", scf.theta_grid, "comma-separated theta = 1/q^2 values")->capture_default_str();
  scan->add_option("--t-grid", scf.t_grid)->capture_default_str();
  scan->add_option("--depth", scf.depth)->capture_default_str();
  scan->add_option("--delta", scf.delta, "critical index delta, reported alongside theta/(1-theta)^2");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    if (moments->parsed()) {
      cmd_moments(source, mf, output, out);
    } else if (analyze->parsed()) {
      cmd_analyze(af, output, out);
    } else if (katti->parsed()) {
      cmd_katti(kf, output, out);
    } else if (compose->parsed()) {
      cmd_compose(cf, output, out);
    } else if (spectrum->parsed()) {
      cmd_simulate_spectrum(sf, output, out);
    } else if (epsilon->parsed()) {
      cmd_simulate_epsilon(sf, output, out);
    } else if (scan->parsed()) {
      cmd_scan(scf, output, out);
    }
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return 3;
  }
  return 0;
}

}  // namespace momentlab::cli

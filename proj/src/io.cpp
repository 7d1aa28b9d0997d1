#include "seqmeas/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "seqmeas/error.hpp"

namespace seqmeas::io {

using hilbert::Complex;
using hilbert::ComplexMatrix;
using hilbert::StateVector;

namespace {

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

double number_field(const json& j, const std::string& what) {
  if (!j.is_number()) throw MalformedProblemError(what + " must be a number");
  return j.get<double>();
}

kolmogorov::Table2x2 table_from_json(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2) throw MalformedProblemError(where + ": table must be a 2x2 array");
  kolmogorov::Table2x2 t{};
  for (std::size_t r = 0; r < 2; ++r) {
    if (!j[r].is_array() || j[r].size() != 2) {
      throw MalformedProblemError(where + ": table must be a 2x2 array");
    }
    for (std::size_t c = 0; c < 2; ++c) t[r][c] = number_field(j[r][c], where + " entry");
  }
  return t;
}

Complex complex_from_json(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  throw std::invalid_argument("complex entries must be [re, im] pairs");
}

double parse_double(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("cannot parse " + what + " '" + text + "'");
  }
  if (used != text.size()) throw std::invalid_argument("cannot parse " + what + " '" + text + "'");
  return value;
}

ComplexMatrix on_leg(const ComplexMatrix& local, int leg) {
  const ComplexMatrix id = ComplexMatrix::identity(2);
  return leg == 1 ? hilbert::tensor_product(local, id) : hilbert::tensor_product(id, local);
}

}  // namespace

std::string format_time(double seconds) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9f", seconds);
  return buf;
}

std::string format_double(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  if (!text.empty() && text.back() == ',') out.emplace_back();
  return out;
}

// ---- feasibility ----------------------------------------------------------

kolmogorov::FeasibilityProblem problem_from_json(const json& j) {
  if (!j.is_object()) throw MalformedProblemError("problem must be a JSON object");
  if (!j.contains("variables") || !j["variables"].is_array()) {
    throw MalformedProblemError("problem needs a \"variables\" array");
  }
  kolmogorov::FeasibilityProblem p;
  for (const auto& v : j["variables"]) {
    if (!v.is_string()) throw MalformedProblemError("variable names must be strings");
    p.variables.push_back(v.get<std::string>());
  }
  if (!j.contains("pairwise") || !j["pairwise"].is_array()) {
    throw MalformedProblemError("problem needs a \"pairwise\" array");
  }
  for (const auto& entry : j["pairwise"]) {
    if (!entry.is_object() || !entry.contains("x") || !entry.contains("y") || !entry["x"].is_string() ||
        !entry["y"].is_string()) {
      throw MalformedProblemError("pairwise entries need string fields \"x\" and \"y\"");
    }
    const auto x = entry["x"].get<std::string>();
    const auto y = entry["y"].get<std::string>();
    const std::string where = "pairwise (" + x + ", " + y + ")";
    if (entry.contains("table")) {
      p.pairwise.push_back({x, y, table_from_json(entry["table"], where)});
    } else if (entry.contains("correlation")) {
      p.pairwise.push_back(kolmogorov::unbiased_table(x, y, number_field(entry["correlation"], where)));
      p.assumed_unbiased_marginals = true;
    } else {
      throw MalformedProblemError(where + ": needs \"table\" or \"correlation\"");
    }
  }
  if (j.contains("marginals")) {
    if (!j["marginals"].is_object()) throw MalformedProblemError("\"marginals\" must be an object");
    for (const auto& [name, m] : j["marginals"].items()) {
      if (!m.is_array() || m.size() != 2) {
        throw MalformedProblemError("marginal of '" + name + "' must be [p(+1), p(-1)]");
      }
      p.singleton_marginals[name] = {number_field(m[0], "marginal"), number_field(m[1], "marginal")};
    }
  }
  return p;
}

json problem_to_json(const kolmogorov::FeasibilityProblem& problem) {
  json j;
  j["variables"] = problem.variables;
  j["pairwise"] = json::array();
  for (const auto& t : problem.pairwise) {
    j["pairwise"].push_back({{"x", t.x},
                             {"y", t.y},
                             {"table", {{t.table[0][0], t.table[0][1]}, {t.table[1][0], t.table[1][1]}}}});
  }
  if (!problem.singleton_marginals.empty()) {
    json m = json::object();
    for (const auto& [name, v] : problem.singleton_marginals) m[name] = {v[0], v[1]};
    j["marginals"] = m;
  }
  return j;
}

json result_to_json(const kolmogorov::FeasibilityResult& result,
                    const kolmogorov::FeasibilityProblem& problem) {
  json j;
  j["status"] = kolmogorov::to_string(result.status);
  if (result.witness) j["witness"] = *result.witness;
  if (result.max_violation) j["max_violation"] = *result.max_violation;
  if (problem.assumed_unbiased_marginals) j["assumed_unbiased_marginals"] = true;
  return j;
}

// ---- sequential / epr -----------------------------------------------------

json table_to_json(const sequential::SequentialJointTable& table) {
  return {{"first", table.order_label.first},
          {"second", table.order_label.second},
          {"first_outcomes", table.first_outcomes},
          {"second_outcomes", table.second_outcomes},
          {"q", table.q},
          {"covariance", sequential::covariance(table)}};
}

json decomposition_to_json(const epr::ConditionalDecomposition& d) {
  return {{"p_a_plus", d.p_plus},
          {"e_b_given_a_plus", d.e_b_given_plus},
          {"p_a_minus", d.p_minus},
          {"e_b_given_a_minus", d.e_b_given_minus},
          {"p_b_plus_given_a_plus", d.p_b_plus_given_plus},
          {"p_b_plus_given_a_minus", d.p_b_plus_given_minus},
          {"recombined", d.recombined},
          {"correlation", d.correlation},
          {"identity_holds", d.identity_holds}};
}

json inequality_to_json(const kolmogorov::InequalityCheck& check) {
  return {{"lhs", check.lhs}, {"rhs", check.rhs}, {"satisfied", check.satisfied}};
}

json chsh_report_to_json(const kolmogorov::ChshReport& report) {
  json facets = json::array();
  json violated = json::array();
  static constexpr const char* kTerms[] = {"E11", "E12", "E21", "E22"};
  for (std::size_t i = 0; i < report.facets.size(); ++i) {
    const auto& f = report.facets[i];
    facets.push_back({{"minus_term", kTerms[f.minus_position]},
                      {"overall_sign", f.overall_sign},
                      {"value", f.value},
                      {"violated", f.violated}});
    if (f.violated) violated.push_back(i);
  }
  return {{"facets", facets},
          {"max_value", report.max_value},
          {"violated", report.violated},
          {"violated_facets", violated}};
}

// ---- simulation -----------------------------------------------------------

json stats_to_json(const eventsim::CoincidenceStats& stats) {
  json j;
  j["counts"] = {{"++", stats.counts[0][0]},
                 {"+-", stats.counts[0][1]},
                 {"-+", stats.counts[1][0]},
                 {"--", stats.counts[1][1]}};
  j["n_pairs"] = stats.n_pairs;
  j["n_g12"] = stats.n_g12;
  j["n_g21"] = stats.n_g21;
  j["n_simultaneous"] = stats.n_simultaneous;
  j["n_unmatched"] = stats.n_unmatched;
  j["n_matched"] = stats.n_matched();
  if (stats.e_hat) {
    j["status"] = "ok";
    j["e_hat"] = *stats.e_hat;
    j["std_err"] = *stats.std_err;
  } else {
    j["status"] = "no_data";
    j["e_hat"] = nullptr;
    j["std_err"] = nullptr;
  }
  return j;
}

void write_events_csv(std::ostream& out, const std::vector<eventsim::EventRecord>& events,
                      const eventsim::SimConfig& config) {
  out << kEventCsvHeader << '\n';
  const std::string ta = format_double(config.theta_a);
  const std::string tb = format_double(config.theta_b);
  for (const auto& e : events) {
    out << e.pair_id << ',' << ta << ',' << tb << ',';
    if (e.t1) out << format_time(*e.t1);
    out << ',';
    if (e.t2) out << format_time(*e.t2);
    out << ',';
    if (e.outcome1) out << *e.outcome1;
    out << ',';
    if (e.outcome2) out << *e.outcome2;
    out << '\n';
  }
}

std::vector<eventsim::EventRecord> read_events_csv(std::istream& in) {
  std::vector<eventsim::EventRecord> events;
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line) || trim(line) != kEventCsvHeader) {
    throw std::runtime_error("event CSV: expected header '" + std::string(kEventCsvHeader) + "'");
  }
  ++line_no;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_list(line);
    auto fail = [&](const std::string& why) {
      return std::runtime_error("event CSV line " + std::to_string(line_no) + ": " + why);
    };
    if (fields.size() != 7) throw fail("expected 7 fields, got " + std::to_string(fields.size()));
    eventsim::EventRecord e;
    const auto& id = fields[0];
    if (std::from_chars(id.data(), id.data() + id.size(), e.pair_id).ec != std::errc{}) {
      throw fail("bad pair_id '" + id + "'");
    }
    try {
      if (!fields[3].empty()) e.t1 = parse_double(fields[3], "t1");
      if (!fields[4].empty()) e.t2 = parse_double(fields[4], "t2");
    } catch (const std::invalid_argument& ex) {
      throw fail(ex.what());
    }
    auto outcome = [&](const std::string& f) -> std::optional<int> {
      if (f.empty()) return std::nullopt;
      if (f == "1" || f == "+1") return 1;
      if (f == "-1") return -1;
      throw fail("outcome must be 1 or -1, got '" + f + "'");
    };
    e.outcome1 = outcome(fields[5]);
    e.outcome2 = outcome(fields[6]);
    if (e.t1.has_value() != e.outcome1.has_value() || e.t2.has_value() != e.outcome2.has_value()) {
      throw fail("an outcome must be present exactly when its click time is");
    }
    e.branch = (e.t1 && e.t2 && *e.t2 < *e.t1) ? eventsim::Branch::first_clicked_2
                                               : eventsim::Branch::first_clicked_1;
    events.push_back(e);
  }
  return events;
}

// ---- states and observables ------------------------------------------------

ComplexMatrix matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw std::invalid_argument("matrix must be a non-empty array of rows");
  const std::size_t rows = j.size();
  if (!j[0].is_array()) throw std::invalid_argument("matrix rows must be arrays");
  const std::size_t cols = j[0].size();
  std::vector<Complex> entries;
  entries.reserve(rows * cols);
  for (const auto& row : j) {
    if (!row.is_array() || row.size() != cols) throw DimensionError("matrix rows have unequal length");
    for (const auto& z : row) entries.push_back(complex_from_json(z));
  }
  return ComplexMatrix(rows, cols, std::move(entries));
}

json matrix_to_json(const ComplexMatrix& m) {
  json out = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    out.push_back(row);
  }
  return out;
}

StateVector parse_state(const json& spec, std::string* label) {
  if (spec.is_string()) {
    const auto name = spec.get<std::string>();
    if (label) *label = name;
    const double h = 1.0 / std::numbers::sqrt2;
    if (name == "ket0") return StateVector::basis(2, 0);
    if (name == "ket1") return StateVector::basis(2, 1);
    if (name == "plus") return StateVector::normalized({h, h});
    if (name == "minus") return StateVector::normalized({h, -h});
    if (name == "plus_i") return StateVector::normalized({h, Complex(0.0, h)});
    if (name == "minus_i") return StateVector::normalized({h, Complex(0.0, -h)});
    if (name == "singlet") return epr::singlet_state();
    throw std::invalid_argument("unknown state preset '" + name + "'");
  }
  if (!spec.is_array()) throw std::invalid_argument("state must be a preset name or an amplitude array");
  std::vector<Complex> amps;
  for (const auto& z : spec) amps.push_back(complex_from_json(z));
  if (label) *label = "custom";
  return StateVector(std::move(amps));
}

NamedObservable parse_observable(const json& spec, epr::Convention convention) {
  if (!spec.is_string()) {
    auto m = matrix_from_json(spec);
    if (!hilbert::is_hermitian(m)) throw NotHermitianError("observable matrix is not Hermitian within 1e-10");
    return {"custom", std::move(m)};
  }
  const auto name = trim(spec.get<std::string>());
  auto pauli = [](const std::string& p) -> std::optional<ComplexMatrix> {
    if (p == "pauli_x") return hilbert::pauli_x();
    if (p == "pauli_y") return hilbert::pauli_y();
    if (p == "pauli_z") return hilbert::pauli_z();
    if (p == "identity") return ComplexMatrix::identity(2);
    return std::nullopt;
  };
  if (auto m = pauli(name)) return {name, *m};

  if (const auto at = name.find('@'); at != std::string::npos) {
    const auto base = name.substr(0, at);
    const auto leg = name.substr(at + 1);
    auto m = pauli(base);
    if (!m || (leg != "leg1" && leg != "leg2")) {
      throw std::invalid_argument("unknown observable preset '" + name + "'");
    }
    return {name, on_leg(*m, leg == "leg1" ? 1 : 2)};
  }
  if (name.rfind("leg1:", 0) == 0 || name.rfind("leg2:", 0) == 0) {
    const double theta = parse_double(name.substr(5), "leg angle");
    const epr::AngleSetting setting(theta, name[3] == '1' ? epr::Leg::first : epr::Leg::second, convention);
    const double t = setting.bloch_angle();
    const ComplexMatrix local = Complex(std::cos(t)) * hilbert::pauli_z() + Complex(std::sin(t)) * hilbert::pauli_x();
    return {name, on_leg(local, name[3] == '1' ? 1 : 2)};
  }
  throw std::invalid_argument("unknown observable preset '" + name + "'");
}

}  // namespace seqmeas::io

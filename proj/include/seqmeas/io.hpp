#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "seqmeas/eprbohm.hpp"
#include "seqmeas/eventsim.hpp"
#include "seqmeas/hilbert.hpp"
#include "seqmeas/kolmogorov.hpp"
#include "seqmeas/sequential.hpp"

// Wire formats: feasibility problem/result JSON, coincidence stats JSON, the
// event CSV, and the state/observable specs accepted on the command line.
namespace seqmeas::io {

using json = nlohmann::json;

// ---- feasibility ----------------------------------------------------------

/// {"variables": [...], "pairwise": [{"x", "y", "table": [[pp, pm], [mp, mm]]}]}.
/// A pairwise entry may carry "correlation": E instead of "table"; it then gets
/// unbiased marginals and the problem is flagged. Optional "marginals":
/// {name: [p(+1), p(-1)]}. Throws MalformedProblemError on any schema error.
kolmogorov::FeasibilityProblem problem_from_json(const json& j);
json problem_to_json(const kolmogorov::FeasibilityProblem& problem);
json result_to_json(const kolmogorov::FeasibilityResult& result,
                    const kolmogorov::FeasibilityProblem& problem);

// ---- sequential / epr -----------------------------------------------------

json table_to_json(const sequential::SequentialJointTable& table);
json decomposition_to_json(const epr::ConditionalDecomposition& d);
json inequality_to_json(const kolmogorov::InequalityCheck& check);
json chsh_report_to_json(const kolmogorov::ChshReport& report);

// ---- simulation -----------------------------------------------------------

json stats_to_json(const eventsim::CoincidenceStats& stats);

inline constexpr const char* kEventCsvHeader = "pair_id,theta_a,theta_b,t1,t2,outcome1,outcome2";

// Times with 9 decimals, angles with 17 significant digits, empty fields for missing clicks.
void write_events_csv(std::ostream& out, const std::vector<eventsim::EventRecord>& events,
                      const eventsim::SimConfig& config);

/// Parses the event CSV back into records. The branch is recovered from click
/// order when both clicks are present. Throws std::runtime_error with the line
/// number on malformed rows.
std::vector<eventsim::EventRecord> read_events_csv(std::istream& in);

std::string format_time(double seconds);
std::string format_double(double value);

// ---- states and observables ------------------------------------------------

struct NamedObservable {
  std::string label;
  hilbert::ComplexMatrix matrix;
};

/// Preset name (ket0, ket1, plus, minus, plus_i, minus_i, singlet) or a JSON
/// array of [re, im] amplitudes; the result must have unit norm.
hilbert::StateVector parse_state(const json& spec, std::string* label = nullptr);

/// Preset name (pauli_x, pauli_y, pauli_z, identity, pauli_?@leg1 / @leg2,
/// leg1:θ, leg2:θ) or a JSON matrix of [re, im] entries.
NamedObservable parse_observable(const json& spec, epr::Convention convention);

hilbert::ComplexMatrix matrix_from_json(const json& j);
json matrix_to_json(const hilbert::ComplexMatrix& m);

// Splits "a,b,c" on commas, trimming blanks.
std::vector<std::string> split_list(const std::string& text);

}  // namespace seqmeas::io

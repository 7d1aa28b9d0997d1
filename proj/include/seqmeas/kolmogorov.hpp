#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "seqmeas/correlation_set.hpp"

namespace seqmeas::kolmogorov {

inline constexpr std::size_t kMaxVariables = 10;
inline constexpr double kDefaultTol = 1e-8;
inline constexpr double kTableSumTol = 1e-9;
inline constexpr double kMarginalConsistencyTol = 1e-6;
inline constexpr double kFacetTol = 1e-9;

/// 2x2 joint distribution of two ±1 variables; index 0 is +1, index 1 is -1.
/// table[0][1] = p(x = +1, y = -1).
using Table2x2 = std::array<std::array<double, 2>, 2>;

struct PairTable {
  std::string x;
  std::string y;
  Table2x2 table{};
};

// p(s, t) = (1 + s t E) / 4: the table with unbiased marginals and correlation E.
PairTable unbiased_table(std::string x, std::string y, double correlation);

struct FeasibilityProblem {
  std::vector<std::string> variables;
  std::vector<PairTable> pairwise;
  // name -> {p(+1), p(-1)}
  std::map<std::string, std::array<double, 2>> singleton_marginals;
  // Set when tables were synthesized from bare correlations.
  bool assumed_unbiased_marginals = false;

  std::size_t index_of(const std::string& name) const;
  /// Throws MalformedProblemError for: unknown or repeated names, more than 10
  /// variables, negative entries, tables not summing to 1 within 1e-9, or
  /// implied marginals disagreeing by more than 1e-6.
  void validate() const;
};

/// One deterministic ±1 assignment per atom. Atom k gives variable i the value
/// -1 iff bit (n - 1 - i) of k is set, so atom 0 is all +1 and the first
/// variable is the most significant.
using Atom = std::vector<int>;
std::vector<Atom> build_atoms(std::size_t n_variables);
std::vector<Atom> build_atoms(const FeasibilityProblem& problem);

enum class Status { feasible, infeasible };
const char* to_string(Status status) noexcept;

struct FeasibilityResult {
  Status status = Status::infeasible;
  std::optional<std::vector<double>> witness;  // weights over build_atoms order
  std::optional<double> max_violation;         // phase-1 optimum when infeasible
  double phase_one_residual = 0.0;
  std::size_t iterations = 0;
};

/// Is there one probability measure over the 2^n atoms whose two-variable
/// marginals are the given tables? Decided by phase-1 simplex; feasible iff the
/// minimized total violation is <= tol.
FeasibilityResult solve_feasibility(const FeasibilityProblem& problem, double tol = kDefaultTol);

// Marginal of the witness onto (x, y); used to check a witness against its tables.
Table2x2 marginalize(const FeasibilityProblem& problem, const std::vector<double>& witness,
                     const std::string& x, const std::string& y);

// Largest entrywise deviation between the witness marginals and the input tables.
double witness_error(const FeasibilityProblem& problem, const std::vector<double>& witness);

struct InequalityCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  bool satisfied = true;
};

// paper:    |E(a,b) - E(b,c)| <= 1 - E(a,c)
// textbook: |E(a,b) - E(a,c)| <= 1 + E(b,c)
enum class BellForm { paper, textbook };

struct BellLabels {
  std::string a = "a";
  std::string b = "b";
  std::string c = "c";
};

InequalityCheck evaluate_bell_facet(const CorrelationSet& correlations, BellForm form,
                                    const BellLabels& labels = {});

struct ChshLabels {
  std::string a1 = "A1";
  std::string a2 = "A2";
  std::string b1 = "B1";
  std::string b2 = "B2";
};

struct ChshFacet {
  std::size_t minus_position;  // which of E11, E12, E21, E22 carries the minus sign
  int overall_sign;            // +1 or -1
  double value;
  bool violated;
};

struct ChshReport {
  std::vector<ChshFacet> facets;  // all 8
  double max_value = 0.0;
  bool violated = false;
};

/// The eight CHSH facets s (±E11 ±E12 ±E21 ±E22) <= 2 with exactly one minus
/// inside the bracket and s = ±1.
ChshReport evaluate_chsh_facets(const CorrelationSet& correlations, const ChshLabels& labels = {});

/// CHSH scenario with unbiased marginals: variables A1, A2, B1, B2 and one
/// table per (Ai, Bj) built from the correlations.
FeasibilityProblem chsh_problem(const CorrelationSet& correlations, const ChshLabels& labels = {});

}  // namespace seqmeas::kolmogorov

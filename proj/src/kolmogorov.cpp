#include "seqmeas/kolmogorov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "seqmeas/error.hpp"
#include "seqmeas/simplex.hpp"

namespace seqmeas::kolmogorov {

namespace {

constexpr double kNegativeTol = 1e-12;

std::size_t cell(int value) { return value > 0 ? 0 : 1; }

std::string pair_name(const PairTable& t) { return "(" + t.x + ", " + t.y + ")"; }

}  // namespace

PairTable unbiased_table(std::string x, std::string y, double correlation) {
  if (!std::isfinite(correlation) || std::abs(correlation) > 1.0 + CorrelationSet::kBoundTol) {
    throw MalformedProblemError("correlation for (" + x + ", " + y + ") outside [-1, 1]");
  }
  const double e = std::clamp(correlation, -1.0, 1.0);
  PairTable t{std::move(x), std::move(y), {}};
  t.table[0][0] = (1.0 + e) / 4.0;
  t.table[1][1] = (1.0 + e) / 4.0;
  t.table[0][1] = (1.0 - e) / 4.0;
  t.table[1][0] = (1.0 - e) / 4.0;
  return t;
}

std::size_t FeasibilityProblem::index_of(const std::string& name) const {
  auto it = std::find(variables.begin(), variables.end(), name);
  if (it == variables.end()) throw MalformedProblemError("unknown variable '" + name + "'");
  return static_cast<std::size_t>(it - variables.begin());
}

void FeasibilityProblem::validate() const {
  if (variables.empty()) throw MalformedProblemError("no variables");
  if (variables.size() > kMaxVariables) {
    throw MalformedProblemError("too many variables: " + std::to_string(variables.size()) +
                                " (at most 10)");
  }
  std::set<std::string> seen;
  for (const auto& v : variables) {
    if (!seen.insert(v).second) throw MalformedProblemError("duplicate variable '" + v + "'");
  }

  // Implied P(v = +1) from every source that mentions v.
  std::vector<std::vector<std::pair<std::string, double>>> implied(variables.size());

  for (const auto& t : pairwise) {
    const std::size_t ix = index_of(t.x);
    const std::size_t iy = index_of(t.y);
    if (ix == iy) throw MalformedProblemError("table " + pair_name(t) + " pairs a variable with itself");
    double sum = 0.0;
    for (const auto& row : t.table) {
      for (double p : row) {
        if (!std::isfinite(p) || p < -kNegativeTol) {
          throw MalformedProblemError("table " + pair_name(t) + " has a negative or non-finite entry");
        }
        sum += p;
      }
    }
    if (std::abs(sum - 1.0) > kTableSumTol) {
      throw MalformedProblemError("table " + pair_name(t) + " sums to " + std::to_string(sum) +
                                  ", not 1");
    }
    implied[ix].emplace_back(pair_name(t), t.table[0][0] + t.table[0][1]);
    implied[iy].emplace_back(pair_name(t), t.table[0][0] + t.table[1][0]);
  }
  for (const auto& [name, m] : singleton_marginals) {
    const std::size_t i = index_of(name);
    if (m[0] < -kNegativeTol || m[1] < -kNegativeTol || std::abs(m[0] + m[1] - 1.0) > kTableSumTol) {
      throw MalformedProblemError("marginal of '" + name + "' is not a distribution");
    }
    implied[i].emplace_back("marginal", m[0]);
  }

  for (std::size_t i = 0; i < variables.size(); ++i) {
    const auto& sources = implied[i];
    for (std::size_t k = 1; k < sources.size(); ++k) {
      if (std::abs(sources[k].second - sources[0].second) > kMarginalConsistencyTol) {
        throw MalformedProblemError("inconsistent marginal for '" + variables[i] + "': " +
                                    sources[0].first + " gives P(+1)=" +
                                    std::to_string(sources[0].second) + ", " + sources[k].first +
                                    " gives " + std::to_string(sources[k].second));
      }
    }
  }
}

std::vector<Atom> build_atoms(std::size_t n_variables) {
  if (n_variables > kMaxVariables) {
    throw MalformedProblemError("too many variables: " + std::to_string(n_variables) +
                                " (at most 10)");
  }
  const std::size_t count = std::size_t{1} << n_variables;
  std::vector<Atom> atoms(count, Atom(n_variables, 1));
  for (std::size_t k = 0; k < count; ++k) {
    for (std::size_t i = 0; i < n_variables; ++i) {
      if ((k >> (n_variables - 1 - i)) & 1U) atoms[k][i] = -1;
    }
  }
  return atoms;
}

std::vector<Atom> build_atoms(const FeasibilityProblem& problem) {
  return build_atoms(problem.variables.size());
}

const char* to_string(Status status) noexcept {
  return status == Status::feasible ? "feasible" : "infeasible";
}

FeasibilityResult solve_feasibility(const FeasibilityProblem& problem, double tol) {
  problem.validate();
  const auto atoms = build_atoms(problem);
  const std::size_t n_atoms = atoms.size();
  const std::size_t rows = 1 + 4 * problem.pairwise.size() + 2 * problem.singleton_marginals.size();

  simplex::DenseMatrix a(rows, n_atoms);
  std::vector<double> b(rows, 0.0);
  std::size_t r = 0;
  for (std::size_t k = 0; k < n_atoms; ++k) a(r, k) = 1.0;
  b[r++] = 1.0;

  for (const auto& t : problem.pairwise) {
    const std::size_t ix = problem.index_of(t.x);
    const std::size_t iy = problem.index_of(t.y);
    for (std::size_t s = 0; s < 2; ++s) {
      for (std::size_t u = 0; u < 2; ++u) {
        for (std::size_t k = 0; k < n_atoms; ++k) {
          if (cell(atoms[k][ix]) == s && cell(atoms[k][iy]) == u) a(r, k) = 1.0;
        }
        b[r++] = std::max(0.0, t.table[s][u]);
      }
    }
  }
  for (const auto& [name, m] : problem.singleton_marginals) {
    const std::size_t i = problem.index_of(name);
    for (std::size_t s = 0; s < 2; ++s) {
      for (std::size_t k = 0; k < n_atoms; ++k) {
        if (cell(atoms[k][i]) == s) a(r, k) = 1.0;
      }
      b[r++] = std::max(0.0, m[s]);
    }
  }

  const auto lp = simplex::phase_one(a, b);

  FeasibilityResult result;
  result.phase_one_residual = lp.residual;
  result.iterations = lp.iterations;
  if (lp.residual <= tol) {
    std::vector<double> w = lp.x;
    double sum = 0.0;
    for (double& x : w) {
      x = std::max(0.0, x);
      sum += x;
    }
    for (double& x : w) x /= sum;
    result.status = Status::feasible;
    result.witness = std::move(w);
  } else {
    result.status = Status::infeasible;
    result.max_violation = lp.residual;
  }
  return result;
}

Table2x2 marginalize(const FeasibilityProblem& problem, const std::vector<double>& witness,
                     const std::string& x, const std::string& y) {
  const auto atoms = build_atoms(problem);
  if (witness.size() != atoms.size()) {
    throw DimensionError("marginalize: witness has " + std::to_string(witness.size()) +
                         " weights for " + std::to_string(atoms.size()) + " atoms");
  }
  const std::size_t ix = problem.index_of(x);
  const std::size_t iy = problem.index_of(y);
  Table2x2 out{};
  for (std::size_t k = 0; k < atoms.size(); ++k) out[cell(atoms[k][ix])][cell(atoms[k][iy])] += witness[k];
  return out;
}

double witness_error(const FeasibilityProblem& problem, const std::vector<double>& witness) {
  double worst = 0.0;
  for (const auto& t : problem.pairwise) {
    const auto m = marginalize(problem, witness, t.x, t.y);
    for (std::size_t s = 0; s < 2; ++s) {
      for (std::size_t u = 0; u < 2; ++u) worst = std::max(worst, std::abs(m[s][u] - t.table[s][u]));
    }
  }
  return worst;
}

InequalityCheck evaluate_bell_facet(const CorrelationSet& correlations, BellForm form,
                                    const BellLabels& labels) {
  const double e_ab = correlations.at(labels.a, labels.b);
  const double e_bc = correlations.at(labels.b, labels.c);
  const double e_ac = correlations.at(labels.a, labels.c);
  InequalityCheck check;
  if (form == BellForm::paper) {
    check.lhs = std::abs(e_ab - e_bc);
    check.rhs = 1.0 - e_ac;
  } else {
    check.lhs = std::abs(e_ab - e_ac);
    check.rhs = 1.0 + e_bc;
  }
  check.satisfied = check.lhs <= check.rhs + kFacetTol;
  return check;
}

ChshReport evaluate_chsh_facets(const CorrelationSet& correlations, const ChshLabels& labels) {
  const std::array<double, 4> e{
      correlations.at(labels.a1, labels.b1),
      correlations.at(labels.a1, labels.b2),
      correlations.at(labels.a2, labels.b1),
      correlations.at(labels.a2, labels.b2),
  };
  ChshReport report;
  report.max_value = -std::numeric_limits<double>::infinity();
  for (std::size_t minus = 0; minus < 4; ++minus) {
    double inner = 0.0;
    for (std::size_t i = 0; i < 4; ++i) inner += (i == minus ? -e[i] : e[i]);
    for (int sign : {+1, -1}) {
      const double value = sign * inner;
      const bool violated = value > 2.0 + kFacetTol;
      report.facets.push_back({minus, sign, value, violated});
      report.max_value = std::max(report.max_value, value);
      report.violated = report.violated || violated;
    }
  }
  return report;
}

FeasibilityProblem chsh_problem(const CorrelationSet& correlations, const ChshLabels& labels) {
  FeasibilityProblem p;
  p.variables = {labels.a1, labels.a2, labels.b1, labels.b2};
  for (const auto* x : {&labels.a1, &labels.a2}) {
    for (const auto* y : {&labels.b1, &labels.b2}) {
      p.pairwise.push_back(unbiased_table(*x, *y, correlations.at(*x, *y)));
    }
  }
  p.assumed_unbiased_marginals = true;
  return p;
}

}  // namespace seqmeas::kolmogorov

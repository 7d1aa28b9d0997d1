#include "seqmeas/sequential.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "seqmeas/error.hpp"

namespace seqmeas::sequential {

using hilbert::mat_vec;
using hilbert::Complex;
using hilbert::norm_squared;

namespace {

void require_compatible(const StateVector& psi, const SpectralDecomposition& obs, const char* what) {
  if (obs.size() == 0) throw DimensionError(std::string(what) + ": empty spectral decomposition");
  if (obs.dim() != psi.dim()) {
    throw DimensionError(std::string(what) + ": state has dimension " + std::to_string(psi.dim()) +
                         " but observable acts on dimension " + std::to_string(obs.dim()));
  }
}

void require_index(const SpectralDecomposition& obs, std::size_t index, const char* what) {
  if (index >= obs.size()) {
    throw std::out_of_range(std::string(what) + ": outcome index " + std::to_string(index) +
                            " out of range for " + std::to_string(obs.size()) + " outcomes");
  }
}

}  // namespace

double SequentialJointTable::total() const {
  double sum = 0.0;
  for (const auto& row : q) {
    for (double x : row) sum += x;
  }
  return sum;
}

std::vector<double> SequentialJointTable::row_sums() const {
  std::vector<double> out;
  out.reserve(q.size());
  for (const auto& row : q) {
    double s = 0.0;
    for (double x : row) s += x;
    out.push_back(s);
  }
  return out;
}

std::vector<double> SequentialJointTable::column_sums() const {
  std::vector<double> out(second_outcomes.size(), 0.0);
  for (const auto& row : q) {
    for (std::size_t j = 0; j < row.size(); ++j) out[j] += row[j];
  }
  return out;
}

double clamp_probability(double p) {
  if (p >= 0.0) return p;
  if (p >= -kClampTol) return 0.0;
  throw std::logic_error("probability " + std::to_string(p) + " is negative beyond round-off");
}

double born_probability(const StateVector& psi, const SpectralDecomposition& obs,
                        std::size_t outcome_index) {
  require_compatible(psi, obs, "born_probability");
  require_index(obs, outcome_index, "born_probability");
  const auto projected = mat_vec(obs.projectors[outcome_index], psi.amplitudes());
  return clamp_probability(norm_squared(projected));
}

OutcomeDistribution born_distribution(const StateVector& psi, const SpectralDecomposition& obs) {
  OutcomeDistribution out{obs.eigenvalues, {}};
  out.probabilities.reserve(obs.size());
  for (std::size_t i = 0; i < obs.size(); ++i) out.probabilities.push_back(born_probability(psi, obs, i));
  return out;
}

StateVector luders_collapse(const StateVector& psi, const SpectralDecomposition& obs,
                            std::size_t outcome_index) {
  require_compatible(psi, obs, "luders_collapse");
  require_index(obs, outcome_index, "luders_collapse");
  auto projected = mat_vec(obs.projectors[outcome_index], psi.amplitudes());
  const double p = norm_squared(projected);
  if (!(p > kZeroProbability)) {
    throw ZeroProbabilityError("luders_collapse: outcome " + std::to_string(obs.eigenvalues[outcome_index]) +
                               " has probability " + std::to_string(p) + "; collapse undefined");
  }
  return StateVector::normalized(std::move(projected));
}

double conditional_probability(const StateVector& psi, const SpectralDecomposition& second,
                               std::size_t beta_index, const SpectralDecomposition& first,
                               std::size_t alpha_index) {
  require_compatible(psi, first, "conditional_probability");
  require_compatible(psi, second, "conditional_probability");
  require_index(first, alpha_index, "conditional_probability");
  require_index(second, beta_index, "conditional_probability");

  const auto after_first = mat_vec(first.projectors[alpha_index], psi.amplitudes());
  const double p_first = norm_squared(after_first);
  if (!(p_first > kZeroProbability)) {
    throw ZeroProbabilityError("conditional_probability: conditioning outcome " +
                               std::to_string(first.eigenvalues[alpha_index]) +
                               " has probability " + std::to_string(p_first));
  }
  const auto after_both = mat_vec(second.projectors[beta_index], after_first);
  return clamp_probability(norm_squared(after_both) / p_first);
}

SequentialJointTable sequential_joint(const StateVector& psi, const SpectralDecomposition& first,
                                      const SpectralDecomposition& second,
                                      std::pair<std::string, std::string> labels) {
  require_compatible(psi, first, "sequential_joint");
  require_compatible(psi, second, "sequential_joint");

  SequentialJointTable table{first.eigenvalues, second.eigenvalues, {}, std::move(labels)};
  table.q.assign(first.size(), std::vector<double>(second.size(), 0.0));
  for (std::size_t i = 0; i < first.size(); ++i) {
    const auto after_first = mat_vec(first.projectors[i], psi.amplitudes());
    for (std::size_t j = 0; j < second.size(); ++j) {
      table.q[i][j] = clamp_probability(norm_squared(mat_vec(second.projectors[j], after_first)));
    }
  }
  return table;
}

double order_symmetry_gap(const StateVector& psi, const SpectralDecomposition& a,
                          const SpectralDecomposition& b) {
  const auto ab = sequential_joint(psi, a, b);
  const auto ba = sequential_joint(psi, b, a);
  double gap = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      // ba is indexed [beta][alpha]; both tables come from the same decompositions,
      // so matching eigenvalues share an index.
      gap = std::max(gap, std::abs(ab.q[i][j] - ba.q[j][i]));
    }
  }
  return gap;
}

double covariance(const SequentialJointTable& table) {
  double sum = 0.0;
  for (std::size_t i = 0; i < table.q.size(); ++i) {
    for (std::size_t j = 0; j < table.q[i].size(); ++j) {
      sum += table.first_outcomes[i] * table.second_outcomes[j] * table.q[i][j];
    }
  }
  return sum;
}

}  // namespace seqmeas::sequential

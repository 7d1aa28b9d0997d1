#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "seqmeas/hilbert.hpp"

namespace seqmeas::sequential {

using hilbert::SpectralDecomposition;
using hilbert::StateVector;

// Below this a branch probability is treated as zero: no ensemble to condition on.
inline constexpr double kZeroProbability = 1e-14;
// Probabilities in [-kClampTol, 0) are float noise and clamp to 0.
inline constexpr double kClampTol = 1e-12;

struct OutcomeDistribution {
  std::vector<double> outcomes;
  std::vector<double> probabilities;
};

/// Q(first = first_outcomes[i], then second = second_outcomes[j]) = q[i][j].
struct SequentialJointTable {
  std::vector<double> first_outcomes;
  std::vector<double> second_outcomes;
  std::vector<std::vector<double>> q;
  std::pair<std::string, std::string> order_label{"a", "b"};

  double total() const;
  std::vector<double> row_sums() const;
  std::vector<double> column_sums() const;
};

// Maps tiny negative round-off to 0; throws std::logic_error on anything below -1e-12.
double clamp_probability(double p);

double born_probability(const StateVector& psi, const SpectralDecomposition& obs,
                        std::size_t outcome_index);
OutcomeDistribution born_distribution(const StateVector& psi, const SpectralDecomposition& obs);

/// Post-measurement state P_a psi / |P_a psi|. Throws ZeroProbabilityError
/// when the outcome has probability <= 1e-14.
StateVector luders_collapse(const StateVector& psi, const SpectralDecomposition& obs,
                            std::size_t outcome_index);

/// P(second = beta | first = alpha), i.e. the Born probability of beta in the
/// state left behind by observing alpha first.
double conditional_probability(const StateVector& psi, const SpectralDecomposition& second,
                               std::size_t beta_index, const SpectralDecomposition& first,
                               std::size_t alpha_index);

/// Joint distribution of measuring `first` and then `second` on psi:
/// q[i][j] = |P_j P_i psi|^2.
SequentialJointTable sequential_joint(const StateVector& psi, const SpectralDecomposition& first,
                                      const SpectralDecomposition& second,
                                      std::pair<std::string, std::string> labels = {"a", "b"});

/// max over (alpha, beta) of |Q(a then b) - Q(b then a)|, outcomes matched by eigenvalue.
double order_symmetry_gap(const StateVector& psi, const SpectralDecomposition& a,
                          const SpectralDecomposition& b);

// Σ alpha_i beta_j q[i][j]
double covariance(const SequentialJointTable& table);

}  // namespace seqmeas::sequential

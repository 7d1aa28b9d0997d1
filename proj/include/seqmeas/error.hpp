#pragma once

#include <stdexcept>
#include <string>

namespace seqmeas {

// Shapes of matrices, vectors or projectors do not line up.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NotHermitianError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// The eigensolver or the simplex ran out of its iteration budget.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Collapse or conditioning on an outcome that has (numerically) zero probability.
class ZeroProbabilityError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Two settings that must sit on different tensor legs (or on a given leg) do not.
class LegMismatchError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Feasibility input that is not a well-formed family of distributions.
class MalformedProblemError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace seqmeas

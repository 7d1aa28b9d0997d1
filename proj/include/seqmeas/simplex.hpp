#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace seqmeas::simplex {

/// Dense row-major real matrix, just enough for the tableau.
struct DenseMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  DenseMatrix() = default;
  DenseMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}
  double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

struct PhaseOneResult {
  std::vector<double> x;     // primal point for the structural columns, x >= 0
  double residual = 0.0;     // optimal Σ artificials; 0 iff the system is feasible
  std::size_t iterations = 0;
};

/// Phase-1 simplex for {x >= 0 : A x = b}: one artificial per row, minimize
/// their sum. Dense tableau, Bland's rule for both the entering and leaving
/// choice. Throws ConvergenceError after 10 * (rows + cols) pivots.
PhaseOneResult phase_one(const DenseMatrix& a, std::span<const double> b);

}  // namespace seqmeas::simplex

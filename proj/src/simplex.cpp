#include "seqmeas/simplex.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "seqmeas/error.hpp"

namespace seqmeas::simplex {

namespace {

constexpr double kReducedCostTol = 1e-12;
constexpr double kPivotTol = 1e-11;
constexpr double kRatioTieTol = 1e-12;

}  // namespace

PhaseOneResult phase_one(const DenseMatrix& a, std::span<const double> b) {
  if (b.size() != a.rows) {
    throw DimensionError("phase_one: right-hand side has " + std::to_string(b.size()) +
                         " entries for " + std::to_string(a.rows) + " rows");
  }
  const std::size_t m = a.rows;
  const std::size_t n = a.cols;
  const std::size_t width = n + m;  // structural columns, then artificials

  // Tableau [A | I | b] with every row flipped to a nonnegative right-hand side.
  DenseMatrix t(m, width + 1);
  for (std::size_t i = 0; i < m; ++i) {
    const double sign = b[i] < 0.0 ? -1.0 : 1.0;
    for (std::size_t j = 0; j < n; ++j) t(i, j) = sign * a(i, j);
    t(i, n + i) = 1.0;
    t(i, width) = sign * b[i];
  }
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) basis[i] = n + i;

  // Reduced costs for cost 1 on artificials, 0 elsewhere.
  std::vector<double> reduced(width + 1, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) reduced[j] -= t(i, j);
    reduced[width] -= t(i, width);
  }

  const std::size_t budget = 10 * (m + width);
  PhaseOneResult result;
  for (;;) {
    std::size_t entering = width;
    for (std::size_t j = 0; j < width; ++j) {
      if (reduced[j] < -kReducedCostTol) {
        entering = j;
        break;
      }
    }
    if (entering == width) break;

    std::size_t leaving = m;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m; ++i) {
      const double coef = t(i, entering);
      if (coef <= kPivotTol) continue;
      const double ratio = t(i, width) / coef;
      if (ratio < best_ratio - kRatioTieTol ||
          (std::abs(ratio - best_ratio) <= kRatioTieTol && basis[i] < basis[leaving])) {
        best_ratio = std::min(best_ratio, ratio);
        leaving = i;
      }
    }
    // Phase 1 is bounded below by 0, so some row always qualifies; if round-off
    // says otherwise the column is numerically null and is dropped from pricing.
    if (leaving == m) {
      reduced[entering] = 0.0;
      continue;
    }

    if (++result.iterations > budget) {
      throw ConvergenceError("phase_one: iteration budget of " + std::to_string(budget) +
                             " pivots exhausted");
    }

    const double pivot = t(leaving, entering);
    for (std::size_t j = 0; j <= width; ++j) t(leaving, j) /= pivot;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == leaving) continue;
      const double factor = t(i, entering);
      if (factor == 0.0) continue;
      for (std::size_t j = 0; j <= width; ++j) t(i, j) -= factor * t(leaving, j);
    }
    const double rf = reduced[entering];
    for (std::size_t j = 0; j <= width; ++j) reduced[j] -= rf * t(leaving, j);
    basis[leaving] = entering;
  }

  result.x.assign(n, 0.0);
  double residual = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double value = std::max(0.0, t(i, width));
    if (basis[i] < n) {
      result.x[basis[i]] = value;
    } else {
      residual += value;
    }
  }
  result.residual = residual;
  return result;
}

}  // namespace seqmeas::simplex

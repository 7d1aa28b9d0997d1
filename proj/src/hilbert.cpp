#include "seqmeas/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "seqmeas/error.hpp"

namespace seqmeas::hilbert {

namespace {

constexpr int kMaxSweeps = 100;
constexpr double kOffDiagonalTol = 1e-12;

std::string shape(const ComplexMatrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError(std::string(what) + ": shape mismatch " + shape(a) + " vs " + shape(b));
  }
}

// Real symmetric matrix, row-major, used only by the Jacobi solver.
struct RealSymmetric {
  std::size_t n;
  std::vector<double> a;
  double& operator()(std::size_t r, std::size_t c) { return a[r * n + c]; }
  double operator()(std::size_t r, std::size_t c) const { return a[r * n + c]; }
};

double off_diagonal_mass(const RealSymmetric& m) {
  double sum = 0.0;
  for (std::size_t r = 0; r < m.n; ++r) {
    for (std::size_t c = 0; c < m.n; ++c) {
      if (r != c) sum += m(r, c) * m(r, c);
    }
  }
  return std::sqrt(sum);
}

// Cyclic Jacobi. On return `m` is (numerically) diagonal and the columns of
// `v` are the corresponding orthonormal eigenvectors.
void jacobi_eigen(RealSymmetric& m, RealSymmetric& v) {
  const std::size_t n = m.n;
  v = RealSymmetric{n, std::vector<double>(n * n, 0.0)};
  for (std::size_t i = 0; i < n; ++i) v(i, i) = 1.0;

  double frob = 0.0;
  for (double x : m.a) frob += x * x;
  const double threshold = kOffDiagonalTol * std::max(1.0, std::sqrt(frob));

  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    if (off_diagonal_mass(m) < threshold) return;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = m(p, q);
        if (apq == 0.0) continue;
        const double theta = (m(q, q) - m(p, p)) / (2.0 * apq);
        const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        for (std::size_t k = 0; k < n; ++k) {
          const double mkp = m(k, p);
          const double mkq = m(k, q);
          m(k, p) = c * mkp - s * mkq;
          m(k, q) = s * mkp + c * mkq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double mpk = m(p, k);
          const double mqk = m(q, k);
          m(p, k) = c * mpk - s * mqk;
          m(q, k) = s * mpk + c * mqk;
        }
        m(p, q) = 0.0;
        m(q, p) = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  if (off_diagonal_mass(m) >= threshold) {
    throw ConvergenceError("spectral_decompose: Jacobi did not converge in " +
                           std::to_string(kMaxSweeps) + " sweeps");
  }
}

}  // namespace

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows_ * cols_) {
    throw DimensionError("ComplexMatrix: " + std::to_string(data_.size()) +
                         " entries for a " + std::to_string(rows) + "x" + std::to_string(cols) +
                         " matrix");
  }
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows)
    : rows_(rows.size()), cols_(rows.size() == 0 ? 0 : rows.begin()->size()) {
  data_.reserve(rows_ * cols_);
  for (const auto& row : rows) {
    if (row.size() != cols_) throw DimensionError("ComplexMatrix: ragged initializer");
    data_.insert(data_.end(), row.begin(), row.end());
  }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> values) {
  ComplexMatrix m(values.size(), values.size());
  for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
  return m;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
  require_same_shape(*this, other, "operator+");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
  require_same_shape(*this, other, "operator-");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex scale) {
  for (auto& x : data_) x *= scale;
  return *this;
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
ComplexMatrix operator*(Complex scale, ComplexMatrix a) { return a *= scale; }

StateVector::StateVector(std::vector<Complex> amplitudes) : amps_(std::move(amplitudes)) {
  if (amps_.empty()) throw DimensionError("StateVector: empty amplitude list");
  const double n2 = norm_squared(amps_);
  if (std::abs(n2 - 1.0) > kNormTol) {
    throw std::invalid_argument("StateVector: squared norm " + std::to_string(n2) +
                                " is not 1 within 1e-12");
  }
}

StateVector StateVector::normalized(std::vector<Complex> amplitudes) {
  if (amplitudes.empty()) throw DimensionError("StateVector: empty amplitude list");
  const double n = std::sqrt(norm_squared(amplitudes));
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw std::invalid_argument("StateVector: cannot normalize a zero or non-finite vector");
  }
  for (auto& a : amplitudes) a /= n;
  return StateVector(std::move(amplitudes), Unchecked{});
}

StateVector StateVector::basis(std::size_t dim, std::size_t index) {
  if (index >= dim) throw DimensionError("StateVector::basis: index out of range");
  std::vector<Complex> amps(dim);
  amps[index] = 1.0;
  return StateVector(std::move(amps), Unchecked{});
}

std::size_t SpectralDecomposition::rank(std::size_t index) const {
  const auto& p = projectors.at(index);
  double trace = 0.0;
  for (std::size_t i = 0; i < p.rows(); ++i) trace += p(i, i).real();
  return static_cast<std::size_t>(std::lround(trace));
}

std::size_t SpectralDecomposition::find(double value, double tol) const {
  for (std::size_t i = 0; i < eigenvalues.size(); ++i) {
    if (std::abs(eigenvalues[i] - value) <= tol) return i;
  }
  return eigenvalues.size();
}

ComplexMatrix mat_mul(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) {
    throw DimensionError("mat_mul: cannot multiply " + shape(a) + " by " + shape(b));
  }
  ComplexMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Complex aik = a(i, k);
      if (aik == Complex{}) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  }
  return out;
}

ComplexMatrix adjoint(const ComplexMatrix& a) {
  ComplexMatrix out(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = std::conj(a(i, j));
  }
  return out;
}

ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t ar = 0; ar < a.rows(); ++ar) {
    for (std::size_t ac = 0; ac < a.cols(); ++ac) {
      const Complex s = a(ar, ac);
      for (std::size_t br = 0; br < b.rows(); ++br) {
        for (std::size_t bc = 0; bc < b.cols(); ++bc) {
          out(ar * b.rows() + br, ac * b.cols() + bc) = s * b(br, bc);
        }
      }
    }
  }
  return out;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_shape(a, b, "max_abs_diff");
  double worst = 0.0;
  for (std::size_t i = 0; i < a.entries().size(); ++i) {
    worst = std::max(worst, std::abs(a.entries()[i] - b.entries()[i]));
  }
  return worst;
}

double commutator_norm(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (!a.is_square() || !b.is_square() || a.rows() != b.rows()) {
    throw DimensionError("commutator_norm: need square matrices of equal dimension, got " +
                         shape(a) + " and " + shape(b));
  }
  return max_abs_diff(mat_mul(a, b), mat_mul(b, a));
}

bool is_hermitian(const ComplexMatrix& a, double tol) {
  return a.is_square() && max_abs_diff(a, adjoint(a)) <= tol;
}

std::vector<Complex> mat_vec(const ComplexMatrix& a, std::span<const Complex> v) {
  if (a.cols() != v.size()) {
    throw DimensionError("mat_vec: " + shape(a) + " matrix on a vector of length " +
                         std::to_string(v.size()));
  }
  std::vector<Complex> out(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    Complex acc{};
    for (std::size_t j = 0; j < a.cols(); ++j) acc += a(i, j) * v[j];
    out[i] = acc;
  }
  return out;
}

double norm_squared(std::span<const Complex> v) noexcept {
  return std::accumulate(v.begin(), v.end(), 0.0,
                         [](double acc, const Complex& z) { return acc + std::norm(z); });
}

SpectralDecomposition spectral_decompose(const ComplexMatrix& h, double degeneracy_tol) {
  if (!h.is_square() || h.rows() == 0) {
    throw DimensionError("spectral_decompose: need a non-empty square matrix, got " + shape(h));
  }
  if (h.rows() > kMaxDim) {
    throw DimensionError("spectral_decompose: dimension " + std::to_string(h.rows()) +
                         " exceeds the supported maximum of 16");
  }
  if (!is_hermitian(h)) {
    throw NotHermitianError("spectral_decompose: matrix is not Hermitian within 1e-10");
  }

  // H = A + iB  ->  [[A, -B], [B, A]]; every complex eigenpair shows up twice.
  const std::size_t n = h.rows();
  const std::size_t n2 = 2 * n;
  RealSymmetric m{n2, std::vector<double>(n2 * n2, 0.0)};
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      // Symmetrize to absorb the (<= 1e-10) anti-Hermitian residue.
      const Complex z = 0.5 * (h(r, c) + std::conj(h(c, r)));
      m(r, c) = z.real();
      m(r + n, c + n) = z.real();
      m(r + n, c) = z.imag();
      m(r, c + n) = -z.imag();
    }
  }
  RealSymmetric v{n2, {}};
  jacobi_eigen(m, v);

  std::vector<std::size_t> order(n2);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return m(x, x) < m(y, y); });

  SpectralDecomposition out;
  std::size_t start = 0;
  while (start < n2) {
    std::size_t end = start + 1;
    while (end < n2 && m(order[end], order[end]) - m(order[end - 1], order[end - 1]) < degeneracy_tol) {
      ++end;
    }
    const std::size_t group = end - start;
    if (group % 2 != 0) {
      throw ConvergenceError("spectral_decompose: eigenvalue cluster of odd size " +
                             std::to_string(group) + " in the real embedding");
    }
    double mean = 0.0;
    for (std::size_t k = start; k < end; ++k) mean += m(order[k], order[k]);
    mean /= static_cast<double>(group);

    // Real projector R onto the cluster; P = R[top-left] + i R[bottom-left].
    ComplexMatrix proj(n, n);
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < n; ++c) {
        double re = 0.0;
        double im = 0.0;
        for (std::size_t k = start; k < end; ++k) {
          const std::size_t col = order[k];
          re += v(r, col) * v(c, col);
          im += v(r + n, col) * v(c, col);
        }
        proj(r, c) = Complex(re, im);
      }
    }
    out.eigenvalues.push_back(mean);
    out.projectors.push_back(std::move(proj));
    start = end;
  }
  return out;
}

ComplexMatrix reconstruct(const SpectralDecomposition& sd) {
  ComplexMatrix out(sd.dim(), sd.dim());
  for (std::size_t i = 0; i < sd.size(); ++i) out += Complex(sd.eigenvalues[i]) * sd.projectors[i];
  return out;
}

ComplexMatrix pauli_x() { return {{0.0, 1.0}, {1.0, 0.0}}; }
ComplexMatrix pauli_y() { return {{0.0, Complex(0.0, -1.0)}, {Complex(0.0, 1.0), 0.0}}; }
ComplexMatrix pauli_z() { return {{1.0, 0.0}, {0.0, -1.0}}; }

}  // namespace seqmeas::hilbert

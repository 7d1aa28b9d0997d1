#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace seqmeas::hilbert {

using Complex = std::complex<double>;

inline constexpr std::size_t kMaxDim = 16;
inline constexpr double kDefaultDegeneracyTol = 1e-8;
inline constexpr double kHermitianTol = 1e-10;

/// Dense row-major complex matrix.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols);
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);
  ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix diagonal(std::span<const double> values);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }

  Complex& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<const Complex> entries() const noexcept { return data_; }

  ComplexMatrix& operator+=(const ComplexMatrix& other);
  ComplexMatrix& operator-=(const ComplexMatrix& other);
  ComplexMatrix& operator*=(Complex scale);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator*(Complex scale, ComplexMatrix a);

/// Unit-norm state vector. Construction rejects vectors whose squared norm
/// is off by more than 1e-12; use `normalized` to rescale arbitrary input.
class StateVector {
 public:
  static constexpr double kNormTol = 1e-12;

  explicit StateVector(std::vector<Complex> amplitudes);
  static StateVector normalized(std::vector<Complex> amplitudes);
  static StateVector basis(std::size_t dim, std::size_t index);

  std::size_t dim() const noexcept { return amps_.size(); }
  std::span<const Complex> amplitudes() const noexcept { return amps_; }
  const Complex& operator[](std::size_t i) const { return amps_[i]; }

 private:
  struct Unchecked {};
  StateVector(std::vector<Complex> amplitudes, Unchecked) : amps_(std::move(amplitudes)) {}

  std::vector<Complex> amps_;
};

/// Distinct eigenvalues in increasing order, one orthogonal projector each.
struct SpectralDecomposition {
  std::vector<double> eigenvalues;
  std::vector<ComplexMatrix> projectors;

  std::size_t dim() const noexcept { return projectors.empty() ? 0 : projectors.front().rows(); }
  std::size_t size() const noexcept { return eigenvalues.size(); }
  std::size_t rank(std::size_t index) const;
  // Index of the outcome whose eigenvalue is within `tol` of `value`, or size() if none.
  std::size_t find(double value, double tol = kDefaultDegeneracyTol) const;
};

ComplexMatrix mat_mul(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix adjoint(const ComplexMatrix& a);
ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b);

// Max entry modulus of ab - ba.
double commutator_norm(const ComplexMatrix& a, const ComplexMatrix& b);

// Max entry modulus of a - b; shapes must agree.
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);
bool is_hermitian(const ComplexMatrix& a, double tol = kHermitianTol);

std::vector<Complex> mat_vec(const ComplexMatrix& a, std::span<const Complex> v);
double norm_squared(std::span<const Complex> v) noexcept;

/// Eigen-decomposition of a Hermitian matrix (dim <= 16) by cyclic Jacobi
/// rotations on its real symmetric 2n x 2n embedding. Eigenvalues closer than
/// `degeneracy_tol` are merged into one outcome with a summed projector.
SpectralDecomposition spectral_decompose(const ComplexMatrix& h,
                                         double degeneracy_tol = kDefaultDegeneracyTol);

// Σ eigenvalue_i · P_i
ComplexMatrix reconstruct(const SpectralDecomposition& sd);

ComplexMatrix pauli_x();
ComplexMatrix pauli_y();
ComplexMatrix pauli_z();

}  // namespace seqmeas::hilbert

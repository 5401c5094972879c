#pragma once

// Dense complex matrices for the small operators that appear in two-party
// games: projectors, Bell operators, steered states. Dimensions stay below
// 81x81, so everything is plain row-major storage and O(n^3) algorithms.

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace nonlocal {

using Complex = std::complex<double>;
using CVector = std::vector<Complex>;

class CMatrix {
 public:
  CMatrix() = default;
  CMatrix(std::size_t rows, std::size_t cols);
  CMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);
  CMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

  static CMatrix identity(std::size_t n);
  static CMatrix zeros(std::size_t rows, std::size_t cols) { return {rows, cols}; }
  static CMatrix diagonal(std::span<const double> values);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }
  std::span<const Complex> entries() const noexcept { return data_; }

  Complex& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Complex& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  CMatrix adjoint() const;
  Complex trace() const;
  double frobenius_norm() const;
  // max |M_ij - conj(M_ji)|; infinity for non-square input.
  double hermiticity_defect() const;
  // Defect within 1e-12 * max(1, ||M||_F).
  bool is_hermitian() const;

  CMatrix& operator+=(const CMatrix& other);
  CMatrix& operator-=(const CMatrix& other);
  CMatrix& operator*=(Complex scale);

  friend CMatrix operator+(CMatrix a, const CMatrix& b) { return a += b; }
  friend CMatrix operator-(CMatrix a, const CMatrix& b) { return a -= b; }
  friend CMatrix operator*(CMatrix a, Complex s) { return a *= s; }
  friend CMatrix operator*(Complex s, CMatrix a) { return a *= s; }
  friend CMatrix operator*(const CMatrix& a, const CMatrix& b);
  friend CVector operator*(const CMatrix& a, std::span<const Complex> v);

  bool operator==(const CMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

/// Eigen-decomposition of a Hermitian matrix. Eigenvalues ascend; column k
/// of `vectors` is the unit eigenvector paired with `values[k]`.
struct EigenSystem {
  std::vector<double> values;
  CMatrix vectors;

  std::size_t size() const noexcept { return values.size(); }
  double max_value() const { return values.back(); }
  CVector vector(std::size_t k) const;

  /// Orthonormal basis of the eigenspace of the largest eigenvalue.
  /// Eigenvalues within `rel_tol * max(1, |lambda_max|)` of the top count
  /// as one eigenspace.
  std::vector<CVector> top_eigenspace(double rel_tol = 1e-8) const;
};

CMatrix kron(const CMatrix& a, const CMatrix& b);
CVector kron(std::span<const Complex> a, std::span<const Complex> b);

// |u><v|
CMatrix outer(std::span<const Complex> u, std::span<const Complex> v);
// <u|v>, conjugate-linear in u.
Complex inner(std::span<const Complex> u, std::span<const Complex> v);
double norm(std::span<const Complex> v);
CVector normalized(std::span<const Complex> v);
// Re <v|M|v>
double expectation(const CMatrix& m, std::span<const Complex> v);
// Re tr(a b), the Hilbert-Schmidt pairing for Hermitian a, b.
double trace_product(const CMatrix& a, const CMatrix& b);

/// Multiplies `v` by a unit phase so that its first component of maximal
/// modulus (within 1e-9) is real and positive. Gives reproducible output for
/// eigenvectors that are only defined up to phase.
CVector canonical_phase(std::span<const Complex> v);

/// Cyclic complex Jacobi eigensolver. Throws NotSquare / NotHermitian.
EigenSystem eig_hermitian(const CMatrix& h);

/// tr_A of an operator on C^{d_first} (x) C^{d_second}. Throws DimensionMismatch.
CMatrix partial_trace_first(const CMatrix& m, std::size_t d_first, std::size_t d_second);
/// tr_B of an operator on C^{d_first} (x) C^{d_second}. Throws DimensionMismatch.
CMatrix partial_trace_second(const CMatrix& m, std::size_t d_first, std::size_t d_second);

}  // namespace nonlocal

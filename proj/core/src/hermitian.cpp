#include "nonlocal/hermitian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "nonlocal/errors.hpp"

namespace nonlocal {

namespace {

constexpr double kHermitianTol = 1e-12;
constexpr double kJacobiTol = 1e-14;
constexpr int kMaxSweeps = 100;

std::string shape(const CMatrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

}  // namespace

CMatrix::CMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {}

CMatrix::CMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows_ * cols_) {
    throw Error(ErrorCode::DimensionMismatch,
                "entry count " + std::to_string(data_.size()) + " does not match " +
                    std::to_string(rows_) + "x" + std::to_string(cols_));
  }
}

CMatrix::CMatrix(std::initializer_list<std::initializer_list<Complex>> rows)
    : rows_(rows.size()), cols_(rows.size() ? rows.begin()->size() : 0) {
  data_.reserve(rows_ * cols_);
  for (const auto& row : rows) {
    if (row.size() != cols_) {
      throw Error(ErrorCode::DimensionMismatch, "ragged matrix literal");
    }
    data_.insert(data_.end(), row.begin(), row.end());
  }
}

CMatrix CMatrix::identity(std::size_t n) {
  CMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

CMatrix CMatrix::diagonal(std::span<const double> values) {
  CMatrix m(values.size(), values.size());
  for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
  return m;
}

CMatrix CMatrix::adjoint() const {
  CMatrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = std::conj((*this)(i, j));
  return out;
}

Complex CMatrix::trace() const {
  Complex t = 0.0;
  for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
  return t;
}

double CMatrix::frobenius_norm() const {
  double s = 0.0;
  for (const auto& z : data_) s += std::norm(z);
  return std::sqrt(s);
}

double CMatrix::hermiticity_defect() const {
  if (!is_square()) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = i; j < cols_; ++j)
      worst = std::max(worst, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
  return worst;
}

bool CMatrix::is_hermitian() const {
  return hermiticity_defect() <= kHermitianTol * std::max(1.0, frobenius_norm());
}

CMatrix& CMatrix::operator+=(const CMatrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_) {
    throw Error(ErrorCode::DimensionMismatch, "cannot add " + shape(*this) + " and " + shape(other));
  }
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
  return *this;
}

CMatrix& CMatrix::operator-=(const CMatrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_) {
    throw Error(ErrorCode::DimensionMismatch,
                "cannot subtract " + shape(other) + " from " + shape(*this));
  }
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= other.data_[k];
  return *this;
}

CMatrix& CMatrix::operator*=(Complex scale) {
  for (auto& z : data_) z *= scale;
  return *this;
}

CMatrix operator*(const CMatrix& a, const CMatrix& b) {
  if (a.cols_ != b.rows_) {
    throw Error(ErrorCode::DimensionMismatch, "cannot multiply " + shape(a) + " by " + shape(b));
  }
  CMatrix out(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const Complex aik = a(i, k);
      if (aik == Complex{}) continue;
      for (std::size_t j = 0; j < b.cols_; ++j) out(i, j) += aik * b(k, j);
    }
  return out;
}

CVector operator*(const CMatrix& a, std::span<const Complex> v) {
  if (a.cols_ != v.size()) {
    throw Error(ErrorCode::DimensionMismatch,
                "cannot apply " + shape(a) + " to a vector of length " + std::to_string(v.size()));
  }
  CVector out(a.rows_);
  for (std::size_t i = 0; i < a.rows_; ++i) {
    Complex s = 0.0;
    for (std::size_t j = 0; j < a.cols_; ++j) s += a(i, j) * v[j];
    out[i] = s;
  }
  return out;
}

CVector EigenSystem::vector(std::size_t k) const {
  CVector v(vectors.rows());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = vectors(i, k);
  return v;
}

std::vector<CVector> EigenSystem::top_eigenspace(double rel_tol) const {
  std::vector<CVector> basis;
  if (values.empty()) return basis;
  const double top = values.back();
  const double tol = rel_tol * std::max(1.0, std::abs(top));
  for (std::size_t k = values.size(); k-- > 0;) {
    if (top - values[k] > tol) break;
    basis.push_back(vector(k));
  }
  return basis;
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const Complex aij = a(i, j);
      if (aij == Complex{}) continue;
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l)
          out(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
    }
  return out;
}

CVector kron(std::span<const Complex> a, std::span<const Complex> b) {
  CVector out;
  out.reserve(a.size() * b.size());
  for (const auto& x : a)
    for (const auto& y : b) out.push_back(x * y);
  return out;
}

CMatrix outer(std::span<const Complex> u, std::span<const Complex> v) {
  CMatrix out(u.size(), v.size());
  for (std::size_t i = 0; i < u.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) out(i, j) = u[i] * std::conj(v[j]);
  return out;
}

Complex inner(std::span<const Complex> u, std::span<const Complex> v) {
  if (u.size() != v.size()) {
    throw Error(ErrorCode::DimensionMismatch, "inner product of vectors with different lengths");
  }
  Complex s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += std::conj(u[i]) * v[i];
  return s;
}

double norm(std::span<const Complex> v) {
  double s = 0.0;
  for (const auto& z : v) s += std::norm(z);
  return std::sqrt(s);
}

CVector normalized(std::span<const Complex> v) {
  const double n = norm(v);
  if (n == 0.0) throw Error(ErrorCode::NumericFailure, "cannot normalize the zero vector");
  CVector out(v.begin(), v.end());
  for (auto& z : out) z /= n;
  return out;
}

double expectation(const CMatrix& m, std::span<const Complex> v) {
  return inner(v, m * v).real();
}

double trace_product(const CMatrix& a, const CMatrix& b) {
  if (a.cols() != b.rows() || a.rows() != b.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "trace of " + shape(a) + " times " + shape(b));
  }
  Complex s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) s += a(i, k) * b(k, i);
  return s.real();
}

CVector canonical_phase(std::span<const Complex> v) {
  CVector out(v.begin(), v.end());
  double biggest = 0.0;
  for (const auto& z : v) biggest = std::max(biggest, std::abs(z));
  if (biggest == 0.0) return out;
  for (const auto& z : v) {
    if (std::abs(z) >= biggest - 1e-9) {
      const Complex phase = std::conj(z) / std::abs(z);
      for (auto& w : out) w *= phase;
      break;
    }
  }
  return out;
}

EigenSystem eig_hermitian(const CMatrix& h) {
  if (!h.is_square()) throw Error(ErrorCode::NotSquare, "matrix is " + shape(h));
  if (!h.is_hermitian()) {
    throw Error(ErrorCode::NotHermitian,
                "hermiticity defect " + std::to_string(h.hermiticity_defect()));
  }
  const std::size_t n = h.rows();
  CMatrix a = h;
  CMatrix v = CMatrix::identity(n);
  const double scale = h.frobenius_norm();

  auto off_diagonal = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) s += std::norm(a(i, j));
    return std::sqrt(s);
  };

  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    if (off_diagonal() <= kJacobiTol * scale) break;
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Complex apq = a(p, q);
        const double r = std::abs(apq);
        if (r == 0.0) continue;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        // Rotation would not change the diagonal at working precision.
        if (r <= std::numeric_limits<double>::epsilon() * 1e-3 * (std::abs(app) + std::abs(aqq))) {
          a(p, q) = a(q, p) = 0.0;
          continue;
        }
        rotated = true;
        // U = diag(1, e^{-i phi}) * real rotation; makes the (p,q) entry real first.
        const Complex phase = std::conj(apq) / r;  // e^{-i phi}
        const double tau = (aqq - app) / (2.0 * r);
        const double t = (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const Complex upp = c, upq = s, uqp = -s * phase, uqq = c * phase;

        for (std::size_t k = 0; k < n; ++k) {
          const Complex akp = a(k, p), akq = a(k, q);
          a(k, p) = akp * upp + akq * uqp;
          a(k, q) = akp * upq + akq * uqq;
          const Complex vkp = v(k, p), vkq = v(k, q);
          v(k, p) = vkp * upp + vkq * uqp;
          v(k, q) = vkp * upq + vkq * uqq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const Complex apk = a(p, k), aqk = a(q, k);
          a(p, k) = std::conj(upp) * apk + std::conj(uqp) * aqk;
          a(q, k) = std::conj(upq) * apk + std::conj(uqq) * aqk;
        }
        a(p, q) = a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
      }
    }
    if (!rotated) break;
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });

  EigenSystem out;
  out.values.resize(n);
  out.vectors = CMatrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]).real();
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
  }
  return out;
}

CMatrix partial_trace_first(const CMatrix& m, std::size_t d_first, std::size_t d_second) {
  const std::size_t d = d_first * d_second;
  if (m.rows() != d || m.cols() != d) {
    throw Error(ErrorCode::DimensionMismatch, "partial trace of " + shape(m) + " over " +
                                                  std::to_string(d_first) + "x" +
                                                  std::to_string(d_second));
  }
  CMatrix out(d_second, d_second);
  for (std::size_t i = 0; i < d_first; ++i)
    for (std::size_t j = 0; j < d_second; ++j)
      for (std::size_t l = 0; l < d_second; ++l) out(j, l) += m(i * d_second + j, i * d_second + l);
  return out;
}

CMatrix partial_trace_second(const CMatrix& m, std::size_t d_first, std::size_t d_second) {
  const std::size_t d = d_first * d_second;
  if (m.rows() != d || m.cols() != d) {
    throw Error(ErrorCode::DimensionMismatch, "partial trace of " + shape(m) + " over " +
                                                  std::to_string(d_first) + "x" +
                                                  std::to_string(d_second));
  }
  CMatrix out(d_first, d_first);
  for (std::size_t i = 0; i < d_first; ++i)
    for (std::size_t k = 0; k < d_first; ++k)
      for (std::size_t j = 0; j < d_second; ++j) out(i, k) += m(i * d_second + j, k * d_second + j);
  return out;
}

}  // namespace nonlocal

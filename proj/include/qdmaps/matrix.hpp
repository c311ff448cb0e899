#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "qdmaps/errors.hpp"

namespace qdmaps {

using Complex = std::complex<double>;

/// Dense complex matrix sized for single-qubit open-system work. Dimensions
/// are restricted to {1, 2, 4} so one inline-storage value type covers states
/// (2x2), vectorized states (4x1), transfer matrices and Choi matrices (4x4).
class ComplexMatrix {
 public:
  ComplexMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {
    check_dim(rows);
    check_dim(cols);
  }

  static ComplexMatrix identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  /// Row-major construction from nested braces.
  static ComplexMatrix from_rows(std::initializer_list<std::initializer_list<Complex>> rows) {
    const std::size_t nr = rows.size();
    const std::size_t nc = nr == 0 ? 0 : rows.begin()->size();
    ComplexMatrix m(nr, nc);
    std::size_t r = 0;
    for (const auto& row : rows) {
      if (row.size() != nc) throw ShapeError("from_rows: ragged row lengths");
      std::size_t c = 0;
      for (const Complex& v : row) m(r, c++) = v;
      ++r;
    }
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Complex& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  ComplexMatrix dagger() const {
    ComplexMatrix out(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) out(c, r) = std::conj((*this)(r, c));
    return out;
  }

  Complex trace() const {
    if (rows_ != cols_) throw ShapeError("trace: matrix is not square");
    Complex t = 0.0;
    for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
    return t;
  }

  double frobenius_norm() const {
    double s = 0.0;
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) s += std::norm((*this)(r, c));
    return std::sqrt(s);
  }

  bool all_finite() const {
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) {
        const Complex v = (*this)(r, c);
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
      }
    return true;
  }

 private:
  static void check_dim(std::size_t d) {
    if (d != 1 && d != 2 && d != 4)
      throw ShapeError("unsupported dimension " + std::to_string(d) + " (expected 1, 2 or 4)");
  }

  std::size_t rows_;
  std::size_t cols_;
  std::array<Complex, 16> data_{};
};

inline ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) throw ShapeError("matmul: inner dimensions do not match");
  ComplexMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Complex aik = a(i, k);
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  return out;
}

inline ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  return matmul(a, b);
}

inline ComplexMatrix operator*(Complex s, const ComplexMatrix& m) {
  ComplexMatrix out = m;
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) out(r, c) *= s;
  return out;
}

inline ComplexMatrix operator*(double s, const ComplexMatrix& m) { return Complex(s) * m; }

inline ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw ShapeError("operator+: shape mismatch");
  ComplexMatrix out = a;
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) out(r, c) += b(r, c);
  return out;
}

inline ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw ShapeError("operator-: shape mismatch");
  ComplexMatrix out = a;
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) out(r, c) -= b(r, c);
  return out;
}

inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw ShapeError("max_abs_diff: shape mismatch");
  double m = 0.0;
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) m = std::max(m, std::abs(a(r, c) - b(r, c)));
  return m;
}

inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t ar = 0; ar < a.rows(); ++ar)
    for (std::size_t ac = 0; ac < a.cols(); ++ac)
      for (std::size_t br = 0; br < b.rows(); ++br)
        for (std::size_t bc = 0; bc < b.cols(); ++bc)
          out(ar * b.rows() + br, ac * b.cols() + bc) = a(ar, ac) * b(br, bc);
  return out;
}

/// Row-major stacking of a 2x2 operator into a column vector
/// (m00, m01, m10, m11)^T, the ordering the transfer matrices act on.
inline ComplexMatrix vectorize(const ComplexMatrix& m) {
  if (m.rows() != 2 || m.cols() != 2) throw ShapeError("vectorize: expected a 2x2 matrix");
  ComplexMatrix v(4, 1);
  v(0, 0) = m(0, 0);
  v(1, 0) = m(0, 1);
  v(2, 0) = m(1, 0);
  v(3, 0) = m(1, 1);
  return v;
}

inline ComplexMatrix unvectorize(const ComplexMatrix& v) {
  if (v.rows() != 4 || v.cols() != 1) throw ShapeError("unvectorize: expected a 4x1 vector");
  ComplexMatrix m(2, 2);
  m(0, 0) = v(0, 0);
  m(0, 1) = v(1, 0);
  m(1, 0) = v(2, 0);
  m(1, 1) = v(3, 0);
  return m;
}

struct HermitianEigenResult {
  std::vector<double> eigenvalues;  // descending
  ComplexMatrix eigenvectors;       // orthonormal columns, same ordering
};

/// Full eigendecomposition of a Hermitian matrix by cyclic complex Jacobi
/// rotations. The input must be Hermitian within 1e-10 (relative to its
/// Frobenius norm); it is symmetrized before iterating, so the decomposed
/// matrix is exactly (m + m^dagger)/2.
inline HermitianEigenResult hermitian_eig(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) throw ShapeError("hermitian_eig: matrix is not square");
  if (!m.all_finite()) throw DomainError("hermitian_eig: non-finite entries");

  const std::size_t n = m.rows();
  const double scale = std::max(1.0, m.frobenius_norm());
  {
    const double asym = max_abs_diff(m, m.dagger());
    if (asym > 1e-10 * scale)
      throw DomainError("hermitian_eig: matrix is not Hermitian (asymmetry " +
                        std::to_string(asym) + ")");
  }

  ComplexMatrix a = 0.5 * (m + m.dagger());
  ComplexMatrix v = ComplexMatrix::identity(n);

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += std::norm(a(p, q));
    if (std::sqrt(2.0 * off) <= 1e-14 * scale) break;

    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Complex apq = a(p, q);
        const double r = std::abs(apq);
        if (r <= 1e-18 * scale) continue;
        const Complex phase = apq / r;

        // Rotation angle annihilating the (p, q) element: tan(2 theta) is
        // 2|a_pq| / (a_qq - a_pp); the smaller-magnitude tangent root is the
        // numerically stable choice.
        const double tau = (a(q, q).real() - a(p, p).real()) / (2.0 * r);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;

        // Columns: a <- a * J with J(p,p)=c, J(p,q)=s*phase,
        // J(q,p)=-s*conj(phase), J(q,q)=c.
        for (std::size_t i = 0; i < n; ++i) {
          const Complex aip = a(i, p);
          const Complex aiq = a(i, q);
          a(i, p) = c * aip - s * std::conj(phase) * aiq;
          a(i, q) = s * phase * aip + c * aiq;
        }
        // Rows: a <- J^dagger * a.
        for (std::size_t j = 0; j < n; ++j) {
          const Complex apj = a(p, j);
          const Complex aqj = a(q, j);
          a(p, j) = c * apj - s * phase * aqj;
          a(q, j) = s * std::conj(phase) * apj + c * aqj;
        }
        for (std::size_t i = 0; i < n; ++i) {
          const Complex vip = v(i, p);
          const Complex viq = v(i, q);
          v(i, p) = c * vip - s * std::conj(phase) * viq;
          v(i, q) = s * phase * vip + c * viq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::vector<double> diag(n);
  for (std::size_t i = 0; i < n; ++i) diag[i] = a(i, i).real();
  for (std::size_t i = 0; i + 1 < n; ++i)  // small n, selection sort is fine
    for (std::size_t j = i + 1; j < n; ++j)
      if (diag[order[j]] > diag[order[i]]) std::swap(order[i], order[j]);

  HermitianEigenResult res{std::vector<double>(n), ComplexMatrix(n, n)};
  for (std::size_t k = 0; k < n; ++k) {
    res.eigenvalues[k] = diag[order[k]];
    for (std::size_t i = 0; i < n; ++i) res.eigenvectors(i, k) = v(i, order[k]);
  }
  return res;
}

/// Singular values (descending), from the spectrum of m^dagger m.
inline std::vector<double> singular_values(const ComplexMatrix& m) {
  const ComplexMatrix h = m.dagger() * m;
  HermitianEigenResult eig = hermitian_eig(h);
  std::vector<double> sv(eig.eigenvalues.size());
  for (std::size_t i = 0; i < sv.size(); ++i) sv[i] = std::sqrt(std::max(0.0, eig.eigenvalues[i]));
  return sv;
}

/// Matrix inverse by Gauss-Jordan elimination with partial pivoting. Refuses
/// matrices whose condition number (ratio of extreme singular values) exceeds
/// `condition_bound`; the thrown error carries the smallest singular value.
inline ComplexMatrix inverse(const ComplexMatrix& m, double condition_bound = 1e12) {
  if (m.rows() != m.cols()) throw ShapeError("inverse: matrix is not square");
  if (!m.all_finite()) throw DomainError("inverse: non-finite entries");

  const std::vector<double> sv = singular_values(m);
  const double sv_min = sv.back();
  const double sv_max = sv.front();
  if (sv_min <= 0.0 || sv_max / sv_min > condition_bound)
    throw SingularMatrixError("inverse: matrix is singular or ill-conditioned (smallest "
                              "singular value " + std::to_string(sv_min) + ")",
                              sv_min);

  const std::size_t n = m.rows();
  ComplexMatrix a = m;
  ComplexMatrix inv = ComplexMatrix::identity(n);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a(r, col)) > std::abs(a(pivot, col))) pivot = r;
    if (pivot != col) {
      for (std::size_t c = 0; c < n; ++c) {
        std::swap(a(col, c), a(pivot, c));
        std::swap(inv(col, c), inv(pivot, c));
      }
    }
    const Complex d = a(col, col);
    for (std::size_t c = 0; c < n; ++c) {
      a(col, c) /= d;
      inv(col, c) /= d;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const Complex f = a(r, col);
      if (f == 0.0) continue;
      for (std::size_t c = 0; c < n; ++c) {
        a(r, c) -= f * a(col, c);
        inv(r, c) -= f * inv(col, c);
      }
    }
  }
  return inv;
}

/// Trace norm (sum of absolute eigenvalues) of a Hermitian matrix.
inline double trace_norm(const ComplexMatrix& m) {
  HermitianEigenResult eig = hermitian_eig(m);
  double s = 0.0;
  for (double l : eig.eigenvalues) s += std::abs(l);
  return s;
}

/// Partial trace over the first tensor factor of a 4x4 operator on C^2 x C^2.
inline ComplexMatrix partial_trace_first(const ComplexMatrix& m) {
  if (m.rows() != 4 || m.cols() != 4) throw ShapeError("partial_trace_first: expected 4x4");
  ComplexMatrix out(2, 2);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      out(i, j) = m(0 * 2 + i, 0 * 2 + j) + m(1 * 2 + i, 1 * 2 + j);
  return out;
}

}  // namespace qdmaps

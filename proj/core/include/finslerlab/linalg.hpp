#pragma once

// Small dense matrices over an arbitrary scalar (double or nested jets).
// Dimensions here are tiny (n <= 4), so everything is O(n^3) by hand.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "finslerlab/errors.hpp"
#include "finslerlab/jet.hpp"

namespace finslerlab {

template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows * cols), T(0.0)) {}

  static Matrix identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = T(1.0);
    return m;
  }

  int rows() const noexcept { return rows_; }
  int cols() const noexcept { return cols_; }

  T& operator()(int i, int j) { return data_[static_cast<std::size_t>(i * cols_ + j)]; }
  const T& operator()(int i, int j) const { return data_[static_cast<std::size_t>(i * cols_ + j)]; }

  std::span<const T> data() const noexcept { return data_; }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<T> data_;
};

/// Rank-3 array indexed (i, j, k), all extents n.
template <class T>
class Tensor3 {
 public:
  Tensor3() = default;
  explicit Tensor3(int n) : n_(n), data_(static_cast<std::size_t>(n * n * n), T(0.0)) {}

  int extent() const noexcept { return n_; }
  T& operator()(int i, int j, int k) { return data_[static_cast<std::size_t>((i * n_ + j) * n_ + k)]; }
  const T& operator()(int i, int j, int k) const {
    return data_[static_cast<std::size_t>((i * n_ + j) * n_ + k)];
  }

 private:
  int n_ = 0;
  std::vector<T> data_;
};

namespace detail {

// Gaussian elimination with partial pivoting on the primal value. Returns the
// determinant and, if `rhs` is non-null, overwrites it with m^{-1} * rhs.
template <class T>
T eliminate(Matrix<T> m, Matrix<T>* rhs) {
  const int n = m.rows();
  T det(1.0);
  double scale = 0.0;
  for (const auto& e : m.data()) scale = std::max(scale, std::abs(primal(e)));
  if (scale == 0.0) throw SingularMatrix("matrix is zero");

  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int r = col + 1; r < n; ++r) {
      if (std::abs(primal(m(r, col))) > std::abs(primal(m(pivot, col)))) pivot = r;
    }
    if (std::abs(primal(m(pivot, col))) <= 1e-14 * scale) {
      throw SingularMatrix("matrix is singular to working precision");
    }
    if (pivot != col) {
      for (int c = 0; c < n; ++c) std::swap(m(pivot, c), m(col, c));
      if (rhs) {
        for (int c = 0; c < rhs->cols(); ++c) std::swap((*rhs)(pivot, c), (*rhs)(col, c));
      }
      det = -det;
    }
    const T p = m(col, col);
    det = det * p;
    const T inv = 1.0 / p;
    for (int c = col; c < n; ++c) m(col, c) = m(col, c) * inv;
    if (rhs) {
      for (int c = 0; c < rhs->cols(); ++c) (*rhs)(col, c) = (*rhs)(col, c) * inv;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      const T factor = m(r, col);
      for (int c = col; c < n; ++c) m(r, c) -= factor * m(col, c);
      if (rhs) {
        for (int c = 0; c < rhs->cols(); ++c) (*rhs)(r, c) -= factor * (*rhs)(col, c);
      }
    }
  }
  return det;
}

}  // namespace detail

template <class T>
T determinant(const Matrix<T>& m) {
  return detail::eliminate<T>(m, nullptr);
}

template <class T>
Matrix<T> inverse(const Matrix<T>& m) {
  Matrix<T> out = Matrix<T>::identity(m.rows());
  detail::eliminate<T>(m, &out);
  return out;
}

/// Cholesky succeeds (all pivots strictly positive).
inline bool is_positive_definite(const Matrix<double>& m) {
  const int n = m.rows();
  std::vector<double> l(static_cast<std::size_t>(n * n), 0.0);
  for (int j = 0; j < n; ++j) {
    double diag = m(j, j);
    for (int k = 0; k < j; ++k) diag -= l[j * n + k] * l[j * n + k];
    if (!(diag > 0.0)) return false;
    l[j * n + j] = std::sqrt(diag);
    for (int i = j + 1; i < n; ++i) {
      double s = m(i, j);
      for (int k = 0; k < j; ++k) s -= l[i * n + k] * l[j * n + k];
      l[i * n + j] = s / l[j * n + j];
    }
  }
  return true;
}

template <class T>
std::vector<T> multiply(const Matrix<T>& m, std::span<const T> v) {
  std::vector<T> out(static_cast<std::size_t>(m.rows()), T(0.0));
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) out[i] += m(i, j) * v[j];
  }
  return out;
}

template <class T>
T quadratic_form(const Matrix<T>& m, std::span<const T> u, std::span<const T> w) {
  T s(0.0);
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) s += m(i, j) * u[i] * w[j];
  }
  return s;
}

/// Largest absolute entry difference between two equally-shaped matrices.
inline double max_abs_difference(const Matrix<double>& a, const Matrix<double>& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.data().size(); ++k) m = std::max(m, std::abs(a.data()[k] - b.data()[k]));
  return m;
}

inline double max_abs(const Matrix<double>& a) {
  double m = 0.0;
  for (double e : a.data()) m = std::max(m, std::abs(e));
  return m;
}

}  // namespace finslerlab

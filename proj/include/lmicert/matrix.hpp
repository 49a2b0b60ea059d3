#pragma once

#include "lmicert/rational.hpp"

#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace lmicert {

// Dense row-major matrix over a field-like scalar (double or Rational).
template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, const T& fill = T(0))
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::initializer_list<std::initializer_list<T>> init) {
    rows_ = init.size();
    cols_ = rows_ ? init.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto& row : init) {
      if (row.size() != cols_) throw std::invalid_argument("ragged matrix initializer");
      for (const auto& v : row) data_.push_back(v);
    }
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  Matrix submatrix(const std::vector<std::size_t>& ri, const std::vector<std::size_t>& ci) const {
    Matrix s(ri.size(), ci.size());
    for (std::size_t a = 0; a < ri.size(); ++a)
      for (std::size_t b = 0; b < ci.size(); ++b) s(a, b) = (*this)(ri[a], ci[b]);
    return s;
  }

  Matrix columns(const std::vector<std::size_t>& ci) const {
    std::vector<std::size_t> all(rows_);
    for (std::size_t i = 0; i < rows_; ++i) all[i] = i;
    return submatrix(all, ci);
  }

  Matrix operator*(const Matrix& o) const {
    if (cols_ != o.rows_) throw std::invalid_argument("matrix product dimension mismatch");
    Matrix p(rows_, o.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t k = 0; k < cols_; ++k) {
        const T& a = (*this)(i, k);
        if (a == T(0)) continue;
        for (std::size_t j = 0; j < o.cols_; ++j) p(i, j) += a * o(k, j);
      }
    return p;
  }
  Matrix operator+(const Matrix& o) const {
    check_same(o);
    Matrix s(*this);
    for (std::size_t i = 0; i < data_.size(); ++i) s.data_[i] += o.data_[i];
    return s;
  }
  Matrix operator-(const Matrix& o) const {
    check_same(o);
    Matrix s(*this);
    for (std::size_t i = 0; i < data_.size(); ++i) s.data_[i] -= o.data_[i];
    return s;
  }
  Matrix operator*(const T& c) const {
    Matrix s(*this);
    for (auto& v : s.data_) v *= c;
    return s;
  }
  std::vector<T> operator*(const std::vector<T>& x) const {
    if (x.size() != cols_) throw std::invalid_argument("matrix-vector dimension mismatch");
    std::vector<T> y(rows_, T(0));
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) y[i] += (*this)(i, j) * x[j];
    return y;
  }
  bool operator==(const Matrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
  }

  const std::vector<T>& data() const { return data_; }

 private:
  void check_same(const Matrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("matrix dimension mismatch");
  }
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<T> data_;
};

using MatD = Matrix<double>;
using MatQ = Matrix<Rational>;

inline std::size_t hvec_length(std::size_t n) { return n * (n + 1) / 2; }

// Position of entry (i,j), i >= j, in the column-major lower-triangle ordering.
inline std::size_t hvec_index(std::size_t n, std::size_t i, std::size_t j) {
  if (i < j) std::swap(i, j);
  return j * n - (j * (j + 1)) / 2 + j + (i - j);
}

// Row/column pair of an hvec position.
inline std::pair<std::size_t, std::size_t> hvec_entry(std::size_t n, std::size_t pos) {
  std::size_t j = 0;
  while (pos >= n - j) {
    pos -= n - j;
    ++j;
  }
  return {j + pos, j};
}

// Symmetric matrix storing only the lower triangle, in hvec order.
template <class T>
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(std::size_t n, const T& fill = T(0)) : n_(n), lower_(hvec_length(n), fill) {
    if (n == 0) throw std::invalid_argument("SymMatrix dimension must be positive");
  }

  static SymMatrix identity(std::size_t n) {
    SymMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) m.set(i, i, T(1));
    return m;
  }

  // Symmetrizes by reading the lower triangle only; throws if the input is not symmetric and strict.
  static SymMatrix from_dense(const Matrix<T>& a, bool strict = true) {
    if (a.rows() != a.cols()) throw std::invalid_argument("SymMatrix needs a square matrix");
    SymMatrix m(a.rows());
    for (std::size_t j = 0; j < a.cols(); ++j)
      for (std::size_t i = j; i < a.rows(); ++i) {
        if (strict && !(a(i, j) == a(j, i))) throw std::invalid_argument("matrix is not symmetric");
        m.set(i, j, a(i, j));
      }
    return m;
  }

  std::size_t n() const { return n_; }
  const T& operator()(std::size_t i, std::size_t j) const { return lower_[hvec_index(n_, i, j)]; }
  void set(std::size_t i, std::size_t j, const T& v) { lower_[hvec_index(n_, i, j)] = v; }

  Matrix<T> dense() const {
    Matrix<T> a(n_, n_);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) a(i, j) = (*this)(i, j);
    return a;
  }

  const std::vector<T>& lower() const { return lower_; }

  bool operator==(const SymMatrix& o) const { return n_ == o.n_ && lower_ == o.lower_; }

 private:
  std::size_t n_ = 0;
  std::vector<T> lower_;
};

using SymD = SymMatrix<double>;
using SymQ = SymMatrix<Rational>;

template <class T>
std::vector<T> hvec(const SymMatrix<T>& x) {
  return x.lower();
}

template <class T>
SymMatrix<T> unhvec(const std::vector<T>& v) {
  std::size_t n = 0;
  while (hvec_length(n) < v.size()) ++n;
  if (hvec_length(n) != v.size() || n == 0) throw std::invalid_argument("vector length is not n(n+1)/2");
  SymMatrix<T> x(n);
  for (std::size_t p = 0; p < v.size(); ++p) {
    auto [i, j] = hvec_entry(n, p);
    x.set(i, j, v[p]);
  }
  return x;
}

SymD to_double(const SymQ& x);
MatD to_double(const MatQ& x);
MatQ exact_from_double(const MatD& x);

std::string to_string(const MatQ& m);

}  // namespace lmicert

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "gtqa/error.hpp"

namespace gtqa {

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;
using RealVector = std::vector<double>;

// Dense row-major real matrix. Sized for the column-basis problems here
// (tens of rows), so no expression templates or blocking.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::initializer_list<std::initializer_list<double>> init) {
    rows_ = init.size();
    cols_ = rows_ == 0 ? 0 : init.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& row : init) {
      if (row.size() != cols_) throw DimensionMismatch("ragged matrix initializer");
      data_.insert(data_.end(), row.begin(), row.end());
    }
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  static Matrix diagonal(std::span<const double> values) {
    Matrix m(values.size(), values.size());
    for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }

  double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }

  std::span<double> row(std::size_t i) noexcept { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const noexcept {
    return {data_.data() + i * cols_, cols_};
  }
  std::span<double> data() noexcept { return data_; }
  std::span<const double> data() const noexcept { return data_; }

  void fill(double value) { std::fill(data_.begin(), data_.end(), value); }

  Matrix& operator+=(const Matrix& other) {
    require_same_shape(other, "+=");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
    return *this;
  }
  Matrix& operator-=(const Matrix& other) {
    require_same_shape(other, "-=");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= other.data_[k];
    return *this;
  }
  Matrix& operator*=(double scale) {
    for (double& x : data_) x *= scale;
    return *this;
  }

  // this += scale * other
  void add_scaled(const Matrix& other, double scale) {
    require_same_shape(other, "add_scaled");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += scale * other.data_[k];
  }

  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(double s, Matrix a) { return a *= s; }
  friend Matrix operator*(Matrix a, double s) { return a *= s; }
  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  void require_same_shape(const Matrix& other, const char* op) const {
    if (rows_ != other.rows_ || cols_ != other.cols_) {
      throw DimensionMismatch(std::string("matrix shapes differ in ") + op);
    }
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

inline Matrix multiply(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw DimensionMismatch("multiply: inner dimensions differ");
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  }
  return c;
}

inline Matrix transpose(const Matrix& a) {
  Matrix t(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  return t;
}

inline double max_abs(const Matrix& a) {
  double m = 0.0;
  for (double x : a.data()) m = std::max(m, std::abs(x));
  return m;
}

inline double max_abs_diff(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionMismatch("max_abs_diff: shapes differ");
  }
  double m = 0.0;
  for (std::size_t k = 0; k < a.data().size(); ++k) {
    m = std::max(m, std::abs(a.data()[k] - b.data()[k]));
  }
  return m;
}

inline double frobenius_norm(const Matrix& a) {
  double s = 0.0;
  for (double x : a.data()) s += x * x;
  return std::sqrt(s);
}

// Largest |a_ij - a_ji|; zero for exactly symmetric input.
inline double asymmetry(const Matrix& a) {
  if (!a.square()) throw DimensionMismatch("asymmetry: matrix is not square");
  double m = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = i + 1; j < a.cols(); ++j) m = std::max(m, std::abs(a(i, j) - a(j, i)));
  return m;
}

inline void require_square(const Matrix& a, const char* who) {
  if (!a.square()) throw DimensionMismatch(std::string(who) + ": matrix is not square");
}

inline void require_symmetric(const Matrix& a, const char* who, double tolerance = 1e-12) {
  require_square(a, who);
  const double asym = asymmetry(a);
  if (asym > tolerance * std::max(1.0, max_abs(a))) {
    throw NotSymmetric(std::string(who) + ": input asymmetry " + std::to_string(asym));
  }
}

inline RealVector apply(const Matrix& a, std::span<const double> x) {
  if (a.cols() != x.size()) throw DimensionMismatch("apply: vector length differs");
  RealVector y(a.rows(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double acc = 0.0;
    const auto r = a.row(i);
    for (std::size_t j = 0; j < a.cols(); ++j) acc += r[j] * x[j];
    y[i] = acc;
  }
  return y;
}

inline ComplexVector apply(const Matrix& a, std::span<const Complex> x) {
  if (a.cols() != x.size()) throw DimensionMismatch("apply: vector length differs");
  ComplexVector y(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    Complex acc{};
    const auto r = a.row(i);
    for (std::size_t j = 0; j < a.cols(); ++j) acc += r[j] * x[j];
    y[i] = acc;
  }
  return y;
}

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// <a|b> with a conjugated.
inline Complex inner(std::span<const Complex> a, std::span<const Complex> b) {
  Complex s{};
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

inline double norm(std::span<const Complex> a) {
  double s = 0.0;
  for (const Complex& z : a) s += std::norm(z);
  return std::sqrt(s);
}

inline double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

// Column j of a as a vector.
inline RealVector column(const Matrix& a, std::size_t j) {
  RealVector c(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) c[i] = a(i, j);
  return c;
}

inline ComplexVector basis_state(std::size_t dim, std::size_t index) {
  ComplexVector v(dim);
  v.at(index) = 1.0;
  return v;
}

}  // namespace gtqa

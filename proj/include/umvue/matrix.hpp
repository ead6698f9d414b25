#pragma once

#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

#include "umvue/scalar.hpp"

namespace umvue {

/// Dense row-major matrix of Scalars sharing one arithmetic mode.
///
/// The mode is fixed at construction; storing an entry of another mode
/// throws ModeMismatch. Labels are optional and, when present, must match
/// the dimensions.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, Arithmetic arith = Arithmetic::exact());

  static Matrix from_rows(const std::vector<Vector>& rows, Arithmetic arith);
  static Matrix from_columns(const std::vector<Vector>& cols, std::size_t height, Arithmetic arith);
  static Matrix identity(std::size_t n, Arithmetic arith);
  /// Exact matrix from rational literals, e.g. {{"1/3", "2/3"}}.
  static Matrix exact(std::initializer_list<std::initializer_list<const char*>> rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }
  const Arithmetic& arithmetic() const { return arith_; }
  Mode mode() const { return arith_.mode; }

  const Scalar& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  void set(std::size_t r, std::size_t c, Scalar v);

  Vector row(std::size_t r) const;
  Vector column(std::size_t c) const;
  Matrix transpose() const;
  Matrix select_rows(const std::vector<std::size_t>& idx) const;
  Matrix select_columns(const std::vector<std::size_t>& idx) const;

  Vector multiply(const Vector& v) const;
  Matrix multiply(const Matrix& other) const;

  /// Largest absolute entry, the scale for relative tolerances.
  double scale() const;
  /// Absolute zero threshold: tolerance * scale in approx mode, 0 in exact mode.
  double zero_threshold() const;

  const std::vector<std::string>& row_labels() const { return row_labels_; }
  const std::vector<std::string>& col_labels() const { return col_labels_; }
  void set_row_labels(std::vector<std::string> labels);
  void set_col_labels(std::vector<std::string> labels);

  bool operator==(const Matrix& o) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  Arithmetic arith_;
  std::vector<Scalar> data_;
  std::vector<std::string> row_labels_;
  std::vector<std::string> col_labels_;
};

Scalar dot(const Vector& a, const Vector& b);
Vector hadamard(const Vector& a, const Vector& b);
Vector axpy(const Scalar& alpha, const Vector& x, const Vector& y);
Vector scaled(const Scalar& alpha, const Vector& x);
bool is_zero_vector(const Vector& v, double abs_tol);

}  // namespace umvue

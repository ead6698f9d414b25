#include "umvue/matrix.hpp"

#include <cmath>
#include <stdexcept>

namespace umvue {

Matrix::Matrix(std::size_t rows, std::size_t cols, Arithmetic arith)
    : rows_(rows), cols_(cols), arith_(arith), data_(rows * cols, Scalar::zero(arith.mode)) {}

Matrix Matrix::from_rows(const std::vector<Vector>& rows, Arithmetic arith) {
  std::size_t ncols = rows.empty() ? 0 : rows.front().size();
  Matrix m(rows.size(), ncols, arith);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != ncols) throw std::invalid_argument("ragged matrix rows");
    for (std::size_t c = 0; c < ncols; ++c) m.set(r, c, rows[r][c]);
  }
  return m;
}

Matrix Matrix::from_columns(const std::vector<Vector>& cols, std::size_t height, Arithmetic arith) {
  Matrix m(height, cols.size(), arith);
  for (std::size_t c = 0; c < cols.size(); ++c) {
    if (cols[c].size() != height) throw std::invalid_argument("column length mismatch");
    for (std::size_t r = 0; r < height; ++r) m.set(r, c, cols[c][r]);
  }
  return m;
}

Matrix Matrix::identity(std::size_t n, Arithmetic arith) {
  Matrix m(n, n, arith);
  for (std::size_t i = 0; i < n; ++i) m.set(i, i, Scalar::one(arith.mode));
  return m;
}

Matrix Matrix::exact(std::initializer_list<std::initializer_list<const char*>> rows) {
  std::vector<Vector> out;
  for (const auto& r : rows) {
    Vector v;
    for (const char* lit : r) v.emplace_back(parse_rational(lit));
    out.push_back(std::move(v));
  }
  return from_rows(out, Arithmetic::exact());
}

void Matrix::set(std::size_t r, std::size_t c, Scalar v) {
  if (v.mode() != arith_.mode) throw ModeMismatch();
  data_.at(r * cols_ + c) = std::move(v);
}

Vector Matrix::row(std::size_t r) const {
  return Vector(data_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
                data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_));
}

Vector Matrix::column(std::size_t c) const {
  Vector v;
  v.reserve(rows_);
  for (std::size_t r = 0; r < rows_; ++r) v.push_back((*this)(r, c));
  return v;
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_, arith_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t.data_[c * rows_ + r] = (*this)(r, c);
  t.row_labels_ = col_labels_;
  t.col_labels_ = row_labels_;
  return t;
}

Matrix Matrix::select_rows(const std::vector<std::size_t>& idx) const {
  Matrix m(idx.size(), cols_, arith_);
  for (std::size_t i = 0; i < idx.size(); ++i)
    for (std::size_t c = 0; c < cols_; ++c) m.data_[i * cols_ + c] = (*this)(idx[i], c);
  if (!row_labels_.empty()) {
    std::vector<std::string> labels;
    for (auto i : idx) labels.push_back(row_labels_.at(i));
    m.row_labels_ = std::move(labels);
  }
  m.col_labels_ = col_labels_;
  return m;
}

Matrix Matrix::select_columns(const std::vector<std::size_t>& idx) const {
  Matrix m(rows_, idx.size(), arith_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t j = 0; j < idx.size(); ++j) m.data_[r * idx.size() + j] = (*this)(r, idx[j]);
  if (!col_labels_.empty()) {
    std::vector<std::string> labels;
    for (auto j : idx) labels.push_back(col_labels_.at(j));
    m.col_labels_ = std::move(labels);
  }
  m.row_labels_ = row_labels_;
  return m;
}

Vector Matrix::multiply(const Vector& v) const {
  if (v.size() != cols_) throw std::invalid_argument("matrix-vector dimension mismatch");
  Vector out(rows_, Scalar::zero(arith_.mode));
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) {
      if (v[c].is_zero()) continue;
      out[r] += (*this)(r, c) * v[c];
    }
  return out;
}

Matrix Matrix::multiply(const Matrix& other) const {
  if (cols_ != other.rows_) throw std::invalid_argument("matrix-matrix dimension mismatch");
  if (arith_.mode != other.arith_.mode) throw ModeMismatch();
  Matrix out(rows_, other.cols_, arith_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t k = 0; k < cols_; ++k) {
      const Scalar& a = (*this)(r, k);
      if (a.is_zero()) continue;
      for (std::size_t c = 0; c < other.cols_; ++c) out.data_[r * other.cols_ + c] += a * other(k, c);
    }
  return out;
}

double Matrix::scale() const {
  double best = 0.0;
  for (const auto& s : data_) best = std::max(best, std::abs(s.to_double()));
  return best;
}

double Matrix::zero_threshold() const {
  return arith_.mode == Mode::exact ? 0.0 : arith_.tolerance * scale();
}

void Matrix::set_row_labels(std::vector<std::string> labels) {
  if (!labels.empty() && labels.size() != rows_) throw std::invalid_argument("row label count mismatch");
  row_labels_ = std::move(labels);
}

void Matrix::set_col_labels(std::vector<std::string> labels) {
  if (!labels.empty() && labels.size() != cols_) throw std::invalid_argument("column label count mismatch");
  col_labels_ = std::move(labels);
}

bool Matrix::operator==(const Matrix& o) const {
  return rows_ == o.rows_ && cols_ == o.cols_ && arith_.mode == o.arith_.mode && data_ == o.data_;
}

Scalar dot(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: length mismatch");
  Scalar acc = Scalar::zero(common_mode(a, Mode::exact));
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

Vector hadamard(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw std::invalid_argument("hadamard: length mismatch");
  Vector out;
  out.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out.push_back(a[i] * b[i]);
  return out;
}

Vector axpy(const Scalar& alpha, const Vector& x, const Vector& y) {
  if (x.size() != y.size()) throw std::invalid_argument("axpy: length mismatch");
  Vector out = y;
  for (std::size_t i = 0; i < x.size(); ++i) out[i] += alpha * x[i];
  return out;
}

Vector scaled(const Scalar& alpha, const Vector& x) {
  Vector out;
  out.reserve(x.size());
  for (const auto& v : x) out.push_back(alpha * v);
  return out;
}

bool is_zero_vector(const Vector& v, double abs_tol) {
  for (const auto& s : v)
    if (!s.is_zero(abs_tol)) return false;
  return true;
}

}  // namespace umvue

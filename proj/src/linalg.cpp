#include "umvue/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace umvue {

namespace {

template <class T>
using Grid = std::vector<std::vector<T>>;

template <class T>
T value_of(const Scalar& s);
template <>
Rational value_of<Rational>(const Scalar& s) { return s.rational(); }
template <>
double value_of<double>(const Scalar& s) { return s.as_double(); }

template <class T>
Grid<T> to_grid(const Matrix& m) {
  Grid<T> g(m.rows(), std::vector<T>(m.cols()));
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) g[r][c] = value_of<T>(m(r, c));
  return g;
}

template <class T>
Matrix from_grid(const Grid<T>& g, std::size_t cols, Arithmetic arith) {
  Matrix m(g.size(), cols, arith);
  for (std::size_t r = 0; r < g.size(); ++r)
    for (std::size_t c = 0; c < cols; ++c) m.set(r, c, Scalar(g[r][c]));
  return m;
}

bool negligible(const Rational& v, double) { return sgn(v) == 0; }
bool negligible(double v, double thr) { return std::abs(v) <= thr; }

// Row index of the pivot for column c among rows [from, n): first nonzero in
// exact mode, largest magnitude (lowest index on ties) in approx mode.
template <class T>
std::optional<std::size_t> choose_pivot(const Grid<T>& g, std::size_t from, std::size_t c, double thr) {
  std::optional<std::size_t> best;
  if constexpr (std::is_same_v<T, Rational>) {
    for (std::size_t r = from; r < g.size(); ++r)
      if (sgn(g[r][c]) != 0) return r;
  } else {
    double best_abs = thr;
    for (std::size_t r = from; r < g.size(); ++r) {
      double a = std::abs(g[r][c]);
      if (a > best_abs) {
        best_abs = a;
        best = r;
      }
    }
  }
  return best;
}

template <class T>
std::vector<std::size_t> rref_in_place(Grid<T>& g, std::size_t cols, double thr) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t c = 0; c < cols && row < g.size(); ++c) {
    auto p = choose_pivot(g, row, c, thr);
    if (!p) {
      if constexpr (std::is_same_v<T, double>)
        for (std::size_t r = row; r < g.size(); ++r) g[r][c] = 0.0;
      continue;
    }
    std::swap(g[row], g[*p]);
    T inv = T(1) / g[row][c];
    for (std::size_t j = c; j < cols; ++j) g[row][j] *= inv;
    for (std::size_t r = 0; r < g.size(); ++r) {
      if (r == row || negligible(g[r][c], 0.0)) continue;
      T f = g[r][c];
      for (std::size_t j = c; j < cols; ++j) g[r][j] -= f * g[row][j];
      g[r][c] = T(0);
    }
    pivots.push_back(c);
    ++row;
  }
  if constexpr (std::is_same_v<T, double>) {
    for (auto& r : g)
      for (auto& v : r)
        if (std::abs(v) <= thr) v = 0.0;
  }
  return pivots;
}

// Fraction-free elimination over the integers. Each row is first scaled by the
// lcm of its denominators; every intermediate entry is then a minor of that
// integer matrix, so the division by the previous pivot is exact.
std::size_t bareiss_rank(const Matrix& m) {
  std::size_t rows = m.rows(), cols = m.cols();
  std::vector<std::vector<mpz_class>> a(rows, std::vector<mpz_class>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    mpz_class l = 1;
    for (std::size_t c = 0; c < cols; ++c) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), m(r, c).rational().get_den_mpz_t());
    for (std::size_t c = 0; c < cols; ++c) {
      const Rational& q = m(r, c).rational();
      a[r][c] = q.get_num() * (l / q.get_den());
    }
  }
  mpz_class prev = 1;
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t p = rank;
    while (p < rows && sgn(a[p][c]) == 0) ++p;
    if (p == rows) continue;
    std::swap(a[rank], a[p]);
    for (std::size_t r = rank + 1; r < rows; ++r) {
      for (std::size_t j = c + 1; j < cols; ++j) {
        mpz_class t = a[rank][c] * a[r][j] - a[r][c] * a[rank][j];
        mpz_divexact(a[r][j].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
      }
      a[r][c] = 0;
    }
    prev = a[rank][c];
    ++rank;
  }
  return rank;
}

std::size_t gauss_rank(const Matrix& m) {
  auto g = to_grid<double>(m);
  return rref_in_place(g, m.cols(), m.zero_threshold()).size();
}

// Incremental reduction against normalized pivot rows.
template <class T>
class Reducer {
 public:
  Reducer(std::size_t dim, double thr) : dim_(dim), thr_(thr) {}

  bool add(std::vector<T> v) {
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      const T& coef = v[pivots_[i]];
      if (negligible(coef, 0.0)) continue;
      T f = coef;
      for (std::size_t j = 0; j < dim_; ++j) v[j] -= f * rows_[i][j];
    }
    std::optional<std::size_t> piv;
    if constexpr (std::is_same_v<T, Rational>) {
      for (std::size_t j = 0; j < dim_; ++j)
        if (sgn(v[j]) != 0) {
          piv = j;
          break;
        }
    } else {
      double best = thr_;
      for (std::size_t j = 0; j < dim_; ++j)
        if (std::abs(v[j]) > best) {
          best = std::abs(v[j]);
          piv = j;
        }
    }
    if (!piv) return false;
    T inv = T(1) / v[*piv];
    for (auto& x : v) x *= inv;
    rows_.push_back(std::move(v));
    pivots_.push_back(*piv);
    return true;
  }

 private:
  std::size_t dim_;
  double thr_;
  Grid<T> rows_;
  std::vector<std::size_t> pivots_;
};

template <class T>
std::vector<std::size_t> greedy_basis(const Matrix& columns) {
  Reducer<T> red(columns.rows(), columns.zero_threshold());
  std::vector<std::size_t> kept;
  for (std::size_t c = 0; c < columns.cols(); ++c) {
    std::vector<T> v(columns.rows());
    for (std::size_t r = 0; r < columns.rows(); ++r) v[r] = value_of<T>(columns(r, c));
    if (red.add(std::move(v))) kept.push_back(c);
  }
  return kept;
}

Matrix columns_matrix(const std::vector<Vector>& vectors, Arithmetic arith) {
  std::size_t height = vectors.empty() ? 0 : vectors.front().size();
  return Matrix::from_columns(vectors, height, arith);
}

std::vector<Vector> pick(const std::vector<Vector>& vectors, const std::vector<std::size_t>& idx) {
  std::vector<Vector> out;
  out.reserve(idx.size());
  for (auto i : idx) out.push_back(vectors[i]);
  return out;
}

}  // namespace

std::size_t rank(const Matrix& m) {
  if (m.empty()) return 0;
  return m.mode() == Mode::exact ? bareiss_rank(m) : gauss_rank(m);
}

Matrix reduced_row_echelon(const Matrix& m, std::vector<std::size_t>* pivots) {
  std::vector<std::size_t> piv;
  Matrix out;
  if (m.mode() == Mode::exact) {
    auto g = to_grid<Rational>(m);
    piv = rref_in_place(g, m.cols(), 0.0);
    out = from_grid(g, m.cols(), m.arithmetic());
  } else {
    auto g = to_grid<double>(m);
    piv = rref_in_place(g, m.cols(), m.zero_threshold());
    out = from_grid(g, m.cols(), m.arithmetic());
  }
  out.set_col_labels(m.col_labels());
  if (pivots) *pivots = std::move(piv);
  return out;
}

std::vector<Vector> null_space_basis(const Matrix& m) {
  const Mode mode = m.mode();
  std::vector<std::size_t> pivots;
  Matrix r = reduced_row_echelon(m, &pivots);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto p : pivots) is_pivot[p] = true;
  std::vector<Vector> basis;
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    Vector h(m.cols(), Scalar::zero(mode));
    h[f] = Scalar::one(mode);
    for (std::size_t i = 0; i < pivots.size(); ++i) h[pivots[i]] = -r(i, f);
    basis.push_back(std::move(h));
  }
  return basis;
}

std::vector<std::size_t> extract_basis(const Matrix& columns) {
  if (columns.cols() == 0 || columns.rows() == 0) return {};
  return columns.mode() == Mode::exact ? greedy_basis<Rational>(columns) : greedy_basis<double>(columns);
}

std::vector<std::size_t> extract_basis(const std::vector<Vector>& vectors, Arithmetic arith) {
  return extract_basis(columns_matrix(vectors, arith));
}

std::size_t span_dimension(const std::vector<Vector>& vectors, Arithmetic arith) {
  return rank(columns_matrix(vectors, arith));
}

bool is_independent(const std::vector<Vector>& vectors, Arithmetic arith) {
  return span_dimension(vectors, arith) == vectors.size();
}

bool same_span(const std::vector<Vector>& a, const std::vector<Vector>& b, Arithmetic arith) {
  std::vector<Vector> both = a;
  both.insert(both.end(), b.begin(), b.end());
  std::size_t ra = span_dimension(a, arith), rb = span_dimension(b, arith);
  return ra == rb && span_dimension(both, arith) == ra;
}

std::vector<std::size_t> find_circuit(const std::vector<Vector>& vectors, Arithmetic arith) {
  std::vector<std::size_t> current(vectors.size());
  std::iota(current.begin(), current.end(), std::size_t{0});
  if (is_independent(vectors, arith)) throw NoCircuit();
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    std::vector<std::size_t> trial;
    for (auto j : current)
      if (j != i) trial.push_back(j);
    if (trial.size() == current.size()) continue;
    if (!is_independent(pick(vectors, trial), arith)) current = std::move(trial);
  }
  return current;
}

std::optional<Vector> solve(const Matrix& a, const Vector& b) {
  if (b.size() != a.rows()) throw std::invalid_argument("solve: right-hand side length mismatch");
  const Mode mode = a.mode();
  Matrix aug(a.rows(), a.cols() + 1, a.arithmetic());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) aug.set(r, c, a(r, c));
    aug.set(r, a.cols(), b[r]);
  }
  std::vector<std::size_t> pivots;
  Matrix red = reduced_row_echelon(aug, &pivots);
  if (!pivots.empty() && pivots.back() == a.cols()) return std::nullopt;
  Vector x(a.cols(), Scalar::zero(mode));
  for (std::size_t i = 0; i < pivots.size(); ++i) x[pivots[i]] = red(i, a.cols());
  return x;
}

Matrix inverse(const Matrix& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("inverse: matrix not square");
  std::size_t n = a.rows();
  Matrix aug(n, 2 * n, a.arithmetic());
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) aug.set(r, c, a(r, c));
    aug.set(r, n + r, Scalar::one(a.mode()));
  }
  std::vector<std::size_t> pivots;
  Matrix red = reduced_row_echelon(aug, &pivots);
  if (pivots.size() < n || pivots[n - 1] != n - 1) throw SingularMatrix();
  Matrix inv(n, n, a.arithmetic());
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) inv.set(r, c, red(r, n + c));
  return inv;
}

}  // namespace umvue

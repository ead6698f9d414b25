#include <doctest.h>

#include <random>

#include "support/oracles.hpp"
#include "umvue/generators.hpp"
#include "umvue/linalg.hpp"
#include "umvue/selftest.hpp"

using namespace umvue;

namespace {

Vector col(const StatModel& m, std::size_t x) { return m.pmf.column(x); }

Vector ints(std::initializer_list<long> vals, Mode mode = Mode::exact) {
  Vector v;
  for (long x : vals) v.push_back(Scalar::from_int(x, mode));
  return v;
}

}  // namespace

TEST_CASE("scalar arithmetic stays exact and rejects mixed modes") {
  Scalar third(parse_rational("1/3"));
  CHECK((third + third + third) == Scalar(Rational(1)));
  CHECK((third * Scalar(Rational(3))).to_string() == "1");
  CHECK(Scalar(parse_rational("-6/4")).to_string() == "-3/2");
  CHECK(Scalar(Rational(6, 10)) == Scalar(Rational(3, 5)));
  CHECK(Scalar(Rational(4, 4)).to_string() == "1");
  CHECK_THROWS_AS(third + Scalar(0.5), ModeMismatch);
  CHECK_THROWS_AS((void)(third == Scalar(0.5)), ModeMismatch);
  CHECK_THROWS_AS(Scalar(Rational(1)) / Scalar(Rational(0)), std::domain_error);
}

TEST_CASE("rational literals") {
  CHECK(parse_rational("2/4") == Rational(1, 2));
  CHECK(parse_rational(" 7 ") == Rational(7));
  CHECK(parse_rational("-1/3") == Rational(-1, 3));
  CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("1/-2"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("0.5"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational(""), std::invalid_argument);
  auto list = parse_rational_list("1/4,1/2,3/4");
  REQUIRE(list.size() == 3);
  CHECK(list[2] == Rational(3, 4));
}

TEST_CASE("matrix rejects entries of another mode") {
  Matrix m(2, 2, Arithmetic::exact());
  CHECK_THROWS_AS(m.set(0, 0, Scalar(1.0)), ModeMismatch);
  CHECK_THROWS_AS(Matrix::from_rows({ints({1, 2}), ints({1, 2}, Mode::approx)}, Arithmetic::exact()), ModeMismatch);
}

TEST_CASE("rank") {
  auto p1 = example1(Example1::p1);
  auto p2 = example1(Example1::p2);

  SUBCASE("P1 has rank 2: a 2x2 minor is nonzero") {
    // 1/3 * 1/3 - 1/3 * 1/6 = 1/18
    CHECK(oracle::det({{Rational(1, 3), Rational(1, 3)}, {Rational(1, 6), Rational(1, 3)}}) == Rational(1, 18));
    CHECK(rank(p1.pmf) == 2);
  }
  SUBCASE("zero matrix") { CHECK(rank(Matrix(3, 3)) == 0); }
  SUBCASE("the four likelihood columns of P2 span a plane") {
    CHECK(oracle::minor_rank(oracle::grid_of(p2.pmf)) == 2);
    CHECK(rank(p2.pmf) == 2);
  }
  SUBCASE("degenerate shapes") {
    CHECK(rank(Matrix(0, 4)) == 0);
    CHECK(rank(Matrix(4, 0)) == 0);
    CHECK(null_space_basis(Matrix(0, 3)).size() == 3);
    CHECK(null_space_basis(Matrix(3, 0)).empty());
  }
  SUBCASE("approx mode uses a relative tolerance") {
    Matrix m = Matrix::from_rows({{Scalar(1.0), Scalar(2.0)}, {Scalar(2.0), Scalar(4.0 + 1e-12)}}, Arithmetic::approx());
    CHECK(rank(m) == 1);
    Matrix wide = Matrix::from_rows({{Scalar(1.0), Scalar(2.0)}, {Scalar(2.0), Scalar(4.0 + 1e-6)}}, Arithmetic::approx());
    CHECK(rank(wide) == 2);
    Matrix scaled = Matrix::from_rows({{Scalar(1e-20), Scalar(2e-20)}, {Scalar(2e-20), Scalar(4.000001e-20)}},
                                      Arithmetic::approx());
    CHECK(rank(scaled) == 2);
  }
}

TEST_CASE("null space basis") {
  auto p1 = example1(Example1::p1);
  auto p2 = example1(Example1::p2);

  SUBCASE("P1 spans the same space as the two hand-computed rows") {
    auto basis = null_space_basis(p1.pmf);
    CHECK(basis.size() == 2);
    std::vector<Vector> reference = {ints({1, -2, 1, 0}), ints({1, -2, 1, 1})};
    CHECK(same_span(basis, reference, Arithmetic::exact()));
    // reduced form: unit entry at each free column
    CHECK(basis[0] == ints({1, -2, 1, 0}));
    CHECK(basis[1] == ints({0, 0, 0, 1}));
  }
  SUBCASE("identity has a trivial null space") { CHECK(null_space_basis(Matrix::identity(3, Arithmetic::exact())).empty()); }
  SUBCASE("P2: two vectors, each orthogonal to both rows") {
    auto basis = null_space_basis(p2.pmf);
    REQUIRE(basis.size() == 2);
    for (const auto& h : basis) {
      CHECK(dot(p2.pmf.row(0), h).is_zero());
      CHECK(dot(p2.pmf.row(1), h).is_zero());
    }
  }
}

TEST_CASE("extract_basis") {
  auto p1 = example1(Example1::p1);
  auto p2 = example1(Example1::p2);
  const auto ex = Arithmetic::exact();

  // l2 = l1 / 2 in P2: [1/4, 1/3] vs [1/2, 2/3]
  CHECK(col(p2, 1) == scaled(Scalar(Rational(1, 2)), col(p2, 0)));
  CHECK(extract_basis({col(p2, 0), col(p2, 1)}, ex) == std::vector<std::size_t>{0});
  CHECK(extract_basis(std::vector<Vector>{}, ex).empty());
  CHECK(extract_basis({col(p1, 0), col(p1, 1), col(p1, 2)}, ex) == std::vector<std::size_t>{0, 1});
  CHECK(extract_basis({ints({0, 0}), ints({1, 1})}, ex) == std::vector<std::size_t>{1});
}

TEST_CASE("find_circuit") {
  auto p1 = example1(Example1::p1);
  auto p2 = example1(Example1::p2);
  const auto ex = Arithmetic::exact();

  CHECK(find_circuit({col(p1, 0), col(p1, 1), col(p1, 2)}, ex) == std::vector<std::size_t>{0, 1, 2});
  CHECK(find_circuit({col(p2, 0), col(p2, 1), col(p2, 2)}, ex) == std::vector<std::size_t>{0, 1});
  Vector v = ints({3, -1, 2});
  CHECK(find_circuit({v, v}, ex) == std::vector<std::size_t>{0, 1});
  CHECK(find_circuit({ints({1, 0}), ints({0, 0})}, ex) == std::vector<std::size_t>{1});
  CHECK_THROWS_AS(find_circuit({ints({1, 0}), ints({0, 1})}, ex), NoCircuit);
}

TEST_CASE("solve and inverse") {
  Matrix a = Matrix::exact({{"2", "1"}, {"1", "3"}});
  auto x = solve(a, ints({3, 5}));
  REQUIRE(x);
  CHECK(a.multiply(*x) == ints({3, 5}));
  CHECK(a.multiply(inverse(a)) == Matrix::identity(2, Arithmetic::exact()));
  CHECK_FALSE(solve(Matrix::exact({{"1", "1"}, {"2", "2"}}), ints({1, 3})));
  CHECK_THROWS_AS(inverse(Matrix::exact({{"1", "1"}, {"2", "2"}})), SingularMatrix);
}

TEST_CASE("linear algebra properties on random exact matrices") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> entry(-3, 3), dim(0, 5), den(1, 4);
  const auto ex = Arithmetic::exact();
  for (int trial = 0; trial < 300; ++trial) {
    std::size_t rows = static_cast<std::size_t>(dim(rng)), cols = static_cast<std::size_t>(dim(rng));
    Matrix m(rows, cols, ex);
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t c = 0; c < cols; ++c)
        if (trial % 3 != 0 || entry(rng) > 0) m.set(r, c, Scalar(Rational(entry(rng), den(rng))));
    // Force dependencies in some trials.
    if (rows >= 2 && trial % 2 == 0)
      for (std::size_t c = 0; c < cols; ++c) m.set(rows - 1, c, m(0, c) * Scalar(Rational(-2, 3)));

    const auto g = oracle::grid_of(m);
    const std::size_t r = rank(m);
    CAPTURE(trial);
    CHECK(r == oracle::gauss_rank(g));
    if (rows <= 4 && cols <= 4) CHECK(r == oracle::minor_rank(g));
    CHECK(r == rank(m.transpose()));

    auto basis = null_space_basis(m);
    CHECK(basis.size() == cols - r);
    for (const auto& h : basis) CHECK(is_zero_vector(m.multiply(h), 0.0));

    std::vector<Vector> columns;
    for (std::size_t c = 0; c < cols; ++c) columns.push_back(m.column(c));
    if (rows > 0) {
      auto kept = extract_basis(m);
      CHECK(kept.size() == r);
      std::vector<Vector> kept_vecs;
      for (auto k : kept) kept_vecs.push_back(columns[k]);
      CHECK(is_independent(kept_vecs, ex));
      CHECK(same_span(kept_vecs, columns, ex));

      if (!is_independent(columns, ex)) {
        auto circuit = find_circuit(columns, ex);
        std::vector<Vector> cv;
        for (auto i : circuit) cv.push_back(columns[i]);
        CHECK_FALSE(is_independent(cv, ex));
        for (std::size_t drop = 0; drop < cv.size(); ++drop) {
          auto fewer = cv;
          fewer.erase(fewer.begin() + static_cast<std::ptrdiff_t>(drop));
          CHECK(is_independent(fewer, ex));
        }
      }

      // Rescaling a row by a positive rational changes nothing.
      Matrix s = m;
      for (std::size_t c = 0; c < cols; ++c) s.set(0, c, m(0, c) * Scalar(Rational(5, 7)));
      CHECK(rank(s) == r);
      CHECK(null_space_basis(s).size() == basis.size());
      CHECK(extract_basis(s) == kept);
    }
  }
}

TEST_CASE("approx mode agrees with exact mode on well-conditioned random models") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    auto m = random_model(rng, 6, 4);
    auto approx = to_mode(m, Mode::approx);
    CAPTURE(trial);
    CHECK(rank(m.pmf) == rank(approx.pmf));
    CHECK(null_space_basis(m.pmf).size() == null_space_basis(approx.pmf).size());
    CHECK(extract_basis(m.pmf) == extract_basis(approx.pmf));
  }
}

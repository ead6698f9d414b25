#include <doctest.h>

#include <cmath>
#include <random>

#include "umvue/generators.hpp"
#include "umvue/losses.hpp"
#include "umvue/selftest.hpp"

using namespace umvue;

namespace {

Scalar q(const char* s) { return Scalar(parse_rational(s)); }

}  // namespace

TEST_CASE("loss values and derivatives") {
  CHECK(LossSpec::square().value(q("3/2")) == q("9/4"));
  CHECK(LossSpec::power4().value(q("2")) == q("20"));
  CHECK(LossSpec::power4().derivative(q("1")) == q("6"));
  CHECK(LossSpec::exponential().value(Scalar(1.0)).as_double() == doctest::Approx(std::exp(1.0)));
  CHECK(LossSpec::exponential().evaluation_mode(Mode::exact) == Mode::approx);

  auto table = LossSpec::parse("table:-1=2,0=0,2=2");
  CHECK(table.kind() == LossKind::custom_table);
  CHECK_FALSE(table.differentiable());
  CHECK(table.value(q("1")) == q("1"));
  CHECK(table.value(q("-2")) == q("4"));
  CHECK(table.value(q("4")) == q("4"));
  CHECK_THROWS_AS(table.derivative(q("0")), std::invalid_argument);
  CHECK_THROWS_AS(LossSpec::parse("table:0=0,1=2,2=3"), std::invalid_argument);
  CHECK_THROWS_AS(LossSpec::parse("table:1=0,0=1"), std::invalid_argument);
  CHECK_THROWS_AS(LossSpec::parse("cubic"), std::invalid_argument);
  CHECK(LossSpec::parse("power4").name() == "power4");
}

TEST_CASE("risk") {
  auto p1 = example1(Example1::p1);
  auto t = Statistic::exact({"1", "1", "1", "0"});
  CHECK(risk(p1, t, LossSpec::square(), 0) == q("1"));
  auto z = Statistic::constant(4, q("0"));
  for (std::size_t th = 0; th < 2; ++th)
    CHECK(risk(p1, z, LossSpec::exponential(), th).as_double() == doctest::Approx(1.0));

  auto s = Statistic::exact({"0", "1", "2", "5"});
  for (std::size_t th = 0; th < 2; ++th) {
    auto mean = expectation(p1, s)[th];
    CHECK(risk(p1, s, LossSpec::square(), th) == variance(p1, s, th) + mean * mean);
  }
}

TEST_CASE("check_ubue") {
  auto p1 = example1(Example1::p1);
  auto good = check_ubue(p1, Statistic::exact({"1", "1", "1", "0"}), LossSpec::square());
  CHECK(good.holds);
  CHECK(good.competitors.size() == 200);
  REQUIRE(good.margin);
  CHECK(good.margin->sign() >= 0);

  auto bad = check_ubue(p1, Statistic::exact({"0", "1", "0", "0"}), LossSpec::square());
  CHECK_FALSE(bad.holds);
  REQUIRE(bad.violation);
  const auto& c = bad.competitors[*bad.violation];
  bool lower = false;
  for (std::size_t th = 0; th < 2; ++th) lower = lower || c.risks[th] < bad.risk_t[th];
  CHECK(lower);

  auto inv = StatModel::with_default_labels(Matrix::exact({{"1/2", "1/2"}, {"1/3", "2/3"}}));
  auto vac = check_ubue(inv, Statistic::exact({"3", "-1"}), LossSpec::square());
  CHECK(vac.holds);
  CHECK(vac.competitors.empty());

  auto expo = check_ubue(example1(Example1::p2), Statistic::exact({"7/4", "7/4", "1", "0"}), LossSpec::exponential());
  CHECK(expo.arithmetic_downgraded);
  CHECK(expo.holds);

  auto tab = check_ubue(p1, Statistic::exact({"1", "1", "1", "0"}), LossSpec::parse("table:-1=1,0=0,1=1"));
  CHECK(tab.holds);
}

TEST_CASE("derivative implication") {
  auto p2 = example1(Example1::p2);
  CHECK(check_derivative_implication(p2, Statistic::exact({"7", "7", "1", "0"}), LossSpec::exponential()).holds);
  auto p1 = example1(Example1::p1);
  CHECK_FALSE(check_derivative_implication(p1, Statistic::exact({"0", "1", "0", "0"}), LossSpec::power4()).holds);
  CHECK_THROWS(check_derivative_implication(p1, Statistic::exact({"0", "1", "0", "0"}),
                                            LossSpec::parse("table:0=0,1=1")));
}

TEST_CASE("risk is convex along E0 lines") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 60; ++trial) {
    auto m = random_model(rng, 5, 3);
    auto e0 = e0_basis(m);
    if (e0.empty()) continue;
    auto cm = clean(m);
    auto t = random_statistics(rng, cm, 1).front();
    const auto& h = e0.front();
    for (const auto& loss : {LossSpec::square(), LossSpec::power4()}) {
      auto at = [&](const char* s) { return Statistic{axpy(q(s), h, t.values)}; };
      for (std::size_t th = 0; th < m.num_thetas(); ++th) {
        // lambda(mid) <= (lambda(lo) + lambda(hi)) / 2 with mid the midpoint
        auto lo = risk(m, at("-1"), loss, th), mid = risk(m, at("1/2"), loss, th), hi = risk(m, at("2"), loss, th);
        CHECK(mid * q("2") <= lo + hi);
      }
    }
  }
}

#include "umvue/generators.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace umvue {

StatModel example1(Example1 which) {
  Matrix p = which == Example1::p1 ? Matrix::exact({{"1/3", "1/3", "1/3", "0"}, {"1/6", "1/3", "1/2", "0"}})
                                   : Matrix::exact({{"1/2", "1/4", "1/4", "0"}, {"2/3", "1/3", "0", "0"}});
  return StatModel::with_default_labels(std::move(p));
}

Rational pochhammer(const Rational& a, std::size_t k) {
  Rational out = 1;
  for (std::size_t i = 0; i < k; ++i) out *= a + static_cast<long>(i);
  return out;
}

namespace {

std::vector<Rational> canonical(std::vector<Rational> grid) {
  for (auto& q : grid) q.canonicalize();
  return grid;
}

void require_distinct(const std::vector<Rational>& grid) {
  if (grid.empty()) throw std::invalid_argument("theta grid is empty");
  std::set<Rational> seen(grid.begin(), grid.end());
  if (seen.size() != grid.size()) throw std::invalid_argument("theta grid values must be distinct");
}

// Lexicographic enumeration of {0,1}^n: sample i has bits of i, most significant first.
template <class Pmf>
GeneratedModel enumerate(std::size_t n, const std::vector<Rational>& grid, Pmf pmf) {
  if (n < 1) throw std::invalid_argument("number of trials must be at least 1");
  if (n > 16) throw std::invalid_argument("number of trials too large for explicit enumeration");
  const std::size_t count = std::size_t{1} << n;
  GeneratedModel g;
  Matrix p(grid.size(), count, Arithmetic::exact());
  for (std::size_t i = 0; i < count; ++i) {
    std::string label;
    std::size_t successes = 0;
    for (std::size_t bit = n; bit-- > 0;) {
      bool one = (i >> bit) & 1U;
      label.push_back(one ? '1' : '0');
      successes += one;
    }
    g.model.sample_labels.push_back(label);
    g.total.values.emplace_back(Rational(static_cast<long>(successes)));
    for (std::size_t r = 0; r < grid.size(); ++r) p.set(r, i, Scalar(pmf(grid[r], successes)));
  }
  for (const auto& th : grid) g.model.theta_labels.push_back(to_string(th));
  p.set_row_labels(g.model.theta_labels);
  p.set_col_labels(g.model.sample_labels);
  g.model.pmf = std::move(p);
  return g;
}

}  // namespace

GeneratedModel bernoulli(const BernoulliSpec& input) {
  BernoulliSpec spec{input.n, canonical(input.theta_grid)};
  require_distinct(spec.theta_grid);
  for (const auto& th : spec.theta_grid)
    if (sgn(th) <= 0 || th >= 1) throw std::invalid_argument("Bernoulli grid value " + to_string(th) + " outside (0,1)");
  const std::size_t n = spec.n;
  return enumerate(n, spec.theta_grid, [n](const Rational& th, std::size_t k) {
    Rational out = 1;
    for (std::size_t i = 0; i < k; ++i) out *= th;
    for (std::size_t i = k; i < n; ++i) out *= Rational(1) - th;
    return out;
  });
}

GeneratedModel beta_bernoulli(const BetaBernoulliSpec& input) {
  BetaBernoulliSpec spec{input.n, input.c, canonical(input.theta_grid)};
  spec.c.canonicalize();
  if (sgn(spec.c) <= 0) throw std::invalid_argument("c must be positive");
  require_distinct(spec.theta_grid);
  for (const auto& th : spec.theta_grid)
    if (!(th > -spec.c && th < spec.c))
      throw std::invalid_argument("Beta-Bernoulli grid value " + to_string(th) + " outside (-c,c)");
  const std::size_t n = spec.n;
  const Rational c = spec.c;
  const Rational norm = pochhammer(2 * c, n);
  auto g = enumerate(n, spec.theta_grid, [&](const Rational& th, std::size_t k) {
    return Rational(pochhammer(c + th, k) * pochhammer(c - th, n - k) / norm);
  });
  validate(g.model);
  return g;
}

bool Example3Claims::means_match() const {
  return std::all_of(per_theta.begin(), per_theta.end(), [](const auto& p) { return p.mean_matches; });
}

bool Example3Claims::excess_over_latent_matches() const {
  return std::all_of(per_theta.begin(), per_theta.end(), [](const auto& p) { return p.excess_over_latent_matches; });
}

bool Example3Claims::excess_over_binomial_matches() const {
  return std::all_of(per_theta.begin(), per_theta.end(), [](const auto& p) { return p.excess_over_binomial_matches; });
}

Example3Claims verify_example3_claims(const BetaBernoulliSpec& input) {
  BetaBernoulliSpec spec{input.n, input.c, canonical(input.theta_grid)};
  spec.c.canonicalize();
  if (spec.theta_grid.size() < spec.n + 1)
    throw std::invalid_argument("grid needs at least n+1 = " + std::to_string(spec.n + 1) + " values");
  auto g = beta_bernoulli(spec);
  const std::size_t n = spec.n;
  const Rational c = spec.c;
  const Rational nq(static_cast<long>(n));

  Example3Claims out;
  std::vector<Vector> reps;
  for (std::size_t k = 0; k <= n; ++k) {
    auto it = std::find(g.total.values.begin(), g.total.values.end(), Scalar(Rational(static_cast<long>(k))));
    reps.push_back(g.model.pmf.column(static_cast<std::size_t>(it - g.total.values.begin())));
  }
  out.representative_rank = span_dimension(reps, Arithmetic::exact());
  out.representatives_full_rank = out.representative_rank == n + 1;

  for (std::size_t r = 0; r < spec.theta_grid.size(); ++r) {
    Example3Claims::PerTheta pt;
    const Rational th = spec.theta_grid[r];
    Rational first = 0, second = 0;
    for (std::size_t x = 0; x < g.model.num_samples(); ++x) {
      Rational share = g.total[x].rational() / nq;
      first += share * g.model.pmf(r, x).rational();
      second += share * share * g.model.pmf(r, x).rational();
    }
    const Rational a = c + th, b = c - th;
    pt.theta = th;
    pt.mean = first;
    pt.mean_closed_form = (c + th) / (2 * c);
    pt.var_mean = second - first * first;
    pt.var_latent = a * b / ((a + b) * (a + b) * (a + b + 1));
    pt.binomial_var = first * (1 - first) / nq;
    pt.overdispersion_closed_form = (nq - 1) / nq * (c * c - th * th) / (4 * c * c * (2 * c + 1));
    pt.mean_matches = pt.mean == pt.mean_closed_form;
    pt.excess_over_latent_matches = pt.var_mean - pt.var_latent == pt.overdispersion_closed_form;
    pt.excess_over_binomial_matches = pt.var_mean - pt.binomial_var == pt.overdispersion_closed_form;
    pt.below_uniform_bound = pt.overdispersion_closed_form < Rational(1) / (4 * (2 * c + 1));
    out.per_theta.push_back(std::move(pt));
  }
  return out;
}

}  // namespace umvue

#include "umvue/construct.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace umvue {

const char* to_string(ConstructionStatus s) {
  switch (s) {
    case ConstructionStatus::found:
      return "found";
    case ConstructionStatus::no_unbiased_estimator:
      return "no_unbiased_estimator";
    case ConstructionStatus::no_umvue_exists:
      return "no_umvue_exists";
  }
  return "unknown";
}

ConstructionResult construct_umvue(const CleanModel& m, const ExpectationFn& b) {
  const StatModel& base = m.base();
  if (b.size() != base.num_thetas())
    throw std::invalid_argument("expectation function has " + std::to_string(b.size()) + " values, model has " +
                                std::to_string(base.num_thetas()) + " parameters");
  for (const auto& v : b.values)
    if (v.mode() != base.mode()) throw ModeMismatch();

  if (!solve(base.pmf, b.values)) return {ConstructionStatus::no_unbiased_estimator, std::nullopt};

  const Mode mode = base.mode();
  auto part = sigma0(m);
  std::vector<bool> is_null_block(part.blocks.size(), false);
  for (auto i : part.null_singletons) is_null_block[i] = true;

  std::vector<Vector> block_sums;
  std::vector<std::size_t> owner;
  for (std::size_t i = 0; i < part.blocks.size(); ++i) {
    if (is_null_block[i]) continue;
    Vector sum(base.num_thetas(), Scalar::zero(mode));
    for (auto x : part.blocks[i]) sum = axpy(Scalar::one(mode), base.pmf.column(x), sum);
    block_sums.push_back(std::move(sum));
    owner.push_back(i);
  }
  auto coeffs = solve(Matrix::from_columns(block_sums, base.num_thetas(), base.arithmetic()), b.values);
  if (!coeffs) return {ConstructionStatus::no_umvue_exists, std::nullopt};

  Statistic t = Statistic::constant(base.num_samples(), Scalar::zero(mode));
  for (std::size_t k = 0; k < owner.size(); ++k)
    for (auto x : part.blocks[owner[k]]) t.values[x] = (*coeffs)[k];
  return {ConstructionStatus::found, std::move(t)};
}

Statistic conditional_expectation(const StatModel& m, const Statistic& s, const Statistic& t) {
  require_aligned(m, s);
  require_aligned(m, t);
  auto suff = is_sufficient(m, t);
  if (!suff) {
    std::string members;
    for (auto x : suff.witness) members += (members.empty() ? "" : ",") + m.sample_labels.at(x);
    throw NotSufficient("statistic is not sufficient: likelihoods on level {" + members + "} are not proportional");
  }
  const Mode mode = m.mode();
  const double thr = m.pmf.zero_threshold();
  const double cmp_tol = mode == Mode::exact ? 0.0 : m.arithmetic().tolerance * std::max(1.0, max_abs(s.values));
  Statistic out = Statistic::constant(m.num_samples(), Scalar::zero(mode));
  for (const auto& level : group_levels(t, m.arithmetic())) {
    std::optional<Scalar> value;
    std::size_t value_theta = 0;
    for (std::size_t th = 0; th < m.num_thetas(); ++th) {
      Scalar mass = Scalar::zero(mode), weighted = Scalar::zero(mode);
      for (auto y : level.members) {
        mass += m.pmf(th, y);
        weighted += s[y] * m.pmf(th, y);
      }
      if (mass.is_zero(thr)) continue;
      Scalar ratio = weighted / mass;
      if (!value) {
        value = ratio;
        value_theta = th;
      } else if (!(ratio - *value).is_zero(cmp_tol)) {
        std::string members;
        for (auto x : level.members) members += (members.empty() ? "" : ",") + m.sample_labels.at(x);
        throw NotSufficient("conditional expectation on level {" + members + "} differs between theta '" +
                            m.theta_labels.at(value_theta) + "' and theta '" + m.theta_labels.at(th) + "'");
      }
    }
    if (!value) continue;
    for (auto x : level.members) out.values[x] = *value;
  }
  return out;
}

Statistic rao_blackwellize(const StatModel& m, const Statistic& s, const Statistic& t) {
  Statistic result = conditional_expectation(m, s, t);
  const bool exact = m.mode() == Mode::exact;
  auto before = expectation(m, s), after = expectation(m, result);
  for (std::size_t th = 0; th < m.num_thetas(); ++th) {
    double tol = exact ? 0.0 : m.arithmetic().tolerance * std::max(1.0, std::abs(before[th].to_double()));
    if (!(after[th] - before[th]).is_zero(tol)) throw std::logic_error("Rao-Blackwellization changed the expectation");
    Scalar gap = variance(m, s, th) - variance(m, result, th);
    if (exact ? gap.sign() < 0 : gap.to_double() < -tol) throw std::logic_error("Rao-Blackwellization increased variance");
  }
  return result;
}

Statistic compose(const Statistic& t, const std::vector<Scalar>& level_values, Arithmetic arith) {
  auto levels = group_levels(t, arith);
  if (level_values.size() != levels.size()) throw std::invalid_argument("compose: one value per level required");
  Statistic out = Statistic::constant(t.size(), Scalar::zero(arith.mode));
  for (std::size_t i = 0; i < levels.size(); ++i)
    for (auto x : levels[i].members) out.values[x] = level_values[i];
  return out;
}

Proposition5Report check_proposition5(const CleanModel& m, const Statistic& s, std::size_t random_functions,
                                      std::uint64_t seed) {
  const StatModel& base = m.base();
  if (!is_sufficient(base, s)) throw std::invalid_argument("check_proposition5: statistic is not sufficient");
  if (!is_complete(base, s)) throw std::invalid_argument("check_proposition5: statistic is not complete");

  const Arithmetic arith = m.arithmetic();
  auto levels = group_levels(s, arith);
  std::vector<std::vector<Scalar>> maps;
  {
    std::vector<Scalar> id;
    for (const auto& l : levels) id.push_back(l.value);
    maps.push_back(std::move(id));
    maps.emplace_back(levels.size(), Scalar::zero(arith.mode));
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> num(-5, 5), den(1, 4);
  for (std::size_t i = 0; i < random_functions; ++i) {
    std::vector<Scalar> u;
    for (std::size_t l = 0; l < levels.size(); ++l) {
      Rational q(num(rng), den(rng));
      q.canonicalize();
      u.push_back(Scalar(q).in_mode(arith.mode));
    }
    maps.push_back(std::move(u));
  }

  Proposition5Report report;
  report.functions_are_umvue = true;
  for (const auto& u : maps) {
    Statistic us = compose(s, u, arith);
    ++report.functions_tested;
    if (!is_umvue(m, us)) {
      report.functions_are_umvue = false;
      report.failing_functions.push_back(std::move(us));
    }
  }

  // Off the null samples, each sigma0 block must coincide with one level of S.
  auto mask = null_mask(base);
  auto part = sigma0(m);
  std::vector<Block> nonnull_blocks, nonnull_levels;
  for (const auto& b : part.blocks) {
    Block kept;
    for (auto x : b)
      if (!mask[x]) kept.push_back(x);
    if (!kept.empty()) nonnull_blocks.push_back(std::move(kept));
  }
  for (const auto& l : levels) {
    Block kept;
    for (auto x : l.members)
      if (!mask[x]) kept.push_back(x);
    if (!kept.empty()) nonnull_levels.push_back(std::move(kept));
  }
  std::sort(nonnull_blocks.begin(), nonnull_blocks.end());
  std::sort(nonnull_levels.begin(), nonnull_levels.end());
  report.blocks_match_levels = nonnull_blocks == nonnull_levels;
  return report;
}

}  // namespace umvue

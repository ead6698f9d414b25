// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "support/oracles.hpp"
#include "umvue/characterize.hpp"
#include "umvue/construct.hpp"
#include "umvue/generators.hpp"
#include "umvue/losses.hpp"
#include "umvue/selftest.hpp"

using namespace umvue;

namespace {

// Pinned tolerances and scales.
constexpr double kExpRelativeSlack = 1e-9;
constexpr std::size_t kPoolModels = 1000;
constexpr std::size_t kPoolStatistics = 5;
constexpr std::size_t kSigmaModels = 200;
constexpr std::size_t kSigmaMaxSamples = 8;
constexpr std::size_t kCorollaryMaps = 10;
constexpr std::size_t kUbueDirections = 100;
constexpr std::uint64_t kUbueSeed = 42;
constexpr std::uint64_t kPoolSeed = 20240611;

struct Outcome {
  bool pass = true;
  std::string detail;
  std::vector<std::string> notes;

  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

struct Criterion {
  int number;
  std::string title;
  double limit_seconds;  // <= 0: no limit
  std::function<Outcome()> body;
};

// Every (model, statistic) pair examined by criteria 1-8, for the certificate round trip.
struct Seen {
  CleanModel model;
  Statistic statistic;
};
std::vector<Seen> seen;

void remember(const CleanModel& m, const Statistic& t) { seen.push_back({m, t}); }

std::string show(const Statistic& t) {
  std::string s = "[";
  for (std::size_t i = 0; i < t.size(); ++i) s += (i ? "," : "") + t[i].to_string();
  return s + "]";
}

std::string show(const std::vector<Block>& blocks) {
  std::string s = "{";
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    s += b ? ",{" : "{";
    for (std::size_t i = 0; i < blocks[b].size(); ++i) s += (i ? "," : "") + std::to_string(blocks[b][i] + 1);
    s += "}";
  }
  return s + "}";
}

Statistic random_statistic(std::mt19937_64& rng, std::size_t n) {
  std::uniform_int_distribution<int> num(-3, 3), den(1, 3);
  Statistic t;
  for (std::size_t i = 0; i < n; ++i) t.values.emplace_back(Rational(num(rng), den(rng)));
  return t;
}

std::vector<Statistic> templates(std::size_t n) {
  std::vector<Statistic> out;
  std::size_t total = 1;
  for (std::size_t i = 0; i < n; ++i) total *= 3;
  for (std::size_t code = 0; code < total; ++code) {
    Statistic t;
    for (std::size_t i = 0, c = code; i < n; ++i, c /= 3) t.values.emplace_back(Rational(static_cast<long>(c % 3)));
    out.push_back(t);
  }
  return out;
}

std::vector<Block> level_sets(const Statistic& t) {
  std::vector<Block> out;
  for (const auto& l : group_levels(t, Arithmetic::exact())) out.push_back(l.members);
  std::sort(out.begin(), out.end());
  return out;
}

const std::vector<PoolCase>& pool() {
  static const std::vector<PoolCase> p = random_pool({kPoolModels, 6, 4, kPoolStatistics, kPoolSeed});
  return p;
}

// Criteria 1 and 2 share this: exhaustive templates plus randomized statistics.
void example1_sweep(Outcome& o, Example1 which, const std::function<bool(const Statistic&)>& expected,
                    const std::vector<Block>& blocks) {
  auto cm = clean(example1(which));
  std::mt19937_64 rng(which == Example1::p1 ? 1 : 2);
  auto stats = templates(4);
  for (int i = 0; i < 200; ++i) {
    auto t = random_statistic(rng, 4);
    if (i % 2 == 0) t.values[1] = t.values[0];
    if (i % 4 == 0) t.values[2] = t.values[0];
    stats.push_back(t);
  }
  std::size_t yes = 0;
  for (const auto& t : stats) {
    remember(cm, t);
    bool got = is_umvue(cm, t).holds;
    yes += got;
    if (got != expected(t)) o.fail("is_umvue wrong on T = " + show(t));
  }
  auto part = sigma0(cm).blocks;
  if (part != blocks) o.fail("sigma0 atoms " + show(part) + ", expected " + show(blocks));
  o.notes.push_back(std::to_string(stats.size()) + " statistics, " + std::to_string(yes) + " UMVUEs; atoms " +
                    show(part));
}

Outcome criterion1() {
  Outcome o;
  example1_sweep(
      o, Example1::p1, [](const Statistic& t) { return t[0] == t[1] && t[1] == t[2]; }, {{0, 1, 2}, {3}});
  return o;
}

Outcome criterion2() {
  Outcome o;
  example1_sweep(o, Example1::p2, [](const Statistic& t) { return t[0] == t[1]; }, {{0, 1}, {2}, {3}});
  auto family = sigma0_bruteforce(clean(example1(Example1::p2)));
  const std::vector<Block> listed = {{}, {2}, {3}, {0, 1}, {2, 3}, {0, 1, 2}, {0, 1, 3}, {0, 1, 2, 3}};
  auto sorted_family = family, sorted_listed = listed;
  std::sort(sorted_family.begin(), sorted_family.end());
  std::sort(sorted_listed.begin(), sorted_listed.end());
  if (sorted_family != sorted_listed) o.fail("enumerated family " + show(family) + " differs from the listed 8 events");
  o.notes.push_back("enumerated family " + show(family));
  return o;
}

Outcome criterion3() {
  Outcome o;
  auto p1 = example1(Example1::p1);
  auto e0 = e0_basis(p1);
  std::vector<Vector> h;
  for (auto row : {std::vector<long>{1, -2, 1, 0}, std::vector<long>{1, -2, 1, 1}}) {
    Vector v;
    for (long x : row) v.emplace_back(Rational(x));
    h.push_back(v);
  }
  auto both = e0;
  both.insert(both.end(), h.begin(), h.end());
  std::size_t re = oracle::gauss_rank(oracle::columns_grid(e0)), rh = oracle::gauss_rank(oracle::columns_grid(h)),
              rb = oracle::gauss_rank(oracle::columns_grid(both));
  if (!(re == 2 && rh == 2 && rb == 2))
    o.fail("ranks E0=" + std::to_string(re) + " H=" + std::to_string(rh) + " union=" + std::to_string(rb));
  if (!same_span(e0, h, p1.arithmetic())) o.fail("library span comparison disagrees");
  o.notes.push_back("rank(E0) = rank(H) = rank(E0 + H) = " + std::to_string(rb));
  return o;
}

Outcome criterion4() {
  Outcome o;
  std::size_t cases = 0, yes = 0;
  for (const auto& pc : pool())
    for (const auto& t : pc.statistics) {
      ++cases;
      bool a = is_umvue(pc.model, t).holds;
      yes += a;
      remember(pc.model, t);
      if (a != is_umvue_oracle(pc.model.base(), t).holds) o.fail("disagreement on T = " + show(t));
    }
  if (pool().size() < 1000) o.fail("pool too small");
  o.notes.push_back(std::to_string(pool().size()) + " models, " + std::to_string(cases) + " statistics, " +
                    std::to_string(yes) + " UMVUEs");
  return o;
}

Outcome criterion5() {
  Outcome o;
  std::mt19937_64 rng(kPoolSeed + 5);
  std::size_t largest = 0;
  for (std::size_t i = 0; i < kSigmaModels; ++i) {
    auto cm = clean(random_model(rng, kSigmaMaxSamples, 4));
    largest = std::max(largest, cm.num_samples());
    auto direct = sigma0(cm).blocks;
    auto enumerated = atoms(sigma0_bruteforce(cm, kSigmaMaxSamples), cm.num_samples());
    if (direct != enumerated) o.fail("model " + std::to_string(i) + ": " + show(direct) + " vs " + show(enumerated));
  }
  o.notes.push_back(std::to_string(kSigmaModels) + " models, largest |X| = " + std::to_string(largest));
  return o;
}

Outcome criterion6() {
  Outcome o;
  std::mt19937_64 rng(kPoolSeed + 6);
  std::size_t umvues = 0, maps = 0, singleton_cases = 0;
  for (const auto& pc : pool())
    for (const auto& t : pc.statistics) {
      bool u = is_umvue(pc.model, t).holds;
      bool complete = is_complete(pc.model.base(), t).holds;
      if (u) {
        ++umvues;
        auto levels = group_levels(t, pc.model.arithmetic()).size();
        for (std::size_t k = 0; k < kCorollaryMaps; ++k, ++maps) {
          auto ut = compose(t, random_level_map(rng, levels, Mode::exact), pc.model.arithmetic());
          if (!is_umvue(pc.model, ut).holds) o.fail("u(T) not a UMVUE for T = " + show(t) + ", u(T) = " + show(ut));
        }
        if (!complete) o.fail("UMVUE not complete: T = " + show(t));
      }
      auto d = decompose(pc.model, t);
      bool singletons = std::all_of(d.levels.begin(), d.levels.end(), [](const Level& l) { return l.basis.size() <= 1; });
      if (singletons) {
        ++singleton_cases;
        if (u != complete) o.fail("singleton bases but UMVUE != complete: T = " + show(t));
      }
    }
  o.notes.push_back(std::to_string(umvues) + " UMVUEs, " + std::to_string(maps) + " compositions, " +
                    std::to_string(singleton_cases) + " singleton-basis cases");
  return o;
}

std::vector<Rational> bernoulli_grid(std::size_t n) {
  std::vector<Rational> g;
  for (std::size_t i = 1; i <= n + 1; ++i) g.emplace_back(static_cast<long>(i), static_cast<long>(n + 2));
  for (auto& q : g) q.canonicalize();
  return g;
}

std::vector<Rational> beta_grid(std::size_t n) {
  // n + 1 distinct points inside (-2, 2)
  std::vector<Rational> g;
  for (std::size_t i = 0; i <= n; ++i) g.emplace_back(static_cast<long>(2 * i) - static_cast<long>(n), 2);
  for (auto& q : g) q.canonicalize();
  return g;
}

// Sufficient, complete, sigma0 = level sets, and UMVUE iff constant on the level sets.
void function_of_total(Outcome& o, const std::string& tag, const GeneratedModel& g, std::uint64_t seed) {
  auto cm = clean(g.model);
  auto levels = level_sets(g.total);
  if (!is_sufficient(g.model, g.total).holds) o.fail(tag + ": T not sufficient");
  if (!is_complete(g.model, g.total).holds) o.fail(tag + ": T not complete");
  if (sigma0(cm).blocks != levels) o.fail(tag + ": sigma0 " + show(sigma0(cm).blocks) + " != level sets");
  std::mt19937_64 rng(seed);
  std::size_t yes = 0, total = 0;
  for (int i = 0; i < 60; ++i) {
    Statistic s;
    if (i % 3 == 2) {
      s = random_statistic(rng, g.model.num_samples());
    } else {
      s = compose(g.total, random_level_map(rng, levels.size(), Mode::exact), cm.arithmetic());
      // break constancy on one sample half of the time
      if (i % 3 == 1) s.values[rng() % s.size()] += Scalar(Rational(1, 7));
    }
    remember(cm, s);
    bool constant = constant_on_blocks(s, levels, cm.arithmetic());
    bool u = is_umvue(cm, s).holds;
    ++total;
    yes += u;
    if (u != constant) o.fail(tag + ": is_umvue = " + (u ? "yes" : "no") + " on S = " + show(s));
  }
  remember(cm, g.total);
  o.notes.push_back(tag + ": " + std::to_string(yes) + "/" + std::to_string(total) + " UMVUEs");
}

Outcome criterion7() {
  Outcome o;
  for (std::size_t n = 1; n <= 3; ++n)
    function_of_total(o, "n=" + std::to_string(n), bernoulli({n, bernoulli_grid(n)}), 700 + n);
  return o;
}

Outcome criterion8() {
  Outcome o;
  const Rational c = 2;
  for (std::size_t n = 1; n <= 3; ++n) {
    const std::string tag = "n=" + std::to_string(n);
    BetaBernoulliSpec spec{n, c, beta_grid(n)};
    auto g = beta_bernoulli(spec);
    for (std::size_t th = 0; th < g.model.num_thetas(); ++th) {
      Rational sum = 0;
      for (const auto& v : g.model.pmf.row(th)) sum += v.rational();
      if (sum != 1) o.fail(tag + ": row " + g.model.theta_labels[th] + " sums to " + to_string(sum));
    }
    auto claims = verify_example3_claims(spec);
    if (!claims.means_match()) o.fail(tag + ": E(T/n) differs from (c+theta)/(2c)");
    if (claims.representative_rank != n + 1)
      o.fail(tag + ": representative rank " + std::to_string(claims.representative_rank));
    for (const auto& row : claims.per_theta) {
      if (!row.excess_over_latent_matches) {
        std::ostringstream msg;
        msg << tag << ", theta=" << to_string(row.theta) << ": Var(T/n) - Var(p) = " << to_string(row.var_mean)
            << " - " << to_string(row.var_latent) << " = " << to_string(Rational(row.var_mean - row.var_latent))
            << ", closed form gives " << to_string(row.overdispersion_closed_form);
        o.fail(msg.str());
      }
    }
    o.notes.push_back(tag + ": Var(T/n) - m(1-m)/n matches the closed form at every grid point: " +
                      (claims.excess_over_binomial_matches() ? "yes" : "no"));
    function_of_total(o, tag, g, 800 + n);
  }
  return o;
}

Outcome criterion9() {
  Outcome o;
  std::size_t certified = 0, refused = 0;
  for (const auto& s : seen) {
    if (is_umvue(s.model, s.statistic).holds) {
      auto cert = certificate(s.model, s.statistic);
      if (!verify_certificate(s.model, cert).holds) o.fail("certificate fails for T = " + show(s.statistic));
      ++certified;
    } else {
      try {
        certificate(s.model, s.statistic);
        o.fail("certificate issued for non-UMVUE T = " + show(s.statistic));
      } catch (const NotUmvue&) {
        ++refused;
      }
    }
  }
  o.notes.push_back(std::to_string(certified) + " certified, " + std::to_string(refused) + " refused");
  return o;
}

Statistic first_coordinate(const StatModel& m) {
  Statistic s;
  for (const auto& label : m.sample_labels) s.values.emplace_back(Rational(label[0] == '1' ? 1 : 0));
  return s;
}

Outcome criterion10() {
  Outcome o;
  auto g = bernoulli({2, {Rational(1, 4), Rational(1, 2), Rational(3, 4)}});
  auto s = first_coordinate(g.model);
  auto rb = rao_blackwellize(g.model, s, g.total);
  for (std::size_t x = 0; x < rb.size(); ++x)
    if (rb[x] != g.total[x] * Scalar(Rational(1, 2))) o.fail("E(S|T) is " + show(rb) + ", not T/2");
  if (expectation(g.model, rb) != expectation(g.model, s)) o.fail("expectation changed");
  const Rational theta(1, 2), bv = theta * (1 - theta);
  Scalar before = variance(g.model, s, 1), after = variance(g.model, rb, 1);
  if (before != Scalar(bv) || after != Scalar(Rational(bv / 2)) || !(after < before))
    o.fail("variances at 1/2: " + before.to_string() + " -> " + after.to_string());
  o.notes.push_back("Var at theta=1/2: " + before.to_string() + " -> " + after.to_string());

  for (std::size_t n = 1; n <= 3; ++n) {
    auto bern = bernoulli({n, bernoulli_grid(n)});
    if (!check_proposition5(clean(bern.model), bern.total).ok()) o.fail("Bernoulli n=" + std::to_string(n));
    auto beta = beta_bernoulli({n, Rational(2), beta_grid(n)});
    if (!check_proposition5(clean(beta.model), beta.total).ok()) o.fail("Beta-Bernoulli n=" + std::to_string(n));
  }
  return o;
}

Outcome criterion11() {
  Outcome o;
  const LossSpec losses[] = {LossSpec::square(), LossSpec::power4(), LossSpec::exponential()};
  // Exponential risks are compared in floating point with the model's relative tolerance.
  static_assert(kExpRelativeSlack == kDefaultTolerance);
  UbueOptions opts{kUbueDirections, 1, kUbueSeed};
  std::size_t umvues = 0, others = 0;
  for (const auto& pc : pool()) {
    for (const auto& t : pc.statistics) {
      const auto& m = pc.model.base();
      if (is_umvue(pc.model, t).holds) {
        ++umvues;
        for (const auto& loss : losses) {
          if (!check_ubue(m, t, loss, opts).holds) o.fail(loss.name() + " check_ubue says no for UMVUE T = " + show(t));
          if (!check_derivative_implication(m, t, loss).holds)
            o.fail(loss.name() + " derivative implication fails for UMVUE T = " + show(t));
        }
      } else {
        ++others;
        auto r = check_ubue(m, t, LossSpec::square(), opts);
        if (r.holds || !r.violation) o.fail("no violating direction for non-UMVUE T = " + show(t));
      }
    }
  }
  o.notes.push_back(std::to_string(umvues) + " UMVUEs x 3 losses, " + std::to_string(others) + " non-UMVUEs");
  return o;
}

Outcome criterion12() {
  Outcome o;
  std::size_t cases = 0, complete = 0;
  for (const auto& pc : pool())
    for (const auto& t : pc.statistics) {
      ++cases;
      bool a = is_complete(pc.model.base(), t).holds;
      complete += a;
      if (a != oracle::complete_bruteforce(pc.model.base(), t)) o.fail("disagreement on T = " + show(t));
    }
  o.notes.push_back(std::to_string(cases) + " statistics, " + std::to_string(complete) + " complete");
  return o;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "P1 regression", 1, criterion1},
      {2, "P2 regression", 1, criterion2},
      {3, "E0 reproduction", 0, criterion3},
      {4, "characterization equivalence", 30, criterion4},
      {5, "sigma0 oracle equivalence", 60, criterion5},
      {6, "corollary suite", 0, criterion6},
      {7, "Bernoulli family", 5, criterion7},
      {8, "Beta-Bernoulli family", 5, criterion8},
      {9, "certificate round trip", 10, criterion9},
      {10, "Rao-Blackwell pipeline", 5, criterion10},
      {11, "convex-loss equivalence", 60, criterion11},
      {12, "completeness oracle", 0, criterion12},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.body();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.limit_seconds > 0 && secs > c.limit_seconds) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "took %.2fs, limit %.0fs", secs, c.limit_seconds);
      o.fail(buf);
    }
    failures += !o.pass;
    std::printf("%s criterion %2d: %s (%.2fs)%s%s\n", o.pass ? "PASS" : "FAIL", c.number, c.title.c_str(), secs,
                o.pass ? "" : " -- ", o.pass ? "" : o.detail.c_str());
    for (const auto& n : o.notes) std::printf("    %s\n", n.c_str());
  }
  std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures == 0 ? 0 : 1;
}

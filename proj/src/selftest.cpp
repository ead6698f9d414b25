#include "umvue/selftest.hpp"

#include <algorithm>
#include <functional>

#include "umvue/characterize.hpp"
#include "umvue/construct.hpp"
#include "umvue/io.hpp"

namespace umvue {

namespace {

std::size_t uniform(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

bool chance(std::mt19937_64& rng, double p) { return std::bernoulli_distribution(p)(rng); }

Rational small_rational(std::mt19937_64& rng) {
  static const long denominators[] = {1, 2, 3, 4, 6};
  Rational q(static_cast<long>(uniform(rng, 0, 4)), denominators[uniform(rng, 0, 4)]);
  q.canonicalize();
  return q;
}

}  // namespace

StatModel random_model(std::mt19937_64& rng, std::size_t max_samples, std::size_t max_thetas) {
  const std::size_t nt = uniform(rng, 1, max_thetas);
  const std::size_t nx = uniform(rng, 1, max_samples);

  enum class Kind { fresh, zero, copy };
  std::vector<Kind> kind(nx, Kind::fresh);
  for (std::size_t x = 1; x < nx; ++x) {
    double u = std::uniform_real_distribution<double>(0, 1)(rng);
    kind[x] = u < 0.1 ? Kind::zero : (u < 0.3 ? Kind::copy : Kind::fresh);
  }
  std::vector<std::size_t> fresh;
  for (std::size_t x = 0; x < nx; ++x)
    if (kind[x] == Kind::fresh) fresh.push_back(x);

  std::vector<std::vector<Rational>> w(nt, std::vector<Rational>(nx, Rational(0)));
  for (auto x : fresh)
    for (std::size_t r = 0; r < nt; ++r) w[r][x] = small_rational(rng);
  for (std::size_t r = 0; r < nt; ++r) {
    Rational sum = 0;
    for (auto x : fresh) sum += w[r][x];
    if (sgn(sum) == 0) w[r][fresh[uniform(rng, 0, fresh.size() - 1)]] = 1;
  }
  static const Rational factors[] = {Rational(1, 2), Rational(1), Rational(2), Rational(3)};
  for (std::size_t x = 0; x < nx; ++x) {
    if (kind[x] != Kind::copy) continue;
    std::size_t src = fresh[uniform(rng, 0, fresh.size() - 1)];
    Rational f = factors[uniform(rng, 0, 3)];
    for (std::size_t r = 0; r < nt; ++r) w[r][x] = w[r][src] * f;
  }

  std::vector<Vector> rows;
  for (std::size_t r = 0; r < nt; ++r) {
    Rational sum = 0;
    for (const auto& v : w[r]) sum += v;
    Vector row;
    for (const auto& v : w[r]) row.emplace_back(Rational(v / sum));
    rows.push_back(std::move(row));
  }
  // Redundant parameters: some rows become mixtures of earlier rows.
  for (std::size_t r = 1; r < nt; ++r) {
    if (!chance(rng, 0.2)) continue;
    std::size_t i = uniform(rng, 0, r - 1), j = uniform(rng, 0, r - 1);
    Rational a(static_cast<long>(uniform(rng, 0, 4)), 4);
    a.canonicalize();
    Vector mixed;
    for (std::size_t x = 0; x < nx; ++x)
      mixed.emplace_back(Rational(a * rows[i][x].rational() + (1 - a) * rows[j][x].rational()));
    rows[r] = std::move(mixed);
  }
  return StatModel::with_default_labels(Matrix::from_rows(rows, Arithmetic::exact()));
}

std::vector<Scalar> random_level_map(std::mt19937_64& rng, std::size_t levels, Mode mode) {
  std::vector<Scalar> out;
  for (std::size_t i = 0; i < levels; ++i) {
    Rational q(static_cast<long>(uniform(rng, 0, 6)) - 3, static_cast<long>(uniform(rng, 1, 3)));
    q.canonicalize();
    out.push_back(Scalar(q).in_mode(mode));
  }
  return out;
}

std::vector<Statistic> random_statistics(std::mt19937_64& rng, const CleanModel& m, std::size_t count) {
  const std::size_t n = m.num_samples();
  const Mode mode = m.mode();
  auto part = sigma0(m);
  std::vector<Statistic> out;
  for (std::size_t k = 0; k < count; ++k) {
    Statistic t = Statistic::constant(n, Scalar::zero(mode));
    switch (k % 5) {
      case 0:  // arbitrary values in {0,1,2}
      case 3:
        for (auto& v : t.values) v = Scalar::from_int(static_cast<long>(uniform(rng, 0, 2)), mode);
        break;
      case 1: {  // constant on each sigma0 block
        auto vals = random_level_map(rng, part.blocks.size(), mode);
        for (std::size_t b = 0; b < part.blocks.size(); ++b)
          for (auto x : part.blocks[b]) t.values[x] = vals[b];
        break;
      }
      case 2: {  // constant on a random coarsening of sigma0
        std::size_t groups = uniform(rng, 1, std::max<std::size_t>(1, part.blocks.size()));
        auto vals = random_level_map(rng, groups, mode);
        for (const auto& block : part.blocks) {
          const Scalar& v = vals[uniform(rng, 0, groups - 1)];
          for (auto x : block) t.values[x] = v;
        }
        break;
      }
      default: {  // injective
        std::vector<long> perm(n);
        for (std::size_t x = 0; x < n; ++x) perm[x] = static_cast<long>(x);
        std::shuffle(perm.begin(), perm.end(), rng);
        for (std::size_t x = 0; x < n; ++x) t.values[x] = Scalar::from_int(perm[x], mode);
        break;
      }
    }
    out.push_back(std::move(t));
  }
  return out;
}

std::vector<PoolCase> random_pool(const PoolOptions& opts) {
  std::mt19937_64 rng(opts.seed);
  std::vector<PoolCase> pool;
  pool.reserve(opts.models);
  for (std::size_t i = 0; i < opts.models; ++i) {
    CleanModel cm = clean(random_model(rng, opts.max_samples, opts.max_thetas));
    auto stats = random_statistics(rng, cm, opts.statistics_per_model);
    pool.push_back({std::move(cm), std::move(stats)});
  }
  return pool;
}

bool SelftestReport::ok() const {
  return std::all_of(suites.begin(), suites.end(), [](const auto& s) { return s.failures == 0; });
}

namespace {

void fail(SuiteResult& s, const StatModel& m, const Statistic* t) {
  if (s.failures++ == 0) {
    s.counterexample = m;
    if (t) s.counterexample_statistic = *t;
  }
}

using StatCheck = std::function<bool(const CleanModel&, const Statistic&, std::mt19937_64&)>;
using ModelCheck = std::function<bool(const CleanModel&)>;

}  // namespace

SelftestReport run_selftest(const SelftestOptions& opts) {
  auto pool = random_pool(opts.pool);
  std::mt19937_64 rng(opts.pool.seed ^ 0x9e3779b97f4a7c15ULL);

  std::vector<std::pair<std::string, StatCheck>> stat_suites = {
      {"umvue-vs-oracle",
       [](const CleanModel& m, const Statistic& t, auto&) {
         return is_umvue(m, t).holds == is_umvue_oracle(m.base(), t).holds;
       }},
      {"umvue-vs-sigma0-measurability",
       [](const CleanModel& m, const Statistic& t, auto&) {
         return is_umvue(m, t).holds == constant_on_blocks(t, sigma0(m).blocks, m.arithmetic());
       }},
      {"sufficiency-vs-definition",
       [](const CleanModel& m, const Statistic& t, auto&) {
         return is_sufficient(m.base(), t).holds == check_sufficiency_definition(m.base(), t).holds;
       }},
      {"functions-of-umvue",
       [](const CleanModel& m, const Statistic& t, auto& g) {
         if (!is_umvue(m, t)) return true;
         auto levels = group_levels(t, m.arithmetic());
         for (int i = 0; i < 10; ++i)
           if (!is_umvue(m, compose(t, random_level_map(g, levels.size(), m.mode()), m.arithmetic()))) return false;
         return true;
       }},
      {"umvue-implies-complete",
       [](const CleanModel& m, const Statistic& t, auto&) {
         return !is_umvue(m, t) || is_complete(m.base(), t).holds;
       }},
      {"singleton-bases-umvue-iff-complete",
       [](const CleanModel& m, const Statistic& t, auto&) {
         auto d = decompose(m, t);
         bool singletons = std::all_of(d.levels.begin(), d.levels.end(), [](const Level& l) { return l.basis.size() <= 1; });
         return !singletons || is_umvue(m, t).holds == is_complete(m.base(), t).holds;
       }},
      {"certificate-round-trip",
       [](const CleanModel& m, const Statistic& t, auto&) {
         if (!is_umvue(m, t)) {
           try {
             certificate(m, t);
             return false;
           } catch (const NotUmvue&) {
             return true;
           }
         }
         return verify_certificate(m, certificate(m, t)).holds;
       }},
  };
  std::vector<std::pair<std::string, ModelCheck>> model_suites = {
      {"sigma0-vs-bruteforce",
       [cap = opts.bruteforce_cap](const CleanModel& m) {
         if (m.num_samples() > cap) return true;
         return atoms(sigma0_bruteforce(m, cap), m.num_samples()) == sigma0(m).blocks;
       }},
  };

  SelftestReport report;
  for (const auto& [name, check] : stat_suites) {
    SuiteResult s;
    s.name = name;
    for (const auto& c : pool)
      for (const auto& t : c.statistics) {
        ++s.cases;
        if (!check(c.model, t, rng)) fail(s, c.model.base(), &t);
      }
    report.suites.push_back(std::move(s));
  }
  for (const auto& [name, check] : model_suites) {
    SuiteResult s;
    s.name = name;
    for (const auto& c : pool) {
      ++s.cases;
      if (!check(c.model)) fail(s, c.model.base(), nullptr);
    }
    report.suites.push_back(std::move(s));
  }

  if (opts.counterexample_dir) {
    std::filesystem::create_directories(*opts.counterexample_dir);
    for (const auto& s : report.suites) {
      if (!s.counterexample) continue;
      io::write_json_file(*opts.counterexample_dir / (s.name + ".model.json"), io::model_to_json(*s.counterexample));
      if (s.counterexample_statistic) {
        io::json doc;
        doc["values"] = io::values_to_json(s.counterexample_statistic->values);
        io::write_json_file(*opts.counterexample_dir / (s.name + ".statistic.json"), doc);
      }
    }
  }
  return report;
}

}  // namespace umvue

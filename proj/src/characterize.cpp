#include "umvue/characterize.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <set>

namespace umvue {

namespace {

std::vector<Vector> pick_likelihoods(const CleanModel& m, const std::vector<std::size_t>& samples) {
  std::vector<Vector> out;
  out.reserve(samples.size());
  for (auto x : samples) out.push_back(m.likelihood(x));
  return out;
}

double product_threshold(const StatModel& m, const Vector& v) {
  if (m.mode() == Mode::exact) return 0.0;
  return m.arithmetic().tolerance * std::max(max_abs(v), 1e-300) * std::max(m.pmf.scale(), 1e-300);
}

Statistic indicator(std::uint64_t mask, std::size_t n, Mode mode) {
  Statistic t;
  for (std::size_t x = 0; x < n; ++x)
    t.values.push_back(((mask >> x) & 1U) ? Scalar::one(mode) : Scalar::zero(mode));
  return t;
}

Block mask_to_block(std::uint64_t mask, std::size_t n) {
  Block b;
  for (std::size_t x = 0; x < n; ++x)
    if ((mask >> x) & 1U) b.push_back(x);
  return b;
}

std::uint64_t block_to_mask(const Block& b) {
  std::uint64_t mask = 0;
  for (auto x : b) mask |= std::uint64_t{1} << x;
  return mask;
}

}  // namespace

std::vector<Level> group_levels(const Statistic& t, Arithmetic arith) {
  std::vector<std::size_t> order(t.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return t[a] < t[b]; });
  std::vector<Level> levels;
  for (std::size_t k = 0; k < order.size(); ++k) {
    std::size_t x = order[k];
    bool same = false;
    if (k > 0) {
      const Scalar& prev = t[order[k - 1]];
      same = arith.mode == Mode::exact ? t[x] == prev : std::abs(t[x].to_double() - prev.to_double()) <= arith.tolerance;
    }
    if (same) {
      levels.back().members.push_back(x);
    } else {
      levels.push_back(Level{t[x], {x}, {}});
    }
  }
  for (auto& l : levels) {
    std::sort(l.members.begin(), l.members.end());
    l.value = t[l.members.front()];
  }
  return levels;
}

LevelSetDecomposition decompose(const CleanModel& m, const Statistic& t) {
  require_aligned(m.base(), t);
  LevelSetDecomposition d;
  d.levels = group_levels(t, m.arithmetic());
  for (auto& level : d.levels) {
    auto kept = extract_basis(pick_likelihoods(m, level.members), m.arithmetic());
    for (auto k : kept) level.basis.push_back(level.members[k]);
  }
  return d;
}

Decision is_umvue(const CleanModel& m, const Statistic& t) {
  auto d = decompose(m, t);
  std::vector<std::size_t> samples;
  for (const auto& level : d.levels) samples.insert(samples.end(), level.basis.begin(), level.basis.end());
  auto vecs = pick_likelihoods(m, samples);
  if (is_independent(vecs, m.arithmetic())) return Decision::yes();
  std::vector<std::size_t> witness;
  for (auto i : find_circuit(vecs, m.arithmetic())) witness.push_back(samples[i]);
  std::sort(witness.begin(), witness.end());
  return Decision::no(std::move(witness));
}

Decision is_umvue_oracle(const StatModel& m, const Statistic& t) {
  require_aligned(m, t);
  for (const auto& h : e0_basis(m)) {
    Vector th = hadamard(t.values, h);
    Vector image = m.pmf.multiply(th);
    if (!is_zero_vector(image, product_threshold(m, th))) {
      std::vector<std::size_t> support;
      for (std::size_t x = 0; x < th.size(); ++x)
        if (!th[x].is_zero()) support.push_back(x);
      return Decision::no(std::move(support));
    }
  }
  return Decision::yes();
}

Decision is_complete(const StatModel& m, const Statistic& t) {
  require_aligned(m, t);
  auto mask = null_mask(m);
  std::vector<Vector> dists;
  std::vector<const Level*> owners;
  auto levels = group_levels(t, m.arithmetic());
  for (const auto& level : levels) {
    bool all_null = std::all_of(level.members.begin(), level.members.end(), [&](auto x) { return mask[x]; });
    if (all_null) continue;
    Vector mt(m.num_thetas(), Scalar::zero(m.mode()));
    for (auto x : level.members) mt = axpy(Scalar::one(m.mode()), m.pmf.column(x), mt);
    dists.push_back(std::move(mt));
    owners.push_back(&level);
  }
  if (is_independent(dists, m.arithmetic())) return Decision::yes();
  std::vector<std::size_t> witness;
  for (auto i : find_circuit(dists, m.arithmetic()))
    witness.insert(witness.end(), owners[i]->members.begin(), owners[i]->members.end());
  std::sort(witness.begin(), witness.end());
  return Decision::no(std::move(witness));
}

Decision is_sufficient(const StatModel& m, const Statistic& t) {
  require_aligned(m, t);
  for (const auto& level : group_levels(t, m.arithmetic())) {
    std::vector<Vector> liks;
    for (auto x : level.members) liks.push_back(m.pmf.column(x));
    if (span_dimension(liks, m.arithmetic()) > 1) return Decision::no(level.members);
  }
  return Decision::yes();
}

Decision check_sufficiency_definition(const StatModel& m, const Statistic& t) {
  require_aligned(m, t);
  const Mode mode = m.mode();
  const double thr = m.pmf.zero_threshold();
  for (const auto& level : group_levels(t, m.arithmetic())) {
    for (auto x : level.members) {
      std::optional<Scalar> reference;
      for (std::size_t th = 0; th < m.num_thetas(); ++th) {
        Scalar denom = Scalar::zero(mode);
        for (auto y : level.members) denom += m.pmf(th, y);
        if (denom.is_zero(thr)) continue;
        Scalar ratio = m.pmf(th, x) / denom;
        if (!reference) {
          reference = ratio;
        } else {
          Scalar diff = ratio - *reference;
          if (!diff.is_zero(mode == Mode::exact ? 0.0 : m.arithmetic().tolerance)) return Decision::no(level.members);
        }
      }
    }
  }
  return Decision::yes();
}

Sigma0Partition sigma0(const CleanModel& m) {
  const auto mask = null_mask(m.base());
  std::vector<Block> blocks;
  for (std::size_t x = 0; x < m.num_samples(); ++x)
    if (!mask[x]) blocks.push_back({x});

  for (;;) {
    std::vector<Vector> vecs;
    std::vector<std::size_t> owner;
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      auto liks = pick_likelihoods(m, blocks[b]);
      for (auto k : extract_basis(liks, m.arithmetic())) {
        vecs.push_back(liks[k]);
        owner.push_back(b);
      }
    }
    if (is_independent(vecs, m.arithmetic())) break;
    std::set<std::size_t> touched;
    for (auto i : find_circuit(vecs, m.arithmetic())) touched.insert(owner[i]);
    Block merged;
    std::vector<Block> rest;
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      if (touched.count(b))
        merged.insert(merged.end(), blocks[b].begin(), blocks[b].end());
      else
        rest.push_back(std::move(blocks[b]));
    }
    std::sort(merged.begin(), merged.end());
    rest.push_back(std::move(merged));
    blocks = std::move(rest);
  }

  for (std::size_t x = 0; x < m.num_samples(); ++x)
    if (mask[x]) blocks.push_back({x});
  std::sort(blocks.begin(), blocks.end(), [](const Block& a, const Block& b) { return a.front() < b.front(); });

  Sigma0Partition out;
  out.blocks = std::move(blocks);
  for (std::size_t b = 0; b < out.blocks.size(); ++b)
    if (out.blocks[b].size() == 1 && mask[out.blocks[b].front()]) out.null_singletons.push_back(b);
  return out;
}

std::vector<Block> sigma0_bruteforce(const CleanModel& m, std::size_t cap) {
  const std::size_t n = m.num_samples();
  if (n > cap || n >= 63)
    throw std::invalid_argument("sample space of size " + std::to_string(n) + " exceeds brute-force cap " +
                                std::to_string(cap));
  const std::uint64_t full = (std::uint64_t{1} << n) - 1;
  std::set<std::uint64_t> family;
  for (std::uint64_t mask = 0; mask <= full; ++mask)
    if (is_umvue(m, indicator(mask, n, m.mode()))) family.insert(mask);

  for (auto a : family) {
    if (!family.count(full & ~a)) throw std::logic_error("UMVUE events not closed under complement");
    for (auto b : family)
      if (!family.count(a | b)) throw std::logic_error("UMVUE events not closed under union");
  }
  std::vector<Block> out;
  for (auto mask : family) out.push_back(mask_to_block(mask, n));
  return out;
}

std::vector<Block> atoms(const std::vector<Block>& family, std::size_t n) {
  const std::uint64_t full = n == 0 ? 0 : ((std::uint64_t{1} << n) - 1);
  std::set<std::uint64_t> seen;
  std::vector<Block> out;
  for (std::size_t x = 0; x < n; ++x) {
    std::uint64_t atom = full;
    for (const auto& s : family) {
      std::uint64_t mask = block_to_mask(s);
      atom &= ((mask >> x) & 1U) ? mask : ~mask;
    }
    if (seen.insert(atom).second) out.push_back(mask_to_block(atom, n));
  }
  return out;
}

std::vector<Block> generated_family(const std::vector<Block>& blocks) {
  if (blocks.size() >= 63) throw std::invalid_argument("too many blocks to enumerate");
  std::set<std::uint64_t> masks;
  std::size_t n = 0;
  for (const auto& b : blocks)
    for (auto x : b) n = std::max(n, x + 1);
  for (std::uint64_t pick = 0; pick < (std::uint64_t{1} << blocks.size()); ++pick) {
    std::uint64_t mask = 0;
    for (std::size_t b = 0; b < blocks.size(); ++b)
      if ((pick >> b) & 1U) mask |= block_to_mask(blocks[b]);
    masks.insert(mask);
  }
  std::vector<Block> out;
  for (auto mask : masks) out.push_back(mask_to_block(mask, n));
  return out;
}

bool constant_on_blocks(const Statistic& t, const std::vector<Block>& blocks, Arithmetic arith) {
  for (const auto& b : blocks) {
    if (b.empty()) continue;
    for (auto x : b) {
      const Scalar& ref = t[b.front()];
      bool same = arith.mode == Mode::exact ? t[x] == ref : std::abs(t[x].to_double() - ref.to_double()) <= arith.tolerance;
      if (!same) return false;
    }
  }
  return true;
}

Certificate certificate(const CleanModel& m, const Statistic& t) {
  auto d = decompose(m, t);
  std::vector<Vector> basis;
  std::vector<Scalar> eigen;
  std::vector<std::size_t> samples;
  for (const auto& level : d.levels)
    for (auto x : level.basis) {
      basis.push_back(m.likelihood(x));
      eigen.push_back(level.value);
      samples.push_back(x);
    }
  const Arithmetic arith = m.arithmetic();
  if (!is_independent(basis, arith)) {
    std::vector<std::size_t> witness;
    for (auto i : find_circuit(basis, arith)) witness.push_back(samples[i]);
    std::sort(witness.begin(), witness.end());
    throw NotUmvue(std::move(witness));
  }

  const std::size_t k = m.theta0().size();
  std::vector<Vector> candidates = basis;
  for (std::size_t i = 0; i < k; ++i) {
    Vector e(k, Scalar::zero(arith.mode));
    e[i] = Scalar::one(arith.mode);
    candidates.push_back(std::move(e));
  }
  std::vector<Vector> columns;
  std::vector<Scalar> diag;
  for (auto idx : extract_basis(candidates, arith)) {
    columns.push_back(candidates[idx]);
    diag.push_back(idx < basis.size() ? eigen[idx] : Scalar::zero(arith.mode));
  }

  Matrix b = Matrix::from_columns(columns, k, arith);
  Matrix bd = b;
  for (std::size_t r = 0; r < k; ++r)
    for (std::size_t c = 0; c < k; ++c) bd.set(r, c, b(r, c) * diag[c]);
  Matrix lambda = bd.multiply(inverse(b));
  auto labels = m.theta0_labels();
  lambda.set_row_labels(labels);
  lambda.set_col_labels(labels);
  return Certificate{std::move(lambda), t};
}

Decision verify_certificate(const CleanModel& m, const Certificate& c) {
  const std::size_t k = m.theta0().size();
  if (c.lambda.rows() != k || c.lambda.cols() != k)
    throw std::invalid_argument("certificate is " + std::to_string(c.lambda.rows()) + "x" +
                                std::to_string(c.lambda.cols()) + ", expected " + std::to_string(k) + "x" +
                                std::to_string(k));
  require_aligned(m.base(), c.statistic);
  if (c.lambda.mode() != m.mode()) throw ModeMismatch();
  std::vector<std::size_t> failing;
  for (std::size_t x = 0; x < m.num_samples(); ++x) {
    Vector lik = m.likelihood(x);
    Vector residual = axpy(-c.statistic[x], lik, c.lambda.multiply(lik));
    double thr = 0.0;
    if (m.mode() == Mode::approx)
      thr = m.arithmetic().tolerance * (c.lambda.scale() * static_cast<double>(k) + std::abs(c.statistic[x].to_double()) + 1.0) *
            std::max(max_abs(lik), 1e-300);
    if (!is_zero_vector(residual, thr)) failing.push_back(x);
  }
  if (failing.empty()) return Decision::yes();
  return Decision::no(std::move(failing));
}

}  // namespace umvue

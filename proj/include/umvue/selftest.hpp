#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "umvue/model.hpp"

namespace umvue {

// Randomized small models for cross-checking the decision procedures.

struct PoolOptions {
  std::size_t models = 1000;
  std::size_t max_samples = 6;
  std::size_t max_thetas = 4;
  std::size_t statistics_per_model = 5;
  std::uint64_t seed = 20240611;
};

/// Exact model with nonnegative rational rows summing to 1. Columns are
/// occasionally zero or proportional to earlier columns and rows occasionally
/// mix earlier rows, so dependent likelihoods and redundant parameters occur.
StatModel random_model(std::mt19937_64& rng, std::size_t max_samples, std::size_t max_thetas);

/// A mix of arbitrary small-valued, constant, injective and block-constant statistics.
std::vector<Statistic> random_statistics(std::mt19937_64& rng, const CleanModel& m, std::size_t count);

/// Random values for each of `levels` levels, drawn from small rationals.
std::vector<Scalar> random_level_map(std::mt19937_64& rng, std::size_t levels, Mode mode);

struct PoolCase {
  CleanModel model;
  std::vector<Statistic> statistics;
};

std::vector<PoolCase> random_pool(const PoolOptions& opts);

struct SuiteResult {
  std::string name;
  std::size_t cases = 0;
  std::size_t failures = 0;
  std::optional<StatModel> counterexample;
  std::optional<Statistic> counterexample_statistic;
};

struct SelftestReport {
  std::vector<SuiteResult> suites;
  bool ok() const;
};

struct SelftestOptions {
  PoolOptions pool;
  std::size_t bruteforce_cap = 8;
  std::optional<std::filesystem::path> counterexample_dir;
};

/// Runs the equivalence and corollary suites over a random pool. Any failure
/// writes its first counterexample as a model file (plus statistic file) to
/// counterexample_dir when set.
SelftestReport run_selftest(const SelftestOptions& opts);

}  // namespace umvue

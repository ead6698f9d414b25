#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "umvue/model.hpp"

namespace umvue {

/// Result of a decision procedure. `witness` names the samples behind a "no"
/// (a dependent set of likelihoods, an offending level, ...) and is empty on "yes".
struct Decision {
  bool holds = true;
  std::vector<std::size_t> witness;

  explicit operator bool() const { return holds; }
  static Decision yes() { return {true, {}}; }
  static Decision no(std::vector<std::size_t> w = {}) { return {false, std::move(w)}; }
};

/// One level set {x : T(x) = value} with the greedy basis B_t of its likelihoods.
struct Level {
  Scalar value;
  std::vector<std::size_t> members;
  std::vector<std::size_t> basis;  // subset of members
};

struct LevelSetDecomposition {
  std::vector<Level> levels;  // ascending by value
};

using Block = std::vector<std::size_t>;

/// Atoms of the sigma-algebra of events whose indicator is a UMVUE.
struct Sigma0Partition {
  std::vector<Block> blocks;                  // sorted by smallest member
  std::vector<std::size_t> null_singletons;  // indices into `blocks`
};

/// Lambda over Theta0 with Lambda * l_x = T(x) * l_x for every sample x.
struct Certificate {
  Matrix lambda;
  Statistic statistic;
};

class NotUmvue : public std::invalid_argument {
 public:
  explicit NotUmvue(std::vector<std::size_t> witness)
      : std::invalid_argument("not a UMVUE"), witness_(std::move(witness)) {}
  const std::vector<std::size_t>& witness() const { return witness_; }

 private:
  std::vector<std::size_t> witness_;
};

/// Groups samples by value of T. Exact mode uses equality; approx mode chains
/// sorted values whose gaps are within the absolute tolerance.
std::vector<Level> group_levels(const Statistic& t, Arithmetic arith);

LevelSetDecomposition decompose(const CleanModel& m, const Statistic& t);

/// T is a UMVUE iff the union of the per-level bases is linearly independent.
/// On "no" the witness is a circuit of that union.
Decision is_umvue(const CleanModel& m, const Statistic& t);

/// Independent check: T is a UMVUE iff T*H is in E0 for every H in E0.
Decision is_umvue_oracle(const StatModel& m, const Statistic& t);

/// Complete iff the nonzero level distributions m_t = sum_{T(x)=t} l_x are independent.
Decision is_complete(const StatModel& m, const Statistic& t);

/// Sufficient iff the likelihoods on every level span dimension <= 1.
Decision is_sufficient(const StatModel& m, const Statistic& t);

/// Brute-force sufficiency from the definition: conditional probabilities given
/// the level must not depend on theta.
Decision check_sufficiency_definition(const StatModel& m, const Statistic& t);

/// Finest partition of the samples whose block-constant statistics are all UMVUEs.
Sigma0Partition sigma0(const CleanModel& m);

inline constexpr std::size_t kDefaultBruteforceCap = 16;

/// All events whose indicator passes is_umvue, by enumeration of 2^|X| subsets.
/// Each subset is a sorted list of sample indices; the family is sorted by bitmask.
std::vector<Block> sigma0_bruteforce(const CleanModel& m, std::size_t cap = kDefaultBruteforceCap);

/// Atoms of a finite family of subsets of {0..n-1} that is closed under complement and union.
std::vector<Block> atoms(const std::vector<Block>& family, std::size_t n);

/// Every union of blocks, sorted by bitmask (the generated sigma-algebra).
std::vector<Block> generated_family(const std::vector<Block>& blocks);

/// True iff t takes one value on each block (per group_levels equality).
bool constant_on_blocks(const Statistic& t, const std::vector<Block>& blocks, Arithmetic arith);

/// Matrix of the operator that scales each V_t by t and vanishes on a unit-vector
/// complement. Throws NotUmvue when no certificate exists.
Certificate certificate(const CleanModel& m, const Statistic& t);

/// Checks Lambda * l_x = T(x) * l_x for all x; witness lists failing samples.
Decision verify_certificate(const CleanModel& m, const Certificate& c);

}  // namespace umvue

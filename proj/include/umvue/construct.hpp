#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "umvue/characterize.hpp"
#include "umvue/model.hpp"

namespace umvue {

enum class ConstructionStatus { found, no_unbiased_estimator, no_umvue_exists };

const char* to_string(ConstructionStatus s);

struct ConstructionResult {
  ConstructionStatus status = ConstructionStatus::no_unbiased_estimator;
  std::optional<Statistic> statistic;
};

/// UMVUE of b, built constant on the blocks of sigma0 (zero on null samples).
ConstructionResult construct_umvue(const CleanModel& m, const ExpectationFn& b);

class NotSufficient : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// E(S | T) for a sufficient T. Levels with zero probability everywhere map to 0.
/// The conditional weights are recomputed at every parameter with positive level
/// mass and must agree; otherwise NotSufficient names the level and parameter pair.
Statistic conditional_expectation(const StatModel& m, const Statistic& s, const Statistic& t);

/// conditional_expectation plus a postcondition check: same expectation, and
/// variance not larger at any parameter. Throws std::logic_error if violated.
Statistic rao_blackwellize(const StatModel& m, const Statistic& s, const Statistic& t);

struct Proposition5Report {
  bool functions_are_umvue = false;    // every tested u(S) passes is_umvue
  bool blocks_match_levels = false;    // sigma0 blocks == S level sets off the null samples
  std::size_t functions_tested = 0;
  std::vector<Statistic> failing_functions;

  bool ok() const { return functions_are_umvue && blocks_match_levels; }
};

/// For a complete sufficient S: UMVUEs are exactly the functions of S. Checks the
/// "functions of S are UMVUEs" direction on `random_functions` random maps u
/// (plus identity and constants) and the converse through sigma0.
Proposition5Report check_proposition5(const CleanModel& m, const Statistic& s, std::size_t random_functions = 20,
                                      std::uint64_t seed = 42);

/// u o T for a map given by its values on the levels of T (ascending level order).
Statistic compose(const Statistic& t, const std::vector<Scalar>& level_values, Arithmetic arith);

}  // namespace umvue

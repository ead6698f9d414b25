#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "umvue/linalg.hpp"
#include "umvue/matrix.hpp"

namespace umvue {

/// A statistic: one value T(x) per sample, aligned with the model's sample labels.
struct Statistic {
  Vector values;

  std::size_t size() const { return values.size(); }
  const Scalar& operator[](std::size_t i) const { return values[i]; }
  bool operator==(const Statistic&) const = default;

  static Statistic exact(std::initializer_list<const char*> literals);
  static Statistic constant(std::size_t n, const Scalar& c);
};

/// An expectation function b(theta), aligned with the model's parameter labels.
struct ExpectationFn {
  Vector values;

  std::size_t size() const { return values.size(); }
  const Scalar& operator[](std::size_t i) const { return values[i]; }
  bool operator==(const ExpectationFn&) const = default;
};

/// Finite statistical model: row theta of `pmf` is the distribution P_theta on
/// the samples, column x is the likelihood function of sample x.
struct StatModel {
  std::vector<std::string> theta_labels;
  std::vector<std::string> sample_labels;
  Matrix pmf;

  const Arithmetic& arithmetic() const { return pmf.arithmetic(); }
  Mode mode() const { return pmf.mode(); }
  std::size_t num_thetas() const { return pmf.rows(); }
  std::size_t num_samples() const { return pmf.cols(); }

  /// Model with labels "1".."n" on both axes.
  static StatModel with_default_labels(Matrix pmf);
};

struct Violation {
  enum class Kind { negative_entry, row_sum, duplicate_label, empty_axis, label_count };
  Kind kind;
  std::string message;
};

class InvalidModel : public std::invalid_argument {
 public:
  explicit InvalidModel(std::vector<Violation> v);
  const std::vector<Violation>& violations() const { return violations_; }

 private:
  std::vector<Violation> violations_;
};

/// Every violated model invariant, in a stable order. Empty means valid.
std::vector<Violation> find_violations(const StatModel& m);

/// Returns the model unchanged, or throws InvalidModel listing every violation.
const StatModel& validate(const StatModel& m);

/// A model together with Theta0: the earliest rows forming a basis of the row space.
class CleanModel {
 public:
  const StatModel& base() const { return base_; }
  const std::vector<std::size_t>& theta0() const { return theta0_; }
  const Arithmetic& arithmetic() const { return base_.arithmetic(); }
  Mode mode() const { return base_.mode(); }
  std::size_t num_samples() const { return base_.num_samples(); }

  /// pmf restricted to the rows in Theta0.
  const Matrix& reduced_pmf() const { return reduced_; }
  /// Likelihood of sample x restricted to Theta0.
  Vector likelihood(std::size_t x) const;
  std::vector<std::string> theta0_labels() const;

 private:
  friend CleanModel clean(const StatModel& m);
  friend CleanModel clean(const CleanModel& m);
  StatModel base_;
  std::vector<std::size_t> theta0_;
  Matrix reduced_;
};

/// Parameter cleaning: keeps the earliest linearly independent pmf rows.
CleanModel clean(const StatModel& m);
/// Idempotent: recleaning yields the same Theta0.
CleanModel clean(const CleanModel& m);

Vector likelihood(const StatModel& m, std::size_t x);

/// Samples whose likelihood function vanishes on every parameter.
std::vector<std::size_t> null_samples(const StatModel& m);
std::vector<bool> null_mask(const StatModel& m);

/// Basis of E0 = {H : P H = 0}, the unbiased estimators of zero.
std::vector<Vector> e0_basis(const StatModel& m);

/// b(theta) = sum_x T(x) p_{theta,x}.
ExpectationFn expectation(const StatModel& m, const Statistic& t);
Scalar variance(const StatModel& m, const Statistic& t, std::size_t theta);

void require_aligned(const StatModel& m, const Statistic& t);

/// Same model with every entry converted to `mode` (labels and tolerance kept).
StatModel to_mode(const StatModel& m, Mode mode);

}  // namespace umvue

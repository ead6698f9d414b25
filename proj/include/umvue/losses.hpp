#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "umvue/characterize.hpp"
#include "umvue/model.hpp"

namespace umvue {

enum class LossKind { square, power4, exponential, custom_table };

/// A parameter-free convex loss lambda(t).
///
/// square is t^2, power4 is t^4 + t^2, exponential is e^t; all three are
/// differentiable and strictly convex. custom_table interpolates a finite set of
/// (t, lambda(t)) points piecewise linearly and extends the end segments.
class LossSpec {
 public:
  static LossSpec square() { return LossSpec(LossKind::square); }
  static LossSpec power4() { return LossSpec(LossKind::power4); }
  static LossSpec exponential() { return LossSpec(LossKind::exponential); }
  /// Throws std::invalid_argument unless the points have increasing t and nondecreasing slopes.
  static LossSpec table(std::vector<std::pair<Scalar, Scalar>> points);
  /// "square", "power4", "exponential", or "table:t1=v1,t2=v2,..." with rational literals.
  static LossSpec parse(const std::string& text);

  LossKind kind() const { return kind_; }
  std::string name() const;
  bool differentiable() const { return kind_ != LossKind::custom_table; }
  /// e^t has no exact rational values, so exponential evaluates in approx mode.
  Mode evaluation_mode(Mode model_mode) const {
    return kind_ == LossKind::exponential ? Mode::approx : model_mode;
  }

  Scalar value(const Scalar& t) const;
  /// Throws std::invalid_argument for custom tables.
  Scalar derivative(const Scalar& t) const;

  const std::vector<std::pair<Scalar, Scalar>>& points() const { return points_; }

 private:
  explicit LossSpec(LossKind k) : kind_(k) {}
  LossKind kind_;
  std::vector<std::pair<Scalar, Scalar>> points_;
};

/// E_theta lambda(T) = sum_x lambda(T(x)) p_{theta,x}.
Scalar risk(const StatModel& m, const Statistic& t, const LossSpec& loss, std::size_t theta);

struct UbueOptions {
  std::size_t directions = 100;
  Rational radius = 1;
  std::uint64_t seed = 42;
};

/// A sampled unbiased competitor S = T + step * d with d in E0.
struct Competitor {
  std::size_t direction = 0;
  Scalar step;
  std::vector<Scalar> risks;  // per theta
};

struct RiskReport {
  std::string loss;
  std::size_t directions = 0;
  Rational radius = 1;
  std::uint64_t seed = 42;
  bool arithmetic_downgraded = false;
  std::vector<Scalar> risk_t;  // per theta
  std::vector<Competitor> competitors;
  std::optional<Scalar> margin;  // min over competitors and theta of risk(S) - risk(T)
  std::optional<std::size_t> violation;  // index into competitors
  bool holds = true;
};

/// Sampled check that no unbiased competitor has lower risk at any theta.
///
/// Each direction d is a random combination of the E0 basis rescaled to sup-norm
/// `radius`; T +/- d are evaluated. For differentiable losses a nonzero
/// directional derivative at some theta triggers a halving line search toward
/// descent, so a "no" always comes with an explicit lower-risk competitor.
RiskReport check_ubue(const StatModel& m, const Statistic& t, const LossSpec& loss, const UbueOptions& opts = {});

/// (lambda' o T) * H lies in E0 for every basis vector H of E0.
Decision check_derivative_implication(const StatModel& m, const Statistic& t, const LossSpec& loss);

}  // namespace umvue

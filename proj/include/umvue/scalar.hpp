#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace umvue {

using Rational = mpq_class;

/// Arithmetic mode of a model and everything derived from it.
enum class Mode { exact, approx };

inline constexpr double kDefaultTolerance = 1e-9;

/// Mode plus the relative rank tolerance used in approx mode.
struct Arithmetic {
  Mode mode = Mode::exact;
  double tolerance = kDefaultTolerance;

  static Arithmetic exact() { return {Mode::exact, kDefaultTolerance}; }
  static Arithmetic approx(double tol = kDefaultTolerance) { return {Mode::approx, tol}; }

  bool operator==(const Arithmetic&) const = default;
};

class ModeMismatch : public std::invalid_argument {
 public:
  ModeMismatch() : std::invalid_argument("mixed arithmetic modes") {}
};

/// A field element: an exact rational or a double.
///
/// Binary operations require both operands to share a mode; mixing throws
/// ModeMismatch. Exact arithmetic is lossless.
class Scalar {
 public:
  Scalar() : value_(Rational(0)) {}
  Scalar(Rational q) : value_(std::move(q)) { std::get<Rational>(value_).canonicalize(); }  // NOLINT(google-explicit-constructor)
  Scalar(double d) : value_(d) {}                // NOLINT(google-explicit-constructor)

  static Scalar zero(Mode m) { return m == Mode::exact ? Scalar(Rational(0)) : Scalar(0.0); }
  static Scalar one(Mode m) { return m == Mode::exact ? Scalar(Rational(1)) : Scalar(1.0); }
  static Scalar from_int(long v, Mode m) {
    return m == Mode::exact ? Scalar(Rational(v)) : Scalar(static_cast<double>(v));
  }

  Mode mode() const { return value_.index() == 0 ? Mode::exact : Mode::approx; }
  bool is_exact() const { return mode() == Mode::exact; }

  const Rational& rational() const;
  double as_double() const { return std::get<double>(value_); }
  double to_double() const;

  /// Converts to the requested mode (exact -> approx rounds; approx -> exact is exact binary expansion).
  Scalar in_mode(Mode m) const;

  /// Exact sign test in exact mode; |v| <= abs_tol in approx mode.
  bool is_zero(double abs_tol = 0.0) const;
  int sign() const;
  Scalar abs() const;

  /// "a/b" (or "a" when b == 1) in exact mode; shortest round-trip decimal in approx mode.
  std::string to_string() const;

  Scalar& operator+=(const Scalar& o);
  Scalar& operator-=(const Scalar& o);
  Scalar& operator*=(const Scalar& o);
  Scalar& operator/=(const Scalar& o);
  Scalar operator-() const;

  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }

  /// Same-mode comparison; throws ModeMismatch otherwise.
  friend bool operator==(const Scalar& a, const Scalar& b);
  friend std::partial_ordering operator<=>(const Scalar& a, const Scalar& b);

 private:
  std::variant<Rational, double> value_;
};

using Vector = std::vector<Scalar>;

/// Parses "a/b" or "a" (decimal integers, b > 0) into an exact rational.
Rational parse_rational(std::string_view text);

/// Parses a comma-separated list of rational literals.
std::vector<Rational> parse_rational_list(std::string_view text);

std::string to_string(const Rational& q);

Vector to_mode(const Vector& v, Mode m);
Mode common_mode(const Vector& v, Mode fallback);
double max_abs(const Vector& v);

}  // namespace umvue

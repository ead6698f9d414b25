#include "umvue/scalar.hpp"

#include <charconv>
#include <cmath>

namespace umvue {

const Rational& Scalar::rational() const { return std::get<Rational>(value_); }

double Scalar::to_double() const {
  if (auto* q = std::get_if<Rational>(&value_)) return q->get_d();
  return std::get<double>(value_);
}

Scalar Scalar::in_mode(Mode m) const {
  if (m == mode()) return *this;
  if (m == Mode::approx) return Scalar(to_double());
  return Scalar(Rational(std::get<double>(value_)));
}

bool Scalar::is_zero(double abs_tol) const {
  if (auto* q = std::get_if<Rational>(&value_)) return sgn(*q) == 0;
  return std::abs(std::get<double>(value_)) <= abs_tol;
}

int Scalar::sign() const {
  if (auto* q = std::get_if<Rational>(&value_)) return sgn(*q);
  double d = std::get<double>(value_);
  return (d > 0) - (d < 0);
}

Scalar Scalar::abs() const { return sign() < 0 ? -*this : *this; }

std::string Scalar::to_string() const {
  if (auto* q = std::get_if<Rational>(&value_)) return umvue::to_string(*q);
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, std::get<double>(value_));
  return std::string(buf, res.ptr);
}

namespace {

template <class Op>
void combine(std::variant<Rational, double>& lhs, const std::variant<Rational, double>& rhs, Op op) {
  if (lhs.index() != rhs.index()) throw ModeMismatch();
  if (auto* q = std::get_if<Rational>(&lhs)) {
    *q = op(*q, std::get<Rational>(rhs));
  } else {
    auto& d = std::get<double>(lhs);
    d = op(d, std::get<double>(rhs));
  }
}

}  // namespace

Scalar& Scalar::operator+=(const Scalar& o) {
  combine(value_, o.value_, [](const auto& a, const auto& b) { return std::decay_t<decltype(a)>(a + b); });
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) {
  combine(value_, o.value_, [](const auto& a, const auto& b) { return std::decay_t<decltype(a)>(a - b); });
  return *this;
}

Scalar& Scalar::operator*=(const Scalar& o) {
  combine(value_, o.value_, [](const auto& a, const auto& b) { return std::decay_t<decltype(a)>(a * b); });
  return *this;
}

Scalar& Scalar::operator/=(const Scalar& o) {
  if (o.is_exact() && o.sign() == 0) throw std::domain_error("division by zero");
  combine(value_, o.value_, [](const auto& a, const auto& b) { return std::decay_t<decltype(a)>(a / b); });
  return *this;
}

Scalar Scalar::operator-() const {
  if (auto* q = std::get_if<Rational>(&value_)) return Scalar(Rational(-*q));
  return Scalar(-std::get<double>(value_));
}

bool operator==(const Scalar& a, const Scalar& b) {
  if (a.value_.index() != b.value_.index()) throw ModeMismatch();
  if (auto* q = std::get_if<Rational>(&a.value_)) return *q == std::get<Rational>(b.value_);
  return std::get<double>(a.value_) == std::get<double>(b.value_);
}

std::partial_ordering operator<=>(const Scalar& a, const Scalar& b) {
  if (a.value_.index() != b.value_.index()) throw ModeMismatch();
  if (auto* q = std::get_if<Rational>(&a.value_)) {
    int c = cmp(*q, std::get<Rational>(b.value_));
    return c < 0 ? std::partial_ordering::less
                 : (c > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent);
  }
  return std::get<double>(a.value_) <=> std::get<double>(b.value_);
}

namespace {

bool is_integer_literal(std::string_view s) {
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
  if (s.empty()) return false;
  for (char ch : s)
    if (ch < '0' || ch > '9') return false;
  return true;
}

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string t = trim(text);
  auto slash = t.find('/');
  std::string num = t.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : t.substr(slash + 1);
  if (num.starts_with('+')) num.erase(0, 1);
  if (!is_integer_literal(num) || !is_integer_literal(den) || den.starts_with('-') || den.starts_with('+'))
    throw std::invalid_argument("malformed rational literal '" + t + "'");
  mpz_class n(num, 10), d(den, 10);
  if (sgn(d) == 0) throw std::invalid_argument("zero denominator in '" + t + "'");
  Rational q(n, d);
  q.canonicalize();
  return q;
}

std::vector<Rational> parse_rational_list(std::string_view text) {
  std::vector<Rational> out;
  while (!text.empty()) {
    auto comma = text.find(',');
    out.push_back(parse_rational(text.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

std::string to_string(const Rational& value) {
  Rational q = value;
  q.canonicalize();
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Vector to_mode(const Vector& v, Mode m) {
  Vector out;
  out.reserve(v.size());
  for (const auto& s : v) out.push_back(s.in_mode(m));
  return out;
}

Mode common_mode(const Vector& v, Mode fallback) {
  if (v.empty()) return fallback;
  Mode m = v.front().mode();
  for (const auto& s : v)
    if (s.mode() != m) throw ModeMismatch();
  return m;
}

double max_abs(const Vector& v) {
  double best = 0.0;
  for (const auto& s : v) best = std::max(best, std::abs(s.to_double()));
  return best;
}

}  // namespace umvue

#include "umvue/losses.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace umvue {

namespace {

constexpr std::size_t kMaxHalvings = 60;
constexpr std::size_t kTableHalvings = 8;

Scalar slope(const std::pair<Scalar, Scalar>& a, const std::pair<Scalar, Scalar>& b) {
  return (b.second - a.second) / (b.first - a.first);
}

}  // namespace

LossSpec LossSpec::table(std::vector<std::pair<Scalar, Scalar>> points) {
  if (points.size() < 2) throw std::invalid_argument("loss table needs at least two points");
  for (std::size_t i = 1; i < points.size(); ++i)
    if (!(points[i - 1].first < points[i].first)) throw std::invalid_argument("loss table abscissae must increase");
  for (std::size_t i = 2; i < points.size(); ++i)
    if (slope(points[i - 2], points[i - 1]) > slope(points[i - 1], points[i]))
      throw std::invalid_argument("loss table is not convex");
  LossSpec s(LossKind::custom_table);
  s.points_ = std::move(points);
  return s;
}

LossSpec LossSpec::parse(const std::string& text) {
  if (text == "square") return square();
  if (text == "power4") return power4();
  if (text == "exponential") return exponential();
  if (text.starts_with("table:")) {
    std::vector<std::pair<Scalar, Scalar>> pts;
    std::string body = text.substr(6);
    std::size_t pos = 0;
    while (pos <= body.size()) {
      auto comma = body.find(',', pos);
      std::string item = body.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
      auto eq = item.find('=');
      if (eq == std::string::npos) throw std::invalid_argument("loss table entry '" + item + "' is not t=value");
      pts.emplace_back(Scalar(parse_rational(item.substr(0, eq))), Scalar(parse_rational(item.substr(eq + 1))));
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    return table(std::move(pts));
  }
  throw std::invalid_argument("unknown loss '" + text + "' (expected square, power4, exponential, table:...)");
}

std::string LossSpec::name() const {
  switch (kind_) {
    case LossKind::square:
      return "square";
    case LossKind::power4:
      return "power4";
    case LossKind::exponential:
      return "exponential";
    case LossKind::custom_table:
      return "table";
  }
  return "unknown";
}

Scalar LossSpec::value(const Scalar& t) const {
  switch (kind_) {
    case LossKind::square:
      return t * t;
    case LossKind::power4: {
      Scalar sq = t * t;
      return sq * sq + sq;
    }
    case LossKind::exponential:
      return Scalar(std::exp(t.to_double()));
    case LossKind::custom_table: {
      const Mode mode = t.mode();
      auto pt = [&](std::size_t i) {
        return std::pair{points_[i].first.in_mode(mode), points_[i].second.in_mode(mode)};
      };
      std::size_t seg = 0;
      while (seg + 2 < points_.size() && !(t < pt(seg + 1).first)) ++seg;
      auto a = pt(seg), b = pt(seg + 1);
      return a.second + slope(a, b) * (t - a.first);
    }
  }
  throw std::logic_error("unreachable loss kind");
}

Scalar LossSpec::derivative(const Scalar& t) const {
  const Mode mode = t.mode();
  switch (kind_) {
    case LossKind::square:
      return Scalar::from_int(2, mode) * t;
    case LossKind::power4:
      return Scalar::from_int(4, mode) * t * t * t + Scalar::from_int(2, mode) * t;
    case LossKind::exponential:
      return Scalar(std::exp(t.to_double()));
    case LossKind::custom_table:
      break;
  }
  throw std::invalid_argument("loss '" + name() + "' has no derivative");
}

Scalar risk(const StatModel& m, const Statistic& t, const LossSpec& loss, std::size_t theta) {
  require_aligned(m, t);
  if (theta >= m.num_thetas()) throw std::out_of_range("parameter index out of range");
  const Mode mode = loss.evaluation_mode(m.mode());
  Scalar acc = Scalar::zero(mode);
  for (std::size_t x = 0; x < m.num_samples(); ++x) {
    Scalar p = m.pmf(theta, x).in_mode(mode);
    if (p.is_zero()) continue;
    acc += loss.value(t[x].in_mode(mode)) * p;
  }
  return acc;
}

namespace {

struct Evaluator {
  const StatModel& model;  // already in evaluation mode
  const LossSpec& loss;
  double tolerance;

  std::vector<Scalar> risks(const Vector& values) const {
    Statistic s{values};
    std::vector<Scalar> out;
    for (std::size_t th = 0; th < model.num_thetas(); ++th) out.push_back(risk(model, s, loss, th));
    return out;
  }

  double slack(const Scalar& a, const Scalar& b) const {
    if (model.mode() == Mode::exact) return 0.0;
    return tolerance * std::max(std::abs(a.to_double()), std::abs(b.to_double()));
  }

  // risk(S) < risk(T) by more than the slack.
  bool lower(const Scalar& risk_s, const Scalar& risk_t) const {
    Scalar diff = risk_t - risk_s;
    return model.mode() == Mode::exact ? diff.sign() > 0 : diff.to_double() > slack(risk_s, risk_t);
  }
};

Vector random_direction(const std::vector<Vector>& basis, std::mt19937_64& rng, Mode mode, std::size_t n) {
  std::uniform_int_distribution<int> coef(-1000, 1000);
  for (int attempt = 0; attempt < 64; ++attempt) {
    Vector d(n, Scalar::zero(mode));
    for (const auto& h : basis) d = axpy(Scalar(Rational(coef(rng), 1000)).in_mode(mode), h, d);
    if (!is_zero_vector(d, 0.0)) return d;
  }
  return basis.front();
}

Scalar sup_norm(const Vector& v, Mode mode) {
  Scalar best = Scalar::zero(mode);
  for (const auto& x : v) {
    Scalar a = x.abs();
    if (a > best) best = a;
  }
  return best;
}

}  // namespace

RiskReport check_ubue(const StatModel& m, const Statistic& t, const LossSpec& loss, const UbueOptions& opts) {
  require_aligned(m, t);
  const Mode mode = loss.evaluation_mode(m.mode());
  RiskReport report;
  report.loss = loss.name();
  report.directions = opts.directions;
  report.radius = opts.radius;
  report.seed = opts.seed;
  report.arithmetic_downgraded = mode != m.mode();

  StatModel em = to_mode(m, mode);
  Vector tv = to_mode(t.values, mode);
  Evaluator eval{em, loss, m.arithmetic().tolerance};
  report.risk_t = eval.risks(tv);

  std::vector<Vector> basis;
  for (const auto& h : e0_basis(m)) basis.push_back(to_mode(h, mode));
  if (basis.empty()) return report;

  const Scalar radius = Scalar(opts.radius).in_mode(mode);
  std::mt19937_64 rng(opts.seed);

  auto record = [&](std::size_t dir, const Scalar& step, const Vector& d) {
    Vector s = axpy(step, d, tv);
    Competitor c{dir, step, eval.risks(s)};
    for (std::size_t th = 0; th < c.risks.size(); ++th) {
      Scalar gap = c.risks[th] - report.risk_t[th];
      if (!report.margin || gap < *report.margin) report.margin = gap;
      if (!report.violation && eval.lower(c.risks[th], report.risk_t[th])) {
        report.violation = report.competitors.size();
        report.holds = false;
      }
    }
    report.competitors.push_back(std::move(c));
  };

  for (std::size_t dir = 0; dir < opts.directions; ++dir) {
    Vector d = random_direction(basis, rng, mode, m.num_samples());
    d = scaled(radius / sup_norm(d, mode), d);
    record(dir, radius, d);
    record(dir, -radius, d);

    if (loss.differentiable()) {
      // Directional derivative of risk_theta(T + s d) at s = 0.
      for (std::size_t th = 0; th < em.num_thetas(); ++th) {
        Scalar slope = Scalar::zero(mode);
        double magnitude = 0.0;
        for (std::size_t x = 0; x < em.num_samples(); ++x) {
          Scalar term = loss.derivative(tv[x]) * d[x] * em.pmf(th, x);
          magnitude += std::abs(term.to_double());
          slope += term;
        }
        double thr = mode == Mode::exact ? 0.0 : m.arithmetic().tolerance * magnitude;
        if (slope.is_zero(thr)) continue;
        Scalar step = slope.sign() > 0 ? -radius : radius;
        const Scalar half = Scalar(Rational(1, 2)).in_mode(mode);
        for (std::size_t j = 0; j < kMaxHalvings; ++j) {
          step *= half;
          Vector s = axpy(step, d, tv);
          if (eval.lower(risk(em, Statistic{s}, loss, th), report.risk_t[th])) {
            record(dir, step, d);
            break;
          }
        }
        if (!report.holds) break;
      }
    } else {
      Scalar step = radius;
      const Scalar half = Scalar(Rational(1, 2)).in_mode(mode);
      for (std::size_t j = 0; j < kTableHalvings; ++j) {
        step *= half;
        record(dir, step, d);
        record(dir, -step, d);
      }
    }
  }
  return report;
}

Decision check_derivative_implication(const StatModel& m, const Statistic& t, const LossSpec& loss) {
  require_aligned(m, t);
  if (!loss.differentiable()) throw std::invalid_argument("loss '" + loss.name() + "' has no derivative");
  const Mode mode = loss.evaluation_mode(m.mode());
  StatModel em = to_mode(m, mode);
  Vector grad;
  for (const auto& v : t.values) grad.push_back(loss.derivative(v.in_mode(mode)));
  for (const auto& h : e0_basis(m)) {
    Vector v = hadamard(grad, to_mode(h, mode));
    double thr = mode == Mode::exact ? 0.0 : m.arithmetic().tolerance * max_abs(v) * std::max(em.pmf.scale(), 1.0);
    if (!is_zero_vector(em.pmf.multiply(v), thr)) {
      std::vector<std::size_t> support;
      for (std::size_t x = 0; x < v.size(); ++x)
        if (!v[x].is_zero()) support.push_back(x);
      return Decision::no(std::move(support));
    }
  }
  return Decision::yes();
}

}  // namespace umvue

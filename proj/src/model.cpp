#include "umvue/model.hpp"

#include <cmath>
#include <set>
#include <sstream>

namespace umvue {

Statistic Statistic::exact(std::initializer_list<const char*> literals) {
  Statistic t;
  for (const char* lit : literals) t.values.emplace_back(parse_rational(lit));
  return t;
}

Statistic Statistic::constant(std::size_t n, const Scalar& c) { return Statistic{Vector(n, c)}; }

StatModel StatModel::with_default_labels(Matrix pmf) {
  StatModel m;
  for (std::size_t i = 0; i < pmf.rows(); ++i) m.theta_labels.push_back(std::to_string(i + 1));
  for (std::size_t j = 0; j < pmf.cols(); ++j) m.sample_labels.push_back(std::to_string(j + 1));
  pmf.set_row_labels(m.theta_labels);
  pmf.set_col_labels(m.sample_labels);
  m.pmf = std::move(pmf);
  return m;
}

namespace {

std::string join_messages(const std::vector<Violation>& v) {
  std::string out = "invalid model:";
  for (const auto& x : v) out += " " + x.message + ";";
  return out;
}

void check_unique(const std::vector<std::string>& labels, const char* axis, std::vector<Violation>& out) {
  std::set<std::string> seen;
  for (const auto& l : labels)
    if (!seen.insert(l).second)
      out.push_back({Violation::Kind::duplicate_label, std::string("duplicate ") + axis + " label '" + l + "'"});
}

}  // namespace

InvalidModel::InvalidModel(std::vector<Violation> v)
    : std::invalid_argument(join_messages(v)), violations_(std::move(v)) {}

std::vector<Violation> find_violations(const StatModel& m) {
  std::vector<Violation> out;
  const Matrix& p = m.pmf;
  if (p.rows() == 0) out.push_back({Violation::Kind::empty_axis, "parameter set is empty"});
  if (p.cols() == 0) out.push_back({Violation::Kind::empty_axis, "sample set is empty"});
  if (m.theta_labels.size() != p.rows())
    out.push_back({Violation::Kind::label_count, "theta label count " + std::to_string(m.theta_labels.size()) +
                                                     " does not match " + std::to_string(p.rows()) + " pmf rows"});
  if (m.sample_labels.size() != p.cols())
    out.push_back({Violation::Kind::label_count, "sample label count " + std::to_string(m.sample_labels.size()) +
                                                     " does not match " + std::to_string(p.cols()) + " pmf columns"});
  check_unique(m.theta_labels, "theta", out);
  check_unique(m.sample_labels, "sample", out);

  auto row_name = [&](std::size_t r) {
    return r < m.theta_labels.size() ? "'" + m.theta_labels[r] + "'" : "#" + std::to_string(r + 1);
  };
  auto col_name = [&](std::size_t c) {
    return c < m.sample_labels.size() ? "'" + m.sample_labels[c] + "'" : "#" + std::to_string(c + 1);
  };

  const Mode mode = p.mode();
  for (std::size_t r = 0; r < p.rows(); ++r) {
    Scalar sum = Scalar::zero(mode);
    for (std::size_t c = 0; c < p.cols(); ++c) {
      if (p(r, c).sign() < 0)
        out.push_back({Violation::Kind::negative_entry,
                       "negative probability " + p(r, c).to_string() + " at theta " + row_name(r) + ", sample " +
                           col_name(c)});
      sum += p(r, c);
    }
    Scalar dev = sum - Scalar::one(mode);
    double slack = mode == Mode::exact ? 0.0 : p.arithmetic().tolerance * static_cast<double>(p.cols());
    if (p.cols() > 0 && !dev.is_zero(slack))
      out.push_back({Violation::Kind::row_sum, "row " + row_name(r) + " sums to " + sum.to_string() + ", not 1"});
  }
  return out;
}

const StatModel& validate(const StatModel& m) {
  auto v = find_violations(m);
  if (!v.empty()) throw InvalidModel(std::move(v));
  return m;
}

CleanModel clean(const StatModel& m) {
  CleanModel c;
  c.base_ = m;
  c.theta0_ = extract_basis(m.pmf.transpose());
  c.reduced_ = m.pmf.select_rows(c.theta0_);
  return c;
}

CleanModel clean(const CleanModel& m) { return m; }

Vector CleanModel::likelihood(std::size_t x) const {
  if (x >= reduced_.cols()) throw std::out_of_range("sample index out of range");
  return reduced_.column(x);
}

std::vector<std::string> CleanModel::theta0_labels() const {
  std::vector<std::string> out;
  for (auto i : theta0_) out.push_back(base_.theta_labels.at(i));
  return out;
}

Vector likelihood(const StatModel& m, std::size_t x) {
  if (x >= m.num_samples()) throw std::out_of_range("sample index out of range");
  return m.pmf.column(x);
}

std::vector<bool> null_mask(const StatModel& m) {
  const double thr = m.pmf.zero_threshold();
  std::vector<bool> mask(m.num_samples());
  for (std::size_t x = 0; x < m.num_samples(); ++x) mask[x] = is_zero_vector(m.pmf.column(x), thr);
  return mask;
}

std::vector<std::size_t> null_samples(const StatModel& m) {
  auto mask = null_mask(m);
  std::vector<std::size_t> out;
  for (std::size_t x = 0; x < mask.size(); ++x)
    if (mask[x]) out.push_back(x);
  return out;
}

std::vector<Vector> e0_basis(const StatModel& m) { return null_space_basis(m.pmf); }

void require_aligned(const StatModel& m, const Statistic& t) {
  if (t.size() != m.num_samples())
    throw std::invalid_argument("statistic has " + std::to_string(t.size()) + " values, model has " +
                                std::to_string(m.num_samples()) + " samples");
  for (const auto& v : t.values)
    if (v.mode() != m.mode()) throw ModeMismatch();
}

ExpectationFn expectation(const StatModel& m, const Statistic& t) {
  require_aligned(m, t);
  return ExpectationFn{m.pmf.multiply(t.values)};
}

Scalar variance(const StatModel& m, const Statistic& t, std::size_t theta) {
  require_aligned(m, t);
  if (theta >= m.num_thetas()) throw std::out_of_range("parameter index out of range");
  const Mode mode = m.mode();
  Scalar first = Scalar::zero(mode), second = Scalar::zero(mode);
  for (std::size_t x = 0; x < m.num_samples(); ++x) {
    Scalar w = t[x] * m.pmf(theta, x);
    first += w;
    second += w * t[x];
  }
  return second - first * first;
}

StatModel to_mode(const StatModel& m, Mode mode) {
  if (m.mode() == mode) return m;
  StatModel out = m;
  Arithmetic arith = m.arithmetic();
  arith.mode = mode;
  Matrix p(m.pmf.rows(), m.pmf.cols(), arith);
  for (std::size_t r = 0; r < p.rows(); ++r)
    for (std::size_t c = 0; c < p.cols(); ++c) p.set(r, c, m.pmf(r, c).in_mode(mode));
  p.set_row_labels(m.pmf.row_labels());
  p.set_col_labels(m.pmf.col_labels());
  out.pmf = std::move(p);
  return out;
}

}  // namespace umvue

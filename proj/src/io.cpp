#include "umvue/io.hpp"

#include <fstream>
#include <map>

namespace umvue::io {

namespace {

const json& require(const json& doc, const char* key) {
  if (!doc.is_object()) throw FormatError("expected a JSON object");
  auto it = doc.find(key);
  if (it == doc.end()) throw FormatError(std::string("missing field '") + key + "'");
  return *it;
}

std::vector<std::string> string_list(const json& doc, const char* key) {
  const json& arr = require(doc, key);
  if (!arr.is_array()) throw FormatError(std::string(key) + ": expected an array");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    if (!arr[i].is_string()) throw FormatError(std::string(key) + "[" + std::to_string(i) + "]: expected a string");
    out.push_back(arr[i].get<std::string>());
  }
  return out;
}

}  // namespace

Scalar scalar_from_json(const json& v, Mode mode, const std::string& where) {
  if (mode == Mode::exact) {
    if (v.is_string()) {
      try {
        return Scalar(parse_rational(v.get<std::string>()));
      } catch (const std::invalid_argument& e) {
        throw FormatError(where + ": " + e.what());
      }
    }
    if (v.is_number_integer()) return Scalar(Rational(v.get<long>()));
    throw FormatError(where + ": expected a rational string \"a/b\"");
  }
  if (!v.is_number()) throw FormatError(where + ": expected a number");
  return Scalar(v.get<double>());
}

json scalar_to_json(const Scalar& s) {
  if (s.is_exact()) return s.to_string();
  return s.as_double();
}

StatModel model_from_json(const json& doc) {
  const json& arith_field = require(doc, "arithmetic");
  if (!arith_field.is_string()) throw FormatError("arithmetic: expected \"rational\" or \"float\"");
  std::string kind = arith_field.get<std::string>();
  Arithmetic arith;
  if (kind == "rational")
    arith = Arithmetic::exact();
  else if (kind == "float")
    arith = Arithmetic::approx();
  else
    throw FormatError("arithmetic: unknown mode '" + kind + "'");
  if (auto it = doc.find("tolerance"); it != doc.end() && !it->is_null()) {
    if (!it->is_number() || it->get<double>() < 0) throw FormatError("tolerance: expected a nonnegative number");
    arith.tolerance = it->get<double>();
  }

  StatModel m;
  m.theta_labels = string_list(doc, "theta_labels");
  m.sample_labels = string_list(doc, "sample_labels");
  const json& rows = require(doc, "pmf_rows");
  if (!rows.is_array()) throw FormatError("pmf_rows: expected an array of rows");
  if (rows.size() != m.theta_labels.size())
    throw FormatError("pmf_rows: " + std::to_string(rows.size()) + " rows for " +
                      std::to_string(m.theta_labels.size()) + " theta labels");
  Matrix p(rows.size(), m.sample_labels.size(), arith);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    std::string where = "pmf_rows[" + std::to_string(r) + "]";
    if (!rows[r].is_array()) throw FormatError(where + ": expected an array");
    if (rows[r].size() != m.sample_labels.size())
      throw FormatError(where + ": " + std::to_string(rows[r].size()) + " entries for " +
                        std::to_string(m.sample_labels.size()) + " sample labels");
    for (std::size_t c = 0; c < rows[r].size(); ++c)
      p.set(r, c, scalar_from_json(rows[r][c], arith.mode, where + "[" + std::to_string(c) + "]"));
  }
  p.set_row_labels(m.theta_labels);
  p.set_col_labels(m.sample_labels);
  m.pmf = std::move(p);
  return m;
}

json model_to_json(const StatModel& m) {
  json doc;
  doc["arithmetic"] = m.mode() == Mode::exact ? "rational" : "float";
  if (m.mode() == Mode::approx) doc["tolerance"] = m.arithmetic().tolerance;
  doc["theta_labels"] = m.theta_labels;
  doc["sample_labels"] = m.sample_labels;
  json rows = json::array();
  for (std::size_t r = 0; r < m.pmf.rows(); ++r) rows.push_back(values_to_json(m.pmf.row(r)));
  doc["pmf_rows"] = std::move(rows);
  return doc;
}

Vector values_from_json(const json& doc, Mode mode, std::size_t expected_size, const std::string& what) {
  const json& arr = require(doc, "values");
  if (!arr.is_array()) throw FormatError("values: expected an array");
  if (expected_size != 0 && arr.size() != expected_size)
    throw FormatError(what + ": " + std::to_string(arr.size()) + " values, expected " + std::to_string(expected_size));
  Vector out;
  for (std::size_t i = 0; i < arr.size(); ++i)
    out.push_back(scalar_from_json(arr[i], mode, "values[" + std::to_string(i) + "]"));
  return out;
}

json values_to_json(const Vector& values) {
  json arr = json::array();
  for (const auto& v : values) arr.push_back(scalar_to_json(v));
  return arr;
}

Statistic statistic_from_json(const json& doc, const StatModel& m) {
  return Statistic{values_from_json(doc, m.mode(), m.num_samples(), "statistic")};
}

ExpectationFn expectation_from_json(const json& doc, const StatModel& m) {
  return ExpectationFn{values_from_json(doc, m.mode(), m.num_thetas(), "expectation")};
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError(path.string() + ": cannot open file");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const json& doc) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path.string() + ": cannot write file");
  out << doc.dump(2) << '\n';
}

namespace {

template <class F>
auto with_path(const std::filesystem::path& path, F f) {
  try {
    return f(read_json_file(path));
  } catch (const FormatError& e) {
    std::string msg = e.what();
    if (msg.rfind(path.string(), 0) == 0) throw;
    throw FormatError(path.string() + ": " + msg);
  }
}

}  // namespace

StatModel load_model(const std::filesystem::path& path) {
  return with_path(path, [](const json& doc) { return model_from_json(doc); });
}

Statistic load_statistic(const std::filesystem::path& path, const StatModel& m) {
  return with_path(path, [&](const json& doc) { return statistic_from_json(doc, m); });
}

ExpectationFn load_expectation(const std::filesystem::path& path, const StatModel& m) {
  return with_path(path, [&](const json& doc) { return expectation_from_json(doc, m); });
}

std::vector<std::string> labels_of(const std::vector<std::size_t>& idx, const std::vector<std::string>& labels) {
  std::vector<std::string> out;
  for (auto i : idx) out.push_back(labels.at(i));
  return out;
}

std::vector<std::size_t> indices_of(const std::vector<std::string>& names, const std::vector<std::string>& labels) {
  std::map<std::string, std::size_t> pos;
  for (std::size_t i = 0; i < labels.size(); ++i) pos[labels[i]] = i;
  std::vector<std::size_t> out;
  for (const auto& n : names) {
    auto it = pos.find(n);
    if (it == pos.end()) throw FormatError("unknown label '" + n + "'");
    out.push_back(it->second);
  }
  return out;
}

json decision_report(const Decision& d, const StatModel& m) {
  json doc;
  doc["decision"] = d.holds ? "yes" : "no";
  if (!d.witness.empty()) doc["witness"] = labels_of(d.witness, m.sample_labels);
  return doc;
}

json sigma0_report(const Sigma0Partition& p, const StatModel& m) {
  json doc;
  doc["decision"] = "yes";
  json blocks = json::array();
  for (const auto& b : p.blocks) blocks.push_back(labels_of(b, m.sample_labels));
  doc["blocks"] = std::move(blocks);
  json nulls = json::array();
  for (auto i : p.null_singletons) nulls.push_back(m.sample_labels.at(p.blocks[i].front()));
  doc["null_samples"] = std::move(nulls);
  return doc;
}

std::vector<Block> blocks_from_report(const json& report, const StatModel& m) {
  const json& arr = require(report, "blocks");
  if (!arr.is_array()) throw FormatError("blocks: expected an array");
  std::vector<Block> out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    if (!arr[i].is_array()) throw FormatError("blocks[" + std::to_string(i) + "]: expected an array");
    out.push_back(indices_of(arr[i].get<std::vector<std::string>>(), m.sample_labels));
  }
  return out;
}

json certificate_report(const Certificate& c, const CleanModel& m) {
  json doc;
  doc["decision"] = "yes";
  doc["theta_labels"] = m.theta0_labels();
  json rows = json::array();
  for (std::size_t r = 0; r < c.lambda.rows(); ++r) rows.push_back(values_to_json(c.lambda.row(r)));
  doc["lambda"] = std::move(rows);
  doc["statistic"] = values_to_json(c.statistic.values);
  return doc;
}

Certificate certificate_from_report(const json& report, const CleanModel& m) {
  const Mode mode = m.mode();
  auto labels = string_list(report, "theta_labels");
  if (labels != m.theta0_labels()) throw FormatError("theta_labels: certificate was issued for another parameter basis");
  const json& rows = require(report, "lambda");
  if (!rows.is_array() || rows.size() != labels.size()) throw FormatError("lambda: expected a square matrix");
  Matrix lambda(labels.size(), labels.size(), m.arithmetic());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (!rows[r].is_array() || rows[r].size() != labels.size())
      throw FormatError("lambda[" + std::to_string(r) + "]: expected " + std::to_string(labels.size()) + " entries");
    for (std::size_t c = 0; c < labels.size(); ++c)
      lambda.set(r, c, scalar_from_json(rows[r][c], mode, "lambda[" + std::to_string(r) + "][" + std::to_string(c) + "]"));
  }
  lambda.set_row_labels(labels);
  lambda.set_col_labels(labels);
  json values;
  values["values"] = require(report, "statistic");
  return Certificate{std::move(lambda), Statistic{values_from_json(values, mode, m.num_samples(), "statistic")}};
}

json construction_report(const ConstructionResult& r) {
  json doc;
  doc["decision"] = r.status == ConstructionStatus::found ? "yes" : "no";
  doc["status"] = to_string(r.status);
  if (r.statistic) doc["values"] = values_to_json(r.statistic->values);
  return doc;
}

json risk_report(const RiskReport& r, const StatModel& m) {
  json doc;
  doc["decision"] = r.holds ? "yes" : "no";
  doc["loss"] = r.loss;
  doc["directions"] = r.directions;
  doc["radius"] = to_string(r.radius);
  doc["seed"] = r.seed;
  doc["arithmetic_downgraded"] = r.arithmetic_downgraded;
  json base = json::object();
  for (std::size_t th = 0; th < r.risk_t.size(); ++th) base[m.theta_labels.at(th)] = scalar_to_json(r.risk_t[th]);
  doc["risk"] = std::move(base);
  json comps = json::array();
  for (const auto& c : r.competitors) {
    json row;
    row["direction"] = c.direction;
    row["step"] = scalar_to_json(c.step);
    json risks = json::object();
    for (std::size_t th = 0; th < c.risks.size(); ++th) risks[m.theta_labels.at(th)] = scalar_to_json(c.risks[th]);
    row["risk"] = std::move(risks);
    comps.push_back(std::move(row));
  }
  doc["competitors"] = std::move(comps);
  if (r.margin) doc["margin"] = scalar_to_json(*r.margin);
  if (r.violation) doc["violation"] = *r.violation;
  return doc;
}

}  // namespace umvue::io

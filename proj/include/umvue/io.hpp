#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "umvue/characterize.hpp"
#include "umvue/construct.hpp"
#include "umvue/losses.hpp"
#include "umvue/model.hpp"

namespace umvue::io {

using nlohmann::json;

/// Malformed input; what() carries the JSON location (e.g. "pmf_rows[1][2]").
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Model file:
//   { "arithmetic": "rational" | "float", "tolerance": number (optional),
//     "theta_labels": [..], "sample_labels": [..], "pmf_rows": [[entry, ..], ..] }
// Entries are "a/b" strings in rational mode and numbers in float mode.
// Statistic and expectation files: { "values": [entry, ..] }.

StatModel model_from_json(const json& doc);
json model_to_json(const StatModel& m);

/// Values aligned to `expected_size` labels; an expected_size of 0 skips the length check.
Vector values_from_json(const json& doc, Mode mode, std::size_t expected_size, const std::string& what);
json values_to_json(const Vector& values);

Statistic statistic_from_json(const json& doc, const StatModel& m);
ExpectationFn expectation_from_json(const json& doc, const StatModel& m);

json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const json& doc);

StatModel load_model(const std::filesystem::path& path);
Statistic load_statistic(const std::filesystem::path& path, const StatModel& m);
ExpectationFn load_expectation(const std::filesystem::path& path, const StatModel& m);

json scalar_to_json(const Scalar& s);
Scalar scalar_from_json(const json& v, Mode mode, const std::string& where);

std::vector<std::string> labels_of(const std::vector<std::size_t>& idx, const std::vector<std::string>& labels);
std::vector<std::size_t> indices_of(const std::vector<std::string>& names, const std::vector<std::string>& labels);

// Reports: { "decision": "yes"|"no", "witness": [labels], "blocks": [[labels]] }.
json decision_report(const Decision& d, const StatModel& m);
json sigma0_report(const Sigma0Partition& p, const StatModel& m);
std::vector<Block> blocks_from_report(const json& report, const StatModel& m);
json certificate_report(const Certificate& c, const CleanModel& m);
Certificate certificate_from_report(const json& report, const CleanModel& m);
json construction_report(const ConstructionResult& r);
json risk_report(const RiskReport& r, const StatModel& m);

}  // namespace umvue::io

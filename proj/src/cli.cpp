#include "umvue/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <iostream>
#include <optional>

#include "umvue/characterize.hpp"
#include "umvue/construct.hpp"
#include "umvue/generators.hpp"
#include "umvue/io.hpp"
#include "umvue/losses.hpp"
#include "umvue/selftest.hpp"

namespace umvue::cli {

namespace {

using io::json;

struct Options {
  std::string model;
  std::string statistic;
  std::string target;
  std::string given;
  std::string loss = "square";
  std::string which;
  std::string family;
  std::string grid;
  std::string c = "2";
  std::string radius = "1";
  std::string output;
  std::string statistic_output;
  std::string verify;
  std::string counterexample_dir;
  std::size_t n = 1;
  std::size_t directions = 100;
  std::uint64_t seed = 42;
  std::size_t cap = kDefaultBruteforceCap;
  std::size_t models = 1000;
  std::size_t max_samples = 6;
  std::size_t max_thetas = 4;
  std::size_t stats = 5;
  bool json_output = false;
  bool bruteforce = false;
  bool derivative = false;
};

std::string join(const std::vector<std::string>& items, const char* sep = ", ") {
  std::string out;
  for (const auto& s : items) out += (out.empty() ? "" : sep) + s;
  return out;
}

std::string brace(const std::vector<std::string>& items) { return "{" + join(items) + "}"; }

class Runner {
 public:
  Runner(const Options& o, std::ostream& out) : o_(o), out_(out) {}

  StatModel model() const {
    if (o_.model.empty()) throw CLI::ValidationError("--model", "a model file is required");
    return validate(io::load_model(o_.model));
  }

  Statistic statistic(const StatModel& m, const std::string& path, const char* flag) const {
    if (path.empty()) throw CLI::ValidationError(flag, "a statistic file is required");
    return io::load_statistic(path, m);
  }

  void emit(const json& doc, const std::string& text) const {
    if (o_.json_output)
      out_ << doc.dump(2) << '\n';
    else
      out_ << text << '\n';
  }

  int decision(const char* what, const Decision& d, const StatModel& m, const char* witness_kind) const {
    std::string text = std::string(what) + ": " + (d.holds ? "yes" : "no");
    if (!d.holds && !d.witness.empty())
      text += " (" + std::string(witness_kind) + " " + brace(io::labels_of(d.witness, m.sample_labels)) + ")";
    emit(io::decision_report(d, m), text);
    return d.holds ? kExitYes : kExitNo;
  }

  void write_or_print(const json& doc, const std::string& path) const {
    if (path.empty())
      out_ << doc.dump(2) << '\n';
    else
      io::write_json_file(path, doc);
  }

  int validate_cmd() const {
    auto m = io::load_model(o_.model);
    auto violations = find_violations(m);
    json doc;
    doc["decision"] = violations.empty() ? "yes" : "no";
    json list = json::array();
    for (const auto& v : violations) list.push_back(v.message);
    doc["violations"] = list;
    std::string text = violations.empty() ? "valid model: " + std::to_string(m.num_thetas()) + " parameters, " +
                                                std::to_string(m.num_samples()) + " samples"
                                          : "invalid model:\n  " + [&] {
                                              std::vector<std::string> msgs;
                                              for (const auto& v : violations) msgs.push_back(v.message);
                                              return join(msgs, "\n  ");
                                            }();
    emit(doc, text);
    return violations.empty() ? kExitYes : kExitUsage;
  }

  int check_umvue() const {
    auto m = model();
    auto t = statistic(m, o_.statistic, "--statistic");
    return decision("UMVUE", is_umvue(clean(m), t), m, "dependent likelihoods on samples");
  }

  int oracle() const {
    auto m = model();
    auto t = statistic(m, o_.statistic, "--statistic");
    return decision("UMVUE (E0 product test)", is_umvue_oracle(m, t), m, "T*H leaves E0; support");
  }

  int complete() const {
    auto m = model();
    auto t = statistic(m, o_.statistic, "--statistic");
    return decision("complete", is_complete(m, t), m, "dependent level distributions on samples");
  }

  int sufficient() const {
    auto m = model();
    auto t = statistic(m, o_.statistic, "--statistic");
    return decision("sufficient", is_sufficient(m, t), m, "level with non-proportional likelihoods");
  }

  int sigma0_cmd() const {
    auto m = model();
    auto cm = clean(m);
    auto part = sigma0(cm);
    json doc = io::sigma0_report(part, m);
    std::vector<std::string> blocks;
    for (const auto& b : part.blocks) blocks.push_back(brace(io::labels_of(b, m.sample_labels)));
    std::string text = "sigma0 atoms: " + join(blocks);
    if (o_.bruteforce) {
      auto family = sigma0_bruteforce(cm, o_.cap);
      bool agree = atoms(family, m.num_samples()) == part.blocks;
      json events = json::array();
      for (const auto& e : family) events.push_back(io::labels_of(e, m.sample_labels));
      doc["events"] = events;
      doc["bruteforce_agrees"] = agree;
      text += "\nenumerated " + std::to_string(family.size()) + " UMVUE events; atoms " +
              (agree ? "agree" : "DISAGREE");
      if (!agree) {
        doc["decision"] = "no";
        emit(doc, text);
        return kExitNo;
      }
    }
    emit(doc, text);
    return kExitYes;
  }

  int construct_cmd() const {
    auto m = model();
    if (o_.target.empty()) throw CLI::ValidationError("--target", "an expectation file is required");
    auto b = io::load_expectation(o_.target, m);
    auto res = construct_umvue(clean(m), b);
    json doc = io::construction_report(res);
    std::string text = std::string("construction: ") + to_string(res.status);
    if (res.statistic) {
      std::vector<std::string> vals;
      for (const auto& v : res.statistic->values) vals.push_back(v.to_string());
      text += "\nvalues: [" + join(vals) + "]";
      if (!o_.output.empty()) {
        json stat;
        stat["values"] = io::values_to_json(res.statistic->values);
        io::write_json_file(o_.output, stat);
      }
    }
    emit(doc, text);
    return res.status == ConstructionStatus::found ? kExitYes : kExitNo;
  }

  int certificate_cmd() const {
    auto m = model();
    auto cm = clean(m);
    if (!o_.verify.empty()) {
      auto cert = io::certificate_from_report(io::read_json_file(o_.verify), cm);
      return decision("certificate valid", verify_certificate(cm, cert), m, "eigen-equation fails on samples");
    }
    auto t = statistic(m, o_.statistic, "--statistic");
    try {
      auto cert = certificate(cm, t);
      json doc = io::certificate_report(cert, cm);
      if (!o_.output.empty()) io::write_json_file(o_.output, doc);
      std::string text = "certificate over theta0 " + brace(cm.theta0_labels()) + ":";
      for (std::size_t r = 0; r < cert.lambda.rows(); ++r) {
        std::vector<std::string> row;
        for (const auto& v : cert.lambda.row(r)) row.push_back(v.to_string());
        text += "\n  [" + join(row) + "]";
      }
      emit(doc, text);
      return kExitYes;
    } catch (const NotUmvue& e) {
      Decision d = Decision::no(e.witness());
      std::string text = "no certificate: not a UMVUE (dependent likelihoods on samples " +
                         brace(io::labels_of(e.witness(), m.sample_labels)) + ")";
      emit(io::decision_report(d, m), text);
      return kExitNo;
    }
  }

  int rao_blackwell() const {
    auto m = model();
    auto s = statistic(m, o_.statistic, "--statistic");
    auto t = statistic(m, o_.given, "--given");
    try {
      auto result = rao_blackwellize(m, s, t);
      json doc;
      doc["decision"] = "yes";
      doc["values"] = io::values_to_json(result.values);
      json vars = json::object();
      for (std::size_t th = 0; th < m.num_thetas(); ++th)
        vars[m.theta_labels[th]] = {{"before", io::scalar_to_json(variance(m, s, th))},
                                    {"after", io::scalar_to_json(variance(m, result, th))}};
      doc["variance"] = vars;
      if (!o_.output.empty()) {
        json stat;
        stat["values"] = doc["values"];
        io::write_json_file(o_.output, stat);
      }
      std::vector<std::string> vals;
      for (const auto& v : result.values) vals.push_back(v.to_string());
      emit(doc, "E(S|T) = [" + join(vals) + "]");
      return kExitYes;
    } catch (const NotSufficient& e) {
      json doc;
      doc["decision"] = "no";
      doc["error"] = e.what();
      emit(doc, e.what());
      return kExitNo;
    }
  }

  int ubue() const {
    auto m = model();
    auto t = statistic(m, o_.statistic, "--statistic");
    auto loss = LossSpec::parse(o_.loss);
    if (o_.derivative)
      return decision(("derivative implication (" + loss.name() + ")").c_str(),
                      check_derivative_implication(m, t, loss), m, "(lambda' o T)*H leaves E0; support");
    UbueOptions opts{o_.directions, parse_rational(o_.radius), o_.seed};
    auto report = check_ubue(m, t, loss, opts);
    std::string text = loss.name() + "-loss best unbiased: " + (report.holds ? "yes" : "no") + " (" +
                       std::to_string(report.competitors.size()) + " competitors, " + std::to_string(opts.directions) +
                       " directions, seed " + std::to_string(opts.seed) + ")";
    if (report.margin) text += "\nmargin: " + report.margin->to_string();
    if (report.arithmetic_downgraded) text += "\nnote: evaluated in floating point";
    emit(io::risk_report(report, m), text);
    return report.holds ? kExitYes : kExitNo;
  }

  int gen() const {
    StatModel m;
    std::optional<Statistic> total;
    if (!o_.which.empty()) {
      if (o_.which == "P1")
        m = example1(Example1::p1);
      else if (o_.which == "P2")
        m = example1(Example1::p2);
      else
        throw CLI::ValidationError("--which", "expected P1 or P2");
    } else if (o_.family == "bernoulli" || o_.family == "beta-bernoulli") {
      auto grid = parse_rational_list(o_.grid);
      GeneratedModel g = o_.family == "bernoulli" ? bernoulli({o_.n, grid})
                                                  : beta_bernoulli({o_.n, parse_rational(o_.c), grid});
      m = std::move(g.model);
      total = std::move(g.total);
    } else {
      throw CLI::ValidationError("gen", "give --which P1|P2 or --family bernoulli|beta-bernoulli");
    }
    write_or_print(io::model_to_json(m), o_.output);
    if (total && !o_.statistic_output.empty()) {
      json stat;
      stat["values"] = io::values_to_json(total->values);
      io::write_json_file(o_.statistic_output, stat);
    }
    return kExitYes;
  }

  int selftest() const {
    SelftestOptions opts;
    opts.pool = {o_.models, o_.max_samples, o_.max_thetas, o_.stats, o_.seed};
    opts.bruteforce_cap = std::min<std::size_t>(o_.cap, 12);
    if (!o_.counterexample_dir.empty()) opts.counterexample_dir = o_.counterexample_dir;
    auto report = run_selftest(opts);
    json doc;
    doc["decision"] = report.ok() ? "yes" : "no";
    json suites = json::array();
    std::string text;
    for (const auto& s : report.suites) {
      json row = {{"name", s.name}, {"cases", s.cases}, {"failures", s.failures}};
      if (s.counterexample) row["counterexample"] = io::model_to_json(*s.counterexample);
      if (s.counterexample_statistic) row["statistic"] = io::values_to_json(s.counterexample_statistic->values);
      suites.push_back(row);
      text += (s.failures == 0 ? "PASS " : "FAIL ") + s.name + ": " + std::to_string(s.cases) + " cases, " +
              std::to_string(s.failures) + " failures\n";
      if (s.counterexample) text += "  counterexample: " + io::model_to_json(*s.counterexample).dump() + "\n";
    }
    doc["suites"] = suites;
    if (!text.empty()) text.pop_back();
    emit(doc, text);
    return report.ok() ? kExitYes : kExitNo;
  }

 private:
  const Options& o_;
  std::ostream& out_;
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Decide UMVUE, sufficiency and completeness questions for finite statistical models"};
  app.name("umvue");
  app.require_subcommand(1);

  auto add_model = [&](CLI::App* sub) { sub->add_option("--model", o.model, "model file (JSON)"); };
  auto add_stat = [&](CLI::App* sub) { sub->add_option("--statistic", o.statistic, "statistic file (JSON)"); };
  auto add_json = [&](CLI::App* sub) { sub->add_flag("--json", o.json_output, "emit a JSON report"); };

  auto* validate_sub = app.add_subcommand("validate", "check model invariants");
  add_model(validate_sub);
  add_json(validate_sub);
  std::vector<std::pair<CLI::App*, int (Runner::*)() const>> dispatch = {{validate_sub, &Runner::validate_cmd}};

  auto stat_command = [&](const char* name, const char* help, int (Runner::*fn)() const) {
    auto* sub = app.add_subcommand(name, help);
    add_model(sub);
    add_stat(sub);
    add_json(sub);
    dispatch.emplace_back(sub, fn);
    return sub;
  };
  stat_command("check-umvue", "is the statistic a UMVUE (basis independence test)", &Runner::check_umvue);
  stat_command("oracle", "is the statistic a UMVUE (E0 product test)", &Runner::oracle);
  stat_command("complete", "is the statistic complete", &Runner::complete);
  stat_command("sufficient", "is the statistic sufficient", &Runner::sufficient);

  auto* sigma_sub = app.add_subcommand("sigma0", "atoms of the sigma-algebra of UMVUE events");
  add_model(sigma_sub);
  add_json(sigma_sub);
  sigma_sub->add_flag("--bruteforce", o.bruteforce, "cross-check by enumerating all events");
  sigma_sub->add_option("--cap", o.cap, "largest sample space to enumerate");
  dispatch.emplace_back(sigma_sub, &Runner::sigma0_cmd);

  auto* construct_sub = app.add_subcommand("construct", "build the UMVUE of a target expectation function");
  add_model(construct_sub);
  add_json(construct_sub);
  construct_sub->add_option("--target", o.target, "expectation file (JSON)");
  construct_sub->add_option("--output", o.output, "write the statistic here");
  dispatch.emplace_back(construct_sub, &Runner::construct_cmd);

  auto* cert_sub = stat_command("certificate", "eigen-certificate for a UMVUE", &Runner::certificate_cmd);
  cert_sub->add_option("--output", o.output, "write the certificate report here");
  cert_sub->add_option("--verify", o.verify, "re-verify a saved certificate report");

  auto* rb_sub = stat_command("rao-blackwell", "conditional expectation of a statistic given a sufficient one",
                              &Runner::rao_blackwell);
  rb_sub->add_option("--given", o.given, "sufficient statistic file (JSON)");
  rb_sub->add_option("--output", o.output, "write the result here");

  auto* ubue_sub = stat_command("ubue", "sampled best-unbiased check for a convex loss", &Runner::ubue);
  ubue_sub->add_option("--loss", o.loss, "square | power4 | exponential | table:t=v,...");
  ubue_sub->add_option("--directions", o.directions, "number of random E0 directions");
  ubue_sub->add_option("--radius", o.radius, "sup-norm of each direction (rational)");
  ubue_sub->add_option("--seed", o.seed, "random seed");
  ubue_sub->add_flag("--derivative", o.derivative, "check the derivative implication instead of sampling");

  auto* gen_sub = app.add_subcommand("gen", "emit an example model file");
  gen_sub->add_option("--which", o.which, "P1 | P2");
  gen_sub->add_option("--family", o.family, "bernoulli | beta-bernoulli");
  gen_sub->add_option("--n", o.n, "number of trials");
  gen_sub->add_option("--c", o.c, "Beta-Bernoulli concentration (rational)");
  gen_sub->add_option("--grid", o.grid, "parameter grid a/b,c/d,...");
  gen_sub->add_option("--output", o.output, "model file to write (default stdout)");
  gen_sub->add_option("--statistic-output", o.statistic_output, "write the success-count statistic here");
  dispatch.emplace_back(gen_sub, &Runner::gen);

  auto* self_sub = app.add_subcommand("selftest", "randomized cross-checks of the decision procedures");
  add_json(self_sub);
  self_sub->add_option("--models", o.models, "number of random models");
  self_sub->add_option("--max-samples", o.max_samples, "largest sample space");
  self_sub->add_option("--max-thetas", o.max_thetas, "largest parameter set");
  self_sub->add_option("--statistics", o.stats, "statistics per model");
  self_sub->add_option("--seed", o.seed, "random seed");
  self_sub->add_option("--cap", o.cap, "largest sample space for the enumeration oracle");
  self_sub->add_option("--counterexample-dir", o.counterexample_dir, "write failing models here");
  dispatch.emplace_back(self_sub, &Runner::selftest);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitYes;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitYes;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  Runner runner(o, out);
  try {
    for (const auto& [sub, fn] : dispatch)
      if (sub->parsed()) return (runner.*fn)();
  } catch (const CLI::Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  err << "error: no command\n";
  return kExitUsage;
}

}  // namespace umvue::cli

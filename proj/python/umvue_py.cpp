#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "umvue/characterize.hpp"
#include "umvue/construct.hpp"
#include "umvue/generators.hpp"
#include "umvue/io.hpp"
#include "umvue/losses.hpp"

namespace py = pybind11;
using namespace umvue;

namespace {

// Python values: int, fractions.Fraction, "a/b" strings (exact) or float (approx).
Scalar to_scalar(const py::handle& v, Mode mode) {
  if (py::isinstance<py::str>(v)) return Scalar(parse_rational(v.cast<std::string>())).in_mode(mode);
  if (py::isinstance<py::float_>(v)) {
    if (mode == Mode::exact) throw py::type_error("float value in an exact model; use Fraction or a string");
    return Scalar(v.cast<double>());
  }
  if (py::hasattr(v, "numerator") && py::hasattr(v, "denominator")) {
    Rational q(py::str(v.attr("numerator")).cast<std::string>() + "/" +
               py::str(v.attr("denominator")).cast<std::string>());
    return Scalar(q).in_mode(mode);
  }
  throw py::type_error("expected int, Fraction, str or float");
}

py::object to_python(const Scalar& s) {
  if (!s.is_exact()) return py::float_(s.as_double());
  static py::object fraction = py::module_::import("fractions").attr("Fraction");
  return fraction(s.to_string());
}

Vector to_vector(const py::iterable& values, Mode mode) {
  Vector out;
  for (auto v : values) out.push_back(to_scalar(v, mode));
  return out;
}

py::list to_list(const Vector& v) {
  py::list out;
  for (const auto& s : v) out.append(to_python(s));
  return out;
}

Statistic statistic(const StatModel& m, const py::iterable& values) {
  Statistic t{to_vector(values, m.mode())};
  require_aligned(m, t);
  return t;
}

StatModel model_from_rows(const py::sequence& rows, std::optional<std::vector<std::string>> theta_labels,
                          std::optional<std::vector<std::string>> sample_labels, bool approx) {
  Mode mode = Mode::exact;
  for (auto row : rows)
    for (auto v : row) approx = approx || py::isinstance<py::float_>(v);
  if (approx) mode = Mode::approx;
  std::vector<Vector> data;
  for (auto row : rows) data.push_back(to_vector(row.cast<py::iterable>(), mode));
  Arithmetic arith = approx ? Arithmetic::approx() : Arithmetic::exact();
  auto m = StatModel::with_default_labels(Matrix::from_rows(data, arith));
  if (theta_labels) m.theta_labels = *theta_labels;
  if (sample_labels) m.sample_labels = *sample_labels;
  return validate(m);
}

py::dict decision(const Decision& d, const StatModel& m) {
  py::dict out;
  out["holds"] = d.holds;
  out["witness"] = io::labels_of(d.witness, m.sample_labels);
  return out;
}

std::vector<std::vector<std::string>> labelled(const std::vector<Block>& blocks, const StatModel& m) {
  std::vector<std::vector<std::string>> out;
  for (const auto& b : blocks) out.push_back(io::labels_of(b, m.sample_labels));
  return out;
}

py::list matrix_rows(const Matrix& a) {
  py::list out;
  for (std::size_t r = 0; r < a.rows(); ++r) out.append(to_list(a.row(r)));
  return out;
}

py::tuple generated(GeneratedModel g) { return py::make_tuple(g.model, to_list(g.total.values)); }

std::vector<Rational> grid(const py::iterable& values) {
  std::vector<Rational> out;
  for (const auto& s : to_vector(values, Mode::exact)) out.push_back(s.rational());
  return out;
}

}  // namespace

PYBIND11_MODULE(_umvue, m) {
  m.doc() = "UMVUE, sufficiency and completeness decisions for finite statistical models";

  py::register_exception<InvalidModel>(m, "InvalidModel", PyExc_ValueError);
  py::register_exception<NotUmvue>(m, "NotUmvue", PyExc_ValueError);
  py::register_exception<NotSufficient>(m, "NotSufficient", PyExc_ValueError);
  py::register_exception<io::FormatError>(m, "FormatError", PyExc_ValueError);
  py::register_exception<ModeMismatch>(m, "ModeMismatch", PyExc_TypeError);

  py::class_<StatModel>(m, "Model")
      .def(py::init(&model_from_rows), py::arg("rows"), py::arg("theta_labels") = py::none(),
           py::arg("sample_labels") = py::none(), py::arg("approx") = false)
      .def_static(
          "from_json", [](const std::string& text) { return validate(io::model_from_json(io::json::parse(text))); },
          py::arg("text"))
      .def("to_json", [](const StatModel& self) { return io::model_to_json(self).dump(); })
      .def_readonly("theta_labels", &StatModel::theta_labels)
      .def_readonly("sample_labels", &StatModel::sample_labels)
      .def_property_readonly("exact", [](const StatModel& self) { return self.mode() == Mode::exact; })
      .def_property_readonly("rows", [](const StatModel& self) { return matrix_rows(self.pmf); })
      .def("__repr__", [](const StatModel& self) {
        return "<Model " + std::to_string(self.num_thetas()) + " parameters x " + std::to_string(self.num_samples()) +
               " samples>";
      });

  m.def("example1", [](const std::string& which) {
    if (which == "P1") return example1(Example1::p1);
    if (which == "P2") return example1(Example1::p2);
    throw py::value_error("expected 'P1' or 'P2'");
  });
  m.def(
      "bernoulli", [](std::size_t n, const py::iterable& g) { return generated(bernoulli({n, grid(g)})); },
      py::arg("n"), py::arg("grid"));
  m.def(
      "beta_bernoulli",
      [](std::size_t n, const py::handle& c, const py::iterable& g) {
        return generated(beta_bernoulli({n, to_scalar(c, Mode::exact).rational(), grid(g)}));
      },
      py::arg("n"), py::arg("c"), py::arg("grid"));

  m.def("rank", [](const StatModel& model) { return rank(model.pmf); });
  m.def("null_samples",
        [](const StatModel& model) { return io::labels_of(null_samples(model), model.sample_labels); });
  m.def("e0_basis", [](const StatModel& model) {
    py::list out;
    for (const auto& v : e0_basis(model)) out.append(to_list(v));
    return out;
  });
  m.def("expectation", [](const StatModel& model, const py::iterable& t) {
    return to_list(expectation(model, statistic(model, t)).values);
  });

  m.def("is_umvue", [](const StatModel& model, const py::iterable& t) {
    return decision(is_umvue(clean(model), statistic(model, t)), model);
  });
  m.def("is_umvue_oracle", [](const StatModel& model, const py::iterable& t) {
    return decision(is_umvue_oracle(model, statistic(model, t)), model);
  });
  m.def("is_complete", [](const StatModel& model, const py::iterable& t) {
    return decision(is_complete(model, statistic(model, t)), model);
  });
  m.def("is_sufficient", [](const StatModel& model, const py::iterable& t) {
    return decision(is_sufficient(model, statistic(model, t)), model);
  });
  m.def("sigma0", [](const StatModel& model) { return labelled(sigma0(clean(model)).blocks, model); });
  m.def(
      "sigma0_bruteforce",
      [](const StatModel& model, std::size_t cap) { return labelled(sigma0_bruteforce(clean(model), cap), model); },
      py::arg("model"), py::arg("cap") = kDefaultBruteforceCap);

  m.def("construct_umvue", [](const StatModel& model, const py::iterable& b) {
    ExpectationFn target{to_vector(b, model.mode())};
    auto res = construct_umvue(clean(model), target);
    py::object values = res.statistic ? py::object(to_list(res.statistic->values)) : py::none();
    return py::make_tuple(to_string(res.status), values);
  });
  m.def("certificate", [](const StatModel& model, const py::iterable& t) {
    return matrix_rows(certificate(clean(model), statistic(model, t)).lambda);
  });
  m.def("verify_certificate", [](const StatModel& model, const py::sequence& lambda, const py::iterable& t) {
    std::vector<Vector> rows;
    for (auto row : lambda) rows.push_back(to_vector(row.cast<py::iterable>(), model.mode()));
    auto cm = clean(model);
    Certificate c{Matrix::from_rows(rows, model.arithmetic()), statistic(model, t)};
    return decision(verify_certificate(cm, c), model);
  });
  m.def("rao_blackwellize", [](const StatModel& model, const py::iterable& s, const py::iterable& t) {
    return to_list(rao_blackwellize(model, statistic(model, s), statistic(model, t)).values);
  });

  m.def(
      "check_ubue",
      [](const StatModel& model, const py::iterable& t, const std::string& loss, std::size_t directions,
         const py::handle& radius, std::uint64_t seed) {
        UbueOptions opts{directions, to_scalar(radius, Mode::exact).rational(), seed};
        auto r = check_ubue(model, statistic(model, t), LossSpec::parse(loss), opts);
        py::dict out;
        out["holds"] = r.holds;
        out["competitors"] = r.competitors.size();
        out["margin"] = r.margin ? to_python(*r.margin) : py::none();
        out["arithmetic_downgraded"] = r.arithmetic_downgraded;
        return out;
      },
      py::arg("model"), py::arg("statistic"), py::arg("loss") = "square", py::arg("directions") = 100,
      py::arg("radius") = 1, py::arg("seed") = 42);
  m.def(
      "check_derivative_implication",
      [](const StatModel& model, const py::iterable& t, const std::string& loss) {
        return decision(check_derivative_implication(model, statistic(model, t), LossSpec::parse(loss)), model);
      },
      py::arg("model"), py::arg("statistic"), py::arg("loss") = "square");
}

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "advwb/compose.hpp"
#include "advwb/matchings.hpp"
#include "advwb/measures.hpp"
#include "advwb/parallel.hpp"
#include "advwb/qsim.hpp"

namespace py = pybind11;
using namespace advwb;

namespace {

Rational to_rational(const py::object& eps) {
    if (py::isinstance<py::str>(eps)) return Rational::parse(eps.cast<std::string>());
    if (py::isinstance<py::int_>(eps)) return Rational(eps.cast<std::int64_t>(), 1);
    // Floats go through their shortest decimal form.
    return Rational::parse(py::str(eps).cast<std::string>());
}

py::dict side_dict(const SideLoads& s) {
    py::dict d;
    d["wt_min"] = s.wt_min;
    d["wt_max"] = s.wt_max;
    d["v_min"] = s.v_min;
    d["v_max"] = s.v_max;
    d["max_ratio"] = s.max_ratio;
    return d;
}

py::dict params_dict(const RelationBound& r) {
    py::dict d;
    d["m"] = r.m;
    d["m2"] = r.m2;
    d["l"] = r.l;
    d["l2"] = r.l2;
    d["bound"] = r.bound;
    return d;
}

template <typename T>
py::object optional_value(const std::optional<T>& v) {
    return v ? py::cast(*v) : py::none();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Boolean-function query-complexity workbench";

    py::register_exception<CapacityError>(m, "CapacityError", PyExc_ValueError);
    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);

    m.def("set_thread_count", &set_thread_count, py::arg("n"));
    m.def("thread_count", &thread_count);

    py::class_<Rational>(m, "Rational")
        .def(py::init([](std::int64_t n, std::int64_t d) { return Rational(n, d); }), py::arg("num"),
             py::arg("den") = 1)
        .def_static("parse", &Rational::parse)
        .def("__float__", &Rational::to_double)
        .def("__str__", &Rational::to_string)
        .def("__repr__", [](const Rational& r) { return "Rational(" + r.to_string() + ")"; })
        .def("__eq__", [](const Rational& a, const Rational& b) { return a == b; });

    py::class_<Quantity>(m, "Quantity")
        .def_property_readonly("is_exact", &Quantity::is_exact)
        .def_property_readonly("value", &Quantity::value)
        .def_property_readonly("exact",
                               [](const Quantity& q) { return q.is_exact() ? py::cast(q.exact_string()) : py::none(); })
        .def("same_as", &Quantity::same_as)
        .def("__float__", &Quantity::value)
        .def("__str__", &Quantity::to_string)
        .def("__repr__", [](const Quantity& q) { return "Quantity(" + q.to_string() + ")"; });

    // Boolean functions.
    py::class_<BooleanFunction>(m, "BooleanFunction")
        .def(py::init([](unsigned arity, const std::vector<int>& table) {
                 return BooleanFunction(arity, std::vector<std::uint8_t>(table.begin(), table.end()));
             }),
             py::arg("arity"), py::arg("table"))
        .def_property_readonly("arity", &BooleanFunction::arity)
        .def_property_readonly("table",
                               [](const BooleanFunction& f) {
                                   return std::vector<int>(f.table().begin(), f.table().end());
                               })
        .def("__call__",
             [](const BooleanFunction& f, Index x) {
                 if (x >= f.size()) throw py::index_error("input out of range");
                 return f(x);
             })
        .def("__call__", [](const BooleanFunction& f, const std::string& bits) {
            return f.evaluate(Assignment::parse(bits));
        })
        .def("__len__", &BooleanFunction::size)
        .def("preimage", &BooleanFunction::preimage, py::arg("value"))
        .def("is_constant", &BooleanFunction::is_constant)
        .def("__eq__", [](const BooleanFunction& a, const BooleanFunction& b) { return a == b; })
        .def("__str__", &format_truth_table);

    m.def("builtin", &builtin, py::arg("name"));
    m.def("parse_truth_table", &parse_truth_table, py::arg("text"));
    m.def("format_truth_table", &format_truth_table, py::arg("f"));
    m.def("load_truth_table", [](const std::string& p) { return load_truth_table(p); }, py::arg("path"));
    m.def("iterate", &iterate, py::arg("f"), py::arg("depth"));
    m.def("compose",
          [](const BooleanFunction& outer, const std::vector<BooleanFunction>& inners) {
              return compose(outer, inners);
          },
          py::arg("outer"), py::arg("inners"));

    // Measures.
    m.def("degree", py::overload_cast<const BooleanFunction&>(&degree), py::arg("f"));
    m.def("sensitivity", py::overload_cast<const BooleanFunction&>(&sensitivity), py::arg("f"));
    m.def("sensitivity_at", &sensitivity_at, py::arg("f"), py::arg("x"));
    m.def("block_sensitivity", py::overload_cast<const BooleanFunction&>(&block_sensitivity), py::arg("f"));
    m.def("block_sensitivity_at", &block_sensitivity_at, py::arg("f"), py::arg("x"));
    m.def("certificate_complexity",
          [](const BooleanFunction& f, unsigned max_arity) {
              const auto c = certificate_complexity(f, max_arity);
              return py::make_tuple(c.c0, c.c1);
          },
          py::arg("f"), py::arg("max_arity") = kDefaultCertificateArity);
    m.def("decision_tree_depth", [](const BooleanFunction& f) { return det_complexity(f).depth; }, py::arg("f"));
    m.def("approx_degree",
          [](const BooleanFunction& f, const py::object& eps) {
              const auto r = approx_degree(f, to_rational(eps));
              py::dict d;
              d["degree"] = r.degree;
              d["eps"] = r.eps;
              d["error"] = r.error;
              d["witness"] = r.witness;
              d["exact_arithmetic"] = r.exact_arithmetic;
              return d;
          },
          py::arg("f"), py::arg("eps") = "1/3");
    m.def("measure_all",
          [](const BooleanFunction& f, const py::object& eps, const std::vector<std::string>& skip) {
              MeasureSelection which;
              for (const auto& s : skip) {
                  if (s == "deg") which.degree = false;
                  else if (s == "approx_deg") which.approx_degree = false;
                  else if (s == "s") which.sensitivity = false;
                  else if (s == "bs") which.block_sensitivity = false;
                  else if (s == "C") which.certificates = false;
                  else if (s == "D") which.decision_tree = false;
                  else throw py::value_error("unknown measure: " + s);
              }
              const auto r = measure_all(f, to_rational(eps), which);
              py::dict d;
              d["arity"] = r.arity;
              d["eps"] = r.eps;
              d["deg"] = optional_value(r.deg);
              d["approx_deg"] = optional_value(r.approx_deg);
              d["s"] = optional_value(r.s);
              d["bs"] = optional_value(r.bs);
              d["c0"] = optional_value(r.c0);
              d["c1"] = optional_value(r.c1);
              d["d_depth"] = optional_value(r.d_depth);
              return d;
          },
          py::arg("f"), py::arg("eps") = "1/3", py::arg("skip") = std::vector<std::string>{});
    m.def("iterated_certificates",
          [](const BooleanFunction& base, unsigned depth) {
              const auto r = iterated_certificates(base, depth);
              py::dict d;
              d["depth"] = r.depth;
              d["materialized"] = r.materialized;
              d["sensitivity_min"] = r.sensitivity_min;
              d["sensitivity_max"] = r.sensitivity_max;
              d["bs_lower"] = r.block_sensitivity_lower;
              d["d_upper"] = r.decision_depth_upper;
              d["certified"] = r.block_sensitivity_certified;
              d["degree"] = optional_value(r.degree);
              return d;
          },
          py::arg("base"), py::arg("depth"));

    // Weight schemes.
    py::class_<WeightScheme>(m, "WeightScheme")
        .def_property_readonly("function", &WeightScheme::function)
        .def_property_readonly("arity", &WeightScheme::arity)
        .def_property_readonly("name", &WeightScheme::name)
        .def_property_readonly("a", [](const WeightScheme& s) { return std::vector<Index>(s.a().begin(), s.a().end()); })
        .def_property_readonly("b", [](const WeightScheme& s) { return std::vector<Index>(s.b().begin(), s.b().end()); })
        .def_property_readonly("pairs",
                               [](const WeightScheme& s) {
                                   std::vector<std::pair<Index, Index>> out;
                                   for (const auto& p : s.pairs()) out.emplace_back(p.x, p.y);
                                   return out;
                               })
        .def("weight",
             [](const WeightScheme& s, Index x, Index y) {
                 const auto p = s.find_pair(x, y);
                 if (!p) throw py::key_error("no such pair");
                 return Quantity(s.pairs()[*p].w);
             })
        .def("__len__", [](const WeightScheme& s) { return s.pairs().size(); })
        .def("to_json", &format_scheme_json);

    m.def("builtin_scheme", &builtin_scheme, py::arg("name"));
    m.def("parse_scheme_json", [](const std::string& text) { return parse_scheme_json(text); }, py::arg("text"));
    m.def("load_scheme", [](const std::string& p) { return load_scheme(p); }, py::arg("path"));
    m.def("save_scheme", [](const WeightScheme& s, const std::string& p) { save_scheme(s, p); }, py::arg("scheme"),
          py::arg("path"));
    m.def("verify",
          [](const WeightScheme& s) {
              const auto r = verify(s);
              py::list details;
              for (const auto& v : r.violations) details.append(v.detail);
              py::dict d;
              d["valid"] = r.valid;
              d["total"] = r.total;
              d["violations"] = details;
              return d;
          },
          py::arg("scheme"));
    m.def("loads",
          [](const WeightScheme& s) {
              const auto r = loads(s);
              py::dict d;
              d["a"] = side_dict(r.a);
              d["b"] = side_dict(r.b);
              d["v_a"] = r.v_a;
              d["v_b"] = r.v_b;
              d["v_max"] = r.v_max;
              d["bound"] = r.bound;
              return d;
          },
          py::arg("scheme"));
    m.def("balance", py::overload_cast<const WeightScheme&>(&balance), py::arg("scheme"));
    m.def("relation_bound",
          [](const BooleanFunction& f, const std::vector<Index>& a, const std::vector<Index>& b, const Relation& r) {
              return params_dict(relation_bound(f, a, b, r));
          },
          py::arg("f"), py::arg("a"), py::arg("b"), py::arg("relation"));

    // Composition.
    m.def("compose_scheme",
          [](const WeightScheme& outer, const WeightScheme& inner) { return compose_scheme(outer, inner).scheme; },
          py::arg("outer"), py::arg("inner"));
    m.def("check_composition",
          [](const WeightScheme& outer, const WeightScheme& inner) {
              const auto c = compose_scheme(outer, inner);
              const auto lr = loads(c.scheme);
              py::dict d;
              d["slice_weights"] = check_all_slice_weights(c).holds();
              d["weight_products"] = check_all_weight_products(c).holds();
              d["load_bound"] = check_load_bound(c, lr).holds;
              d["bound"] = lr.bound;
              return d;
          },
          py::arg("outer"), py::arg("inner"));
    m.def("predicted_bound", &predicted_bound, py::arg("base_bound"), py::arg("depth"));

    // Matchings.
    m.def("matchings",
          [](unsigned depth, int set) {
              const auto ms = build_matchings(depth, set);
              const auto c = check_matchings(ms);
              py::dict d;
              d["count"] = ms.count();
              d["valid_pairs"] = c.valid_pairs;
              d["bijective"] = c.bijective;
              d["disjoint"] = c.disjoint;
              d["params"] = params_dict(c.params);
              return d;
          },
          py::arg("depth") = 1, py::arg("set") = 1);
    m.def("matching",
          [](unsigned depth, int set, std::size_t k) {
              const auto ms = build_matchings(depth, set);
              if (k < 1 || k > ms.count()) throw py::index_error("matching index out of range");
              return ms.matching(k);
          },
          py::arg("depth"), py::arg("set"), py::arg("k"));

    // Simulator.
    py::class_<QueryAlgorithm>(m, "QueryAlgorithm")
        .def_readonly("n", &QueryAlgorithm::n)
        .def_readonly("work", &QueryAlgorithm::work)
        .def_readonly("unitaries", &QueryAlgorithm::unitaries)
        .def_property_readonly("dimension", &QueryAlgorithm::dimension)
        .def_property_readonly("queries", &QueryAlgorithm::queries)
        .def("to_json", &format_algorithm_json);

    m.def("random_algorithm", &random_algorithm, py::arg("n"), py::arg("work"), py::arg("queries"), py::arg("seed"));
    m.def("identity_algorithm", &identity_algorithm, py::arg("n"), py::arg("work"), py::arg("queries"));
    m.def("parity2_algorithm", &parity2_algorithm);
    m.def("parse_algorithm_json", [](const std::string& text) { return parse_algorithm_json(text); }, py::arg("text"));
    m.def("random_unitary", &random_unitary, py::arg("dimension"), py::arg("seed"));
    m.def("acceptance", [](const QueryAlgorithm& alg, Index x) { return run(alg, x).acceptance; }, py::arg("algorithm"),
          py::arg("x"));
    m.def("progress_trace",
          [](const QueryAlgorithm& alg, const WeightScheme& s) {
              const auto t = progress_trace(alg, s);
              py::dict d;
              d["w"] = t.w;
              d["drops"] = t.drops;
              d["v_max"] = t.v_max;
              d["drop_bound_holds"] = check_drop_bound(t);
              return d;
          },
          py::arg("algorithm"), py::arg("scheme"));
    m.def("check_final_bound",
          [](const QueryAlgorithm& alg, const WeightScheme& s, double eps) {
              const auto r = check_final_bound(alg, s, eps);
              py::dict d;
              d["holds"] = r.holds;
              d["w_final"] = r.w_final;
              d["limit"] = r.limit;
              d["misses"] = r.misses;
              return d;
          },
          py::arg("algorithm"), py::arg("scheme"), py::arg("eps"));
    m.def("query_lower_bound", &query_lower_bound, py::arg("eps"), py::arg("v_max"));
}

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/stl.h>
#include <pybind11/pybind11.h>

#include "dgs/config_sampler.hpp"
#include "dgs/degree_model.hpp"
#include "dgs/errors.hpp"
#include "dgs/matching_oracle.hpp"
#include "dgs/path_calculus.hpp"
#include "dgs/perturbation.hpp"
#include "dgs/spectrum.hpp"
#include "dgs/tangle.hpp"
#include "dgs/transition.hpp"
#include "dgs/walk_lab.hpp"

namespace py = pybind11;
using namespace dgs;

namespace {

VariantTag tag_from_string(const std::string& name) {
    if (name == "plain") return VariantTag::plain;
    if (name == "centered") return VariantTag::centered;
    if (name == "tangle_free") return VariantTag::tangle_free;
    if (name == "centered_tangle_free") return VariantTag::centered_tangle_free;
    if (name == "tangled_rest") return VariantTag::tangled_rest;
    throw ConfigError("unknown variant tag `" + name + "`");
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "spectra of random directed configuration multigraphs";

    py::register_exception<Error>(m, "DgsError");

    py::class_<DegreeSequence>(m, "DegreeSequence")
        .def_readonly("d_plus", &DegreeSequence::d_plus)
        .def_readonly("d_minus", &DegreeSequence::d_minus)
        .def_readonly("total", &DegreeSequence::total)
        .def_readonly("min_degree", &DegreeSequence::min_degree)
        .def_readonly("max_degree", &DegreeSequence::max_degree)
        .def("n", &DegreeSequence::n);

    m.def("regular", &regular, py::arg("n"), py::arg("d"));
    m.def(
        "from_types",
        [](const std::vector<std::tuple<long long, int, int>>& rows) {
            std::vector<DegreeType> types;
            for (const auto& [count, dp, dm] : rows)
                types.push_back(DegreeType{count, dp, dm});
            return from_types(types);
        },
        py::arg("types"));
    m.def("rho", &rho);
    m.def("rho_tilde", &rho_tilde);
    m.def("parse_degrees", &parse_degrees);
    m.def("serialize_degrees", &serialize_degrees);

    py::class_<Environment>(m, "Environment")
        .def_readonly("sigma", &Environment::sigma)
        .def_readonly("seed", &Environment::seed);
    m.def("sample_environment", &sample_environment, py::arg("seq"), py::arg("seed"));
    m.def("serialize_environment", &serialize_environment);
    m.def("parse_environment", &parse_environment);

    py::class_<Digraph>(m, "Digraph")
        .def("n", &Digraph::n)
        .def("m", &Digraph::m)
        .def_readonly("seq", &Digraph::seq)
        .def_readonly("env", &Digraph::env);
    m.def("build_digraph", &build_digraph, py::arg("seq"), py::arg("env"));

    m.def(
        "build_p", [](const Digraph& g) { return build_P(g).probs; }, py::arg("graph"));
    m.def("pi_minus", &pi_minus);

    py::class_<SpectrumReport>(m, "SpectrumReport")
        .def_readonly("eigenvalues", &SpectrumReport::eigenvalues)
        .def_readonly("lambda2_mod", &SpectrumReport::lambda2_mod)
        .def_readonly("rho", &SpectrumReport::rho)
        .def_readonly("rho_tilde", &SpectrumReport::rho_tilde);
    m.def(
        "compute_spectrum",
        [](const Eigen::MatrixXd& p) { return compute_spectrum(p); }, py::arg("p"));
    m.def(
        "spectrum_of_graph",
        [](const Digraph& g) { return compute_spectrum(build_P(g)); },
        py::arg("graph"));

    py::class_<BoundVerdict>(m, "BoundVerdict")
        .def_readonly("lambda2_mod", &BoundVerdict::lambda2_mod)
        .def_readonly("threshold", &BoundVerdict::threshold)
        .def_readonly("margin", &BoundVerdict::margin)
        .def_readonly("satisfied", &BoundVerdict::satisfied);
    m.def("check_main_bound", &check_main_bound, py::arg("report"), py::arg("epsilon"));

    m.def(
        "is_d_tangle_free",
        [](const Digraph& g, int r) {
            const TangleWitness w = is_d_tangle_free(g, r);
            return py::make_tuple(w.tangle_free, w.witness);
        },
        py::arg("graph"), py::arg("radius"));
    m.def("default_tangle_radius", &default_tangle_radius, py::arg("n"),
          py::arg("max_degree"), py::arg("alpha") = 0.24);

    m.def(
        "variant_matrix",
        [](const Digraph& g, const std::string& tag, int t, int ell, long long cap) {
            return variant_matrix(g, tag_from_string(tag), t, ell, EnumLimits{cap});
        },
        py::arg("graph"), py::arg("tag"), py::arg("t"), py::arg("ell") = 0,
        py::arg("cap") = EnumLimits{}.cap);
    m.def(
        "decomposition_residual",
        [](const Digraph& g, int t, long long cap) {
            return decomposition_residual(g, t, EnumLimits{cap});
        },
        py::arg("graph"), py::arg("t"), py::arg("cap") = EnumLimits{}.cap);
    m.def("operator_norm", &operator_norm, py::arg("m"));

    m.def("is_irreducible", &is_irreducible);
    m.def("chain_period", &chain_period);
    m.def("stationary", &stationary);
    m.def("distance_to_equilibrium", &distance_to_equilibrium, py::arg("p"),
          py::arg("k"));
    m.def(
        "rate_estimate",
        [](const Eigen::MatrixXd& p, int k_max) { return rate_estimate(p, k_max).rate; },
        py::arg("p"), py::arg("k_max"));
    m.def("collision_probability", &collision_probability, py::arg("p"), py::arg("t"));

    m.def(
        "expected_entry",
        [](const DegreeSequence& seq, int i, int j, int cap) {
            return expected_entry(seq, i, j, cap).to_string();
        },
        py::arg("seq"), py::arg("i"), py::arg("j"), py::arg("cap") = 8);
    m.def(
        "f_value",
        [](const DegreeSequence& seq, const std::string& literal, int cap) {
            return F_value(seq, parse_proto_path(seq, literal), cap).to_string();
        },
        py::arg("seq"), py::arg("proto_path"), py::arg("cap") = 8);
    m.def(
        "tech_bound_check",
        [](const DegreeSequence& seq, const std::string& literal, double c, int cap) {
            const TechBoundVerdict v =
                tech_bound_check(seq, parse_proto_path(seq, literal), c, cap);
            py::dict out;
            out["lhs"] = v.lhs;
            out["rhs"] = v.rhs;
            out["satisfied"] = v.satisfied;
            out["in_regime"] = v.in_regime;
            out["f"] = v.f.to_string();
            out["a"] = v.stats.a;
            out["b"] = v.stats.b;
            out["a1"] = v.stats.a1;
            out["simple"] = v.stats.simple;
            return out;
        },
        py::arg("seq"), py::arg("proto_path"), py::arg("c") = 2.0, py::arg("cap") = 8);

    m.def("bauer_fike_radius", &bauer_fike_radius, py::arg("p_diag"), py::arg("h"));
    m.def("rank1_condition_bound", &rank1_condition_bound, py::arg("x"), py::arg("y"));
    py::class_<Lambda2Certificate>(m, "Lambda2Certificate")
        .def_readonly("t", &Lambda2Certificate::t)
        .def_readonly("epsilon", &Lambda2Certificate::epsilon)
        .def_readonly("lambda2_pow_t", &Lambda2Certificate::lambda2_pow_t)
        .def_readonly("separated", &Lambda2Certificate::separated)
        .def_readonly("certified", &Lambda2Certificate::certified);
    m.def("certify_lambda2", &certify_lambda2, py::arg("graph"), py::arg("t"),
          py::arg("slack") = 1e-8);
}

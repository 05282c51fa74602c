#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hypstruct/angles.hpp"
#include "hypstruct/ford.hpp"
#include "hypstruct/lobachevsky.hpp"
#include "hypstruct/shapes.hpp"
#include "hypstruct/twobridge.hpp"

namespace py = pybind11;
using namespace hyp;

namespace {

Solution solve_complete(const Triangulation& t, const SolveOptions& opt) {
    const auto sys = complete_system(t);
    try {
        return newton_solve(sys, default_start(t.size()), opt);
    } catch (const Error&) {
        const auto pol = polytope(t);
        const auto mx = maximize(feasible_point(pol), pol);
        if (!mx.report.shapes) throw;
        return newton_solve(sys, *mx.report.shapes, opt);
    }
}

py::dict solution_dict(const Solution& s) {
    py::dict d;
    d["shapes"] = s.shapes.z;
    d["converged"] = s.report.converged;
    d["iterations"] = s.report.iterations;
    d["residual"] = s.report.residual;
    d["geometric"] = s.report.geometric;
    d["volume"] = s.report.volume;
    std::vector<std::string> cls;
    for (auto c : s.report.classes) cls.emplace_back(to_string(c));
    d["classes"] = cls;
    return d;
}

}  // namespace

PYBIND11_MODULE(_hypstruct, m) {
    m.doc() = "hyperbolic structures on ideal triangulations";

    auto base = py::register_exception<Error>(m, "Error");
    py::register_exception<ParseError>(m, "ParseError", base.ptr());
    py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
    py::register_exception<CuspNotTorus>(m, "CuspNotTorus", base.ptr());
    py::register_exception<NotHyperbolic>(m, "NotHyperbolic", base.ptr());
    py::register_exception<BadSlope>(m, "BadSlope", base.ptr());
    py::register_exception<NoConvergence>(m, "NoConvergence", base.ptr());
    py::register_exception<SingularJacobian>(m, "SingularJacobian", base.ptr());
    py::register_exception<DegenerateApproach>(m, "DegenerateApproach", base.ptr());
    py::register_exception<DegenerateShape>(m, "DegenerateShape", base.ptr());
    py::register_exception<Infeasible>(m, "Infeasible", base.ptr());

    m.def("lob", &lob, py::arg("theta"));
    m.def("tet_volume", &tet_volume_z, py::arg("z"));
    m.def("total_volume", py::overload_cast<const std::vector<cplx>&>(&total_volume), py::arg("shapes"));

    py::class_<Triangulation>(m, "Triangulation")
        .def_readwrite("name", &Triangulation::name)
        .def("__len__", &Triangulation::size)
        .def_property_readonly("num_edges", [](const Triangulation& t) { return edge_classes(t).size(); })
        .def_property_readonly("num_cusps", [](const Triangulation& t) { return cusps(t).size(); })
        .def("validate", &validate)
        .def("is_orientable", &is_orientable)
        .def("serialize", &serialize)
        .def("__repr__", [](const Triangulation& t) {
            return "<Triangulation " + t.name + " with " + std::to_string(t.size()) + " tets>";
        });

    m.def("parse", &parse, py::arg("text"));
    m.def("load", &load, py::arg("path"));
    m.def("save", &save, py::arg("triangulation"), py::arg("path"));

    m.def(
        "build_2bridge",
        [](const std::vector<long>& code) { return build(normalize_cf(code)).tri; }, py::arg("code"));
    m.def(
        "normalize_cf", [](const std::vector<long>& code) { return normalize_cf(code).a; }, py::arg("code"));
    m.def("rl_word", [](const std::vector<long>& code) { return rl_word(normalize_cf(code)).letters; },
          py::arg("code"));

    m.def(
        "solve",
        [](const Triangulation& t, double tol, int max_iter) {
            return solution_dict(solve_complete(t, SolveOptions{tol, max_iter}));
        },
        py::arg("triangulation"), py::arg("tol") = 1e-12, py::arg("max_iter") = 100);
    m.def(
        "fill",
        [](const Triangulation& t, const std::vector<std::optional<std::pair<long, long>>>& slopes, double tol,
           int max_iter) {
            const SolveOptions opt{tol, max_iter};
            const auto sys = filling_system(t, slopes);
            return solution_dict(newton_solve(sys, solve_complete(t, opt).shapes, opt));
        },
        py::arg("triangulation"), py::arg("slopes"), py::arg("tol") = 1e-12, py::arg("max_iter") = 100);
    m.def(
        "volume", [](const Triangulation& t) { return solve_complete(t, SolveOptions{}).report.volume; },
        py::arg("triangulation"));

    m.def(
        "angle_max",
        [](const Triangulation& t, int starts, unsigned long seed) {
            const auto pol = polytope(t);
            const auto mx = maximize_multistart(pol, feasible_point(pol), starts, seed);
            py::dict d;
            d["status"] = std::string(to_string(mx.report.status));
            d["volume"] = mx.report.volume;
            d["iterations"] = mx.report.iterations;
            d["point"] = Eigen::VectorXd(mx.point);
            d["flat"] = mx.report.flat;
            if (mx.report.shapes) d["shapes"] = mx.report.shapes->z;
            return d;
        },
        py::arg("triangulation"), py::arg("starts") = 1, py::arg("seed") = 20240607UL);
    m.def(
        "angle_polytope_dimension", [](const Triangulation& t) { return polytope(t).dimension(); },
        py::arg("triangulation"));

    m.def(
        "ford_figure8",
        [](int max_len, int grid) {
            const auto p = figure8_preset();
            py::list out;
            for (const auto& s : visible(enumerate(p.gens, p.lattice, max_len, p.window), p.lattice, p.window, grid))
                out.append(py::make_tuple(s.center, s.radius, s.word));
            return out;
        },
        py::arg("max_len") = 3, py::arg("grid") = 256);
}

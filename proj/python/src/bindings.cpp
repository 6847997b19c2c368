#include "lamlab/cli.hpp"
#include "lamlab/energy.hpp"
#include "lamlab/errors.hpp"
#include "lamlab/homogenize.hpp"
#include "lamlab/laminate.hpp"
#include "lamlab/oracle.hpp"
#include "lamlab/regions.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace lamlab;

namespace {

// Matrices cross the boundary as row-major ((a, b), (c, d)).
using Rows = std::array<std::array<double, 2>, 2>;

Matrix2 to_matrix(const Rows& r) { return {r[0][0], r[0][1], r[1][0], r[1][1]}; }
Rows to_rows(const Matrix2& m) { return {{{m.m11, m.m12}, {m.m21, m.m22}}}; }

py::dict energy_dict(const HomEnergy& e)
{
    py::dict d;
    d["known"] = e.is_known();
    if (e.is_known()) {
        d["value"] = e.value.as_double();
    } else {
        d["lower"] = e.lower;
        d["upper"] = e.upper;
    }
    return d;
}

}  // namespace

PYBIND11_MODULE(_lamlab, m)
{
    m.doc() = "Relaxed two-slip energies, laminates and homogenization.";

    // Translators run newest first, so the base class goes in first.
    py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<InvalidSlipSystem>(m, "InvalidSlipSystem", PyExc_ValueError);
    py::register_exception<OffManifold>(m, "OffManifold", PyExc_ValueError);
    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<PreconditionError>(m, "PreconditionError", PyExc_ValueError);

    py::class_<SlipSystem>(m, "SlipSystem")
        .def_static("from_theta", &SlipSystem::from_theta, py::arg("theta"), py::arg("lam") = 0.5)
        .def_static(
            "from_vectors",
            [](std::array<double, 2> v1, std::array<double, 2> v2, double lam) {
                return SlipSystem::from_vectors({v1[0], v1[1]}, {v2[0], v2[1]}, lam);
            },
            py::arg("v1"), py::arg("v2"), py::arg("lam") = 0.5)
        .def_static(
            "orthogonal", [](std::array<double, 2> v1, double lam) { return SlipSystem::orthogonal({v1[0], v1[1]}, lam); },
            py::arg("v1"), py::arg("lam") = 0.5)
        .def_property_readonly("theta", &SlipSystem::theta)
        .def_property_readonly("lam", &SlipSystem::lambda)
        .def_property_readonly("v1", [](const SlipSystem& s) { return std::array<double, 2>{s.v1().x, s.v1().y}; })
        .def_property_readonly("v2", [](const SlipSystem& s) { return std::array<double, 2>{s.v2().x, s.v2().y}; })
        .def_property_readonly("v3", [](const SlipSystem& s) { return std::array<double, 2>{s.v3().x, s.v3().y}; })
        .def("is_orthogonal", &SlipSystem::is_orthogonal);

    m.def("bc_to_matrix", [](double b, double c) { return to_rows(bc_to_matrix(b, c)); });
    m.def("chi", &chi);
    m.def("w_condensed",
          [](const Rows& f, const SlipSystem& s, double tol) { return w_condensed(to_matrix(f), s, tol).as_double(); },
          py::arg("f"), py::arg("slip"), py::arg("tol") = kDefaultTol);
    m.def("w_hom", [](const Rows& f, const SlipSystem& s, double tol) { return energy_dict(w_hom(to_matrix(f), s, tol)); },
          py::arg("f"), py::arg("slip"), py::arg("tol") = kDefaultTol);
    m.def("w_hom_scalar", &w_hom_scalar, py::arg("gamma"), py::arg("slip"));
    m.def(
        "classify",
        [](const Rows& f, const SlipSystem& s, double tol) {
            const RegionLabel label = classify(to_matrix(f), s, tol);
            std::vector<std::string> boundary;
            for (Region r : label.boundary) {
                boundary.emplace_back(to_string(r));
            }
            return py::make_tuple(std::string(to_string(label.tag)), boundary);
        },
        py::arg("f"), py::arg("slip"), py::arg("tol") = kDefaultTol);
    m.def(
        "decompose",
        [](const Rows& f, const SlipSystem& s, double tol) {
            const Matrix2 n = to_matrix(f);
            const LaminateDecomposition d = decompose(n, s, tol);
            const DecompositionResiduals r = verify_decomposition(d, n, s);
            py::dict out;
            out["kind"] = std::string(to_string(d.kind));
            out["f_plus"] = to_rows(d.f_plus);
            out["f_minus"] = to_rows(d.f_minus);
            out["mu"] = d.mu;
            out["a"] = std::array<double, 2>{d.a.x, d.a.y};
            out["n"] = std::array<double, 2>{d.n.x, d.n.y};
            out["energy"] = d.energy;
            out["max_residual"] = r.max();
            return out;
        },
        py::arg("f"), py::arg("slip"), py::arg("tol") = kDefaultTol);
    m.def(
        "wlc_numeric",
        [](const Rows& f, const SlipSystem& s, int n_dirs, bool refine) {
            OracleOptions opt;
            opt.n_dirs = n_dirs;
            opt.refine = refine;
            return wlc_numeric(to_matrix(f), s, opt).value.as_double();
        },
        py::arg("f"), py::arg("slip"), py::arg("n_dirs") = 720, py::arg("refine") = true);
    m.def(
        "homogenize_sweep",
        [](const SlipSystem& s, const std::vector<std::pair<double, double>>& bands, const std::vector<double>& eps,
           double hlam, int cells_per_feature) {
            MicrostructureSpec spec;
            spec.slip = s;
            spec.bands.clear();
            for (const auto& [gamma, t] : bands) {
                spec.bands.push_back({gamma, t});
            }
            spec.laminate_period = hlam;
            py::list rows;
            for (const EnergyReport& r : epsilon_sweep(spec, eps, cells_per_feature)) {
                py::dict d;
                d["epsilon"] = r.epsilon;
                d["e_eps"] = r.e_eps;
                d["target"] = r.target;
                d["rel_error"] = r.rel_error;
                d["flagged_area"] = r.flagged_area;
                rows.append(d);
            }
            return rows;
        },
        py::arg("slip"), py::arg("bands"), py::arg("eps"), py::arg("hlam") = 0.25, py::arg("cells_per_feature") = 8);
    m.def(
        "run_cli",
        [](const std::vector<std::string>& args) {
            std::ostringstream out;
            std::ostringstream err;
            const int code = run_cli(args, out, err);
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"));
}

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "nlbv/asymptotics.hpp"
#include "nlbv/covering.hpp"
#include "nlbv/functional1d.hpp"
#include "nlbv/numeasure.hpp"
#include "nlbv/sectionnd.hpp"

namespace py = pybind11;
using namespace nlbv;

namespace {

Interval to_interval(const std::pair<double, double>& p) { return {p.first, p.second}; }

}  // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Certified enclosures of the non-local functionals F_{gamma,lambda} on BV functions";
    m.attr("__version__") = NLBV_VERSION;

    py::class_<Enclosure>(m, "Enclosure")
        .def(py::init<double, double>(), py::arg("lo"), py::arg("hi"))
        .def_readonly("lo", &Enclosure::lo)
        .def_readonly("hi", &Enclosure::hi)
        .def_property_readonly("width", &Enclosure::width)
        .def_property_readonly("midpoint", &Enclosure::midpoint)
        .def("contains", &Enclosure::contains)
        .def("__repr__", [](const Enclosure& e) {
            return "Enclosure(" + std::to_string(e.lo) + ", " + std::to_string(e.hi) + ")";
        });

    py::class_<VariationTriple>(m, "VariationTriple")
        .def_readonly("a", &VariationTriple::a)
        .def_readonly("j", &VariationTriple::j)
        .def_readonly("c", &VariationTriple::c)
        .def_property_readonly("total", &VariationTriple::total);

    py::class_<CatalogProfile>(m, "CatalogProfile")
        .def_static("polynomial", [](std::pair<double, double> s, std::vector<double> c) {
            return CatalogProfile::polynomial(to_interval(s), std::move(c));
        }, py::arg("support"), py::arg("coefficients"))
        .def_static("affine_ramp", [](std::pair<double, double> s, double rise) {
            return CatalogProfile::affine_ramp(to_interval(s), rise);
        }, py::arg("support"), py::arg("rise"))
        .def_static("smoothstep", [](std::pair<double, double> s, double rise) {
            return CatalogProfile::smoothstep(to_interval(s), rise);
        }, py::arg("support"), py::arg("rise"))
        .def_static("sine_ramp", [](std::pair<double, double> s, double rise) {
            return CatalogProfile::sine_ramp(to_interval(s), rise);
        }, py::arg("support"), py::arg("rise"))
        .def("value", &CatalogProfile::value)
        .def_property_readonly("total_variation", py::overload_cast<>(&CatalogProfile::total_variation, py::const_));

    py::class_<BVFunction1D>(m, "BVFunction1D")
        .def(py::init<>())
        .def("eval", &BVFunction1D::eval)
        .def("__call__", &BVFunction1D::eval)
        .def("left_limit", &BVFunction1D::left_limit)
        .def("variation", &BVFunction1D::variation)
        .def("is_constant", &BVFunction1D::is_constant)
        .def("translated", &BVFunction1D::translated)
        .def("dilated", &BVFunction1D::dilated)
        .def("scaled", &BVFunction1D::scaled);

    m.def("make_function", [](const py::list& pieces, double base) {
        std::vector<Piece> out;
        for (const auto& item : pieces) {
            const auto d = item.cast<py::dict>();
            const auto kind = d["kind"].cast<std::string>();
            if (kind == "jump") {
                out.emplace_back(JumpPiece{d["location"].cast<double>(), d["height"].cast<double>()});
            } else if (kind == "cantor") {
                out.emplace_back(CantorPiece{to_interval(d["support"].cast<std::pair<double, double>>()),
                                             d["rise"].cast<double>()});
            } else if (kind == "smooth") {
                out.emplace_back(SmoothPiece(d["profile"].cast<CatalogProfile>()));
            } else {
                throw py::value_error("piece kind must be jump, smooth or cantor");
            }
        }
        return BVFunction1D(std::move(out), base);
    }, py::arg("pieces"), py::arg("base") = 0.0,
       "Build a function from dicts {kind: jump|smooth|cantor, ...}; smooth pieces carry a CatalogProfile.");

    m.def("cantor_eval", &cantor_eval, py::arg("t"));
    m.def("nu_triangle", [](double d, double g) { return nu_triangle(d, Gamma(g)); }, py::arg("delta"), py::arg("gamma"));
    m.def("nu_curved", [](double r, double g) { return nu_curved(r, Gamma(g)); }, py::arg("r"), py::arg("gamma"));

    py::class_<Evaluation>(m, "Evaluation")
        .def_readonly("enclosure", &Evaluation::enclosure)
        .def_readonly("tolerance_met", &Evaluation::tolerance_met)
        .def_readonly("splits", &Evaluation::splits);

    auto query = [](const BVFunction1D& u, double gamma, double lambda, std::optional<double> tol) {
        ExceedanceQuery q = default_query(u, gamma, lambda);
        if (tol) q.tol = *tol;
        return q;
    };
    m.def("F_value", [query](const BVFunction1D& u, double gamma, double lambda, std::optional<double> tol) {
        py::gil_scoped_release release;
        return F_value(u, query(u, gamma, lambda, tol));
    }, py::arg("u"), py::arg("gamma"), py::arg("lambda_"), py::arg("tol") = py::none());
    m.def("measure_exceedance", [query](const BVFunction1D& u, double gamma, double lambda, std::optional<double> tol) {
        py::gil_scoped_release release;
        return measure_exceedance(u, query(u, gamma, lambda, tol));
    }, py::arg("u"), py::arg("gamma"), py::arg("lambda_"), py::arg("tol") = py::none());
    m.def("closed_form_jump_F", &closed_form_jump_F, py::arg("J"), py::arg("gamma"));

    m.def("liminf_rhs", [](double a, double j, double c, double gamma, int N) {
        return liminf_rhs({a, j, c}, gamma, N);
    }, py::arg("a"), py::arg("j"), py::arg("c"), py::arg("gamma"), py::arg("N") = 1);
    m.def("sbv_target", [](double a, double j, double gamma, int N) {
        return sbv_target({a, j, 0.0}, gamma, N);
    }, py::arg("a"), py::arg("j"), py::arg("gamma"), py::arg("N") = 1);
    m.def("c_n_constant", &c_n_constant, py::arg("N"));

    m.def("lambda_sweep", [](const BVFunction1D& u, double gamma, double lmin, double lmax, int points,
                             double tol, double tail_fraction) {
        SweepOptions opt;
        opt.tol = tol;
        SweepResult s;
        {
            py::gil_scoped_release release;
            s = lambda_sweep(u, gamma, lmin, lmax, points, opt);
        }
        const LimitEstimate le = limit_estimate(s, tail_fraction);
        py::list rows;
        for (std::size_t i = 0; i < s.size(); ++i)
            rows.append(py::make_tuple(s.lambdas[i], s.enclosures[i].lo, s.enclosures[i].hi));
        return py::make_tuple(rows, le.estimate, le.spread);
    }, py::arg("u"), py::arg("gamma"), py::arg("lambda_min"), py::arg("lambda_max"), py::arg("points"),
       py::arg("tol") = 0.0, py::arg("tail_fraction") = 0.25,
       "Returns ([(lambda, F_lo, F_hi), ...], estimate, spread).");

    m.def("covering_select", [](const std::vector<std::pair<double, double>>& intervals, double eps) {
        std::vector<Interval> v;
        for (const auto& p : intervals) v.push_back(to_interval(p));
        const CoveringResult r = covering_select(v, eps);
        return py::make_tuple(r.selected, r.fraction());
    }, py::arg("intervals"), py::arg("epsilon"));

    m.def("disk_F_estimate", [](double radius, double gamma, double lambda, std::size_t samples, std::uint64_t seed,
                                double tol_1d) {
        const FieldND f(2, BallIndicator{{0.0, 0.0}, radius, 1.0});
        MCEstimate e;
        {
            py::gil_scoped_release release;
            e = F_nd_estimate(f, gamma, lambda, samples, seed, tol_1d);
        }
        return py::make_tuple(e.mean, e.std_error, e.systematic);
    }, py::arg("radius"), py::arg("gamma"), py::arg("lambda_"), py::arg("samples"), py::arg("seed"),
       py::arg("tol_1d") = 1e-2, "F_nd_estimate for a 2D disk indicator: (mean, stderr, systematic).");
}

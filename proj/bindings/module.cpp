// Python bindings for the main operations: exact coefficient routes,
// extended-precision evaluation, the quadrature representations, and the
// Carleman weight reports. Exact rationals cross the boundary as
// fractions.Fraction; extended-precision values are rounded to double (use
// *_str variants when more digits are needed).

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "eseries/carleman.hpp"
#include "eseries/exact_coeffs.hpp"
#include "eseries/expansion.hpp"
#include "eseries/order_probe.hpp"
#include "eseries/quadrature.hpp"

namespace py = pybind11;
using namespace eseries;

namespace {

py::object fraction(const Rational& q) {
    static py::object ctor = py::module_::import("fractions").attr("Fraction");
    return ctor(to_string(q));
}

Rational rational_arg(const std::string& text) { return parse_rational(text); }

PrecisionContext context(long bits) { return PrecisionContext(bits); }

ExpansionSpec spec_for(const std::string& shift, std::size_t depth) {
    Rational eps = parse_rational(shift);
    if (eps == 1) return ExpansionSpec::b_series(depth);
    if (eps == Rational(11, 12)) return ExpansionSpec::d_series(depth);
    throw std::invalid_argument("shift must be '1' or '11/12'");
}

QuadratureConfig quad_config(double tolerance, int max_levels, const std::string& rule) {
    QuadratureConfig cfg;
    cfg.target_abs_tolerance = tolerance;
    cfg.max_levels = max_levels;
    if (rule == "gauss") {
        cfg.rule = QuadratureRule::composite_gauss;
    } else if (rule != "de") {
        throw std::invalid_argument("rule must be 'de' or 'gauss'");
    }
    return cfg;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "series expansion of (1+1/x)^x, exact coefficient routes, and "
              "Carleman weight validation";

    // exact coefficients ----------------------------------------------------
    m.def("b_coeff", [](std::size_t n) { return fraction(b_coeff(n)); }, py::arg("n"));
    m.def("d_from_b", [](std::size_t s) { return fraction(d_from_b(s)); }, py::arg("s"));
    m.def("d_from_recurrence",
          [](std::size_t n) { return fraction(d_from_recurrence(n)); }, py::arg("n"));
    m.def("a_coeff", [](std::size_t n) { return fraction(a_coeff(n)); }, py::arg("n"));
    m.def("log_g_coeff", [](std::size_t n) { return fraction(log_g_coeff(n)); }, py::arg("n"));
    m.def(
        "coefficient_table",
        [](const std::string& route, std::size_t n_max) {
            auto table = coefficient_table(route_from_name(route), n_max);
            py::list rows;
            for (const auto& [index, value] : table.entries) {
                rows.append(py::make_tuple(index, fraction(value)));
            }
            return rows;
        },
        py::arg("route"), py::arg("n_max"));

    // evaluation ------------------------------------------------------------
    m.def(
        "pow_expr",
        [](double x, long bits) { return pow_expr(Real::of(x, bits), context(bits)).to_double(); },
        py::arg("x"), py::arg("bits") = 256);
    m.def(
        "pow_expr_str",
        [](const std::string& x, int digits, long bits) {
            PrecisionContext ctx = context(bits);
            return pow_expr(ctx.parse(x), ctx).str(digits);
        },
        py::arg("x"), py::arg("digits") = 30, py::arg("bits") = 256);
    m.def(
        "eval_truncated",
        [](double x, std::size_t depth, const std::string& shift, long bits) {
            PrecisionContext ctx = context(bits);
            return eval_truncated(ctx.real(x), spec_for(shift, depth), ctx).to_double();
        },
        py::arg("x"), py::arg("depth"), py::arg("shift") = "11/12", py::arg("bits") = 256);
    m.def(
        "relative_error",
        [](long n, std::size_t depth, const std::string& shift, long bits) {
            PrecisionContext ctx = context(bits);
            return relative_error_seq(n, spec_for(shift, depth), ctx).to_double();
        },
        py::arg("n"), py::arg("depth"), py::arg("shift") = "11/12", py::arg("bits") = 256);
    m.def(
        "truncation_exponent",
        [](const std::string& shift, std::size_t depth, long bits) {
            PrecisionContext ctx = context(bits);
            return truncation_order_report(rational_arg(shift), depth, ctx).exponent.to_double();
        },
        py::arg("shift"), py::arg("depth"), py::arg("bits") = 256);
    m.def(
        "fit_root",
        [](const std::string& slot, long bits) {
            PrecisionContext ctx = context(bits);
            if (slot == "c") {
                auto fit = fit_leading_coeffs(
                    FitSlot::quadratic_term,
                    {Rational(-1, 10), Rational(0), Rational(1, 10)}, ctx);
                return fit.root.to_double();
            }
            if (slot == "d") {
                auto fit = fit_leading_coeffs(
                    FitSlot::cubic_term, {Rational(0), Rational(1, 96), Rational(1, 20)}, ctx);
                return fit.root.to_double();
            }
            throw std::invalid_argument("slot must be 'c' or 'd'");
        },
        py::arg("slot"), py::arg("bits") = 256);

    // quadrature ------------------------------------------------------------
    m.def(
        "g_density",
        [](double s, long bits) {
            return g_density(Real::of(s, bits), context(bits)).to_double();
        },
        py::arg("s"), py::arg("bits") = 256);
    m.def(
        "g_mass",
        [](double tolerance, int max_levels, const std::string& rule, long bits) {
            return g_mass(quad_config(tolerance, max_levels, rule), context(bits))
                .value.to_double();
        },
        py::arg("tolerance") = 1e-14, py::arg("max_levels") = 14, py::arg("rule") = "de",
        py::arg("bits") = 256);
    m.def(
        "alzer_h",
        [](double x, const std::string& route, double tolerance, int max_levels, long bits) {
            PrecisionContext ctx = context(bits);
            HRoute r = route == "integral" ? HRoute::integral : HRoute::direct;
            return alzer_h(ctx.real(x), r, quad_config(tolerance, max_levels, "de"), ctx)
                .to_double();
        },
        py::arg("x"), py::arg("route") = "direct", py::arg("tolerance") = 1e-14,
        py::arg("max_levels") = 14, py::arg("bits") = 256);
    m.def(
        "d_from_integral",
        [](long n, double tolerance, int max_levels, const std::string& rule, long bits) {
            return d_from_integral(n, quad_config(tolerance, max_levels, rule), context(bits))
                .value.to_double();
        },
        py::arg("n"), py::arg("tolerance") = 1e-14, py::arg("max_levels") = 14,
        py::arg("rule") = "de", py::arg("bits") = 256);

    // carleman --------------------------------------------------------------
    m.def(
        "weight",
        [](const std::string& family, long n, long bits) {
            return weight(WeightFamily::parse(family), n, context(bits)).to_double();
        },
        py::arg("family"), py::arg("n"), py::arg("bits") = 256);
    m.def(
        "weight_fraction",
        [](const std::string& family, long n) -> py::object {
            auto q = weight_exact(WeightFamily::parse(family), n);
            if (!q) return py::none();
            return fraction(*q);
        },
        py::arg("family"), py::arg("n"));
    m.def(
        "pointwise_margin",
        [](const std::string& family, long n_max, long bits) {
            return pointwise_margin(WeightFamily::parse(family), n_max, context(bits)).to_double();
        },
        py::arg("family"), py::arg("n_max"), py::arg("bits") = 256);
    m.def(
        "finite_carleman_report",
        [](const std::string& sequence, const std::string& family, long n_max, long bits) {
            auto rep = finite_carleman_report(SequenceSpec::parse(sequence),
                                              WeightFamily::parse(family), n_max, context(bits));
            py::dict out;
            out["family"] = rep.family.name();
            out["sequence"] = rep.sequence.name();
            out["n_max"] = rep.n_max;
            out["lhs"] = rep.lhs.to_double();
            out["rhs"] = rep.rhs.to_double();
            out["min_margin"] = rep.min_margin.to_double();
            out["holds"] = rep.holds;
            return out;
        },
        py::arg("sequence"), py::arg("family"), py::arg("n_max") = 10000, py::arg("bits") = 256);
    m.def(
        "tightness_ranking",
        [](const std::vector<std::string>& families, long n_max, long bits) {
            std::vector<WeightFamily> fams;
            fams.reserve(families.size());
            for (const auto& f : families) fams.push_back(WeightFamily::parse(f));
            auto ranked = tightness_ranking(fams, n_max, context(bits));
            py::list out;
            for (const auto& r : ranked) {
                out.append(py::make_tuple(r.family.name(), r.total_slack.to_double()));
            }
            return out;
        },
        py::arg("families"), py::arg("n_max") = 1000, py::arg("bits") = 256);

    py::register_exception<ProbeError>(m, "ProbeError");
    py::register_exception<QuadratureError>(m, "QuadratureError");
}

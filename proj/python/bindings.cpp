#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "kmlift/verify.hpp"

namespace py = pybind11;
using namespace kmlift;

namespace {

PrecisionContext ctx_of(int digits) { return PrecisionContext::with_digits(digits); }

std::complex<double> to_std(const Complex& z) {
    return {z.re().to_double(), z.im().to_double()};
}

Complex from_std(std::complex<double> z, mpfr_prec_t prec) {
    return {Real(z.real(), prec), Real(z.imag(), prec)};
}

py::dict trace_entry_dict(const traces::TraceEntry& e, int digits) {
    py::dict d;
    d["D"] = e.D;
    d["value"] = e.value.to_double();
    d["value_str"] = e.value.str(digits);
    d["classes"] = e.class_count;
    if (e.rational_guess) {
        d["numerator"] = py::int_(py::str(e.rational_guess->get_num().get_str()));
        d["denominator"] = py::int_(py::str(e.rational_guess->get_den().get_str()));
    } else {
        d["numerator"] = py::none();
        d["denominator"] = py::none();
    }
    return d;
}

py::list check_list(const std::vector<verify::CheckResult>& checks) {
    py::list out;
    for (const auto& c : checks) {
        py::dict d;
        d["check"] = c.name;
        d["target"] = c.target;
        d["computed"] = c.computed;
        d["tolerance"] = c.tolerance;
        d["residual"] = c.residual;
        d["pass"] = c.pass;
        out.append(d);
    }
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "traces of reciprocal singular moduli and their theta lift";

    m.def(
        "trace",
        [](long D, int digits, bool reconstruct) {
            traces::TraceCalculator tc(ctx_of(digits));
            traces::TraceEntry e = D == 0 ? tc.trace_zero(reconstruct) : tc.trace(D, reconstruct);
            return trace_entry_dict(e, digits);
        },
        py::arg("D"), py::arg("digits") = 60, py::arg("reconstruct") = true,
        "stabilizer-weighted trace of 1/j over CM points of discriminant D "
        "(regularized average for D = 0)");

    m.def(
        "generating_series",
        [](long d_min, int digits, bool reconstruct) {
            traces::TraceCalculator tc(ctx_of(digits));
            py::list out;
            for (const auto& e : tc.generating_series(d_min, reconstruct))
                out.append(trace_entry_dict(e, digits));
            return out;
        },
        py::arg("d_min") = -200, py::arg("digits") = 60, py::arg("reconstruct") = true);

    m.def(
        "hurwitz_class_number",
        [](long D) {
            mpq_class h = quadforms::hurwitz_class_number(D);
            return py::make_tuple(py::int_(py::str(h.get_num().get_str())),
                                  py::int_(py::str(h.get_den().get_str())));
        },
        py::arg("D"), "numerator/denominator pair of the stabilizer-weighted class count");

    m.def(
        "class_representatives",
        [](long D) {
            py::list out;
            for (const auto& q : quadforms::class_representatives(D))
                out.append(py::make_tuple(q.a, q.b, q.c));
            return out;
        },
        py::arg("D"));

    m.def(
        "reduce_form",
        [](long a, long b, long c) {
            auto [red, mat] = quadforms::reduce({a, b, c});
            return py::make_tuple(py::make_tuple(red.a, red.b, red.c),
                                  py::make_tuple(mat.a, mat.b, mat.c, mat.d));
        },
        py::arg("a"), py::arg("b"), py::arg("c"));

    m.def(
        "cm_point",
        [](long a, long b, long c, int digits) {
            auto cm = quadforms::cm_point({a, b, c}, ctx_of(digits));
            return to_std(cm.value);
        },
        py::arg("a"), py::arg("b"), py::arg("c"), py::arg("digits") = 60);

    m.def(
        "j",
        [](std::complex<double> z, int digits) {
            modfuncs::ModularEvaluator ev(ctx_of(digits));
            Complex v = ev.j(from_std(z, ev.prec()));
            return py::make_tuple(to_std(v), v.re().str(digits), v.im().str(digits));
        },
        py::arg("z"), py::arg("digits") = 60,
        "value of the j-invariant: (complex, re_str, im_str)");

    m.def(
        "chowla_selberg",
        [](int digits) {
            Real omega = modfuncs::chowla_selberg(ctx_of(digits));
            return py::make_tuple(omega.to_double(), omega.str(digits));
        },
        py::arg("digits") = 60);

    m.def(
        "theta_values",
        [](std::complex<double> tau, int digits) {
            PrecisionContext ctx = ctx_of(digits);
            Complex t = from_std(tau, ctx.prec_bits());
            py::dict d;
            for (int h = 0; h < 3; ++h) {
                d[py::str("theta_3_2_" + std::to_string(h))] =
                    to_std(theta::theta_unary(3, h, t, ctx).value);
                d[py::str("theta_7_2_" + std::to_string(h))] =
                    to_std(theta::theta_unary(7, h, t, ctx).value);
                d[py::str("theta_4_" + std::to_string(h))] =
                    to_std(theta::theta_binary_4(h, t, ctx).value);
            }
            d["shadow_combination"] = to_std(theta::shadow_combination(t, ctx));
            return d;
        },
        py::arg("tau"), py::arg("digits") = 40);

    m.def(
        "completion_coefficient",
        [](long D, double v, int digits) {
            traces::TraceCalculator tc(ctx_of(digits));
            return to_std(theta::completion_coefficient(D, Real(v, tc.evaluator().prec()), tc));
        },
        py::arg("D"), py::arg("v"), py::arg("digits") = 45);

    m.def(
        "splitting_residual",
        [](std::complex<double> tau, int digits) {
            PrecisionContext ctx = ctx_of(digits);
            auto [lhs, rhs] = theta::splitting_sides(from_std(tau, ctx.prec_bits()), ctx);
            return (lhs - rhs).abs().to_double();
        },
        py::arg("tau"), py::arg("digits") = 40);

    m.def(
        "km_theta",
        [](std::complex<double> z, std::complex<double> tau, int digits, int d_max) {
            PrecisionContext ctx = ctx_of(digits);
            lift::QuadratureSpec spec;
            spec.d_max = d_max;
            return to_std(lift::km_theta_full(from_std(z, ctx.prec_bits()),
                                              from_std(tau, ctx.prec_bits()), spec, ctx));
        },
        py::arg("z"), py::arg("tau"), py::arg("digits") = 30, py::arg("d_max") = 40,
        "full theta kernel sum at (z, tau), zero form included");

    m.def(
        "regularized_lift",
        [](std::complex<double> tau, int digits, double epsilon, double y_max, int d_max) {
            PrecisionContext ctx = ctx_of(digits);
            modfuncs::ModularEvaluator ev(ctx);
            lift::QuadratureSpec spec;
            spec.epsilon = epsilon;
            spec.y_max = y_max;
            spec.d_max = d_max;
            lift::LiftResult res = lift::regularized_lift(from_std(tau, ctx.prec_bits()), spec, ev);
            py::dict d;
            d["value"] = to_std(res.value);
            d["convergence_estimate"] = res.convergence_estimate;
            d["epsilon_order"] = res.epsilon_order;
            d["converged"] = res.quadrature_converged;
            return d;
        },
        py::arg("tau"), py::arg("digits") = 30, py::arg("epsilon") = 0.05, py::arg("y_max") = 8.0,
        py::arg("d_max") = 40,
        "quadrature of 1/j against the theta kernel over the excised fundamental domain");

    m.def(
        "verify_reference_values",
        [](int digits) { return check_list(verify::check_reference_values(ctx_of(digits))); },
        py::arg("digits") = 90);
}

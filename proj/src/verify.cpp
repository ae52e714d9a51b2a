#include "kmlift/verify.hpp"

#include <cmath>
#include <sstream>

namespace kmlift::verify {

namespace {

CheckResult make_check(std::string name, const std::string& target, const std::string& computed,
                       double tolerance, double residual) {
    CheckResult c;
    c.name = std::move(name);
    c.target = target;
    c.computed = computed;
    c.tolerance = tolerance;
    c.residual = residual;
    c.pass = residual < tolerance;
    return c;
}

CheckResult compare_rational(const std::string& name, const Real& value, const mpq_class& target,
                             double tol, mpfr_prec_t prec) {
    Real t(target, prec);
    double res = abs(value - t).to_double();
    std::ostringstream lbl;
    lbl << target.get_num() << "/" << target.get_den();
    return make_check(name, lbl.str(), value.str(30), tol, res);
}

double rel_residual(const Complex& value, const Complex& target) {
    double scale = std::max(target.abs().to_double(), 1e-300);
    return (value - target).abs().to_double() / scale;
}

}  // namespace

bool all_pass(const std::vector<CheckResult>& checks) {
    for (const auto& c : checks)
        if (!c.pass) return false;
    return true;
}

std::vector<CheckResult> check_reference_values(const PrecisionContext& ctx) {
    std::vector<CheckResult> out;
    mpfr_prec_t prec = ctx.prec_bits();
    traces::TraceCalculator tc(ctx);
    const auto& ev = tc.evaluator();

    const double tol = 1e-20;
    out.push_back(compare_rational("trace(0)", tc.trace_zero().value, mpq_class(-1, 165888), tol, prec));
    out.push_back(compare_rational("trace(-3)", tc.trace(-3).value, mpq_class(23, 331776), tol, prec));
    out.push_back(compare_rational("trace(-4)", tc.trace(-4).value, mpq_class(1, 3456), tol, prec));
    out.push_back(compare_rational("trace(-7)", tc.trace(-7).value, mpq_class(-1, 3375), tol, prec));
    out.push_back(compare_rational("trace(-8)", tc.trace(-8).value, mpq_class(1, 8000), tol, prec));

    // first ten digits of the period
    mpz_class digits10 = (ev.omega() * pow10(10, prec)).floor_to_integer();
    double omega_res = digits10 == 6409273802L ? 0.0 : 1.0;
    out.push_back(make_check("chowla_selberg", "0.6409273802...", ev.omega().str(12), 0.5,
                             omega_res));

    Real pi = Real::pi(prec);
    Real om6 = pow(ev.omega(), 6L);
    // principal and constant Laurent coefficients of 1/j at the corner
    Complex c3 = ev.inv_j_expansion().coeff(-3);
    Real c3_target = Real(-1L, prec) / (pow(pi, 3L) * om6 * (4096L * 27L));
    out.push_back(make_check("inv_j_coeff(-3)", c3_target.str(30), c3.re().str(30), 1e-24,
                             rel_residual(c3, Complex(c3_target))));
    Complex c0 = ev.inv_j_expansion().coeff(0);
    Real c0_target = Real(23L, prec) / (4096L * 27L);
    out.push_back(make_check("inv_j_coeff(0)", c0_target.str(30), c0.re().str(30), 1e-24,
                             rel_residual(c0, Complex(c0_target))));

    Complex r2e2 = ev.raised_e2star_at_rho(2);
    Real r2_target = pi * pi * om6 * 32L / sqrt(Real(3L, prec));
    out.push_back(make_check("raised_e2star(2)", r2_target.str(30), r2e2.re().str(30), 1e-24,
                             rel_residual(r2e2, Complex(r2_target))));
    return out;
}

std::vector<CheckResult> check_splitting(const std::vector<Complex>& taus,
                                         const PrecisionContext& ctx) {
    std::vector<CheckResult> out;
    for (const auto& tau : taus) {
        auto [lhs, rhs] = theta::splitting_sides(tau, ctx);
        std::ostringstream name;
        name << "splitting(tau=" << tau.re().str(6) << "+" << tau.im().str(6) << "i)";
        out.push_back(make_check(name.str(), lhs.re().str(20) + " + " + lhs.im().str(20) + "i",
                                 rhs.re().str(20) + " + " + rhs.im().str(20) + "i", 1e-10,
                                 (lhs - rhs).abs().to_double()));
    }
    return out;
}

std::vector<CheckResult> check_lowering(const traces::TraceCalculator& tc) {
    std::vector<CheckResult> out;
    auto report = theta::lowering_and_xi_checks({-3, -4, 0, 5, 8}, {0.5, 1.0, 2.0}, {}, tc);
    for (const auto& e : report.entries) {
        std::ostringstream name;
        name << "lowering(D=" << e.D << ",v=" << e.v << ")";
        out.push_back(make_check(name.str(), e.analytic_side.re().str(18),
                                 e.fd_side.re().str(18), 1e-6, e.rel_error));
    }
    return out;
}

std::vector<CheckResult> check_shadow(const traces::TraceCalculator& tc) {
    mpfr_prec_t prec = tc.evaluator().prec();
    std::vector<Complex> taus;
    auto mk = [&](double u, double v) { taus.emplace_back(Real(u, prec), Real(v, prec)); };
    // generic points; u = 0, v = 1/2 is avoided since both sides vanish there
    mk(0.0, 1.0);
    mk(0.2, 0.6);
    mk(0.25, 0.8);
    mk(-1.0 / 3, 0.75);
    mk(0.1, 1.25);
    auto report = theta::lowering_and_xi_checks({}, {}, taus, tc);
    std::vector<CheckResult> out;
    std::ostringstream mean;
    mean << report.mean_constant.re().str(12) << "+" << report.mean_constant.im().str(12) << "i";
    out.push_back(make_check("shadow_constant_stability", "relative spread", mean.str(), 1e-5,
                             report.constant_spread));
    double mag = report.mean_constant.abs().to_double();
    out.push_back(make_check("shadow_constant_nonzero", "> 1e-12", mean.str(), mag, 1e-12));
    return out;
}

std::vector<CheckResult> check_integral(const Complex& tau, const traces::TraceCalculator& tc,
                                        const lift::QuadratureSpec& spec) {
    const auto& ev = tc.evaluator();
    mpfr_prec_t prec = ev.prec();
    lift::LiftResult lift_value = lift::regularized_lift(tau, spec, ev);

    Real two_pi = Real::pi(prec) * 2L;
    Complex fourier(0L, prec);
    for (long D = -spec.d_max; D <= spec.d_max; ++D) {
        std::int64_t r = ((D % 4) + 4) % 4;
        if (r == 2 || r == 3) continue;  // no forms, coefficient vanishes
        Complex c = theta::completion_coefficient(D, tau.im(), tc);
        // e^{-2 pi i D tau}
        fourier += c * exp(Complex(two_pi * tau.im() * D, -two_pi * tau.re() * D));
    }
    std::vector<CheckResult> out;
    out.push_back(make_check("integral_vs_fourier",
                             fourier.re().str(14) + "+" + fourier.im().str(14) + "i",
                             lift_value.value.re().str(14) + "+" + lift_value.value.im().str(14) + "i",
                             1e-3, (lift_value.value - fourier).abs().to_double()));

    // the regularized average of 1/j against the boundary-pairing route
    lift::LiftResult avg = lift::regularized_average_inv_j(spec, ev);
    Real tr0 = tc.trace_zero().value;
    double rel = std::abs((avg.value.re() - tr0).to_double()) / std::abs(tr0.to_double());
    out.push_back(make_check("average_value_quadrature", tr0.str(14), avg.value.re().str(14), 1e-4, rel));
    return out;
}

std::vector<CheckResult> check_unary_decomposition(const PrecisionContext& ctx) {
    mpfr_prec_t prec = ctx.prec_bits();
    std::vector<CheckResult> out;
    Complex tau_a(Real(0L, prec), Real(1L, prec));
    Complex tau_b(Real(0.25, prec), Real(0.5, prec));

    for (int h : {0, 1}) {
        auto rep = theta::unary_theta_decomposition(h, tau_a, ctx);
        std::ostringstream name;
        name << "theta72_decomposition(h=" << h << ")";
        double scale = std::max(rep.direct.abs().to_double(), 1.0);
        out.push_back(make_check(name.str(), "holomorphic + Eichler parts",
                                 rep.direct.re().str(16) + "+" + rep.direct.im().str(16) + "i",
                                 std::max(ctx.tail_tolerance * 1e3, 1e-40),
                                 rep.decomposition_residual / scale));
    }

    auto r1 = theta::unary_theta_decomposition(1, tau_a, ctx);
    auto r2 = theta::unary_theta_decomposition(1, tau_b, ctx);
    double drift = (r1.xi_ratio - r2.xi_ratio).abs().to_double() /
                   std::max(r1.xi_ratio.abs().to_double(), 1e-300);
    out.push_back(make_check("theta72_xi_constant_stable",
                             r1.xi_ratio.re().str(12) + "+" + r1.xi_ratio.im().str(12) + "i",
                             r2.xi_ratio.re().str(12) + "+" + r2.xi_ratio.im().str(12) + "i", 1e-5,
                             drift));
    out.push_back(make_check("theta72_xi_constant_nonzero", "> 1e-12",
                             r1.xi_ratio.re().str(12), r1.xi_ratio.abs().to_double(), 1e-12));
    return out;
}

}  // namespace kmlift::verify

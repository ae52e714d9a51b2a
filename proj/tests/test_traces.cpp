#include <doctest.h>

#include <cmath>
#include <map>

#include "kmlift/traces.hpp"

using namespace kmlift;
using namespace kmlift::traces;

namespace {

const TraceCalculator& calculator() {
    static const TraceCalculator tc(PrecisionContext::with_digits(60));
    return tc;
}

double rational_dist(const Real& v, const mpq_class& q) {
    return abs(v - Real(q, v.prec())).to_double();
}

}  // namespace

TEST_CASE("traces at small discriminants") {
    const auto& tc = calculator();
    CHECK(rational_dist(tc.trace(-3).value, mpq_class(23, 331776)) < 1e-55);
    CHECK(rational_dist(tc.trace(-7).value, mpq_class(-1, 3375)) < 1e-55);
    TraceEntry t6 = tc.trace(-6);
    CHECK(t6.value.is_zero());
    CHECK(t6.class_count == 0);
    CHECK_THROWS_AS(tc.trace(0), std::invalid_argument);
    CHECK_THROWS_AS(tc.trace(4), std::invalid_argument);
}

TEST_CASE("regularized average value") {
    const auto& tc = calculator();
    CHECK(rational_dist(tc.trace_zero().value, mpq_class(-1, 165888)) < 1e-55);
}

TEST_CASE("trace entries where the corner class appears") {
    const auto& tc = calculator();
    const auto& ev = tc.evaluator();
    mpfr_prec_t prec = ev.prec();

    // D = -12: one generic class [1,0,3] plus the doubled corner class [2,2,2]
    TraceEntry t = tc.trace(-12, true);
    CHECK(t.class_count == 2);
    Complex z3(Real(0L, prec), sqrt(Real(3L, prec)));
    Complex direct = kmlift::inv(ev.j(z3)) + Complex(ev.inv_j_expansion().coeff(0).re() / 3L);
    CHECK(abs(t.value - direct.re()).to_double() < 1e-55);
    REQUIRE(t.rational_guess.has_value());
    CHECK(*t.rational_guess == mpq_class(3643, 41472000));

    // D = -27 contains the tripled corner class [3,3,3]
    TraceEntry t27 = tc.trace(-27, true);
    CHECK(t27.class_count == 2);
    Complex z27(Real(1L, prec) / 2L, sqrt(Real(27L, prec)) / 2L);
    Complex direct27 = kmlift::inv(ev.j(z27)) + Complex(ev.inv_j_expansion().coeff(0).re() / 3L);
    CHECK(abs(t27.value - direct27.re()).to_double() < 1e-55);
}

TEST_CASE("elliptic pairing") {
    const auto& tc = calculator();
    const auto& ev = tc.evaluator();
    const PrecisionContext& ctx = tc.ctx();
    mpfr_prec_t prec = ev.prec();

    // single synthetic term: c(-1) = 1 against g(rho) = 1
    modfuncs::EllipticExpansion coeffs;
    coeffs.center = ev.rho();
    coeffs.n_min = -1;
    coeffs.n_max = 0;
    coeffs.coeffs = {Complex(1L, prec), Complex(0L, prec)};
    std::map<long, Complex> raised{{1, Complex(1L, prec)}};
    Complex pair = elliptic_pairing(coeffs, raised, ctx);
    Real expect = -Real::pi(prec) * 4L * ev.rho().im();
    CHECK(abs(pair.re() - expect).to_double() < 1e-55);
    CHECK(pair.im().is_zero());

    // missing raised value for a live coefficient
    std::map<long, Complex> empty;
    CHECK_THROWS_AS(elliptic_pairing(coeffs, empty, ctx), std::invalid_argument);

    // all-zero coefficients pair to zero with no raised values needed
    modfuncs::EllipticExpansion zeros;
    zeros.center = ev.rho();
    zeros.n_min = -3;
    zeros.n_max = 0;
    zeros.coeffs.assign(4, Complex(0L, prec));
    CHECK(elliptic_pairing(zeros, empty, ctx).abs().to_double() == 0.0);

    // 1/j against the Eisenstein raisings: -36 times the average value
    std::map<long, Complex> eis;
    for (int m = 0; m <= 2; ++m) eis.emplace(m + 1, ev.raised_e2star_at_rho(m));
    Complex full = elliptic_pairing(ev.inv_j_expansion(), eis, ctx);
    CHECK(rational_dist(full.re(), mpq_class(1, 4608)) < 1e-55);
    CHECK(rational_dist(full.re() / (-36L), mpq_class(-1, 165888)) < 1e-55);
}

TEST_CASE("generating series leading entries") {
    const auto& tc = calculator();
    auto entries = tc.generating_series(-8, true);
    REQUIRE(entries.size() == 9);
    std::map<std::int64_t, const TraceEntry*> by_d;
    for (const auto& e : entries) by_d[e.D] = &e;

    CHECK(*by_d.at(0)->rational_guess == mpq_class(-1, 165888));
    CHECK(*by_d.at(-3)->rational_guess == mpq_class(23, 331776));
    CHECK(*by_d.at(-4)->rational_guess == mpq_class(1, 3456));
    CHECK(*by_d.at(-7)->rational_guess == mpq_class(-1, 3375));
    CHECK(*by_d.at(-8)->rational_guess == mpq_class(1, 8000));
    for (std::int64_t D : {-1, -2, -5, -6}) {
        CHECK(by_d.at(D)->value.is_zero());
        CHECK(by_d.at(D)->class_count == 0);
    }
}

TEST_CASE("rational reconstruction") {
    mpfr_prec_t prec = PrecisionContext::with_digits(60).prec_bits();
    Real x(mpq_class(23, 331776), prec);
    auto guess = reconstruct_rational(x, 60);
    REQUIRE(guess.has_value());
    CHECK(*guess == mpq_class(23, 331776));

    // a value that is not close to any small rational
    Real pi = Real::pi(prec);
    auto none = reconstruct_rational(pi, 60);
    CHECK(!none.has_value());

    mpq_class target(mpz_class("123456789123"), mpz_class("987654321987654"));
    target.canonicalize();
    Real big(target, prec);
    auto g2 = reconstruct_rational(big, 60);
    REQUIRE(g2.has_value());
    CHECK(*g2 == target);
}

TEST_CASE("reciprocal singular moduli are reciprocal integers in class number one") {
    const auto& tc = calculator();
    const auto& ev = tc.evaluator();

    // single-class discriminants: the stabilizer-weighted trace itself is
    // the reciprocal of an integer
    for (std::int64_t D : {-4, -8, -11, -19, -43, -67, -163}) {
        auto reps = quadforms::class_representatives(D);
        REQUIRE(reps.size() == 1);
        Real weighted = tc.trace(D).value * long(quadforms::stabilizer_order(reps[0]));
        auto guess = reconstruct_rational(weighted, tc.ctx().precision_digits);
        REQUIRE(guess.has_value());
        CHECK(abs(guess->get_num()) == 1);
        CHECK(rational_dist(weighted, *guess) < 1e-30);
    }

    // the remaining listed discriminants carry several classes (imprimitive
    // multiples); each CM value is separately the reciprocal of an integer
    for (std::int64_t D : {-16, -27, -28}) {
        for (const auto& q : quadforms::class_representatives(D)) {
            auto cm = quadforms::cm_point(q, tc.ctx());
            if (ev.equivalent_to_corner(cm.value)) continue;  // constant term, not a CM value
            Real w = ev.one_over_j(cm.value).re();
            auto guess = reconstruct_rational(w, tc.ctx().precision_digits);
            REQUIRE(guess.has_value());
            CHECK(abs(guess->get_num()) == 1);
        }
    }
}

TEST_CASE("growth of traces and absolute convergence") {
    const auto& tc = calculator();
    auto entries = tc.generating_series(-150);
    for (const auto& e : entries) {
        double t = std::abs(e.value.to_double());
        double d = std::abs(double(e.D));
        if (e.D < 0) CHECK(t <= 10.0 * d * d * d * d);
    }
    // partial sums of |tr(D)| e^{-2 pi |D| v} at v = 0.1: successive blocks of
    // 30 terms toward larger |D| must shrink (geometric tail)
    double prev_block = 1e300;
    double block = 0.0;
    int in_block = 0;
    for (auto it = entries.rbegin(); it != entries.rend(); ++it) {
        double t = std::abs(it->value.to_double());
        double d = std::abs(double(it->D));
        block += t * std::exp(-2.0 * M_PI * d * 0.1);
        if (++in_block == 30) {
            CHECK(block < prev_block);
            prev_block = block;
            block = 0.0;
            in_block = 0;
        }
    }
}

#include <doctest.h>

#include <random>

#include "kmlift/modfuncs.hpp"

using namespace kmlift;
using namespace kmlift::modfuncs;

namespace {

const PrecisionContext ctx = PrecisionContext::with_digits(45);

const ModularEvaluator& evaluator() {
    static const ModularEvaluator ev(ctx);
    return ev;
}

double dist(const Complex& a, const Complex& b) { return (a - b).abs().to_double(); }

// random word in the generators, kept small enough for exact int64 entries
quadforms::Mat2 random_gamma(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> len(1, 6), shift(-3, 3);
    quadforms::Mat2 m;
    const quadforms::Mat2 S{0, -1, 1, 0};
    for (int i = 0, n = len(rng); i < n; ++i) {
        m = m * quadforms::Mat2{1, shift(rng), 0, 1};
        m = m * S;
    }
    return m;
}

}  // namespace

TEST_CASE("classical q-expansions") {
    mpfr_prec_t prec = ctx.prec_bits();
    const QExpansion& j = evaluator().series(SeriesName::J);
    CHECK(j.order_num() == -1);
    CHECK(abs(j.coeff(-1, prec).re() - 1L).to_double() < 1e-40);
    CHECK(abs(j.coeff(0, prec).re() - 744L).to_double() < 1e-38);
    CHECK(abs(j.coeff(1, prec).re() - 196884L).to_double() < 1e-35);
    CHECK(abs(j.coeff(2, prec).re() - 21493760L).to_double() < 1e-33);
    CHECK(abs(j.coeff(3, prec).re() - 864299970L).to_double() < 1e-31);

    const QExpansion& e2 = evaluator().series(SeriesName::E2Star);
    CHECK(e2.coeff(0, prec).re() == 1L);
    CHECK(e2.coeff(1, prec).re() == -24L);
    CHECK(e2.coeff(2, prec).re() == -72L);

    const QExpansion& delta = evaluator().series(SeriesName::Delta);
    CHECK(delta.order_num() == 1);
    CHECK(abs(delta.leading().re() - 1L).to_double() < 1e-40);
    CHECK(abs(delta.coeff(2, prec).re() + 24L).to_double() < 1e-38);
}

TEST_CASE("fundamental domain reduction") {
    mpfr_prec_t prec = ctx.prec_bits();
    Complex z1(Real(5L, prec), Real(1L, prec));
    auto [w1, m1] = reduce_to_fundamental_domain(z1);
    CHECK(dist(w1, Complex::i(prec)) < 1e-40);
    CHECK(dist(quadforms::moebius(m1, z1), w1) < 1e-40);

    Complex rho = evaluator().rho();
    auto [w2, m2] = reduce_to_fundamental_domain(rho);
    CHECK(dist(w2, rho) < 1e-40);

    Complex z3(Real(0.1, prec), Real(0.1, prec));
    auto [w3, m3] = reduce_to_fundamental_domain(z3);
    CHECK(w3.im().to_double() >= 0.8660254037);
    CHECK(std::abs(w3.re().to_double()) <= 0.5 + 1e-12);
    CHECK(w3.norm().to_double() >= 1.0 - 1e-12);
    CHECK(dist(quadforms::moebius(m3, z3), w3) < 1e-38);

    CHECK_THROWS_AS(reduce_to_fundamental_domain(Complex(Real(1L, prec), Real(-1L, prec))),
                    std::invalid_argument);
}

TEST_CASE("special values of j") {
    mpfr_prec_t prec = ctx.prec_bits();
    const auto& ev = evaluator();
    CHECK(dist(ev.j(Complex::i(prec)), Complex(1728L, prec)) < 1e-38);
    CHECK(ev.j(ev.rho()).abs().to_double() < 1e-40);
    Complex z7(Real(1L, prec) / 2L, sqrt(Real(7L, prec)) / 2L);
    CHECK(dist(ev.j(z7), Complex(-3375L, prec)) < 1e-36);
    Complex z2(Real(0L, prec), sqrt(Real(2L, prec)));
    CHECK(dist(ev.j(z2), Complex(8000L, prec)) < 1e-36);
}

TEST_CASE("modular invariance of j under random elements") {
    mpfr_prec_t prec = ctx.prec_bits();
    const auto& ev = evaluator();
    std::mt19937_64 rng(31337);
    std::uniform_real_distribution<double> xd(-0.5, 0.5), yd(0.7, 2.5);
    for (int n = 0; n < 20; ++n) {
        Complex z(Real(xd(rng), prec), Real(yd(rng), prec));
        quadforms::Mat2 g = random_gamma(rng);
        Complex gz = quadforms::moebius(g, z);
        double scale = std::max(1.0, ev.j(z).abs().to_double());
        CHECK(dist(ev.j(gz), ev.j(z)) / scale < 1e-37);
    }
}

TEST_CASE("e2star cocycle under random elements") {
    mpfr_prec_t prec = ctx.prec_bits();
    const auto& ev = evaluator();
    std::mt19937_64 rng(5150);
    std::uniform_real_distribution<double> xd(-0.5, 0.5), yd(0.8, 2.0);
    for (int n = 0; n < 10; ++n) {
        Complex z(Real(xd(rng), prec), Real(yd(rng), prec));
        quadforms::Mat2 g = random_gamma(rng);
        Complex gz = quadforms::moebius(g, z);
        Complex cz_d = z * g.c + Complex(Real(g.d, prec));
        Complex lhs = ev.e2_star_value(gz);
        Complex rhs = ev.e2_star_value(z) * cz_d * cz_d;
        CHECK(dist(lhs, rhs) / std::max(1.0, rhs.abs().to_double()) < 1e-36);
    }
}

TEST_CASE("raising the completed weight-two Eisenstein series") {
    mpfr_prec_t prec = ctx.prec_bits();
    const auto& ev = evaluator();
    AlmostHolomorphicForm e2 = e2_star(ctx);
    AlmostHolomorphicForm same = raise_weight(e2, 0, ctx);
    CHECK(same.weight == 2);
    Complex z(Real(0.2, prec), Real(1.3, prec));
    CHECK(dist(eval_at(same, z, ctx), eval_at(e2, z, ctx)) == 0.0);

    CHECK(ev.raised_e2star_at_rho(0).abs().to_double() < 1e-40);
    CHECK(ev.raised_e2star_at_rho(1).abs().to_double() < 1e-38);

    Real om6 = pow(ev.omega(), 6L);
    Real pi = Real::pi(prec);
    Real target = pi * pi * om6 * 32L / sqrt(Real(3L, prec));
    CHECK(abs(ev.raised_e2star_at_rho(2).re() - target).to_double() / target.to_double() < 1e-38);
    CHECK_THROWS_AS(ev.raised_e2star_at_rho(3), std::invalid_argument);
}

TEST_CASE("raising agrees with finite differences of the evaluation") {
    mpfr_prec_t prec = ctx.prec_bits();
    const auto& ev = evaluator();
    AlmostHolomorphicForm e2 = e2_star(ctx);
    AlmostHolomorphicForm raised = raise_weight(e2, 1, ctx);
    std::mt19937_64 rng(808);
    std::uniform_real_distribution<double> xd(-0.4, 0.4), yd(0.9, 1.8);
    for (int n = 0; n < 10; ++n) {
        Complex z(Real(xd(rng), prec), Real(yd(rng), prec));
        // R_2 f = 2i df/dz + 2 f / y with df/dz = (d/dx - i d/dy)/2
        auto f = [&](const Complex& w) { return ev.e2_star_value(w); };
        auto deriv = [&](const Real& h) {
            Complex dx = (f(z + Complex(h)) - f(z - Complex(h))) / (h * 2L);
            Complex dy = (f(z + Complex(Real(0L, prec), h)) - f(z - Complex(Real(0L, prec), h))) /
                         (h * 2L);
            return (dx - dy.times_i()) / 2L;
        };
        Real h1(1e-8, prec);
        Complex d1 = deriv(h1), d2 = deriv(h1 / 2L);
        Complex dz = (d2 * 4L - d1) / 3L;
        Complex fd = dz.times_i() * 2L + f(z) * (Real(2L, prec) / z.im());
        Complex direct = eval_at(raised, z, ctx);
        CHECK(dist(fd, direct) / std::max(1.0, direct.abs().to_double()) < 1e-8);
    }
}

TEST_CASE("chowla-selberg period") {
    mpfr_prec_t prec = ctx.prec_bits();
    Real omega = chowla_selberg(ctx);
    // first ten decimal digits
    mpz_class digits10 = (omega * pow10(10, prec)).floor_to_integer();
    CHECK(digits10 == 6409273802L);
    // defining identity
    Real ratio = gamma(Real(mpq_class(2, 3), prec)) / gamma(Real(mpq_class(1, 3), prec));
    Real check = omega * omega * (Real::pi(prec) * 6L) * pow(ratio, 3L);
    CHECK(abs(check - 1L).to_double() < 1e-40);
}

TEST_CASE("corner expansions of j and 1/j") {
    mpfr_prec_t prec = ctx.prec_bits();
    const auto& ev = evaluator();
    const EllipticExpansion& inv = ev.inv_j_expansion();

    Real pi = Real::pi(prec);
    Real om6 = pow(ev.omega(), 6L);
    Real c3_target = Real(-1L, prec) / (pow(pi, 3L) * om6 * (4096L * 27L));
    Real c0_target = Real(23L, prec) / (4096L * 27L);
    CHECK(abs(inv.coeff(-3).re() - c3_target).to_double() / std::abs(c3_target.to_double()) <
          1e-38);
    CHECK(inv.coeff(-2).abs().to_double() < 1e-40);
    CHECK(inv.coeff(-1).abs().to_double() < 1e-40);
    CHECK(abs(inv.coeff(0).re() - c0_target).to_double() / c0_target.to_double() < 1e-38);

    bool flag = false;
    Complex below = inv.coeff(-4, &flag);
    CHECK(flag);
    CHECK(below.abs().to_double() == 0.0);

    CHECK_THROWS_AS(ev.elliptic_coefficients(false, 0, 6, 0.75), std::invalid_argument);
    CHECK_THROWS_AS(ev.elliptic_coefficients(false, 0, 6, 0.0), std::invalid_argument);
}

TEST_CASE("taylor values of j at the corner") {
    mpfr_prec_t prec = ctx.prec_bits();
    const auto& ev = evaluator();
    const EllipticExpansion& jexp = ev.j_expansion();
    Real pi = Real::pi(prec);
    Real om6 = pow(ev.omega(), 6L);
    Real im_rho = ev.rho().im();

    // c(n) = (d/dz-raised values) Im(rho)^n / n!
    Real r3_target = -pow(Real(2L, prec), 16L) * 9L * sqrt(Real(3L, prec)) * pow(pi, 3L) * om6;
    Real r6_target = -pow(Real(2L, prec), 22L) * 45L * 23L * pow(pi, 6L) * om6 * om6;
    Real fact3(6L, prec), fact6(720L, prec);
    Complex r3 = jexp.coeff(3) * fact3 / pow(im_rho, 3L);
    Complex r6 = jexp.coeff(6) * fact6 / pow(im_rho, 6L);
    CHECK(abs(r3.re() - r3_target).to_double() / std::abs(r3_target.to_double()) < 1e-38);
    CHECK(abs(r6.re() - r6_target).to_double() / std::abs(r6_target.to_double()) < 1e-36);
    CHECK(jexp.coeff(4).abs().to_double() / std::abs(r3_target.to_double()) < 1e-40);
    CHECK(jexp.coeff(5).abs().to_double() / std::abs(r3_target.to_double()) < 1e-40);
    CHECK(jexp.coeff(0).abs().to_double() < 1e-38);  // j vanishes at the corner
}

TEST_CASE("laurent product of j and 1/j is the unit") {
    mpfr_prec_t prec = ctx.prec_bits();
    const auto& ev = evaluator();
    const auto& jexp = ev.j_expansion();
    const auto& inv = ev.inv_j_expansion();
    // pack both into plain series in the disk coordinate and multiply
    std::vector<std::pair<long, Complex>> jt, it;
    for (long n = jexp.n_min; n <= jexp.n_max; ++n)
        if (jexp.coeff(n).abs().to_double() > 1e-38) jt.emplace_back(n, jexp.coeff(n));
    for (long n = inv.n_min; n <= inv.n_max; ++n)
        if (inv.coeff(n).abs().to_double() > 1e-38) it.emplace_back(n, inv.coeff(n));
    QExpansion a(1, jexp.n_max + 1, std::move(jt));
    QExpansion b(1, inv.n_max + 1, std::move(it));
    QExpansion prod = series_multiply(a, b);
    CHECK(abs(prod.coeff(0, prec).re() - 1L).to_double() < 1e-34);
    for (long n = prod.order_num(); n < prod.truncation; ++n) {
        if (n == 0) continue;
        CHECK(prod.coeff(n, prec).abs().to_double() < 1e-32);
    }
}

TEST_CASE("reciprocal evaluation switches to the corner expansion") {
    mpfr_prec_t prec = ctx.prec_bits();
    const auto& ev = evaluator();
    // near the corner: Laurent path; a bit away: direct reciprocal; they must
    // agree in the overlap region
    Complex rho = ev.rho();
    for (double d : {0.06, 0.09, 0.11, 0.2}) {
        Complex z(rho.re() - Real(d * 0.4, prec), rho.im() + Real(d, prec));
        Complex direct = inv(ev.j(z));
        Complex value = ev.one_over_j(z);
        // inside the switch radius the residual is the Laurent truncation
        CHECK(dist(value, direct) / direct.abs().to_double() < 1e-20);
    }
    CHECK(ev.equivalent_to_corner(rho));
    Complex rho_left = rho - Complex(Real(1L, prec));
    CHECK(ev.equivalent_to_corner(rho_left));
    CHECK(ev.equivalent_to_corner(quadforms::moebius({0, -1, 1, 0}, rho)));
    CHECK(!ev.equivalent_to_corner(Complex::i(prec)));
}

#include <doctest.h>

#include <random>
#include <vector>

#include "kmlift/qseries.hpp"
#include "kmlift/theta.hpp"

using namespace kmlift;

namespace {

const PrecisionContext ctx40 = PrecisionContext::with_digits(40);

double dist(const Real& a, const Real& b) { return abs(a - b).to_double(); }

QExpansion one_minus_qn(long n, long trunc, mpfr_prec_t prec) {
    return QExpansion(1, trunc, {{0, Complex(1L, prec)}, {n, Complex(-1L, prec)}});
}

// Stirling-series log-gamma with exact Bernoulli numbers (recurrence over
// GMP rationals) and argument shifting: an oracle independent of mpfr_gamma.
Real gamma_oracle(const mpq_class& x, int digits) {
    mpfr_prec_t prec = static_cast<mpfr_prec_t>((digits + 25) * 3.33);
    const int K = 24;
    std::vector<mpq_class> bern(2 * K + 2);
    bern[0] = 1;
    for (size_t m = 1; m < bern.size(); ++m) {
        // sum_{j <= m} C(m+1, j) B_j = 0
        mpq_class acc = 0;
        mpz_class binom = 1;  // C(m+1, 0)
        for (size_t j = 0; j < m; ++j) {
            acc += bern[j] * binom;
            binom = binom * (m + 1 - j) / (j + 1);
        }
        bern[m] = -acc / binom;
    }
    long shift = digits;
    Real t(x + shift, prec);
    Real lg = (t - Real(0.5, prec)) * log(t) - t + log(Real::pi(prec) * 2L) / 2L;
    Real tpow = t;
    for (int k = 1; k <= K; ++k) {
        lg += Real(bern[static_cast<size_t>(2 * k)], prec) /
              (Real(2L * k * (2 * k - 1), prec) * tpow);
        tpow *= t * t;
    }
    Real g = exp(lg);
    for (long i = 0; i < shift; ++i) g = g / Real(x + i, prec);
    return g;
}

}  // namespace

TEST_CASE("real arithmetic carries precision") {
    Real a(1L, 64);
    Real b("1.5", 256);
    CHECK((a + b).prec() == 256);
    CHECK(Real::pi(333).prec() == 333);
    CHECK(dist(sqrt(Real(2L, 200)) * sqrt(Real(2L, 200)), Real(2L, 200)) < 1e-58);
}

TEST_CASE("gamma at classical points") {
    Real g12 = gamma_eval(1, 2, ctx40);
    CHECK(dist(g12, sqrt(Real::pi(ctx40.prec_bits()))) < 1e-38);

    Real prod = gamma_eval(1, 3, ctx40) * gamma_eval(2, 3, ctx40);
    Real target = Real::pi(ctx40.prec_bits()) * 2L / sqrt(Real(3L, ctx40.prec_bits()));
    CHECK(dist(prod, target) < 1e-38);

    CHECK_THROWS_AS(gamma_eval(-1, 3, ctx40), std::domain_error);
    CHECK_THROWS_AS(gamma_eval(0, 1, ctx40), std::domain_error);
}

TEST_CASE("gamma against the Stirling-Bernoulli oracle") {
    Real oracle = gamma_oracle(mpq_class(1, 3), 30);
    Real value = gamma_eval(1, 3, ctx40);
    CHECK(dist(value, oracle) < 1e-30);
    CHECK(value.str(11) == "2.6789385347");  // frozen from the oracle

    CHECK(dist(gamma_eval(3, 4, ctx40), gamma_oracle(mpq_class(3, 4), 30)) < 1e-30);
}

TEST_CASE("gamma reflection identity property") {
    mpfr_prec_t prec = ctx40.prec_bits();
    Real pi = Real::pi(prec);
    for (auto [num, den] : {std::pair<long, long>{1, 3}, {1, 4}, {1, 6}}) {
        Real x(mpq_class(num, den), prec);
        Real lhs =
            gamma_eval(num, den, ctx40) * gamma_eval(den - num, den, ctx40) * sin(pi * x) / pi;
        CHECK(dist(lhs, Real(1L, prec)) < 1e-38);
    }
}

TEST_CASE("series addition") {
    mpfr_prec_t prec = ctx40.prec_bits();
    QExpansion f(1, 10, {{-1, Complex(1L, prec)}});
    QExpansion g(1, 10, {{0, Complex(744L, prec)}});
    QExpansion sum = series_add(f, g);
    REQUIRE(sum.terms.size() == 2);
    CHECK(sum.terms[0].first == -1);
    CHECK(sum.terms[1].first == 0);
    CHECK(sum.terms[1].second.re() == 744L);

    QExpansion zero(1, 10, {});
    QExpansion same = series_add(f, zero);
    CHECK(same.terms.size() == 1);
    CHECK(same.terms[0].first == -1);
    CHECK(same.truncation == 10);
}

TEST_CASE("series constructor validation") {
    mpfr_prec_t prec = ctx40.prec_bits();
    CHECK_THROWS_AS(QExpansion(5, 10, {}), std::invalid_argument);
    CHECK_THROWS_AS(QExpansion(24, 10, {}), std::invalid_argument);
    CHECK_THROWS_AS(QExpansion(1, 10, {{3, Complex(1L, prec)}, {2, Complex(1L, prec)}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(QExpansion(1, 3, {{5, Complex(1L, prec)}}), std::invalid_argument);
}

TEST_CASE("series multiplication basics") {
    mpfr_prec_t prec = ctx40.prec_bits();
    Complex one(1L, prec);
    QExpansion f(1, 8, {{0, one}, {1, one}});
    QExpansion g(1, 8, {{0, one}, {1, -one}});
    QExpansion prod = series_multiply(f, g);
    REQUIRE(prod.terms.size() == 2);
    CHECK(prod.terms[0].first == 0);
    CHECK(prod.terms[1].first == 2);
    CHECK(dist(prod.terms[1].second.re(), Real(-1L, prec)) == 0.0);
}

TEST_CASE("eta-power product against the pentagonal-number series") {
    mpfr_prec_t prec = ctx40.prec_bits();
    const long N = 12;
    // oracle: prod (1 - q^n) = 1 + sum_k (-1)^k (q^{k(3k-1)/2} + q^{k(3k+1)/2}),
    // raised to the 24th power by exact integer convolution
    std::vector<mpz_class> euler(N + 1, 0);
    euler[0] = 1;
    for (long k = 1; k * (3 * k - 1) / 2 <= N; ++k) {
        mpz_class sign = (k % 2 == 1) ? -1 : 1;
        long g1 = k * (3 * k - 1) / 2, g2 = k * (3 * k + 1) / 2;
        euler[static_cast<size_t>(g1)] += sign;
        if (g2 <= N) euler[static_cast<size_t>(g2)] += sign;
    }
    std::vector<mpz_class> pow24(1, 1);
    for (int rep = 0; rep < 24; ++rep) {
        std::vector<mpz_class> next(N + 1, 0);
        for (long i = 0; i <= N && i < long(pow24.size()); ++i)
            for (long j = 0; i + j <= N; ++j)
                next[static_cast<size_t>(i + j)] +=
                    pow24[static_cast<size_t>(i)] * euler[static_cast<size_t>(j)];
        pow24 = std::move(next);
    }
    CHECK(pow24[0] == 1);
    CHECK(pow24[1] == -24);
    CHECK(pow24[2] == 252);
    CHECK(pow24[3] == -1472);
    CHECK(pow24[4] == 4830);

    // implementation path: multiply the truncated factors (1 - q^n)^24
    QExpansion prod(1, N + 1, {{0, Complex(1L, prec)}});
    for (long n = 1; n <= N; ++n) {
        QExpansion factor = one_minus_qn(n, N + 1, prec);
        for (int rep = 0; rep < 24; ++rep) prod = series_multiply(prod, factor);
    }
    for (long n = 0; n <= N; ++n) {
        Real expect(pow24[static_cast<size_t>(n)], prec);
        CHECK(dist(prod.coeff(n, prec).re(), expect) < 1e-28);
        CHECK(prod.coeff(n, prec).im().to_double() == 0.0);
    }
}

TEST_CASE("theta square keeps exponent denominator 3") {
    QExpansion t = theta::theta_unary_series(1, ctx40);
    CHECK(t.denom == 3);
    REQUIRE(!t.empty());
    CHECK(t.order_num() == 1);  // q^{1/3}
    QExpansion sq = series_multiply(t, t);
    CHECK(sq.denom == 3);
    REQUIRE(!sq.empty());
    CHECK(sq.order_num() == 2);  // q^{2/3}
    for (const auto& [n, c] : sq.terms) CHECK(n % 3 == 2);
}

TEST_CASE("series inversion") {
    mpfr_prec_t prec = ctx40.prec_bits();
    Complex one(1L, prec);
    QExpansion f(1, 9, {{0, one}, {1, -one}});
    QExpansion g = series_invert(f);
    for (long n = 0; n < 7; ++n) CHECK(dist(g.coeff(n, prec).re(), Real(1L, prec)) < 1e-35);

    QExpansion shifted(1, 9, {{1, one}, {2, one}});
    CHECK(series_invert(shifted).order_num() == -1);
    QExpansion empty(1, 9, {});
    CHECK_THROWS_AS(series_invert(empty), std::invalid_argument);
}

TEST_CASE("delta product reciprocal via long-division oracle") {
    mpfr_prec_t prec = ctx40.prec_bits();
    const long N = 6;
    QExpansion prod(1, N + 1, {{0, Complex(1L, prec)}});
    for (long n = 1; n <= N; ++n) {
        QExpansion factor = one_minus_qn(n, N + 1, prec);
        for (int rep = 0; rep < 24; ++rep) prod = series_multiply(prod, factor);
    }
    QExpansion recip = series_invert(prod);
    // brute-force long division: r_n from sum_{k <= n} f_k r_{n-k} = [n = 0]
    std::vector<Complex> r(N + 1, Complex(0L, prec));
    for (long n = 0; n <= N; ++n) {
        Complex s = n == 0 ? Complex(1L, prec) : Complex(0L, prec);
        for (long k = 1; k <= n; ++k) s -= prod.coeff(k, prec) * r[static_cast<size_t>(n - k)];
        r[static_cast<size_t>(n)] = s;
    }
    CHECK(dist(recip.coeff(1, prec).re(), Real(24L, prec)) < 1e-28);
    CHECK(dist(recip.coeff(2, prec).re(), Real(324L, prec)) < 1e-28);
    CHECK(dist(recip.coeff(3, prec).re(), Real(3200L, prec)) < 1e-28);
    for (long n = 0; n <= 3; ++n)
        CHECK((recip.coeff(n, prec) - r[static_cast<size_t>(n)]).abs().to_double() < 1e-28);
}

TEST_CASE("inversion is an involution and a multiplicative inverse") {
    mpfr_prec_t prec = ctx40.prec_bits();
    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> coeff(-2.0, 2.0);
    for (int trial = 0; trial < 12; ++trial) {
        const long N = 14;
        std::vector<std::pair<long, Complex>> terms;
        terms.emplace_back(0, Complex(Real(coeff(rng) + 3.0, prec), Real(coeff(rng), prec)));
        for (long n = 1; n < N; ++n)
            terms.emplace_back(n, Complex(Real(coeff(rng), prec), Real(coeff(rng), prec)));
        QExpansion f(1, N, std::move(terms));
        QExpansion g = series_invert(f);
        QExpansion prod = series_multiply(f, g);
        CHECK(dist(prod.coeff(0, prec).re(), Real(1L, prec)) < 1e-30);
        for (long n = 1; n < N; ++n) CHECK(prod.coeff(n, prec).abs().to_double() < 1e-30);
        QExpansion back = series_invert(g);
        for (long n = 0; n < N; ++n)
            CHECK((back.coeff(n, prec) - f.coeff(n, prec)).abs().to_double() < 1e-30);
    }
}

TEST_CASE("denominator bound is enforced in products") {
    mpfr_prec_t prec = ctx40.prec_bits();
    QExpansion a(4, 8, {{1, Complex(1L, prec)}});
    QExpansion b(3, 8, {{1, Complex(1L, prec)}});
    QExpansion ab = series_multiply(a, b);  // lcm 12 is allowed
    CHECK(ab.denom == 12);
    CHECK(ab.order_num() == 7);  // 1/4 + 1/3 = 7/12
}

TEST_CASE("precision context validation") {
    CHECK_THROWS_AS(
        [] {
            PrecisionContext c;
            c.precision_digits = 10;
            c.validate();
        }(),
        std::invalid_argument);
    CHECK_THROWS_AS(
        [] {
            PrecisionContext c = PrecisionContext::with_digits(40);
            c.tail_tolerance = 1e-10;  // above 10^{-digits/2}
            c.validate();
        }(),
        std::invalid_argument);
    PrecisionContext ok = PrecisionContext::with_digits(60);
    CHECK(ok.series_order > 40);
    CHECK(ok.tail_tolerance < 1e-30);
}

TEST_CASE("series evaluation matches direct summation") {
    mpfr_prec_t prec = ctx40.prec_bits();
    Complex tau(Real(0.31, prec), Real(1.2, prec));
    QExpansion f(3, 24, {{-2, Complex(2L, prec)}, {1, Complex(1L, prec)}, {7, Complex(5L, prec)}});
    Complex direct(0L, prec);
    Real two_pi = Real::pi(prec) * 2L;
    for (const auto& [n, c] : f.terms) {
        Complex e = exp(Complex(-two_pi * tau.im() * n / 3L, two_pi * tau.re() * n / 3L));
        direct += c * e;
    }
    CHECK((f.eval(tau, ctx40) - direct).abs().to_double() < 1e-38);
}

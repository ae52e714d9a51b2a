#include "kmlift/modfuncs.hpp"

#include <cmath>
#include <stdexcept>

namespace kmlift::modfuncs {

namespace {

// exact divisor-power sums sigma_k(n) for n = 1..N
std::vector<std::int64_t> divisor_sums(long N, int k) {
    if (N > 3000) throw std::invalid_argument("series order too large for exact divisor sums");
    std::vector<std::int64_t> s(static_cast<size_t>(N) + 1, 0);
    for (long d = 1; d <= N; ++d) {
        std::int64_t dk = 1;
        for (int i = 0; i < k; ++i) dk *= d;
        for (long n = d; n <= N; n += d) s[static_cast<size_t>(n)] += dk;
    }
    return s;
}

QExpansion eisenstein(long N, int weight, long factor, mpfr_prec_t prec) {
    auto sig = divisor_sums(N, weight - 1);
    std::vector<std::pair<long, Complex>> terms;
    terms.reserve(static_cast<size_t>(N) + 1);
    terms.emplace_back(0, Complex(1L, prec));
    for (long n = 1; n <= N; ++n)
        terms.emplace_back(n, Complex(Real(mpz_class(sig[static_cast<size_t>(n)] * factor), prec)));
    return QExpansion(1, N + 1, std::move(terms));
}

int series_weight(SeriesName name) {
    switch (name) {
        case SeriesName::E4: return 4;
        case SeriesName::E6: return 6;
        case SeriesName::Delta: return 12;
        case SeriesName::J: return 0;
        case SeriesName::E2Star: return 2;
    }
    return 0;
}

}  // namespace

QExpansion build_series(SeriesName name, const PrecisionContext& ctx) {
    mpfr_prec_t prec = ctx.prec_bits();
    long N = ctx.series_order;
    switch (name) {
        case SeriesName::E4: return eisenstein(N, 4, 240, prec);
        case SeriesName::E6: return eisenstein(N, 6, -504, prec);
        case SeriesName::E2Star: return eisenstein(N, 2, -24, prec);
        case SeriesName::Delta: {
            QExpansion e4 = eisenstein(N + 2, 4, 240, prec);
            QExpansion e6 = eisenstein(N + 2, 6, -504, prec);
            QExpansion num = series_add(series_multiply(series_multiply(e4, e4), e4),
                                        series_scale(series_multiply(e6, e6), Real(-1L, prec)));
            return series_scale(num, Real(1L, prec) / 1728L);
        }
        case SeriesName::J: {
            QExpansion e4 = eisenstein(N + 2, 4, 240, prec);
            QExpansion e43 = series_multiply(series_multiply(e4, e4), e4);
            QExpansion delta = build_series(SeriesName::Delta, ctx);
            return series_multiply(e43, series_invert(delta));
        }
    }
    throw std::logic_error("build_series: unknown name");
}

AlmostHolomorphicForm e2_star(const PrecisionContext& ctx) {
    QExpansion hol = build_series(SeriesName::E2Star, ctx);
    QExpansion twelve(1, hol.truncation, {{0, Complex(12L, ctx.prec_bits())}});
    return {2, {std::move(hol), std::move(twelve)}};
}

AlmostHolomorphicForm raise_weight(const AlmostHolomorphicForm& form, int times,
                                   const PrecisionContext& ctx) {
    if (times < 0) throw std::invalid_argument("raise_weight: times must be >= 0");
    mpfr_prec_t prec = ctx.prec_bits();
    Real minus_4pi = Real::pi(prec) * (-4L);
    AlmostHolomorphicForm f = form;
    for (int step = 0; step < times; ++step) {
        long k = f.weight;
        std::vector<QExpansion> parts;
        parts.reserve(f.parts.size() + 1);
        for (size_t m = 0; m <= f.parts.size(); ++m) {
            QExpansion acc;
            bool have = false;
            if (m < f.parts.size()) {
                acc = series_qderiv(f.parts[m]);
                have = true;
            }
            if (m >= 1) {
                QExpansion low = series_scale(f.parts[m - 1], Real(k - long(m) + 1, prec));
                acc = have ? series_add(acc, low) : std::move(low);
            }
            parts.push_back(series_scale(acc, minus_4pi));
        }
        f = {f.weight + 2, std::move(parts)};
    }
    return f;
}

Complex eval_at(const AlmostHolomorphicForm& form, const Complex& z, const PrecisionContext& ctx) {
    mpfr_prec_t prec = ctx.prec_bits();
    Real y_factor = Real(-1L, prec) / (Real::pi(prec) * 4L * z.im());  // -1/(4 pi y)
    Complex total(0L, prec);
    Real ypow(1L, prec);
    for (const auto& part : form.parts) {
        total += part.eval(z, ctx) * ypow;
        ypow *= y_factor;
    }
    return total;
}

std::pair<Complex, Mat2> reduce_to_fundamental_domain(const Complex& z) {
    if (!(z.im() > 0L)) throw std::invalid_argument("reduce_to_fundamental_domain: Im z must be > 0");
    mpfr_prec_t prec = z.prec();
    const Mat2 S{0, -1, 1, 0};
    Complex w = z;
    Mat2 m;
    Real one(1L, prec);
    Real tol = pow10(-static_cast<long>(prec / 4), prec);
    for (int guard = 0; guard < 10000; ++guard) {
        // ties-to-even keeps the corner rho = (1 + i sqrt 3)/2 in place
        mpfr_t t;
        mpfr_init2(t, prec);
        mpfr_rint(t, w.re().raw(), MPFR_RNDN);
        mpz_class n;
        mpfr_get_z(n.get_mpz_t(), t, MPFR_RNDN);
        mpfr_clear(t);
        if (n != 0) {
            long k = static_cast<long>(n.get_si());
            w = Complex(w.re() - Real(n, prec), w.im());
            m = Mat2{1, -k, 0, 1} * m;
        }
        if (w.norm() < one - tol) {
            Real nz = w.norm();
            w = Complex(-w.re() / nz, w.im() / nz);  // -1/w
            m = S * m;
            continue;
        }
        break;
    }
    return {w, m};
}

Complex EllipticExpansion::coeff(long n, bool* out_of_range) const {
    if (out_of_range) *out_of_range = (n < n_min || n > n_max);
    if (n < n_min || n > n_max) return Complex(0L, center.prec());
    return coeffs[static_cast<size_t>(n - n_min)];
}

Real chowla_selberg(const PrecisionContext& ctx) {
    mpfr_prec_t prec = ctx.prec_bits();
    Real ratio = gamma(Real(mpq_class(1, 3), prec)) / gamma(Real(mpq_class(2, 3), prec));
    return sqrt(pow(ratio, 3L) / (Real::pi(prec) * 6L));
}

ModularEvaluator::ModularEvaluator(PrecisionContext ctx) : ctx_(ctx) {
    ctx_.validate();
    mpfr_prec_t prec = ctx_.prec_bits();
    rho_ = Complex(Real(1L, prec) / 2L, sqrt(Real(3L, prec)) / 2L);
    omega_ = chowla_selberg(ctx_);
    e4_ = build_series(SeriesName::E4, ctx_);
    e6_ = build_series(SeriesName::E6, ctx_);
    delta_ = build_series(SeriesName::Delta, ctx_);
    j_ = build_series(SeriesName::J, ctx_);
    e2_hol_ = build_series(SeriesName::E2Star, ctx_);
    e2star_ = e2_star(ctx_);
    corner_tol_ = -ctx_.precision_digits / 2.0;

    j_exp_ = elliptic_coefficients(false, 0, 24);
    inv_j_exp_ = elliptic_coefficients(true, -3, 21);

    e2star_raised_.reserve(3);
    AlmostHolomorphicForm f = e2star_;
    for (int m = 0; m <= 2; ++m) {
        e2star_raised_.push_back(eval_at(f, rho_, ctx_));
        if (m < 2) f = raise_weight(f, 1, ctx_);
    }
}

const QExpansion& ModularEvaluator::series(SeriesName name) const {
    switch (name) {
        case SeriesName::E4: return e4_;
        case SeriesName::E6: return e6_;
        case SeriesName::Delta: return delta_;
        case SeriesName::J: return j_;
        case SeriesName::E2Star: return e2_hol_;
    }
    throw std::logic_error("unknown series");
}

Complex ModularEvaluator::eval_modular(SeriesName name, const Complex& z) const {
    auto [w, m] = reduce_to_fundamental_domain(z);
    Complex value = (name == SeriesName::E2Star) ? eval_at(e2star_, w, ctx_)
                                                 : series(name).eval(w, ctx_);
    int k = series_weight(name);
    if (k == 0 || (m.c == 0 && (m.a == 1 || m.a == -1))) return value;
    mpfr_prec_t prec = ctx_.prec_bits();
    Complex cz_d = z * m.c + Complex(Real(m.d, prec));
    return value * pow(cz_d, -long(k));
}

Complex ModularEvaluator::e2_star_value(const Complex& z) const {
    return eval_modular(SeriesName::E2Star, z);
}

namespace {
Complex disk_coordinate(const Complex& z, const Complex& center) {
    return (z - center) / (z - center.conj());
}
}  // namespace

Complex ModularEvaluator::one_over_j(const Complex& z) const {
    auto [w, m] = reduce_to_fundamental_domain(z);
    mpfr_prec_t prec = ctx_.prec_bits();
    Complex rho_left = rho_ - Complex(Real(1L, prec));
    for (const Complex& corner : {rho_, rho_left}) {
        Complex x = disk_coordinate(w, corner);
        if (x.abs().to_double() < 0.1) {
            // Laurent evaluation around the pole
            Complex acc(0L, prec);
            for (long n = inv_j_exp_.n_max; n >= inv_j_exp_.n_min; --n)
                acc = acc * x + inv_j_exp_.coeff(n);
            return acc * pow(x, inv_j_exp_.n_min);
        }
    }
    return inv(j_.eval(w, ctx_));
}

bool ModularEvaluator::equivalent_to_corner(const Complex& z) const {
    auto [w, m] = reduce_to_fundamental_domain(z);
    mpfr_prec_t prec = ctx_.prec_bits();
    Real tol = pow10(static_cast<long>(corner_tol_), prec);
    Complex rho_left = rho_ - Complex(Real(1L, prec));
    return (w - rho_).abs() < tol || (w - rho_left).abs() < tol;
}

const Complex& ModularEvaluator::raised_e2star_at_rho(int m) const {
    if (m < 0 || m > 2) throw std::invalid_argument("raised_e2star_at_rho: m must be 0..2");
    return e2star_raised_[static_cast<size_t>(m)];
}

EllipticExpansion ModularEvaluator::elliptic_coefficients(bool reciprocal, long n_min, long n_max,
                                                          double radius) const {
    if (!(radius > 0.0 && radius <= 0.5))
        throw std::invalid_argument("elliptic_coefficients: contour radius must be in (0, 1/2]");
    mpfr_prec_t prec = ctx_.prec_bits();
    int digits = ctx_.precision_digits;

    // Aliasing bound: Taylor coefficients of j in the disk coordinate satisfy
    // |c_m| <= Cmax * R^{-m} with R = 0.62 and Cmax an empirical ceiling on
    // |j| over that circle; samples M chosen so the alias c_{n+M} r^{M} falls
    // below the working tolerance for all requested n.
    const double R = 0.62, log_cmax = 32.0;
    long top = reciprocal ? n_max + 4 : n_max;
    double need = log_cmax + (digits + 12) * 2.302585 + std::abs(double(top)) * std::log(R / radius)
                  + std::abs(double(top)) * std::log(1.0 / radius);
    long M = static_cast<long>(std::ceil(need / std::log(R / radius))) + 8;

    Real r(radius, prec);
    Real two_pi = Real::pi(prec) * 2L;
    Complex rho_bar = rho_.conj();

    // sample j on the contour |w| = r
    std::vector<Complex> samples;
    samples.reserve(static_cast<size_t>(M));
    std::vector<Complex> units;
    units.reserve(static_cast<size_t>(M));
    for (long k = 0; k < M; ++k) {
        Complex u = expi(two_pi * k / M);
        Complex w = u * r;
        Complex z = (rho_ - rho_bar * w) / (Complex(Real(1L, prec)) - w);
        samples.push_back(eval_modular(SeriesName::J, z));
        units.push_back(std::move(u));
    }

    long lo = reciprocal ? 0 : n_min;       // j-expansion window we extract
    long hi = reciprocal ? n_max + 6 : n_max;
    if (reciprocal && n_min < -3) n_min = -3;

    std::vector<Complex> cj;
    cj.reserve(static_cast<size_t>(hi - lo + 1));
    std::vector<Complex> phase(samples.size(), Complex(1L, prec));
    for (long k = 0; k < M; ++k)
        phase[static_cast<size_t>(k)] = pow(units[static_cast<size_t>(k)].conj(), lo);
    Real rpow = pow(r, -lo);
    for (long n = lo; n <= hi; ++n) {
        Complex s(0L, prec);
        for (long k = 0; k < M; ++k) {
            s += samples[static_cast<size_t>(k)] * phase[static_cast<size_t>(k)];
            phase[static_cast<size_t>(k)] *= units[static_cast<size_t>(k)].conj();
        }
        cj.push_back(s * rpow / M);
        rpow /= r;
    }
    double alias = std::exp(log_cmax - double(M) * std::log(R / radius)) *
                   std::pow(radius, -double(std::max(std::labs(lo), std::labs(hi))));

    if (!reciprocal) {
        EllipticExpansion out;
        out.center = rho_;
        out.n_min = n_min;
        out.n_max = n_max;
        out.coeffs = std::move(cj);
        out.error_budget = alias;
        return out;
    }

    // Laurent inversion: j = X^3 (c3 + c4 X + ...) around the third-order zero,
    // so 1/j has a pole of order exactly 3.
    long L = hi - 3 + 1;
    std::vector<std::pair<long, Complex>> gterms;
    for (long mth = 0; mth < L; ++mth) {
        const Complex& c = cj[static_cast<size_t>(mth + 3 - lo)];
        if (!c.is_zero()) gterms.emplace_back(mth, c);
    }
    QExpansion gq(1, L, std::move(gterms), alias);
    QExpansion hq = series_invert(gq);

    EllipticExpansion out;
    out.center = rho_;
    out.n_min = n_min;
    out.n_max = n_max;
    out.coeffs.reserve(static_cast<size_t>(n_max - n_min + 1));
    for (long n = n_min; n <= n_max; ++n) out.coeffs.push_back(hq.coeff(n + 3, prec));
    out.error_budget = hq.error_budget;
    return out;
}

}  // namespace kmlift::modfuncs

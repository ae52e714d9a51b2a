#include "kmlift/theta.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

#include "kmlift/detail/lattice.hpp"

namespace kmlift::theta {

namespace {

// second-order jet in the holomorphic direction: (f, df/dz, d2f/dz2) with
// zbar held fixed
struct Jet {
    Complex f, d1, d2;

    static Jet constant(Complex v, mpfr_prec_t prec) {
        return {std::move(v), Complex(0L, prec), Complex(0L, prec)};
    }
    static Jet variable(const Complex& z) {
        mpfr_prec_t p = z.prec();
        return {z, Complex(1L, p), Complex(0L, p)};
    }
};

Jet operator+(const Jet& a, const Jet& b) { return {a.f + b.f, a.d1 + b.d1, a.d2 + b.d2}; }
Jet operator*(const Jet& a, const Jet& b) {
    return {a.f * b.f, a.d1 * b.f + a.f * b.d1, a.d2 * b.f + 2L * (a.d1 * b.d1) + a.f * b.d2};
}
Jet operator*(const Jet& a, const Complex& s) { return {a.f * s, a.d1 * s, a.d2 * s}; }
Jet operator*(const Jet& a, const Real& s) { return {a.f * s, a.d1 * s, a.d2 * s}; }
Jet jet_inv(const Jet& a) {
    Complex i0 = inv(a.f);
    Complex i2 = i0 * i0;
    return {i0, -(a.d1 * i2), (2L * (a.d1 * a.d1) - a.f * a.d2) * (i2 * i0)};
}
Jet jet_exp(const Jet& a) {
    Complex e = exp(a.f);
    return {e, a.d1 * e, (a.d2 + a.d1 * a.d1) * e};
}

struct KernelJets {
    Jet eta, phi_star;
};

// eta and phi* as jets at z (zbar fixed), shared subexpressions
KernelJets kernel_jets(const BinaryQuadraticForm& q, const Complex& z0, const Real& v) {
    mpfr_prec_t prec = std::max<mpfr_prec_t>(z0.prec(), v.prec());
    Complex zb = z0.conj();
    Jet z = Jet::variable(z0);
    Jet P = (z * z) * Complex(Real(q.a, prec)) + z * Complex(Real(q.b, prec)) +
            Jet::constant(Complex(Real(q.c, prec)), prec);
    // y = (z - zbar)/(2i)
    Jet y = (z + Jet::constant(-zb, prec)) * Complex(Real(0L, prec), Real(-1L, prec) / 2L);
    Jet num = z * (zb * Real(q.a, prec)) + (z + Jet::constant(zb, prec)) * Complex(Real(q.b, prec) / 2L) +
              Jet::constant(Complex(Real(q.c, prec)), prec);
    Jet y_inv = jet_inv(y);
    Jet Qz = num * y_inv;
    Complex Pbar = (zb * Real(q.a, prec) + Complex(Real(q.b, prec))) * zb + Complex(Real(q.c, prec));
    Jet g = P * (y_inv * y_inv) * Pbar;
    Jet E = jet_exp(g * (Real::pi(prec) * (-4L) * v));
    Real two_pi = Real::pi(prec) * 2L;
    Jet eta = Qz * jet_inv(P) * E * (Real(1L, prec) / two_pi);
    Jet phi_star = Qz * (y_inv * y_inv) * E * (Pbar * (v * v / (-2L)));
    return {eta, phi_star};
}

std::array<Complex, 3> raised_from_jet(const Jet& j, const Real& y0) {
    mpfr_prec_t prec = y0.prec();
    Complex two_i(Real(0L, prec), Real(2L, prec));
    Complex r0 = j.f;
    Complex r1 = two_i * j.d1 + j.f * (Real(2L, prec) / y0);
    Complex r2 = j.d2 * (-4L) + j.d1 * Complex(Real(0L, prec), Real(12L, prec) / y0) +
                 j.f * (Real(6L, prec) / (y0 * y0));
    return {r0, r1, r2};
}

// integer square root with exactness flag
bool perfect_square(std::int64_t n, std::int64_t* root) {
    if (n < 0) return false;
    std::int64_t r = static_cast<std::int64_t>(std::llround(std::sqrt(double(n))));
    while (r > 0 && r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    *root = r;
    return r * r == n;
}

struct CornerForm {
    BinaryQuadraticForm form;
    std::int64_t a_img, b_img, c_img;  // image coordinates: a=2A+B+2C etc.
};

// smallest b^2/3 + c^2 over the discriminant-D fiber of the congruence
// lattice, or a negative value when the fiber is empty; the principal forms
// [1,0,-D/4] and [1,1,(1-D)/4] bound the search box whenever forms exist
double fiber_min_norm(std::int64_t D) {
    double bound = 8.0;
    double dd = double(D);
    bound = std::max(bound, (1.0 - dd / 4) * (1.0 - dd / 4) * 4.0 / 3.0 + dd + 2.0);
    bound = std::max(bound, (7.0 - dd) * (7.0 - dd) / 12.0 + dd + 2.0);
    long B = static_cast<long>(std::ceil(std::sqrt(3.0 * bound)));
    long C = static_cast<long>(std::ceil(std::sqrt(bound)));
    double best = -1.0;
    for (long b = -B; b <= B; ++b) {
        for (long c = -C; c <= C; ++c) {
            if (((b - c) % 2) != 0 || (b == 0 && c == 0)) continue;
            std::int64_t aa = std::int64_t(b) * b + 3 * std::int64_t(c) * c - 3 * D;
            std::int64_t a0;
            if (!perfect_square(aa, &a0)) continue;
            bool hit = ((a0 - b) % 3 == 0) || ((-a0 - b) % 3 == 0);
            if (!hit) continue;
            double norm = double(b) * b / 3.0 + double(c) * c;
            if (best < 0.0 || norm < best) best = norm;
        }
    }
    return best;
}

// all forms of discriminant D with CM point different from the corner and
// Gaussian weight above the cutoff; enumerated through the congruence lattice
// a = b (mod 3), b = c (mod 2), a^2 = b^2 + 3c^2 - 3D. The box is sized
// relative to the fiber's leading Gaussian weight so the sum keeps full
// relative accuracy even when its total is exponentially small.
std::vector<CornerForm> corner_forms(std::int64_t D, double v, double tol, double cap,
                                     double* tail_bound) {
    double n_min = fiber_min_norm(D);
    if (n_min < 0.0) {
        if (tail_bound) *tail_bound = 0.0;
        return {};
    }
    double rel = std::max(std::log(1.0 / tol), 40.0);
    double n_cut = n_min + (rel + 30.0) / (4.0 * M_PI * v);
    long B = static_cast<long>(std::ceil(std::sqrt(3.0 * n_cut))) + 1;
    long C = static_cast<long>(std::ceil(std::sqrt(n_cut))) + 1;
    if (cap > 0.0) {
        B = std::min(B, std::max(1L, static_cast<long>(cap)));
        C = std::min(C, std::max(1L, static_cast<long>(cap)));
    }
    if (tail_bound) {
        double sc = 1e3 * std::pow(1.0 + std::abs(double(D)), 3) * std::pow(1.0 + v, 4) *
                    (1.0 + 1.0 / (v * v));
        *tail_bound = sc * std::pow(1.0 + n_cut, 5) * std::exp(-4.0 * M_PI * v * n_cut);
    }
    std::vector<CornerForm> out;
    for (long b = -B; b <= B; ++b) {
        for (long c = -C; c <= C; ++c) {
            if (((b - c) % 2) != 0) continue;
            if (b == 0 && c == 0) continue;  // CM point equal to the corner (or the zero form)
            std::int64_t aa = std::int64_t(b) * b + 3 * std::int64_t(c) * c - 3 * D;
            std::int64_t a0;
            if (!perfect_square(aa, &a0)) continue;
            int n_signs = a0 == 0 ? 1 : 2;
            for (int s = 0; s < n_signs; ++s) {
                std::int64_t a = s == 0 ? a0 : -a0;
                if (((a - b) % 3) != 0) continue;
                std::int64_t A = (a - b) / 3;
                std::int64_t Bc = c - A;
                std::int64_t Cc = (2 * a + b - 3 * c) / 6;
                out.push_back({{A, Bc, Cc}, a, b, c});
            }
        }
    }
    return out;
}

Complex corner(mpfr_prec_t prec) {
    return {Real(1L, prec) / 2L, sqrt(Real(3L, prec)) / 2L};
}

// optional user cap on adaptive lattice cutoffs
long capped(long cutoff, const PrecisionContext& ctx) {
    if (ctx.lattice_cutoff > 0.0 && double(cutoff) > ctx.lattice_cutoff)
        return std::max(1L, static_cast<long>(ctx.lattice_cutoff));
    return cutoff;
}

}  // namespace

ThetaValue theta_unary(int twice_weight, int h, const Complex& tau, const PrecisionContext& ctx) {
    if (twice_weight != 3 && twice_weight != 7)
        throw std::invalid_argument("theta_unary: weight must be 3/2 or 7/2");
    if (!(tau.im() > 0L)) throw std::invalid_argument("theta_unary: Im tau must be > 0");
    mpfr_prec_t prec = ctx.prec_bits();
    double v = tau.im().to_double();
    double scale = twice_weight == 7 ? 100.0 * (1.0 + 1.0 / v) : 2.0;
    int deg = twice_weight == 7 ? 3 : 1;
    double tail = 0;
    long A = detail::gaussian_cutoff(2.0 * M_PI * v / 3.0, deg, ctx.tail_tolerance / scale, &tail);
    if (long ac = capped(A, ctx); ac != A) {
        A = ac;
        tail = detail::gaussian_tail_at(2.0 * M_PI * v / 3.0, deg, A);
    }

    Real two_pi = Real::pi(prec) * 2L;
    Real vv = tau.im();
    // H_3 argument scale 2 sqrt(pi v)/sqrt(3)
    Real xs = sqrt(Real::pi(prec) * vv) * 2L / sqrt(Real(3L, prec));
    Complex total(0L, prec);
    for (long a = -A; a <= A; ++a) {
        if (((a % 3) + 3) % 3 != ((h % 3) + 3) % 3) continue;
        Real asq(a * a, prec);
        Complex qa = exp(Complex(-two_pi * vv * asq / 3L, two_pi * tau.re() * asq / 3L));
        if (twice_weight == 3) {
            total += qa * a;
        } else {
            Real x = xs * a;
            Real h3 = (pow(x, 3L) * 8L - x * 12L);
            total += qa * h3;
        }
    }
    if (twice_weight == 7) total = total * pow(vv, Real(-1.5, prec));
    return {total, double(A), scale * tail};
}

ThetaValue theta_binary_4(int h, const Complex& tau, const PrecisionContext& ctx) {
    if (!(tau.im() > 0L)) throw std::invalid_argument("theta_binary_4: Im tau must be > 0");
    mpfr_prec_t prec = ctx.prec_bits();
    double v = tau.im().to_double();
    double scale = 100.0;
    double tb = 0, tc = 0;
    long B = detail::gaussian_cutoff(2.0 * M_PI * v / 3.0, 7, ctx.tail_tolerance / scale, &tb);
    long C = detail::gaussian_cutoff(2.0 * M_PI * v, 7, ctx.tail_tolerance / scale, &tc);
    if (long bc = capped(B, ctx); bc != B) {
        B = bc;
        tb = detail::gaussian_tail_at(2.0 * M_PI * v / 3.0, 7, B);
    }
    if (long cc = capped(C, ctx); cc != C) {
        C = cc;
        tc = detail::gaussian_tail_at(2.0 * M_PI * v, 7, C);
    }

    Real two_pi = Real::pi(prec) * 2L;
    Real sqrt3 = sqrt(Real(3L, prec));
    Complex total(0L, prec);
    for (long b = -B; b <= B; ++b) {
        if (((b % 3) + 3) % 3 != ((h % 3) + 3) % 3) continue;
        for (long c = -C; c <= C; ++c) {
            if (((b - c) % 2) != 0) continue;
            Real expo(3 * c * c, prec);
            expo += Real(b * b, prec);
            expo = expo / 3L;  // b^2/3 + c^2
            Complex w(Real(b, prec), -sqrt3 * c);
            Complex qbc = exp(Complex(-two_pi * tau.im() * expo, two_pi * tau.re() * expo));
            total += pow(w, 3L) * qbc;
        }
    }
    return {total, double(std::max(B, C)), scale * (tb + tc)};
}

Complex shadow_combination(const Complex& tau, const PrecisionContext& ctx) {
    mpfr_prec_t prec = ctx.prec_bits();
    Real v72 = pow(tau.im(), Real(3.5, prec));
    Complex total(0L, prec);
    for (int h = 0; h < 3; ++h) {
        Complex t7 = theta_unary(7, h, tau, ctx).value;
        Complex t4 = theta_binary_4(h, tau, ctx).value;
        total += t7.conj() * t4 * v72;
    }
    return total;
}

QExpansion theta_unary_series(int h, const PrecisionContext& ctx) {
    mpfr_prec_t prec = ctx.prec_bits();
    long trunc = ctx.series_order * 3;  // exponent numerators over denominator 3
    long amax = static_cast<long>(std::floor(std::sqrt(double(trunc))));
    std::map<long, Complex> acc;
    for (long a = -amax; a <= amax; ++a) {
        if (a * a >= trunc) continue;
        if (((a % 3) + 3) % 3 != ((h % 3) + 3) % 3) continue;
        auto it = acc.find(a * a);
        if (it == acc.end())
            acc.emplace(a * a, Complex(Real(a, prec)));
        else
            it->second += Complex(Real(a, prec));
    }
    std::vector<std::pair<long, Complex>> terms;
    for (auto& [n, c] : acc)
        if (!c.is_zero()) terms.emplace_back(n, std::move(c));
    return QExpansion(3, trunc, std::move(terms));
}

Complex kernel(KernelKind kind, const BinaryQuadraticForm& q, const Complex& z, const Real& v) {
    if (!(z.im() > 0L)) throw std::invalid_argument("kernel: Im z must be > 0");
    if (!(v > 0L)) throw std::invalid_argument("kernel: v must be > 0");
    mpfr_prec_t prec = std::max<mpfr_prec_t>(z.prec(), v.prec());
    Complex P = quadforms::q_of(q, z);
    Real Qz = quadforms::q_z(q, z);
    Real y2 = z.im() * z.im();
    Real pi = Real::pi(prec);
    Real gauss = exp(-(pi * 4L * v) * P.norm() / y2);
    switch (kind) {
        case KernelKind::PhiKM:
            return Complex((Qz * Qz * v * 4L - Real(1L, prec) / (pi * 2L)) * gauss);
        case KernelKind::PhiKMStar:
            return P.conj() * Qz * gauss * (-(v * v) / (y2 * 2L));
        case KernelKind::EtaKM: {
            if (P.abs() < pow10(-long(prec) / 4, prec))
                throw std::domain_error("kernel: eta has a pole at the CM point of Q");
            return Complex(Qz * gauss / (pi * 2L)) / P;
        }
    }
    throw std::logic_error("kernel: unknown kind");
}

std::array<Complex, 3> eta_raised(const BinaryQuadraticForm& q, const Complex& z, const Real& v) {
    Complex P = quadforms::q_of(q, z);
    if (P.abs() < pow10(-long(z.prec()) / 4, z.prec()))
        throw std::domain_error("eta_raised: pole at the CM point of Q");
    return raised_from_jet(kernel_jets(q, z, v).eta, z.im());
}

std::array<Complex, 3> phi_star_raised(const BinaryQuadraticForm& q, const Complex& z,
                                       const Real& v) {
    return raised_from_jet(kernel_jets(q, z, v).phi_star, z.im());
}

ThetaValue singular_theta_coeff(std::int64_t D, int m, const Real& v,
                                const PrecisionContext& ctx) {
    if (m < 0 || m > 2) throw std::invalid_argument("singular_theta_coeff: m must be 0..2");
    if (!(v > 0L)) throw std::invalid_argument("singular_theta_coeff: v must be > 0");
    mpfr_prec_t prec = ctx.prec_bits();
    Complex rho = corner(prec);
    double tail = 0;
    auto forms = corner_forms(D, v.to_double(), ctx.tail_tolerance, ctx.lattice_cutoff, &tail);
    Complex total(0L, prec);
    double cutoff = 0;
    for (const auto& f : forms) {
        total += raised_from_jet(kernel_jets(f.form, rho, v).eta, rho.im())[static_cast<size_t>(m)];
        cutoff = std::max(cutoff, double(std::abs(f.b_img)));
    }
    return {total, cutoff, tail};
}

ThetaValue singular_theta_coeff_lowered(std::int64_t D, int m, const Real& v,
                                        const PrecisionContext& ctx) {
    if (m < 0 || m > 2) throw std::invalid_argument("singular_theta_coeff_lowered: m must be 0..2");
    mpfr_prec_t prec = ctx.prec_bits();
    Complex rho = corner(prec);
    double tail = 0;
    auto forms = corner_forms(D, v.to_double(), ctx.tail_tolerance, ctx.lattice_cutoff, &tail);
    Complex total(0L, prec);
    double cutoff = 0;
    for (const auto& f : forms) {
        total +=
            raised_from_jet(kernel_jets(f.form, rho, v).phi_star, rho.im())[static_cast<size_t>(m)];
        cutoff = std::max(cutoff, double(std::abs(f.b_img)));
    }
    return {total * 4L, cutoff, 4.0 * tail};
}

namespace {

Complex completion_from_parts(const Real& trace_part, std::int64_t D, const Real& v,
                              const traces::TraceCalculator& tc) {
    const auto& ev = tc.evaluator();
    mpfr_prec_t prec = ev.prec();
    Complex c3 = ev.inv_j_expansion().coeff(-3);
    Complex sing = singular_theta_coeff(D, 2, v, ev.ctx()).value;
    Real im3 = pow(ev.rho().im(), 3L) / 2L;  // Im(rho)^3 / 2!
    Complex boundary = c3 * sing * im3 * (Real::pi(prec) * Real(-4L, prec) / 3L);
    return boundary + Complex(trace_part * 2L);
}

Real trace_part_for(std::int64_t D, const traces::TraceCalculator& tc) {
    if (D < 0) return tc.trace(D).value;
    if (D == 0) return tc.trace_zero().value;
    return Real(0L, tc.evaluator().prec());
}

}  // namespace

Complex completion_coefficient(std::int64_t D, const Real& v, const traces::TraceCalculator& tc) {
    return completion_from_parts(trace_part_for(D, tc), D, v, tc);
}

CompletionCoefficient sample_completion(std::int64_t D, const std::vector<double>& v_values,
                                        const traces::TraceCalculator& tc) {
    mpfr_prec_t prec = tc.evaluator().prec();
    CompletionCoefficient out;
    out.D = D;
    out.trace_part = trace_part_for(D, tc);
    out.v_samples.reserve(v_values.size());
    for (double vd : v_values) {
        Real v(vd, prec);
        out.v_samples.emplace_back(v, completion_from_parts(out.trace_part, D, v, tc));
    }
    return out;
}

std::pair<Complex, Complex> splitting_sides(const Complex& tau, const PrecisionContext& ctx) {
    if (!(tau.im() > 0L)) throw std::invalid_argument("splitting_sides: Im tau must be > 0");
    mpfr_prec_t prec = ctx.prec_bits();
    Real v = tau.im(), u = tau.re();
    double vd = v.to_double();
    double scale = 1e5 * std::pow(1.0 + vd, 4);
    double tol = std::max(ctx.tail_tolerance, 1e-14);

    Real pi = Real::pi(prec);
    Real sqrt3 = sqrt(Real(3L, prec));
    Real two_pi = pi * 2L;

    // form-side sum: R^2-raised phi* display over all forms, Fourier phases included
    std::array<double, 9> gram = {8.0 / 3, 4.0 / 3, 2.0 / 3, 4.0 / 3, 5.0 / 3,
                                  4.0 / 3, 2.0 / 3, 4.0 / 3, 8.0 / 3};
    double R2 = std::log(scale / tol) / (2.0 * M_PI * vd);
    auto pts = detail::enumerate_ellipsoid(gram, R2);
    Real y = sqrt3 / 2L;
    Real y6 = pow(y, 6L);
    Complex rho(Real(1L, prec) / 2L, y);
    Complex lhs(0L, prec);
    for (const auto& [A, B, C] : pts) {
        if (A == 0 && B == 0 && C == 0) continue;
        std::int64_t D = B * B - 4 * A * C;
        Complex P = quadforms::q_of({A, B, C}, rho);
        Real Qz = quadforms::q_z({A, B, C}, rho);
        Real poly = pi * 12L * pow(v, 3L) * Qz - pi * pi * 32L * pow(v, 4L) * pow(Qz, 3L);
        // magnitude exponent: -4 pi v |P|^2/y^2 + 2 pi D v; phase: -2 pi D u
        Real mag = -(pi * 4L * v) * P.norm() / (y * y) + two_pi * v * D;
        Complex term = pow(P.conj(), 3L) * poly * exp(Complex(mag, -two_pi * u * D)) / y6;
        lhs += term;
    }

    // congruence-lattice side
    double tbl = 0;
    long Acut = capped(detail::gaussian_cutoff(2.0 * M_PI * vd / 3.0, 4, tol / scale, &tbl), ctx);
    long Bcut = Acut;
    long Ccut = capped(detail::gaussian_cutoff(2.0 * M_PI * vd, 4, tol / scale, &tbl), ctx);
    Complex rhs(0L, prec);
    std::vector<Complex> a_factor(static_cast<size_t>(Acut) + 1, Complex(0L, prec));
    for (long a = 0; a <= Acut; ++a) {
        Real asq(a * a, prec);
        a_factor[static_cast<size_t>(a)] =
            exp(Complex(-two_pi * v * asq / 3L, two_pi * u * asq / 3L));
    }
    for (long a = -Acut; a <= Acut; ++a) {
        Real poly = pi * 36L * pow(v, 3L) * a - pi * pi * 32L * pow(v, 4L) * (a * a * a);
        Complex pa = a_factor[static_cast<size_t>(std::labs(a))] * poly;
        for (long b = -Bcut; b <= Bcut; ++b) {
            if (((a - b) % 3) != 0) continue;
            for (long c = -Ccut; c <= Ccut; ++c) {
                if (((b - c) % 2) != 0) continue;
                Real expo = (Real(b * b, prec) / 3L + Real(c * c, prec));
                Complex w(Real(b, prec), -sqrt3 * c);
                // conj(tau) phase: e^{-2 pi i N conj(tau)}
                Complex qn = exp(Complex(-two_pi * v * expo, -two_pi * u * expo));
                rhs += pa * pow(w, 3L) * qn;
            }
        }
    }
    rhs = rhs * (Real(8L, prec) / (sqrt3 * 81L));
    return {lhs, rhs};
}

namespace {

// v^2 d/dv of the completion coefficient by centered differences with one
// Richardson step. The trace part is v-independent, so it is dropped before
// differencing: subtracting it after the fact would only inject its rounding
// into the (possibly exponentially smaller) derivative.
Complex completion_v2dv(std::int64_t D, const Real& v, const traces::TraceCalculator& tc) {
    mpfr_prec_t prec = tc.evaluator().prec();
    Real zero(0L, prec);
    Real h = v * Real(1e-5, prec);
    auto diff = [&](const Real& step) {
        Complex up = completion_from_parts(zero, D, v + step, tc);
        Complex dn = completion_from_parts(zero, D, v - step, tc);
        return (up - dn) / (step * 2L);
    };
    Complex d1 = diff(h);
    Complex d2 = diff(h / 2L);
    Complex richardson = (d2 * 4L - d1) / 3L;
    return richardson * (v * v);
}

}  // namespace

LoweringReport lowering_and_xi_checks(const std::vector<std::int64_t>& d_set,
                                      const std::vector<double>& v_set,
                                      const std::vector<Complex>& taus,
                                      const traces::TraceCalculator& tc) {
    const auto& ev = tc.evaluator();
    mpfr_prec_t prec = ev.prec();
    Real pi = Real::pi(prec);
    Complex c3 = ev.inv_j_expansion().coeff(-3);
    Real im3 = pow(ev.rho().im(), 3L) / 2L;
    Complex front = c3 * im3 * (pi * Real(-4L, prec) / 3L);

    LoweringReport report;
    for (std::int64_t D : d_set) {
        for (double vd : v_set) {
            Real v(vd, prec);
            LoweringEntry e;
            e.D = D;
            e.v = vd;
            e.fd_side = completion_v2dv(D, v, tc);
            e.analytic_side = front * singular_theta_coeff_lowered(D, 2, v, ev.ctx()).value;
            double denom = std::max(e.analytic_side.abs().to_double(), 1e-280);
            e.rel_error = (e.fd_side - e.analytic_side).abs().to_double() / denom;
            report.max_rel_error = std::max(report.max_rel_error, e.rel_error);
            report.entries.push_back(std::move(e));
        }
    }

    // xi of the completed series, assembled mode by mode, against the
    // unary-times-binary theta combination
    for (const Complex& tau : taus) {
        Real v = tau.im(), u = tau.re();
        double vd = v.to_double();
        long dmax = std::max<long>(14, static_cast<long>(std::ceil(42.0 / (2.0 * M_PI * vd))));
        Complex xi_val(0L, prec);
        Real two_pi = pi * 2L;
        for (long D = -dmax; D <= dmax; ++D) {
            Complex der = completion_v2dv(D, v, tc);
            // conj(der) e^{2 pi i D conj(tau)}; derivative is real for real modes
            Complex phase = exp(Complex(two_pi * v * D, two_pi * u * D));
            xi_val += der.conj() * phase;
        }
        xi_val = xi_val * pow(v, Real(-0.5, prec));
        Complex sh = shadow_combination(tau, ev.ctx());
        report.fitted_constants.push_back(xi_val / sh);
    }
    if (!report.fitted_constants.empty()) {
        Complex mean(0L, prec);
        for (const auto& k : report.fitted_constants) mean += k;
        mean = mean / long(report.fitted_constants.size());
        report.mean_constant = mean;
        double spread = 0;
        for (const auto& k : report.fitted_constants)
            spread = std::max(spread,
                              (k - mean).abs().to_double() / std::max(mean.abs().to_double(), 1e-300));
        report.constant_spread = spread;
    }
    return report;
}

DecompositionReport unary_theta_decomposition(int h, const Complex& tau,
                                              const PrecisionContext& ctx) {
    if (!(tau.im() > 0L)) throw std::invalid_argument("unary_theta_decomposition: Im tau > 0");
    mpfr_prec_t prec = ctx.prec_bits();
    Real pi = Real::pi(prec);
    Real v = tau.im();
    Real sqrt3 = sqrt(Real(3L, prec));
    Real two_pi = pi * 2L;

    DecompositionReport rep;
    rep.direct = theta_unary(7, h, tau, ctx).value;

    // cubic-coefficient sum
    double tail = 0;
    long A = detail::gaussian_cutoff(2.0 * M_PI * v.to_double() / 3.0, 3,
                                     ctx.tail_tolerance / 10.0, &tail);
    Complex cubic(0L, prec);
    for (long a = -A; a <= A; ++a) {
        if (((a % 3) + 3) % 3 != ((h % 3) + 3) % 3) continue;
        Real asq(a * a, prec);
        Complex qa = exp(Complex(-two_pi * v * asq / 3L, two_pi * tau.re() * asq / 3L));
        cubic += qa * (a * a * a);
    }
    Real pi32 = pow(pi, Real(1.5, prec));
    rep.holomorphic = cubic * (pi32 * 64L / (sqrt3 * 3L));
    Complex linear = theta_unary(3, h, tau, ctx).value;
    rep.eichler = linear * (-(sqrt(pi) * 24L) / (sqrt3 * v));
    rep.decomposition_residual =
        (rep.direct - rep.holomorphic - rep.eichler).abs().to_double();

    // xi_{7/2} by finite differences in u and v with one Richardson step
    auto theta7 = [&](const Complex& t) { return theta_unary(7, h, t, ctx).value; };
    auto dtaubar = [&](const Real& step) {
        Complex du = (theta7(tau + Complex(step)) - theta7(tau - Complex(step))) / (step * 2L);
        Complex dv =
            (theta7(tau + Complex(Real(0L, prec), step)) - theta7(tau - Complex(Real(0L, prec), step))) /
            (step * 2L);
        return (du + dv.times_i()) / 2L;
    };
    Real h1 = v * Real(1e-6, prec);
    Complex d1 = dtaubar(h1);
    Complex d2 = dtaubar(h1 / 2L);
    Complex db = (d2 * 4L - d1) / 3L;
    Complex xi = db.conj().times_i() * 2L * pow(v, Real(3.5, prec));
    Complex target = linear.conj() * pow(v, Real(1.5, prec));
    if (target.abs().to_double() > 0.0)
        rep.xi_ratio = xi / target;
    else
        rep.xi_ratio = Complex(0L, prec);
    return rep;
}

}  // namespace kmlift::theta

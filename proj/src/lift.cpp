#include "kmlift/lift.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <stdexcept>

#include "kmlift/detail/lattice.hpp"

namespace kmlift::lift {

void QuadratureSpec::validate() const {
    if (!(epsilon > 0.0 && epsilon < 0.2))
        throw std::invalid_argument("QuadratureSpec: epsilon must be in (0, 0.2)");
    if (y_max < 5.0) throw std::invalid_argument("QuadratureSpec: y_max must be >= 5");
    if (d_max < 1) throw std::invalid_argument("QuadratureSpec: d_max must be positive");
}

namespace {

// Gauss-Legendre nodes/weights on [-1, 1]
struct GaussRule {
    std::vector<double> nodes, weights;
};

GaussRule legendre_rule(int n) {
    GaussRule rule;
    rule.nodes.resize(static_cast<size_t>(n));
    rule.weights.resize(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            double dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
            double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        double dp = n * (x * p1 - p0) / (x * x - 1.0);
        rule.nodes[static_cast<size_t>(i)] = x;
        rule.weights[static_cast<size_t>(i)] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return rule;
}

const GaussRule& rule15() {
    static const GaussRule r = legendre_rule(15);
    return r;
}

struct QuadResult {
    Complex value;
    double err = 0.0;
    bool converged = true;
};

Complex gauss_segment(const std::function<Complex(double)>& f, double a, double b,
                      mpfr_prec_t prec) {
    const GaussRule& r = rule15();
    Complex acc(0L, prec);
    double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (size_t i = 0; i < r.nodes.size(); ++i)
        acc += f(mid + half * r.nodes[i]) * Real(r.weights[i], prec);
    return acc * Real(half, prec);
}

void adaptive(const std::function<Complex(double)>& f, double a, double b, double tol, int depth,
              int max_depth, mpfr_prec_t prec, QuadResult* out) {
    Complex whole = gauss_segment(f, a, b, prec);
    double mid = 0.5 * (a + b);
    Complex left = gauss_segment(f, a, mid, prec);
    Complex right = gauss_segment(f, mid, b, prec);
    double err = (left + right - whole).abs().to_double();
    if (err < tol || depth >= max_depth) {
        out->value += left + right;
        out->err += err;
        if (depth >= max_depth && err >= tol) out->converged = false;
        return;
    }
    adaptive(f, a, mid, tol * 0.5, depth + 1, max_depth, prec, out);
    adaptive(f, mid, b, tol * 0.5, depth + 1, max_depth, prec, out);
}

// theta kernel at fixed tau with precomputed Fourier phases
class ThetaKernel {
public:
    ThetaKernel(const Complex& tau, const QuadratureSpec& spec, const PrecisionContext& ctx)
        : spec_(spec), prec_(ctx.prec_bits()), v_(tau.im()), vd_(tau.im().to_double()) {
        Real two_pi = Real::pi(prec_) * 2L;
        phases_.reserve(static_cast<size_t>(2 * spec.d_max + 1));
        for (long D = -spec.d_max; D <= spec.d_max; ++D)
            phases_.push_back(exp(Complex(two_pi * v_ * D, -two_pi * tau.re() * D)));
        minus_inv_2pi_ = Real(-1L, prec_) / (Real::pi(prec_) * 2L);
    }

    Complex eval(const Complex& z) const {
        double x = z.re().to_double(), y = z.im().to_double();
        std::array<double, 3> u = {(x * x + y * y) / y, x / y, 1.0 / y};
        std::array<double, 3> wr = {(x * x - y * y) / y, x / y, 1.0 / y};
        std::array<double, 3> wi = {2.0 * x, 1.0, 0.0};
        std::array<double, 9> G{};
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                G[static_cast<size_t>(3 * i + j)] =
                    u[static_cast<size_t>(i)] * u[static_cast<size_t>(j)] +
                    wr[static_cast<size_t>(i)] * wr[static_cast<size_t>(j)] +
                    wi[static_cast<size_t>(i)] * wi[static_cast<size_t>(j)];
        double L = std::log(1.0 / spec_.theta_tol);
        double R2 = (L + 8.0) / (2.0 * M_PI * vd_);
        R2 = (L + 8.0 + std::log1p(4.0 * vd_ * R2)) / (2.0 * M_PI * vd_);

        Real pi = Real::pi(prec_);
        Real y2 = z.im() * z.im();
        Complex total(0L, prec_);
        for (const auto& [a, b, c] : detail::enumerate_ellipsoid(G, R2)) {
            std::int64_t D = b * b - 4 * a * c;
            if (D < -spec_.d_max || D > spec_.d_max) continue;
            quadforms::BinaryQuadraticForm q{a, b, c};
            Complex P = quadforms::q_of(q, z);
            Real Qz = quadforms::q_z(q, z);
            Real pref = Qz * Qz * v_ * 4L + minus_inv_2pi_;
            Real gauss = exp(-(pi * 4L * v_) * P.norm() / y2);
            total += phases_[static_cast<size_t>(D + spec_.d_max)] * (pref * gauss);
        }
        return total;
    }

private:
    QuadratureSpec spec_;
    mpfr_prec_t prec_;
    Real v_;
    double vd_;
    std::vector<Complex> phases_;
    Real minus_inv_2pi_;
};

struct Window {
    bool present = false;
    double lo = 0.0, hi = 0.0;
};

// excluded y-interval at abscissa x for the excised disk around a corner at
// (cx, sqrt(3)/2), radius eps in the |X| metric
Window corner_window(double x, double cx, double eps) {
    const double s = 0.8660254037844386;
    double dx = x - cx;
    double e2 = eps * eps;
    double a = 1.0 - e2;
    double disc = s * s * (1.0 + e2) * (1.0 + e2) - a * a * (dx * dx + s * s);
    if (disc <= 0.0) return {};
    double root = std::sqrt(disc);
    return {true, (s * (1.0 + e2) - root) / a, (s * (1.0 + e2) + root) / a};
}

struct DomainIntegral {
    Complex value;
    double err;
    bool converged;
};

DomainIntegral integrate_domain(const std::function<Complex(const Complex&)>& integrand,
                                double eps, const QuadratureSpec& spec, mpfr_prec_t prec,
                                double abs_tol) {
    double inner_err = 0.0;
    bool inner_ok = true;
    auto inner = [&](double x) {
        double ylow = std::sqrt(std::max(1.0 - x * x, 0.0));
        std::vector<std::pair<double, double>> pieces;
        Window w = corner_window(x, x < 0 ? -0.5 : 0.5, eps);
        if (w.present) {
            double lo = std::max(w.lo, ylow);
            if (lo > ylow) pieces.emplace_back(ylow, lo);
            pieces.emplace_back(std::max(w.hi, ylow), spec.y_max);
        } else {
            pieces.emplace_back(ylow, spec.y_max);
        }
        auto f = [&](double y) {
            Complex z(Real(x, prec), Real(y, prec));
            return integrand(z) / Real(y * y, prec);
        };
        QuadResult res;
        res.value = Complex(0L, prec);
        for (const auto& [a, b] : pieces) {
            if (b - a < 1e-14) continue;
            // fixed interior splits keep the node layout independent of y_max
            // and resolve the near-boundary structure separately
            double prev = a;
            for (double cut : {2.0, 8.0, b}) {
                double hi = std::min(cut, b);
                if (hi - prev > 1e-14)
                    adaptive(f, prev, hi, abs_tol * 0.4, 0, spec.max_depth, prec, &res);
                prev = std::max(prev, hi);
                if (prev >= b) break;
            }
        }
        inner_err = std::max(inner_err, res.err);
        inner_ok = inner_ok && res.converged;
        return res.value;
    };

    double w_half = 2.0 * 0.8660254037844386 * eps / (1.0 - eps * eps);
    std::set<double> cuts = {-0.5, -0.25, 0.0, 0.25, 0.5};
    if (w_half < 0.49) {
        cuts.insert(-0.5 + w_half);
        cuts.insert(0.5 - w_half);
    }
    std::vector<double> breaks(cuts.begin(), cuts.end());
    QuadResult total;
    total.value = Complex(0L, prec);
    for (size_t i = 0; i + 1 < breaks.size(); ++i)
        adaptive(inner, breaks[i], breaks[i + 1], abs_tol, 0, spec.max_depth / 2, prec, &total);
    return {total.value, total.err + inner_err, total.converged && inner_ok};
}

LiftResult extrapolate(const std::function<DomainIntegral(double)>& at_eps, double eps0,
                       mpfr_prec_t prec) {
    DomainIntegral i0 = at_eps(eps0);
    DomainIntegral i1 = at_eps(eps0 / 2.0);
    DomainIntegral i2 = at_eps(eps0 / 4.0);
    double d01 = (i1.value - i0.value).abs().to_double();
    double d12 = (i2.value - i1.value).abs().to_double();
    double p = 2.0;
    if (d12 > 0.0 && d01 > 0.0) p = std::log2(d01 / d12);
    p = std::clamp(p, 0.5, 6.0);
    double f = std::pow(2.0, p) - 1.0;
    Complex value = i2.value + (i2.value - i1.value) / Real(f, prec);
    Complex prev = i1.value + (i1.value - i0.value) / Real(f, prec);
    LiftResult out;
    out.value = value;
    out.epsilon_order = p;
    out.convergence_estimate =
        (value - prev).abs().to_double() + i0.err + i1.err + i2.err + d12 / f;
    out.quadrature_converged = i0.converged && i1.converged && i2.converged;
    return out;
}

}  // namespace

Complex km_theta_full(const Complex& z, const Complex& tau, const QuadratureSpec& spec,
                      const PrecisionContext& ctx) {
    if (!(z.im() > 0L) || !(tau.im() > 0L))
        throw std::invalid_argument("km_theta_full: both points must lie in the upper half-plane");
    spec.validate();
    ThetaKernel kernel(tau, spec, ctx);
    mpfr_prec_t prec = ctx.prec_bits();
    return kernel.eval(Complex(Real(z.re().to_double(), prec), Real(z.im().to_double(), prec)));
}

LiftResult regularized_lift(const Complex& tau, const QuadratureSpec& spec,
                            const modfuncs::ModularEvaluator& ev) {
    spec.validate();
    mpfr_prec_t prec = ev.prec();
    ThetaKernel kernel(tau, spec, ev.ctx());
    auto integrand = [&](const Complex& z) { return ev.one_over_j(z) * kernel.eval(z); };
    auto at_eps = [&](double e) {
        return integrate_domain(integrand, e, spec, prec, spec.rel_tol);
    };
    return extrapolate(at_eps, spec.epsilon, prec);
}

LiftResult regularized_average_inv_j(const QuadratureSpec& spec,
                                     const modfuncs::ModularEvaluator& ev) {
    spec.validate();
    mpfr_prec_t prec = ev.prec();
    auto integrand = [&](const Complex& z) { return ev.one_over_j(z); };
    auto at_eps = [&](double e) {
        return integrate_domain(integrand, e, spec, prec, spec.rel_tol);
    };
    LiftResult res = extrapolate(at_eps, spec.epsilon, prec);
    Real norm = Real(-1L, prec) / (Real::pi(prec) * 4L);
    res.value = res.value * norm;
    res.convergence_estimate *= std::abs(norm.to_double());
    return res;
}

}  // namespace kmlift::lift

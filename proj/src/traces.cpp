#include "kmlift/traces.hpp"

#include <stdexcept>

namespace kmlift::traces {

using modfuncs::ModularEvaluator;
using quadforms::BinaryQuadraticForm;

Complex elliptic_pairing(const modfuncs::EllipticExpansion& coeffs,
                         const std::map<long, Complex>& raised_values,
                         const PrecisionContext& ctx) {
    mpfr_prec_t prec = ctx.prec_bits();
    Complex total(0L, prec);
    Real im_pow = coeffs.center.im();  // Im(center)^n, starting at n = 1
    Real inv_fact(1L, prec);           // 1/(n-1)!
    for (long n = 1; n <= -coeffs.n_min; ++n) {
        Complex c = coeffs.coeff(-n);
        // coefficients below the expansion's own error budget count as zero
        if (!c.is_zero() && c.abs().to_double() > coeffs.error_budget) {
            auto it = raised_values.find(n);
            if (it == raised_values.end())
                throw std::invalid_argument(
                    "elliptic_pairing: missing raised value for nonzero principal coefficient");
            total += c * it->second * im_pow * inv_fact;
        }
        im_pow *= coeffs.center.im();
        inv_fact = inv_fact / n;  // 1/(n-1)! for the next n
    }
    return total * (Real::pi(prec) * (-4L));
}

std::optional<mpq_class> reconstruct_rational(const Real& x, int digits) {
    mpfr_prec_t prec = x.prec();
    mpz_class den_bound = 1;
    for (int i = 0; i < digits / 3; ++i) den_bound *= 10;
    // acceptance at the value's own noise floor: generic irrationals have
    // convergents no better than ~1/q^2 >= 10^{-2 digits/3}, far above this
    Real tol = pow10(-(digits - 12), prec);

    Real t = x;
    mpz_class p_prev = 1, q_prev = 0;
    mpz_class p = t.floor_to_integer(), q = 1;
    Real frac = t - Real(p, prec);
    for (int it = 0; it < 300; ++it) {
        mpq_class cand(p, q);
        cand.canonicalize();
        if (abs(x - Real(cand, prec)) < tol) return cand;
        if (frac.is_zero() || abs(frac) < pow10(-(digits + digits / 2), prec)) break;
        t = Real(1L, prec) / frac;
        mpz_class a = t.floor_to_integer();
        frac = t - Real(a, prec);
        mpz_class p_next = a * p + p_prev;
        mpz_class q_next = a * q + q_prev;
        p_prev = p;
        q_prev = q;
        p = p_next;
        q = q_next;
        if (q > den_bound) break;
    }
    return std::nullopt;
}

TraceCalculator::TraceCalculator(PrecisionContext ctx)
    : eval_(std::make_shared<const ModularEvaluator>(ctx)) {}

const ModularEvaluator& TraceCalculator::check_evaluator() const {
    if (!check_eval_) {
        PrecisionContext c = PrecisionContext::with_digits(
            std::min(240, eval_->ctx().precision_digits + eval_->ctx().precision_digits / 2));
        check_eval_ = std::make_shared<const ModularEvaluator>(c);
    }
    return *check_eval_;
}

Real TraceCalculator::trace_value(std::int64_t D, const ModularEvaluator& ev, int* classes) const {
    auto reps = quadforms::class_representatives(D);
    if (classes) *classes = static_cast<int>(reps.size());
    mpfr_prec_t prec = ev.prec();
    Complex total(0L, prec);
    for (const auto& q : reps) {
        auto cm = quadforms::cm_point(q, ev.ctx());
        Complex value = ev.equivalent_to_corner(cm.value) ? ev.inv_j_expansion().coeff(0)
                                                          : ev.one_over_j(cm.value);
        total += value / long(quadforms::stabilizer_order(q));
    }
    return total.re();
}

Real TraceCalculator::trace_zero_value(const ModularEvaluator& ev) const {
    mpfr_prec_t prec = ev.prec();
    std::map<long, Complex> raised;
    for (int m = 0; m <= 2; ++m) raised.emplace(m + 1, ev.raised_e2star_at_rho(m));
    Complex pairing = elliptic_pairing(ev.inv_j_expansion(), raised, ev.ctx());
    // (pi/3) * (1/|stab(rho)|) * sum ... == -pairing/36
    return (pairing / (-36L)).re();
}

TraceEntry TraceCalculator::trace(std::int64_t D, bool reconstruct) const {
    if (D >= 0) throw std::invalid_argument("trace: D must be negative (use trace_zero for D = 0)");
    TraceEntry entry;
    entry.D = D;
    entry.value = trace_value(D, *eval_, &entry.class_count);
    if (reconstruct && entry.class_count > 0) {
        auto guess = reconstruct_rational(entry.value, ctx().precision_digits);
        if (guess) {
            // accept only when stable at half again the working precision
            Real refined = trace_value(D, check_evaluator(), nullptr);
            auto guess2 = reconstruct_rational(refined, check_evaluator().ctx().precision_digits);
            if (guess2 && *guess == *guess2) entry.rational_guess = *guess;
        }
    }
    return entry;
}

TraceEntry TraceCalculator::trace_zero(bool reconstruct) const {
    TraceEntry entry;
    entry.D = 0;
    entry.class_count = 1;
    entry.value = trace_zero_value(*eval_);
    if (reconstruct) {
        auto guess = reconstruct_rational(entry.value, ctx().precision_digits);
        if (guess) {
            Real refined = trace_zero_value(check_evaluator());
            auto guess2 = reconstruct_rational(refined, check_evaluator().ctx().precision_digits);
            if (guess2 && *guess == *guess2) entry.rational_guess = *guess;
        }
    }
    return entry;
}

std::vector<TraceEntry> TraceCalculator::generating_series(std::int64_t d_min,
                                                           bool reconstruct) const {
    if (d_min >= 0) throw std::invalid_argument("generating_series: d_min must be negative");
    std::vector<TraceEntry> out;
    out.reserve(static_cast<size_t>(-d_min) + 1);
    for (std::int64_t D = d_min; D < 0; ++D) {
        std::int64_t r = ((D % 4) + 4) % 4;
        if (r == 2 || r == 3) {
            out.push_back({D, Real(0L, eval_->prec()), mpq_class(0), 0});
        } else {
            out.push_back(trace(D, reconstruct));
        }
    }
    out.push_back(trace_zero(reconstruct));
    return out;
}

}  // namespace kmlift::traces

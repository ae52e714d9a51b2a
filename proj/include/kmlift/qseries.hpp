#pragma once

#include <utility>
#include <vector>

#include "kmlift/complexhp.hpp"
#include "kmlift/precision.hpp"

namespace kmlift {

/// Truncated Fourier series sum_i coeff_i * q^(num_i/denom) with rational
/// exponents of bounded denominator. Exponent numerators are strictly
/// ascending and below `truncation` (same 1/denom units); terms at or above
/// the truncation are dropped and accounted for in `error_budget` together
/// with accumulated rounding.
struct QExpansion {
    int denom = 1;
    long truncation = 0;
    std::vector<std::pair<long, Complex>> terms;
    double error_budget = 0.0;

    QExpansion() = default;
    QExpansion(int denom_, long truncation_, std::vector<std::pair<long, Complex>> terms_,
               double error_budget_ = 0.0);

    bool empty() const { return terms.empty(); }
    /// Smallest exponent numerator (requires non-empty).
    long order_num() const { return terms.front().first; }
    const Complex& leading() const { return terms.front().second; }

    /// Coefficient at exponent num/denom (zero if absent).
    Complex coeff(long num, mpfr_prec_t prec) const;

    /// sum of |coeff|, used for error-budget propagation.
    double norm1() const;

    /// Evaluate at tau in the upper half-plane (q = e^{2 pi i tau}).
    Complex eval(const Complex& tau, const PrecisionContext& ctx) const;
};

QExpansion series_add(const QExpansion& f, const QExpansion& g);
QExpansion series_multiply(const QExpansion& f, const QExpansion& g);
/// Reciprocal series; requires nonzero leading coefficient.
QExpansion series_invert(const QExpansion& f);
QExpansion series_scale(const QExpansion& f, const Complex& s);
QExpansion series_scale(const QExpansion& f, const Real& s);
/// q d/dq, multiplying each coefficient by its exponent.
QExpansion series_qderiv(const QExpansion& f);

/// Gamma function of a positive rational argument at context precision.
Real gamma_eval(long num, long den, const PrecisionContext& ctx);

}  // namespace kmlift

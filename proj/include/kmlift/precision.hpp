#pragma once

#include <cmath>
#include <stdexcept>

#include <mpfr.h>

namespace kmlift {

/// Working-accuracy bundle threaded through every numeric operation.
///
/// precision_digits is the requested decimal accuracy; the underlying MPFR
/// precision carries a guard of ~15 digits on top. tail_tolerance is the
/// target bound on every discarded series or lattice tail. lattice_cutoff,
/// when positive, caps the radius of lattice sums (otherwise cutoffs are
/// chosen adaptively from tail_tolerance).
struct PrecisionContext {
    int precision_digits = 60;
    long series_order = 72;
    double lattice_cutoff = 0.0;  // 0 = choose adaptively
    double tail_tolerance = 1e-66;

    mpfr_prec_t prec_bits() const {
        return static_cast<mpfr_prec_t>(std::ceil((precision_digits + 15) * 3.3219280948873626));
    }

    void validate() const {
        if (precision_digits < 30 || precision_digits > 240)
            throw std::invalid_argument("precision_digits must be in [30, 240]");
        if (series_order < 1) throw std::invalid_argument("series_order must be positive");
        if (!(tail_tolerance > 0.0))
            throw std::invalid_argument("tail_tolerance must be positive");
        if (tail_tolerance >= std::pow(10.0, -precision_digits / 2.0))
            throw std::invalid_argument("tail_tolerance must be < 10^(-precision_digits/2)");
        if (lattice_cutoff < 0.0) throw std::invalid_argument("lattice_cutoff must be >= 0");
    }

    /// Defaults tuned so q-expansions evaluated anywhere in the fundamental
    /// domain (Im z >= sqrt(3)/2) meet tail_tolerance: solves
    /// pi*sqrt(3)*N - 4*pi*sqrt(N) >= ln(10)*(digits+8) for the order N,
    /// the 4*pi*sqrt(N) slack covering the subexponential coefficient growth
    /// of j and its relatives.
    static PrecisionContext with_digits(int digits) {
        PrecisionContext ctx;
        ctx.precision_digits = digits;
        double target = 2.302585092994046 * (digits + 8);
        long n = 8;
        while (M_PI * 1.7320508075688772 * n - 4 * M_PI * std::sqrt(double(n)) < target) ++n;
        ctx.series_order = n + 4;
        ctx.tail_tolerance = std::pow(10.0, -(digits + 6.0));
        ctx.validate();
        return ctx;
    }
};

}  // namespace kmlift

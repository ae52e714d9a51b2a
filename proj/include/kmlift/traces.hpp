#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "kmlift/modfuncs.hpp"

namespace kmlift::traces {

struct TraceEntry {
    std::int64_t D = 0;
    Real value;
    std::optional<mpq_class> rational_guess;
    int class_count = 0;
};

/// -4 pi sum_{n>=1} Im(center)^n/(n-1)! c(-n) raised_values[n], the boundary
/// pairing of a meromorphic function against the raisings of a real-analytic
/// one. Every n with c(-n) != 0 must come with a raised value.
Complex elliptic_pairing(const modfuncs::EllipticExpansion& coeffs,
                         const std::map<long, Complex>& raised_values,
                         const PrecisionContext& ctx);

/// Continued-fraction rational reconstruction with denominator bound
/// 10^(digits/3); accepts when |x - p/q| < 10^(-digits/2).
std::optional<mpq_class> reconstruct_rational(const Real& x, int digits);

/// Traces of CM values of 1/j, with the regularized average value at D = 0.
class TraceCalculator {
public:
    explicit TraceCalculator(PrecisionContext ctx);

    const modfuncs::ModularEvaluator& evaluator() const { return *eval_; }
    const PrecisionContext& ctx() const { return eval_->ctx(); }

    /// D < 0. Stabilizer-weighted sum of CM values; classes whose CM point is
    /// Gamma-equivalent to the corner contribute the constant Laurent
    /// coefficient of 1/j instead of a (divergent) direct value.
    TraceEntry trace(std::int64_t D, bool reconstruct = false) const;

    /// Regularized average of 1/j over the modular surface, evaluated through
    /// the Eisenstein boundary pairing.
    TraceEntry trace_zero(bool reconstruct = false) const;

    /// Entries for d_min <= D <= 0 (zero entries included).
    std::vector<TraceEntry> generating_series(std::int64_t d_min, bool reconstruct = false) const;

private:
    Real trace_value(std::int64_t D, const modfuncs::ModularEvaluator& ev, int* classes) const;
    Real trace_zero_value(const modfuncs::ModularEvaluator& ev) const;
    const modfuncs::ModularEvaluator& check_evaluator() const;

    std::shared_ptr<const modfuncs::ModularEvaluator> eval_;
    mutable std::shared_ptr<const modfuncs::ModularEvaluator> check_eval_;  // built on demand
};

}  // namespace kmlift::traces

#pragma once

#include <string>
#include <vector>

#include "kmlift/lift.hpp"

namespace kmlift::verify {

struct CheckResult {
    std::string name;
    std::string target;    // closed-form or reference value
    std::string computed;
    double tolerance = 0.0;
    double residual = 0.0;
    bool pass = false;
};

bool all_pass(const std::vector<CheckResult>& checks);

/// Closed-form targets: the five leading generating-series values, the
/// Chowla-Selberg period, the two corner Laurent constants of 1/j, and the
/// twice-raised Eisenstein value at the corner.
std::vector<CheckResult> check_reference_values(const PrecisionContext& ctx);

/// |lhs - rhs| of the two theta-splitting routes at each tau.
std::vector<CheckResult> check_splitting(const std::vector<Complex>& taus,
                                         const PrecisionContext& ctx);

/// Mode-by-mode lowering of the completion coefficients against the raised
/// kernel sums (finite differences vs closed form).
std::vector<CheckResult> check_lowering(const traces::TraceCalculator& tc);

/// Proportionality of the assembled xi-image with the unary-times-binary
/// theta combination across sample points.
std::vector<CheckResult> check_shadow(const traces::TraceCalculator& tc);

/// Quadrature oracle against the truncated Fourier expansion at tau.
std::vector<CheckResult> check_integral(const Complex& tau, const traces::TraceCalculator& tc,
                                        const lift::QuadratureSpec& spec);

/// Decomposition of the weight-7/2 unary theta and its xi-image.
std::vector<CheckResult> check_unary_decomposition(const PrecisionContext& ctx);

}  // namespace kmlift::verify

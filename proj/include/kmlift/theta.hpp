#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "kmlift/traces.hpp"

namespace kmlift::theta {

using quadforms::BinaryQuadraticForm;

struct ThetaValue {
    Complex value;
    double cutoff = 0.0;
    double tail_bound = 0.0;
};

/// Unary theta sums over a = h (mod 3). Weight 3/2 is sum a q^{a^2/3};
/// weight 7/2 carries the Hermite factor H_3(2 sqrt(pi v) a / sqrt 3) and a
/// v^{-3/2} front factor.
ThetaValue theta_unary(int twice_weight, int h, const Complex& tau, const PrecisionContext& ctx);

/// Binary theta of weight 4: sum over b = c (mod 2), b = h (mod 3) of
/// (b - i sqrt 3 c)^3 q^{b^2/3 + c^2}.
ThetaValue theta_binary_4(int h, const Complex& tau, const PrecisionContext& ctx);

/// sum_h v^{7/2} conj(theta_{7/2,h}) theta_{4,h}.
Complex shadow_combination(const Complex& tau, const PrecisionContext& ctx);

/// Holomorphic weight-3/2 unary theta as a q-expansion (denominator 3).
QExpansion theta_unary_series(int h, const PrecisionContext& ctx);

enum class KernelKind { PhiKM, PhiKMStar, EtaKM };

/// Gaussian theta kernels in the form variable; EtaKM has a pole at the CM
/// point of Q and raises a domain error there.
Complex kernel(KernelKind kind, const BinaryQuadraticForm& q, const Complex& z, const Real& v);

/// (R_2^m f)(z) for m = 0, 1, 2 computed from exact z-derivatives (jets).
std::array<Complex, 3> eta_raised(const BinaryQuadraticForm& q, const Complex& z, const Real& v);
std::array<Complex, 3> phi_star_raised(const BinaryQuadraticForm& q, const Complex& z,
                                       const Real& v);

/// sum over forms of discriminant D (excluding the zero form and forms whose
/// CM point is exactly the corner) of R_2^m eta at the corner; m <= 2.
ThetaValue singular_theta_coeff(std::int64_t D, int m, const Real& v,
                                const PrecisionContext& ctx);

/// The image of the D-th singular coefficient under the single-mode lowering
/// v^2 d/dv, computed analytically: 4 * sum R_2^m phi* at the corner. The
/// factor 4 is forced by the kernels' Gaussian normalization and is validated
/// against finite differences in the test suite.
ThetaValue singular_theta_coeff_lowered(std::int64_t D, int m, const Real& v,
                                        const PrecisionContext& ctx);

/// 2 tr(D) plus the corner boundary term against the raised singular theta;
/// only the order-3 principal coefficient of 1/j contributes.
Complex completion_coefficient(std::int64_t D, const Real& v, const traces::TraceCalculator& tc);

/// Sampled completion coefficient: value at each v equals
/// 2 * trace_part + singular boundary term evaluated there.
struct CompletionCoefficient {
    std::int64_t D = 0;
    Real trace_part;
    std::vector<std::pair<Real, Complex>> v_samples;
};

CompletionCoefficient sample_completion(std::int64_t D, const std::vector<double>& v_values,
                                        const traces::TraceCalculator& tc);

/// Same lattice sum written on the form side (lhs) and split into the
/// unary-times-binary congruence sum (rhs); both truncated below
/// tail_tolerance.
std::pair<Complex, Complex> splitting_sides(const Complex& tau, const PrecisionContext& ctx);

struct LoweringEntry {
    std::int64_t D = 0;
    double v = 0.0;
    Complex fd_side;        // v^2 d/dv of the completion coefficient (finite differences)
    Complex analytic_side;  // raised phi* sum with its forced constant
    double rel_error = 0.0;
};

struct LoweringReport {
    std::vector<LoweringEntry> entries;
    double max_rel_error = 0.0;
    // shadow proportionality: xi of the completed series against the
    // unary-times-binary combination, fitted per tau
    std::vector<Complex> fitted_constants;
    double constant_spread = 0.0;  // max relative deviation from the mean
    Complex mean_constant;
};

LoweringReport lowering_and_xi_checks(const std::vector<std::int64_t>& d_set,
                                      const std::vector<double>& v_set,
                                      const std::vector<Complex>& taus,
                                      const traces::TraceCalculator& tc);

struct DecompositionReport {
    Complex direct;          // theta_{7/2,h}(tau) summed directly
    Complex holomorphic;     // (64 pi^{3/2} / 3 sqrt 3) sum a^3 q^{a^2/3}
    Complex eichler;         // -(24 sqrt pi / (sqrt 3 v)) sum a q^{a^2/3}
    double decomposition_residual = 0.0;
    Complex xi_ratio;        // xi_{7/2} theta_{7/2,h} / (v^{3/2} conj(theta_{3/2,h}))
};

/// Splits the weight-7/2 unary theta into its holomorphic and Eichler parts
/// and measures its xi-image against the weight-3/2 theta.
DecompositionReport unary_theta_decomposition(int h, const Complex& tau,
                                              const PrecisionContext& ctx);

}  // namespace kmlift::theta

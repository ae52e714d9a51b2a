#pragma once

#include "kmlift/theta.hpp"

namespace kmlift::lift {

/// Parameters of the brute-force quadrature over the fundamental domain with
/// disk excisions around the corner orbit.
struct QuadratureSpec {
    double epsilon = 0.05;   // excision radius in the disk-coordinate metric
    double y_max = 8.0;      // height truncation of the domain
    int d_max = 40;          // Fourier truncation of the theta kernel
    double rel_tol = 1e-9;   // adaptive quadrature target per strip
    int max_depth = 22;      // recursion cap of the adaptive rule
    double theta_tol = 1e-14;  // absolute lattice-tail target inside the kernel

    void validate() const;
};

/// Full Kudla-Millson theta sum over |D| <= d_max at one point, including the
/// zero-form constant -1/(2 pi).
Complex km_theta_full(const Complex& z, const Complex& tau, const QuadratureSpec& spec,
                      const PrecisionContext& ctx);

struct LiftResult {
    Complex value;
    double convergence_estimate = 0.0;  // from the excision-radius extrapolation
    double epsilon_order = 0.0;         // measured convergence order in epsilon
    bool quadrature_converged = true;
};

/// Regularized pairing of 1/j against the theta kernel: adaptive quadrature
/// over {|x| <= 1/2, |z| >= 1, y <= y_max} minus excised disks around both
/// corners, evaluated at three excision radii and extrapolated to zero.
LiftResult regularized_lift(const Complex& tau, const QuadratureSpec& spec,
                            const modfuncs::ModularEvaluator& ev);

/// Same machinery with the theta kernel replaced by the constant 1: the
/// regularized average of 1/j over the modular surface, times -1/(4 pi) to
/// match the trace normalization.
LiftResult regularized_average_inv_j(const QuadratureSpec& spec,
                                     const modfuncs::ModularEvaluator& ev);

}  // namespace kmlift::lift

#pragma once

#include <utility>
#include <vector>

#include "kmlift/qseries.hpp"
#include "kmlift/quadforms.hpp"

namespace kmlift::modfuncs {

using quadforms::Mat2;

enum class SeriesName { E4, E6, Delta, J, E2Star };

/// q-expansion of the named holomorphic series (for E2Star, the holomorphic
/// part 1 - 24 sum sigma_1(n) q^n).
QExpansion build_series(SeriesName name, const PrecisionContext& ctx);

/// Polynomial in 1/(-4 pi y) with q-expansion coefficients: parts[m] is the
/// coefficient of (-1/(4 pi y))^m. Transforms with its stated weight.
struct AlmostHolomorphicForm {
    int weight = 0;
    std::vector<QExpansion> parts;
};

AlmostHolomorphicForm e2_star(const PrecisionContext& ctx);

/// Iterated Maass raising R_k = 2i d/dz + k/y; weight goes up by 2 per step.
AlmostHolomorphicForm raise_weight(const AlmostHolomorphicForm& form, int times,
                                   const PrecisionContext& ctx);

/// Evaluate the polynomial-in-1/y representation at z (no reduction).
Complex eval_at(const AlmostHolomorphicForm& form, const Complex& z, const PrecisionContext& ctx);

/// Map z into |Re z| <= 1/2, |z| >= 1; returns (z', M) with z' = M z.
std::pair<Complex, Mat2> reduce_to_fundamental_domain(const Complex& z);

/// Laurent coefficients c(n) of a modular function in the disk coordinate
/// X(z) = (z - center)/(z - conj(center)) around `center`.
struct EllipticExpansion {
    Complex center;
    long n_min = 0, n_max = 0;
    std::vector<Complex> coeffs;  // index n - n_min
    double error_budget = 0.0;

    /// c(n); zero outside [n_min, n_max] (out_of_range flag reports that).
    Complex coeff(long n, bool* out_of_range = nullptr) const;
};

/// Chowla-Selberg period of Q(sqrt(-3)):
/// (6 pi)^{-1/2} (Gamma(1/3)/Gamma(2/3))^{3/2}.
Real chowla_selberg(const PrecisionContext& ctx);

/// Bundles the q-expansions, the corner expansions and the Eisenstein special
/// values needed by traces/theta/lift; built once per PrecisionContext.
/// All state is immutable after construction.
class ModularEvaluator {
public:
    explicit ModularEvaluator(PrecisionContext ctx);

    const PrecisionContext& ctx() const { return ctx_; }
    mpfr_prec_t prec() const { return ctx_.prec_bits(); }

    /// Corner of the fundamental domain, (1 + i sqrt 3)/2.
    const Complex& rho() const { return rho_; }
    const Real& omega() const { return omega_; }

    /// Reduce-and-evaluate with the weight cocycle undone.
    Complex eval_modular(SeriesName name, const Complex& z) const;

    Complex j(const Complex& z) const { return eval_modular(SeriesName::J, z); }
    /// 1/j; switches to the Laurent expansion near the corner orbit to avoid
    /// cancellation at the third-order pole.
    Complex one_over_j(const Complex& z) const;
    /// E2* including its exact -3/(pi y) part.
    Complex e2_star_value(const Complex& z) const;

    /// True when z is Gamma-equivalent to the corner rho (within
    /// 10^{-digits/2} after reduction).
    bool equivalent_to_corner(const Complex& z) const;

    /// Cauchy-integral Laurent coefficients around rho; `reciprocal` selects
    /// 1/j (order-3 pole) versus j (order-3 zero). Contour radius must lie in
    /// (0, 1/2].
    EllipticExpansion elliptic_coefficients(bool reciprocal, long n_min, long n_max,
                                            double radius = 0.25) const;

    /// Cached expansions of j and 1/j around rho.
    const EllipticExpansion& j_expansion() const { return j_exp_; }
    const EllipticExpansion& inv_j_expansion() const { return inv_j_exp_; }

    /// (R_2^m E2*)(rho) for m = 0, 1, 2.
    const Complex& raised_e2star_at_rho(int m) const;

    const QExpansion& series(SeriesName name) const;

private:
    PrecisionContext ctx_;
    Complex rho_;
    Real omega_;
    QExpansion e4_, e6_, delta_, j_, e2_hol_;
    AlmostHolomorphicForm e2star_;
    EllipticExpansion j_exp_, inv_j_exp_;
    std::vector<Complex> e2star_raised_;  // values at rho, m = 0..2
    double corner_tol_;
};

}  // namespace kmlift::modfuncs

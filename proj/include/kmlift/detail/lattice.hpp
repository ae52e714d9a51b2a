#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

namespace kmlift::detail {

/// Cutoff A for one-dimensional Gaussian-type tails
/// sum_{|n| > A} (1+|n|)^deg e^{-c n^2} < tol, via the ratio test; on return
/// *tail_bound holds the certified bound for the chosen A.
inline long gaussian_cutoff(double c, int deg, double tol, double* tail_bound = nullptr) {
    auto term = [&](double n) { return std::pow(1.0 + n, deg) * std::exp(-c * n * n); };
    long A = 1;
    for (; A < 100000; ++A) {
        double ratio = std::pow(1.0 + 1.0 / double(A + 1), deg) * std::exp(-c * (2.0 * A + 3.0));
        if (ratio >= 0.5) continue;
        double bound = 2.0 * term(double(A + 1)) / (1.0 - ratio);
        if (bound < tol) {
            if (tail_bound) *tail_bound = bound;
            return A;
        }
    }
    if (tail_bound) *tail_bound = term(double(A));
    return A;
}

/// Certified tail bound of the same sums at a given cutoff A (valid when the
/// geometric ratio test holds there; conservative otherwise).
inline double gaussian_tail_at(double c, int deg, long A) {
    double ratio = std::pow(1.0 + 1.0 / double(A + 1), deg) * std::exp(-c * (2.0 * A + 3.0));
    double term = std::pow(2.0 + double(A), deg) * std::exp(-c * double(A + 1) * double(A + 1));
    if (ratio < 0.5) return 2.0 * term / (1.0 - ratio);
    return 1e6 * term;
}

/// Integer points of the ellipsoid x^T G x <= R2 for a symmetric positive
/// definite 3x3 Gram matrix (row-major), via Cholesky box bounds. The double
/// precision here only shapes the search box; membership is tested exactly on
/// the quadratic form with a small slack, so every lattice point with
/// x^T G x <= R2 is returned.
inline std::vector<std::array<std::int64_t, 3>> enumerate_ellipsoid(
    const std::array<double, 9>& G, double R2) {
    // Cholesky G = L L^T
    double l11 = std::sqrt(G[0]);
    double l21 = G[3] / l11, l31 = G[6] / l11;
    double l22 = std::sqrt(std::max(G[4] - l21 * l21, 1e-300));
    double l32 = (G[7] - l31 * l21) / l22;
    double l33 = std::sqrt(std::max(G[8] - l31 * l31 - l32 * l32, 1e-300));

    std::vector<std::array<std::int64_t, 3>> out;
    const double slack = 1.0 + 1e-9;
    double r = std::sqrt(R2) * slack;
    long zmax = static_cast<long>(std::floor(r / l33)) + 1;
    for (long z = -zmax; z <= zmax; ++z) {
        double rem_z = R2 * slack - l33 * l33 * double(z) * double(z);
        if (rem_z < 0) continue;
        double ycenter = -l32 * z / l22;
        double yrad = std::sqrt(rem_z) / l22;
        long ylo = static_cast<long>(std::ceil(ycenter - yrad - 1e-9));
        long yhi = static_cast<long>(std::floor(ycenter + yrad + 1e-9));
        for (long y = ylo; y <= yhi; ++y) {
            double uy = l22 * y + l32 * z;
            double rem_y = rem_z - uy * uy;
            if (rem_y < 0) continue;
            double xcenter = -(l21 * y + l31 * z) / l11;
            double xrad = std::sqrt(rem_y) / l11;
            long xlo = static_cast<long>(std::ceil(xcenter - xrad - 1e-9));
            long xhi = static_cast<long>(std::floor(xcenter + xrad + 1e-9));
            for (long x = xlo; x <= xhi; ++x) {
                double xs = double(x), ys = double(y), zs = double(z);
                double q = G[0] * xs * xs + G[4] * ys * ys + G[8] * zs * zs +
                           2.0 * (G[1] * xs * ys + G[2] * xs * zs + G[5] * ys * zs);
                if (q <= R2 * slack) out.push_back({x, y, z});
            }
        }
    }
    return out;
}

}  // namespace kmlift::detail

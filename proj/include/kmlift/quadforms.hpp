#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "kmlift/complexhp.hpp"
#include "kmlift/precision.hpp"

namespace kmlift::quadforms {

/// Integral binary quadratic form a x^2 + b x y + c y^2.
struct BinaryQuadraticForm {
    std::int64_t a = 0, b = 0, c = 0;

    std::int64_t discriminant() const { return b * b - 4 * a * c; }
    bool positive_definite() const { return discriminant() < 0 && a > 0; }
    bool is_reduced() const;
    BinaryQuadraticForm negated() const { return {-a, -b, -c}; }

    friend bool operator==(const BinaryQuadraticForm&, const BinaryQuadraticForm&) = default;
};

/// Element of SL2(Z), acting on H by Moebius transformation and on forms on
/// the right by substitution of variables.
struct Mat2 {
    std::int64_t a = 1, b = 0, c = 0, d = 1;
    std::int64_t det() const { return a * d - b * c; }

    friend Mat2 operator*(const Mat2& m, const Mat2& n) {
        return {m.a * n.a + m.b * n.c, m.a * n.b + m.b * n.d,
                m.c * n.a + m.d * n.c, m.c * n.b + m.d * n.d};
    }
    friend bool operator==(const Mat2&, const Mat2&) = default;
};

Complex moebius(const Mat2& m, const Complex& z);

/// Q | M: substitute (x, y) -> (a x + b y, c x + d y).
BinaryQuadraticForm apply(const BinaryQuadraticForm& q, const Mat2& m);

/// Q(z, 1) = a z^2 + b z + c.
Complex q_of(const BinaryQuadraticForm& q, const Complex& z);

/// Q_z = (a |z|^2 + b x + c) / y.
Real q_z(const BinaryQuadraticForm& q, const Complex& z);

/// Gauss reduction. Returns the reduced representative (|b| <= a <= c with
/// b >= 0 on the boundary) and the transformation M with apply(q, M) == reduced.
std::pair<BinaryQuadraticForm, Mat2> reduce(const BinaryQuadraticForm& q);

/// One reduced form per class; empty for discriminants with no forms.
std::vector<BinaryQuadraticForm> class_representatives(std::int64_t D);

/// Order of the stabilizer in PSL2(Z) of a reduced positive definite form.
int stabilizer_order(const BinaryQuadraticForm& q);

struct CMPoint {
    Complex value;
    BinaryQuadraticForm source_form;
};

/// Root of Q(z,1) = 0 in the upper half-plane.
CMPoint cm_point(const BinaryQuadraticForm& q, const PrecisionContext& ctx);

/// Stabilizer-weighted class count as an exact rational.
mpq_class hurwitz_class_number(std::int64_t D);

}  // namespace kmlift::quadforms

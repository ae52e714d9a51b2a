#include "kmlift/quadforms.hpp"

#include <cmath>
#include <stdexcept>

namespace kmlift::quadforms {

bool BinaryQuadraticForm::is_reduced() const {
    if (!positive_definite()) return false;
    std::int64_t ab = b < 0 ? -b : b;
    if (!(ab <= a && a <= c)) return false;
    if ((ab == a || a == c) && b < 0) return false;
    return true;
}

Complex moebius(const Mat2& m, const Complex& z) {
    mpfr_prec_t p = z.prec();
    Complex num = z * m.a + Complex(Real(long(m.b), p));
    Complex den = z * m.c + Complex(Real(long(m.d), p));
    return num / den;
}

BinaryQuadraticForm apply(const BinaryQuadraticForm& q, const Mat2& m) {
    // Q(ax + by, cx + dy)
    std::int64_t na = q.a * m.a * m.a + q.b * m.a * m.c + q.c * m.c * m.c;
    std::int64_t nb = 2 * q.a * m.a * m.b + q.b * (m.a * m.d + m.b * m.c) + 2 * q.c * m.c * m.d;
    std::int64_t nc = q.a * m.b * m.b + q.b * m.b * m.d + q.c * m.d * m.d;
    return {na, nb, nc};
}

Complex q_of(const BinaryQuadraticForm& q, const Complex& z) {
    mpfr_prec_t p = z.prec();
    return (z * q.a + Complex(Real(long(q.b), p))) * z + Complex(Real(long(q.c), p));
}

Real q_z(const BinaryQuadraticForm& q, const Complex& z) {
    return (z.norm() * long(q.a) + z.re() * long(q.b) + Real(long(q.c), z.prec())) / z.im();
}

std::pair<BinaryQuadraticForm, Mat2> reduce(const BinaryQuadraticForm& q0) {
    if (!q0.positive_definite())
        throw std::invalid_argument("reduce: form must be positive definite");
    BinaryQuadraticForm q = q0;
    Mat2 m;  // accumulated transformation, q0 | m == q
    const Mat2 S{0, -1, 1, 0};
    for (int guard = 0; guard < 4096; ++guard) {
        // translate b into (-a, a]
        if (q.b > q.a || q.b <= -q.a) {
            std::int64_t k = -(std::int64_t)std::llround(double(q.b) / double(2 * q.a));
            // exact adjustment in case of rounding at the halfway point
            while (q.b + 2 * q.a * k > q.a) --k;
            while (q.b + 2 * q.a * k <= -q.a) ++k;
            Mat2 t{1, k, 0, 1};
            q = apply(q, t);
            m = m * t;
        }
        if (q.a > q.c) {
            q = apply(q, S);
            m = m * S;
            continue;
        }
        break;
    }
    if (q.b < 0 && (-q.b == q.a || q.a == q.c)) {
        // boundary tie-break: [a,-a,c] ~ [a,a,c] and [a,-b,a] ~ [a,b,a]
        Mat2 t = (-q.b == q.a) ? Mat2{1, 1, 0, 1} : Mat2{0, -1, 1, 0};
        q = apply(q, t);
        m = m * t;
    }
    return {q, m};
}

std::vector<BinaryQuadraticForm> class_representatives(std::int64_t D) {
    if (D >= 0) throw std::invalid_argument("class_representatives: D must be negative");
    std::vector<BinaryQuadraticForm> out;
    std::int64_t r = ((D % 4) + 4) % 4;
    if (r == 2 || r == 3) return out;  // b^2 = D (mod 4) has no solution
    for (std::int64_t a = 1; 3 * a * a <= -D; ++a) {
        for (std::int64_t b = -a + 1; b <= a; ++b) {
            std::int64_t num = b * b - D;
            if (num % (4 * a) != 0) continue;
            std::int64_t c = num / (4 * a);
            if (c < a) continue;
            if (a == c && b < 0) continue;
            out.push_back({a, b, c});
        }
    }
    return out;
}

int stabilizer_order(const BinaryQuadraticForm& q) {
    if (!q.is_reduced()) throw std::invalid_argument("stabilizer_order: form must be reduced");
    if (q.a == q.b && q.b == q.c) return 3;
    if (q.b == 0 && q.a == q.c) return 2;
    return 1;
}

CMPoint cm_point(const BinaryQuadraticForm& q, const PrecisionContext& ctx) {
    if (!q.positive_definite())
        throw std::invalid_argument("cm_point: form must be positive definite");
    mpfr_prec_t p = ctx.prec_bits();
    Real root = sqrt(Real(-q.discriminant(), p));
    return {Complex(Real(-q.b, p) / (2 * q.a), root / (2 * q.a)), q};
}

mpq_class hurwitz_class_number(std::int64_t D) {
    std::int64_t r = ((D % 4) + 4) % 4;
    if (D >= 0 || (r == 2 || r == 3))
        throw std::invalid_argument("hurwitz_class_number: D must be negative and 0,1 mod 4");
    mpq_class h = 0;
    for (const auto& q : class_representatives(D)) h += mpq_class(1, stabilizer_order(q));
    h.canonicalize();
    return h;
}

}  // namespace kmlift::quadforms

#pragma once

#include <mpfr.h>
#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <utility>

namespace kmlift {

/// Arbitrary-precision real number backed by MPFR.
///
/// Every value carries its own precision (in bits); binary operations round
/// the result at the larger of the two operand precisions. All operations are
/// correctly rounded (MPFR round-to-nearest), so results are exact to within
/// one unit in the last place of the carried precision.
class Real {
public:
    Real() { mpfr_init2(v_, 64); mpfr_set_nan(v_); }
    explicit Real(mpfr_prec_t prec) { mpfr_init2(v_, prec); mpfr_set_zero(v_, 1); }

    Real(long value, mpfr_prec_t prec) {
        mpfr_init2(v_, prec);
        mpfr_set_si(v_, value, MPFR_RNDN);
    }
    Real(double value, mpfr_prec_t prec) {
        mpfr_init2(v_, prec);
        mpfr_set_d(v_, value, MPFR_RNDN);
    }
    Real(const std::string& decimal, mpfr_prec_t prec) {
        mpfr_init2(v_, prec);
        mpfr_set_str(v_, decimal.c_str(), 10, MPFR_RNDN);
    }
    Real(const mpz_class& value, mpfr_prec_t prec) {
        mpfr_init2(v_, prec);
        mpfr_set_z(v_, value.get_mpz_t(), MPFR_RNDN);
    }
    Real(const mpq_class& value, mpfr_prec_t prec) {
        mpfr_init2(v_, prec);
        mpfr_set_q(v_, value.get_mpq_t(), MPFR_RNDN);
    }

    Real(const Real& other) {
        mpfr_init2(v_, mpfr_get_prec(other.v_));
        mpfr_set(v_, other.v_, MPFR_RNDN);
    }
    Real(Real&& other) noexcept {
        mpfr_init2(v_, 64);
        mpfr_swap(v_, other.v_);
    }
    Real& operator=(const Real& other) {
        if (this != &other) {
            mpfr_set_prec(v_, mpfr_get_prec(other.v_));
            mpfr_set(v_, other.v_, MPFR_RNDN);
        }
        return *this;
    }
    Real& operator=(Real&& other) noexcept {
        mpfr_swap(v_, other.v_);
        return *this;
    }
    ~Real() { mpfr_clear(v_); }

    mpfr_prec_t prec() const { return mpfr_get_prec(v_); }
    const mpfr_t& raw() const { return v_; }
    mpfr_t& raw() { return v_; }

    bool is_nan() const { return mpfr_nan_p(v_) != 0; }
    bool is_zero() const { return mpfr_zero_p(v_) != 0; }
    int sign() const { return mpfr_sgn(v_); }

    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
    long to_long() const { return mpfr_get_si(v_, MPFR_RNDN); }

    /// Nearest integer as an exact GMP integer.
    mpz_class round_to_integer() const;
    mpz_class floor_to_integer() const;

    /// Decimal string with the given number of significant digits.
    std::string str(int digits) const;

    Real& operator+=(const Real& o);
    Real& operator-=(const Real& o);
    Real& operator*=(const Real& o);
    Real& operator/=(const Real& o);

    friend Real operator+(const Real& a, const Real& b);
    friend Real operator-(const Real& a, const Real& b);
    friend Real operator*(const Real& a, const Real& b);
    friend Real operator/(const Real& a, const Real& b);
    friend Real operator-(const Real& a);

    friend Real operator+(const Real& a, long b);
    friend Real operator+(long a, const Real& b) { return b + a; }
    friend Real operator-(const Real& a, long b);
    friend Real operator-(long a, const Real& b);
    friend Real operator*(const Real& a, long b);
    friend Real operator*(long a, const Real& b) { return b * a; }
    friend Real operator/(const Real& a, long b);
    friend Real operator/(long a, const Real& b);

    friend bool operator<(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_) < 0; }
    friend bool operator>(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_) > 0; }
    friend bool operator<=(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_) <= 0; }
    friend bool operator>=(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_) >= 0; }
    friend bool operator==(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_) == 0; }
    friend bool operator!=(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_) != 0; }

    friend bool operator<(const Real& a, long b) { return mpfr_cmp_si(a.v_, b) < 0; }
    friend bool operator>(const Real& a, long b) { return mpfr_cmp_si(a.v_, b) > 0; }
    friend bool operator<=(const Real& a, long b) { return mpfr_cmp_si(a.v_, b) <= 0; }
    friend bool operator>=(const Real& a, long b) { return mpfr_cmp_si(a.v_, b) >= 0; }
    friend bool operator==(const Real& a, long b) { return mpfr_cmp_si(a.v_, b) == 0; }

    static Real pi(mpfr_prec_t prec);
    static Real log2(mpfr_prec_t prec);

private:
    mpfr_t v_;
};

Real abs(const Real& x);
Real sqrt(const Real& x);
Real exp(const Real& x);
Real log(const Real& x);
Real sin(const Real& x);
Real cos(const Real& x);
/// Simultaneous sine and cosine of the same angle.
std::pair<Real, Real> sin_cos(const Real& x);
Real atan2(const Real& y, const Real& x);
Real pow(const Real& x, long n);
/// x^(p/q) for x > 0.
Real pow(const Real& x, const Real& y);
Real floor(const Real& x);
Real hypot(const Real& x, const Real& y);

/// Euler gamma function of a positive argument.
Real gamma(const Real& x);

/// 10^e at the given precision (e may be negative).
Real pow10(long e, mpfr_prec_t prec);

}  // namespace kmlift

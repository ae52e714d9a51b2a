#include "kmlift/real.hpp"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <stdexcept>

namespace kmlift {

namespace {
mpfr_prec_t join(const Real& a, const Real& b) {
    return std::max(a.prec(), b.prec());
}
}  // namespace

mpz_class Real::round_to_integer() const {
    mpfr_t t;
    mpfr_init2(t, mpfr_get_prec(v_));
    mpfr_round(t, v_);
    mpz_class out;
    mpfr_get_z(out.get_mpz_t(), t, MPFR_RNDN);
    mpfr_clear(t);
    return out;
}

mpz_class Real::floor_to_integer() const {
    mpfr_t t;
    mpfr_init2(t, mpfr_get_prec(v_));
    mpfr_floor(t, v_);
    mpz_class out;
    mpfr_get_z(out.get_mpz_t(), t, MPFR_RNDN);
    mpfr_clear(t);
    return out;
}

std::string Real::str(int digits) const {
    if (mpfr_nan_p(v_)) return "nan";
    if (mpfr_zero_p(v_)) return "0";
    mpfr_exp_t e;
    char* s = mpfr_get_str(nullptr, &e, 10, static_cast<size_t>(digits), v_, MPFR_RNDN);
    std::string mant(s);
    mpfr_free_str(s);
    std::string sign;
    if (mant[0] == '-') {
        sign = "-";
        mant = mant.substr(1);
    }
    // strip trailing zeros but keep at least one digit
    size_t last = mant.find_last_not_of('0');
    mant = mant.substr(0, std::max<size_t>(last + 1, 1));
    std::string out = sign + mant.substr(0, 1);
    if (mant.size() > 1) out += "." + mant.substr(1);
    long dec_exp = static_cast<long>(e) - 1;
    if (dec_exp != 0) out += "e" + std::to_string(dec_exp);
    return out;
}

Real& Real::operator+=(const Real& o) {
    mpfr_prec_t p = join(*this, o);
    if (p != prec()) {
        Real r(p);
        mpfr_add(r.v_, v_, o.v_, MPFR_RNDN);
        *this = std::move(r);
    } else {
        mpfr_add(v_, v_, o.v_, MPFR_RNDN);
    }
    return *this;
}
Real& Real::operator-=(const Real& o) {
    mpfr_prec_t p = join(*this, o);
    if (p != prec()) {
        Real r(p);
        mpfr_sub(r.v_, v_, o.v_, MPFR_RNDN);
        *this = std::move(r);
    } else {
        mpfr_sub(v_, v_, o.v_, MPFR_RNDN);
    }
    return *this;
}
Real& Real::operator*=(const Real& o) {
    mpfr_prec_t p = join(*this, o);
    if (p != prec()) {
        Real r(p);
        mpfr_mul(r.v_, v_, o.v_, MPFR_RNDN);
        *this = std::move(r);
    } else {
        mpfr_mul(v_, v_, o.v_, MPFR_RNDN);
    }
    return *this;
}
Real& Real::operator/=(const Real& o) {
    mpfr_prec_t p = join(*this, o);
    if (p != prec()) {
        Real r(p);
        mpfr_div(r.v_, v_, o.v_, MPFR_RNDN);
        *this = std::move(r);
    } else {
        mpfr_div(v_, v_, o.v_, MPFR_RNDN);
    }
    return *this;
}

Real operator+(const Real& a, const Real& b) {
    Real r(join(a, b));
    mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
}
Real operator-(const Real& a, const Real& b) {
    Real r(join(a, b));
    mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
}
Real operator*(const Real& a, const Real& b) {
    Real r(join(a, b));
    mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
}
Real operator/(const Real& a, const Real& b) {
    Real r(join(a, b));
    mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
}
Real operator-(const Real& a) {
    Real r(a.prec());
    mpfr_neg(r.v_, a.v_, MPFR_RNDN);
    return r;
}

Real operator+(const Real& a, long b) {
    Real r(a.prec());
    mpfr_add_si(r.v_, a.v_, b, MPFR_RNDN);
    return r;
}
Real operator-(const Real& a, long b) {
    Real r(a.prec());
    mpfr_sub_si(r.v_, a.v_, b, MPFR_RNDN);
    return r;
}
Real operator-(long a, const Real& b) {
    Real r(b.prec());
    mpfr_si_sub(r.v_, a, b.v_, MPFR_RNDN);
    return r;
}
Real operator*(const Real& a, long b) {
    Real r(a.prec());
    mpfr_mul_si(r.v_, a.v_, b, MPFR_RNDN);
    return r;
}
Real operator/(const Real& a, long b) {
    Real r(a.prec());
    mpfr_div_si(r.v_, a.v_, b, MPFR_RNDN);
    return r;
}
Real operator/(long a, const Real& b) {
    Real r(b.prec());
    mpfr_si_div(r.v_, a, b.v_, MPFR_RNDN);
    return r;
}

Real Real::pi(mpfr_prec_t prec) {
    Real r(prec);
    mpfr_const_pi(r.v_, MPFR_RNDN);
    return r;
}

Real Real::log2(mpfr_prec_t prec) {
    Real r(prec);
    mpfr_const_log2(r.v_, MPFR_RNDN);
    return r;
}

#define KMLIFT_UNARY(name, call)                \
    Real name(const Real& x) {                  \
        Real r(x.prec());                       \
        call(r.raw(), x.raw(), MPFR_RNDN);      \
        return r;                               \
    }

KMLIFT_UNARY(abs, mpfr_abs)
KMLIFT_UNARY(sqrt, mpfr_sqrt)
KMLIFT_UNARY(exp, mpfr_exp)
KMLIFT_UNARY(log, mpfr_log)
KMLIFT_UNARY(sin, mpfr_sin)
KMLIFT_UNARY(cos, mpfr_cos)
KMLIFT_UNARY(gamma, mpfr_gamma)

#undef KMLIFT_UNARY

Real floor(const Real& x) {
    Real r(x.prec());
    mpfr_rint_floor(r.raw(), x.raw(), MPFR_RNDN);
    return r;
}

std::pair<Real, Real> sin_cos(const Real& x) {
    Real s(x.prec()), c(x.prec());
    mpfr_sin_cos(s.raw(), c.raw(), x.raw(), MPFR_RNDN);
    return {std::move(s), std::move(c)};
}

Real atan2(const Real& y, const Real& x) {
    Real r(std::max(x.prec(), y.prec()));
    mpfr_atan2(r.raw(), y.raw(), x.raw(), MPFR_RNDN);
    return r;
}

Real pow(const Real& x, long n) {
    Real r(x.prec());
    mpfr_pow_si(r.raw(), x.raw(), n, MPFR_RNDN);
    return r;
}

Real pow(const Real& x, const Real& y) {
    Real r(std::max(x.prec(), y.prec()));
    mpfr_pow(r.raw(), x.raw(), y.raw(), MPFR_RNDN);
    return r;
}

Real hypot(const Real& x, const Real& y) {
    Real r(std::max(x.prec(), y.prec()));
    mpfr_hypot(r.raw(), x.raw(), y.raw(), MPFR_RNDN);
    return r;
}

Real pow10(long e, mpfr_prec_t prec) {
    Real r(prec);
    mpfr_ui_pow_ui(r.raw(), 10, static_cast<unsigned long>(e < 0 ? -e : e), MPFR_RNDN);
    if (e < 0) mpfr_si_div(r.raw(), 1, r.raw(), MPFR_RNDN);
    return r;
}

}  // namespace kmlift

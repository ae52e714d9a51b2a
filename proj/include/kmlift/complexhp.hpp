#pragma once

#include "kmlift/real.hpp"

namespace kmlift {

/// Complex number over kmlift::Real.
class Complex {
public:
    Complex() = default;
    explicit Complex(mpfr_prec_t prec) : re_(prec), im_(prec) {}
    Complex(Real re, Real im) : re_(std::move(re)), im_(std::move(im)) {}
    explicit Complex(Real re) : re_(std::move(re)), im_(Real(0L, re_.prec())) {}
    Complex(long re, mpfr_prec_t prec) : re_(re, prec), im_(0L, prec) {}

    const Real& re() const { return re_; }
    const Real& im() const { return im_; }
    mpfr_prec_t prec() const { return std::max(re_.prec(), im_.prec()); }

    bool is_zero() const { return re_.is_zero() && im_.is_zero(); }

    friend Complex operator+(const Complex& a, const Complex& b) {
        return {a.re_ + b.re_, a.im_ + b.im_};
    }
    friend Complex operator-(const Complex& a, const Complex& b) {
        return {a.re_ - b.re_, a.im_ - b.im_};
    }
    friend Complex operator-(const Complex& a) { return {-a.re_, -a.im_}; }
    friend Complex operator*(const Complex& a, const Complex& b) {
        return {a.re_ * b.re_ - a.im_ * b.im_, a.re_ * b.im_ + a.im_ * b.re_};
    }
    friend Complex operator*(const Complex& a, const Real& s) { return {a.re_ * s, a.im_ * s}; }
    friend Complex operator*(const Real& s, const Complex& a) { return a * s; }
    friend Complex operator*(const Complex& a, long s) { return {a.re_ * s, a.im_ * s}; }
    friend Complex operator*(long s, const Complex& a) { return a * s; }
    friend Complex operator/(const Complex& a, const Real& s) { return {a.re_ / s, a.im_ / s}; }
    friend Complex operator/(const Complex& a, long s) { return {a.re_ / s, a.im_ / s}; }
    friend Complex operator/(const Complex& a, const Complex& b) {
        Real n = b.norm();
        return {(a.re_ * b.re_ + a.im_ * b.im_) / n, (a.im_ * b.re_ - a.re_ * b.im_) / n};
    }

    Complex& operator+=(const Complex& o) {
        re_ += o.re_;
        im_ += o.im_;
        return *this;
    }
    Complex& operator-=(const Complex& o) {
        re_ -= o.re_;
        im_ -= o.im_;
        return *this;
    }
    Complex& operator*=(const Complex& o) { return *this = *this * o; }

    Complex conj() const { return {re_, -im_}; }
    /// |z|^2
    Real norm() const { return re_ * re_ + im_ * im_; }
    Real abs() const { return hypot(re_, im_); }

    /// Multiplication by the imaginary unit.
    Complex times_i() const { return {-im_, re_}; }

    static Complex i(mpfr_prec_t prec) { return {Real(0L, prec), Real(1L, prec)}; }

private:
    Real re_, im_;
};

inline Complex exp(const Complex& z) {
    Real m = exp(z.re());
    auto [s, c] = sin_cos(z.im());
    return {m * c, m * s};
}

/// e^{i t}
inline Complex expi(const Real& t) {
    auto [s, c] = sin_cos(t);
    return {c, s};
}

inline Complex pow(const Complex& z, long n) {
    if (n < 0) return Complex(1L, z.prec()) / pow(z, -n);
    Complex acc(1L, z.prec());
    Complex base = z;
    long e = n;
    while (e > 0) {
        if (e & 1) acc *= base;
        base *= base;
        e >>= 1;
    }
    return acc;
}

inline Complex inv(const Complex& z) {
    Real n = z.norm();
    return {z.re() / n, -z.im() / n};
}

}  // namespace kmlift

#include "kmlift/qseries.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

namespace kmlift {

namespace {

constexpr int kDenomBound = 12;

void check_denom(int denom) {
    if (denom <= 0 || kDenomBound % denom != 0)
        throw std::invalid_argument("QExpansion denominator must divide 12");
}

double rounding_unit(mpfr_prec_t prec) { return std::ldexp(1.0, -static_cast<int>(prec) + 2); }

}  // namespace

QExpansion::QExpansion(int denom_, long truncation_, std::vector<std::pair<long, Complex>> terms_,
                       double error_budget_)
    : denom(denom_), truncation(truncation_), terms(std::move(terms_)),
      error_budget(error_budget_) {
    check_denom(denom);
    for (size_t i = 0; i < terms.size(); ++i) {
        if (i > 0 && terms[i].first <= terms[i - 1].first)
            throw std::invalid_argument("QExpansion exponents must be strictly ascending");
        if (terms[i].first >= truncation)
            throw std::invalid_argument("QExpansion exponent at or above truncation");
    }
}

Complex QExpansion::coeff(long num, mpfr_prec_t prec) const {
    auto it = std::lower_bound(terms.begin(), terms.end(), num,
                               [](const auto& t, long n) { return t.first < n; });
    if (it != terms.end() && it->first == num) return it->second;
    return Complex(0L, prec);
}

double QExpansion::norm1() const {
    double s = 0.0;
    for (const auto& [n, c] : terms) s += c.abs().to_double();
    return s;
}

Complex QExpansion::eval(const Complex& tau, const PrecisionContext& ctx) const {
    mpfr_prec_t prec = ctx.prec_bits();
    if (terms.empty()) return Complex(0L, prec);
    Real two_pi = Real::pi(prec) * 2L;
    // q^{1/denom}
    Complex qd = exp(Complex(-two_pi * tau.im() / long(denom), two_pi * tau.re() / long(denom)));
    Complex acc = terms.back().second;
    for (size_t i = terms.size() - 1; i-- > 0;) {
        acc = acc * pow(qd, terms[i + 1].first - terms[i].first) + terms[i].second;
    }
    return acc * pow(qd, terms.front().first);
}

QExpansion series_add(const QExpansion& f, const QExpansion& g) {
    check_denom(f.denom);
    check_denom(g.denom);
    int denom = std::lcm(f.denom, g.denom);
    long sf = denom / f.denom, sg = denom / g.denom;
    long trunc = std::min(f.truncation * sf, g.truncation * sg);
    std::vector<std::pair<long, Complex>> out;
    out.reserve(f.terms.size() + g.terms.size());
    size_t i = 0, j = 0;
    while (i < f.terms.size() || j < g.terms.size()) {
        long nf = i < f.terms.size() ? f.terms[i].first * sf : trunc;
        long ng = j < g.terms.size() ? g.terms[j].first * sg : trunc;
        long n = std::min(nf, ng);
        if (n >= trunc) break;
        Complex c = (n == nf && n == ng) ? f.terms[i].second + g.terms[j].second
                    : (n == nf)          ? f.terms[i].second
                                         : g.terms[j].second;
        if (n == nf) ++i;
        if (n == ng) ++j;
        if (!c.is_zero()) out.emplace_back(n, std::move(c));
    }
    return QExpansion(denom, trunc, std::move(out), f.error_budget + g.error_budget);
}

QExpansion series_multiply(const QExpansion& f, const QExpansion& g) {
    check_denom(f.denom);
    check_denom(g.denom);
    int denom = std::lcm(f.denom, g.denom);
    if (kDenomBound % denom != 0)
        throw std::invalid_argument("series_multiply: denominator bound exceeded");
    long sf = denom / f.denom, sg = denom / g.denom;
    mpfr_prec_t prec = 64;
    for (const auto& [n, c] : f.terms) prec = std::max(prec, c.prec());
    for (const auto& [n, c] : g.terms) prec = std::max(prec, c.prec());
    if (f.terms.empty() || g.terms.empty()) {
        long trunc = std::min(f.truncation * sf, g.truncation * sg);
        return QExpansion(denom, trunc, {}, f.error_budget + g.error_budget);
    }
    // product known up to min over the two "order + truncation" windows
    long trunc = std::min(f.truncation * sf + g.order_num() * sg,
                          g.truncation * sg + f.order_num() * sf);
    std::map<long, Complex> acc;
    for (const auto& [nf, cf] : f.terms) {
        for (const auto& [ng, cg] : g.terms) {
            long n = nf * sf + ng * sg;
            if (n >= trunc) continue;
            auto it = acc.find(n);
            if (it == acc.end())
                acc.emplace(n, cf * cg);
            else
                it->second += cf * cg;
        }
    }
    std::vector<std::pair<long, Complex>> out;
    out.reserve(acc.size());
    for (auto& [n, c] : acc)
        if (!c.is_zero()) out.emplace_back(n, std::move(c));
    double n1f = f.norm1(), n1g = g.norm1();
    double err = f.error_budget * n1g + g.error_budget * n1f +
                 f.error_budget * g.error_budget +
                 rounding_unit(prec) * n1f * n1g * double(std::max<size_t>(f.terms.size(), 1));
    return QExpansion(denom, trunc, std::move(out), err);
}

QExpansion series_invert(const QExpansion& f) {
    if (f.terms.empty() || f.leading().is_zero())
        throw std::invalid_argument("series_invert: zero leading coefficient");
    mpfr_prec_t prec = f.leading().prec();
    long o = f.order_num();
    long len = f.truncation - o;  // relative coefficients known for f
    // g = q^{-o/denom} / (f / q^{o/denom}); long division
    std::vector<Complex> fc(static_cast<size_t>(len), Complex(0L, prec));
    for (const auto& [n, c] : f.terms) fc[static_cast<size_t>(n - o)] = c;
    Complex lead_inv = inv(fc[0]);
    std::vector<Complex> gc(static_cast<size_t>(len), Complex(0L, prec));
    for (long k = 0; k < len; ++k) {
        Complex s = (k == 0) ? Complex(1L, prec) : Complex(0L, prec);
        for (long j = 0; j < k; ++j) s -= fc[static_cast<size_t>(k - j)] * gc[static_cast<size_t>(j)];
        gc[static_cast<size_t>(k)] = s * lead_inv;
    }
    std::vector<std::pair<long, Complex>> out;
    for (long k = 0; k < len; ++k)
        if (!gc[static_cast<size_t>(k)].is_zero()) out.emplace_back(k - o, gc[static_cast<size_t>(k)]);
    double lead = std::max(fc[0].abs().to_double(), 1e-30);
    double err = (f.error_budget / lead + rounding_unit(prec) * double(len)) *
                 std::max(1.0, f.norm1() / lead);
    return QExpansion(f.denom, f.truncation - 2 * o, std::move(out), err);
}

QExpansion series_scale(const QExpansion& f, const Complex& s) {
    std::vector<std::pair<long, Complex>> out;
    out.reserve(f.terms.size());
    for (const auto& [n, c] : f.terms) out.emplace_back(n, c * s);
    return QExpansion(f.denom, f.truncation, std::move(out),
                      f.error_budget * (s.abs().to_double() + 1e-30));
}

QExpansion series_scale(const QExpansion& f, const Real& s) { return series_scale(f, Complex(s)); }

QExpansion series_qderiv(const QExpansion& f) {
    std::vector<std::pair<long, Complex>> out;
    out.reserve(f.terms.size());
    for (const auto& [n, c] : f.terms) {
        if (n == 0) continue;
        Complex d = c * n;
        if (f.denom != 1) d = d / long(f.denom);
        out.emplace_back(n, std::move(d));
    }
    double scale = double(std::max(std::labs(f.truncation), f.empty() ? 1L : std::labs(f.order_num())));
    return QExpansion(f.denom, f.truncation, std::move(out), f.error_budget * scale);
}

Real gamma_eval(long num, long den, const PrecisionContext& ctx) {
    if (num <= 0 || den <= 0) throw std::domain_error("gamma_eval: argument must be positive");
    mpq_class q(num, den);
    q.canonicalize();
    return gamma(Real(q, ctx.prec_bits()));
}

}  // namespace kmlift

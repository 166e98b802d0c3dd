#pragma once

// Minimal double-double arithmetic (unevaluated sum hi + lo, |lo| <= ulp(hi)/2).
// Used where a plain double summation would lose digits to cancellation,
// chiefly the Airy Maclaurin series at moderate |x| and phase reduction of
// the oscillatory asymptotics. Error-free transformations follow the classic
// Dekker/Knuth constructions; products rely on std::fma.

#include <cmath>

namespace airyspec::detail {

struct dd {
    double hi = 0.0;
    double lo = 0.0;

    constexpr dd() = default;
    constexpr dd(double h) : hi(h), lo(0.0) {}
    constexpr dd(double h, double l) : hi(h), lo(l) {}

    explicit operator double() const { return hi + lo; }
};

// s + e = a + b exactly, assuming nothing about |a| vs |b|.
inline dd two_sum(double a, double b) {
    double s = a + b;
    double bb = s - a;
    double e = (a - (s - bb)) + (b - bb);
    return {s, e};
}

// s + e = a + b exactly, assuming |a| >= |b|.
inline dd quick_two_sum(double a, double b) {
    double s = a + b;
    double e = b - (s - a);
    return {s, e};
}

// p + e = a * b exactly.
inline dd two_prod(double a, double b) {
    double p = a * b;
    double e = std::fma(a, b, -p);
    return {p, e};
}

inline dd dd_add(const dd& a, const dd& b) {
    dd s = two_sum(a.hi, b.hi);
    double e = s.lo + a.lo + b.lo;
    return quick_two_sum(s.hi, e);
}

inline dd dd_add(const dd& a, double b) {
    dd s = two_sum(a.hi, b);
    double e = s.lo + a.lo;
    return quick_two_sum(s.hi, e);
}

inline dd dd_neg(const dd& a) { return {-a.hi, -a.lo}; }

inline dd dd_sub(const dd& a, const dd& b) { return dd_add(a, dd_neg(b)); }

inline dd dd_mul(const dd& a, const dd& b) {
    dd p = two_prod(a.hi, b.hi);
    double e = p.lo + a.hi * b.lo + a.lo * b.hi;
    return quick_two_sum(p.hi, e);
}

inline dd dd_mul(const dd& a, double b) {
    dd p = two_prod(a.hi, b);
    double e = p.lo + a.lo * b;
    return quick_two_sum(p.hi, e);
}

inline dd dd_div(const dd& a, const dd& b) {
    double q1 = a.hi / b.hi;
    dd r = dd_sub(a, dd_mul(b, q1));
    double q2 = r.hi / b.hi;
    r = dd_sub(r, dd_mul(b, q2));
    double q3 = r.hi / b.hi;
    dd q = quick_two_sum(q1, q2);
    return dd_add(q, q3);
}

inline dd dd_div(const dd& a, double b) { return dd_div(a, dd(b)); }

// One Newton step on top of the hardware sqrt doubles the correct digits.
inline dd dd_sqrt(const dd& a) {
    if (a.hi == 0.0) return {0.0, 0.0};
    double s = std::sqrt(a.hi);
    dd r = dd_sub(a, two_prod(s, s));
    double corr = r.hi / (2.0 * s);
    return quick_two_sum(s, corr);
}

inline constexpr dd dd_two_pi{6.283185307179586, 2.4492935982947064e-16};
inline constexpr dd dd_pi_quarter{0.7853981633974483, 3.061616997868383e-17};

// theta mod 2*pi, |result| <= pi-ish; adequate for phases |theta| < ~1e6.
inline dd dd_mod_two_pi(const dd& theta) {
    double n = std::nearbyint(theta.hi / dd_two_pi.hi);
    return dd_sub(theta, dd_mul(dd_two_pi, n));
}

}  // namespace airyspec::detail

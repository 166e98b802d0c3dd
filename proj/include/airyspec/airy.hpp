#pragma once

// Airy function Ai and derivatives on the real line.
//
// Evaluation is a two-regime hybrid:
//   |x| <= switch point : Maclaurin series of y'' = xy about 0, summed in
//       compensated double-double arithmetic. The series suffers catastrophic
//       cancellation in plain doubles beyond |x| ~ 6 (largest term / result
//       reaches ~1e6 by x = 9); the compensated sum keeps the absolute error
//       near 1e-25 over the whole series range.
//   |x| >  switch point : Poincare asymptotic expansions in
//       zeta = (2/3)|x|^{3/2}, truncated at the smallest term. At the default
//       switch (9.0, zeta = 18) the truncation floor is ~3e-15 relative, so
//       the two regimes overlap well inside the 1e-12 budget. The oscillatory
//       phase zeta - pi/4 is reduced mod 2pi in double-double to keep the
//       large-|x| phase error below the target.
//
// Exact anchors: Ai(0) = 3^{-2/3}/Gamma(2/3), Ai'(0) = -3^{-1/3}/Gamma(1/3).
// For x >= 107.8 the decay envelope e^{-zeta} falls below the smallest
// subnormal double and ai/ai_prime return exact 0 (kAiUnderflowX); relative
// accuracy already degrades past x ~ 104 where e^{-zeta} turns subnormal.
//
// Higher derivatives use Ai^(n) = p_n Ai + q_n Ai' with the exact integer
// polynomial pair from polynomial.hpp.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "airyspec/detail/dd.hpp"
#include "airyspec/polynomial.hpp"

namespace airyspec {

struct AiryEvalConfig {
    double target_rel_error = 1e-12;
    // Fixed per build; both regimes meet the target on either side of it.
    double series_asymptotic_switch_point = 9.0;
};

inline constexpr double kAiUnderflowX = 107.8;  // zeta(x) > 745.6 beyond this

struct AiryPair {
    double ai;
    double ai_prime;
};

namespace detail {

inline constexpr dd kAi0{0.3550280538878172, 2.05233632436212e-17};
inline constexpr dd kAip0{-0.2588194037928068, 2.522243111610832e-17};

// u_k, v_k coefficients of the Ai/Ai' asymptotic series (computed once).
//   u_0 = 1, u_k = u_{k-1} (6k-5)(6k-3)(6k-1) / (216 k (2k-1)),
//   v_k = u_k (6k+1)/(1-6k).
inline const std::vector<double>& asym_u() {
    static const std::vector<double> u = [] {
        std::vector<double> t(61);
        t[0] = 1.0;
        for (int k = 1; k <= 60; ++k)
            t[k] = t[k - 1] * ((6.0 * k - 5.0) * (6.0 * k - 3.0) * (6.0 * k - 1.0)) /
                   (216.0 * k * (2.0 * k - 1.0));
        return t;
    }();
    return u;
}

inline const std::vector<double>& asym_v() {
    static const std::vector<double> v = [] {
        const auto& u = asym_u();
        std::vector<double> t(u.size());
        for (std::size_t k = 0; k < u.size(); ++k)
            t[k] = u[k] * (6.0 * k + 1.0) / (1.0 - 6.0 * k);
        return t;
    }();
    return v;
}

// Maclaurin branch: Ai = Ai(0) f + Ai'(0) g with f, g the even/odd ODE
// solutions; the four sums (f, g, f', g') share one term loop.
inline AiryPair airy_series(double x) {
    const dd x3 = dd_mul(two_prod(x, x), x);

    dd tf{1.0}, tg{x}, tfp = two_prod(0.5 * x, x), tgp{1.0};
    dd f = tf, g = tg, fp = tfp, gp = tgp;

    for (int k = 1; k < 400; ++k) {
        const double K = 3.0 * k;
        tf = dd_div(dd_mul(tf, x3), K * (K - 1.0));
        tg = dd_div(dd_mul(tg, x3), K * (K + 1.0));
        tgp = dd_div(dd_mul(tgp, x3), K * (K - 2.0));
        if (k >= 2) tfp = dd_div(dd_mul(tfp, x3), (K - 1.0) * (K - 3.0));

        f = dd_add(f, tf);
        g = dd_add(g, tg);
        gp = dd_add(gp, tgp);
        if (k >= 2) fp = dd_add(fp, tfp);

        const double scale = std::fabs(f.hi) + std::fabs(g.hi) + 1.0;
        if (std::fabs(tf.hi) + std::fabs(tg.hi) + std::fabs(tfp.hi) +
                std::fabs(tgp.hi) <
            1e-35 * scale)
            break;
    }

    const dd ai = dd_add(dd_mul(kAi0, f), dd_mul(kAip0, g));
    const dd aip = dd_add(dd_mul(kAi0, fp), dd_mul(kAip0, gp));
    return {static_cast<double>(ai), static_cast<double>(aip)};
}

inline detail::dd zeta_dd(double absx) {
    const dd z{absx};
    return dd_mul(dd_mul(z, dd_sqrt(z)), dd_div(dd(2.0), 3.0));
}

// x > switch point: monotone decaying branch.
inline AiryPair airy_asymptotic_pos(double x) {
    const dd zdd = zeta_dd(x);
    const double zeta = static_cast<double>(zdd);
    if (zeta > 745.6) return {0.0, 0.0};

    const auto& u = asym_u();
    const auto& v = asym_v();
    double su = 1.0, sv = 1.0, pw = 1.0, prev = 1.0;
    for (std::size_t k = 1; k < u.size(); ++k) {
        pw /= -zeta;
        const double tu = u[k] * pw;
        if (std::fabs(tu) >= prev) break;  // smallest-term truncation
        su += tu;
        sv += v[k] * pw;
        prev = std::fabs(tu);
        if (prev < 1e-17) break;
    }
    const double root4 = std::sqrt(std::sqrt(x));
    const double pre = std::exp(-zeta) / (2.0 * std::sqrt(M_PI));
    return {pre / root4 * su, -pre * root4 * sv};
}

// x < -switch point: oscillatory branch, phase handled in double-double.
inline AiryPair airy_asymptotic_neg(double x) {
    const double z = -x;
    const dd zdd = zeta_dd(z);
    const double zeta = static_cast<double>(zdd);

    const auto& u = asym_u();
    const auto& v = asym_v();
    const double izeta2 = 1.0 / (zeta * zeta);
    double pu = 1.0, qu = 0.0, pv = 1.0, qv = 0.0;
    double pw = 1.0, prev = 1.0;
    for (std::size_t k = 0; 2 * k + 1 < u.size(); ++k) {
        const double todd = u[2 * k + 1] * pw / zeta;
        if (std::fabs(todd) >= prev) break;
        qu += (k % 2 ? -todd : todd);
        qv += (k % 2 ? -1.0 : 1.0) * v[2 * k + 1] * pw / zeta;
        prev = std::fabs(todd);

        pw *= izeta2;
        if (2 * k + 2 >= u.size()) break;
        const double teven = u[2 * k + 2] * pw;
        if (std::fabs(teven) >= prev) break;
        pu += (k % 2 ? teven : -teven);
        pv += (k % 2 ? 1.0 : -1.0) * v[2 * k + 2] * pw;
        prev = std::fabs(teven);
        if (prev < 1e-17) break;
    }

    const dd theta = dd_mod_two_pi(dd_sub(zdd, dd_pi_quarter));
    const double c = std::cos(static_cast<double>(theta));
    const double s = std::sin(static_cast<double>(theta));
    const double root4 = std::sqrt(std::sqrt(z));
    const double pre = 1.0 / (std::sqrt(M_PI) * root4);
    return {pre * (c * pu + s * qu), root4 / std::sqrt(M_PI) * (s * pv - c * qv)};
}

}  // namespace detail

// Ai and Ai' together (both regimes produce the pair at no extra cost).
inline AiryPair ai_pair(double x, const AiryEvalConfig& cfg = {}) {
    if (!std::isfinite(x)) throw std::domain_error("ai: non-finite argument");
    const double sw = cfg.series_asymptotic_switch_point;
    if (x > sw) return detail::airy_asymptotic_pos(x);
    if (x < -sw) return detail::airy_asymptotic_neg(x);
    return detail::airy_series(x);
}

inline double ai(double x, const AiryEvalConfig& cfg = {}) {
    return ai_pair(x, cfg).ai;
}

inline double ai_prime(double x, const AiryEvalConfig& cfg = {}) {
    return ai_pair(x, cfg).ai_prime;
}

// Ai^(n)(x) = p_n(x) Ai(x) + q_n(x) Ai'(x).
inline double ai_derivative(unsigned n, double x, const AiryEvalConfig& cfg = {}) {
    const AiryPair a = ai_pair(x, cfg);
    if (n == 0) return a.ai;
    if (n == 1) return a.ai_prime;
    const auto [p, q] = derivative_polynomials(n);
    return p(x) * a.ai + q(x) * a.ai_prime;
}

}  // namespace airyspec

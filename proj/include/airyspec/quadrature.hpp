#pragma once

// Quadrature engines.
//
// FilonPlan integrates f(u)·cos(zu) and f(u)·sin(zu) over [lo, hi] for many
// values of z at once: the amplitude f is expanded once per panel in Legendre
// polynomials (z-independent), and each oscillatory moment
//   ∫_{-1}^{1} P_n(τ) e^{iθτ} dτ = 2 i^n j_n(θ),  θ = z·(panel half-width),
// is evaluated exactly through spherical Bessel functions. Panel widths track
// the amplitude's own oscillation scale, so accuracy is uniform in z — the
// classical Filon idea. Panels split adaptively until the Legendre
// coefficient tail is negligible.
//
// adaptive_gauss is a plain two-level Gauss–Legendre subdivision scheme for
// smooth non-oscillatory integrands (used for moments and normalization).

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <functional>
#include <stdexcept>
#include <vector>

#include "airyspec/errors.hpp"

namespace airyspec {

// Nodes and weights of N-point Gauss–Legendre on [-1, 1], computed by Newton
// iteration on P_N and cached per N.
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

inline const GaussRule& gauss_legendre(unsigned n) {
    static std::array<GaussRule, 65> cache;
    if (n == 0 || n >= cache.size())
        throw std::invalid_argument("gauss_legendre: order out of range");
    GaussRule& rule = cache[n];
    if (!rule.nodes.empty()) return rule;

    GaussRule fresh;
    fresh.nodes.resize(n);
    fresh.weights.resize(n);
    for (unsigned i = 0; i < n; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pd = 0.0;
        for (int it = 0; it < 60; ++it) {
            double p0 = 1.0, p1 = x;  // upward recurrence for P_n(x)
            for (unsigned k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            pd = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / pd;
            x -= dx;
            if (std::fabs(dx) < 1e-16) break;
        }
        fresh.nodes[i] = x;
        fresh.weights[i] = 2.0 / ((1.0 - x * x) * pd * pd);
    }
    rule = std::move(fresh);  // benign rebuild race; result is identical
    return rule;
}

namespace detail {

// j_0..j_nmax at theta >= 0. Upward recurrence when theta dominates the
// order; otherwise Miller's downward recurrence normalized against whichever
// of j_0, j_1 is away from a zero.
inline void spherical_bessel(unsigned nmax, double theta, double* out) {
    if (theta < 1e-8) {  // series: j_n = theta^n / (2n+1)!!
        double v = 1.0;
        for (unsigned n = 0; n <= nmax; ++n) {
            out[n] = v * (1.0 - theta * theta / (4.0 * n + 6.0));
            v *= theta / (2.0 * n + 3.0);
        }
        return;
    }
    const double j0 = std::sin(theta) / theta;
    const double j1 = j0 / theta - std::cos(theta) / theta;
    if (theta > nmax + 5.0) {
        out[0] = j0;
        if (nmax >= 1) out[1] = j1;
        for (unsigned n = 1; n < nmax; ++n)
            out[n + 1] = (2.0 * n + 1.0) / theta * out[n] - out[n - 1];
        return;
    }
    const unsigned start = nmax + 18 + static_cast<unsigned>(theta);
    double jp = 0.0, jc = 1e-300;  // trial values at orders start+2, start+1
    std::array<double, 64> buf{};
    for (unsigned n = start + 1; n-- > 0;) {
        const double jm = (2.0 * n + 3.0) / theta * jc - jp;  // order n
        jp = jc;
        jc = jm;
        if (n <= nmax) buf[n] = jm;
        if (std::fabs(jc) > 1e280) {  // rescale to avoid overflow
            const double s = 1e-280;
            jp *= s;
            jc *= s;
            for (unsigned m = n; m <= nmax; ++m) buf[m] *= s;
        }
    }
    const double scale =
        std::fabs(j0) >= std::fabs(j1) ? j0 / buf[0] : j1 / buf[1];
    for (unsigned n = 0; n <= nmax; ++n) out[n] = buf[n] * scale;
}

}  // namespace detail

class FilonPlan {
  public:
    static constexpr unsigned kOrder = 24;  // Legendre coefficients per panel

    // Expands f over [lo, hi] with panels no wider than max_width; panels
    // whose coefficient tails stay above the resolution target are split.
    // The target is relative to the global amplitude scale — a panel where f
    // is quiet must not chase the roundoff floor of the loud ones.  The
    // coefficient recurrence leaves a roundoff floor of a few kOrder*eps in
    // the top coefficients; 1e-14 clears it with headroom while remaining
    // far below any downstream accuracy target.
    static constexpr double kSplitTolerance = 1e-14;

    static FilonPlan build(const std::function<double(double)>& f, double lo,
                           double hi, double max_width,
                           double split_tolerance = kSplitTolerance) {
        struct Pending {
            Panel panel;
            double tail;
            int depth;
        };
        const GaussRule& rule = gauss_legendre(kOrder);
        double amp_global = 1.0;
        const auto expand = [&](double a, double b, int depth) {
            Pending out;
            Panel& p = out.panel;
            p.center = 0.5 * (a + b);
            p.half = 0.5 * (b - a);
            std::array<double, kOrder> fv{};
            for (unsigned i = 0; i < kOrder; ++i) {
                fv[i] = f(p.center + p.half * rule.nodes[i]);
                amp_global = std::max(amp_global, std::fabs(fv[i]));
            }
            for (unsigned n = 0; n < kOrder; ++n) p.coeff[n] = 0.0;
            for (unsigned i = 0; i < kOrder; ++i) {
                // Accumulate w_i f_i P_n(τ_i) with the P_n recurrence inline.
                double p0 = 1.0, p1 = rule.nodes[i];
                const double wf = rule.weights[i] * fv[i];
                p.coeff[0] += wf;
                p.coeff[1] += wf * p1;
                for (unsigned n = 2; n < kOrder; ++n) {
                    const double p2 =
                        ((2.0 * n - 1.0) * rule.nodes[i] * p1 - (n - 1.0) * p0) / n;
                    p0 = p1;
                    p1 = p2;
                    p.coeff[n] += wf * p2;
                }
            }
            for (unsigned n = 0; n < kOrder; ++n)
                p.coeff[n] *= (2.0 * n + 1.0) / 2.0;
            out.tail = std::fabs(p.coeff[kOrder - 1]) +
                       std::fabs(p.coeff[kOrder - 2]);
            out.depth = depth;
            return out;
        };

        std::vector<Pending> queue;
        const auto n_initial =
            static_cast<std::size_t>(std::ceil((hi - lo) / max_width));
        for (std::size_t i = 0; i < n_initial; ++i) {
            const double a = lo + (hi - lo) * static_cast<double>(i) / n_initial;
            const double b =
                lo + (hi - lo) * static_cast<double>(i + 1) / n_initial;
            queue.push_back(expand(a, b, 0));
        }

        FilonPlan plan;
        while (!queue.empty()) {
            Pending p = queue.back();
            queue.pop_back();
            if (p.tail <= split_tolerance * amp_global) {
                plan.panels_.push_back(p.panel);
                continue;
            }
            if (p.depth >= 8 || plan.panels_.size() + queue.size() > 4096) {
                char msg[160];
                std::snprintf(msg, sizeof msg,
                              "FilonPlan: amplitude not resolved on "
                              "[%.6g, %.6g], coefficient tail %.3e vs %.3e",
                              p.panel.center - p.panel.half,
                              p.panel.center + p.panel.half, p.tail,
                              split_tolerance * amp_global);
                throw ConvergenceError(msg);
            }
            const double a = p.panel.center - p.panel.half;
            const double b = p.panel.center + p.panel.half;
            queue.push_back(expand(a, p.panel.center, p.depth + 1));
            queue.push_back(expand(p.panel.center, b, p.depth + 1));
        }
        return plan;
    }

    // ∫ f(u) cos(zu) du and ∫ f(u) sin(zu) du over the plan's interval.
    double integrate_cos(double z) const { return integrate(z, true); }
    double integrate_sin(double z) const { return integrate(z, false); }

    std::size_t panel_count() const { return panels_.size(); }

  private:
    struct Panel {
        double center;
        double half;
        std::array<double, kOrder> coeff;
    };

    double integrate(double z, bool cosine) const {
        const double az = std::fabs(z);
        double total = 0.0;
        std::array<double, kOrder> j;
        for (const Panel& p : panels_) {
            detail::spherical_bessel(kOrder - 1, az * p.half, j.data());
            // Even-/odd-index Legendre moments of cos(θτ) and sin(θτ).
            double even = 0.0, odd = 0.0;
            double sign = 1.0;
            for (unsigned n = 0; n < kOrder; n += 2) {
                even += sign * p.coeff[n] * j[n];
                if (n + 1 < kOrder) odd += sign * p.coeff[n + 1] * j[n + 1];
                sign = -sign;
            }
            even *= 2.0;
            odd *= 2.0;
            const double c = std::cos(az * p.center);
            const double s = std::sin(az * p.center);
            total += cosine ? p.half * (c * even - s * odd)
                            : p.half * (s * even + c * odd);
        }
        if (!cosine && z < 0.0) return -total;
        return total;
    }

    std::vector<Panel> panels_;
};

// Recursive two-level Gauss–Legendre for smooth integrands: a segment is
// accepted when 16- and two-half refinements agree within the tolerance.
inline double adaptive_gauss(const std::function<double(double)>& f, double lo,
                             double hi, double rel_tol, double abs_tol) {
    const GaussRule& rule = gauss_legendre(16);
    const auto on_segment = [&](double a, double b) {
        const double c = 0.5 * (a + b), h = 0.5 * (b - a);
        double s = 0.0;
        for (unsigned i = 0; i < rule.nodes.size(); ++i)
            s += rule.weights[i] * f(c + h * rule.nodes[i]);
        return h * s;
    };
    struct Seg {
        double a, b, whole;
        int depth;
    };
    std::vector<Seg> stack{{lo, hi, on_segment(lo, hi), 0}};
    double total = 0.0;
    long splits = 0;
    while (!stack.empty()) {
        const Seg s = stack.back();
        stack.pop_back();
        const double mid = 0.5 * (s.a + s.b);
        const double left = on_segment(s.a, mid);
        const double right = on_segment(mid, s.b);
        if (++splits > 20000)
            throw ConvergenceError("adaptive_gauss: too many subdivisions");
        const double diff = std::fabs(left + right - s.whole);
        if (s.depth > 0 && (diff <= rel_tol * std::fabs(left + right) ||
                            diff <= abs_tol)) {
            total += left + right;
            continue;
        }
        if (s.depth >= 40)
            throw ConvergenceError("adaptive_gauss: recursion limit at [" +
                                   std::to_string(s.a) + ", " +
                                   std::to_string(s.b) + "]");
        stack.push_back({s.a, mid, left, s.depth + 1});
        stack.push_back({mid, s.b, right, s.depth + 1});
    }
    return total;
}

}  // namespace airyspec

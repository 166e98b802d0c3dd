#pragma once

// Eigenfunctions of H = sqrt(-d^2/dx^2) + x^2.
//
// In transform space the eigenfunction equation becomes Airy's equation, so
// the n-th eigenfunction is the cosine (n odd) or sine (n even) transform of
// Ai shifted by the eigenvalue:
//
//   phi_n(x) = c_n ∫_0^∞ Ai(u + a) trig(xu) du,
//
// where a = a'_k (n = 2k-1) or a_k (n = 2k) and trig is cos/sin by parity.
// The amplitude Ai(u + a) is expanded once into Filon panels, making a single
// evaluation cheap for any x. For large |x| the integral is replaced by its
// integration-by-parts expansion: boundary terms are Airy derivatives at the
// zero (polynomial combinations of Ai, Ai'), and the pushed-down remainder
// carries amplitude Ai^(10), so the accuracy of the asymptotic tail is not
// limited by quadrature noise.
//
// The normalization constant is determined numerically from ||phi_n|| = 1,
// with the sign fixed so that phi_n(0) > 0 (n odd) or phi_n'(0) > 0 (n even).

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

#include "airyspec/airy.hpp"
#include "airyspec/errors.hpp"
#include "airyspec/quadrature.hpp"
#include "airyspec/spectrum.hpp"

namespace airyspec {

// Largest admissible power in moment(m, a): the integrand u^m Ai(u + a)
// peaks near exp((2m/3)(log m - 1)), which overflows double beyond ~230.
inline constexpr unsigned kMaxMomentOrder = 220;

// Largest eigenfunction index kept by the registry.
inline constexpr unsigned kMaxEigenfunctionIndex = 5000;

namespace detail {

// Decay envelope of Ai on the positive axis.
inline double airy_envelope(double v) {
    return std::exp(-2.0 / 3.0 * v * std::sqrt(v)) /
           (2.0 * std::sqrt(M_PI) * std::pow(v, 0.25));
}

// Offset c with airy_envelope(c)/sqrt(c) <= 1e-14: integrating Ai-sized
// amplitudes past v = c changes nothing at working precision.
inline double amplitude_cutoff() {
    double v = 9.0;
    while (airy_envelope(v) / std::sqrt(v) > 1e-14) v += 0.25;
    return v;
}

// ∫_0^∞ Ai(u + a) u^m du by adaptive quadrature. The cutoff U is chosen so
// that the envelope bound on the discarded tail,
//   Ai_env(U+a) U^m / (sqrt(U+a) - m/U),
// is below 1e-14 (worked in logs to sidestep overflow of U^m).
inline double moment_value(unsigned m, double a) {
    if (!std::isfinite(a)) throw std::invalid_argument("moment: shift must be finite");
    if (m > kMaxMomentOrder)
        throw std::invalid_argument("moment: order " + std::to_string(m) +
                                    " exceeds double range");
    const auto log_tail_bound = [&](double u) {
        const double v = u + a;
        if (v <= 1.0) return HUGE_VAL;
        const double decay = std::sqrt(v) - static_cast<double>(m) / u;
        if (decay <= 0.05) return HUGE_VAL;
        return -2.0 / 3.0 * v * std::sqrt(v) - 0.25 * std::log(v) -
               std::log(2.0 * std::sqrt(M_PI)) +
               static_cast<double>(m) * std::log(u) - std::log(decay);
    };
    double u_end = std::max(4.0, -a + 4.0);
    for (int guard = 0; log_tail_bound(u_end) > std::log(1e-14); ++guard) {
        if (guard > 500)
            throw ConvergenceError("moment: tail cutoff search failed");
        u_end *= 1.15;
    }
    const auto f = [&](double u) {
        return ai(u + a) * std::pow(u, static_cast<double>(m));
    };
    double peak = 0.0;
    for (int i = 0; i <= 128; ++i)
        peak = std::max(peak, std::fabs(f(u_end * i / 128.0)));
    return adaptive_gauss(f, 0.0, u_end, 1e-13, 1e-15 * peak * u_end);
}

}  // namespace detail

// One transform-space moment ∫_0^∞ Ai(u + a) u^m du.
struct Moment {
    unsigned m;
    double a;
    double value;
};

inline Moment moment(unsigned m, double a) {
    return Moment{m, a, detail::moment_value(m, a)};
}

class Eigenfunction {
  public:
    explicit Eigenfunction(unsigned n) {
        if (n < 1 || n > kMaxEigenfunctionIndex)
            throw std::invalid_argument("Eigenfunction: index out of range");
        n_ = n;
        parity_ = (n % 2 == 1) ? Parity::even_function : Parity::odd_function;
        k_ = (n + 1) / 2;
        a_ = (parity_ == Parity::even_function) ? airy_prime_zero(k_)
                                                : airy_zero(k_);
        lambda_ = -a_;
        u_end_ = detail::amplitude_cutoff() - a_;
        width_ = std::min(1.75, 4.0 / std::sqrt(lambda_ + 2.0));
        plan_ = FilonPlan::build([this](double u) { return ai(u + a_); }, 0.0,
                                 u_end_, width_);
        normalize();
    }

    Eigenfunction(const Eigenfunction&) = delete;
    Eigenfunction& operator=(const Eigenfunction&) = delete;

    unsigned index() const { return n_; }
    Parity parity() const { return parity_; }
    unsigned zero_index() const { return k_; }
    double lambda() const { return lambda_; }

    // Signed prefactor against the un-normalized transform integral; the sign
    // realizes phi_n > 0 just right of the origin.
    double norm_constant() const { return norm_; }

    // int_R phi_n dx.  For even functions this is the cosine transform of the
    // Airy profile evaluated at frequency zero, pi * c * Ai(a); odd functions
    // integrate to zero by symmetry.
    double integral() const {
        return parity_ == Parity::even_function ? M_PI * norm_ * ai(a_) : 0.0;
    }

    double evaluate(double x) const {
        if (!std::isfinite(x))
            throw std::invalid_argument("evaluate: x must be finite");
        if (x == 0.0 && parity_ == Parity::odd_function) return 0.0;
        const double z = std::fabs(x);
        const double raw = (z >= kAsymptoticSwitch) ? raw_large(z) : raw_direct(z);
        double v = norm_ * raw;
        if (parity_ == Parity::odd_function && x < 0.0) v = -v;
        return v;
    }

    // Asymptotic tail sum_{s=2..terms} (-1)^s Ai^(2s-1)(a)/z^{2s} (n odd,
    // even orders for n even), in the same normalization as evaluate().
    double tail_expansion(double z, unsigned terms) const {
        if (terms < 2)
            throw std::invalid_argument("tail_expansion: need at least 2 terms");
        if (!std::isfinite(z) || z == 0.0)
            throw std::invalid_argument("tail_expansion: z must be finite, nonzero");
        const double az = std::fabs(z);
        const double z2 = az * az;
        double sum = 0.0;
        double sign = 1.0;  // (-1)^s at s = 2
        if (parity_ == Parity::even_function) {
            double zp = z2 * z2;
            for (unsigned s = 2; s <= terms; ++s) {
                sum += sign * ai_derivative(2 * s - 1, a_) / zp;
                zp *= z2;
                sign = -sign;
            }
        } else {
            double zp = z2 * z2 * az;
            for (unsigned s = 2; s <= terms; ++s) {
                sum += sign * ai_derivative(2 * s, a_) / zp;
                zp *= z2;
                sign = -sign;
            }
        }
        double v = norm_ * sum;
        if (parity_ == Parity::odd_function && z < 0.0) v = -v;
        return v;
    }

    // Taylor sum of all terms with exponent <= max_power. Coefficients are
    // the transform-space moments: phi ~ sum (-1)^m w_{2m} x^{2m}/(2m)! for
    // even functions, odd powers with w_{2m+1} for odd ones.
    double maclaurin(double x, unsigned max_power) const {
        if (!std::isfinite(x))
            throw std::invalid_argument("maclaurin: x must be finite");
        if (max_power > kMaxMomentOrder)
            throw std::invalid_argument("maclaurin: power exceeds moment range");
        const double x2 = x * x;
        double sum = 0.0, sign = 1.0;
        if (parity_ == Parity::even_function) {
            double r = 1.0;  // x^{2m}/(2m)!
            for (unsigned m = 0; 2 * m <= max_power; ++m) {
                if (m > 0) r *= x2 / ((2.0 * m - 1.0) * (2.0 * m));
                sum += sign * cached_moment(2 * m) * r;
                sign = -sign;
            }
        } else {
            double r = x;  // x^{2m+1}/(2m+1)!
            for (unsigned m = 0; 2 * m + 1 <= max_power; ++m) {
                if (m > 0) r *= x2 / ((2.0 * m) * (2.0 * m + 1.0));
                sum += sign * cached_moment(2 * m + 1) * r;
                sign = -sign;
            }
        }
        return norm_ * sum;
    }

    // Window beyond which the leading tail term dominates the next by at
    // least a factor of eight; all sign changes live inside [-A, A].
    double tail_window() const {
        const double z_star = parity_ == Parity::even_function
                                  ? std::sqrt(8.0 * lambda_)
                                  : std::sqrt(6.0 * lambda_);
        return 2.0 * z_star;
    }

    // Number of sign changes, validated on a doubled grid.
    unsigned count_zeros() const {
        const double window = tail_window();
        const auto scan = [&](double target_h) {
            const auto mpts = static_cast<std::size_t>(
                std::ceil(2.0 * window / target_h));
            const double h = 2.0 * window / static_cast<double>(mpts);
            unsigned changes = 0;
            double prev = evaluate(-window + 0.5 * h);
            for (std::size_t i = 1; i < mpts; ++i) {
                const double cur =
                    evaluate(-window + (static_cast<double>(i) + 0.5) * h);
                if (prev * cur < 0.0) ++changes;
                if (cur != 0.0) prev = cur;
            }
            return changes;
        };
        const double h = std::min(0.02, M_PI / (6.0 * lambda_));
        const unsigned coarse = scan(h), fine = scan(0.5 * h);
        if (coarse != fine)
            throw ConvergenceError("count_zeros: grid-dependent count for n=" +
                                   std::to_string(n_) + " (" +
                                   std::to_string(coarse) + " vs " +
                                   std::to_string(fine) + ")");
        return coarse;
    }

    // Max of |phi_n| over the real line: dense scan of the oscillatory
    // window, hill-climb refinement, and the tail envelope beyond.
    double sup_norm() const {
        const double window = tail_window();
        const double h = std::min(0.01, M_PI / (8.0 * lambda_));
        double best = 0.0, arg_best = 0.0;
        for (double x = 0.0; x <= window; x += h) {
            const double v = std::fabs(evaluate(x));
            if (v > best) {
                best = v;
                arg_best = x;
            }
        }
        for (double step = 0.5 * h; step > 1e-7; step *= 0.5) {
            for (const double x : {arg_best - step, arg_best + step}) {
                const double v = std::fabs(evaluate(std::max(x, 0.0)));
                if (v > best) {
                    best = v;
                    arg_best = std::max(x, 0.0);
                }
            }
        }
        const double tail_cap =
            2.0 * std::fabs(parity_ == Parity::even_function
                                ? norm_ * ai(a_) / std::pow(window, 4)
                                : norm_ * 2.0 * ai_prime(a_) / std::pow(window, 5));
        return std::max(best, tail_cap);
    }

    // (-d^2/dx^2)^{1/2} phi_n at x: same transform integral with an extra
    // factor u in the amplitude.
    double symbol_applied(double x) const {
        if (!std::isfinite(x))
            throw std::invalid_argument("symbol_applied: x must be finite");
        const FilonPlan* plan = symbol_plan();
        const double z = std::fabs(x);
        double v = norm_ * (parity_ == Parity::even_function
                                ? plan->integrate_cos(z)
                                : plan->integrate_sin(z));
        if (parity_ == Parity::odd_function && x < 0.0) v = -v;
        return v;
    }

  private:
    static constexpr double kAsymptoticSwitch = 30.0;
    static constexpr unsigned kIbpOrder = 5;  // boundary terms through z^{-10}

    double raw_direct(double z) const {
        return parity_ == Parity::even_function ? plan_.integrate_cos(z)
                                                : plan_.integrate_sin(z);
    }

    // Integration by parts m = kIbpOrder times: exact boundary series plus a
    // z^{-2m}-damped remainder with amplitude Ai^(2m).
    double raw_large(double z) const {
        const FilonPlan* rem = remainder_plan();
        const double z2 = z * z;
        double sum = 0.0;
        if (parity_ == Parity::even_function) {
            double zp = z2, sign = -1.0;  // (-1)^s from s = 1
            for (unsigned s = 1; s <= kIbpOrder; ++s) {
                sum += sign * ai_derivative(2 * s - 1, a_) / zp;
                zp *= z2;
                sign = -sign;
            }
            sum -= rem->integrate_cos(z) / std::pow(z2, static_cast<double>(kIbpOrder));
        } else {
            double zp = z, sign = 1.0;  // (-1)^s from s = 0
            for (unsigned s = 0; s < kIbpOrder; ++s) {
                sum += sign * ai_derivative(2 * s, a_) / zp;
                zp *= z2;
                sign = -sign;
            }
            sum -= rem->integrate_sin(z) / std::pow(z2, static_cast<double>(kIbpOrder));
        }
        return sum;
    }

    void normalize() {
        // ||phi||^2 = 2 ∫_0^Z raw^2 dz + analytic tail; panel width tracks
        // the z-oscillation scale 2π/λ of the eigenfunction near the origin.
        const double z_end = std::max(30.0, std::sqrt(8.0 * lambda_) + 8.0);
        const double wz = std::min(0.5, 9.0 / lambda_);
        const GaussRule& rule = gauss_legendre(16);
        const auto panels = static_cast<std::size_t>(std::ceil(z_end / wz));
        double ss = 0.0;
        for (std::size_t p = 0; p < panels; ++p) {
            const double lo = z_end * static_cast<double>(p) / panels;
            const double hi = z_end * static_cast<double>(p + 1) / panels;
            const double c = 0.5 * (lo + hi), hh = 0.5 * (hi - lo);
            for (unsigned i = 0; i < rule.nodes.size(); ++i) {
                const double r = raw_direct(c + hh * rule.nodes[i]);
                ss += hh * rule.weights[i] * r * r;
            }
        }
        if (parity_ == Parity::even_function) {
            const double lead = ai(a_);  // tail ~ lead/z^4
            ss += lead * lead / (7.0 * std::pow(z_end, 7));
        } else {
            const double lead = 2.0 * ai_prime(a_);  // tail ~ lead/z^5
            ss += lead * lead / (9.0 * std::pow(z_end, 9));
        }
        const double first_moment = detail::moment_value(
            parity_ == Parity::even_function ? 0 : 1, a_);
        norm_ = (first_moment >= 0.0 ? 1.0 : -1.0) / std::sqrt(2.0 * ss);
    }

    const FilonPlan* remainder_plan() const {
        std::lock_guard<std::mutex> lock(lazy_mu_);
        if (!rem_plan_)
            // The high Airy derivative is evaluated through a recurrence with
            // ~1e-13 relative noise at deeply negative arguments, so the
            // default coefficient target is unreachable.  The plan only feeds
            // the z^{-10}-suppressed remainder, so 1e-11 relative resolution
            // leaves the evaluated eigenfunction accurate to ~1e-12.
            rem_plan_ = std::make_unique<FilonPlan>(FilonPlan::build(
                [this](double u) { return ai_derivative(2 * kIbpOrder, u + a_); },
                0.0, u_end_ + 4.0, width_, 1e-11));
        return rem_plan_.get();
    }

    const FilonPlan* symbol_plan() const {
        std::lock_guard<std::mutex> lock(lazy_mu_);
        if (!symbol_plan_)
            symbol_plan_ = std::make_unique<FilonPlan>(FilonPlan::build(
                [this](double u) { return u * ai(u + a_); }, 0.0, u_end_,
                width_));
        return symbol_plan_.get();
    }

    double cached_moment(unsigned m) const {
        std::lock_guard<std::mutex> lock(lazy_mu_);
        auto it = moments_.find(m);
        if (it == moments_.end())
            it = moments_.emplace(m, detail::moment_value(m, a_)).first;
        return it->second;
    }

    unsigned n_ = 0;
    Parity parity_ = Parity::even_function;
    unsigned k_ = 0;
    double a_ = 0.0;
    double lambda_ = 0.0;
    double u_end_ = 0.0;
    double width_ = 0.0;
    FilonPlan plan_;
    double norm_ = 0.0;
    mutable std::mutex lazy_mu_;
    mutable std::unique_ptr<FilonPlan> rem_plan_;
    mutable std::unique_ptr<FilonPlan> symbol_plan_;
    mutable std::map<unsigned, double> moments_;
};

// Process-wide registry: eigenfunctions are immutable once built, so sharing
// them amortizes plan construction across callers.
inline std::shared_ptr<const Eigenfunction> eigenfunction(unsigned n) {
    static std::mutex mu;
    static std::map<unsigned, std::shared_ptr<const Eigenfunction>> registry;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = registry[n];
    if (!slot) slot = std::make_shared<const Eigenfunction>(n);
    return slot;
}

inline double evaluate(unsigned n, double x) {
    return eigenfunction(n)->evaluate(x);
}

inline double tail_expansion(unsigned n, double z, unsigned terms) {
    return eigenfunction(n)->tail_expansion(z, terms);
}

inline double maclaurin(unsigned n, double x, unsigned max_power) {
    return eigenfunction(n)->maclaurin(x, max_power);
}

inline unsigned count_zeros(unsigned n) {
    return eigenfunction(n)->count_zeros();
}

inline double sup_norm(unsigned n) { return eigenfunction(n)->sup_norm(); }

// Shape diagnostics of the ground state on the positive axis.
struct GroundStateShape {
    bool decreasing = false;          // phi_1 strictly decreasing on (0, 50]
    double first_increase_x = 0.0;    // location of the first violation
    bool concave_at_origin = false;   // phi_1'' < 0 near 0
    double inflection_x = 0.0;        // curvature sign change
    bool convex_beyond = false;       // phi_1'' > 0 from there to 50
    double curvature_coefficient = 0.0;  // x^6 phi_1''(x) at x = 40
    double curvature_limit = 0.0;        // 20 c_1 Ai(a'_1) = 20/sqrt(pi*lambda_1)
    bool curvature_ok = false;
    bool ok = false;
};

inline GroundStateShape ground_state_shape() {
    const auto f = eigenfunction(1);
    GroundStateShape r;
    const double h = 0.05;

    r.decreasing = true;
    r.first_increase_x = std::nan("");
    double prev = f->evaluate(0.0);
    for (double x = h; x <= 50.0 + 1e-9; x += h) {
        const double cur = f->evaluate(x);
        if (cur >= prev) {
            r.decreasing = false;
            r.first_increase_x = x;
            break;
        }
        prev = cur;
    }

    const auto second_difference = [&](double x) {
        return (f->evaluate(x - h) - 2.0 * f->evaluate(x) + f->evaluate(x + h)) /
               (h * h);
    };
    r.concave_at_origin = second_difference(0.0) < 0.0;
    r.inflection_x = std::nan("");
    double d2_prev = second_difference(h);
    for (double x = 2.0 * h; x <= 12.0; x += h) {
        const double d2 = second_difference(x);
        if (d2_prev < 0.0 && d2 >= 0.0) {
            r.inflection_x = x - 0.5 * h;
            break;
        }
        d2_prev = d2;
    }
    r.convex_beyond = std::isfinite(r.inflection_x);
    if (r.convex_beyond) {
        for (double x = r.inflection_x + 2.0 * h; x <= 50.0; x += 0.25) {
            if (second_difference(x) <= 0.0) {
                r.convex_beyond = false;
                break;
            }
        }
    }

    const double hc = 0.5, xc = 40.0;  // five-point curvature, asymptotic zone
    const double d2 =
        (-f->evaluate(xc - 2 * hc) + 16.0 * f->evaluate(xc - hc) -
         30.0 * f->evaluate(xc) + 16.0 * f->evaluate(xc + hc) -
         f->evaluate(xc + 2 * hc)) /
        (12.0 * hc * hc);
    r.curvature_coefficient = std::pow(xc, 6) * d2;
    r.curvature_limit = 20.0 / std::sqrt(M_PI * f->lambda());
    r.curvature_ok = std::fabs(r.curvature_coefficient - r.curvature_limit) <=
                     0.02 * std::fabs(r.curvature_limit);

    r.ok = r.decreasing && r.concave_at_origin && r.convex_beyond &&
           r.curvature_ok;
    return r;
}

}  // namespace airyspec

#pragma once
// Heat kernel of the operator sqrt(-d^2/dx^2) + x^2:
//
//   u(t, x, y) = sum_{n >= 1} e^{-lambda_n t} phi_n(x) phi_n(y),
//
// truncated with a certified tail bound.  The certificate chains three
// ingredients:
//
//   * |phi_n(x)| <= |c_n| * int_0^inf |Ai(u + a_n)| du =: M_n for every x,
//     since the eigenfunction is a trigonometric transform of the shifted
//     Airy profile and |cos|, |sin| <= 1;
//   * M_n <= C sqrt(lambda_n), where C is the largest ratio over the scanned
//     index window.  The ratio decreases toward the asymptotic profile
//     constant 8 / (3 pi^{3/2}); the constructor verifies the scan has
//     settled near that limit before trusting C for all larger indices;
//   * sum_{n > 2k} lambda_n e^{-lambda_n t} is bounded by integral comparison
//     against the eigenvalue minorant (weighted_spectral_tail_bound).
//
// Terms are added until C^2 * (weighted tail) <= truncation_rel_error *
// e^{-lambda_1 t}, i.e. the dropped tail is small relative to the natural
// e^{-lambda_1 t} decay scale of the kernel.

#include <cmath>
#include <cstddef>
#include <cstdio>
#include <limits>
#include <memory>
#include <stdexcept>
#include <vector>

#include "airyspec/airy.hpp"
#include "airyspec/eigenfunctions.hpp"
#include "airyspec/errors.hpp"
#include "airyspec/quadrature.hpp"
#include "airyspec/spectrum.hpp"

namespace airyspec {

struct HeatKernelConfig {
    double t_min = 0.5;                  // smallest certifiable time
    double truncation_rel_error = 1e-8;  // tail budget relative to e^{-lambda_1 t}
    unsigned max_terms = 200;            // hard cap on the spectral sum
};

// Extremes of the comparison ratio r = u(t,x,y) (1+x^4)(1+y^4) e^{lambda_1 t}
// over a sweep grid, together with the witnessing grid points.  The ratio
// staying inside a fixed band [1/c, c] expresses the two-sided kernel
// estimate u ~ e^{-lambda_1 t} / ((1+x^4)(1+y^4)).
struct BoundSweep {
    double ratio_min = std::numeric_limits<double>::infinity();
    double ratio_max = 0.0;
    double t_at_min = 0.0, x_at_min = 0.0, y_at_min = 0.0;
    double t_at_max = 0.0, x_at_max = 0.0, y_at_max = 0.0;
    bool all_positive = true;
    double band_constant = std::numeric_limits<double>::infinity();
};

namespace detail {

// Upper bound on sum_{n > 2k} lambda_n e^{-t lambda_n}.  Same integral
// comparison as spectral_tail_bound with the extra lambda weight; repeated
// integration by parts of int_V^inf mu^{3/2} e^{-t mu} dmu gives
//   (2/pi) e^{-tV} (V^{3/2}/t + (3/2) sqrt(V)/t^2 + (3/4)/(t^3 sqrt(V))).
// Valid once mu e^{-t mu} is decreasing on [V, inf), i.e. V t >= 1; callers
// must skip smaller k.
inline double weighted_spectral_tail_bound(double t, std::size_t k) {
    const double s = 3.0 * M_PI * (4.0 * static_cast<double>(k) - 3.0) / 8.0;
    const double V = std::cbrt(s * s);
    const double rV = std::sqrt(V);
    return 2.0 / M_PI * std::exp(-t * V) *
           (V * rV / t + 1.5 * rV / (t * t) + 0.75 / (t * t * t * rV));
}

// int_a^inf |Ai|, where a is the k-th zero of Ai or Ai'.  The zeros of Ai
// above a are a_j, j < k; between consecutive zeros the integrand is smooth
// and single-signed, so each lobe is |int Ai| by two Gauss panels, and
// int_0^inf Ai = 1/3 exactly.
inline double airy_l1_tail(double a, std::size_t k, ZeroCache& cache) {
    const GaussRule& rule = gauss_legendre(16);
    const auto lobe = [&](double lo, double hi) {
        double sum = 0.0;
        const double quarter = 0.25 * (hi - lo);
        for (int half = 0; half < 2; ++half) {
            const double c = lo + (2.0 * half + 1.0) * quarter;
            double acc = 0.0;
            for (std::size_t i = 0; i < rule.nodes.size(); ++i)
                acc += rule.weights[i] * ai(c + quarter * rule.nodes[i]);
            sum += quarter * acc;
        }
        return std::fabs(sum);
    };
    if (k > cache.size()) cache.ensure(k);
    double total = 1.0 / 3.0;
    double upper = 0.0;
    for (std::size_t j = 1; j < k; ++j) {
        const double zj = cache.ai_zero(j);
        total += lobe(zj, upper);
        upper = zj;
    }
    total += lobe(a, upper);
    return total;
}

}  // namespace detail

class HeatKernel {
  public:
    explicit HeatKernel(HeatKernelConfig config = {}) : config_(config) {
        if (!std::isfinite(config.t_min) || !(config.t_min > 0.0))
            throw std::invalid_argument("HeatKernel: t_min must be positive");
        if (!(config.truncation_rel_error > 0.0) ||
            !(config.truncation_rel_error < 1.0))
            throw std::invalid_argument(
                "HeatKernel: truncation_rel_error must lie in (0, 1)");
        if (config.max_terms < 2)
            throw std::invalid_argument("HeatKernel: max_terms must be >= 2");

        ZeroCache& cache = shared_zero_cache();
        lambda1_ = eigenvalue(1, cache).value;

        // Scan M_n / sqrt(lambda_n) across the term budget plus a margin; the
        // maximum bounds every index once the sequence has settled onto its
        // decreasing approach to the asymptotic constant.
        const double c_limit = 8.0 / (3.0 * std::pow(M_PI, 1.5));
        const unsigned scan = config.max_terms + 64;
        double tail_ratio = 0.0;
        profile_constant_ = 0.0;
        for (unsigned n = 1; n <= scan; ++n) {
            const bool even_fn = n % 2 != 0;
            const std::size_t k = even_fn ? (n + 1) / 2 : n / 2;
            const double a =
                even_fn ? airy_prime_zero(k, cache) : airy_zero(k, cache);
            const double lambda = -a;
            const double norm_abs =
                even_fn ? 1.0 / (std::sqrt(M_PI * lambda) * std::fabs(ai(a)))
                        : 1.0 / (std::sqrt(M_PI) * std::fabs(ai_prime(a)));
            const double ratio =
                norm_abs * detail::airy_l1_tail(a, k, cache) / std::sqrt(lambda);
            profile_constant_ = std::max(profile_constant_, ratio);
            if (n + 48 > scan) tail_ratio = std::max(tail_ratio, ratio);
        }
        if (tail_ratio > 1.10 * c_limit)
            throw ConvergenceError(
                "HeatKernel: eigenfunction profile bound has not settled "
                "within the scanned index window");

        terms(config.t_min);  // surface an uncertifiable configuration early
    }

    const HeatKernelConfig& config() const { return config_; }
    double lambda1() const { return lambda1_; }

    // Uniform constant C with |phi_n(x)| <= C sqrt(lambda_n) for all n, x.
    double profile_constant() const { return profile_constant_; }

    // Number of terms N (always even) whose dropped tail is certified below
    // truncation_rel_error * e^{-lambda_1 t}.
    unsigned terms(double t) const {
        check_time(t);
        const double budget =
            config_.truncation_rel_error * std::exp(-lambda1_ * t);
        const double c2 = profile_constant_ * profile_constant_;
        for (std::size_t k = 1; 2 * k <= config_.max_terms; ++k) {
            const double s = 3.0 * M_PI * (4.0 * static_cast<double>(k) - 3.0) / 8.0;
            if (std::cbrt(s * s) * t < 1.0) continue;  // bound needs V t >= 1
            if (c2 * detail::weighted_spectral_tail_bound(t, k) <= budget)
                return static_cast<unsigned>(2 * k);
        }
        char msg[128];
        std::snprintf(msg, sizeof msg,
                      "HeatKernel: cannot certify truncation at t = %.6g "
                      "within %u terms",
                      t, config_.max_terms);
        throw ConvergenceError(msg);
    }

    // Certified absolute bound on the dropped tail at time t.
    double tail_bound(double t) const {
        const unsigned n = terms(t);
        return profile_constant_ * profile_constant_ *
               detail::weighted_spectral_tail_bound(t, n / 2);
    }

    double value(double t, double x, double y) const {
        const unsigned n_terms = terms(t);
        check_point(x);
        check_point(y);
        double sum = 0.0, comp = 0.0;
        for (unsigned n = 1; n <= n_terms; ++n) {
            const auto& phi = *eigenfunction(n);
            // The eigenfunction product is grouped first so that swapping x
            // and y yields bit-identical kernel values.
            const double term =
                std::exp(-phi.lambda() * t) * (phi.evaluate(x) * phi.evaluate(y));
            const double v = term - comp;
            const double s = sum + v;
            comp = (s - sum) - v;
            sum = s;
        }
        return sum;
    }

    // |sum of the `extra` terms beyond the certified truncation|; by
    // construction this never exceeds tail_bound(t).
    double truncation_residual(double t, double x, double y,
                               unsigned extra = 10) const {
        const unsigned n_terms = terms(t);
        check_point(x);
        check_point(y);
        double sum = 0.0;
        for (unsigned n = n_terms + 1; n <= n_terms + extra; ++n) {
            const auto& phi = *eigenfunction(n);
            sum += std::exp(-phi.lambda() * t) *
                   (phi.evaluate(x) * phi.evaluate(y));
        }
        return std::fabs(sum);
    }

    // int_R u(t, x, x) dx by composite Gauss panels; equals the heat trace up
    // to truncation, normalization, and quadrature error.
    double diagonal_integral(double t) const {
        const unsigned n_terms = terms(t);
        const GaussRule& rule = gauss_legendre(16);
        const double length = 40.0;  // integrand decays like x^{-8} beyond
        const std::size_t panels = 54;
        const double h = length / static_cast<double>(panels) / 2.0;
        std::vector<double> weights(n_terms + 1);
        for (unsigned n = 1; n <= n_terms; ++n)
            weights[n] = std::exp(-eigenfunction(n)->lambda() * t);
        double sum = 0.0;
        for (std::size_t p = 0; p < panels; ++p) {
            const double c = (2.0 * static_cast<double>(p) + 1.0) * h;
            for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
                const double z = c + h * rule.nodes[i];
                double diag = 0.0;
                for (unsigned n = 1; n <= n_terms; ++n) {
                    const double pz = eigenfunction(n)->evaluate(z);
                    diag += weights[n] * pz * pz;
                }
                sum += rule.weights[i] * h * diag;
            }
        }
        return 2.0 * sum;  // the diagonal is even in x
    }

    // Residual |int u(t,x,z) u(s,z,y) dz - u(t+s,x,y)| of the semigroup
    // property, with composite Gauss panels of the given width on |z| <= 36.
    double chapman_kolmogorov(double t, double s, double x, double y,
                              double panel_width = 1.0) const {
        const unsigned nt = terms(t);
        const unsigned ns = terms(s);
        check_point(x);
        check_point(y);
        if (!std::isfinite(panel_width) || !(panel_width > 0.0) ||
            panel_width > 8.0)
            throw std::invalid_argument(
                "chapman_kolmogorov: panel width must lie in (0, 8]");
        const unsigned n_max = std::max(nt, ns);
        std::vector<double> wt(n_max + 1, 0.0), ws(n_max + 1, 0.0),
            px(n_max + 1), py(n_max + 1);
        for (unsigned n = 1; n <= n_max; ++n) {
            const auto& phi = *eigenfunction(n);
            if (n <= nt) wt[n] = std::exp(-phi.lambda() * t);
            if (n <= ns) ws[n] = std::exp(-phi.lambda() * s);
            px[n] = phi.evaluate(x);
            py[n] = phi.evaluate(y);
        }
        const GaussRule& rule = gauss_legendre(16);
        const double length = 36.0;
        const auto panels =
            static_cast<std::size_t>(std::ceil(2.0 * length / panel_width));
        const double h = length / static_cast<double>(panels);
        double integral = 0.0;
        for (std::size_t p = 0; p < panels; ++p) {
            const double c = -length + (2.0 * static_cast<double>(p) + 1.0) * h;
            for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
                const double z = c + h * rule.nodes[i];
                double ut = 0.0, us = 0.0;
                for (unsigned n = 1; n <= n_max; ++n) {
                    const double pz = eigenfunction(n)->evaluate(z);
                    // Grouped so that swapping (t, x) with (s, y) produces the
                    // same doubles: the semigroup residual is exactly
                    // symmetric, not merely up to roundoff.
                    ut += wt[n] * pz * px[n];
                    us += ws[n] * pz * py[n];
                }
                integral += rule.weights[i] * h * (ut * us);
            }
        }
        return std::fabs(integral - value(t + s, x, y));
    }

    // Sweep r = u (1+x^4)(1+y^4) e^{lambda_1 t} over the grid; requires every
    // t > 1 so the sweep sits inside the regime the two-sided bound targets.
    BoundSweep check_two_sided_bound(const std::vector<double>& t_grid,
                                     const std::vector<double>& xy_grid) const {
        if (t_grid.empty() || xy_grid.empty())
            throw std::invalid_argument(
                "check_two_sided_bound: grids must be non-empty");
        for (const double t : t_grid)
            if (!std::isfinite(t) || !(t > 1.0))
                throw std::invalid_argument(
                    "check_two_sided_bound: every t must exceed 1");
        for (const double v : xy_grid) check_point(v);

        BoundSweep sweep;
        for (const double t : t_grid) {
            const double scale = std::exp(lambda1_ * t);
            for (std::size_t i = 0; i < xy_grid.size(); ++i) {
                for (std::size_t j = i; j < xy_grid.size(); ++j) {
                    const double x = xy_grid[i], y = xy_grid[j];
                    const double u = value(t, x, y);
                    if (!(u > 0.0)) {
                        sweep.all_positive = false;
                        continue;
                    }
                    const double weight =
                        (1.0 + x * x * x * x) * (1.0 + y * y * y * y);
                    const double r = u * weight * scale;
                    if (r < sweep.ratio_min) {
                        sweep.ratio_min = r;
                        sweep.t_at_min = t;
                        sweep.x_at_min = x;
                        sweep.y_at_min = y;
                    }
                    if (r > sweep.ratio_max) {
                        sweep.ratio_max = r;
                        sweep.t_at_max = t;
                        sweep.x_at_max = x;
                        sweep.y_at_max = y;
                    }
                }
            }
        }
        if (sweep.all_positive)
            sweep.band_constant =
                std::max(sweep.ratio_max, 1.0 / sweep.ratio_min);
        return sweep;
    }

  private:
    void check_time(double t) const {
        if (!std::isfinite(t) || t < config_.t_min) {
            char msg[96];
            std::snprintf(msg, sizeof msg,
                          "HeatKernel: t = %.6g below certified domain "
                          "[%.6g, inf)",
                          t, config_.t_min);
            throw std::invalid_argument(msg);
        }
    }

    static void check_point(double v) {
        if (!std::isfinite(v))
            throw std::invalid_argument("HeatKernel: coordinates must be finite");
    }

    HeatKernelConfig config_;
    double lambda1_ = 0.0;
    double profile_constant_ = 0.0;
};

// Process-wide kernel with the default certificate (t >= 0.5, relative
// truncation error 1e-8).  Construction scans the eigenfunction registry
// once; afterwards every caller shares the cached certificate.
inline const HeatKernel& shared_heat_kernel() {
    static const HeatKernel kernel;
    return kernel;
}

}  // namespace airyspec

#pragma once

// Spectrum of the operator sqrt(-d^2/dx^2) + x^2 on the line.
//
// Every eigenvalue is the negative of an Airy zero: lambda_{2k-1} = -a'_k
// (even eigenfunctions, from the Neumann-type condition Ai'(-lambda) = 0)
// and lambda_{2k} = -a_k (odd eigenfunctions, from Ai(-lambda) = 0). Zeros
// are found by Newton's iteration on ai/ai_prime started from asymptotic
// guesses, safeguarded by a bisection bracket when a raw step misbehaves,
// and cached. Cache extension is an explicit, exclusively-locked operation;
// reads are shared and never grow the cache.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <mutex>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <vector>

#include "airyspec/airy.hpp"
#include "airyspec/errors.hpp"

namespace airyspec {

enum class Parity { even_function, odd_function };

struct Eigenvalue {
    unsigned n;     // 1-based spectral index
    Parity parity;  // parity of the eigenfunction
    unsigned k;     // index of the Airy zero the eigenvalue comes from
    double value;   // lambda_n > 0
};

// Leading-order zero locations: a_k ~ -t^{2/3} at t = 3 pi (4k-1)/8 and
// a'_k ~ -t^{2/3} at t = 3 pi (4k-3)/8.
namespace detail {

inline double zero_asymptotic_t(bool prime, std::size_t k) {
    return 3.0 * M_PI * (prime ? 4.0 * k - 3.0 : 4.0 * k - 1.0) / 8.0;
}

// Degree-10 inverse-power refinements of the leading order (the classical
// T/U expansions of the Airy zeros).
inline double zero_asymptotic_value(bool prime, std::size_t k) {
    static constexpr double f[5] = {5.0 / 48, -5.0 / 36, 77125.0 / 82944,
                                    -108056875.0 / 6967296,
                                    162375596875.0 / 334430208};
    static constexpr double g[5] = {-7.0 / 48, 35.0 / 288, -181223.0 / 207360,
                                    18683371.0 / 1244160,
                                    -91145884361.0 / 191102976};
    const double t = zero_asymptotic_t(prime, k);
    const double w = 1.0 / (t * t);
    const double* c = prime ? g : f;
    double s = 0.0;
    for (int i = 4; i >= 0; --i) s = s * w + c[i];
    return -std::cbrt(t * t) * (1.0 + w * s);
}

// Newton refinement of a zero of Ai (prime = false) or Ai' (prime = true),
// using Ai'' = x Ai for the derivative in the primed case. Falls back to
// bisection on a bracket spanning one oscillation when a step runs away.
inline double refine_zero(bool prime, double guess) {
    const auto residual = [&](double z) {
        const AiryPair p = ai_pair(z);
        return prime ? p.ai_prime : p.ai;
    };
    const auto newton_step = [&](double z) {
        const AiryPair p = ai_pair(z);
        return prime ? p.ai_prime / (z * p.ai) : p.ai / p.ai_prime;
    };

    double z = guess;
    const double spacing = M_PI / std::sqrt(std::max(1.0, -guess));
    for (int it = 0; it < 12; ++it) {
        const double step = newton_step(z);
        if (!std::isfinite(step) || std::fabs(step) > spacing) break;
        z -= step;
        if (std::fabs(step) <= 1e-15 * std::fabs(z)) return z - newton_step(z);
    }

    // Bracket around the guess, expanding until the sign changes.
    double lo = guess - 0.6 * spacing, hi = std::min(guess + 0.6 * spacing, -0.1);
    for (int grow = 0; residual(lo) * residual(hi) > 0.0 && grow < 8; ++grow) {
        lo -= 0.4 * spacing;
        hi = std::min(hi + 0.4 * spacing, -1e-3);
    }
    double flo = residual(lo);
    for (int it = 0; it < 200 && hi - lo > 1e-15 * std::fabs(lo); ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fmid = residual(mid);
        if (flo * fmid <= 0.0)
            hi = mid;
        else
            lo = mid, flo = fmid;
    }
    return 0.5 * (lo + hi);
}

inline double compute_zero(bool prime, std::size_t k) {
    const double guess = k <= 4 ? -std::cbrt(std::pow(zero_asymptotic_t(prime, k), 2))
                                : zero_asymptotic_value(prime, k);
    return refine_zero(prime, guess);
}

}  // namespace detail

class ZeroCache {
  public:
    ZeroCache() = default;

    // Grows both zero families to hold at least k entries. Exclusive;
    // the only operation that mutates the cache.
    void ensure(std::size_t k) {
        std::unique_lock lock(mutex_);
        ai_zeros_.reserve(k);
        ai_prime_zeros_.reserve(k);
        while (ai_zeros_.size() < k)
            ai_zeros_.push_back(detail::compute_zero(false, ai_zeros_.size() + 1));
        while (ai_prime_zeros_.size() < k)
            ai_prime_zeros_.push_back(
                detail::compute_zero(true, ai_prime_zeros_.size() + 1));
    }

    std::size_t size() const {
        std::shared_lock lock(mutex_);
        return ai_zeros_.size();
    }

    // 1-based accessors; reads never extend the cache.
    double ai_zero(std::size_t k) const {
        std::shared_lock lock(mutex_);
        if (k == 0 || k > ai_zeros_.size())
            throw std::out_of_range("ZeroCache::ai_zero: index " +
                                    std::to_string(k) + " not cached");
        return ai_zeros_[k - 1];
    }
    double ai_prime_zero(std::size_t k) const {
        std::shared_lock lock(mutex_);
        if (k == 0 || k > ai_prime_zeros_.size())
            throw std::out_of_range("ZeroCache::ai_prime_zero: index " +
                                    std::to_string(k) + " not cached");
        return ai_prime_zeros_[k - 1];
    }

    static constexpr double refined_to() { return 1e-12; }  // absolute, on zeros

  private:
    mutable std::shared_mutex mutex_;
    std::vector<double> ai_zeros_;
    std::vector<double> ai_prime_zeros_;
};

inline ZeroCache& shared_zero_cache() {
    static ZeroCache cache;
    return cache;
}

inline constexpr std::size_t kMaxZeroIndex = 100'000'000;

inline double airy_zero(std::size_t k, ZeroCache& cache = shared_zero_cache()) {
    if (k == 0 || k > kMaxZeroIndex)
        throw std::invalid_argument("airy_zero: index must be in [1, 1e8]");
    cache.ensure(k);
    return cache.ai_zero(k);
}

inline double airy_prime_zero(std::size_t k,
                              ZeroCache& cache = shared_zero_cache()) {
    if (k == 0 || k > kMaxZeroIndex)
        throw std::invalid_argument("airy_prime_zero: index must be in [1, 1e8]");
    cache.ensure(k);
    return cache.ai_prime_zero(k);
}

inline Eigenvalue eigenvalue(unsigned n, ZeroCache& cache = shared_zero_cache()) {
    if (n == 0) throw std::invalid_argument("eigenvalue: index must be >= 1");
    if (n % 2) {
        const unsigned k = (n + 1) / 2;
        return {n, Parity::even_function, k, -airy_prime_zero(k, cache)};
    }
    const unsigned k = n / 2;
    return {n, Parity::odd_function, k, -airy_zero(k, cache)};
}

// Closed-form eigenvalue estimate from the degree-10 zero expansions.
inline double eigenvalue_asymptotic(unsigned n) {
    if (n == 0) throw std::invalid_argument("eigenvalue_asymptotic: index >= 1");
    const bool odd = n % 2;
    return -detail::zero_asymptotic_value(odd, odd ? (n + 1) / 2 : n / 2);
}

// Rigorous enclosures: lambda_{2k-1} <= upper_odd = (3 pi (4k-1)/8)^{2/3} and
// upper_odd = lower_even <= lambda_{2k} <= upper_even. No lower bound is
// available for the odd-index eigenvalue at k = 1; interlacing supplies
// lambda_{2k-1} > lambda_{2k-2} for k > 1.
struct EigenvalueBounds {
    double upper_odd;
    double lower_even;
    double upper_even;
};

inline EigenvalueBounds eigenvalue_bounds(unsigned k) {
    if (k == 0) throw std::invalid_argument("eigenvalue_bounds: index >= 1");
    const double t = detail::zero_asymptotic_t(false, k);
    const double base = std::cbrt(t * t);
    const double upper =
        base * (1.0 + 1.5 * std::atan(5.0 / (18.0 * M_PI * (4.0 * k - 1.0))));
    return {base, base, upper};
}

struct SpectralGap {
    double value;        // lambda_2 - lambda_1
    double lower_bound;  // (3 pi / 8)^{2/3} (3^{2/3} - 1)
};

inline SpectralGap spectral_gap(ZeroCache& cache = shared_zero_cache()) {
    const double gap = eigenvalue(2, cache).value - eigenvalue(1, cache).value;
    const double t = 3.0 * M_PI / 8.0;
    return {gap, std::cbrt(t * t) * (std::cbrt(9.0) - 1.0)};
}

namespace detail {

// Upper bound on sum_{n > 2k} e^{-t lambda_n} via integral comparison against
// the monotone minorant lambda_n >= (3 pi (2n-3)/8)^{2/3} (n >= 2):
//   sum_{n > N} e^{-t lambda_n} <= (2/pi) e^{-tV} (sqrt(V)/t + 1/(2 t^2 sqrt(V)))
// with V = (3 pi (2N-3)/8)^{2/3} and N = 2k.
inline double spectral_tail_bound(double t, std::size_t k) {
    const double V = std::cbrt(
        std::pow(3.0 * M_PI * (4.0 * static_cast<double>(k) - 3.0) / 8.0, 2.0));
    return 2.0 / M_PI * std::exp(-t * V) *
           (std::sqrt(V) / t + 0.5 / (t * t * std::sqrt(V)));
}

}  // namespace detail

// Sum of e^{-lambda_n t}, truncated when an integral-comparison tail bound
// drops below 1e-10 of the partial sum.
inline double trace(double t, ZeroCache& cache = shared_zero_cache()) {
    if (!(t > 0.0)) throw std::invalid_argument("trace: t must be positive");

    double sum = 0.0, comp = 0.0;  // Kahan-compensated accumulation
    const auto add = [&](double term) {
        const double y = term - comp;
        const double s = sum + y;
        comp = (s - sum) - y;
        sum = s;
    };

    constexpr std::size_t kMaxTracePairs = 5'000'000;  // ~t >= 5e-4
    for (std::size_t k = 1;; ++k) {
        if (k > kMaxTracePairs)
            throw ConvergenceError(
                "trace: tail bound not reached within " +
                std::to_string(kMaxTracePairs) + " zero pairs (t too small)");
        if (k > cache.size()) cache.ensure(std::max<std::size_t>(2 * k, 64));
        add(std::exp(t * cache.ai_prime_zero(k)));  // lambda_{2k-1}
        add(std::exp(t * cache.ai_zero(k)));        // lambda_{2k}
        if (detail::spectral_tail_bound(t, k) <= 1e-10 * sum) return sum;
    }
}

inline double trace_scaled(double t, ZeroCache& cache = shared_zero_cache()) {
    return std::pow(t, 1.5) * trace(t, cache);
}

}  // namespace airyspec

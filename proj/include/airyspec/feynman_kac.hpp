#pragma once
// Monte Carlo check of the Feynman-Kac representation
//
//   E_x[ exp(-int_0^t X_s^2 ds) ] = int_R u(t, x, y) dy
//                                 = sum_{n odd} e^{-lambda_n t} phi_n(x) int phi_n,
//
// where X is the Cauchy process generated by -sqrt(-d^2/dx^2) (semigroup
// Fourier multiplier e^{-t|xi|}).  Two independent path samplers are
// provided:
//
//   * direct_cauchy    — exact increments dt * tan(pi (U - 1/2));
//   * subordinated_bm  — Brownian motion (variance-2t convention, multiplier
//     e^{-t xi^2}) run on an independent 1/2-stable subordinator.  Over a
//     step the subordinator increment is S = dt^2 / (2 Z^2) with Z standard
//     normal, since E[exp(-c / Z^2)] = exp(-sqrt(2c)) gives the Laplace
//     transform e^{-dt sqrt(lambda)}; the spatial increment is then
//     Normal(0, 2S).
//
// The time integral uses the right-endpoint Riemann sum over the step grid.
// Every path consumes its own counter-derived SplitMix64 stream, and path
// weights are combined through fixed-shape blocked pairwise sums, so results
// are bit-identical for a given seed regardless of the thread count.

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <thread>
#include <vector>

#include "airyspec/eigenfunctions.hpp"
#include "airyspec/heat_kernel.hpp"

namespace airyspec {

// SplitMix64 (Steele, Lea, Vigna): one 64-bit mixing step per output.  Small
// state, full 2^64 period, and a strong finalizer, which is all the sampler
// needs once each path gets an independently derived stream seed.
class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Uniform on (0, 1]; safe as a logarithm argument.
    double uniform_positive() {
        return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
    }

  private:
    std::uint64_t state_;
};

// Stream seed for one path: scramble (seed, path) through the SplitMix64
// finalizer so distinct paths land in unrelated regions of the state space.
// The derivation depends only on the pair, never on evaluation order.
inline std::uint64_t path_stream_seed(std::uint64_t seed, std::uint64_t path) {
    SplitMix64 mixer(seed ^ (0x9E3779B97F4A7C15ULL * (path + 1)));
    return mixer.next();
}

struct NormalPair {
    double z1, z2;
};

// Box-Muller transform; two independent standard normals per two uniforms.
inline NormalPair sample_normal_pair(SplitMix64& rng) {
    const double u1 = rng.uniform_positive();
    const double u2 = rng.uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * M_PI * u2;
    return {r * std::cos(angle), r * std::sin(angle)};
}

// Exact Cauchy increment over a step of length dt: characteristic function
// e^{-dt |xi|}.  The tangent is deliberately left unclamped: the heavy tails
// are the point of the distribution, and the exponential weight downstream
// tames any excursion.
inline double sample_cauchy_increment(double dt, SplitMix64& rng) {
    return dt * std::tan(M_PI * (rng.uniform() - 0.5));
}

// Increment of the 1/2-stable subordinator over a step of length dt, via the
// inverse-square-normal representation; strictly positive, with Laplace
// transform E[e^{-lambda S}] = e^{-dt sqrt(lambda)}.
inline double sample_subordinator_increment(double dt, SplitMix64& rng) {
    const double z = sample_normal_pair(rng).z1;
    return dt * dt / (2.0 * z * z);
}

enum class Sampler {
    direct_cauchy,    // exact Cauchy increments
    subordinated_bm,  // Brownian motion on a 1/2-stable subordinator
};

struct McConfig {
    double t = 1.0;
    unsigned n_steps = 1000;
    std::uint64_t n_paths = 100000;
    std::uint64_t seed = 0x2e8a17c0ffeeULL;
    Sampler sampler = Sampler::direct_cauchy;
};

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;  // sample standard deviation / sqrt(n_paths)
    std::uint64_t n_paths = 0;
};

namespace detail {

// Worker thread cap: AIRYSPEC_THREADS when set to a positive integer,
// otherwise the hardware concurrency (at least 1).
inline unsigned resolve_thread_count() {
    unsigned limit = std::thread::hardware_concurrency();
    if (limit == 0) limit = 1;
    if (const char* env = std::getenv("AIRYSPEC_THREADS")) {
        char* end = nullptr;
        const unsigned long parsed = std::strtoul(env, &end, 10);
        if (end != env && *end == '\0' && parsed >= 1)
            limit = static_cast<unsigned>(
                parsed < 1024 ? parsed : 1024);  // sanity cap
    }
    return limit;
}

// Sum exp(-A) and exp(-2A) over one block of paths.  Everything inside a
// block is sequential, so the block totals depend only on (seed, block).
struct BlockMoments {
    double sum = 0.0;
    double sum_sq = 0.0;
};

inline BlockMoments run_block(double x, const McConfig& config, double dt,
                              std::uint64_t first, std::uint64_t last) {
    BlockMoments out;
    for (std::uint64_t p = first; p < last; ++p) {
        SplitMix64 rng(path_stream_seed(config.seed, p));
        double pos = x;
        double action = 0.0;
        if (config.sampler == Sampler::direct_cauchy) {
            for (unsigned j = 0; j < config.n_steps; ++j) {
                pos += sample_cauchy_increment(dt, rng);
                action += pos * pos * dt;
            }
        } else {
            for (unsigned j = 0; j < config.n_steps; ++j) {
                const NormalPair z = sample_normal_pair(rng);
                const double sub = dt * dt / (2.0 * z.z1 * z.z1);
                pos += std::sqrt(2.0 * sub) * z.z2;
                action += pos * pos * dt;
            }
        }
        // A non-finite action can only arise from an astronomically unlikely
        // zero normal draw; the correct limit of the weight is 0 either way.
        const double weight = std::isfinite(action) ? std::exp(-action) : 0.0;
        out.sum += weight;
        out.sum_sq += weight * weight;
    }
    return out;
}

// In-place pairwise reduction; the tree shape depends only on the length.
inline double pairwise_total(std::vector<double>& v) {
    std::size_t m = v.size();
    while (m > 1) {
        const std::size_t half = (m + 1) / 2;
        for (std::size_t i = 0; i < half; ++i) {
            const std::size_t hi = 2 * i + 1;
            v[i] = v[2 * i] + (hi < m ? v[hi] : 0.0);
        }
        m = half;
    }
    return v.empty() ? 0.0 : v[0];
}

}  // namespace detail

// Monte Carlo estimate of E_x[ exp(-int_0^t X_s^2 ds) ].
inline McEstimate estimate_semigroup(double x, const McConfig& config) {
    if (!std::isfinite(x))
        throw std::invalid_argument("estimate_semigroup: x must be finite");
    if (!std::isfinite(config.t) || config.t <= 0.0)
        throw std::invalid_argument("estimate_semigroup: t must be positive");
    if (config.n_steps < 1)
        throw std::invalid_argument("estimate_semigroup: n_steps must be >= 1");
    if (config.n_paths < 1)
        throw std::invalid_argument("estimate_semigroup: n_paths must be >= 1");
    if (config.sampler != Sampler::direct_cauchy &&
        config.sampler != Sampler::subordinated_bm)
        throw std::invalid_argument("estimate_semigroup: unknown sampler");

    const double dt = config.t / config.n_steps;
    constexpr std::uint64_t kBlock = 4096;
    const std::uint64_t n_blocks = (config.n_paths + kBlock - 1) / kBlock;

    std::vector<double> block_sum(n_blocks), block_sum_sq(n_blocks);
    const auto run_range = [&](std::uint64_t lo, std::uint64_t hi) {
        for (std::uint64_t b = lo; b < hi; ++b) {
            const std::uint64_t first = b * kBlock;
            const std::uint64_t last =
                first + kBlock < config.n_paths ? first + kBlock
                                                : config.n_paths;
            const detail::BlockMoments m =
                detail::run_block(x, config, dt, first, last);
            block_sum[b] = m.sum;
            block_sum_sq[b] = m.sum_sq;
        }
    };

    const std::uint64_t n_threads =
        std::min<std::uint64_t>(detail::resolve_thread_count(), n_blocks);
    if (n_threads <= 1) {
        run_range(0, n_blocks);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (std::uint64_t w = 0; w < n_threads; ++w) {
            const std::uint64_t lo = n_blocks * w / n_threads;
            const std::uint64_t hi = n_blocks * (w + 1) / n_threads;
            pool.emplace_back(run_range, lo, hi);
        }
        for (std::thread& worker : pool) worker.join();
    }

    const double total = detail::pairwise_total(block_sum);
    const double total_sq = detail::pairwise_total(block_sum_sq);
    const double n = static_cast<double>(config.n_paths);

    McEstimate estimate;
    estimate.n_paths = config.n_paths;
    estimate.mean = total / n;
    if (config.n_paths > 1) {
        const double variance =
            (total_sq - total * total / n) / (n - 1.0);
        estimate.std_error = std::sqrt(std::max(variance, 0.0) / n);
    }
    return estimate;
}

// Spectral value of the same functional: int_R u(t, x, y) dy, summed over the
// odd (even-parity) part of the spectrum since odd eigenfunctions integrate
// to zero.  Truncation is certified by the shared heat-kernel bound, which
// dominates this sum term by term: |phi_n(x) int phi_n| <= C sqrt(lambda_n) *
// sqrt(pi / lambda_n) = C sqrt(pi) <= C^2 lambda_n for every lambda_n above
// the ground level.  Requires t >= the certified t_min (0.5).
inline double spectral_prediction(double x, double t) {
    if (!std::isfinite(x))
        throw std::invalid_argument("spectral_prediction: x must be finite");
    const HeatKernel& kernel = shared_heat_kernel();
    const unsigned terms = kernel.terms(t);
    double sum = 0.0;
    for (unsigned n = 1; n <= terms; n += 2) {
        const Eigenfunction& phi = *eigenfunction(n);
        sum += std::exp(-phi.lambda() * t) * phi.evaluate(x) * phi.integral();
    }
    return sum;
}

}  // namespace airyspec

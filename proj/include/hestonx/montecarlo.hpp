#pragma once

#include <cmath>
#include <cstdint>
#include <thread>
#include <vector>

#include "hestonx/blackscholes.hpp"
#include "hestonx/model.hpp"

namespace hestonx {

struct McConfig {
    std::int64_t n_paths = 100000;
    int n_steps_per_year = 200;
    std::uint64_t seed = 0;
    enum class Scheme { euler_full_truncation } scheme = Scheme::euler_full_truncation;
    int n_threads = 1;

    void validate() const {
        if (n_paths < 10000) throw DomainError("n_paths", "n_paths must be >= 10000");
        if (n_steps_per_year < 50)
            throw DomainError("n_steps", "n_steps must be >= 50 per year");
        if (n_threads < 1) throw DomainError("n_threads", "n_threads must be >= 1");
    }
};

struct McResult {
    double price = 0.0;
    double std_error = 0.0;
    // Fraction of Euler increments where the variance went negative and was
    // truncated to zero.
    double truncated_fraction = 0.0;
    // e^{-r tau} * mean(S_T): martingale diagnostic on the same paths.
    double discounted_spot_mean = 0.0;
    double discounted_spot_se = 0.0;
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// xoshiro256++ with one statistically independent stream per path: the state
// is derived from splitmix64(seed, path_index), so parallel runs are
// seed-reproducible regardless of scheduling.
class PathRng {
public:
    PathRng(std::uint64_t seed, std::uint64_t path) noexcept {
        std::uint64_t x = seed ^ (path * 0x9e3779b97f4a7c15ULL);
        for (auto& w : s_) w = x = splitmix64(x);
    }

    std::uint64_t next_u64() noexcept {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    double next_uniform() noexcept {  // (0, 1]
        return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    }

    // Box-Muller pair.
    void next_normals(double& z0, double& z1) noexcept {
        const double u1 = next_uniform();
        const double u2 = next_uniform();
        const double m = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        z0 = m * std::cos(a);
        z1 = m * std::sin(a);
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) noexcept {
        return (x << k) | (x >> (64 - k));
    }
    std::uint64_t s_[4];
};

struct McAccum {
    double sum = 0.0, sum_sq = 0.0;
    double spot_sum = 0.0, spot_sq = 0.0;
    std::int64_t truncated = 0;
};

// Paths are processed in fixed chunks and chunk partials are combined in
// chunk order, so the result does not depend on the number of workers.
inline constexpr std::int64_t kMcChunk = 8192;

template <class PathFn>
McResult mc_run(const McConfig& c, std::int64_t steps_per_path, PathFn&& run_path) {
    const std::int64_t n_chunks = (c.n_paths + kMcChunk - 1) / kMcChunk;
    std::vector<McAccum> partials(static_cast<std::size_t>(n_chunks));

    auto do_chunk = [&](std::int64_t chunk) {
        McAccum acc;
        const std::int64_t lo = chunk * kMcChunk;
        const std::int64_t hi = std::min(lo + kMcChunk, c.n_paths);
        for (std::int64_t path = lo; path < hi; ++path) run_path(path, acc);
        partials[static_cast<std::size_t>(chunk)] = acc;
    };

    if (c.n_threads <= 1) {
        for (std::int64_t chunk = 0; chunk < n_chunks; ++chunk) do_chunk(chunk);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < c.n_threads; ++w) {
            pool.emplace_back([&, w] {
                for (std::int64_t chunk = w; chunk < n_chunks; chunk += c.n_threads)
                    do_chunk(chunk);
            });
        }
        for (auto& th : pool) th.join();
    }

    McAccum total;
    for (const auto& a : partials) {
        total.sum += a.sum;
        total.sum_sq += a.sum_sq;
        total.spot_sum += a.spot_sum;
        total.spot_sq += a.spot_sq;
        total.truncated += a.truncated;
    }

    const double n = static_cast<double>(c.n_paths);
    McResult res;
    res.price = total.sum / n;
    res.std_error = std::sqrt(
        std::max(0.0, total.sum_sq / n - res.price * res.price) / n);
    res.discounted_spot_mean = total.spot_sum / n;
    res.discounted_spot_se = std::sqrt(
        std::max(0.0,
                 total.spot_sq / n - res.discounted_spot_mean * res.discounted_spot_mean) /
        n);
    res.truncated_fraction =
        static_cast<double>(total.truncated) / (n * static_cast<double>(steps_per_path));
    return res;
}

}  // namespace detail

// Full-truncation Euler simulation of the Heston log-price; returns the
// discounted-payoff mean and standard error.
inline McResult mc_price(const HestonParams& p, const OptionSpec& spec,
                         const McConfig& c) {
    c.validate();
    const double tau = spec.tau();
    const std::int64_t steps = std::max<std::int64_t>(
        1, static_cast<std::int64_t>(std::ceil(c.n_steps_per_year * tau)));
    const double dt = tau / static_cast<double>(steps);
    const double sqdt = std::sqrt(dt);
    const double rho_c = std::sqrt(1.0 - p.rho * p.rho);
    const double disc = std::exp(-p.r * tau);

    return detail::mc_run(c, steps, [&](std::int64_t path, detail::McAccum& acc) {
        detail::PathRng rng(c.seed, static_cast<std::uint64_t>(path));
        double x = std::log(p.s0);
        double v = p.v0;
        for (std::int64_t i = 0; i < steps; ++i) {
            double zw, zs;
            rng.next_normals(zw, zs);
            double vp = v;
            if (vp < 0.0) {
                vp = 0.0;
                ++acc.truncated;
            }
            const double sv = std::sqrt(vp);
            x += (p.r - 0.5 * vp) * dt + sv * sqdt * (p.rho * zw + rho_c * zs);
            v += p.kappa * (p.theta - vp) * dt + p.nu * sv * sqdt * zw;
        }
        const double spot = std::exp(x);
        const double payoff = disc * std::max(spot - spec.strike, 0.0);
        acc.sum += payoff;
        acc.sum_sq += payoff * payoff;
        const double dspot = disc * spot;
        acc.spot_sum += dspot;
        acc.spot_sq += dspot * dspot;
    });
}

// Conditional Hull-White estimator for the uncorrelated model: only the
// variance path is simulated and the payoff is replaced by the Black-Scholes
// price at the realized average volatility.
inline McResult hull_white_mc(const HestonParams& p, const OptionSpec& spec,
                              const McConfig& c) {
    if (p.rho != 0.0)
        throw RhoNotZero("hull_white_mc requires rho == 0, got rho = " +
                         std::to_string(p.rho));
    c.validate();
    const double tau = spec.tau();
    const std::int64_t steps = std::max<std::int64_t>(
        1, static_cast<std::int64_t>(std::ceil(c.n_steps_per_year * tau)));
    const double dt = tau / static_cast<double>(steps);
    const double sqdt = std::sqrt(dt);
    const double x0 = std::log(p.s0);
    const double disc = std::exp(-p.r * tau);

    return detail::mc_run(c, steps, [&](std::int64_t path, detail::McAccum& acc) {
        detail::PathRng rng(c.seed, static_cast<std::uint64_t>(path));
        double v = p.v0;
        double integral = 0.0;
        double spare = 0.0;
        bool have_spare = false;
        for (std::int64_t i = 0; i < steps; ++i) {
            double zw;
            if (have_spare) {
                zw = spare;
                have_spare = false;
            } else {
                rng.next_normals(zw, spare);
                have_spare = true;
            }
            double vp = v;
            if (vp < 0.0) {
                vp = 0.0;
                ++acc.truncated;
            }
            integral += vp * dt;
            v += p.kappa * (p.theta - vp) * dt + p.nu * std::sqrt(vp) * sqdt * zw;
        }
        const double avg_vol = std::sqrt(std::max(integral / tau, 1e-300));
        const double price =
            bs_price(BsState(x0, avg_vol, tau, spec.strike, p.r));
        acc.sum += price;
        acc.sum_sq += price * price;
        const double dspot = disc * p.s0 * std::exp(p.r * tau);  // exact under HW
        acc.spot_sum += dspot;
        acc.spot_sq += dspot * dspot;
    });
}

}  // namespace hestonx

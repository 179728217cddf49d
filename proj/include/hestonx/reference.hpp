#pragma once

#include <chrono>
#include <cmath>
#include <complex>

#include "hestonx/model.hpp"
#include "hestonx/quadrature.hpp"

namespace hestonx {

struct QuadratureConfig {
    enum class Scheme { gauss_legendre_fixed, adaptive };
    Scheme scheme = Scheme::gauss_legendre_fixed;
    int n_nodes = 384;
    double abs_tol = 1e-12;
    double rel_tol = 1e-11;
    double u_max = 200.0;

    QuadratureConfig() = default;
    QuadratureConfig(Scheme s, int n, double at, double rt, double um)
        : scheme(s), n_nodes(n), abs_tol(at), rel_tol(rt), u_max(um) {
        validate();
    }
    void validate() const {
        if (n_nodes < 32) throw DomainError("n_nodes", "n_nodes must be >= 32");
        if (!(abs_tol > 0.0 && abs_tol <= 1e-6))
            throw DomainError("abs_tol", "abs_tol must lie in (0, 1e-6]");
        if (!(rel_tol > 0.0 && rel_tol <= 1e-6))
            throw DomainError("rel_tol", "rel_tol must lie in (0, 1e-6]");
        if (!(u_max > 0.0)) throw DomainError("u_max", "u_max must be > 0");
    }
};

namespace detail {

// log(1 + x) for complex x without forming 1 + x in the working precision;
// needed because the Heston C-function divides log terms of size O(nu^2)
// by nu^2, so the low bits of x matter.
template <class Real>
std::complex<Real> log1p_c(std::complex<Real> x) {
    const Real re = x.real(), im = x.imag();
    return {Real(0.5) * std::log1p(Real(2) * re + re * re + im * im),
            std::atan2(im, Real(1) + re)};
}

// Characteristic exponent of the zero-drift log return Y = X_T - x_0 - r*tau,
// in the branch-stable ("little Heston trap") formulation: g uses (beta - d)
// so the complex log argument never crosses the negative real axis.
template <class Real>
std::complex<Real> cf_reduced(std::complex<Real> z, const HestonParams& p,
                              Real tau) {
    using C = std::complex<Real>;
    const C i(0, 1);
    const Real nu = Real(p.nu), kappa = Real(p.kappa);
    const C beta = kappa - i * Real(p.rho) * nu * z;
    const C w = nu * nu * (z * z + i * z);
    const C d = std::sqrt(beta * beta + w);
    // beta - d rewritten as -w / (beta + d): avoids the catastrophic
    // cancellation that otherwise blows up the 1/nu^2 factors as nu -> 0.
    const C bmd = -w / (beta + d);
    const C g = bmd / (beta + d);
    const C emdt = std::exp(-d * tau);
    const C log_term = log1p_c<Real>(-g * emdt) - log1p_c<Real>(-g);
    const C big_c = kappa / (nu * nu) * (bmd * tau - Real(2) * log_term);
    const C big_d = bmd / (nu * nu) * (Real(1) - emdt) / (Real(1) - g * emdt);
    return std::exp(Real(p.theta) * big_c + Real(p.v0) * big_d);
}

template <class Real>
const GaussLegendre<Real>& gl_rule(int n) {
    // Node sets are cached per (Real, n); cheap to recompute anyway.
    static thread_local int cached_n = -1;
    static thread_local GaussLegendre<Real>* rule = nullptr;
    if (cached_n != n) {
        delete rule;
        rule = new GaussLegendre<Real>(n);
        cached_n = n;
    }
    return *rule;
}

// Lewis single-integral call price:
//   C = S0 - sqrt(S0 K) e^{-r tau/2} / pi *
//       int_0^inf Re[e^{iuk} psi(u - i/2)] / (u^2 + 1/4) du,
// k = ln(S0/K) + r tau, mapped to a finite interval via u = tan(x).
template <class Real>
Real lewis_integrand(Real u, const HestonParams& p, Real tau, Real k) {
    using C = std::complex<Real>;
    const C i(0, 1);
    const C z(u, Real(-0.5));
    const C val = std::exp(i * u * k) * cf_reduced<Real>(z, p, tau);
    return val.real() / (u * u + Real(0.25));
}

template <class Real>
Real lewis_call(const HestonParams& p, Real strike, Real tau, int n_nodes) {
    const Real pi = Real(3.14159265358979323846264338327950288L);
    const Real s0 = Real(p.s0), r = Real(p.r);
    const Real k = std::log(s0 / strike) + r * tau;
    const auto& rule = gl_rule<Real>(n_nodes);
    const Real integral = rule.integrate(
        [&](Real x) {
            const Real u = std::tan(x);
            const Real sec2 = Real(1) + u * u;
            return lewis_integrand<Real>(u, p, tau, k) * sec2;
        },
        Real(0), pi / 2);
    return s0 - std::sqrt(s0 * strike) * std::exp(-r * tau / 2) / pi * integral;
}

}  // namespace detail

// Characteristic function of X_T (log price) under the Heston dynamics,
// normalized so that cf(0) = 1 and cf(-i) = s0 e^{r tau}.
inline std::complex<double> heston_cf(std::complex<double> u,
                                      const HestonParams& p, double tau) {
    const std::complex<double> i(0, 1);
    const double drift = std::log(p.s0) + p.r * tau;
    return std::exp(i * u * drift) * detail::cf_reduced<double>(u, p, tau);
}

// High-precision variant of the reference call price (fixed Gauss-Legendre
// in the requested floating type). Used where approximation errors approach
// the double-precision noise floor.
template <class Real>
Real reference_call_hp(const HestonParams& p, const OptionSpec& spec,
                       int n_nodes = 192) {
    return detail::lewis_call<Real>(p, Real(spec.strike), Real(spec.tau()), n_nodes);
}

inline PriceResult price_reference(const HestonParams& p, const OptionSpec& spec,
                                   const QuadratureConfig& q = {}) {
    PriceResult res;
    const auto t0 = std::chrono::steady_clock::now();
    const double tau = spec.tau();
    const bool want_adaptive = q.scheme == QuadratureConfig::Scheme::adaptive ||
                               p.nu > 0.8 * std::sqrt(2.0 * p.kappa * p.theta);
    if (!want_adaptive) {
        res.price = detail::lewis_call<double>(p, spec.strike, tau, q.n_nodes);
    } else {
        const double k = std::log(p.s0 / spec.strike) + p.r * tau;
        const double x_max = std::atan(q.u_max);
        const double integral = integrate_adaptive(
            [&](double x) {
                const double u = std::tan(x);
                return detail::lewis_integrand<double>(u, p, tau, k) * (1.0 + u * u);
            },
            0.0, x_max, q.abs_tol, q.rel_tol);
        res.price = p.s0 - std::sqrt(p.s0 * spec.strike) *
                               std::exp(-p.r * tau / 2) / M_PI * integral;
    }
    res.method = Method::ref_fourier;
    res.elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

// European put via the Gil-Pelaez probabilities P1, P2 -- a genuinely
// different pair of integrals from the Lewis call route, so put-call parity
// is a real cross-check between the two representations.
inline double reference_put(const HestonParams& p, const OptionSpec& spec,
                            const QuadratureConfig& q = {}) {
    const double tau = spec.tau();
    const double log_k = std::log(spec.strike);
    const std::complex<double> i(0, 1);
    const auto& rule = detail::gl_rule<double>(q.n_nodes);

    auto probability = [&](bool spot_measure) {
        const double integral = rule.integrate(
            [&](double x) {
                const double u = std::tan(x);
                std::complex<double> cf;
                if (spot_measure) {
                    cf = heston_cf(std::complex<double>(u, -1.0), p, tau) /
                         (p.s0 * std::exp(p.r * tau));
                } else {
                    cf = heston_cf(std::complex<double>(u, 0.0), p, tau);
                }
                const auto val = std::exp(-i * u * log_k) * cf / (i * u);
                return val.real() * (1.0 + u * u);
            },
            0.0, M_PI_2);
        return 0.5 + integral / M_PI;
    };

    const double p1 = probability(true);
    const double p2 = probability(false);
    return spec.strike * std::exp(-p.r * tau) * (1.0 - p2) - p.s0 * (1.0 - p1);
}

}  // namespace hestonx

#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace hestonx {

// Thrown when a parameter is outside its admissible range. Carries the
// offending field name.
class DomainError : public std::invalid_argument {
public:
    DomainError(std::string field, const std::string& what)
        : std::invalid_argument(what), field_(std::move(field)) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

// 2*kappa*theta < nu^2: the variance process can hit zero.
class FellerViolation : public std::invalid_argument {
public:
    explicit FellerViolation(const std::string& what) : std::invalid_argument(what) {}
};

// A zero-correlation-only routine was called with rho != 0.
class RhoNotZero : public std::invalid_argument {
public:
    explicit RhoNotZero(const std::string& what) : std::invalid_argument(what) {}
};

// Heston model parameters, annualized. v0 is the initial *variance* sigma_0^2.
// Validation happens on construction; an instance that exists is valid.
struct HestonParams {
    double kappa;  // mean-reversion rate, > 0
    double theta;  // long-run variance, > 0
    double nu;     // vol-of-vol, > 0
    double rho;    // spot/vol correlation, in (-1, 1)
    double v0;     // initial variance sigma_0^2, > 0
    double r;      // risk-free rate, >= 0
    double s0;     // spot price, > 0

    HestonParams(double kappa_, double theta_, double nu_, double rho_,
                 double v0_, double r_, double s0_)
        : kappa(kappa_), theta(theta_), nu(nu_), rho(rho_), v0(v0_), r(r_), s0(s0_) {
        check_positive("kappa", kappa);
        check_positive("theta", theta);
        check_positive("nu", nu);
        check_positive("v0", v0);
        check_positive("s0", s0);
        if (!(r >= 0.0) || !std::isfinite(r))
            throw DomainError("r", "r must be >= 0, got " + std::to_string(r));
        if (!(rho > -1.0 && rho < 1.0))
            throw DomainError("rho", "rho must lie strictly inside (-1, 1), got " +
                                         std::to_string(rho));
        if (2.0 * kappa * theta < nu * nu)
            throw FellerViolation("Feller condition violated: 2*kappa*theta = " +
                                  std::to_string(2.0 * kappa * theta) + " < nu^2 = " +
                                  std::to_string(nu * nu));
    }

private:
    static void check_positive(const char* name, double v) {
        if (!(v > 0.0) || !std::isfinite(v))
            throw DomainError(name, std::string(name) + " must be > 0, got " +
                                        std::to_string(v));
    }
};

// Re-validates an already constructed parameter set. Idempotent: returns its
// argument unchanged when all invariants hold.
inline HestonParams validate_params(const HestonParams& p) {
    return HestonParams(p.kappa, p.theta, p.nu, p.rho, p.v0, p.r, p.s0);
}

// European call contract: strike, maturity and valuation time (annualized).
struct OptionSpec {
    double strike;
    double maturity;
    double t = 0.0;

    OptionSpec(double strike_, double maturity_, double t_ = 0.0)
        : strike(strike_), maturity(maturity_), t(t_) {
        if (!(strike > 0.0) || !std::isfinite(strike))
            throw DomainError("strike", "strike must be > 0");
        if (!(maturity > 0.0) || !std::isfinite(maturity))
            throw DomainError("maturity", "maturity must be > 0");
        if (!(t >= 0.0 && t < maturity))
            throw DomainError("t", "valuation time must satisfy 0 <= t < maturity");
    }

    double tau() const noexcept { return maturity - t; }
};

enum class Method {
    ref_fourier,
    approx_o2,
    approx_o3,
    approx_o4,
    approx_zero_corr,
    monte_carlo,
};

inline const char* method_name(Method m) noexcept {
    switch (m) {
        case Method::ref_fourier: return "ref";
        case Method::approx_o2: return "o2";
        case Method::approx_o3: return "o3";
        case Method::approx_o4: return "o4";
        case Method::approx_zero_corr: return "zc";
        case Method::monte_carlo: return "mc";
    }
    return "?";
}

struct PriceResult {
    double price = 0.0;
    Method method = Method::ref_fourier;
    // Structural error-order factor nu^p * (rho polynomial) * min(1/r, tau).
    // A relative ranking device only; the theorems' constants are not included.
    double error_indicator = 0.0;
    double elapsed = 0.0;  // wall-clock seconds
};

}  // namespace hestonx

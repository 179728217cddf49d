#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace hestonx {

class QuadratureNonConvergence : public std::runtime_error {
public:
    explicit QuadratureNonConvergence(const std::string& what)
        : std::runtime_error(what) {}
};

// Gauss-Legendre nodes/weights on [-1, 1] via Newton iteration on P_n.
template <class Real = double>
struct GaussLegendre {
    std::vector<Real> nodes;
    std::vector<Real> weights;

    explicit GaussLegendre(int n) : nodes(n), weights(n) {
        const Real pi = Real(3.14159265358979323846264338327950288L);
        for (int i = 0; i < (n + 1) / 2; ++i) {
            Real x = std::cos(pi * (Real(i) + Real(0.75)) / (Real(n) + Real(0.5)));
            Real pp = 0;
            for (int it = 0; it < 100; ++it) {
                Real p0 = 1, p1 = 0;
                for (int j = 0; j < n; ++j) {
                    Real p2 = p1;
                    p1 = p0;
                    p0 = ((2 * j + 1) * x * p1 - j * p2) / Real(j + 1);
                }
                pp = Real(n) * (x * p0 - p1) / (x * x - 1);
                Real dx = p0 / pp;
                x -= dx;
                if (std::abs(dx) < Real(1e-19)) break;
            }
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = weights[n - 1 - i] = Real(2) / ((1 - x * x) * pp * pp);
        }
    }

    template <class F>
    auto integrate(F&& f, Real a, Real b) const {
        const Real half = (b - a) / 2, mid = (a + b) / 2;
        decltype(f(a)) sum{};
        for (std::size_t i = 0; i < nodes.size(); ++i)
            sum += weights[i] * f(mid + half * nodes[i]);
        return sum * half;
    }
};

namespace detail {

// Gauss 7 / Kronrod 15 pair (positive abscissae; symmetric).
inline constexpr double kKronrodX[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.0};
inline constexpr double kKronrodW[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
inline constexpr double kGaussW[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

template <class F>
void gk15(F&& f, double a, double b, double& kronrod, double& err) {
    const double half = (b - a) / 2, mid = (a + b) / 2;
    double fc = f(mid);
    double resg = fc * kGaussW[3];
    double resk = fc * kKronrodW[7];
    for (int i = 0; i < 7; ++i) {
        const double dx = half * kKronrodX[i];
        const double fs = f(mid - dx) + f(mid + dx);
        resk += fs * kKronrodW[i];
        if (i % 2 == 1) resg += fs * kGaussW[i / 2];
    }
    kronrod = resk * half;
    err = std::abs((resk - resg) * half);
}

}  // namespace detail

// Adaptive Gauss-Kronrod (G7K15) with interval bisection. Used by the oracle
// suite and as the adaptive fallback of the reference pricer.
template <class F>
double integrate_adaptive(F&& f, double a, double b, double abs_tol = 1e-13,
                          double rel_tol = 1e-12, int max_intervals = 4000) {
    struct Seg {
        double a, b, value, err;
    };
    std::vector<Seg> segs;
    double v0, e0;
    detail::gk15(f, a, b, v0, e0);
    segs.push_back({a, b, v0, e0});

    for (int iter = 0; iter < max_intervals; ++iter) {
        double total = 0, err = 0;
        std::size_t worst = 0;
        for (std::size_t i = 0; i < segs.size(); ++i) {
            total += segs[i].value;
            err += segs[i].err;
            if (segs[i].err > segs[worst].err) worst = i;
        }
        if (err <= abs_tol || err <= rel_tol * std::abs(total)) return total;

        Seg s = segs[worst];
        const double mid = (s.a + s.b) / 2;
        Seg left{s.a, mid, 0, 0}, right{mid, s.b, 0, 0};
        detail::gk15(f, left.a, left.b, left.value, left.err);
        detail::gk15(f, right.a, right.b, right.value, right.err);
        segs[worst] = left;
        segs.push_back(right);
    }
    throw QuadratureNonConvergence("adaptive quadrature budget exhausted");
}

}  // namespace hestonx

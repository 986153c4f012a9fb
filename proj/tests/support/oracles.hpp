#pragma once

// Independent reference computations shared by the unit and acceptance
// tests. Nothing here calls the assembly code under test.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <utility>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "levyexit/dense.hpp"
#include "levyexit/solver.hpp"

namespace oracle {

/// Symmetric-only scheme (beta = 0) assembled term by term with direct pow
/// calls and the exterior folded in place, in the style of the classical
/// punched-hole discretization of the symmetric fractional operator.
struct ReferenceSystem {
    levyexit::DenseMatrix matrix;
    std::vector<double> rhs;
};

inline ReferenceSystem symmetric_reference(const levyexit::ExitProblem& p) {
    const double alpha = p.noise.alpha;
    const double c_half = levyexit::c_alpha(alpha) / 2.0;
    const double a = p.grid.a;
    const double b = p.grid.b;
    const double h = p.grid.h;
    const long ja = std::lround(a / h);
    const long jb = std::lround(b / h);
    const long jm = std::lround((a + b) / (2.0 * h));
    const long n = jb - ja - 1;
    const double left = p.kind == levyexit::ProblemKind::EscapeLeft ? 1.0 : 0.0;

    ReferenceSystem s{levyexit::DenseMatrix(static_cast<std::size_t>(n), static_cast<std::size_t>(n)),
                      std::vector<double>(static_cast<std::size_t>(n),
                                          p.kind == levyexit::ProblemKind::MeanExitTime ? -1.0 : 0.0)};
    double diff = p.noise.d / 2.0;
    if (p.scheme.punched_hole_correction) {
        diff += -c_half * std::riemann_zeta(alpha - 1.0) * std::pow(h, 2.0 - alpha);
    }
    for (long i = 0; i < n; ++i) {
        const long j = ja + 1 + i;
        const double x = static_cast<double>(j) * h;
        auto add = [&](long col, double v) {
            if (col <= ja) {
                s.rhs[static_cast<std::size_t>(i)] -= v * left;
            } else if (col < jb) {
                s.matrix(static_cast<std::size_t>(i), static_cast<std::size_t>(col - ja - 1)) += v;
            }
        };
        add(j - 1, diff / (h * h));
        add(j, -2.0 * diff / (h * h));
        add(j + 1, diff / (h * h));
        const double f = p.drift(x);
        add(j + 1, f / (2.0 * h));
        add(j - 1, -f / (2.0 * h));
        const double dl = static_cast<double>(j - ja) * h;
        const double dr = static_cast<double>(jb - j) * h;
        add(j, -c_half / alpha * (std::pow(dl, -alpha) + std::pow(dr, -alpha)));
        s.rhs[static_cast<std::size_t>(i)] -= c_half / alpha * std::pow(dl, -alpha) * left;

        auto trapezoid = [&](long lo, long hi, bool compensate) {
            if (hi <= lo) return;
            for (long k = lo; k <= hi; ++k) {
                if (k == 0) continue;
                const double wt = (k == lo || k == hi) ? 0.5 : 1.0;
                const double xk = static_cast<double>(k) * h;
                const double c = c_half * h * wt / std::pow(std::abs(xk), 1.0 + alpha);
                add(j + k, c);
                add(j, -c);
                if (compensate) {
                    add(j + 1, -c * xk / (2.0 * h));
                    add(j - 1, c * xk / (2.0 * h));
                }
            }
        };
        if (j < jm) {
            trapezoid(j - ja, jb - j, false);
            trapezoid(ja - j, j - ja, true);
        } else {
            trapezoid(ja - j, j - jb, false);
            trapezoid(j - jb, jb - j, true);
        }
    }
    return s;
}

/// Mean exit time of the symmetric alpha-stable process (generator
/// -(-Delta)^{alpha/2}) from (-1, 1):
///   sqrt(pi) (1 - x^2)^{alpha/2} / (2^alpha Gamma(1 + alpha/2) Gamma((1 + alpha)/2)).
inline double symmetric_interval_met(double x, double alpha) {
    using boost::math::tgamma;
    return std::sqrt(std::numbers::pi) * std::pow(1.0 - x * x, alpha / 2.0) /
           (std::pow(2.0, alpha) * tgamma(1.0 + alpha / 2.0) * tgamma((1.0 + alpha) / 2.0));
}

/// Smooth test function vanishing outside (a, b) with analytic derivatives.
///   phi(x) = q(x)^4 g(x),  q = (x - a)(b - x) / ((b - a)/2)^2,
///   g(x) = c0 + sum_k c_k cos(w_k x + s_k).
struct TestFunction {
    double a = 0.0;
    double b = 5.0;
    double c0 = 1.0;
    std::vector<double> c, w, s;

    [[nodiscard]] double q(double x) const {
        const double half = (b - a) / 2.0;
        return (x - a) * (b - x) / (half * half);
    }
    [[nodiscard]] std::pair<double, double> dq(double x) const {
        const double half = (b - a) / 2.0;
        return {(a + b - 2.0 * x) / (half * half), -2.0 / (half * half)};
    }
    [[nodiscard]] double g(double x, int order) const {
        double v = order == 0 ? c0 : 0.0;
        for (std::size_t k = 0; k < c.size(); ++k) {
            const double arg = w[k] * x + s[k];
            switch (order) {
                case 0: v += c[k] * std::cos(arg); break;
                case 1: v -= c[k] * w[k] * std::sin(arg); break;
                default: v -= c[k] * w[k] * w[k] * std::cos(arg); break;
            }
        }
        return v;
    }
    [[nodiscard]] double operator()(double x) const {
        if (x <= a || x >= b) return 0.0;
        const double qq = q(x);
        return qq * qq * qq * qq * g(x, 0);
    }
    [[nodiscard]] double d1(double x) const {
        if (x <= a || x >= b) return 0.0;
        const double qq = q(x);
        const auto [q1, q2] = dq(x);
        const double p0 = qq * qq * qq * qq;
        const double p1 = 4.0 * qq * qq * qq * q1;
        (void)q2;
        return p1 * g(x, 0) + p0 * g(x, 1);
    }
    [[nodiscard]] double d2(double x) const {
        if (x <= a || x >= b) return 0.0;
        const double qq = q(x);
        const auto [q1, q2] = dq(x);
        const double p0 = qq * qq * qq * qq;
        const double p1 = 4.0 * qq * qq * qq * q1;
        const double p2 = 12.0 * qq * qq * q1 * q1 + 4.0 * qq * qq * qq * q2;
        return p2 * g(x, 0) + 2.0 * p1 * g(x, 1) + p0 * g(x, 2);
    }
};

/// int_0^inf [phi(x + sign y) - phi(x) - 1_{y<1} sign y phi'(x)] y^{-1-alpha} dy
/// by adaptive Gauss-Kronrod on geometric panels; a Taylor term covers (0, eps).
inline double one_sided_jump_integral(const TestFunction& phi, double x, double alpha, int sign) {
    using boost::math::quadrature::gauss_kronrod;
    const double sg = static_cast<double>(sign);
    const double p0 = phi(x);
    const double p1 = phi.d1(x);
    const double eps = 1e-4;
    auto inner = [&](double y) {
        return (phi(x + sg * y) - p0 - sg * y * p1) * std::pow(y, -1.0 - alpha);
    };
    auto outer = [&](double y) { return (phi(x + sg * y) - p0) * std::pow(y, -1.0 - alpha); };
    double total = phi.d2(x) / 2.0 * std::pow(eps, 2.0 - alpha) / (2.0 - alpha);
    // Break points: geometric towards 0, plus the support edges of phi.
    std::vector<double> cuts;
    for (double y = eps; y < 1.0; y *= 2.0) cuts.push_back(y);
    cuts.push_back(1.0);
    const double far = sign > 0 ? phi.b - x : x - phi.a;
    if (far > eps && far < 1.0) cuts.push_back(far);
    std::sort(cuts.begin(), cuts.end());
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        total += gauss_kronrod<double, 61>::integrate(inner, cuts[i], cuts[i + 1], 6, 1e-11);
    }
    // [1, far]: phi(x + sign y) nonzero; beyond: integrand is -p0 y^{-1-alpha}.
    if (far > 1.0) {
        total += gauss_kronrod<double, 61>::integrate(outer, 1.0, far, 6, 1e-11);
        total += -p0 * std::pow(far, -alpha) / alpha;
    } else {
        total += -p0 / alpha;
    }
    return total;
}

/// Continuous generator of dX = f dt + dL applied to phi (phi = 0 outside D).
inline double generator(const TestFunction& phi, double x, const levyexit::ExitProblem& p) {
    const auto jc = levyexit::jump_coeffs(p.noise);
    return p.drift(x) * phi.d1(x) + p.noise.d / 2.0 * phi.d2(x) +
           jc.c1 * one_sided_jump_integral(phi, x, p.noise.alpha, +1) +
           jc.c2 * one_sided_jump_integral(phi, x, p.noise.alpha, -1);
}

}  // namespace oracle

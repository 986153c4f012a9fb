#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "levyexit/errors.hpp"
#include "levyexit/stable_law.hpp"

namespace levyexit {

namespace {

constexpr double kPi = std::numbers::pi;

// 8-point Gauss-Legendre on [-1, 1], symmetric half.
constexpr std::array<double, 4> kGlNodes = {0.1834346424956498, 0.5255324099163290,
                                            0.7966664774136267, 0.9602898564975363};
constexpr std::array<double, 4> kGlWeights = {0.3626837833783620, 0.3137066458778873,
                                              0.2223810344533745, 0.1012285362903763};

// Composite 8-point Gauss-Legendre of g over [0, upper] with `nodes` total nodes.
template <class F>
double composite_gauss(F&& g, double upper, std::size_t nodes) {
    const std::size_t panels = std::max<std::size_t>(1, nodes / 8);
    const double width = upper / static_cast<double>(panels);
    const double half = 0.5 * width;
    double total = 0.0;
    for (std::size_t p = 0; p < panels; ++p) {
        const double mid = (static_cast<double>(p) + 0.5) * width;
        double panel = 0.0;
        for (std::size_t k = 0; k < kGlNodes.size(); ++k) {
            const double off = half * kGlNodes[k];
            panel += kGlWeights[k] * (g(mid - off) + g(mid + off));
        }
        total += panel * half;
    }
    return total;
}

}  // namespace

PdfResult stable_pdf(double x, const StableNoiseParams& params, const PdfQuadrature& quad) {
    params.validate();
    if (params.d != 0.0) {
        throw ValidationError("stable_pdf: requires d = 0 (pure stable law)");
    }
    const double a = params.alpha;
    const double tail = -std::log(quad.tail_epsilon);

    // Real part of exp(-i lambda x) exp(-Psi(lambda)).
    auto integrand = [&](double lambda) {
        const auto psi = characteristic_exponent(lambda, params);
        return std::exp(-psi.real()) * std::cos(lambda * x + psi.imag());
    };

    // Integrate in s with lambda = s^{6/alpha}: exp(-lambda^alpha) becomes
    // exp(-s^6) and the Jacobian s^{6/alpha - 1} vanishes to second order at 0,
    // so the cusp of the characteristic function no longer limits convergence.
    const double m = 6.0 / a;
    auto in_s = [&](double s) {
        if (s <= 0.0) return 0.0;
        const double lambda = std::pow(s, m);
        return integrand(lambda) * m * lambda / s;
    };
    const double upper = std::pow(tail, 1.0 / 6.0);
    auto evaluate = [&](std::size_t nodes) { return composite_gauss(in_s, upper, nodes) / kPi; };

    // sup f <= (1/pi) int_0^inf exp(-lambda^alpha) d lambda.
    const double peak = std::tgamma(1.0 + 1.0 / a) / kPi;
    std::size_t nodes = std::max<std::size_t>(quad.initial_nodes, 8);
    double previous = evaluate(nodes);
    double diff = 0.0;
    while (true) {
        const std::size_t next_nodes = nodes * 2;
        const double next = evaluate(next_nodes);
        diff = std::abs(next - previous);
        const double scale = std::max(std::abs(next), peak);
        if (std::isfinite(next) && diff <= quad.tolerance * scale) {
            PdfResult r;
            r.raw_value = next;
            r.clamped = next < 0.0;
            r.value = r.clamped ? 0.0 : next;
            r.nodes = next_nodes;
            r.error_estimate = diff;
            return r;
        }
        if (next_nodes * 2 > quad.max_nodes) {
            std::ostringstream msg;
            msg << "stable_pdf: Fourier inversion did not converge at x = " << x
                << " (alpha = " << a << ", beta = " << params.beta << "): last estimate " << next
                << ", change " << diff << " with " << next_nodes << " nodes, frequency cutoff "
                << upper << " (in lambda^(alpha/6))";
            throw NumericalError(msg.str());
        }
        previous = next;
        nodes = next_nodes;
    }
}

namespace {

// Zolotarev-type representation for alpha != 1, x > 0 in the S_alpha(1, beta, 0)
// parameterization (the S0 form evaluated at x + zeta).
double zolotarev_positive(double x, double alpha, double beta) {
    const double zeta = -beta * std::tan(0.5 * kPi * alpha);
    const double theta0 = std::atan(beta * std::tan(0.5 * kPi * alpha)) / alpha;
    if (x == 0.0) {
        return std::tgamma(1.0 + 1.0 / alpha) * std::cos(theta0) /
               (kPi * std::pow(1.0 + zeta * zeta, 1.0 / (2.0 * alpha)));
    }
    const double am1 = alpha - 1.0;
    const double cos_a_t0 = std::cos(alpha * theta0);
    const double lo = -theta0;
    const double hi = 0.5 * kPi;
    if (!(hi - lo > 1e-14)) return 0.0;
    const double log_x_pow = (alpha / am1) * std::log(x);
    // log V(theta)
    auto log_v = [&](double th) {
        const double s = std::sin(alpha * (theta0 + th));
        const double c = std::cos(th);
        const double tail = std::cos(alpha * theta0 + am1 * th);
        return std::log(cos_a_t0) / am1 + (alpha / am1) * (std::log(c) - std::log(s)) +
               std::log(tail) - std::log(c);
    };
    auto h = [&](double th) {
        const double lg = log_x_pow + log_v(th);
        if (!std::isfinite(lg)) return 0.0;
        if (lg > 7.0) return 0.0;  // exp(-e^7) underflows the product
        const double g = std::exp(lg);
        return g * std::exp(-g);
    };
    // g = x^{alpha/(alpha-1)} V(theta) is monotone in theta; split at g = 1 (peak).
    double left = lo + 1e-15 * (hi - lo);
    double right = hi - 1e-15 * (hi - lo);
    auto sgn = [&](double th) { return log_x_pow + log_v(th); };
    double split = std::numeric_limits<double>::quiet_NaN();
    const double fl = sgn(left);
    const double fr = sgn(right);
    if (std::isfinite(fl) && std::isfinite(fr) && (fl < 0.0) != (fr < 0.0)) {
        double l = left;
        double r = right;
        for (int it = 0; it < 200 && r - l > 1e-15; ++it) {
            const double m = 0.5 * (l + r);
            if ((sgn(m) < 0.0) == (fl < 0.0)) {
                l = m;
            } else {
                r = m;
            }
        }
        split = 0.5 * (l + r);
    }
    using boost::math::quadrature::gauss_kronrod;
    double integral = 0.0;
    if (std::isfinite(split)) {
        integral = gauss_kronrod<double, 31>::integrate(h, lo, split, 15, 1e-12) +
                   gauss_kronrod<double, 31>::integrate(h, split, hi, 15, 1e-12);
    } else {
        integral = gauss_kronrod<double, 31>::integrate(h, lo, hi, 15, 1e-12);
    }
    // h = g exp(-g) with g = x^{alpha/(alpha-1)} V; the prefactor absorbs x^{-1}.
    return alpha * integral / (kPi * std::abs(am1) * x);
}

double zolotarev_positive_alpha_one(double x, double beta) {
    const double shift = -kPi * x / (2.0 * beta);
    auto log_v = [&](double th) {
        const double lever = 0.5 * kPi + beta * th;
        return std::log(2.0 / kPi) + std::log(lever / std::cos(th)) + lever * std::tan(th) / beta;
    };
    auto h = [&](double th) {
        const double lg = shift + log_v(th);
        if (!std::isfinite(lg) || lg > 7.0) return 0.0;
        const double g = std::exp(lg);
        return g * std::exp(-g);
    };
    const double lo = -0.5 * kPi + 1e-12;
    const double hi = 0.5 * kPi - 1e-12;
    using boost::math::quadrature::gauss_kronrod;
    const double integral = gauss_kronrod<double, 31>::integrate(h, lo, hi, 15, 1e-12);
    return integral / (2.0 * std::abs(beta));
}

}  // namespace

double stable_pdf_integral(double x, const StableNoiseParams& params) {
    params.validate();
    const double a = params.alpha;
    double b = params.beta;
    if (a == 1.0) {
        if (b == 0.0) return 1.0 / (kPi * (1.0 + x * x));
        return zolotarev_positive_alpha_one(x, b);
    }
    if (x < 0.0) {
        x = -x;
        b = -b;
    }
    return zolotarev_positive(x, a, b);
}

}  // namespace levyexit

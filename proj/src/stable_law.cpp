#include "levyexit/stable_law.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "levyexit/errors.hpp"

namespace levyexit {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEulerGamma = std::numbers::egamma;

}  // namespace

StableNoiseParams StableNoiseParams::make(double alpha, double beta, double d) {
    StableNoiseParams p{alpha, beta, d};
    p.validate();
    return p;
}

void StableNoiseParams::validate() const {
    std::ostringstream msg;
    if (!(alpha > 0.0 && alpha < 2.0)) {
        msg << "stability index must satisfy 0 < alpha < 2 (got alpha = " << alpha << ")";
        throw ValidationError(msg.str());
    }
    if (!(beta >= -1.0 && beta <= 1.0)) {
        msg << "skewness must satisfy -1 <= beta <= 1 (got beta = " << beta << ")";
        throw ValidationError(msg.str());
    }
    if (!(d >= 0.0) || !std::isfinite(d)) {
        msg << "diffusion must satisfy d >= 0 (got d = " << d << ")";
        throw ValidationError(msg.str());
    }
}

double c_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 2.0)) {
        std::ostringstream msg;
        msg << "c_alpha: stability index must satisfy 0 < alpha < 2 (got " << alpha << ")";
        throw DomainError(msg.str());
    }
    if (alpha == 1.0) return 2.0 / kPi;
    // With e = alpha - 1: alpha(1-alpha) = -e(1+e), cos(pi alpha/2) = -sin(pi e/2).
    // This form has no cancellation near alpha = 1.
    const double e = alpha - 1.0;
    return (1.0 + e) * e / (std::tgamma(1.0 - e) * std::sin(0.5 * kPi * e));
}

JumpMeasureCoeffs jump_coeffs(const StableNoiseParams& params) {
    params.validate();
    JumpMeasureCoeffs c;
    c.c_alpha = c_alpha(params.alpha);
    c.c1 = c.c_alpha * (1.0 + params.beta) / 2.0;
    c.c2 = c.c_alpha * (1.0 - params.beta) / 2.0;
    return c;
}

double levy_integrability(const StableNoiseParams& params) {
    const auto c = jump_coeffs(params);
    const double a = params.alpha;
    return (c.c1 + c.c2) * (1.0 / (2.0 - a) + 1.0 / a);
}

std::complex<double> characteristic_exponent(double lambda, const StableNoiseParams& params) {
    if (lambda == 0.0) return {0.0, 0.0};
    const double a = params.alpha;
    const double b = params.beta;
    const double abs_l = std::abs(lambda);
    const double sgn = lambda > 0.0 ? 1.0 : -1.0;
    const double gauss = 0.5 * params.d * lambda * lambda;
    if (a == 1.0) {
        const double mag = abs_l;
        return {mag + gauss, mag * b * (2.0 / kPi) * sgn * std::log(abs_l)};
    }
    const double mag = std::pow(abs_l, a);
    return {mag + gauss, -mag * b * sgn * std::tan(0.5 * kPi * a)};
}

double truncation_drift(const StableNoiseParams& params) {
    const auto c = jump_coeffs(params);
    const double diff = c.c1 - c.c2;
    if (params.alpha == 1.0) return diff * (1.0 - kEulerGamma);
    return diff / (params.alpha - 1.0);
}

std::complex<double> generator_exponent(double lambda, const StableNoiseParams& params) {
    return characteristic_exponent(lambda, params) -
           std::complex<double>(0.0, lambda * truncation_drift(params));
}

StableSampler::StableSampler(const StableNoiseParams& params) : params_(params) {
    params_.validate();
    if (params_.alpha != 1.0) {
        const double t = params_.beta * std::tan(0.5 * kPi * params_.alpha);
        shift_ = std::atan(t) / params_.alpha;
        scale_ = std::pow(1.0 + t * t, 1.0 / (2.0 * params_.alpha));
    }
}

double StableSampler::operator()(double angle, double expo) const {
    const double a = params_.alpha;
    const double b = params_.beta;
    if (a == 1.0) {
        const double half_pi = 0.5 * kPi;
        const double lever = half_pi + b * angle;
        return (2.0 / kPi) *
               (lever * std::tan(angle) - b * std::log(half_pi * expo * std::cos(angle) / lever));
    }
    const double inner = a * (angle + shift_);
    const double cos_v = std::cos(angle);
    return scale_ * std::sin(inner) / std::pow(cos_v, 1.0 / a) *
           std::pow(std::cos(angle - inner) / expo, (1.0 - a) / a);
}

double sample_stable(const StableNoiseParams& params, double angle, double expo) {
    return StableSampler(params)(angle, expo);
}

}  // namespace levyexit

#pragma once

#include <complex>
#include <cstddef>

namespace levyexit {

/// Parameters of the Levy triplet (0, d, nu_{alpha,beta}).
///
/// alpha in (0, 2), beta in [-1, 1], d >= 0. Use make() to get a validated
/// value; aggregate initialisation is allowed but unchecked.
struct StableNoiseParams {
    double alpha = 1.5;
    double beta = 0.0;
    double d = 0.0;

    /// Throws ValidationError naming the violated bound.
    static StableNoiseParams make(double alpha, double beta, double d = 0.0);
    void validate() const;
};

/// Coefficients of the jump measure nu(dy) = c1 |y|^{-1-alpha} dy for y > 0
/// and c2 |y|^{-1-alpha} dy for y < 0, with c1 + c2 = c_alpha.
struct JumpMeasureCoeffs {
    double c_alpha = 0.0;
    double c1 = 0.0;
    double c2 = 0.0;

    /// (c1 - c2) / (c1 + c2); recovers beta.
    [[nodiscard]] double skewness() const { return (c1 - c2) / (c1 + c2); }
};

/// C_alpha = alpha(1-alpha) / (Gamma(2-alpha) cos(pi alpha / 2)), 2/pi at alpha = 1.
/// Near alpha = 1 the removable singularity is evaluated by its series.
double c_alpha(double alpha);

JumpMeasureCoeffs jump_coeffs(const StableNoiseParams& params);

/// Exact value of the integral of min(y^2, 1) against nu_{alpha,beta}:
/// (c1 + c2) (1/(2-alpha) + 1/alpha).
double levy_integrability(const StableNoiseParams& params);

/// Psi with E exp(i lambda L_1) = exp(-Psi(lambda)) for L_1 ~ S_alpha(1, beta, 0)
/// (Samorodnitsky-Taqqu), plus the Gaussian part d lambda^2 / 2.
std::complex<double> characteristic_exponent(double lambda, const StableNoiseParams& params);

/// Drift b such that the Levy process generated by
///   int [phi(x+y) - phi(x) - 1_{|y|<1} y phi'(x)] nu(dy)   (+ d/2 phi'')
/// equals (S_alpha(1, beta, 0) motion) + b t. Zero when beta = 0.
///   alpha != 1:  b = (c1 - c2) / (alpha - 1)
///   alpha == 1:  b = (c1 - c2) (1 - Euler gamma)
double truncation_drift(const StableNoiseParams& params);

/// Characteristic exponent of the process whose generator uses the truncated
/// compensator 1_{|y|<1}: Psi(lambda) - i lambda truncation_drift.
std::complex<double> generator_exponent(double lambda, const StableNoiseParams& params);

/// Chambers-Mallows-Stuck sampler for S_alpha(1, beta, 0).
///
/// Constants depending only on (alpha, beta) are computed once. The Gaussian
/// diffusion d is not sampled here.
class StableSampler {
public:
    explicit StableSampler(const StableNoiseParams& params);

    /// `angle` uniform on (-pi/2, pi/2), `expo` exponential with mean 1.
    [[nodiscard]] double operator()(double angle, double expo) const;

    [[nodiscard]] const StableNoiseParams& params() const { return params_; }

private:
    StableNoiseParams params_;
    double shift_ = 0.0;  // B = arctan(beta tan(pi alpha/2)) / alpha
    double scale_ = 1.0;  // (1 + beta^2 tan^2(pi alpha/2))^{1/(2 alpha)}
};

double sample_stable(const StableNoiseParams& params, double angle, double expo);

/// Settings for the Fourier-inversion density.
struct PdfQuadrature {
    /// Truncate the frequency integral where exp(-Re Psi) drops below this.
    double tail_epsilon = 1e-12;
    /// Initial number of quadrature nodes; doubled until converged.
    std::size_t initial_nodes = std::size_t{1} << 14;
    std::size_t max_nodes = std::size_t{1} << 22;
    /// Convergence test between successive doublings, relative to the
    /// density peak scale.
    double tolerance = 1e-9;
};

struct PdfResult {
    double value = 0.0;        ///< density after clamping negatives to 0
    double raw_value = 0.0;    ///< quadrature result before clamping
    bool clamped = false;      ///< raw value was negative (ringing)
    std::size_t nodes = 0;     ///< nodes used in the accepted estimate
    double error_estimate = 0.0;
};

/// Density of S_alpha(1, beta, 0) by numerical Fourier inversion
///   f(x) = (1/pi) Re int_0^inf exp(-i lambda x) exp(-Psi(lambda)) d lambda.
/// Requires d == 0. Throws NumericalError (with node count and last
/// difference) when the tolerance is not met within max_nodes; for
/// alpha <= 0.3 and x away from 0 this is the expected outcome.
PdfResult stable_pdf(double x, const StableNoiseParams& params, const PdfQuadrature& quad = {});

/// Density of S_alpha(1, beta, 0) from the Zolotarev/Nolan one-dimensional
/// integral representation. Non-oscillatory; used where Fourier inversion
/// cannot converge (small alpha) and as its cross-check.
double stable_pdf_integral(double x, const StableNoiseParams& params);

}  // namespace levyexit

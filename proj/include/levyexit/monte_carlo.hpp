#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

#include "levyexit/drift.hpp"
#include "levyexit/stable_law.hpp"

namespace levyexit {

struct SimConfig {
    double dt = 1e-3;
    std::size_t n_paths = 100000;
    std::uint64_t max_steps = 10000000;
    std::uint64_t seed = 1;
    /// Threads used to run paths; 0 means hardware concurrency. The result
    /// does not depend on this value.
    unsigned workers = 0;
    /// Allow x0 outside (a, b): such paths exit at step 0. Test mode only.
    bool relaxed_start = false;

    void validate() const;
};

struct ExitStats {
    double met_mean = 0.0;    ///< over non-censored paths
    double met_stderr = 0.0;
    double p_left = 0.0;      ///< fraction of all paths landing in (-inf, a]
    double p_left_stderr = 0.0;
    double p_right = 0.0;
    std::size_t n_paths = 0;
    std::size_t n_left = 0;
    std::size_t n_right = 0;
    std::size_t n_censored = 0;
};

/// Euler-Maruyama step for dX = f(X) dt + dL_t, where L has generator
/// (d/2) D^2 plus the jump integral with compensator 1_{|y|<1}:
///   x + (f(x) + b) dt + sqrt(d dt) Z + dt^{1/alpha} S,
/// S ~ S_alpha(1, beta, 0) and b = truncation_drift(noise). alpha = 1 is
/// rejected.
class EulerStepper {
public:
    EulerStepper(const DriftField& drift, const StableNoiseParams& noise, double dt);

    [[nodiscard]] double step(double x, double gaussian, double stable) const {
        return x + (drift_(x) + shift_) * dt_ + gauss_scale_ * gaussian + jump_scale_ * stable;
    }

    [[nodiscard]] const StableSampler& sampler() const { return sampler_; }
    [[nodiscard]] bool has_gaussian() const { return gauss_scale_ != 0.0; }

private:
    DriftField drift_;
    StableSampler sampler_;
    double dt_;
    double shift_;
    double gauss_scale_;
    double jump_scale_;
};

/// Single step with caller-supplied variates (Z standard normal, S standard
/// stable); see EulerStepper.
double em_step(double x, double dt, const DriftField& drift, const StableNoiseParams& noise,
               double gaussian, double stable);

/// Independent random stream for one path, derived from (seed, path index)
/// only.
std::mt19937_64 path_stream(std::uint64_t seed, std::uint64_t path_index);

/// Simulates paths from x0 until they leave (a, b); the landing point decides
/// the side. Throws ValidationError for x0 outside (a, b) (unless
/// relaxed_start) or alpha = 1, NumericalError when every path is censored.
ExitStats simulate_exit(double x0, double a, double b, const DriftField& drift,
                        const StableNoiseParams& noise, const SimConfig& cfg);

}  // namespace levyexit

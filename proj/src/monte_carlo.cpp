#include "levyexit/monte_carlo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <thread>
#include <vector>

#include "levyexit/errors.hpp"

namespace levyexit {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Uniform on the open interval (0, 1).
double open_uniform(std::mt19937_64& rng) {
    return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

enum class Side : std::uint8_t { Left, Right, Censored };

struct PathOutcome {
    std::uint64_t steps = 0;
    Side side = Side::Censored;
};

void require_stepper_params(const StableNoiseParams& noise, double dt) {
    noise.validate();
    if (noise.alpha == 1.0) {
        throw ValidationError(
            "monte_carlo: alpha = 1 is not supported by the simulator; use the solver (met/escape) instead");
    }
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ValidationError("monte_carlo: dt > 0 violated");
}

}  // namespace

void SimConfig::validate() const {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ValidationError("simulate: dt > 0 violated");
    if (n_paths < 1) throw ValidationError("simulate: n_paths >= 1 violated");
    if (max_steps < 1) throw ValidationError("simulate: max_steps >= 1 violated");
}

EulerStepper::EulerStepper(const DriftField& drift, const StableNoiseParams& noise, double dt)
    : drift_(drift), sampler_((require_stepper_params(noise, dt), noise)), dt_(dt) {
    shift_ = truncation_drift(noise);
    gauss_scale_ = std::sqrt(noise.d * dt);
    jump_scale_ = std::pow(dt, 1.0 / noise.alpha);
}

double em_step(double x, double dt, const DriftField& drift, const StableNoiseParams& noise,
               double gaussian, double stable) {
    return EulerStepper(drift, noise, dt).step(x, gaussian, stable);
}

std::mt19937_64 path_stream(std::uint64_t seed, std::uint64_t path_index) {
    std::uint64_t state = seed;
    const std::uint64_t a = splitmix64(state);
    state = a ^ (path_index * 0xD1B54A32D192ED03ULL);
    const std::uint64_t s1 = splitmix64(state);
    const std::uint64_t s2 = splitmix64(state);
    std::seed_seq seq{static_cast<std::uint32_t>(s1), static_cast<std::uint32_t>(s1 >> 32),
                      static_cast<std::uint32_t>(s2), static_cast<std::uint32_t>(s2 >> 32)};
    return std::mt19937_64(seq);
}

ExitStats simulate_exit(double x0, double a, double b, const DriftField& drift,
                        const StableNoiseParams& noise, const SimConfig& cfg) {
    cfg.validate();
    if (!(a < b)) throw ValidationError("simulate: a < b violated");
    if (!cfg.relaxed_start && !(x0 > a && x0 < b)) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "simulate: x0 = " << x0 << " must lie in the open domain (" << a << ", " << b << ")";
        throw ValidationError(msg.str());
    }
    const EulerStepper stepper(drift, noise, cfg.dt);

    std::vector<PathOutcome> outcomes(cfg.n_paths);
    auto run_path = [&](std::size_t i) {
        PathOutcome out;
        double x = x0;
        if (x <= a || x >= b) {
            out.side = x <= a ? Side::Left : Side::Right;
            outcomes[i] = out;
            return;
        }
        auto rng = path_stream(cfg.seed, i);
        std::normal_distribution<double> normal;
        const auto& sampler = stepper.sampler();
        for (std::uint64_t n = 1; n <= cfg.max_steps; ++n) {
            const double angle = std::numbers::pi * (open_uniform(rng) - 0.5);
            const double expo = -std::log(open_uniform(rng));
            const double z = stepper.has_gaussian() ? normal(rng) : 0.0;
            x = stepper.step(x, z, sampler(angle, expo));
            if (x <= a || x >= b) {
                out.steps = n;
                out.side = x <= a ? Side::Left : Side::Right;
                break;
            }
        }
        outcomes[i] = out;
    };

    unsigned workers = cfg.workers == 0 ? std::max(1u, std::thread::hardware_concurrency()) : cfg.workers;
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, cfg.n_paths));
    if (workers <= 1) {
        for (std::size_t i = 0; i < cfg.n_paths; ++i) run_path(i);
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                for (std::size_t i = w; i < cfg.n_paths; i += workers) run_path(i);
            });
        }
    }

    // Aggregate in path order so the floating-point sums are reproducible.
    ExitStats st;
    st.n_paths = cfg.n_paths;
    double sum = 0.0;
    for (const auto& o : outcomes) {
        if (o.side == Side::Censored) {
            ++st.n_censored;
            continue;
        }
        (o.side == Side::Left ? st.n_left : st.n_right) += 1;
        sum += static_cast<double>(o.steps) * cfg.dt;
    }
    const std::size_t exited = st.n_left + st.n_right;
    if (exited == 0) {
        throw NumericalError("simulate: every path was censored at max_steps; increase max_steps or dt");
    }
    const double ne = static_cast<double>(exited);
    st.met_mean = sum / ne;
    double ss = 0.0;
    for (const auto& o : outcomes) {
        if (o.side == Side::Censored) continue;
        const double dev = static_cast<double>(o.steps) * cfg.dt - st.met_mean;
        ss += dev * dev;
    }
    const double var = exited > 1 ? ss / (ne - 1.0) : 0.0;
    st.met_stderr = std::sqrt(var / ne);
    const double np = static_cast<double>(st.n_paths);
    st.p_left = static_cast<double>(st.n_left) / np;
    st.p_right = static_cast<double>(st.n_right) / np;
    st.p_left_stderr = std::sqrt(st.p_left * (1.0 - st.p_left) / np);
    return st;
}

}  // namespace levyexit

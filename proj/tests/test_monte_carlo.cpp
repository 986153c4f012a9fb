#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <string>

#include "levyexit/errors.hpp"
#include "levyexit/monte_carlo.hpp"
#include "levyexit/solver.hpp"

using namespace levyexit;

namespace {

const DriftField kTumor = DriftField::tumor({0.1, 3.0});

StableNoiseParams sp(double a, double b, double d = 0.0) { return StableNoiseParams::make(a, b, d); }

SimConfig small(std::size_t paths, std::uint64_t seed = 3) {
    SimConfig c;
    c.n_paths = paths;
    c.seed = seed;
    c.workers = 1;
    return c;
}

}  // namespace

TEST_CASE("em_step: deterministic part and truncation shift") {
    const auto noise = sp(1.5, 0.5);
    const double dt = 0.01;
    const double b = truncation_drift(noise);
    CHECK(b != 0.0);
    for (double x : {0.3, 2.0, 4.4}) {
        CHECK(em_step(x, dt, kTumor, noise, 0.0, 0.0) == doctest::Approx(x + (tumor_drift(x, {0.1, 3.0}) + b) * dt).epsilon(1e-15));
        CHECK(em_step(x, dt, kTumor, sp(1.5, 0.0), 0.0, 0.0) == x + tumor_drift(x, {0.1, 3.0}) * dt);
    }
    // Noise terms scale as sqrt(d dt) and dt^{1/alpha}.
    CHECK(em_step(1.0, dt, DriftField::zero(), sp(1.5, 0.0, 2.0), 1.0, 0.0) == doctest::Approx(1.0 + std::sqrt(0.02)));
    CHECK(em_step(1.0, dt, DriftField::zero(), sp(1.5, 0.0), 0.0, 1.0) == doctest::Approx(1.0 + std::pow(dt, 1.0 / 1.5)));
    // Steady states are fixed points without noise.
    CHECK(em_step(0.0, dt, kTumor, sp(0.7, 0.0), 0.0, 0.0) == 0.0);
    CHECK(em_step(5.0, dt, kTumor, sp(0.7, 0.0), 0.0, 0.0) == doctest::Approx(5.0).epsilon(1e-14));
    CHECK_THROWS_AS(em_step(1.0, dt, kTumor, sp(1.0, 0.0), 0.0, 0.0), ValidationError);
    CHECK_THROWS_AS(em_step(1.0, 0.0, kTumor, sp(1.5, 0.0), 0.0, 0.0), ValidationError);
}

TEST_CASE("one-step increment has characteristic function exp(-dt generator_exponent)") {
    const double dt = 0.5;
    for (double a : {0.5, 1.5}) {
        for (double beta : {-1.0, 0.6}) {
            const auto noise = sp(a, beta, 0.4);
            const EulerStepper st(DriftField::zero(), noise, dt);
            std::mt19937_64 rng(42);
            std::uniform_real_distribution<double> ang(-std::numbers::pi / 2, std::numbers::pi / 2);
            std::exponential_distribution<double> ex(1.0);
            std::normal_distribution<double> nd;
            const int n = 200000;
            for (double lam : {0.5, 1.0, 2.0}) {
                double sc = 0, ss = 0, sc2 = 0, ss2 = 0;
                for (int i = 0; i < n; ++i) {
                    const double inc = st.step(0.0, nd(rng), st.sampler()(ang(rng), ex(rng)));
                    const double c = std::cos(lam * inc), s = std::sin(lam * inc);
                    sc += c;
                    ss += s;
                    sc2 += c * c;
                    ss2 += s * s;
                }
                const double mc = sc / n, ms = ss / n;
                const double se_c = std::sqrt((sc2 / n - mc * mc) / n), se_s = std::sqrt((ss2 / n - ms * ms) / n);
                const auto want = std::exp(-dt * generator_exponent(lam, noise));
                INFO("alpha=" << a << " beta=" << beta << " lambda=" << lam);
                CHECK(std::abs(mc - want.real()) < 4.0 * se_c);
                CHECK(std::abs(ms - want.imag()) < 4.0 * se_s);
            }
        }
    }
}

TEST_CASE("path streams depend only on (seed, index)") {
    auto a = path_stream(9, 17), b = path_stream(9, 17), c = path_stream(9, 18), d = path_stream(10, 17);
    const auto va = a();
    CHECK(va == b());
    CHECK(va != c());
    CHECK(va != d());
}

TEST_CASE("results are bitwise identical for any worker count") {
    auto cfg = small(3000, 11);
    const auto one = simulate_exit(2.5, 0.0, 5.0, kTumor, sp(1.5, 0.5), cfg);
    cfg.workers = 4;
    const auto four = simulate_exit(2.5, 0.0, 5.0, kTumor, sp(1.5, 0.5), cfg);
    CHECK(one.met_mean == four.met_mean);
    CHECK(one.met_stderr == four.met_stderr);
    CHECK(one.n_left == four.n_left);
    CHECK(one.n_right == four.n_right);
    cfg.seed = 12;
    CHECK(simulate_exit(2.5, 0.0, 5.0, kTumor, sp(1.5, 0.5), cfg).met_mean != one.met_mean);
}

TEST_CASE("start handling") {
    auto cfg = small(50);
    try {
        simulate_exit(7.25, 0.0, 5.0, kTumor, sp(1.5, 0.0), cfg);
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("7.25") != std::string::npos);
    }
    CHECK_THROWS_AS(simulate_exit(0.0, 0.0, 5.0, kTumor, sp(1.5, 0.0), cfg), ValidationError);
    cfg.relaxed_start = true;
    const auto st = simulate_exit(0.0, 0.0, 5.0, kTumor, sp(1.5, 0.0), cfg);
    CHECK(st.met_mean == 0.0);
    CHECK(st.p_left == 1.0);
    CHECK(st.n_left == 50);
    CHECK(simulate_exit(5.0, 0.0, 5.0, kTumor, sp(1.5, 0.0), cfg).p_right == 1.0);
}

TEST_CASE("every path is classified exactly once") {
    auto cfg = small(400);
    cfg.max_steps = 300;
    const auto st = simulate_exit(2.5, 0.0, 5.0, kTumor, sp(1.5, 0.0), cfg);
    CHECK(st.n_left + st.n_right + st.n_censored == st.n_paths);
    CHECK(st.n_censored > 0);
    CHECK(st.n_left + st.n_right > 0);
    CHECK(st.p_left + st.p_right <= 1.0);
    cfg.max_steps = 1;
    cfg.dt = 1e-9;
    CHECK_THROWS_AS(simulate_exit(2.5, 0.0, 5.0, kTumor, sp(1.5, 0.0), cfg), NumericalError);
    cfg.n_paths = 0;
    CHECK_THROWS_AS(simulate_exit(2.5, 0.0, 5.0, kTumor, sp(1.5, 0.0), cfg), ValidationError);
    CHECK_THROWS_AS(simulate_exit(0.5, 0.0, 5.0, kTumor, sp(1.0, 0.0), small(10)), ValidationError);
}

TEST_CASE("zero drift, beta = 0: mirrored starts mirror the escape side") {
    const auto cfg = small(20000, 5);
    const auto l = simulate_exit(-0.3, -1.0, 1.0, DriftField::zero(), sp(1.5, 0.0), cfg);
    const auto r = simulate_exit(0.3, -1.0, 1.0, DriftField::zero(), sp(1.5, 0.0), cfg);
    CHECK(std::abs(l.p_left - r.p_right) < 3.0 * std::hypot(l.p_left_stderr, r.p_left_stderr));
    CHECK(std::abs(l.met_mean - r.met_mean) < 3.0 * std::hypot(l.met_stderr, r.met_stderr));
}

TEST_CASE("small cross-check against the solver") {
    // Skewed zero-drift problem on (-1, 1); allowance dt^{1/alpha} for the
    // discrete monitoring delay.
    const auto noise = sp(1.5, 0.5);
    const auto cfg = small(20000, 8);
    const auto mc = simulate_exit(0.25, -1.0, 1.0, DriftField::zero(), noise, cfg);
    ExitProblem p;
    p.grid = Grid::make(-1.0, 1.0, 0.0125);
    p.noise = noise;
    p.scheme.stencil = CompensatorStencil::Central;
    const double u = solve(p).at(0.25);
    p.kind = ProblemKind::EscapeLeft;
    const double pl = solve(p).at(0.25);
    CHECK(std::abs(mc.met_mean - u) < 3.0 * mc.met_stderr + std::pow(cfg.dt, 1.0 / 1.5));
    CHECK(std::abs(mc.p_left - pl) < 3.0 * mc.p_left_stderr);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <string>

#include "levyexit/errors.hpp"
#include "levyexit/solver.hpp"
#include "support/oracles.hpp"

using namespace levyexit;

namespace {

ExitProblem problem(double a, double b, double h, double alpha, double beta, double d, ProblemKind kind,
                    DriftField drift = DriftField::tumor({0.1, 3.0})) {
    ExitProblem p;
    p.grid = Grid::make(a, b, h);
    p.noise = StableNoiseParams::make(alpha, beta, d);
    p.drift = std::move(drift);
    p.kind = kind;
    return p;
}

}  // namespace

TEST_CASE("solve_dense: identity system returns the rhs") {
    DenseSystem sys;
    sys.grid = Grid::make(0.0, 2.0, 0.5);
    sys.kind = ProblemKind::MeanExitTime;
    sys.matrix = DenseMatrix::identity(3);
    sys.rhs = {1.0, 2.0, 3.0};
    const auto r = solve_dense(sys);
    CHECK(r.values == std::vector<double>{1.0, 2.0, 3.0});
    CHECK(r.x == std::vector<double>{0.5, 1.0, 1.5});
    CHECK(r.diagnostics.residual == 0.0);
    CHECK(r.diagnostics.clamp_count == 0);
    CHECK(r.diagnostics.condition_estimate == doctest::Approx(1.0));
    CHECK(r.at_index(0) == 0.0);
    CHECK(r.at_index(4) == 0.0);
    CHECK(r.at(1.1) == 2.0);
}

TEST_CASE("solve_dense: singular matrix is a numerical error") {
    DenseSystem sys;
    sys.grid = Grid::make(0.0, 2.0, 0.5);
    sys.matrix = DenseMatrix(3, 3);
    sys.rhs = {1.0, 1.0, 1.0};
    CHECK_THROWS_AS(solve_dense(sys), NumericalError);
    sys.rhs = {1.0, 1.0};
    CHECK_THROWS_AS(solve_dense(sys), ValidationError);
}

TEST_CASE("solve_dense: out-of-range escape values beyond the clamp tolerance are rejected") {
    DenseSystem sys;
    sys.grid = Grid::make(0.0, 2.0, 0.5);
    sys.kind = ProblemKind::EscapeLeft;
    sys.left_exterior = 1.0;
    sys.matrix = DenseMatrix::identity(3);
    sys.rhs = {0.5, 1.0 + 5e-4, -2e-4};
    const auto r = solve_dense(sys);
    CHECK(r.values == std::vector<double>{0.5, 1.0, 0.0});
    CHECK(r.diagnostics.clamp_count == 2);
    CHECK(r.diagnostics.max_clamp == doctest::Approx(5e-4));
    sys.rhs = {0.5, 1.01, 0.0};
    CHECK_THROWS_AS(solve_dense(sys), NumericalError);
}

TEST_CASE("exterior values and ranges") {
    for (double alpha : {0.5, 1.0, 1.5}) {
        for (double beta : {-1.0, 0.0, 1.0}) {
            const auto u = solve(problem(0.0, 5.0, 0.05, alpha, beta, 0.0, ProblemKind::MeanExitTime));
            const auto p = solve(problem(0.0, 5.0, 0.05, alpha, beta, 0.0, ProblemKind::EscapeLeft));
            CHECK(u.values.size() == 99);
            CHECK(u.at_index(u.grid.j_a) == 0.0);
            CHECK(u.at_index(u.grid.j_b + 3) == 0.0);
            CHECK(p.at_index(p.grid.j_a - 7) == 1.0);
            CHECK(p.at_index(p.grid.j_b) == 0.0);
            CHECK(std::all_of(u.values.begin(), u.values.end(), [](double v) { return v > 0.0; }));
            CHECK(std::all_of(p.values.begin(), p.values.end(), [](double v) { return v >= 0.0 && v <= 1.0; }));
            CHECK(u.diagnostics.residual < 1e-10);
            CHECK(p.diagnostics.residual < 1e-10);
            CHECK(u.diagnostics.condition_estimate >= 1.0);
            CHECK(u.diagnostics.min_pivot > 0.0);
        }
    }
}

TEST_CASE("symmetric interval mean exit time matches the closed form") {
    for (double alpha : {0.8, 1.0, 1.5, 1.8}) {
        const auto u = solve(problem(-1.0, 1.0, 0.01, alpha, 0.0, 0.0, ProblemKind::MeanExitTime, DriftField::zero()));
        for (double x : {-0.5, 0.0, 0.3, 0.7}) {
            INFO("alpha=" << alpha << " x=" << x);
            const double want = oracle::symmetric_interval_met(x, alpha);
            CHECK(std::abs(u.at(x) - want) <= 0.02 * want);
        }
    }
}

TEST_CASE("zero drift: reflection x -> -x maps beta to -beta") {
    // Escape to the left from x equals escape to the right from -x.
    auto reflected_gap = [](const SolveResult& a, const SolveResult& b) {
        const std::size_t n = a.values.size();
        double gap = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double mirror = b.values[n - 1 - i];
            const double want = a.kind == ProblemKind::MeanExitTime ? mirror : 1.0 - mirror;
            gap = std::max(gap, std::abs(a.values[i] - want));
        }
        return gap;
    };
    for (auto kind : {ProblemKind::MeanExitTime, ProblemKind::EscapeLeft}) {
        const auto sym = solve(problem(-2.0, 2.0, 0.05, 1.3, 0.0, 0.3, kind, DriftField::zero()));
        CHECK(reflected_gap(sym, sym) < 1e-12);
        // With skew the right-sided asymmetric part is not mirrored by the grid,
        // so the identity holds up to discretization error.
        for (double beta : {0.5, 1.0}) {
            double prev = 0.0;
            for (double h : {0.05, 0.025}) {
                auto pos = problem(-2.0, 2.0, h, 1.3, beta, 0.3, kind, DriftField::zero());
                auto neg = problem(-2.0, 2.0, h, 1.3, -beta, 0.3, kind, DriftField::zero());
                pos.scheme.stencil = neg.scheme.stencil = CompensatorStencil::Central;
                const double gap = reflected_gap(solve(pos), solve(neg));
                INFO("kind=" << to_string(kind) << " beta=" << beta << " h=" << h << " gap=" << gap);
                CHECK(gap < 0.05);
                if (prev > 0.0) CHECK(gap < 0.7 * prev);
                prev = gap;
            }
        }
    }
}

TEST_CASE("solution is continuous in alpha across 1") {
    for (double beta : {0.0, 0.5}) {
        for (auto kind : {ProblemKind::MeanExitTime, ProblemKind::EscapeLeft}) {
            const auto lo = solve(problem(0.0, 5.0, 0.05, 0.999, beta, 0.0, kind));
            const auto mid = solve(problem(0.0, 5.0, 0.05, 1.0, beta, 0.0, kind));
            const auto hi = solve(problem(0.0, 5.0, 0.05, 1.001, beta, 0.0, kind));
            double dl = 0.0, dh = 0.0, scale = 0.0;
            for (std::size_t i = 0; i < mid.values.size(); ++i) {
                dl = std::max(dl, std::abs(lo.values[i] - mid.values[i]));
                dh = std::max(dh, std::abs(hi.values[i] - mid.values[i]));
                scale = std::max(scale, std::abs(mid.values[i]));
            }
            INFO("beta=" << beta << " kind=" << to_string(kind) << " dl=" << dl << " dh=" << dh);
            CHECK(dl < 0.02 * scale);
            CHECK(dh < 0.02 * scale);
        }
    }
}

TEST_CASE("richardson_check reports shrinking differences") {
    const auto rep = richardson_check(problem(0.0, 5.0, 0.1, 1.5, 0.0, 0.0, ProblemKind::MeanExitTime), 3);
    REQUIRE(rep.h.size() == 3);
    CHECK(rep.h[1] == rep.h[0] / 2.0);
    REQUIRE(rep.max_difference.size() == 2);
    CHECK(rep.order.size() == 1);
    CHECK(rep.decreasing());
    CHECK(rep.solutions.back().values.size() == 199);
    CHECK_THROWS_AS(richardson_check(problem(0.0, 5.0, 0.1, 1.5, 0.0, 0.0, ProblemKind::MeanExitTime), 1),
                    ValidationError);
}

TEST_CASE("Gaussian limit: escape probability decreases away from the left boundary") {
    const auto p = solve(problem(0.0, 5.0, 0.05, 1.95, 0.0, 1.0, ProblemKind::EscapeLeft));
    for (std::size_t i = 1; i < p.values.size(); ++i) CHECK(p.values[i] <= p.values[i - 1] + 1e-12);
    const auto u = solve(problem(-1.0, 1.0, 0.02, 1.99, 0.0, 0.0, ProblemKind::MeanExitTime, DriftField::zero()));
    CHECK(u.at(0.0) == doctest::Approx(oracle::symmetric_interval_met(0.0, 1.99)).epsilon(0.02));
}

TEST_CASE("enum names") {
    CHECK(to_string(ProblemKind::MeanExitTime) == "met");
    CHECK(to_string(ProblemKind::EscapeLeft) == "escape");
    CHECK(to_string(CompensatorStencil::Upwind) == "upwind");
    CHECK(to_string(CompensatorStencil::Central) == "central");
}

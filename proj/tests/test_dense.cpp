#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <string>

#include "levyexit/dense.hpp"
#include "levyexit/errors.hpp"

using namespace levyexit;

namespace {

DenseMatrix random_matrix(std::size_t n, std::mt19937_64& rng, double diag_boost = 0.0) {
    std::normal_distribution<double> nd;
    DenseMatrix a(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) a(i, j) = nd(rng);
        a(i, i) += diag_boost;
    }
    return a;
}

}  // namespace

TEST_CASE("identity system") {
    const auto id = DenseMatrix::identity(5);
    const LuFactorization lu(id);
    const std::vector<double> e1{1, 0, 0, 0, 0};
    const auto x = lu.solve(e1);
    CHECK(x == e1);
    auto r = multiply(id, x);
    for (std::size_t i = 0; i < 5; ++i) r[i] -= e1[i];
    CHECK(norm_inf(r) == 0.0);
}

TEST_CASE("random systems: small residual, transpose solve") {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> nd;
    for (std::size_t n : {1u, 2u, 7u, 33u, 120u}) {
        const auto a = random_matrix(n, rng);
        std::vector<double> b(n);
        for (auto& v : b) v = nd(rng);
        const LuFactorization lu(a);
        const auto x = lu.solve(b);
        auto r = multiply(a, x);
        for (std::size_t i = 0; i < n; ++i) r[i] -= b[i];
        CHECK(norm_inf(r) / norm_inf(b) < 1e-10);

        const auto xt = lu.solve_transpose(b);
        for (std::size_t i = 0; i < n; ++i) {
            double s = 0;
            for (std::size_t j = 0; j < n; ++j) s += a(j, i) * xt[j];
            CHECK(s == doctest::Approx(b[i]).epsilon(1e-9).scale(1.0));
        }
    }
}

TEST_CASE("pivoting handles a zero leading entry") {
    DenseMatrix a(2, 2);
    a(0, 0) = 0.0;
    a(0, 1) = 1.0;
    a(1, 0) = 2.0;
    a(1, 1) = 3.0;
    const auto x = LuFactorization(a).solve(std::vector<double>{4.0, 13.0});
    CHECK(x[0] == doctest::Approx(0.5));
    CHECK(x[1] == doctest::Approx(4.0));
}

TEST_CASE("singular matrices raise NumericalError with pivot diagnostics") {
    DenseMatrix a(3, 3);
    for (std::size_t i = 0; i < 3; ++i) {
        a(0, i) = 1.0 + static_cast<double>(i);
        a(1, i) = 2.0 * (1.0 + static_cast<double>(i));
        a(2, i) = static_cast<double>(i * i);
    }
    try {
        LuFactorization lu(a);
        FAIL("expected NumericalError");
    } catch (const NumericalError& e) {
        CHECK(std::string(e.what()).find("pivot") != std::string::npos);
        CHECK(std::string(e.what()).find("column") != std::string::npos);
    }
    DenseMatrix bad(2, 2);
    bad(0, 0) = std::nan("");
    CHECK_THROWS_AS(LuFactorization{bad}, NumericalError);
    CHECK_THROWS_AS(LuFactorization{DenseMatrix(2, 3)}, ValidationError);
}

TEST_CASE("condition estimate is a tight lower bound of the exact 1-norm") {
    std::mt19937_64 rng(8);
    for (std::size_t n : {3u, 10u, 40u}) {
        const auto a = random_matrix(n, rng, 0.5);
        const LuFactorization lu(a);
        // Exact ||A^{-1}||_1 from the columns of the inverse.
        double exact = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            std::vector<double> e(n, 0.0);
            e[j] = 1.0;
            const auto col = lu.solve(e);
            double s = 0;
            for (double v : col) s += std::abs(v);
            exact = std::max(exact, s);
        }
        const double est = lu.inverse_norm_one_estimate();
        CHECK(est <= exact * (1.0 + 1e-12));
        CHECK(est >= exact / 3.0);
    }
}

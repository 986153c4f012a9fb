#include "levyexit/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <span>

#include "levyexit/errors.hpp"
#include "levyexit/kernels.hpp"

namespace levyexit {

namespace {

/// W[k] = h |k h|^{-1-alpha} for k in [-K, K], W[0] = 0, together with the
/// matching table of k, so every Sigma'' sum is a contiguous slice.
class WeightTable {
public:
    WeightTable(long k_max, double h, double alpha) : k_max_(k_max) {
        const std::size_t n = static_cast<std::size_t>(2 * k_max + 1);
        w_.resize(n);
        k_.resize(n);
        for (long k = -k_max; k <= k_max; ++k) {
            const std::size_t i = static_cast<std::size_t>(k + k_max);
            k_[i] = static_cast<double>(k);
            w_[i] = k == 0 ? 0.0 : h * std::pow(std::abs(static_cast<double>(k)) * h, -1.0 - alpha);
        }
    }

    [[nodiscard]] double w(long k) const { return w_[static_cast<std::size_t>(k + k_max_)]; }
    [[nodiscard]] std::span<const double> w_slice(long lo, long hi) const {
        return {w_.data() + (lo + k_max_), static_cast<std::size_t>(hi - lo + 1)};
    }
    [[nodiscard]] std::span<const double> k_slice(long lo, long hi) const {
        return {k_.data() + (lo + k_max_), static_cast<std::size_t>(hi - lo + 1)};
    }

    /// Sigma''_{k=lo}^{hi} W[k] and Sigma''_{k=lo}^{hi} k W[k].
    [[nodiscard]] std::pair<double, double> moments(long lo, long hi) const {
        if (hi <= lo) return {0.0, 0.0};
        const auto w = w_slice(lo, hi);
        const double m0 = kernels::sum(w) - 0.5 * (w.front() + w.back());
        const double m1 = kernels::dot(w, k_slice(lo, hi)) -
                          0.5 * (w.front() * static_cast<double>(lo) + w.back() * static_cast<double>(hi));
        return {m0, m1};
    }

private:
    long k_max_;
    std::vector<double> w_;
    std::vector<double> k_;
};

struct RowBuilder {
    std::span<double> row;
    std::size_t center;  // column of P_j
    double h;

    void add(long offset, double v) { row[static_cast<std::size_t>(static_cast<long>(center) + offset)] += v; }

    /// c * h Sigma''_{k=lo}^{hi} (P_{j+k} - P_j) / |x_k|^{1+alpha}; returns
    /// Sigma'' k W[k] so callers can add the compensator.
    double punched_sum(const WeightTable& tab, long lo, long hi, double c) {
        if (hi <= lo) return 0.0;
        const auto w = tab.w_slice(lo, hi);
        auto target = row.subspan(static_cast<std::size_t>(static_cast<long>(center) + lo), w.size());
        kernels::axpy(c, w, target);
        target.front() -= 0.5 * c * w.front();
        target.back() -= 0.5 * c * w.back();
        const auto [m0, m1] = tab.moments(lo, hi);
        row[center] -= c * m0;
        return m1;
    }

    void second_difference(double coef) {
        const double s = coef / (h * h);
        add(-1, s);
        add(0, -2.0 * s);
        add(1, s);
    }

    void central_first_difference(double coef) {
        add(1, coef / (2.0 * h));
        add(-1, -coef / (2.0 * h));
    }
};

double zeta_alpha_minus_one(double alpha) { return std::riemann_zeta(alpha - 1.0); }

void check_problem(const ExitProblem& problem) {
    problem.noise.validate();
    // Re-run the grid rules in case the Grid was built by aggregate init.
    (void)Grid::make(problem.grid.a, problem.grid.b, problem.grid.h);
}

RowContributions empty_rows(const ExitProblem& problem) {
    const std::size_t n = problem.grid.interior_count();
    return RowContributions{problem.grid, DenseMatrix(n, n + 2), std::vector<double>(n, 0.0)};
}

long table_extent(const Grid& g) { return std::max(g.j_b - g.j_a, g.j_one); }

}  // namespace

std::vector<double> RowContributions::apply(const std::vector<double>& extended,
                                            double left_exterior) const {
    if (extended.size() != coeffs.cols()) {
        throw ValidationError("RowContributions::apply: vector must cover the N + 2 extended indices");
    }
    auto out = multiply(coeffs, extended);
    for (std::size_t r = 0; r < out.size(); ++r) out[r] += left_source[r] * left_exterior;
    return out;
}

RowContributions assemble_symmetric_part(const ExitProblem& problem) {
    check_problem(problem);
    const Grid& g = problem.grid;
    const double alpha = problem.noise.alpha;
    const double c2 = jump_coeffs(problem.noise).c2;
    const WeightTable tab(table_extent(g), g.h, alpha);

    double diffusion = problem.noise.d / 2.0;
    if (problem.scheme.punched_hole_correction) {
        diffusion -= c2 * zeta_alpha_minus_one(alpha) * std::pow(g.h, 2.0 - alpha);
    }

    RowContributions out = empty_rows(problem);
    for (long j = g.j_a + 1; j < g.j_b; ++j) {
        const std::size_t r = static_cast<std::size_t>(j - g.j_a - 1);
        RowBuilder rb{out.coeffs.row(r), static_cast<std::size_t>(j - g.j_a), g.h};
        const double xj = g.x(j);

        rb.second_difference(diffusion);

        const double f = problem.drift(xj);
        if (!std::isfinite(f)) {
            std::ostringstream msg;
            msg << "assemble: drift '" << problem.drift.name() << "' is not finite at x = " << xj;
            throw NumericalError(msg.str());
        }
        rb.central_first_difference(f);

        // Exterior rays (-inf, a - x] and [b - x, inf) integrated exactly.
        const double left_dist = static_cast<double>(j - g.j_a) * g.h;
        const double right_dist = static_cast<double>(g.j_b - j) * g.h;
        const double left_kill = c2 / alpha * std::pow(left_dist, -alpha);
        const double right_kill = c2 / alpha * std::pow(right_dist, -alpha);
        rb.add(0, -(left_kill + right_kill));
        out.left_source[r] = left_kill;

        // Symmetric window |y| < delta carries the compensator; the rest of
        // (a - x, b - x) is uncompensated.
        long un_lo = 0, un_hi = 0, co_lo = 0, co_hi = 0;
        if (j < g.j_mid) {
            un_lo = j - g.j_a;
            un_hi = g.j_b - j;
            co_lo = g.j_a - j;
            co_hi = j - g.j_a;
        } else {
            un_lo = g.j_a - j;
            un_hi = j - g.j_b;
            co_lo = j - g.j_b;
            co_hi = g.j_b - j;
        }
        rb.punched_sum(tab, un_lo, un_hi, c2);
        const double m1 = rb.punched_sum(tab, co_lo, co_hi, c2);
        // -c2 h m1 (P_{j+1} - P_{j-1}) / (2h)
        rb.add(1, -0.5 * c2 * m1);
        rb.add(-1, 0.5 * c2 * m1);
    }
    return out;
}

RowContributions assemble_asymmetric_part(const ExitProblem& problem) {
    check_problem(problem);
    const Grid& g = problem.grid;
    const double alpha = problem.noise.alpha;
    const auto coeffs = jump_coeffs(problem.noise);
    const double e = coeffs.c1 - coeffs.c2;

    RowContributions out = empty_rows(problem);
    if (e == 0.0) return out;

    const WeightTable tab(table_extent(g), g.h, alpha);
    const bool central = problem.scheme.stencil == CompensatorStencil::Central;
    const bool forward = problem.noise.beta < 0.0;
    const double h = g.h;

    for (long j = g.j_a + 1; j < g.j_b; ++j) {
        const std::size_t r = static_cast<std::size_t>(j - g.j_a - 1);
        RowBuilder rb{out.coeffs.row(r), static_cast<std::size_t>(j - g.j_a), h};

        // coef * p'(x_j)
        auto add_derivative = [&](double coef) {
            if (central) {
                rb.central_first_difference(coef);
            } else if (forward) {
                rb.add(1, coef / h);
                rb.add(0, -coef / h);
            } else {
                rb.add(0, coef / h);
                rb.add(-1, -coef / h);
            }
        };

        const long s = g.j_b - j;  // (b - x_j) / h
        if (s >= g.j_one) {
            // x_j <= b - 1: the compensator window (0, 1) lies inside D.
            const double right_dist = static_cast<double>(s) * h;
            rb.add(0, -e / (alpha * std::pow(right_dist, alpha)));
            rb.punched_sum(tab, g.j_one, s, e);
            const double m1 = rb.punched_sum(tab, 0, g.j_one, e);
            add_derivative(-e * h * m1);
        } else {
            // x_j > b - 1: on [b - x, 1) the exterior value is 0, leaving
            // -(P_j + y p') / y^{1+alpha}.
            rb.add(0, -e / alpha);
            const auto [t0, t1] = tab.moments(s, g.j_one);
            rb.add(0, -e * t0);
            add_derivative(-e * h * t1);
            const double m1 = rb.punched_sum(tab, 0, s, e);
            add_derivative(-e * h * m1);
        }
        if (central) {
            // One-sided punched-hole sum misses half the symmetric correction.
            rb.second_difference(-0.5 * e * zeta_alpha_minus_one(alpha) * std::pow(h, 2.0 - alpha));
        }
    }
    return out;
}

DenseSystem assemble(const ExitProblem& problem) {
    const RowContributions sym = assemble_symmetric_part(problem);
    const RowContributions asym = assemble_asymmetric_part(problem);
    const std::size_t n = problem.grid.interior_count();

    DenseSystem sys;
    sys.grid = problem.grid;
    sys.kind = problem.kind;
    sys.left_exterior = problem.left_exterior_value();
    sys.right_exterior = problem.right_exterior_value();
    sys.matrix = DenseMatrix(n, n);
    sys.rhs.assign(n, problem.kind == ProblemKind::MeanExitTime ? -1.0 : 0.0);

    for (std::size_t r = 0; r < n; ++r) {
        const auto s_row = sym.coeffs.row(r);
        const auto a_row = asym.coeffs.row(r);
        auto dst = sys.matrix.row(r);
        for (std::size_t c = 0; c < n; ++c) dst[c] = s_row[c + 1] + a_row[c + 1];

        const double boundary_left = s_row[0] + a_row[0];
        const double boundary_right = s_row[n + 1] + a_row[n + 1];
        const double source = sym.left_source[r] + asym.left_source[r];
        sys.rhs[r] -= (boundary_left + source) * sys.left_exterior + boundary_right * sys.right_exterior;

        for (double v : dst) {
            if (!std::isfinite(v)) throw NumericalError("assemble: non-finite matrix entry");
        }
        if (dst[r] == 0.0) {
            std::ostringstream msg;
            msg << "assemble: zero diagonal entry in row " << r;
            throw NumericalError(msg.str());
        }
    }
    return sys;
}

double SolveResult::at_index(long j) const {
    if (j <= grid.j_a) return left_exterior;
    if (j >= grid.j_b) return right_exterior;
    return values[static_cast<std::size_t>(j - grid.j_a - 1)];
}

double SolveResult::at(double xq) const { return at_index(std::lround(xq / grid.h)); }

SolveResult solve_dense(const DenseSystem& system) {
    const std::size_t n = system.size();
    if (system.matrix.rows() != n || system.matrix.cols() != n) {
        throw ValidationError("solve_dense: matrix and rhs dimensions differ");
    }
    const double norm_a = system.matrix.norm_one();
    const LuFactorization lu(system.matrix);
    std::vector<double> u = lu.solve(system.rhs);

    SolveResult res;
    res.kind = system.kind;
    res.grid = system.grid;
    res.x = system.grid.interior_abscissae();
    res.left_exterior = system.left_exterior;
    res.right_exterior = system.right_exterior;

    auto& diag = res.diagnostics;
    diag.h = system.grid.h;
    diag.min_pivot = lu.min_abs_pivot();
    diag.max_pivot = lu.max_abs_pivot();
    diag.condition_estimate = norm_a * lu.inverse_norm_one_estimate();
    {
        auto resid = multiply(system.matrix, u);
        for (std::size_t i = 0; i < n; ++i) resid[i] -= system.rhs[i];
        const double nb = norm_inf(system.rhs);
        diag.residual = nb > 0.0 ? norm_inf(resid) / nb : norm_inf(resid);
    }

    for (std::size_t i = 0; i < n; ++i) {
        double& v = u[i];
        if (!std::isfinite(v)) throw NumericalError("solve_dense: non-finite solution value");
        double lo = 0.0;
        double hi = system.kind == ProblemKind::EscapeLeft ? 1.0 : INFINITY;
        const double fail_tol = system.kind == ProblemKind::EscapeLeft ? 1e-3 : 1e-8;
        const double excursion = std::max(lo - v, v - hi);
        if (excursion > fail_tol) {
            std::ostringstream msg;
            msg.precision(17);
            msg << "solve_dense: " << to_string(system.kind) << " value " << v << " at x = "
                << res.x[i] << " leaves the admissible range by more than " << fail_tol;
            throw NumericalError(msg.str());
        }
        if (excursion > 0.0) {
            v = std::clamp(v, lo, hi);
            ++diag.clamp_count;
            diag.max_clamp = std::max(diag.max_clamp, excursion);
        }
    }
    res.values = std::move(u);
    return res;
}

SolveResult solve(const ExitProblem& problem) { return solve_dense(assemble(problem)); }

bool ConvergenceReport::decreasing() const {
    for (std::size_t i = 1; i < max_difference.size(); ++i) {
        if (!(max_difference[i] < max_difference[i - 1])) return false;
    }
    return !max_difference.empty();
}

ConvergenceReport richardson_check(const ExitProblem& problem, int levels) {
    if (levels < 2) throw ValidationError("richardson_check: levels >= 2 required");
    ConvergenceReport rep;
    ExitProblem p = problem;
    for (int l = 0; l < levels; ++l) {
        rep.h.push_back(p.grid.h);
        rep.solutions.push_back(solve(p));
        p.grid = p.grid.refined();
    }
    for (std::size_t l = 0; l + 1 < rep.solutions.size(); ++l) {
        const auto& coarse = rep.solutions[l];
        const auto& fine = rep.solutions[l + 1];
        double diff = 0.0;
        for (long j = coarse.grid.j_a + 1; j < coarse.grid.j_b; ++j) {
            diff = std::max(diff, std::abs(coarse.at_index(j) - fine.at_index(2 * j)));
        }
        rep.max_difference.push_back(diff);
    }
    for (std::size_t l = 0; l + 1 < rep.max_difference.size(); ++l) {
        rep.order.push_back(std::log2(rep.max_difference[l] / rep.max_difference[l + 1]));
    }
    return rep;
}

std::string to_string(ProblemKind kind) {
    return kind == ProblemKind::MeanExitTime ? "met" : "escape";
}

std::string to_string(CompensatorStencil stencil) {
    return stencil == CompensatorStencil::Upwind ? "upwind" : "central";
}

}  // namespace levyexit

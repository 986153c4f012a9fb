#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "levyexit/dense.hpp"
#include "levyexit/drift.hpp"
#include "levyexit/grid.hpp"
#include "levyexit/stable_law.hpp"

namespace levyexit {

enum class ProblemKind {
    MeanExitTime,  ///< A u = -1 in D, u = 0 outside
    EscapeLeft,    ///< A p = 0 in D, p = 1 on (-inf, a], p = 0 on [b, inf)
};

/// Discretization of p' inside the asymmetric (C1 - C2) compensator.
enum class CompensatorStencil {
    /// One-sided difference chosen by the sign of beta (forward for beta < 0).
    Upwind,
    /// Central difference plus the matching h^{2-alpha} correction for the
    /// one-sided punched-hole sum. Second-order consistent for every beta.
    Central,
};

struct SchemeOptions {
    CompensatorStencil stencil = CompensatorStencil::Upwind;
    /// Add -C2 zeta(alpha-1) h^{2-alpha} to the diffusion coefficient, the
    /// leading-order term the punched-hole rule drops at the singular node.
    bool punched_hole_correction = true;
};

struct ExitProblem {
    Grid grid;
    StableNoiseParams noise;
    DriftField drift = DriftField::zero();
    ProblemKind kind = ProblemKind::MeanExitTime;
    SchemeOptions scheme;

    /// Value imposed on (-inf, a] and on [b, inf).
    [[nodiscard]] double left_exterior_value() const {
        return kind == ProblemKind::EscapeLeft ? 1.0 : 0.0;
    }
    [[nodiscard]] double right_exterior_value() const { return 0.0; }
};

/// Rows of the discrete generator over the extended index range.
///
/// Row r belongs to the interior node j = j_a + 1 + r. Column c multiplies
/// P_{j_a + c}, so columns 0 and N + 1 are the boundary nodes j_a and j_b;
/// no other exterior index is referenced by the scheme. `left_source[r]`
/// multiplies the constant left exterior value through the exterior jump
/// integral (C2/alpha)(x_j - a)^{-alpha}; the right exterior value is 0 in
/// every supported problem and needs no source.
struct RowContributions {
    Grid grid;
    DenseMatrix coeffs;
    std::vector<double> left_source;

    /// (A P)_r for P given on all N + 2 extended indices and the left
    /// exterior value.
    [[nodiscard]] std::vector<double> apply(const std::vector<double>& extended,
                                            double left_exterior) const;
};

/// Diffusion, drift, the C2-weighted two-sided jump integral (with killing
/// terms for both exterior rays) and, if enabled, the punched-hole correction.
RowContributions assemble_symmetric_part(const ExitProblem& problem);

/// The (C1 - C2)-weighted one-sided jump integral over y > 0. Identically
/// zero when beta = 0.
RowContributions assemble_asymmetric_part(const ExitProblem& problem);

struct DenseSystem {
    Grid grid;
    ProblemKind kind = ProblemKind::MeanExitTime;
    DenseMatrix matrix;       ///< N x N, row/column r <-> j = j_a + 1 + r
    std::vector<double> rhs;  ///< exterior values already folded in
    double left_exterior = 0.0;
    double right_exterior = 0.0;

    [[nodiscard]] std::size_t size() const { return rhs.size(); }
};

DenseSystem assemble(const ExitProblem& problem);

struct SolveDiagnostics {
    double residual = 0.0;            ///< ||A x - b||_inf / ||b||_inf before clamping
    std::size_t clamp_count = 0;
    double max_clamp = 0.0;           ///< largest excursion removed by clamping
    double h = 0.0;
    double condition_estimate = 0.0;  ///< 1-norm condition number estimate
    double min_pivot = 0.0;
    double max_pivot = 0.0;
};

struct SolveResult {
    ProblemKind kind = ProblemKind::MeanExitTime;
    Grid grid;
    std::vector<double> x;
    std::vector<double> values;
    double left_exterior = 0.0;   ///< value on (-inf, a]
    double right_exterior = 0.0;  ///< value on [b, inf)
    SolveDiagnostics diagnostics;

    /// Value at grid abscissa x_j for any integer j (exterior included).
    [[nodiscard]] double at_index(long j) const;
    /// Value at the grid node nearest to `x`.
    [[nodiscard]] double at(double x) const;
};

SolveResult solve_dense(const DenseSystem& system);

/// assemble + solve_dense.
SolveResult solve(const ExitProblem& problem);

struct ConvergenceReport {
    std::vector<double> h;              ///< h, h/2, ...
    std::vector<double> max_difference; ///< max |u_h - u_{h/2}| on the coarser grid
    std::vector<double> order;          ///< log2 of successive difference ratios
    std::vector<SolveResult> solutions;

    /// Differences shrink at every refinement.
    [[nodiscard]] bool decreasing() const;
};

/// Solves on `levels` successively halved grids (minimum 2).
ConvergenceReport richardson_check(const ExitProblem& problem, int levels = 3);

std::string to_string(ProblemKind kind);
std::string to_string(CompensatorStencil stencil);

}  // namespace levyexit

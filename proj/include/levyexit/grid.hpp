#pragma once

#include <cstddef>
#include <vector>

namespace levyexit {

/// Uniform grid x_j = j h over the domain D = (a, b).
///
/// 1/h, a/h, b/h and (a+b)/(2h) must be integers; values within 1e-9 of an
/// integer are snapped. The interior unknowns are j_a < j < j_b.
struct Grid {
    double a = 0.0;
    double b = 5.0;
    double h = 0.05;
    long j_a = 0;
    long j_b = 100;
    long j_mid = 50;
    long j_one = 20;

    /// Validates and snaps; throws ValidationError naming the violated rule.
    static Grid make(double a, double b, double h);

    [[nodiscard]] double x(long j) const { return static_cast<double>(j) * h; }
    [[nodiscard]] std::size_t interior_count() const {
        return static_cast<std::size_t>(j_b - j_a - 1);
    }
    [[nodiscard]] std::vector<double> interior_abscissae() const;
    /// Same domain with h/2; always satisfies the integrality rules.
    [[nodiscard]] Grid refined() const;
};

/// Snaps `value` to the nearest integer when within 1e-9 of it; false otherwise.
bool snap_to_integer(double value, long& out);

}  // namespace levyexit

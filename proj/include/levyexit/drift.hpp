#pragma once

#include <functional>
#include <string>
#include <variant>

namespace levyexit {

/// Dimensionless tumor model parameters: 0 < theta < 1 and
/// 0 < gamma < (1 + theta)^2 / (4 theta) (bistable window).
struct TumorParams {
    double theta = 0.1;
    double gamma = 3.0;

    static TumorParams make(double theta, double gamma);
    void validate() const;
    /// (1 + theta)^2 / (4 theta), the upper end of the bistable window.
    [[nodiscard]] double gamma_upper_bound() const;
};

/// Raw kinetic constants (rates per day). Transformation of normal cells at
/// rate kappa is negligible and not represented.
struct KineticConstants {
    double k1 = 1.0;       ///< binding rate of immune cells to tumor cells
    double k2 = 0.1;       ///< dissociation rate of the complex
    double e_total = 3.0;  ///< conserved immune-cell mass Y + Z
    double iota = 1.0;     ///< tumor replication rate
};

struct SteadyStates {
    double x1 = 0.0;  ///< tumor-free state
    double x2 = 0.0;  ///< unstable state (barrier of the potential)
    double x3 = 0.0;  ///< stable tumor state
};

/// f(x) = x (1 - theta x) - gamma x / (x + 1). Throws DomainError for x <= -1.
double tumor_drift(double x, const TumorParams& p);

/// U(x) = -x^2/2 + theta x^3/3 + gamma x - gamma ln(x + 1), with U' = -f.
double potential(double x, const TumorParams& p);

/// Roots of f; throws ValidationError outside the bistable window.
SteadyStates steady_states(const TumorParams& p);

/// theta = k2/k1, gamma = k1 E / iota; throws ValidationError naming the
/// violated bound when the result leaves the bistable window.
TumorParams nondimensionalize(const KineticConstants& k);

/// Deterministic vector field x -> f(x) used by the solver and the simulator.
class DriftField {
public:
    struct Zero {};
    struct Tumor {
        TumorParams params;
    };
    struct Custom {
        std::string name;
        std::function<double(double)> fn;
    };

    static DriftField zero() { return DriftField(Zero{}); }
    static DriftField tumor(const TumorParams& p);
    static DriftField custom(std::string name, std::function<double(double)> fn);

    double operator()(double x) const;

    /// "zero", "tumor" or the custom name.
    [[nodiscard]] std::string name() const;
    [[nodiscard]] const std::variant<Zero, Tumor, Custom>& model() const { return model_; }

private:
    explicit DriftField(std::variant<Zero, Tumor, Custom> m) : model_(std::move(m)) {}
    std::variant<Zero, Tumor, Custom> model_;
};

}  // namespace levyexit

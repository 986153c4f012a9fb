#include "levyexit/grid.hpp"

#include <cmath>
#include <sstream>

#include "levyexit/errors.hpp"

namespace levyexit {

bool snap_to_integer(double value, long& out) {
    if (!std::isfinite(value)) return false;
    const double r = std::round(value);
    if (std::abs(value - r) > 1e-9) return false;
    out = static_cast<long>(r);
    return true;
}

namespace {

long require_integer(double value, const char* what) {
    long out = 0;
    if (!snap_to_integer(value, out)) {
        std::ostringstream msg;
        msg << "grid: " << what << " = " << value << " must be an integer (tolerance 1e-9)";
        throw ValidationError(msg.str());
    }
    return out;
}

}  // namespace

Grid Grid::make(double a, double b, double h) {
    if (!(std::isfinite(a) && std::isfinite(b) && std::isfinite(h))) {
        throw ValidationError("grid: a, b and h must be finite");
    }
    if (!(h > 0.0)) throw ValidationError("grid: h > 0 violated");
    if (!(a < b)) throw ValidationError("grid: a < b violated");
    if (!(b - a > 1.0)) {
        throw ValidationError(
            "grid: b - a > 1 violated (the asymmetric jump term splits at b - 1); enlarge the domain");
    }
    Grid g;
    g.a = a;
    g.b = b;
    g.h = h;
    g.j_one = require_integer(1.0 / h, "1/h");
    g.j_a = require_integer(a / h, "a/h");
    g.j_b = require_integer(b / h, "b/h");
    g.j_mid = require_integer((a + b) / (2.0 * h), "(a+b)/(2h)");
    return g;
}

std::vector<double> Grid::interior_abscissae() const {
    std::vector<double> xs;
    xs.reserve(interior_count());
    for (long j = j_a + 1; j < j_b; ++j) xs.push_back(x(j));
    return xs;
}

Grid Grid::refined() const {
    Grid g = *this;
    g.h = h / 2.0;
    g.j_a = 2 * j_a;
    g.j_b = 2 * j_b;
    g.j_mid = 2 * j_mid;
    g.j_one = 2 * j_one;
    return g;
}

}  // namespace levyexit

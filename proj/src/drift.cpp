#include "levyexit/drift.hpp"

#include <cmath>
#include <sstream>

#include "levyexit/errors.hpp"

namespace levyexit {

TumorParams TumorParams::make(double theta, double gamma) {
    TumorParams p{theta, gamma};
    p.validate();
    return p;
}

double TumorParams::gamma_upper_bound() const {
    return (1.0 + theta) * (1.0 + theta) / (4.0 * theta);
}

void TumorParams::validate() const {
    std::ostringstream msg;
    if (!(theta > 0.0 && theta < 1.0)) {
        msg << "tumor parameters must satisfy 0 < theta < 1 (got theta = " << theta << ")";
        throw ValidationError(msg.str());
    }
    if (!(gamma > 0.0)) {
        msg << "tumor parameters must satisfy gamma > 0 (got gamma = " << gamma << ")";
        throw ValidationError(msg.str());
    }
    if (!(gamma < gamma_upper_bound())) {
        msg << "tumor parameters must satisfy gamma < (1+theta)^2/(4 theta) = "
            << gamma_upper_bound() << " (got gamma = " << gamma << ")";
        throw ValidationError(msg.str());
    }
}

namespace {

void check_pole(double x, const char* what) {
    if (!(x > -1.0)) {
        std::ostringstream msg;
        msg << what << ": requires x > -1 (pole of the immune term), got x = " << x;
        throw DomainError(msg.str());
    }
}

}  // namespace

double tumor_drift(double x, const TumorParams& p) {
    check_pole(x, "tumor_drift");
    return x * (1.0 - p.theta * x) - p.gamma * x / (x + 1.0);
}

double potential(double x, const TumorParams& p) {
    check_pole(x, "potential");
    return -0.5 * x * x + p.theta * x * x * x / 3.0 + p.gamma * x - p.gamma * std::log1p(x);
}

SteadyStates steady_states(const TumorParams& p) {
    const double disc = (1.0 + p.theta) * (1.0 + p.theta) - 4.0 * p.gamma * p.theta;
    if (!(disc > 0.0)) {
        std::ostringstream msg;
        msg << "steady_states: discriminant (1+theta)^2 - 4 gamma theta = " << disc
            << " must be positive (monostable regime)";
        throw ValidationError(msg.str());
    }
    p.validate();
    const double root = std::sqrt(disc);
    SteadyStates s;
    s.x1 = 0.0;
    // x2 = (1 - theta - root) / (2 theta) loses digits when root ~ 1 - theta;
    // use x2 x3 = (gamma - 1) / theta (Vieta) instead.
    s.x3 = (1.0 - p.theta + root) / (2.0 * p.theta);
    s.x2 = (p.gamma - 1.0) / (p.theta * s.x3);
    if (!(s.x2 > 0.0)) {
        std::ostringstream msg;
        msg << "steady_states: unstable state x2 = " << s.x2
            << " is not positive; requires gamma > 1 (got gamma = " << p.gamma << ")";
        throw ValidationError(msg.str());
    }
    return s;
}

TumorParams nondimensionalize(const KineticConstants& k) {
    if (!(k.k1 > 0.0 && k.k2 > 0.0 && k.e_total > 0.0 && k.iota > 0.0)) {
        throw ValidationError("kinetic constants k1, k2, E, iota must all be strictly positive");
    }
    TumorParams p{k.k2 / k.k1, k.k1 * k.e_total / k.iota};
    p.validate();
    return p;
}

DriftField DriftField::tumor(const TumorParams& p) {
    p.validate();
    return DriftField(Tumor{p});
}

DriftField DriftField::custom(std::string name, std::function<double(double)> fn) {
    return DriftField(Custom{std::move(name), std::move(fn)});
}

double DriftField::operator()(double x) const {
    switch (model_.index()) {
        case 0:
            return 0.0;
        case 1:
            return tumor_drift(x, std::get<Tumor>(model_).params);
        default:
            return std::get<Custom>(model_).fn(x);
    }
}

std::string DriftField::name() const {
    switch (model_.index()) {
        case 0:
            return "zero";
        case 1:
            return "tumor";
        default:
            return std::get<Custom>(model_).name;
    }
}

}  // namespace levyexit

#include "ncstokes/problems.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ncstokes {

namespace {

constexpr double pi = std::numbers::pi;

} // namespace

ProblemSpec mms_problem(double nu) {
    if (!(nu > 0.0)) {
        throw std::invalid_argument("viscosity must be positive");
    }
    ExactSolution exact;
    // u1 = 2 pi sin^2(pi x) sin(pi y) cos(pi y) = pi sin^2(pi x) sin(2 pi y)
    // u2 = -2 pi sin(pi x) cos(pi x) sin^2(pi y) = -pi sin(2 pi x) sin^2(pi y)
    exact.u = [](Point q) -> Vec2 {
        const double sx = std::sin(pi * q.x);
        const double sy = std::sin(pi * q.y);
        return {pi * sx * sx * std::sin(2 * pi * q.y), -pi * std::sin(2 * pi * q.x) * sy * sy};
    };
    exact.grad_u = [](Point q) -> Mat2 {
        const double sx = std::sin(pi * q.x);
        const double sy = std::sin(pi * q.y);
        const double s2 = std::sin(2 * pi * q.x) * std::sin(2 * pi * q.y);
        return {{{pi * pi * s2, 2 * pi * pi * sx * sx * std::cos(2 * pi * q.y)},
                 {-2 * pi * pi * std::cos(2 * pi * q.x) * sy * sy, -pi * pi * s2}}};
    };
    exact.p = [](Point q) { return std::cos(pi * q.x) * std::cos(pi * q.y); };

    ProblemSpec spec;
    spec.name = "mms1";
    spec.nu = nu;
    // Lap u1 = 2 pi^3 sin(2 pi y) (2 cos(2 pi x) - 1), Lap u2 = -2 pi^3 sin(2 pi x) (2 cos(2 pi y) - 1)
    spec.f = [nu](Point q) -> Vec2 {
        const double c = 2 * pi * pi * pi * nu;
        return {-c * std::sin(2 * pi * q.y) * (2 * std::cos(2 * pi * q.x) - 1) - pi * std::sin(pi * q.x) * std::cos(pi * q.y),
                c * std::sin(2 * pi * q.x) * (2 * std::cos(2 * pi * q.y) - 1) - pi * std::cos(pi * q.x) * std::sin(pi * q.y)};
    };
    spec.dirichlet = [](Point) -> Vec2 { return {0.0, 0.0}; };
    spec.exact = std::move(exact);
    return spec;
}

ProblemSpec cavity_problem(double nu) {
    if (!(nu > 0.0)) {
        throw std::invalid_argument("viscosity must be positive");
    }
    ProblemSpec spec;
    spec.name = "cavity";
    spec.nu = nu;
    spec.f = [](Point) -> Vec2 { return {0.0, 0.0}; };
    spec.dirichlet = [](Point q) -> Vec2 { return q.y >= 1.0 - 1e-12 ? Vec2{1.0, 0.0} : Vec2{0.0, 0.0}; };
    return spec;
}

ProblemSpec make_problem(std::string_view name, std::optional<double> nu) {
    if (name == "mms1") {
        return nu ? mms_problem(*nu) : mms_problem();
    }
    if (name == "cavity") {
        return nu ? cavity_problem(*nu) : cavity_problem();
    }
    throw std::invalid_argument("unknown problem '" + std::string(name) + "' (expected mms1 or cavity)");
}

} // namespace ncstokes

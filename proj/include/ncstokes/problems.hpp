#pragma once

#include "ncstokes/femspace.hpp"

#include <optional>
#include <string>
#include <string_view>

namespace ncstokes {

struct ExactSolution {
    VectorField u;
    TensorField grad_u;
    ScalarField p;
};

/// -nu Lap u + grad p = f, div u = 0 in the domain, u = g on the boundary.
struct ProblemSpec {
    std::string name;
    double nu = 1.0;
    VectorField f;
    VectorField dirichlet;
    std::optional<ExactSolution> exact;
};

/// Viscosity at which the manufactured-solution tables are computed.
inline constexpr double kManufacturedViscosity = 0.01;

/// Stream function psi = sin^2(pi x) sin^2(pi y), u = (psi_y, -psi_x),
/// p = cos(pi x) cos(pi y), homogeneous Dirichlet data.
ProblemSpec mms_problem(double nu = kManufacturedViscosity);

/// Unit-square lid-driven cavity: g = (1, 0) on y = 1, zero elsewhere, f = 0.
ProblemSpec cavity_problem(double nu = 1.0);

/// "mms1" or "cavity"; nullopt keeps the problem's default viscosity.
/// Throws std::invalid_argument for an unknown name.
ProblemSpec make_problem(std::string_view name, std::optional<double> nu = std::nullopt);

} // namespace ncstokes

#pragma once

#include <array>
#include <vector>

namespace ncstokes {

/// Rule on a triangle in barycentric coordinates. Weights sum to one and are
/// scaled by |K| when applied.
struct QuadratureRule {
    std::vector<std::array<double, 3>> points;
    std::vector<double> weights;
    int degree = 0;

    std::size_t size() const { return weights.size(); }
};

/// Edge-midpoint rule, exact for quadratics.
const QuadratureRule& midpoint_rule();

/// 12-point symmetric rule, exact for polynomials of degree 6.
const QuadratureRule& degree6_rule();

} // namespace ncstokes

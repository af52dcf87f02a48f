#pragma once

#include "ncstokes/mesh.hpp"

#include <array>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

namespace ncstokes {

using Vec2 = std::array<double, 2>;
/// Row = component, column = derivative direction.
using Mat2 = std::array<Vec2, 2>;

using ScalarField = std::function<double(Point)>;
using VectorField = std::function<Vec2(Point)>;
using TensorField = std::function<Mat2(Point)>;

enum class SpaceKind { NCP1_vector, P1_vector, P1_scalar, P0_scalar };

std::string_view to_string(SpaceKind space);
int components(SpaceKind space);
/// Geometric nodes per triangle: 3 for NCP1/P1, 1 for P0.
int local_nodes(SpaceKind space);

/// (triangle, local node, component) -> global dof. Vector spaces interleave
/// components: dof = 2 * node + component.
class DofMap {
public:
    DofMap(SpaceKind space, int n_nodes, std::vector<int> cell_nodes, std::vector<int> boundary_nodes);

    SpaceKind space() const { return space_; }
    int components() const { return components_; }
    int n_nodes() const { return n_nodes_; }
    int n_dofs() const { return n_nodes_ * components_; }
    int local_nodes() const { return local_nodes_; }
    int local_dofs() const { return local_nodes_ * components_; }
    int n_cells() const { return static_cast<int>(cell_nodes_.size()) / local_nodes_; }

    int node(int t, int local) const { return cell_nodes_[static_cast<std::size_t>(t * local_nodes_ + local)]; }
    int dof(int t, int local, int comp) const { return node(t, local) * components_ + comp; }
    /// Local dof ordering: node-major, component-minor.
    int cell_dof(int t, int local_dof) const { return dof(t, local_dof / components_, local_dof % components_); }

    /// Sorted global dofs on the boundary.
    std::span<const int> boundary_dofs() const { return boundary_dofs_; }
    bool is_boundary(int dof) const { return boundary_flag_[static_cast<std::size_t>(dof)]; }

private:
    SpaceKind space_;
    int components_;
    int local_nodes_;
    int n_nodes_;
    std::vector<int> cell_nodes_;
    std::vector<int> boundary_dofs_;
    std::vector<bool> boundary_flag_;
};

DofMap build_dofmap(const Mesh& mesh, SpaceKind space);

/// Location of a geometric node: edge midpoint (NCP1), vertex (P1), centroid (P0).
Point node_location(const Mesh& mesh, SpaceKind space, int node);

/// Scalar shape functions of one triangle. Gradients are with respect to the
/// reference coordinates (xi, eta) where lambda = (1 - xi - eta, xi, eta).
struct BasisValues {
    int count = 0;
    std::array<double, 3> values{};
    std::array<Vec2, 3> ref_gradients{};
};

/// NCP1: psi_i = 1 - 2 lambda_i (edge opposite vertex i). P1: lambda_i. P0: 1.
BasisValues eval_basis(SpaceKind space, const std::array<double, 3>& bary);

/// Affine triangle data.
struct ElementGeometry {
    std::array<Point, 3> corners{};
    double area = 0.0;
    /// Physical gradients of the barycentric coordinates.
    std::array<Vec2, 3> grad_lambda{};

    Point map(const std::array<double, 3>& bary) const;
};

/// Throws DegenerateElement when |K| < 1e-14.
ElementGeometry element_geometry(const Mesh& mesh, int t);

/// Physical gradients of the scalar shape functions (constant on the element).
std::array<Vec2, 3> shape_gradients(SpaceKind space, const ElementGeometry& geo);

struct FieldCoefficients {
    SpaceKind space = SpaceKind::P1_scalar;
    std::vector<double> values;
};

/// Nodal interpolation: value at each dof site.
FieldCoefficients interpolate(const VectorField& field, const Mesh& mesh, const DofMap& dofs);
FieldCoefficients interpolate(const ScalarField& field, const Mesh& mesh, const DofMap& dofs);

/// Evaluate a vector field on triangle t at a barycentric point.
Vec2 evaluate_vector(std::span<const double> coeffs, const DofMap& dofs, int t, const std::array<double, 3>& bary);
double evaluate_scalar(std::span<const double> coeffs, const DofMap& dofs, int t, const std::array<double, 3>& bary);
/// Element-wise constant gradient of a vector field in NCP1 or P1.
Mat2 element_gradient(std::span<const double> coeffs, const DofMap& dofs, const ElementGeometry& geo, int t);

} // namespace ncstokes

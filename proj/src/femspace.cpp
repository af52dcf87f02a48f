#include "ncstokes/femspace.hpp"

#include "ncstokes/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ncstokes {

std::string_view to_string(SpaceKind space) {
    switch (space) {
    case SpaceKind::NCP1_vector: return "NCP1_vector";
    case SpaceKind::P1_vector: return "P1_vector";
    case SpaceKind::P1_scalar: return "P1_scalar";
    case SpaceKind::P0_scalar: return "P0_scalar";
    }
    return "?";
}

int components(SpaceKind space) {
    return (space == SpaceKind::NCP1_vector || space == SpaceKind::P1_vector) ? 2 : 1;
}

int local_nodes(SpaceKind space) {
    return space == SpaceKind::P0_scalar ? 1 : 3;
}

DofMap::DofMap(SpaceKind space, int n_nodes, std::vector<int> cell_nodes, std::vector<int> boundary_nodes)
    : space_(space), components_(ncstokes::components(space)), local_nodes_(ncstokes::local_nodes(space)),
      n_nodes_(n_nodes), cell_nodes_(std::move(cell_nodes)) {
    boundary_flag_.assign(static_cast<std::size_t>(n_dofs()), false);
    std::sort(boundary_nodes.begin(), boundary_nodes.end());
    for (int node : boundary_nodes) {
        for (int c = 0; c < components_; ++c) {
            boundary_dofs_.push_back(node * components_ + c);
            boundary_flag_[static_cast<std::size_t>(node * components_ + c)] = true;
        }
    }
}

DofMap build_dofmap(const Mesh& mesh, SpaceKind space) {
    const int nt = mesh.num_triangles();
    std::vector<int> cell_nodes;
    std::vector<int> boundary;
    int n_nodes = 0;
    switch (space) {
    case SpaceKind::NCP1_vector:
        n_nodes = mesh.num_edges();
        cell_nodes.reserve(static_cast<std::size_t>(3 * nt));
        for (int t = 0; t < nt; ++t) {
            for (int k = 0; k < 3; ++k) {
                cell_nodes.push_back(mesh.triangle_edge(t, k));
            }
        }
        for (int e = 0; e < mesh.num_edges(); ++e) {
            if (mesh.edge(e).boundary) {
                boundary.push_back(e);
            }
        }
        break;
    case SpaceKind::P1_vector:
    case SpaceKind::P1_scalar: {
        n_nodes = mesh.num_vertices();
        cell_nodes.reserve(static_cast<std::size_t>(3 * nt));
        for (int t = 0; t < nt; ++t) {
            for (int k = 0; k < 3; ++k) {
                cell_nodes.push_back(mesh.triangle(t).v[static_cast<std::size_t>(k)]);
            }
        }
        const auto flags = mesh.boundary_vertices();
        for (int v = 0; v < n_nodes; ++v) {
            if (flags[static_cast<std::size_t>(v)]) {
                boundary.push_back(v);
            }
        }
        break;
    }
    case SpaceKind::P0_scalar:
        n_nodes = nt;
        cell_nodes.resize(static_cast<std::size_t>(nt));
        for (int t = 0; t < nt; ++t) {
            cell_nodes[static_cast<std::size_t>(t)] = t;
        }
        break;
    }
    return DofMap(space, n_nodes, std::move(cell_nodes), std::move(boundary));
}

Point node_location(const Mesh& mesh, SpaceKind space, int node) {
    switch (space) {
    case SpaceKind::NCP1_vector: return mesh.midpoint(node);
    case SpaceKind::P1_vector:
    case SpaceKind::P1_scalar: return mesh.vertex(node);
    case SpaceKind::P0_scalar: return mesh.centroid(node);
    }
    return {};
}

BasisValues eval_basis(SpaceKind space, const std::array<double, 3>& bary) {
    // Reference gradients of lambda_0, lambda_1, lambda_2 in (xi, eta).
    static constexpr std::array<Vec2, 3> dl = {{{-1.0, -1.0}, {1.0, 0.0}, {0.0, 1.0}}};
    BasisValues b;
    switch (space) {
    case SpaceKind::NCP1_vector:
        b.count = 3;
        for (std::size_t i = 0; i < 3; ++i) {
            b.values[i] = 1.0 - 2.0 * bary[i];
            b.ref_gradients[i] = {-2.0 * dl[i][0], -2.0 * dl[i][1]};
        }
        break;
    case SpaceKind::P1_vector:
    case SpaceKind::P1_scalar:
        b.count = 3;
        for (std::size_t i = 0; i < 3; ++i) {
            b.values[i] = bary[i];
            b.ref_gradients[i] = dl[i];
        }
        break;
    case SpaceKind::P0_scalar:
        b.count = 1;
        b.values[0] = 1.0;
        break;
    }
    return b;
}

Point ElementGeometry::map(const std::array<double, 3>& bary) const {
    return {bary[0] * corners[0].x + bary[1] * corners[1].x + bary[2] * corners[2].x,
            bary[0] * corners[0].y + bary[1] * corners[1].y + bary[2] * corners[2].y};
}

ElementGeometry element_geometry(const Mesh& mesh, int t) {
    ElementGeometry g;
    g.corners = mesh.corners(t);
    const auto& p = g.corners;
    const double j11 = p[1].x - p[0].x;
    const double j12 = p[2].x - p[0].x;
    const double j21 = p[1].y - p[0].y;
    const double j22 = p[2].y - p[0].y;
    const double det = j11 * j22 - j12 * j21;
    g.area = 0.5 * std::abs(det);
    if (g.area < 1e-14) {
        throw DegenerateElement("triangle " + std::to_string(t) + " has area " + std::to_string(g.area));
    }
    // grad lambda_1 and grad lambda_2 are the rows of J^{-1}.
    g.grad_lambda[1] = {j22 / det, -j12 / det};
    g.grad_lambda[2] = {-j21 / det, j11 / det};
    g.grad_lambda[0] = {-g.grad_lambda[1][0] - g.grad_lambda[2][0], -g.grad_lambda[1][1] - g.grad_lambda[2][1]};
    return g;
}

std::array<Vec2, 3> shape_gradients(SpaceKind space, const ElementGeometry& geo) {
    std::array<Vec2, 3> g{};
    switch (space) {
    case SpaceKind::NCP1_vector:
        for (std::size_t i = 0; i < 3; ++i) {
            g[i] = {-2.0 * geo.grad_lambda[i][0], -2.0 * geo.grad_lambda[i][1]};
        }
        break;
    case SpaceKind::P1_vector:
    case SpaceKind::P1_scalar:
        g = geo.grad_lambda;
        break;
    case SpaceKind::P0_scalar:
        break;
    }
    return g;
}

FieldCoefficients interpolate(const VectorField& field, const Mesh& mesh, const DofMap& dofs) {
    if (dofs.components() != 2) {
        throw std::invalid_argument("vector field interpolated into a scalar space");
    }
    FieldCoefficients out{dofs.space(), std::vector<double>(static_cast<std::size_t>(dofs.n_dofs()))};
    for (int node = 0; node < dofs.n_nodes(); ++node) {
        const Vec2 v = field(node_location(mesh, dofs.space(), node));
        out.values[static_cast<std::size_t>(2 * node)] = v[0];
        out.values[static_cast<std::size_t>(2 * node + 1)] = v[1];
    }
    return out;
}

FieldCoefficients interpolate(const ScalarField& field, const Mesh& mesh, const DofMap& dofs) {
    if (dofs.components() != 1) {
        throw std::invalid_argument("scalar field interpolated into a vector space");
    }
    FieldCoefficients out{dofs.space(), std::vector<double>(static_cast<std::size_t>(dofs.n_dofs()))};
    for (int node = 0; node < dofs.n_nodes(); ++node) {
        out.values[static_cast<std::size_t>(node)] = field(node_location(mesh, dofs.space(), node));
    }
    return out;
}

Vec2 evaluate_vector(std::span<const double> coeffs, const DofMap& dofs, int t, const std::array<double, 3>& bary) {
    const auto basis = eval_basis(dofs.space(), bary);
    Vec2 v{0.0, 0.0};
    for (int a = 0; a < basis.count; ++a) {
        const double phi = basis.values[static_cast<std::size_t>(a)];
        v[0] += phi * coeffs[static_cast<std::size_t>(dofs.dof(t, a, 0))];
        v[1] += phi * coeffs[static_cast<std::size_t>(dofs.dof(t, a, 1))];
    }
    return v;
}

double evaluate_scalar(std::span<const double> coeffs, const DofMap& dofs, int t, const std::array<double, 3>& bary) {
    const auto basis = eval_basis(dofs.space(), bary);
    double v = 0.0;
    for (int a = 0; a < basis.count; ++a) {
        v += basis.values[static_cast<std::size_t>(a)] * coeffs[static_cast<std::size_t>(dofs.dof(t, a, 0))];
    }
    return v;
}

Mat2 element_gradient(std::span<const double> coeffs, const DofMap& dofs, const ElementGeometry& geo, int t) {
    const auto grads = shape_gradients(dofs.space(), geo);
    Mat2 g{};
    for (int a = 0; a < 3; ++a) {
        for (int c = 0; c < 2; ++c) {
            const double u = coeffs[static_cast<std::size_t>(dofs.dof(t, a, c))];
            g[static_cast<std::size_t>(c)][0] += u * grads[static_cast<std::size_t>(a)][0];
            g[static_cast<std::size_t>(c)][1] += u * grads[static_cast<std::size_t>(a)][1];
        }
    }
    return g;
}

} // namespace ncstokes

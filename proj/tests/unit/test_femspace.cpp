#include "ncstokes/errors.hpp"
#include "ncstokes/femspace.hpp"
#include "ncstokes/problems.hpp"
#include "ncstokes/quadrature.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace ncstokes;

namespace {

Mesh reference_triangle() {
    return Mesh({{0, 0}, {1, 0}, {0, 1}}, {{{0, 1, 2}}});
}

Mesh random_triangle(std::mt19937& rng) {
    std::uniform_real_distribution<double> d(-2.0, 2.0);
    for (;;) {
        std::vector<Vertex> v{{d(rng), d(rng)}, {d(rng), d(rng)}, {d(rng), d(rng)}};
        const double o = (v[1].x - v[0].x) * (v[2].y - v[0].y) - (v[2].x - v[0].x) * (v[1].y - v[0].y);
        if (std::abs(o) < 0.1) {
            continue;
        }
        if (o < 0) {
            std::swap(v[1], v[2]);
        }
        return Mesh(v, {{{0, 1, 2}}});
    }
}

// Broken H1 seminorm of (field - interpolant) with the degree-6 rule.
double interpolation_error_h1(const ProblemSpec& p, int n) {
    const auto mesh = build_structured_mesh(n);
    const auto dofs = build_dofmap(mesh, SpaceKind::NCP1_vector);
    const auto vi = interpolate(p.exact->u, mesh, dofs);
    const auto& rule = degree6_rule();
    double e = 0.0;
    for (int t = 0; t < mesh.num_triangles(); ++t) {
        const auto geo = element_geometry(mesh, t);
        const auto gh = element_gradient(vi.values, dofs, geo, t);
        for (std::size_t q = 0; q < rule.size(); ++q) {
            const auto g = p.exact->grad_u(geo.map(rule.points[q]));
            for (std::size_t c = 0; c < 2; ++c) {
                for (std::size_t d = 0; d < 2; ++d) {
                    e += rule.weights[q] * geo.area * std::pow(g[c][d] - gh[c][d], 2);
                }
            }
        }
    }
    return std::sqrt(e);
}

} // namespace

TEST(DofMap, Counts) {
    const auto m2 = build_structured_mesh(2);
    const auto ncp1 = build_dofmap(m2, SpaceKind::NCP1_vector);
    EXPECT_EQ(ncp1.n_dofs(), 32);
    EXPECT_EQ(ncp1.boundary_dofs().size(), 16u);
    const auto p1 = build_dofmap(m2, SpaceKind::P1_scalar);
    EXPECT_EQ(p1.n_dofs(), 9);
    EXPECT_EQ(p1.boundary_dofs().size(), 8u);
    const auto p1v = build_dofmap(m2, SpaceKind::P1_vector);
    EXPECT_EQ(p1v.n_dofs(), 18);
    EXPECT_EQ(p1v.boundary_dofs().size(), 16u);
    const auto m1 = build_structured_mesh(1);
    const auto p0 = build_dofmap(m1, SpaceKind::P0_scalar);
    EXPECT_EQ(p0.n_dofs(), 2);
    EXPECT_TRUE(p0.boundary_dofs().empty());
}

TEST(DofMap, CellDofsSurjectiveAndSharedByAdjacentCells) {
    const auto m = build_structured_mesh(4, MeshPattern::Skew3);
    for (auto space : {SpaceKind::NCP1_vector, SpaceKind::P1_vector, SpaceKind::P1_scalar, SpaceKind::P0_scalar}) {
        const auto dofs = build_dofmap(m, space);
        std::vector<int> hits(static_cast<std::size_t>(dofs.n_dofs()), 0);
        for (int t = 0; t < m.num_triangles(); ++t) {
            for (int l = 0; l < dofs.local_dofs(); ++l) {
                ++hits[static_cast<std::size_t>(dofs.cell_dof(t, l))];
            }
        }
        for (int d = 0; d < dofs.n_dofs(); ++d) {
            EXPECT_GT(hits[static_cast<std::size_t>(d)], 0) << to_string(space);
            if (space == SpaceKind::NCP1_vector) {
                const bool boundary = m.edge(d / 2).boundary;
                EXPECT_EQ(hits[static_cast<std::size_t>(d)], boundary ? 1 : 2);
                EXPECT_EQ(dofs.is_boundary(d), boundary);
            }
        }
    }
}

TEST(Basis, CrouzeixRaviartKroneckerAtMidpoints) {
    // Midpoint of edge i is where lambda_i = 0 and the other two are 1/2.
    for (int i = 0; i < 3; ++i) {
        std::array<double, 3> mid{0.5, 0.5, 0.5};
        mid[static_cast<std::size_t>(i)] = 0.0;
        const auto b = eval_basis(SpaceKind::NCP1_vector, mid);
        for (int j = 0; j < 3; ++j) {
            EXPECT_NEAR(b.values[static_cast<std::size_t>(j)], i == j ? 1.0 : 0.0, 1e-15);
        }
    }
}

TEST(Basis, PartitionOfUnityAndLagrangeProperty) {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 100; ++k) {
        double a = u(rng), b = u(rng);
        if (a + b > 1.0) {
            a = 1.0 - a;
            b = 1.0 - b;
        }
        const std::array<double, 3> bary{1.0 - a - b, a, b};
        for (auto space : {SpaceKind::NCP1_vector, SpaceKind::P1_scalar, SpaceKind::P0_scalar}) {
            const auto basis = eval_basis(space, bary);
            double s = 0.0;
            Vec2 gs{0.0, 0.0};
            for (int i = 0; i < basis.count; ++i) {
                s += basis.values[static_cast<std::size_t>(i)];
                gs[0] += basis.ref_gradients[static_cast<std::size_t>(i)][0];
                gs[1] += basis.ref_gradients[static_cast<std::size_t>(i)][1];
            }
            EXPECT_NEAR(s, 1.0, 1e-14);
            EXPECT_NEAR(gs[0], 0.0, 1e-15);
            EXPECT_NEAR(gs[1], 0.0, 1e-15);
        }
    }
    for (int i = 0; i < 3; ++i) {
        std::array<double, 3> vertex{0.0, 0.0, 0.0};
        vertex[static_cast<std::size_t>(i)] = 1.0;
        const auto b = eval_basis(SpaceKind::P1_scalar, vertex);
        for (int j = 0; j < 3; ++j) {
            EXPECT_EQ(b.values[static_cast<std::size_t>(j)], i == j ? 1.0 : 0.0);
        }
    }
}

TEST(Basis, ReferenceCrouzeixRaviartStiffness) {
    const auto m = reference_triangle();
    const auto geo = element_geometry(m, 0);
    const auto g = shape_gradients(SpaceKind::NCP1_vector, geo);
    const double expected[3][3] = {{4, -2, -2}, {-2, 2, 0}, {-2, 0, 2}};
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 3; ++j) {
            EXPECT_NEAR(geo.area * (g[i][0] * g[j][0] + g[i][1] * g[j][1]), expected[i][j], 1e-14);
        }
    }
}

TEST(Basis, PhysicalGradientsSumToZeroAndMatchFiniteDifferences) {
    std::mt19937 rng(11);
    for (int k = 0; k < 50; ++k) {
        const auto m = random_triangle(rng);
        const auto geo = element_geometry(m, 0);
        for (auto space : {SpaceKind::NCP1_vector, SpaceKind::P1_scalar}) {
            const auto g = shape_gradients(space, geo);
            EXPECT_NEAR(g[0][0] + g[1][0] + g[2][0], 0.0, 1e-12);
            EXPECT_NEAR(g[0][1] + g[1][1] + g[2][1], 0.0, 1e-12);
            // Value difference between two vertices equals gradient dot edge vector.
            const auto b0 = eval_basis(space, {1, 0, 0});
            const auto b1 = eval_basis(space, {0, 1, 0});
            const double dx = geo.corners[1].x - geo.corners[0].x;
            const double dy = geo.corners[1].y - geo.corners[0].y;
            for (std::size_t i = 0; i < 3; ++i) {
                EXPECT_NEAR(b1.values[i] - b0.values[i], g[i][0] * dx + g[i][1] * dy, 1e-12);
            }
        }
    }
}

TEST(Geometry, DegenerateElementThrows) {
    const Mesh tiny({{0, 0}, {1e-8, 0}, {0, 1e-8}}, {{{0, 1, 2}}});
    EXPECT_THROW(element_geometry(tiny, 0), DegenerateElement);
}

TEST(Interpolation, LinearFieldReproducedInCrouzeixRaviart) {
    const auto m = build_structured_mesh(3, MeshPattern::Skew3);
    const auto dofs = build_dofmap(m, SpaceKind::NCP1_vector);
    const VectorField f = [](Point p) -> Vec2 { return {p.x, p.y}; };
    const auto vi = interpolate(f, m, dofs);
    for (int e = 0; e < m.num_edges(); ++e) {
        EXPECT_DOUBLE_EQ(vi.values[static_cast<std::size_t>(2 * e)], m.midpoint(e).x);
        EXPECT_DOUBLE_EQ(vi.values[static_cast<std::size_t>(2 * e + 1)], m.midpoint(e).y);
    }
    for (int t = 0; t < m.num_triangles(); ++t) {
        for (const auto& bary : degree6_rule().points) {
            const auto geo = element_geometry(m, t);
            const Point x = geo.map(bary);
            const Vec2 v = evaluate_vector(vi.values, dofs, t, bary);
            EXPECT_NEAR(v[0], x.x, 1e-14);
            EXPECT_NEAR(v[1], x.y, 1e-14);
        }
    }
}

TEST(Interpolation, ConstantIntoP0AndP1) {
    const auto m = build_structured_mesh(2);
    const ScalarField one = [](Point) { return 1.0; };
    for (auto space : {SpaceKind::P0_scalar, SpaceKind::P1_scalar}) {
        const auto q = interpolate(one, m, build_dofmap(m, space));
        for (double v : q.values) {
            EXPECT_EQ(v, 1.0);
        }
    }
    EXPECT_THROW(interpolate(one, m, build_dofmap(m, SpaceKind::NCP1_vector)), std::invalid_argument);
}

TEST(Interpolation, ContinuousPiecewiseLinearHasNoMidpointJump) {
    // A P1 field evaluated from both sides of each interior edge midpoint.
    const auto m = build_structured_mesh(4, MeshPattern::Skew3);
    const auto p1 = build_dofmap(m, SpaceKind::P1_vector);
    std::mt19937 rng(3);
    std::normal_distribution<double> n01;
    std::vector<double> coeffs(static_cast<std::size_t>(p1.n_dofs()));
    for (auto& c : coeffs) {
        c = n01(rng);
    }
    for (int e = 0; e < m.num_edges(); ++e) {
        const auto& edge = m.edge(e);
        if (edge.boundary) {
            continue;
        }
        Vec2 side[2];
        for (int s = 0; s < 2; ++s) {
            const int t = edge.adjacent[static_cast<std::size_t>(s)];
            std::array<double, 3> bary{0.5, 0.5, 0.5};
            for (int k = 0; k < 3; ++k) {
                if (m.triangle_edge(t, k) == e) {
                    bary[static_cast<std::size_t>(k)] = 0.0;
                }
            }
            side[s] = evaluate_vector(coeffs, p1, t, bary);
        }
        EXPECT_NEAR(side[0][0], side[1][0], 1e-14);
        EXPECT_NEAR(side[0][1], side[1][1], 1e-14);
    }
}

TEST(Interpolation, BrokenH1ErrorHalvesUnderRefinement) {
    const auto p = mms_problem();
    const double e10 = interpolation_error_h1(p, 10);
    const double e20 = interpolation_error_h1(p, 20);
    EXPECT_NEAR(e20 / e10, 0.5, 0.5 * 0.15);
}

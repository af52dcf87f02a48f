#include "ncstokes/problems.hpp"

#include "gauss.hpp"
#include "hyperdual.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace ncstokes;
using oracle::HyperDual;

namespace {

constexpr double pi = std::numbers::pi;

// Velocity written directly from the stream-function derivatives, evaluated
// in hyper-dual arithmetic so that seeded variables carry exact derivatives.
std::array<HyperDual, 2> velocity(HyperDual x, HyperDual y) {
    const HyperDual sx = sin(pi * x);
    const HyperDual sy = sin(pi * y);
    const HyperDual cx = cos(pi * x);
    const HyperDual cy = cos(pi * y);
    return {2.0 * pi * sx * sx * sy * cy, -2.0 * pi * sx * cx * sy * sy};
}

HyperDual pressure(HyperDual x, HyperDual y) {
    return cos(pi * x) * cos(pi * y);
}

HyperDual stream(HyperDual x, HyperDual y) {
    const HyperDual sx = sin(pi * x);
    const HyperDual sy = sin(pi * y);
    return sx * sx * sy * sy;
}

struct Derivatives {
    std::array<double, 2> value;
    std::array<double, 2> dx, dy, dxx, dyy;
};

Derivatives velocity_derivatives(double x, double y) {
    const auto ux = velocity(HyperDual::variable(x), HyperDual::constant(y));
    const auto uy = velocity(HyperDual::constant(x), HyperDual::variable(y));
    Derivatives d{};
    for (std::size_t c = 0; c < 2; ++c) {
        d.value[c] = ux[c].f;
        d.dx[c] = ux[c].d1;
        d.dxx[c] = ux[c].d12;
        d.dy[c] = uy[c].d1;
        d.dyy[c] = uy[c].d12;
    }
    return d;
}

} // namespace

TEST(Manufactured, MomentumResidualAtRandomPoints) {
    std::mt19937 rng(1234);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (double nu : {1.0, kManufacturedViscosity}) {
        const auto p = mms_problem(nu);
        for (int k = 0; k < 1000; ++k) {
            const double x = unit(rng);
            const double y = unit(rng);
            const auto d = velocity_derivatives(x, y);
            const double px = pressure(HyperDual::variable(x), HyperDual::constant(y)).d1;
            const double py = pressure(HyperDual::constant(x), HyperDual::variable(y)).d1;
            const Vec2 f = p.f({x, y});
            EXPECT_NEAR(-nu * (d.dxx[0] + d.dyy[0]) + px, f[0], 1e-10);
            EXPECT_NEAR(-nu * (d.dxx[1] + d.dyy[1]) + py, f[1], 1e-10);
        }
    }
}

TEST(Manufactured, FieldsMatchIndependentForms) {
    const auto exact = *mms_problem().exact;
    std::mt19937 rng(77);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int k = 0; k < 1000; ++k) {
        const double x = unit(rng);
        const double y = unit(rng);
        const auto d = velocity_derivatives(x, y);
        const auto u = exact.u({x, y});
        const auto g = exact.grad_u({x, y});
        EXPECT_NEAR(u[0], d.value[0], 1e-13);
        EXPECT_NEAR(u[1], d.value[1], 1e-13);
        EXPECT_NEAR(g[0][0], d.dx[0], 1e-12);
        EXPECT_NEAR(g[0][1], d.dy[0], 1e-12);
        EXPECT_NEAR(g[1][0], d.dx[1], 1e-12);
        EXPECT_NEAR(g[1][1], d.dy[1], 1e-12);
        EXPECT_NEAR(g[0][0] + g[1][1], 0.0, 1e-12);
        EXPECT_NEAR(exact.p({x, y}), std::cos(pi * x) * std::cos(pi * y), 1e-15);
        // u = (psi_y, -psi_x)
        EXPECT_NEAR(u[0], stream(HyperDual::constant(x), HyperDual::variable(y)).d1, 1e-12);
        EXPECT_NEAR(u[1], -stream(HyperDual::variable(x), HyperDual::constant(y)).d1, 1e-12);
    }
}

TEST(Manufactured, DivergenceFreeAtSamplePoint) {
    const auto g = mms_problem().exact->grad_u({0.3, 0.7});
    EXPECT_NEAR(g[0][0] + g[1][1], 0.0, 1e-12);
}

TEST(Manufactured, VanishesOnTheBoundary) {
    const auto exact = *mms_problem().exact;
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int k = 0; k < 100; ++k) {
        const double s = unit(rng);
        const Point pts[] = {{s, 0.0}, {s, 1.0}, {0.0, s}, {1.0, s}};
        const Point q = pts[k % 4];
        const auto u = exact.u(q);
        EXPECT_NEAR(u[0], 0.0, 1e-14);
        EXPECT_NEAR(u[1], 0.0, 1e-14);
        const auto g = mms_problem().dirichlet(q);
        EXPECT_EQ(g[0], 0.0);
        EXPECT_EQ(g[1], 0.0);
    }
}

TEST(Manufactured, PressureHasZeroMean) {
    const auto p = mms_problem().exact->p;
    const auto [x, w] = oracle::gauss_legendre(20);
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        for (std::size_t j = 0; j < x.size(); ++j) {
            s += w[i] * w[j] * p({x[i], x[j]});
        }
    }
    EXPECT_NEAR(s, 0.0, 1e-12);
}

TEST(Cavity, LidDataAndZeroNetFlux) {
    const auto c = cavity_problem();
    EXPECT_EQ(c.nu, 1.0);
    EXPECT_FALSE(c.exact.has_value());
    EXPECT_EQ(c.f({0.4, 0.6})[0], 0.0);
    EXPECT_EQ(c.dirichlet({0.5, 1.0})[0], 1.0);
    EXPECT_EQ(c.dirichlet({0.5, 1.0})[1], 0.0);
    EXPECT_EQ(c.dirichlet({0.5, 0.0})[0], 0.0);
    EXPECT_EQ(c.dirichlet({0.0, 0.5})[0], 0.0);
    EXPECT_EQ(c.dirichlet({1.0, 0.5})[0], 0.0);

    const auto [x, w] = oracle::gauss_legendre(10);
    double flux = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double s = x[i];
        flux += w[i] * (-c.dirichlet({s, 0.0})[1] + c.dirichlet({s, 1.0})[1] - c.dirichlet({0.0, s})[0] +
                        c.dirichlet({1.0, s})[0]);
    }
    EXPECT_EQ(flux, 0.0);
}

TEST(ProblemFactory, NamesViscosityAndErrors) {
    EXPECT_EQ(make_problem("mms1").name, "mms1");
    EXPECT_EQ(make_problem("mms1").nu, kManufacturedViscosity);
    EXPECT_EQ(make_problem("mms1", 1.0).nu, 1.0);
    EXPECT_EQ(make_problem("cavity").name, "cavity");
    EXPECT_EQ(make_problem("cavity", 0.5).nu, 0.5);
    EXPECT_THROW(make_problem("cylinder"), std::invalid_argument);
    EXPECT_THROW(mms_problem(0.0), std::invalid_argument);
    EXPECT_THROW(cavity_problem(-1.0), std::invalid_argument);
}

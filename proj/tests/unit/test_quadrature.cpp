#include "ncstokes/quadrature.hpp"

#include "gauss.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

using namespace ncstokes;

namespace {

double factorial(int k) {
    return std::tgamma(k + 1.0);
}

// int over the reference triangle of x^a y^b = a! b! / (a + b + 2)!
double monomial_exact(int a, int b) {
    return factorial(a) * factorial(b) / factorial(a + b + 2);
}

double apply(const QuadratureRule& rule, int a, int b) {
    double s = 0.0;
    for (std::size_t q = 0; q < rule.size(); ++q) {
        const double x = rule.points[q][1];
        const double y = rule.points[q][2];
        s += rule.weights[q] * std::pow(x, a) * std::pow(y, b);
    }
    return 0.5 * s;
}

} // namespace

class RuleExactness : public ::testing::TestWithParam<const QuadratureRule*> {};

TEST_P(RuleExactness, MonomialsUpToDegree) {
    const auto& rule = *GetParam();
    for (int a = 0; a <= rule.degree; ++a) {
        for (int b = 0; a + b <= rule.degree; ++b) {
            EXPECT_NEAR(apply(rule, a, b), monomial_exact(a, b), 1e-13) << "x^" << a << " y^" << b;
        }
    }
}

TEST_P(RuleExactness, WeightsPositiveSumToOnePointsInside) {
    const auto& rule = *GetParam();
    EXPECT_NEAR(std::accumulate(rule.weights.begin(), rule.weights.end(), 0.0), 1.0, 1e-15);
    for (std::size_t q = 0; q < rule.size(); ++q) {
        EXPECT_GT(rule.weights[q], 0.0);
        EXPECT_NEAR(rule.points[q][0] + rule.points[q][1] + rule.points[q][2], 1.0, 1e-15);
        for (double l : rule.points[q]) {
            EXPECT_GE(l, 0.0);
        }
    }
}

INSTANTIATE_TEST_SUITE_P(Rules, RuleExactness, ::testing::Values(&midpoint_rule(), &degree6_rule()));

TEST(Quadrature, DeclaredDegrees) {
    EXPECT_EQ(midpoint_rule().degree, 2);
    EXPECT_EQ(midpoint_rule().size(), 3u);
    EXPECT_EQ(degree6_rule().degree, 6);
    EXPECT_EQ(degree6_rule().size(), 12u);
}

TEST(Quadrature, MidpointRuleIsNotCubicExact) {
    EXPECT_GT(std::abs(apply(midpoint_rule(), 3, 0) - monomial_exact(3, 0)), 1e-6);
}

TEST(Quadrature, Degree6RuleIsNotDegree7Exact) {
    double worst = 0.0;
    for (int a = 0; a <= 7; ++a) {
        worst = std::max(worst, std::abs(apply(degree6_rule(), a, 7 - a) - monomial_exact(a, 7 - a)));
    }
    EXPECT_GT(worst, 1e-8);
}

TEST(GaussOracle, MatchesMonomialFormula) {
    for (int a = 0; a <= 8; ++a) {
        for (int b = 0; a + b <= 8; ++b) {
            const double v = oracle::triangle_integral([&](double x, double y) { return std::pow(x, a) * std::pow(y, b); },
                                                        {0, 0}, {1, 0}, {0, 1}, 8);
            EXPECT_NEAR(v, monomial_exact(a, b), 1e-15);
        }
    }
}

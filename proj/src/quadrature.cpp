#include "ncstokes/quadrature.hpp"

namespace ncstokes {

namespace {

void add_orbit3(QuadratureRule& rule, double a, double w) {
    const double b = 1.0 - 2.0 * a;
    rule.points.push_back({b, a, a});
    rule.points.push_back({a, b, a});
    rule.points.push_back({a, a, b});
    rule.weights.insert(rule.weights.end(), 3, w);
}

void add_orbit6(QuadratureRule& rule, double a, double b, double w) {
    const double c = 1.0 - a - b;
    rule.points.push_back({a, b, c});
    rule.points.push_back({a, c, b});
    rule.points.push_back({b, a, c});
    rule.points.push_back({b, c, a});
    rule.points.push_back({c, a, b});
    rule.points.push_back({c, b, a});
    rule.weights.insert(rule.weights.end(), 6, w);
}

QuadratureRule make_midpoint() {
    QuadratureRule rule;
    rule.degree = 2;
    add_orbit3(rule, 0.5, 1.0 / 3.0);
    return rule;
}

// Dunavant (1985), degree 6.
QuadratureRule make_degree6() {
    QuadratureRule rule;
    rule.degree = 6;
    add_orbit3(rule, 0.063089014491502228340331602870819157, 0.050844906370206816920936809106869055);
    add_orbit3(rule, 0.24928674517091042129163855310701908, 0.11678627572637936602528961138557944);
    add_orbit6(rule, 0.053145049844816947353249671631398147, 0.31035245103378440541660773395655215,
               0.082851075618373575193553456420442225);
    return rule;
}

} // namespace

const QuadratureRule& midpoint_rule() {
    static const QuadratureRule rule = make_midpoint();
    return rule;
}

const QuadratureRule& degree6_rule() {
    static const QuadratureRule rule = make_degree6();
    return rule;
}

} // namespace ncstokes

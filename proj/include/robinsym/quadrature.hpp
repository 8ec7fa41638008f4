// Gauss rules on segments and triangles, plus small adaptive drivers.
#pragma once

#include <Eigen/Dense>
#include <functional>

namespace robinsym {

// n-point Gauss-Legendre rule on [-1, 1].  Nodes ascending.
struct GaussRule {
    Eigen::VectorXd nodes;
    Eigen::VectorXd weights;
};

// Cached rule, nodes computed by Newton iteration on P_n.  1 <= n <= 64.
const GaussRule& gauss_rule(int n);

// Integral of f over [a, b] (a > b allowed, sign flips) by adaptive
// bisection of an n-point Gauss rule.  The tolerance is relative to a
// first-pass estimate of the total variation integral of |f|.
double integrate_adaptive(const std::function<double(double)>& f,
                          double a, double b,
                          double rel_tol = 1e-10, int n = 16);

// Vector-valued variant; refinement is driven by the worst component.
// f writes its dim values into the passed block.
Eigen::VectorXd integrate_adaptive_vec(
    int dim,
    const std::function<void(double, Eigen::Ref<Eigen::VectorXd>)>& f,
    double a, double b, double rel_tol = 1e-10, int n = 16);

// Fixed composite Gauss: [a, b] split into panels of width <= max_panel,
// n points each.  No error control; used on hot paths where the integrand
// is known to be analytic with a comfortable margin.
double integrate_composite(const std::function<double(double)>& f,
                           double a, double b,
                           double max_panel, int n = 16);

// Degree-5 rule on the reference triangle.  Rows are (w, b0, b1, b2) with
// barycentric points; weights sum to 1 and scale with the physical area.
struct TriangleRule {
    Eigen::Matrix<double, Eigen::Dynamic, 4> points;
};

const TriangleRule& triangle_rule_deg5();

} // namespace robinsym

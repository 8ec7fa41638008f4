#include "doctest.h"
#include "robinsym/quadrature.hpp"

#include <cmath>

using namespace robinsym;

namespace {
double factorial(int n) {
    double f = 1.0;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
}
} // namespace

TEST_SUITE("quadrature") {

TEST_CASE("gauss rule basics") {
    for (int n : {1, 2, 3, 5, 8, 16, 33, 64}) {
        const GaussRule& rule = gauss_rule(n);
        REQUIRE(rule.nodes.size() == n);
        REQUIRE(rule.weights.size() == n);
        CHECK(rule.weights.sum() == doctest::Approx(2.0).epsilon(1e-14));
        for (int i = 0; i < n; ++i) {
            CHECK(rule.nodes[i] > -1.0);
            CHECK(rule.nodes[i] < 1.0);
            CHECK(rule.weights[i] > 0.0);
            if (i > 0) CHECK(rule.nodes[i] > rule.nodes[i - 1]);
            // symmetry of nodes and weights about 0
            CHECK(rule.nodes[i] == doctest::Approx(-rule.nodes[n - 1 - i]).epsilon(1e-13));
            CHECK(rule.weights[i] == doctest::Approx(rule.weights[n - 1 - i]).epsilon(1e-13));
        }
    }
    const GaussRule& two = gauss_rule(2);
    CHECK(two.nodes[1] == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-15));
    CHECK(two.weights[0] == doctest::Approx(1.0).epsilon(1e-15));

    CHECK_THROWS_AS((void)gauss_rule(0), std::invalid_argument);
    CHECK_THROWS_AS((void)gauss_rule(65), std::invalid_argument);
}

TEST_CASE("gauss rule integrates degree 2n-1 exactly") {
    for (int n = 1; n <= 8; ++n) {
        const GaussRule& rule = gauss_rule(n);
        for (int k = 0; k <= 2 * n - 1; ++k) {
            double got = 0.0;
            for (int i = 0; i < n; ++i) got += rule.weights[i] * std::pow(rule.nodes[i], k);
            const double exact = (k % 2 == 1) ? 0.0 : 2.0 / (k + 1);
            CHECK(got == doctest::Approx(exact).epsilon(1e-13).scale(1.0));
        }
    }
}

TEST_CASE("adaptive integrator") {
    CHECK(integrate_adaptive([](double x) { return std::sin(x); }, 0.0, M_PI) ==
          doctest::Approx(2.0).epsilon(1e-12));
    CHECK(integrate_adaptive([](double x) { return std::exp(x); }, 0.0, 1.0) ==
          doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-12));
    // reversed bounds flip the sign
    CHECK(integrate_adaptive([](double x) { return std::sin(x); }, M_PI, 0.0) ==
          doctest::Approx(-2.0).epsilon(1e-12));
    // mildly kinked integrand, still fine under bisection
    CHECK(integrate_adaptive([](double x) { return std::sqrt(std::abs(x)); }, -1.0, 1.0,
                             1e-11) == doctest::Approx(4.0 / 3.0).epsilon(1e-9));
    CHECK(integrate_adaptive([](double) { return 0.0; }, 0.0, 1.0) == 0.0);
}

TEST_CASE("vector integrator matches componentwise") {
    Eigen::VectorXd got = integrate_adaptive_vec(
        3,
        [](double t, Eigen::Ref<Eigen::VectorXd> out) {
            out[0] = 1.0;
            out[1] = t;
            out[2] = t * t;
        },
        0.0, 2.0);
    CHECK(got[0] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(got[1] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(got[2] == doctest::Approx(8.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("composite rule on a smooth periodic integrand") {
    const double got = integrate_composite(
        [](double t) { return std::cos(t) * std::cos(t); }, 0.0, 2.0 * M_PI, 0.15, 16);
    CHECK(got == doctest::Approx(M_PI).epsilon(1e-13));
    // panel splitting is exact on polynomials regardless of width
    const double lin = integrate_composite([](double t) { return 3.0 * t + 1.0; }, 0.0,
                                           1.0, 0.07, 4);
    CHECK(lin == doctest::Approx(2.5).epsilon(1e-14));
}

TEST_CASE("triangle rule is exact to degree 5") {
    const TriangleRule& rule = triangle_rule_deg5();
    double wsum = 0.0;
    for (int i = 0; i < rule.points.rows(); ++i) {
        wsum += rule.points(i, 0);
        CHECK(rule.points(i, 1) + rule.points(i, 2) + rule.points(i, 3) ==
              doctest::Approx(1.0).epsilon(1e-14));
    }
    CHECK(wsum == doctest::Approx(1.0).epsilon(1e-14));

    // Int_T x^a y^b over the reference triangle (0,0),(1,0),(0,1) equals
    // a! b! / (a+b+2)!; the rule must reproduce it for a+b <= 5.
    for (int a = 0; a <= 5; ++a) {
        for (int b = 0; a + b <= 5; ++b) {
            double got = 0.0;
            for (int i = 0; i < rule.points.rows(); ++i) {
                const double x = rule.points(i, 2);
                const double y = rule.points(i, 3);
                got += rule.points(i, 0) * std::pow(x, a) * std::pow(y, b);
            }
            got *= 0.5;  // reference area
            const double exact = factorial(a) * factorial(b) / factorial(a + b + 2);
            CHECK(got == doctest::Approx(exact).epsilon(1e-13));
        }
    }
}

} // TEST_SUITE

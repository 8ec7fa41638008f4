#include "doctest.h"
#include "oracles.hpp"
#include "robinsym/geometry.hpp"

#include <cmath>
#include <sstream>

using namespace robinsym;

namespace {

WeightedDomain make(const std::string& shape, double l, double beta = 1.0) {
    WeightedDomain d;
    d.vertices = gallery_shape(shape);
    d.l = l;
    d.beta = beta;
    validate(d);
    return d;
}

Polygon scaled(const Polygon& poly, double c) {
    Polygon out = poly;
    for (Vec2& v : out) v *= c;
    return out;
}

} // namespace

TEST_SUITE("geometry") {

TEST_CASE("square under the flat measure") {
    WeightedDomain d = make("square", 0.0);
    CHECK(weighted_area(d) == doctest::Approx(4.0).epsilon(1e-10));
    CHECK(weighted_perimeter(d) == doctest::Approx(8.0).epsilon(1e-10));
    // 8^2 / (4 pi * 4) = 4 / pi
    CHECK(isoperimetric_ratio(d) == doctest::Approx(4.0 / M_PI).epsilon(1e-8));

    SymmetrizedDisk disk = symmetrized_disk(weighted_area(d), 0.0, 1.0);
    CHECK(disk.radius == doctest::Approx(2.0 / std::sqrt(M_PI)).epsilon(1e-10));
    CHECK(disk_weighted_measure(disk.radius, 0.0) == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(disk_weighted_perimeter(disk.radius, 0.0) ==
          doctest::Approx(2.0 * M_PI * disk.radius).epsilon(1e-14));
}

TEST_CASE("square under the 1/r weight") {
    WeightedDomain d = make("square", -1.0);

    // Int_square |x|^-1 dx = 8 ln(1 + sqrt 2), by the polar secant integral
    const double exact_area = 8.0 * std::log(1.0 + std::sqrt(2.0));
    const double area = weighted_area(d);
    CHECK(area == doctest::Approx(exact_area).epsilon(2e-8));
    CHECK(area == doctest::Approx(oracle::polar_weighted_area(d.vertices, -1.0))
                      .epsilon(1e-9));

    const double per = weighted_perimeter(d);
    CHECK(per == doctest::Approx(oracle::simpson_perimeter(d.vertices, -1.0))
                     .epsilon(1e-9));
    CHECK(per == doctest::Approx(7.4999).epsilon(2e-4));

    CHECK(isoperimetric_ratio(d) == doctest::Approx(1.2697).epsilon(2e-4));

    // l = -1 makes the defining power linear: r_sharp = area / (2 pi)
    SymmetrizedDisk disk = symmetrized_disk(area, -1.0, 1.0);
    CHECK(disk.radius == doctest::Approx(area / (2.0 * M_PI)).epsilon(1e-13));
    CHECK(disk.radius == doctest::Approx(1.1222).epsilon(2e-4));
    CHECK(disk_weighted_measure(disk.radius, -1.0) == doctest::Approx(area).epsilon(1e-13));
}

TEST_CASE("area and perimeter match independent oracles across the gallery") {
    for (const char* shape : {"square", "rectangle", "ngon:64", "lshape"}) {
        for (double l : {0.0, -0.5, -1.0, -1.5}) {
            CAPTURE(shape);
            CAPTURE(l);
            WeightedDomain d = make(shape, l);
            CHECK(weighted_area(d) ==
                  doctest::Approx(oracle::polar_weighted_area(d.vertices, l)).epsilon(5e-8));
            CHECK(weighted_perimeter(d) ==
                  doctest::Approx(oracle::simpson_perimeter(d.vertices, l)).epsilon(5e-8));
        }
    }
}

TEST_CASE("isoperimetric ratio is >= 1 and tends to 1 for regular polygons") {
    for (const char* shape : {"square", "rectangle", "lshape"}) {
        for (double l : {0.0, -1.0}) {
            WeightedDomain d = make(shape, l);
            CHECK(isoperimetric_ratio(d) >= 1.0 - 1e-6);
        }
    }
    for (double l : {0.0, -1.0}) {
        double prev = 2.0;
        for (int n : {8, 32, 128, 512}) {
            WeightedDomain d = make("ngon:" + std::to_string(n), l);
            const double ratio = isoperimetric_ratio(d);
            CHECK(ratio >= 1.0 - 1e-9);
            CHECK(ratio < prev);
            prev = ratio;
        }
        CHECK(prev == doctest::Approx(1.0).epsilon(5e-5));
    }
    // the flat-measure value for the regular n-gon is known in closed form
    WeightedDomain oct = make("ngon:8", 0.0);
    CHECK(isoperimetric_ratio(oct) ==
          doctest::Approx(8.0 * std::tan(M_PI / 8.0) / M_PI).epsilon(1e-7));
}

TEST_CASE("weighted quantities scale with the right powers") {
    const Polygon base = gallery_shape("lshape");
    for (double l : {0.0, -0.5, -1.5}) {
        WeightedDomain d{base, l, 1.0, {}};
        for (double c : {0.5, 2.0}) {
            WeightedDomain dc{scaled(base, c), l, 1.0, {}};
            CHECK(weighted_area(dc) ==
                  doctest::Approx(std::pow(c, l + 2.0) * weighted_area(d)).epsilon(1e-9));
            CHECK(weighted_perimeter(dc) ==
                  doctest::Approx(std::pow(c, 0.5 * (l + 2.0)) * weighted_perimeter(d))
                      .epsilon(1e-9));
            CHECK(isoperimetric_ratio(dc) ==
                  doctest::Approx(isoperimetric_ratio(d)).epsilon(1e-8));
        }
    }
}

TEST_CASE("triangle moments agree with signed fans and plain formulas") {
    // triangles probing each dispatch branch: origin vertex, origin inside,
    // near the origin, far from it
    const std::vector<std::array<Vec2, 3>> tris = {
        {Vec2(0, 0), Vec2(1, 0), Vec2(0, 1)},
        {Vec2(-0.5, -0.4), Vec2(1, -0.3), Vec2(-0.2, 0.9)},
        {Vec2(0.05, 0.02), Vec2(1.1, 0.1), Vec2(0.3, 0.8)},
        {Vec2(3, 2), Vec2(4.5, 2.2), Vec2(3.4, 3.9)},
        {Vec2(10, -1), Vec2(11, -1), Vec2(10.5, -0.2)},
    };
    for (size_t idx = 0; idx < tris.size(); ++idx) {
        const auto& t = tris[idx];
        for (double l : {0.0, -1.0}) {
            CAPTURE(l);
            CAPTURE(idx);
            auto m = triangle_weighted_moments(t[0], t[1], t[2], l);
            // signed fan decomposition over the three edges
            Eigen::Matrix<double, 6, 1> fan = fan_weighted_moments(t[0], t[1], l) +
                                              fan_weighted_moments(t[1], t[2], l) +
                                              fan_weighted_moments(t[2], t[0], l);
            for (int k = 0; k < 6; ++k)
                CHECK(m[k] == doctest::Approx(fan[k]).epsilon(1e-8).scale(std::abs(m[0])));

            if (l == 0.0) {
                const double area =
                    0.5 * ((t[1] - t[0]).x() * (t[2] - t[0]).y() -
                           (t[1] - t[0]).y() * (t[2] - t[0]).x());
                const Vec2 centroid = (t[0] + t[1] + t[2]) / 3.0;
                CHECK(m[0] == doctest::Approx(area).epsilon(1e-11));
                CHECK(m[1] == doctest::Approx(area * centroid.x()).epsilon(1e-10).scale(area));
                CHECK(m[2] == doctest::Approx(area * centroid.y()).epsilon(1e-10).scale(area));
            }
        }
    }

    // f = |x|^-1 on the triangle with an origin vertex: Int over the fan of
    // the hypotenuse x + y = 1 is sqrt(2) ln(1 + sqrt 2)
    auto m = triangle_weighted_moments(Vec2(0, 0), Vec2(1, 0), Vec2(0, 1), -1.0);
    CHECK(m[0] == doctest::Approx(std::sqrt(2.0) * std::log(1.0 + std::sqrt(2.0)))
                      .epsilon(1e-10));
}

TEST_CASE("polygon measure and affine integrals") {
    const Polygon square = gallery_shape("square");

    CHECK(weighted_polygon_measure(square.data(), 4, 0.0) ==
          doctest::Approx(4.0).epsilon(1e-13));
    CHECK(weighted_polygon_measure(square.data(), 4, -1.0) ==
          doctest::Approx(8.0 * std::log(1.0 + std::sqrt(2.0))).epsilon(1e-8));

    // affine integrand with the flat measure, odd parts cancel on the square
    CHECK(weighted_polygon_affine_integral(square.data(), 4, 0.0, 1.0, Vec2(2, 3)) ==
          doctest::Approx(4.0).epsilon(1e-12));

    // off-center polygon: Int (c0 + 2x + 3y) over [0,1]^2 = c0 + 1 + 1.5
    const Polygon unit = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    CHECK(weighted_polygon_affine_integral(unit.data(), 4, 0.0, 0.25, Vec2(2, 3)) ==
          doctest::Approx(0.25 + 2.5).epsilon(1e-12));

    // the weighted path is linear in (c0, g) and consistent with the measure
    for (double l : {-0.5, -1.0}) {
        const Polygon tri = {{0.2, -0.1}, {1.3, 0.2}, {0.4, 1.1}};
        const double m = weighted_polygon_measure(tri.data(), 3, l);
        const double i1 = weighted_polygon_affine_integral(tri.data(), 3, l, 1.0, Vec2(0, 0));
        const double ix = weighted_polygon_affine_integral(tri.data(), 3, l, 0.0, Vec2(1, 0));
        const double iy = weighted_polygon_affine_integral(tri.data(), 3, l, 0.0, Vec2(0, 1));
        CHECK(i1 == doctest::Approx(m).epsilon(1e-10));
        CHECK(weighted_polygon_affine_integral(tri.data(), 3, l, 0.7, Vec2(-1.5, 2.5)) ==
              doctest::Approx(0.7 * i1 - 1.5 * ix + 2.5 * iy).epsilon(1e-10));
        // cross-check against the moment machinery on the same triangle
        auto mom = triangle_weighted_moments(tri[0], tri[1], tri[2], l);
        CHECK(ix == doctest::Approx(mom[1]).epsilon(1e-7));
        CHECK(iy == doctest::Approx(mom[2]).epsilon(1e-7));
    }
}

TEST_CASE("validation rejects malformed domains") {
    WeightedDomain good = make("square", 0.0);
    CHECK_NOTHROW(validate(good));

    WeightedDomain cw = good;
    std::reverse(cw.vertices.begin(), cw.vertices.end());
    CHECK_THROWS_AS(validate(cw), std::invalid_argument);

    WeightedDomain shifted = good;
    for (Vec2& v : shifted.vertices) v += Vec2(3.0, 0.0);
    CHECK_THROWS_AS(validate(shifted), std::invalid_argument);

    WeightedDomain bad_l = good;
    bad_l.l = 0.5;
    CHECK_THROWS_AS(validate(bad_l), std::invalid_argument);
    bad_l.l = -2.0;
    CHECK_THROWS_AS(validate(bad_l), std::invalid_argument);

    WeightedDomain bad_beta = good;
    bad_beta.beta = 0.0;
    CHECK_THROWS_AS(validate(bad_beta), std::invalid_argument);

    WeightedDomain dup = good;
    dup.vertices.push_back(dup.vertices.back());
    CHECK_THROWS_AS(validate(dup), std::invalid_argument);

    WeightedDomain bowtie = good;
    bowtie.vertices = {{-1, -1}, {1, 1}, {1, -1}, {-1, 1}};
    CHECK_THROWS_AS(validate(bowtie), std::invalid_argument);

    WeightedDomain negfn = good;
    negfn.beta_fn = [](const Vec2& x) { return x.x(); };
    CHECK_THROWS_AS(validate(negfn), std::invalid_argument);
}

TEST_CASE("gallery shapes and vertex parsing") {
    CHECK(gallery_shape("square").size() == 4);
    Polygon rect = gallery_shape("rectangle");
    REQUIRE(rect.size() == 4);
    CHECK(rect[2] == Vec2(1.5, 0.5));
    CHECK(gallery_shape("rectangle:2:1")[2] == Vec2(1.0, 0.5));
    CHECK(gallery_shape("ngon:6").size() == 6);
    CHECK(gallery_shape("regular-ngon:5").size() == 5);
    CHECK(gallery_shape("ngon:4:2")[0] == Vec2(2.0, 0.0));

    Polygon ell = gallery_shape("lshape");
    REQUIRE(ell.size() == 6);
    bool has_corner = false;
    for (const Vec2& v : ell) has_corner = has_corner || v == Vec2(0.25, -0.25);
    CHECK(has_corner);
    CHECK(point_in_polygon(ell, Vec2(0, 0)));
    CHECK(!point_in_polygon(ell, Vec2(1.0, -1.0)));

    CHECK_THROWS_AS(gallery_shape("pentagon"), std::invalid_argument);
    CHECK_THROWS_AS(gallery_shape("ngon:2"), std::invalid_argument);
    CHECK_THROWS_AS(gallery_shape("rectangle:-1:2"), std::invalid_argument);

    std::istringstream in("1 0\n0 1 # top\n# comment line\n-1 0\n0 -1\n");
    Polygon diamond = read_vertices(in);
    REQUIRE(diamond.size() == 4);
    CHECK(diamond[1] == Vec2(0.0, 1.0));
    std::istringstream short_in("1 0\n0 1\n");
    CHECK_THROWS_AS(read_vertices(short_in), std::invalid_argument);
    CHECK_THROWS_AS(read_vertices_file("/nonexistent/vertices.txt"), std::invalid_argument);
}

TEST_CASE("basic polygon predicates") {
    const Polygon square = gallery_shape("square");
    CHECK(polygon_area(square) == doctest::Approx(4.0));
    CHECK(polygon_diameter(square) == doctest::Approx(2.0 * std::sqrt(2.0)));
    CHECK(point_in_polygon(square, Vec2(0.9, -0.9)));
    CHECK(!point_in_polygon(square, Vec2(1.1, 0.0)));
    CHECK(distance_to_boundary(square, Vec2(0, 0)) == doctest::Approx(1.0));
    CHECK(distance_to_boundary(square, Vec2(0.5, 0.0)) == doctest::Approx(0.5));
}

} // TEST_SUITE

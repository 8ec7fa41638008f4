#include "doctest.h"
#include "robinsym/mesh.hpp"

#include <cmath>
#include <map>
#include <set>
#include <sstream>

using namespace robinsym;

namespace {

WeightedDomain make(const std::string& shape, double l = 0.0) {
    WeightedDomain d;
    d.vertices = gallery_shape(shape);
    d.l = l;
    d.beta = 1.0;
    validate(d);
    return d;
}

double edge_len(const TriangleMesh& m, int a, int b) {
    return (m.nodes[a] - m.nodes[b]).norm();
}

double max_edge(const TriangleMesh& m) {
    double longest = 0.0;
    for (const auto& t : m.triangles)
        for (int e = 0; e < 3; ++e)
            longest = std::max(longest, edge_len(m, t[e], t[(e + 1) % 3]));
    return longest;
}

std::map<std::pair<int, int>, int> edge_use_count(const TriangleMesh& m) {
    std::map<std::pair<int, int>, int> count;
    for (const auto& t : m.triangles)
        for (int e = 0; e < 3; ++e) {
            int a = t[e], b = t[(e + 1) % 3];
            count[{std::min(a, b), std::max(a, b)}] += 1;
        }
    return count;
}

} // namespace

TEST_SUITE("mesh") {

TEST_CASE("square mesh is valid and sized") {
    WeightedDomain d = make("square");
    TriangleMesh m = triangulate(d, 0.5);

    CHECK(m.triangles.size() >= 32);
    CHECK(m.h == 0.5);
    for (size_t t = 0; t < m.triangles.size(); ++t) CHECK(m.triangle_area((int)t) > 0.0);
    CHECK(max_edge(m) <= 0.5 * (1.0 + 1e-12));

    // the origin is a deliberate mesh node and the only node there
    REQUIRE(m.origin_node >= 0);
    CHECK(m.nodes[m.origin_node].norm() == 0.0);
    for (int i = 0; i < (int)m.nodes.size(); ++i)
        if (i != m.origin_node) CHECK(m.nodes[i].norm() > 1e-12);

    CHECK(m.total_area() == doctest::Approx(4.0).epsilon(1e-13));
}

TEST_CASE("triangle areas partition the polygon area") {
    for (const char* shape : {"ngon:64", "lshape"}) {
        WeightedDomain d = make(shape);
        TriangleMesh m = triangulate(d, 0.2);
        CHECK(m.total_area() ==
              doctest::Approx(polygon_area(d.vertices)).epsilon(1e-12));
    }
}

TEST_CASE("mesh is conforming and boundary edges cover the polygon") {
    WeightedDomain d = make("lshape", -1.0);
    TriangleMesh m = triangulate(d, 0.25);

    auto count = edge_use_count(m);
    std::set<std::pair<int, int>> tagged;
    for (const auto& be : m.boundary_edges)
        tagged.insert({std::min(be.a, be.b), std::max(be.a, be.b)});

    for (const auto& [edge, uses] : count) {
        if (tagged.count(edge)) {
            CHECK(uses == 1);
        } else {
            CHECK(uses == 2);
        }
    }
    // every tagged edge is used by a triangle
    for (const auto& e : tagged) CHECK(count.count(e) == 1);

    const Polygon& poly = d.vertices;
    const int np = (int)poly.size();
    double tagged_len = 0.0, poly_len = 0.0;
    for (int i = 0; i < np; ++i) poly_len += (poly[(i + 1) % np] - poly[i]).norm();
    for (const auto& be : m.boundary_edges) {
        REQUIRE(be.polygon_edge >= 0);
        REQUIRE(be.polygon_edge < np);
        const Vec2 pa = poly[be.polygon_edge];
        const Vec2 pb = poly[(be.polygon_edge + 1) % np];
        const Vec2 dir = (pb - pa).normalized();
        // both endpoints sit on the parent segment, orientation matches
        for (int node : {be.a, be.b}) {
            const Vec2 rel = m.nodes[node] - pa;
            CHECK(std::abs(dir.x() * rel.y() - dir.y() * rel.x()) < 1e-10);
            const double along = rel.dot(dir);
            CHECK(along > -1e-10);
            CHECK(along < (pb - pa).norm() + 1e-10);
        }
        CHECK((m.nodes[be.b] - m.nodes[be.a]).dot(dir) > 0.0);
        tagged_len += edge_len(m, be.a, be.b);
    }
    CHECK(tagged_len == doctest::Approx(poly_len).epsilon(1e-12));
}

TEST_CASE("minimum angle stays above 15 degrees") {
    for (const char* shape : {"square", "lshape", "ngon:48"}) {
        WeightedDomain d = make(shape);
        TriangleMesh m = triangulate(d, 0.3);
        CAPTURE(shape);
        CHECK(mesh_min_angle_deg(m) >= 15.0);
        TriangleMesh f = refine(m);
        CHECK(mesh_min_angle_deg(f) >= 15.0);
    }
}

TEST_CASE("grading toward the origin") {
    WeightedDomain d = make("lshape", -1.0);
    const double h = 0.25;
    TriangleMesh m = triangulate(d, h);
    const double diam = polygon_diameter(d.vertices);

    for (const auto& t : m.triangles) {
        const double r = std::min({m.nodes[t[0]].norm(), m.nodes[t[1]].norm(),
                                   m.nodes[t[2]].norm()});
        const double target = std::max(h * std::sqrt(r / diam), h / 32.0);
        double longest = 0.0;
        for (int e = 0; e < 3; ++e)
            longest = std::max(longest, edge_len(m, t[e], t[(e + 1) % 3]));
        CHECK(longest <= target * (1.0 + 1e-12));
    }
    CHECK(mesh_min_angle_deg(m) >= 15.0);
}

TEST_CASE("halving h halves the max edge within factor 1.5") {
    WeightedDomain d = make("square");
    const double coarse = max_edge(triangulate(d, 0.4));
    const double fine = max_edge(triangulate(d, 0.2));
    CHECK(coarse / fine >= 2.0 / 1.5);
    CHECK(coarse / fine <= 2.0 * 1.5);
}

TEST_CASE("red refinement: counts, tags, geometry") {
    WeightedDomain d = make("ngon:24");
    TriangleMesh m = triangulate(d, 0.35);
    TriangleMesh f = refine(m);

    CHECK(f.triangles.size() == 4 * m.triangles.size());
    CHECK(f.boundary_edges.size() == 2 * m.boundary_edges.size());
    CHECK(f.total_area() == doctest::Approx(m.total_area()).epsilon(1e-13));

    // parent nodes keep their indices and coordinates
    REQUIRE(f.nodes.size() > m.nodes.size());
    for (size_t i = 0; i < m.nodes.size(); ++i) CHECK(f.nodes[i] == m.nodes[i]);
    CHECK(f.origin_node == m.origin_node);

    // children are congruent: the worst angle is unchanged
    CHECK(mesh_min_angle_deg(f) == doctest::Approx(mesh_min_angle_deg(m)).epsilon(1e-9));

    // boundary tags survive
    const int np = (int)d.vertices.size();
    for (const auto& be : f.boundary_edges) {
        CHECK(be.polygon_edge >= 0);
        CHECK(be.polygon_edge < np);
    }

    // refinement composes: max edge halves exactly
    CHECK(max_edge(f) == doctest::Approx(0.5 * max_edge(m)).epsilon(1e-13));
}

TEST_CASE("h out of range is rejected") {
    WeightedDomain d = make("square");
    CHECK_THROWS_AS(triangulate(d, 3.0), std::invalid_argument);  // min edge is 2
    CHECK_THROWS_AS(triangulate(d, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(triangulate(d, -0.1), std::invalid_argument);
}

TEST_CASE("mesh dump has the three sections") {
    WeightedDomain d = make("square");
    TriangleMesh m = triangulate(d, 0.5);
    std::ostringstream out;
    write_mesh(m, out);
    const std::string text = out.str();
    CHECK(text.find("nodes") != std::string::npos);
    CHECK(text.find("triangles") != std::string::npos);
    CHECK(text.find("boundary") != std::string::npos);
}

} // TEST_SUITE

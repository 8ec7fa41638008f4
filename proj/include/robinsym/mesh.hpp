// Conforming triangulations of weighted domains: graded Delaunay-refined
// meshes built from an ear-clipped start, and uniform red refinement.
#pragma once

#include "robinsym/geometry.hpp"

#include <array>
#include <iosfwd>

namespace robinsym {

struct BoundaryEdge {
    int a = -1, b = -1;     // oriented with the polygon (domain on the left)
    int polygon_edge = -1;  // parent edge index in the input polygon
};

struct TriangleMesh {
    std::vector<Vec2> nodes;
    std::vector<std::array<int, 3>> triangles;  // CCW vertex triples
    std::vector<BoundaryEdge> boundary_edges;
    double h = 0.0;
    int origin_node = -1;

    double triangle_area(int t) const;
    double total_area() const;
};

// Graded mesh of the polygon: the origin is force-inserted as an interior
// node, then Delaunay refinement (circumcenter insertion with boundary
// midpoint fallback) runs until every triangle at distance r from the
// origin has diameter <= max(h (r/diam)^(1/2), h/32) and min angle >= 15
// deg.  Pre: 0 < h <= diameter / 2; polygon edges shorter than h stay as
// given.
TriangleMesh triangulate(const WeightedDomain& domain, double h);

// Red refinement: every triangle splits into four congruent children,
// boundary tags inherited, node indices of the parent preserved.
TriangleMesh refine(const TriangleMesh& mesh);

double mesh_min_angle_deg(const TriangleMesh& mesh);

// Plain-text dump with "nodes", "triangles", "boundary" sections.
void write_mesh(const TriangleMesh& mesh, std::ostream& out);

} // namespace robinsym

// Weighted planar domains: polygons carrying the |x|^l measure and a Robin
// parameter, their weighted area/perimeter, and the equal-measure disk.
#pragma once

#include <Eigen/Dense>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace robinsym {

using Vec2 = Eigen::Vector2d;
using Polygon = std::vector<Vec2>;

// Pointwise Robin coefficient beta(x) on the boundary; empty means constant.
using BetaFn = std::function<double(const Vec2&)>;

// A simple CCW polygon containing the origin strictly in its interior,
// weighted by |x|^l with l in (-2, 0], with Robin parameter beta > 0.
struct WeightedDomain {
    Polygon vertices;
    double l = 0.0;
    double beta = 1.0;
    BetaFn beta_fn;  // optional absolute beta(x), must stay >= some c > 0
};

// Disk centered at the origin with the same weighted measure as a domain.
struct SymmetrizedDisk {
    double radius = 0.0;
    double l = 0.0;
    double beta = 1.0;
    double weighted_measure = 0.0;
};

// Throws std::invalid_argument when a domain violates its invariants
// (non-simple polygon, wrong orientation, origin not strictly inside,
// l outside (-2, 0], beta <= 0).
void validate(const WeightedDomain& domain);

double polygon_area(const Polygon& poly);               // signed, CCW > 0
double polygon_diameter(const Polygon& poly);
bool point_in_polygon(const Polygon& poly, const Vec2& p);
double distance_to_boundary(const Polygon& poly, const Vec2& p);

// Signed weighted area of the fan triangle (origin, a, b):
//   Int r^l dx = cross(a,b)/(l+2) Int_0^1 |a + t(b-a)|^l dt
// with the radial part exact and the chord part adaptive Gauss.  The chord
// parametrization stays well conditioned when (origin, a, b) is a sliver.
double fan_weighted_area(const Vec2& a, const Vec2& b, double l,
                         double rel_tol = 1e-10);

// Moments of the |x|^l measure over the fan triangle (origin, a, b):
//   m(0) = Int r^l,  m(1..2) = Int x r^l,  m(3..5) = Int (xx, xy, yy) r^l.
// Radial integrals are closed-form; the chord sweep is adaptive Gauss.
Eigen::Matrix<double, 6, 1> fan_weighted_moments(const Vec2& a, const Vec2& b,
                                                 double l,
                                                 double rel_tol = 1e-12);

// Same moments over an arbitrary triangle (p0, p1, p2), CCW.  Dispatches
// between the signed origin fan (exact radially, used at or near the
// origin) and a degree-5 rule with ratio-driven subdivision away from it.
Eigen::Matrix<double, 6, 1> triangle_weighted_moments(const Vec2& p0,
                                                      const Vec2& p1,
                                                      const Vec2& p2,
                                                      double l);

// Weighted measure of a simple polygon by the signed origin fan with fixed
// composite chord panels.  Valid wherever the polygon sits relative to
// the origin; this is the hot path used by level-set clipping.
double weighted_polygon_measure(const Vec2* poly, int n, double l);

// Int (c0 + g . x) |x|^l dx over a simple polygon, same fan quadrature as
// weighted_polygon_measure so the two stay mutually consistent.
double weighted_polygon_affine_integral(const Vec2* poly, int n, double l,
                                        double c0, const Vec2& g);

// |Omega|_l by the signed origin fan over the boundary edges, relative
// error <= 1e-8.
double weighted_area(const WeightedDomain& domain);

// P_{l/2}(Omega) = Int_boundary |x|^(l/2) ds, adaptive per edge.
double weighted_perimeter(const WeightedDomain& domain);

// Disk with |disk|_l = measure: radius = ((l+2) measure / (2 pi))^(1/(l+2)).
SymmetrizedDisk symmetrized_disk(double measure, double l, double beta);

double disk_weighted_measure(double radius, double l);
double disk_weighted_perimeter(double radius, double l);

// P^2 / (2 pi (l+2) |Omega|_l); >= 1 up to quadrature noise.
double isoperimetric_ratio(const WeightedDomain& domain);

// Named generators: "square", "rectangle[:a:b]", "ngon:n[:r]"
// ("regular-ngon" accepted), "lshape".  Tokens split on ':' or spaces.
Polygon gallery_shape(const std::string& spec);

// Plain text, one "x y" pair per line; '#' starts a comment.
Polygon read_vertices(std::istream& in);
Polygon read_vertices_file(const std::string& path);

} // namespace robinsym

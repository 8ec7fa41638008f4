#include "robinsym/geometry.hpp"
#include "robinsym/quadrature.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace robinsym {

namespace {

double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

// strict segment intersection test for the simplicity check
bool segments_cross(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
    auto orient = [](const Vec2& p, const Vec2& q, const Vec2& r) {
        return cross2(q - p, r - p);
    };
    const double o1 = orient(a, b, c);
    const double o2 = orient(a, b, d);
    const double o3 = orient(c, d, a);
    const double o4 = orient(c, d, b);
    return ((o1 > 0) != (o2 > 0)) && ((o3 > 0) != (o4 > 0)) &&
           o1 != 0 && o2 != 0 && o3 != 0 && o4 != 0;
}

double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
    const Vec2 ab = b - a;
    const double t = std::clamp(ab.dot(p - a) / ab.squaredNorm(), 0.0, 1.0);
    return (a + t * ab - p).norm();
}

// |a + t e|^l with a floor that keeps 0^l from producing an infinity when
// the chord grazes the origin exactly
double chord_weight(const Vec2& a, const Vec2& e, double t, double l) {
    const double q = (a + t * e).squaredNorm();
    return std::pow(std::max(q, 1e-300), 0.5 * l);
}

// Int_0^1 f(t) dt with a panel boundary at the chord's closest approach to
// the origin, so no Gauss node can land on the near-singular minimum
double chord_composite(const std::function<double(double)>& f, const Vec2& a,
                       const Vec2& e) {
    const double tstar = -a.dot(e) / e.squaredNorm();
    if (tstar > 0.01 && tstar < 0.99)
        return integrate_composite(f, 0.0, tstar, 0.5, 16) +
               integrate_composite(f, tstar, 1.0, 0.5, 16);
    return integrate_composite(f, 0.0, 1.0, 0.5, 16);
}

} // namespace

double polygon_area(const Polygon& poly) {
    double s = 0.0;
    const int n = (int)poly.size();
    for (int i = 0; i < n; ++i) s += cross2(poly[i], poly[(i + 1) % n]);
    return 0.5 * s;
}

double polygon_diameter(const Polygon& poly) {
    double d = 0.0;
    for (size_t i = 0; i < poly.size(); ++i)
        for (size_t j = i + 1; j < poly.size(); ++j)
            d = std::max(d, (poly[i] - poly[j]).norm());
    return d;
}

bool point_in_polygon(const Polygon& poly, const Vec2& p) {
    bool inside = false;
    const int n = (int)poly.size();
    for (int i = 0, j = n - 1; i < n; j = i++) {
        const Vec2& a = poly[j];
        const Vec2& b = poly[i];
        if ((b.y() > p.y()) != (a.y() > p.y())) {
            const double xint = b.x() + (p.y() - b.y()) * (a.x() - b.x()) / (a.y() - b.y());
            if (p.x() < xint) inside = !inside;
        }
    }
    return inside;
}

double distance_to_boundary(const Polygon& poly, const Vec2& p) {
    double d = std::numeric_limits<double>::max();
    const int n = (int)poly.size();
    for (int i = 0; i < n; ++i)
        d = std::min(d, point_segment_distance(p, poly[i], poly[(i + 1) % n]));
    return d;
}

void validate(const WeightedDomain& domain) {
    const Polygon& v = domain.vertices;
    if (v.size() < 3) throw std::invalid_argument("domain: fewer than 3 vertices");
    if (!(domain.l > -2.0 && domain.l <= 0.0))
        throw std::invalid_argument("domain: l must lie in (-2, 0]");
    if (!(domain.beta > 0.0)) throw std::invalid_argument("domain: beta must be positive");

    const double area = polygon_area(v);
    const double scale = polygon_diameter(v);
    if (!(area > 1e-14 * scale * scale))
        throw std::invalid_argument(area < 0 ? "domain: vertices must be counterclockwise"
                                             : "domain: degenerate polygon");
    const int n = (int)v.size();
    for (int i = 0; i < n; ++i) {
        if ((v[(i + 1) % n] - v[i]).norm() < 1e-14 * scale)
            throw std::invalid_argument("domain: repeated vertex");
        for (int j = i + 1; j < n; ++j) {
            if (j == i || (j + 1) % n == i || (i + 1) % n == j) continue;
            if (segments_cross(v[i], v[(i + 1) % n], v[j], v[(j + 1) % n]))
                throw std::invalid_argument("domain: polygon is self-intersecting");
        }
    }
    if (!point_in_polygon(v, Vec2::Zero()) ||
        distance_to_boundary(v, Vec2::Zero()) < 1e-12 * scale)
        throw std::invalid_argument("domain: origin must be strictly inside");
    if (domain.beta_fn) {
        // spot check positivity on the boundary
        for (int i = 0; i < n; ++i) {
            for (double t : {0.0, 0.5}) {
                const Vec2 x = v[i] + t * (v[(i + 1) % n] - v[i]);
                if (!(domain.beta_fn(x) > 0.0))
                    throw std::invalid_argument("domain: beta_fn not positive on boundary");
            }
        }
    }
}

double fan_weighted_area(const Vec2& a, const Vec2& b, double l, double rel_tol) {
    const double cr = cross2(a, b);
    if (cr == 0.0) return 0.0;
    const Vec2 e = b - a;
    auto g = [&](double t) { return chord_weight(a, e, t, l); };
    return cr / (l + 2.0) * integrate_adaptive(g, 0.0, 1.0, rel_tol);
}

Eigen::Matrix<double, 6, 1> fan_weighted_moments(const Vec2& a, const Vec2& b,
                                                 double l, double rel_tol) {
    Eigen::Matrix<double, 6, 1> zero = Eigen::Matrix<double, 6, 1>::Zero();
    const double cr = cross2(a, b);
    if (cr == 0.0) return zero;
    const Vec2 e = b - a;
    auto f = [&](double t, Eigen::Ref<Eigen::VectorXd> out) {
        const Vec2 c = a + t * e;
        const double w = std::pow(std::max(c.squaredNorm(), 1e-300), 0.5 * l);
        out[0] = w;
        out[1] = w * c.x();
        out[2] = w * c.y();
        out[3] = w * c.x() * c.x();
        out[4] = w * c.x() * c.y();
        out[5] = w * c.y() * c.y();
    };
    Eigen::VectorXd m = integrate_adaptive_vec(6, f, 0.0, 1.0, rel_tol);
    m[0] *= cr / (l + 2.0);
    m.segment<2>(1) *= cr / (l + 3.0);
    m.segment<3>(3) *= cr / (l + 4.0);
    return m;
}

namespace {

// degree-5 rule with recursive subdivision, for triangles away from the origin
void far_triangle_moments(const Vec2& p0, const Vec2& p1, const Vec2& p2,
                          double l, int depth, Eigen::Matrix<double, 6, 1>& acc) {
    const double dmax = std::max({p0.norm(), p1.norm(), p2.norm()});
    double dmin = std::min({point_segment_distance(Vec2::Zero(), p0, p1),
                            point_segment_distance(Vec2::Zero(), p1, p2),
                            point_segment_distance(Vec2::Zero(), p2, p0)});
    if (depth > 0 && dmax > 1.4 * dmin) {
        const Vec2 m01 = 0.5 * (p0 + p1), m12 = 0.5 * (p1 + p2), m20 = 0.5 * (p2 + p0);
        far_triangle_moments(p0, m01, m20, l, depth - 1, acc);
        far_triangle_moments(m01, p1, m12, l, depth - 1, acc);
        far_triangle_moments(m20, m12, p2, l, depth - 1, acc);
        far_triangle_moments(m01, m12, m20, l, depth - 1, acc);
        return;
    }
    const double area = 0.5 * cross2(p1 - p0, p2 - p0);
    const TriangleRule& rule = triangle_rule_deg5();
    for (int q = 0; q < rule.points.rows(); ++q) {
        const double w = rule.points(q, 0) * area;
        const Vec2 x = rule.points(q, 1) * p0 + rule.points(q, 2) * p1 + rule.points(q, 3) * p2;
        const double weight = w * std::pow(x.norm(), l);
        acc[0] += weight;
        acc[1] += weight * x.x();
        acc[2] += weight * x.y();
        acc[3] += weight * x.x() * x.x();
        acc[4] += weight * x.x() * x.y();
        acc[5] += weight * x.y() * x.y();
    }
}

} // namespace

Eigen::Matrix<double, 6, 1> triangle_weighted_moments(const Vec2& p0, const Vec2& p1,
                                                      const Vec2& p2, double l) {
    Eigen::Matrix<double, 6, 1> m = Eigen::Matrix<double, 6, 1>::Zero();
    if (l == 0.0) {
        // unweighted: the rule is exact, no subdivision needed
        const double area = 0.5 * cross2(p1 - p0, p2 - p0);
        const TriangleRule& rule = triangle_rule_deg5();
        for (int q = 0; q < rule.points.rows(); ++q) {
            const double w = rule.points(q, 0) * area;
            const Vec2 x = rule.points(q, 1) * p0 + rule.points(q, 2) * p1 + rule.points(q, 3) * p2;
            m[0] += w;
            m[1] += w * x.x();
            m[2] += w * x.y();
            m[3] += w * x.x() * x.x();
            m[4] += w * x.x() * x.y();
            m[5] += w * x.y() * x.y();
        }
        return m;
    }
    const double diam = std::max({(p1 - p0).norm(), (p2 - p1).norm(), (p0 - p2).norm()});
    const double dist = std::min({point_segment_distance(Vec2::Zero(), p0, p1),
                                  point_segment_distance(Vec2::Zero(), p1, p2),
                                  point_segment_distance(Vec2::Zero(), p2, p0)});
    const bool contains_origin = cross2(p1 - p0, -p0) >= 0 &&
                                 cross2(p2 - p1, -p1) >= 0 &&
                                 cross2(p0 - p2, -p2) >= 0;
    const double eps = 1e-13 * std::max(diam, 1e-30);
    if (p0.norm() <= eps || p1.norm() <= eps || p2.norm() <= eps ||
        contains_origin || dist <= 4.0 * diam) {
        // signed origin fan: radial part exact, cancellation harmless this close
        m += fan_weighted_moments(p0, p1, l);
        m += fan_weighted_moments(p1, p2, l);
        m += fan_weighted_moments(p2, p0, l);
        return m;
    }
    far_triangle_moments(p0, p1, p2, l, 10, m);
    return m;
}

double weighted_polygon_measure(const Vec2* poly, int n, double l) {
    if (l == 0.0) {
        double s = 0.0;
        for (int i = 0; i < n; ++i) s += cross2(poly[i], poly[(i + 1) % n]);
        return 0.5 * s;
    }
    // Signed origin fan with fixed composite panels.  For a simple CCW
    // polygon the fan terms sum to the winding-number integral, i.e. the
    // weighted measure, wherever the origin sits.  Each edge contributes
    // cross(a,b)/(l+2) Int_0^1 |a + t(b-a)|^l dt: the chord parametrization
    // keeps the integrand bounded for clipped polygons whose edges point at
    // the origin, where an angular sweep would divide by a vanishing cosine.
    double sum = 0.0;
    const double p = l + 2.0;
    for (int i = 0; i < n; ++i) {
        const Vec2& a = poly[i];
        const Vec2& b = poly[(i + 1) % n];
        const double cr = cross2(a, b);
        if (cr == 0.0) continue;
        const Vec2 e = b - a;
        auto g = [&](double t) { return chord_weight(a, e, t, l); };
        sum += cr / p * chord_composite(g, a, e);
    }
    return sum;
}

double weighted_polygon_affine_integral(const Vec2* poly, int n, double l,
                                        double c0, const Vec2& g) {
    if (l == 0.0) {
        // shoelace accumulators give the area and first moments exactly
        double a2 = 0.0, mx = 0.0, my = 0.0;
        for (int i = 0; i < n; ++i) {
            const Vec2& u = poly[i];
            const Vec2& v = poly[(i + 1) % n];
            const double cr = cross2(u, v);
            a2 += cr;
            mx += cr * (u.x() + v.x());
            my += cr * (u.y() + v.y());
        }
        return c0 * 0.5 * a2 + (g.x() * mx + g.y() * my) / 6.0;
    }
    double sum = 0.0;
    const double p = l + 2.0;
    for (int i = 0; i < n; ++i) {
        const Vec2& a = poly[i];
        const Vec2& b = poly[(i + 1) % n];
        const double cr = cross2(a, b);
        if (cr == 0.0) continue;
        const Vec2 e = b - a;
        auto fn = [&](double t) {
            const Vec2 c = a + t * e;
            const double w = std::pow(std::max(c.squaredNorm(), 1e-300), 0.5 * l);
            return w * (c0 / p + g.dot(c) / (p + 1.0));
        };
        sum += cr * chord_composite(fn, a, e);
    }
    return sum;
}

double weighted_area(const WeightedDomain& domain) {
    double sum = 0.0;
    const int n = (int)domain.vertices.size();
    for (int i = 0; i < n; ++i)
        sum += fan_weighted_area(domain.vertices[i], domain.vertices[(i + 1) % n],
                                 domain.l, 1e-10);
    return sum;
}

double weighted_perimeter(const WeightedDomain& domain) {
    double sum = 0.0;
    const int n = (int)domain.vertices.size();
    for (int i = 0; i < n; ++i) {
        const Vec2 a = domain.vertices[i];
        const Vec2 b = domain.vertices[(i + 1) % n];
        const double len = (b - a).norm();
        auto g = [&](double t) { return std::pow((a + t * (b - a)).norm(), 0.5 * domain.l); };
        sum += len * integrate_adaptive(g, 0.0, 1.0, 1e-10, 7);
    }
    return sum;
}

SymmetrizedDisk symmetrized_disk(double measure, double l, double beta) {
    if (!(measure > 0.0)) throw std::invalid_argument("symmetrized_disk: measure must be positive");
    if (!(l > -2.0 && l <= 0.0)) throw std::invalid_argument("symmetrized_disk: l out of range");
    SymmetrizedDisk d;
    d.l = l;
    d.beta = beta;
    d.radius = std::pow((l + 2.0) * measure / (2.0 * M_PI), 1.0 / (l + 2.0));
    d.weighted_measure = measure;
    return d;
}

double disk_weighted_measure(double radius, double l) {
    return 2.0 * M_PI * std::pow(radius, l + 2.0) / (l + 2.0);
}

double disk_weighted_perimeter(double radius, double l) {
    return 2.0 * M_PI * std::pow(radius, 0.5 * (l + 2.0));
}

double isoperimetric_ratio(const WeightedDomain& domain) {
    const double per = weighted_perimeter(domain);
    const double area = weighted_area(domain);
    return per * per / (2.0 * M_PI * (domain.l + 2.0) * area);
}

Polygon gallery_shape(const std::string& spec) {
    std::vector<std::string> tok;
    std::string cur;
    for (char ch : spec) {
        if (ch == ':' || ch == ' ' || ch == '\t') {
            if (!cur.empty()) tok.push_back(cur), cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    if (!cur.empty()) tok.push_back(cur);
    if (tok.empty()) throw std::invalid_argument("gallery_shape: empty spec");
    const std::string& name = tok[0];

    if (name == "square") {
        return {{-1, -1}, {1, -1}, {1, 1}, {-1, 1}};
    }
    if (name == "rectangle") {
        const double a = tok.size() > 1 ? std::stod(tok[1]) : 3.0;
        const double b = tok.size() > 2 ? std::stod(tok[2]) : 1.0;
        if (!(a > 0 && b > 0)) throw std::invalid_argument("gallery_shape: bad rectangle dims");
        return {{-a / 2, -b / 2}, {a / 2, -b / 2}, {a / 2, b / 2}, {-a / 2, b / 2}};
    }
    if (name == "ngon" || name == "regular-ngon") {
        const int n = tok.size() > 1 ? std::stoi(tok[1]) : 64;
        const double r = tok.size() > 2 ? std::stod(tok[2]) : 1.0;
        if (n < 3 || !(r > 0)) throw std::invalid_argument("gallery_shape: bad ngon spec");
        Polygon p(n);
        for (int i = 0; i < n; ++i) {
            const double th = 2.0 * M_PI * i / n;
            p[i] = Vec2(r * std::cos(th), r * std::sin(th));
        }
        return p;
    }
    if (name == "lshape") {
        // square minus a quadrant, shifted so the origin sits inside the
        // remaining arm, reentrant corner at (0.25, -0.25)
        const Vec2 off(0.25, -0.25);
        Polygon p = {{-1, -1}, {0, -1}, {0, 0}, {1, 0}, {1, 1}, {-1, 1}};
        for (Vec2& v : p) v += off;
        return p;
    }
    throw std::invalid_argument("gallery_shape: unknown shape '" + name + "'");
}

Polygon read_vertices(std::istream& in) {
    Polygon poly;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        double x, y;
        if (ls >> x >> y) poly.emplace_back(x, y);
    }
    if (poly.size() < 3) throw std::invalid_argument("read_vertices: fewer than 3 vertices");
    return poly;
}

Polygon read_vertices_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("read_vertices: cannot open " + path);
    return read_vertices(in);
}

} // namespace robinsym

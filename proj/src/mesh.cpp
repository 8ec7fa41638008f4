#include "robinsym/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <stdexcept>

namespace robinsym {

namespace {

double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

using EdgeKey = std::pair<int, int>;
EdgeKey ekey(int a, int b) { return a < b ? EdgeKey{a, b} : EdgeKey{b, a}; }

bool point_in_triangle_closed(const Vec2& p, const Vec2& a, const Vec2& b,
                              const Vec2& c, double eps) {
    return cross2(b - a, p - a) >= -eps && cross2(c - b, p - b) >= -eps &&
           cross2(a - c, p - c) >= -eps;
}

double tri_min_angle(const Vec2& a, const Vec2& b, const Vec2& c) {
    const double la = (b - c).norm(), lb = (c - a).norm(), lc = (a - b).norm();
    const double area2 = std::abs(cross2(b - a, c - a));
    // sin of each angle from area; the smallest angle is opposite the
    // shortest edge, and all angles here are < pi/2 or handled via asin
    auto ang = [&](double opp, double s1, double s2) {
        const double s = area2 / (s1 * s2);
        double alpha = std::asin(std::clamp(s, -1.0, 1.0));
        if (opp * opp > s1 * s1 + s2 * s2) alpha = M_PI - alpha;  // obtuse
        return alpha;
    };
    return std::min({ang(la, lb, lc), ang(lb, lc, la), ang(lc, la, lb)});
}

// > 0 when d lies strictly inside the circumcircle of the CCW triangle (a, b, c)
double incircle_det(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
    const double ax = a.x() - d.x(), ay = a.y() - d.y();
    const double bx = b.x() - d.x(), by = b.y() - d.y();
    const double cx = c.x() - d.x(), cy = c.y() - d.y();
    const double a2 = ax * ax + ay * ay;
    const double b2 = bx * bx + by * by;
    const double c2 = cx * cx + cy * cy;
    return ax * (by * c2 - cy * b2) - ay * (bx * c2 - cx * b2) + a2 * (bx * cy - cx * by);
}

// ───────────────────────── ear clipping ─────────────────────────

std::vector<std::array<int, 3>> ear_clip(const Polygon& v) {
    const int n = (int)v.size();
    const double scale = polygon_diameter(v);
    const double eps_area = 1e-14 * scale * scale;

    std::vector<int> prev(n), next(n);
    for (int i = 0; i < n; ++i) {
        prev[i] = (i + n - 1) % n;
        next[i] = (i + 1) % n;
    }
    std::vector<char> alive(n, 1);
    auto convex = [&](int i) {
        return cross2(v[i] - v[prev[i]], v[next[i]] - v[i]) > eps_area;
    };

    std::vector<std::array<int, 3>> out;
    int active = n;
    int i = 0;
    long guard = (long)n * n + 16;
    while (active > 3 && guard-- > 0) {
        if (convex(i)) {
            const int a = prev[i], c = next[i];
            bool ear = true;
            // only reflex vertices can block an ear
            for (int j = next[c]; j != a; j = next[j]) {
                if (!convex(j) &&
                    point_in_triangle_closed(v[j], v[a], v[i], v[c], eps_area)) {
                    ear = false;
                    break;
                }
            }
            if (ear) {
                out.push_back({a, i, c});
                alive[i] = 0;
                next[a] = c;
                prev[c] = a;
                --active;
                i = a;
                continue;
            }
        }
        i = next[i];
    }
    if (active != 3) throw std::invalid_argument("triangulate: degenerate polygon");
    const int b = next[i], c = next[b];
    if (cross2(v[b] - v[i], v[c] - v[i]) <= eps_area)
        throw std::invalid_argument("triangulate: degenerate polygon");
    out.push_back({i, b, c});
    return out;
}

// ───────────────────────── incremental builder ─────────────────────────
//
// Constrained Delaunay machinery: triangles live in a slot array with an
// alive flag, adjacency goes through an edge map, boundary edges are
// constrained (never flipped).  Refinement inserts circumcenters of bad
// triangles, falling back to the midpoint of the boundary edge that blocks
// the insertion walk, which is what keeps near-collinear boundary chains
// (fine polygon approximations of circles) from degenerating.

struct Builder {
    double h = 0, h_min = 0, poly_diam = 0;
    double angle_floor = 15.5 * M_PI / 180.0;
    std::vector<Vec2> nodes;
    struct Tri {
        std::array<int, 3> v;
        bool alive = true;
    };
    std::vector<Tri> tris;
    std::map<EdgeKey, std::array<int, 2>> edge2tri;
    std::map<EdgeKey, int> boundary_tag;
    int origin_node = -1;

    void link(int t) {
        for (int e = 0; e < 3; ++e) {
            const EdgeKey k = ekey(tris[t].v[e], tris[t].v[(e + 1) % 3]);
            auto it = edge2tri.find(k);
            if (it == edge2tri.end())
                it = edge2tri.emplace(k, std::array<int, 2>{-1, -1}).first;
            auto& slot = it->second;
            if (slot[0] == -1 && slot[1] != t) slot[0] = t;
            else if (slot[1] == -1 && slot[0] != t) slot[1] = t;
        }
    }
    void unlink(int t) {
        for (int e = 0; e < 3; ++e) {
            auto it = edge2tri.find(ekey(tris[t].v[e], tris[t].v[(e + 1) % 3]));
            if (it == edge2tri.end()) continue;
            if (it->second[0] == t) it->second[0] = -1;
            if (it->second[1] == t) it->second[1] = -1;
            if (it->second[0] == -1 && it->second[1] == -1) edge2tri.erase(it);
        }
    }
    int add_tri(int a, int b, int c) {
        tris.push_back({{a, b, c}, true});
        const int id = (int)tris.size() - 1;
        link(id);
        return id;
    }
    void kill(int t) {
        tris[t].alive = false;
        unlink(t);
    }
    int other_tri(const EdgeKey& e, int t) const {
        auto it = edge2tri.find(e);
        if (it == edge2tri.end()) return -1;
        if (it->second[0] == t) return it->second[1];
        return it->second[0];
    }

    double elen(int a, int b) const { return (nodes[a] - nodes[b]).norm(); }

    EdgeKey longest_edge(int t) const {
        EdgeKey best{-1, -1};
        double best_len = -1.0;
        for (int e = 0; e < 3; ++e) {
            const EdgeKey k = ekey(tris[t].v[e], tris[t].v[(e + 1) % 3]);
            const double len = elen(k.first, k.second);
            if (len > best_len || (len == best_len && k < best)) {
                best_len = len;
                best = k;
            }
        }
        return best;
    }

    double target_size(int t) const {
        double r = std::min({nodes[tris[t].v[0]].norm(), nodes[tris[t].v[1]].norm(),
                             nodes[tris[t].v[2]].norm()});
        return std::max(h * std::sqrt(r / poly_diam), h_min);
    }

    double tri_angle(int t) const {
        return tri_min_angle(nodes[tris[t].v[0]], nodes[tris[t].v[1]], nodes[tris[t].v[2]]);
    }

    // oversized against the grading target, or skinny and still above the
    // tiny floor that keeps refinement from chasing unreachable corners
    bool needs_work(int t) const {
        double longest = 0;
        for (int e = 0; e < 3; ++e)
            longest = std::max(longest, elen(tris[t].v[e], tris[t].v[(e + 1) % 3]));
        if (longest > target_size(t)) return true;
        return longest > 0.35 * h_min && tri_angle(t) < angle_floor;
    }

    bool in_circumcircle(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) const {
        const double s =
            (a - d).squaredNorm() + (b - d).squaredNorm() + (c - d).squaredNorm();
        return incircle_det(a, b, c, d) > 1e-11 * s * s;
    }

    // Delaunay flip of one edge when its opposite vertices violate the empty
    // circumcircle test; suspects collects the four surrounding edges
    bool flip_if_needed(const EdgeKey& e, std::vector<EdgeKey>& suspects) {
        if (boundary_tag.count(e)) return false;
        auto it = edge2tri.find(e);
        if (it == edge2tri.end()) return false;
        const int t1 = it->second[0], t2 = it->second[1];
        if (t1 < 0 || t2 < 0 || !tris[t1].alive || !tris[t2].alive) return false;
        const int a = e.first, b = e.second;
        auto opposite = [&](int t) {
            for (int k = 0; k < 3; ++k)
                if (tris[t].v[k] != a && tris[t].v[k] != b) return tris[t].v[k];
            return -1;
        };
        const int c = opposite(t1), d = opposite(t2);
        if (c < 0 || d < 0 || c == d) return false;
        const auto& w = tris[t1].v;
        if (!in_circumcircle(nodes[w[0]], nodes[w[1]], nodes[w[2]], nodes[d]))
            return false;
        // the quad must be strictly convex: a and b straddle the new diagonal
        const double s_a = cross2(nodes[d] - nodes[c], nodes[a] - nodes[c]);
        const double s_b = cross2(nodes[d] - nodes[c], nodes[b] - nodes[c]);
        if (!(s_a * s_b < 0)) return false;
        std::array<int, 3> n1, n2;
        if (s_a > 0) {
            n1 = {c, d, a};
            n2 = {d, c, b};
        } else {
            n1 = {c, d, b};
            n2 = {d, c, a};
        }
        kill(t1);
        kill(t2);
        add_tri(n1[0], n1[1], n1[2]);
        add_tri(n2[0], n2[1], n2[2]);
        suspects.push_back(ekey(a, c));
        suspects.push_back(ekey(c, b));
        suspects.push_back(ekey(b, d));
        suspects.push_back(ekey(d, a));
        return true;
    }

    void delaunay_fix(std::vector<EdgeKey>& stack) {
        std::vector<EdgeKey> suspects;
        long guard = 20'000'000;
        while (!stack.empty() && guard-- > 0) {
            const EdgeKey e = stack.back();
            stack.pop_back();
            suspects.clear();
            if (flip_if_needed(e, suspects))
                stack.insert(stack.end(), suspects.begin(), suspects.end());
        }
    }

    // restore the Delaunay property around everything created after `mark`
    void fix_around(int mark) {
        std::vector<EdgeKey> sus;
        for (int t = mark; t < (int)tris.size(); ++t) {
            if (!tris[t].alive) continue;
            for (int e = 0; e < 3; ++e)
                sus.push_back(ekey(tris[t].v[e], tris[t].v[(e + 1) % 3]));
        }
        delaunay_fix(sus);
    }

    void make_delaunay() {
        std::vector<EdgeKey> all;
        all.reserve(edge2tri.size());
        for (const auto& kv : edge2tri) all.push_back(kv.first);
        delaunay_fix(all);
    }

    Vec2 circumcenter(int t) const {
        const Vec2 a = nodes[tris[t].v[0]];
        const Vec2 ab = nodes[tris[t].v[1]] - a, ac = nodes[tris[t].v[2]] - a;
        const double d = 2.0 * cross2(ab, ac);
        const double ab2 = ab.squaredNorm(), ac2 = ac.squaredNorm();
        return a + Vec2(ac.y() * ab2 - ab.y() * ac2, ab.x() * ac2 - ac.x() * ab2) / d;
    }

    // straight walk from triangle t toward p
    struct Located {
        int tri = -1;
        EdgeKey blocked{-1, -1};
    };
    Located locate(int t, const Vec2& p) const {
        int cur = t, prev = -1;
        for (int step = 0; step < 200000; ++step) {
            const auto& v = tris[cur].v;
            const double a2 =
                cross2(nodes[v[1]] - nodes[v[0]], nodes[v[2]] - nodes[v[0]]);
            double worst = 1e300;
            int worst_e = -1;
            for (int k = 0; k < 3; ++k) {
                const double bk =
                    cross2(nodes[v[(k + 1) % 3]] - nodes[v[k]], p - nodes[v[k]]) / a2;
                if (bk < worst) {
                    worst = bk;
                    worst_e = k;
                }
            }
            if (worst >= -1e-13) return {cur, {-1, -1}};
            const EdgeKey e = ekey(v[worst_e], v[(worst_e + 1) % 3]);
            const int nxt = other_tri(e, cur);
            if (nxt < 0 || !tris[nxt].alive) return {-1, e};
            if (nxt == prev) return {-1, {-1, -1}};  // cycling, give up
            prev = cur;
            cur = nxt;
        }
        return {-1, {-1, -1}};
    }

    // split edge (a, b) at point p; both adjacent triangles split in two
    int split_edge(int a, int b, const Vec2& p) {
        nodes.push_back(p);
        const int m = (int)nodes.size() - 1;
        auto tag_it = boundary_tag.find(ekey(a, b));
        if (tag_it != boundary_tag.end()) {
            const int tag = tag_it->second;
            boundary_tag.erase(tag_it);
            boundary_tag[ekey(a, m)] = tag;
            boundary_tag[ekey(m, b)] = tag;
        }
        auto it = edge2tri.find(ekey(a, b));
        std::array<int, 2> adj = it != edge2tri.end() ? it->second
                                                      : std::array<int, 2>{-1, -1};
        for (int t : adj) {
            if (t < 0 || !tris[t].alive) continue;
            // cyclic position of the edge inside t
            int i = 0;
            while (!((tris[t].v[i] == a && tris[t].v[(i + 1) % 3] == b) ||
                     (tris[t].v[i] == b && tris[t].v[(i + 1) % 3] == a)))
                ++i;
            const int x = tris[t].v[i], y = tris[t].v[(i + 1) % 3], z = tris[t].v[(i + 2) % 3];
            kill(t);
            add_tri(x, m, z);
            add_tri(m, y, z);
        }
        return m;
    }

    bool split_at_midpoint(const EdgeKey& e) {
        if (e.first < 0) return false;
        split_edge(e.first, e.second, 0.5 * (nodes[e.first] + nodes[e.second]));
        return true;
    }

    // constrained segment of t or a neighbor whose diametral circle contains
    // p; inserting p there would smear a sliver onto the boundary
    EdgeKey find_encroached(int t, const Vec2& p) const {
        auto encroached = [&](const EdgeKey& k) {
            if (!boundary_tag.count(k)) return false;
            const Vec2 mid = 0.5 * (nodes[k.first] + nodes[k.second]);
            return (p - mid).squaredNorm() <
                   0.25 * (nodes[k.first] - nodes[k.second]).squaredNorm();
        };
        for (int e = 0; e < 3; ++e) {
            const EdgeKey k = ekey(tris[t].v[e], tris[t].v[(e + 1) % 3]);
            if (encroached(k)) return k;
            const int nb = other_tri(k, t);
            if (nb < 0 || !tris[nb].alive) continue;
            for (int f = 0; f < 3; ++f) {
                const EdgeKey kn = ekey(tris[nb].v[f], tris[nb].v[(f + 1) % 3]);
                if (encroached(kn)) return kn;
            }
        }
        return {-1, -1};
    }

    // one refinement action for a bad triangle: insert its circumcenter, or
    // split the boundary edge that blocks the way there
    bool refine_once(int t) {
        const int mark = (int)tris.size();
        bool changed = false;
        const Vec2 c = circumcenter(t);
        if (!c.allFinite()) {
            changed = split_at_midpoint(longest_edge(t));
        } else {
            const Located loc = locate(t, c);
            if (loc.tri < 0) {
                if (loc.blocked.first >= 0 &&
                    elen(loc.blocked.first, loc.blocked.second) > 0.25 * h_min)
                    changed = split_at_midpoint(loc.blocked);
            } else if (const EdgeKey enc = find_encroached(loc.tri, c); enc.first >= 0) {
                if (elen(enc.first, enc.second) > 0.25 * h_min)
                    changed = split_at_midpoint(enc);
            } else {
                const std::array<int, 3> v = tris[loc.tri].v;  // add_tri reallocates
                const double a2 =
                    cross2(nodes[v[1]] - nodes[v[0]], nodes[v[2]] - nodes[v[0]]);
                double bary[3];
                int low = 0;
                for (int k = 0; k < 3; ++k) {
                    bary[k] = cross2(nodes[v[(k + 1) % 3]] - nodes[v[k]],
                                     c - nodes[v[k]]) / a2;
                    if (bary[k] < bary[low]) low = k;
                }
                if (std::max({bary[0], bary[1], bary[2]}) > 1.0 - 1e-9) {
                    // on top of an existing node, nothing sane to insert
                } else if (bary[low] < 1e-9) {
                    const EdgeKey e = ekey(v[low], v[(low + 1) % 3]);
                    if (!boundary_tag.count(e) ||
                        elen(e.first, e.second) > 0.25 * h_min)
                        changed = split_at_midpoint(e);
                } else {
                    nodes.push_back(c);
                    const int m = (int)nodes.size() - 1;
                    kill(loc.tri);
                    add_tri(v[0], v[1], m);
                    add_tri(v[1], v[2], m);
                    add_tri(v[2], v[0], m);
                    changed = true;
                }
            }
        }
        if (changed) fix_around(mark);
        return changed;
    }
};

} // namespace

double TriangleMesh::triangle_area(int t) const {
    const auto& tr = triangles[t];
    return 0.5 * cross2(nodes[tr[1]] - nodes[tr[0]], nodes[tr[2]] - nodes[tr[0]]);
}

double TriangleMesh::total_area() const {
    double s = 0.0;
    for (int t = 0; t < (int)triangles.size(); ++t) s += triangle_area(t);
    return s;
}

TriangleMesh triangulate(const WeightedDomain& domain, double h) {
    validate(domain);
    const Polygon& poly = domain.vertices;
    const int n = (int)poly.size();
    // Polygon edges shorter than h are already resolved and simply kept, so
    // the only real bound on h is the domain size itself.
    if (!(h > 0.0) || h > 0.5 * polygon_diameter(poly))
        throw std::invalid_argument("triangulate: h must be positive and at most half "
                                    "the polygon diameter");

    Builder bld;
    bld.h = h;
    bld.h_min = h / 32.0;
    bld.poly_diam = polygon_diameter(poly);
    bld.nodes = poly;
    for (int i = 0; i < n; ++i) bld.boundary_tag[ekey(i, (i + 1) % n)] = i;
    for (const auto& tr : ear_clip(poly)) bld.add_tri(tr[0], tr[1], tr[2]);
    bld.make_delaunay();

    // force the origin in as an interior node
    {
        const int mark = (int)bld.tris.size();
        int best_t = -1;
        double best_min_bary = -1e300;
        int best_edge = -1;
        for (int t = 0; t < (int)bld.tris.size(); ++t) {
            if (!bld.tris[t].alive) continue;
            const auto& v = bld.tris[t].v;
            const double a2 = cross2(bld.nodes[v[1]] - bld.nodes[v[0]],
                                     bld.nodes[v[2]] - bld.nodes[v[0]]);
            double bary[3], mn = 1e300;
            int mn_edge = -1;
            for (int k = 0; k < 3; ++k) {
                bary[k] = cross2(bld.nodes[v[(k + 1) % 3]] - bld.nodes[v[k]],
                                 -bld.nodes[v[k]]) / a2;
                if (bary[k] < mn) {
                    mn = bary[k];
                    mn_edge = k;  // edge (v[k], v[k+1]) is where bary[k] vanishes
                }
            }
            if (mn > best_min_bary) {
                best_min_bary = mn;
                best_t = t;
                best_edge = mn_edge;
            }
        }
        const auto v = bld.tris[best_t].v;
        if (best_min_bary > 1e-12) {
            bld.kill(best_t);
            bld.nodes.emplace_back(0.0, 0.0);
            bld.origin_node = (int)bld.nodes.size() - 1;
            bld.add_tri(v[0], v[1], bld.origin_node);
            bld.add_tri(v[1], v[2], bld.origin_node);
            bld.add_tri(v[2], v[0], bld.origin_node);
        } else {
            // origin sits on an interior edge; split through it
            const int a = v[best_edge], b = v[(best_edge + 1) % 3];
            bld.origin_node = bld.split_edge(a, b, Vec2(0.0, 0.0));
        }
        bld.fix_around(mark);
    }

    // size/grading and quality refinement
    for (int round = 0; round < 4000; ++round) {
        bool changed = false;
        const int snapshot = (int)bld.tris.size();
        for (int t = 0; t < snapshot; ++t) {
            if (!bld.tris[t].alive || !bld.needs_work(t)) continue;
            changed = bld.refine_once(t) || changed;
        }
        if ((int)bld.nodes.size() > 2000000)
            throw std::runtime_error("triangulate: refinement runaway");
        if (!changed) break;
    }

    TriangleMesh mesh;
    mesh.nodes = std::move(bld.nodes);
    mesh.h = h;
    mesh.origin_node = bld.origin_node;
    for (const auto& tr : bld.tris)
        if (tr.alive) mesh.triangles.push_back(tr.v);
    for (const auto& [key, tag] : bld.boundary_tag) {
        auto it = bld.edge2tri.find(key);
        int t = -1;
        if (it != bld.edge2tri.end()) t = it->second[0] >= 0 ? it->second[0] : it->second[1];
        if (t < 0) throw std::runtime_error("triangulate: dangling boundary edge");
        BoundaryEdge be;
        be.polygon_edge = tag;
        // orient along the owning triangle's cyclic order
        for (int k = 0; k < 3; ++k) {
            const int x = bld.tris[t].v[k], y = bld.tris[t].v[(k + 1) % 3];
            if (ekey(x, y) == key) {
                be.a = x;
                be.b = y;
                break;
            }
        }
        mesh.boundary_edges.push_back(be);
    }
    return mesh;
}

TriangleMesh refine(const TriangleMesh& mesh) {
    TriangleMesh out;
    out.nodes = mesh.nodes;
    out.h = 0.5 * mesh.h;
    out.origin_node = mesh.origin_node;
    std::map<EdgeKey, int> midpoint;
    auto mid = [&](int a, int b) {
        const EdgeKey k = ekey(a, b);
        auto it = midpoint.find(k);
        if (it != midpoint.end()) return it->second;
        out.nodes.push_back(0.5 * (mesh.nodes[a] + mesh.nodes[b]));
        const int m = (int)out.nodes.size() - 1;
        midpoint[k] = m;
        return m;
    };
    for (const auto& tr : mesh.triangles) {
        const int a = tr[0], b = tr[1], c = tr[2];
        const int ab = mid(a, b), bc = mid(b, c), ca = mid(c, a);
        out.triangles.push_back({a, ab, ca});
        out.triangles.push_back({ab, b, bc});
        out.triangles.push_back({ca, bc, c});
        out.triangles.push_back({ab, bc, ca});
    }
    for (const auto& be : mesh.boundary_edges) {
        const int m = mid(be.a, be.b);
        out.boundary_edges.push_back({be.a, m, be.polygon_edge});
        out.boundary_edges.push_back({m, be.b, be.polygon_edge});
    }
    return out;
}

double mesh_min_angle_deg(const TriangleMesh& mesh) {
    double worst = M_PI;
    for (const auto& tr : mesh.triangles)
        worst = std::min(worst, tri_min_angle(mesh.nodes[tr[0]], mesh.nodes[tr[1]],
                                              mesh.nodes[tr[2]]));
    return worst * 180.0 / M_PI;
}

void write_mesh(const TriangleMesh& mesh, std::ostream& out) {
    out.precision(17);
    out << "nodes " << mesh.nodes.size() << "\n";
    for (const Vec2& p : mesh.nodes) out << p.x() << " " << p.y() << "\n";
    out << "triangles " << mesh.triangles.size() << "\n";
    for (const auto& t : mesh.triangles) out << t[0] << " " << t[1] << " " << t[2] << "\n";
    out << "boundary " << mesh.boundary_edges.size() << "\n";
    for (const auto& e : mesh.boundary_edges)
        out << e.a << " " << e.b << " " << e.polygon_edge << "\n";
}

} // namespace robinsym

#include "robinsym/rearrange.hpp"
#include "robinsym/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace robinsym {

namespace {

// vertices of {g > t} inside a triangle, marching the edges; at most 4
int clip_above(const Vec2* p, const double* g, double t, Vec2* out) {
    int m = 0;
    for (int k = 0; k < 3; ++k) {
        const Vec2& pa = p[k];
        const Vec2& pb = p[(k + 1) % 3];
        const double ga = g[k], gb = g[(k + 1) % 3];
        const bool ina = ga > t, inb = gb > t;
        if (ina) out[m++] = pa;
        if (ina != inb) out[m++] = pa + ((t - ga) / (gb - ga)) * (pb - pa);
    }
    return m;
}

// mu at each base level (ascending, unique), by exact clipping of the
// linear interpolant; the two signs of u are independent passes
void measures_at_levels(const FemField& field, double l,
                        const std::vector<double>& base,
                        const Eigen::VectorXd& tri_measure,
                        Eigen::VectorXd& out) {
    const TriangleMesh& mesh = *field.mesh;
    const int K = (int)base.size();
    out = Eigen::VectorXd::Zero(K);
    Eigen::VectorXd full = Eigen::VectorXd::Zero(K + 1);

    Vec2 pts[3], clipped[6];
    double g[3];
    for (int t = 0; t < (int)mesh.triangles.size(); ++t) {
        for (int k = 0; k < 3; ++k) pts[k] = mesh.nodes[mesh.triangles[t][k]];
        for (double sgn : {1.0, -1.0}) {
            for (int k = 0; k < 3; ++k) g[k] = sgn * field.values[mesh.triangles[t][k]];
            const double gmin = std::min({g[0], g[1], g[2]});
            const double gmax = std::max({g[0], g[1], g[2]});
            if (gmax <= base[0]) continue;
            const int i0 = (int)(std::lower_bound(base.begin(), base.end(), gmin) - base.begin());
            const int i1 = (int)(std::lower_bound(base.begin(), base.end(), gmax) - base.begin());
            if (i0 > 0) {
                full[0] += tri_measure[t];
                full[i0] -= tri_measure[t];
            }
            for (int i = i0; i < i1; ++i) {
                const int m = clip_above(pts, g, base[i], clipped);
                if (m >= 3) out[i] += weighted_polygon_measure(clipped, m, l);
            }
        }
    }
    double run = 0.0;
    for (int i = 0; i < K; ++i) {
        run += full[i];
        out[i] += run;
    }
}

DistributionCurve assemble_curve(const std::vector<double>& base,
                                 const Eigen::VectorXd& mu,
                                 const std::map<double, double>& flat,
                                 double total) {
    std::vector<double> L, M;
    L.reserve(base.size() + flat.size());
    M.reserve(base.size() + flat.size());
    for (size_t i = 0; i < base.size(); ++i) {
        const auto it = flat.find(base[i]);
        if (it != flat.end() && base[i] > 0.0) {
            L.push_back(base[i]);
            M.push_back(mu[i] + it->second);  // left limit carries the plateau mass
        }
        L.push_back(base[i]);
        M.push_back(mu[i]);
    }
    DistributionCurve curve;
    curve.total_measure = total;
    curve.levels = Eigen::Map<Eigen::VectorXd>(L.data(), (long)L.size());
    curve.measures = Eigen::Map<Eigen::VectorXd>(M.data(), (long)M.size());
    // quadrature noise can break monotonicity at the 1e-9 scale; clamp it
    for (long i = 0; i < curve.measures.size(); ++i) {
        double m = std::clamp(curve.measures[i], 0.0, total);
        if (i > 0) m = std::min(m, curve.measures[i - 1]);
        curve.measures[i] = m;
    }
    return curve;
}

DistributionCurve distribution_core(const FemField& field, double l,
                                    std::vector<double> base) {
    const TriangleMesh& mesh = *field.mesh;
    if (mesh.triangles.empty()) throw std::invalid_argument("distribution_function: empty mesh");
    std::sort(base.begin(), base.end());
    base.erase(std::unique(base.begin(), base.end()), base.end());
    if (base.empty() || base[0] < 0.0)
        throw std::invalid_argument("distribution_function: levels must be >= 0");

    Eigen::VectorXd tri_measure(mesh.triangles.size());
    std::map<double, double> flat;  // plateau value of |u| -> its measure
    Vec2 pts[3];
    for (int t = 0; t < (int)mesh.triangles.size(); ++t) {
        for (int k = 0; k < 3; ++k) pts[k] = mesh.nodes[mesh.triangles[t][k]];
        tri_measure[t] = weighted_polygon_measure(pts, 3, l);
        const double v0 = field.values[mesh.triangles[t][0]];
        if (v0 == field.values[mesh.triangles[t][1]] &&
            v0 == field.values[mesh.triangles[t][2]] && v0 != 0.0)
            flat[std::abs(v0)] += tri_measure[t];
    }
    const double total = tri_measure.sum();

    for (const auto& [v, m] : flat) base.push_back(v);
    std::sort(base.begin(), base.end());
    base.erase(std::unique(base.begin(), base.end()), base.end());

    Eigen::VectorXd mu;
    measures_at_levels(field, l, base, tri_measure, mu);
    return assemble_curve(base, mu, flat, total);
}

} // namespace

double DistributionCurve::value(double t) const {
    const long K = levels.size();
    if (K == 0) return 0.0;
    if (t >= levels[K - 1]) return t == levels[K - 1] ? measures[K - 1] : 0.0;
    if (t <= levels[0]) return measures[0];
    // last index with level <= t; at a duplicated level this lands on the
    // second entry, the right-continuous value
    long lo = 0, hi = K - 1;
    while (lo + 1 < hi) {
        const long mid = (lo + hi) / 2;
        (levels[mid] <= t ? lo : hi) = mid;
    }
    if (levels[lo] == t) return measures[lo];
    const double w = (t - levels[lo]) / (levels[hi] - levels[lo]);
    return measures[lo] + w * (measures[hi] - measures[lo]);
}

DistributionCurve distribution_function(const FemField& field, double l, int n_levels) {
    if (n_levels < 2) throw std::invalid_argument("distribution_function: need >= 2 levels");
    const TriangleMesh& mesh = *field.mesh;
    const int nn = (int)mesh.nodes.size();

    // measure-weighted quantiles of |u| pick levels where mass actually sits
    Eigen::VectorXd node_w = Eigen::VectorXd::Zero(nn);
    Vec2 pts[3];
    for (const auto& tri : mesh.triangles) {
        for (int k = 0; k < 3; ++k) pts[k] = mesh.nodes[tri[k]];
        const double m = weighted_polygon_measure(pts, 3, l) / 3.0;
        for (int k = 0; k < 3; ++k) node_w[tri[k]] += m;
    }
    std::vector<int> order(nn);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return std::abs(field.values[a]) < std::abs(field.values[b]);
    });
    std::vector<double> cum(nn);
    double run = 0.0;
    for (int i = 0; i < nn; ++i) {
        run += node_w[order[i]];
        cum[i] = run;
    }
    std::vector<double> base = {0.0};
    for (int k = 0; k < n_levels; ++k) {
        const double target = run * (double)k / (double)(n_levels - 1);
        const int idx = std::min<int>(
            nn - 1, (int)(std::lower_bound(cum.begin(), cum.end(), target) - cum.begin()));
        base.push_back(std::abs(field.values[order[idx]]));
    }
    return distribution_core(field, l, std::move(base));
}

DistributionCurve distribution_function(const FemField& field, double l,
                                        const std::vector<double>& levels) {
    if (levels.empty()) throw std::invalid_argument("distribution_function: no levels");
    return distribution_core(field, l, levels);
}

RearrangementProfile decreasing_rearrangement(const DistributionCurve& curve) {
    const long K = curve.levels.size();
    if (K == 0) throw std::invalid_argument("decreasing_rearrangement: empty curve");
    std::vector<double> s, v;
    s.reserve(K + 2);
    v.reserve(K + 2);
    if (curve.measures[K - 1] > 0.0) {
        // top level not exhausted: extend as a plateau at the highest level
        s.push_back(0.0);
        v.push_back(curve.levels[K - 1]);
    }
    for (long k = K - 1; k >= 0; --k) {
        s.push_back(curve.measures[k]);
        v.push_back(curve.levels[k]);
    }
    if (s.back() < curve.total_measure) {
        s.push_back(curve.total_measure);
        v.push_back(curve.levels[0]);
    }
    RearrangementProfile prof;
    prof.total_measure = curve.total_measure;
    prof.s = Eigen::Map<Eigen::VectorXd>(s.data(), (long)s.size());
    prof.values = Eigen::Map<Eigen::VectorXd>(v.data(), (long)v.size());
    return prof;
}

double RearrangementProfile::value(double s_at) const {
    const long K = s.size();
    if (K == 0) return 0.0;
    if (s_at <= s[0]) return values[0];
    if (s_at > s[K - 1]) return values[K - 1];
    // first index with s >= s_at: at a duplicated abscissa this lands on the
    // first copy, the upper branch, matching u*(s) = inf{ t : mu(t) < s }
    long lo = 0, hi = K - 1;
    while (lo + 1 < hi) {
        const long mid = (lo + hi) / 2;
        (s[mid] < s_at ? lo : hi) = mid;
    }
    if (s[hi] == s_at) return values[hi];
    const double w = (s_at - s[lo]) / (s[hi] - s[lo]);
    return values[lo] + w * (values[hi] - values[lo]);
}

double RearrangementProfile::integral(double s_hi) const {
    const long K = s.size();
    double acc = 0.0;
    const double cap = std::clamp(s_hi, 0.0, total_measure);
    for (long k = 0; k + 1 < K; ++k) {
        if (s[k] >= cap) break;
        const double a = s[k], b = std::min(s[k + 1], cap);
        if (b <= a) continue;
        const double va = values[k];
        const double vb = (s[k + 1] == s[k])
                              ? values[k + 1]
                              : values[k] + (b - a) / (s[k + 1] - s[k]) * (values[k + 1] - values[k]);
        acc += 0.5 * (va + vb) * (b - a);
    }
    return acc;
}

double RearrangementProfile::integral_pow(double p) const {
    const long K = s.size();
    double acc = 0.0;
    if (p == 1.0) return integral(total_measure);
    if (p != 2.0) throw std::invalid_argument("integral_pow: only p = 1 or 2");
    for (long k = 0; k + 1 < K; ++k) {
        const double ds = s[k + 1] - s[k];
        if (ds <= 0.0) continue;
        const double a = values[k], b = values[k + 1];
        acc += ds * (a * a + a * b + b * b) / 3.0;
    }
    return acc;
}

double schwarz_value(const RearrangementProfile& profile, const Vec2& x, double l) {
    const double s = 2.0 * M_PI * std::pow(x.norm(), l + 2.0) / (l + 2.0);
    if (s > profile.total_measure * (1.0 + 1e-9))
        throw std::domain_error("schwarz_value: point outside the symmetrized disk");
    return profile.value(std::min(s, profile.total_measure));
}

RearrangementProfile rearranged_source(const ScalarFn& f, const WeightedDomain& domain,
                                       int n_levels, const TriangleMesh* mesh) {
    TriangleMesh own;
    if (!mesh) {
        double min_edge = std::numeric_limits<double>::max();
        const int n = (int)domain.vertices.size();
        for (int i = 0; i < n; ++i)
            min_edge = std::min(min_edge,
                                (domain.vertices[(i + 1) % n] - domain.vertices[i]).norm());
        const double h = std::min(0.25 * min_edge, polygon_diameter(domain.vertices) / 32.0);
        own = triangulate(domain, h);
        mesh = &own;
    }
    FemField field;
    field.mesh = mesh;
    field.values.resize(mesh->nodes.size());
    for (size_t i = 0; i < mesh->nodes.size(); ++i) {
        field.values[(long)i] = f(mesh->nodes[i]);
        if (field.values[(long)i] < 0.0)
            throw std::invalid_argument("rearranged_source: source is negative at a node");
    }
    return decreasing_rearrangement(distribution_function(field, domain.l, n_levels));
}

HardyLittlewoodContext make_hardy_littlewood_context(const FemField& field, double l,
                                                     int n_levels) {
    const TriangleMesh& mesh = *field.mesh;
    HardyLittlewoodContext ctx;
    ctx.field = &field;
    ctx.l = l;
    ctx.triangle_integral.resize(mesh.triangles.size());
    ctx.triangle_measure.resize(mesh.triangles.size());
    Vec2 pts[3];
    for (int t = 0; t < (int)mesh.triangles.size(); ++t) {
        for (int k = 0; k < 3; ++k) pts[k] = mesh.nodes[mesh.triangles[t][k]];
        // affine representation u = c0 + g . x of the interpolant on T
        Eigen::Matrix2d E;
        E.col(0) = pts[1] - pts[0];
        E.col(1) = pts[2] - pts[0];
        Eigen::Vector2d du(field.values[mesh.triangles[t][1]] - field.values[mesh.triangles[t][0]],
                           field.values[mesh.triangles[t][2]] - field.values[mesh.triangles[t][0]]);
        const Vec2 g = E.transpose().inverse() * du;
        const double c0 = field.values[mesh.triangles[t][0]] - g.dot(pts[0]);
        ctx.triangle_measure[t] = weighted_polygon_measure(pts, 3, l);
        ctx.triangle_integral[t] = weighted_polygon_affine_integral(pts, 3, l, c0, g);
    }
    ctx.profile = decreasing_rearrangement(distribution_function(field, l, n_levels));
    return ctx;
}

HardyLittlewoodResult hardy_littlewood_check(const HardyLittlewoodContext& ctx,
                                             const std::vector<int>& subset_triangles) {
    HardyLittlewoodResult r;
    for (int t : subset_triangles) {
        r.lhs += ctx.triangle_integral[t];
        r.subset_measure += ctx.triangle_measure[t];
    }
    r.rhs = ctx.profile.integral(r.subset_measure);
    r.pass = r.lhs <= r.rhs * (1.0 + 1e-6) + 1e-300;
    return r;
}

HardyLittlewoodResult hardy_littlewood_check(const FemField& field, double l,
                                             const std::vector<int>& subset_triangles) {
    return hardy_littlewood_check(make_hardy_littlewood_context(field, l), subset_triangles);
}

void write_distribution_csv(const DistributionCurve& curve, std::ostream& out) {
    out.precision(17);
    out << "t,mu\n";
    for (long i = 0; i < curve.levels.size(); ++i)
        out << curve.levels[i] << ',' << curve.measures[i] << '\n';
}

void write_profile_csv(const RearrangementProfile& profile, std::ostream& out) {
    out.precision(17);
    out << "s,u_star\n";
    for (long i = 0; i < profile.s.size(); ++i)
        out << profile.s[i] << ',' << profile.values[i] << '\n';
}

} // namespace robinsym

#include "robinsym/fem.hpp"
#include "robinsym/quadrature.hpp"

#include <Eigen/IterativeLinearSolvers>

#include <cmath>
#include <iostream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace robinsym {

namespace {

double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

// affine representation of the barycentric basis: phi_k(x) = alpha_k + gamma_k . x
struct P1Basis {
    double area;
    std::array<double, 3> alpha;
    std::array<Vec2, 3> gamma;
};

P1Basis p1_basis(const Vec2& p0, const Vec2& p1, const Vec2& p2) {
    P1Basis b;
    const double twoA = cross2(p1 - p0, p2 - p0);
    b.area = 0.5 * twoA;
    const std::array<Vec2, 3> p = {p0, p1, p2};
    for (int k = 0; k < 3; ++k) {
        const Vec2& q1 = p[(k + 1) % 3];
        const Vec2& q2 = p[(k + 2) % 3];
        b.alpha[k] = cross2(q1, q2) / twoA;
        b.gamma[k] = Vec2(q1.y() - q2.y(), q2.x() - q1.x()) / twoA;
    }
    return b;
}

double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
    const Vec2 ab = b - a;
    const double t = std::clamp(ab.dot(p - a) / ab.squaredNorm(), 0.0, 1.0);
    return (a + t * ab - p).norm();
}

// load contribution of a triangle whose first vertex is the origin:
//   Int_0^rho g(r) r^(l+1) dr = rho^(l+2)/(l+2) Int_0^1 g(rho tau^(1/(l+2))) dtau
// (exact substitution, removes the radial singularity), angular adaptive.
Eigen::Vector3d origin_triangle_load(const Vec2& a, const Vec2& b, double l,
                                     const P1Basis& basis, const ScalarFn& f) {
    const double cr = cross2(a, b);
    if (cr == 0.0) return Eigen::Vector3d::Zero();
    const double dtheta = std::atan2(cr, a.dot(b));
    const double theta0 = std::atan2(a.y(), a.x());
    Vec2 e = b - a;
    const Vec2 nrm = Vec2(-e.y(), e.x()).normalized();
    const double d = nrm.dot(a);
    const double p = l + 2.0;
    const GaussRule& radial = gauss_rule(12);

    auto integrand = [&](double s, Eigen::Ref<Eigen::VectorXd> out) {
        const double th = theta0 + s;
        const Vec2 u(std::cos(th), std::sin(th));
        const double rho = d / nrm.dot(u);
        out.setZero();
        for (int q = 0; q < radial.nodes.size(); ++q) {
            const double tau = 0.5 * (radial.nodes[q] + 1.0);
            const double w = 0.5 * radial.weights[q];
            const double r = rho * std::pow(tau, 1.0 / p);
            const Vec2 x = r * u;
            const double fx = f(x);
            for (int k = 0; k < 3; ++k)
                out[k] += w * fx * (basis.alpha[k] + basis.gamma[k].dot(x));
        }
        out *= std::pow(rho, p) / p;
    };
    Eigen::VectorXd v = integrate_adaptive_vec(3, integrand, 0.0, dtheta, 1e-11);
    return v;
}

void far_triangle_load(const Vec2& p0, const Vec2& p1, const Vec2& p2, double l,
                       const P1Basis& basis, const ScalarFn& f, int depth,
                       Eigen::Vector3d& acc) {
    const double dmax = std::max({p0.norm(), p1.norm(), p2.norm()});
    const double dmin = std::min({point_segment_distance(Vec2::Zero(), p0, p1),
                                  point_segment_distance(Vec2::Zero(), p1, p2),
                                  point_segment_distance(Vec2::Zero(), p2, p0)});
    if (l != 0.0 && depth > 0 && dmax > 1.4 * dmin) {
        const Vec2 m01 = 0.5 * (p0 + p1), m12 = 0.5 * (p1 + p2), m20 = 0.5 * (p2 + p0);
        far_triangle_load(p0, m01, m20, l, basis, f, depth - 1, acc);
        far_triangle_load(m01, p1, m12, l, basis, f, depth - 1, acc);
        far_triangle_load(m20, m12, p2, l, basis, f, depth - 1, acc);
        far_triangle_load(m01, m12, m20, l, basis, f, depth - 1, acc);
        return;
    }
    const double area = 0.5 * cross2(p1 - p0, p2 - p0);
    const TriangleRule& rule = triangle_rule_deg5();
    for (int q = 0; q < rule.points.rows(); ++q) {
        const double w = rule.points(q, 0) * area;
        const Vec2 x = rule.points(q, 1) * p0 + rule.points(q, 2) * p1 + rule.points(q, 3) * p2;
        const double common = w * f(x) * std::pow(x.norm(), l);
        for (int k = 0; k < 3; ++k)
            acc[k] += common * (basis.alpha[k] + basis.gamma[k].dot(x));
    }
}

} // namespace

SparseMatrix assemble_stiffness(const TriangleMesh& mesh) {
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(9 * mesh.triangles.size());
    for (const auto& tr : mesh.triangles) {
        const P1Basis b = p1_basis(mesh.nodes[tr[0]], mesh.nodes[tr[1]], mesh.nodes[tr[2]]);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                trips.emplace_back(tr[i], tr[j], b.area * b.gamma[i].dot(b.gamma[j]));
    }
    SparseMatrix K((int)mesh.nodes.size(), (int)mesh.nodes.size());
    K.setFromTriplets(trips.begin(), trips.end());
    return K;
}

SparseMatrix assemble_weighted_mass(const TriangleMesh& mesh, double l) {
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(9 * mesh.triangles.size());
    for (const auto& tr : mesh.triangles) {
        const Vec2& p0 = mesh.nodes[tr[0]];
        const Vec2& p1 = mesh.nodes[tr[1]];
        const Vec2& p2 = mesh.nodes[tr[2]];
        const P1Basis b = p1_basis(p0, p1, p2);
        const Eigen::Matrix<double, 6, 1> m = triangle_weighted_moments(p0, p1, p2, l);
        Eigen::Matrix2d M2;
        M2 << m[3], m[4], m[4], m[5];
        const Vec2 m1(m[1], m[2]);
        for (int i = 0; i < 3; ++i)
            for (int j = i; j < 3; ++j) {
                const double v = b.alpha[i] * b.alpha[j] * m[0] +
                                 (b.alpha[i] * b.gamma[j] + b.alpha[j] * b.gamma[i]).dot(m1) +
                                 b.gamma[i].dot(M2 * b.gamma[j]);
                trips.emplace_back(tr[i], tr[j], v);
                if (j != i) trips.emplace_back(tr[j], tr[i], v);
            }
    }
    SparseMatrix M((int)mesh.nodes.size(), (int)mesh.nodes.size());
    M.setFromTriplets(trips.begin(), trips.end());
    return M;
}

SparseMatrix assemble_boundary_mass(const TriangleMesh& mesh, double l,
                                    double beta, const BetaFn& beta_fn) {
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(4 * mesh.boundary_edges.size());
    for (const auto& be : mesh.boundary_edges) {
        const Vec2 a = mesh.nodes[be.a];
        const Vec2 b = mesh.nodes[be.b];
        const double len = (b - a).norm();
        auto integrand = [&](double t, Eigen::Ref<Eigen::VectorXd> out) {
            const Vec2 x = a + t * (b - a);
            double w = std::pow(x.norm(), 0.5 * l);
            if (beta_fn) w *= beta_fn(x) / beta;
            out[0] = w * (1.0 - t) * (1.0 - t);
            out[1] = w * t * (1.0 - t);
            out[2] = w * t * t;
        };
        const Eigen::VectorXd v = integrate_adaptive_vec(3, integrand, 0.0, 1.0, 1e-12, 7);
        trips.emplace_back(be.a, be.a, len * v[0]);
        trips.emplace_back(be.a, be.b, len * v[1]);
        trips.emplace_back(be.b, be.a, len * v[1]);
        trips.emplace_back(be.b, be.b, len * v[2]);
    }
    SparseMatrix B((int)mesh.nodes.size(), (int)mesh.nodes.size());
    B.setFromTriplets(trips.begin(), trips.end());
    return B;
}

Eigen::Vector3d weighted_p1_integral(const TriangleMesh& mesh, int t,
                                     const ScalarFn& f, double l) {
    const auto& tr = mesh.triangles[t];
    const Vec2& p0 = mesh.nodes[tr[0]];
    const Vec2& p1 = mesh.nodes[tr[1]];
    const Vec2& p2 = mesh.nodes[tr[2]];
    const P1Basis basis = p1_basis(p0, p1, p2);
    Eigen::Vector3d acc = Eigen::Vector3d::Zero();
    // rotate an origin vertex to the front, keeping orientation
    for (int k = 0; k < 3; ++k) {
        if (tr[k] == mesh.origin_node) {
            const Vec2& a = mesh.nodes[tr[(k + 1) % 3]];
            const Vec2& b = mesh.nodes[tr[(k + 2) % 3]];
            return origin_triangle_load(a, b, l, basis, f);
        }
    }
    far_triangle_load(p0, p1, p2, l, basis, f, 10, acc);
    return acc;
}

Vector assemble_load(const TriangleMesh& mesh, const ScalarFn& f, double l) {
    bool negative = false;
    for (const Vec2& p : mesh.nodes)
        if (f(p) < 0.0) {
            negative = true;
            break;
        }
    if (negative)
        std::cerr << "warning: load source takes negative values; comparison "
                     "statements assume f >= 0\n";

    Vector b = Vector::Zero((int)mesh.nodes.size());
    for (int t = 0; t < (int)mesh.triangles.size(); ++t) {
        const Eigen::Vector3d local = weighted_p1_integral(mesh, t, f, l);
        for (int k = 0; k < 3; ++k) b[mesh.triangles[t][k]] += local[k];
    }
    return b;
}

FemField solve_robin(const TriangleMesh& mesh, const WeightedDomain& domain,
                     const ScalarFn& f) {
    const SparseMatrix K = assemble_stiffness(mesh);
    const SparseMatrix B = assemble_boundary_mass(mesh, domain.l, domain.beta,
                                                  domain.beta_fn);
    const Vector b = assemble_load(mesh, f, domain.l);
    SparseMatrix A = K + domain.beta * B;

    FemField u;
    u.mesh = &mesh;
    if (b.norm() == 0.0) {
        u.values = Vector::Zero(b.size());
        return u;
    }
    Eigen::ConjugateGradient<SparseMatrix, Eigen::Lower | Eigen::Upper> cg;
    cg.setTolerance(1e-11);
    cg.setMaxIterations(20 * b.size());
    cg.compute(A);
    u.values = cg.solve(b);
    // rounding drift between the recursive and true residuals can stall CG
    // just above the target on large graded meshes; refinement against the
    // true residual restores it at the cost of a short extra solve
    const double bnorm = b.norm();
    double rel = (A * u.values - b).norm() / bnorm;
    for (int pass = 0; pass < 3 && rel > 1e-11; ++pass) {
        const Vector r = b - A * u.values;
        cg.setTolerance(std::min(1e-3, 1e-11 * bnorm / r.norm()));
        u.values += cg.solve(r);
        rel = (A * u.values - b).norm() / bnorm;
    }
    if (rel > 1e-10) {
        std::ostringstream msg;
        msg << "solve_robin: CG stalled, relative residual " << rel;
        throw std::runtime_error(msg.str());
    }
    return u;
}

EigenResult smallest_eigenpair(const TriangleMesh& mesh, const WeightedDomain& domain) {
    const SparseMatrix K = assemble_stiffness(mesh);
    const SparseMatrix B = assemble_boundary_mass(mesh, domain.l, domain.beta,
                                                  domain.beta_fn);
    const SparseMatrix M = assemble_weighted_mass(mesh, domain.l);
    SparseMatrix A = K + domain.beta * B;

    Eigen::ConjugateGradient<SparseMatrix, Eigen::Lower | Eigen::Upper> cg;
    cg.setTolerance(1e-13);
    cg.setMaxIterations(40 * (Eigen::Index)mesh.nodes.size());
    cg.compute(A);

    Vector x = Vector::Ones((int)mesh.nodes.size());
    x /= std::sqrt(x.dot(M * x));
    double lambda = x.dot(A * x);
    double residual = std::numeric_limits<double>::max();
    Vector guess = x / lambda;
    for (int it = 0; it < 400; ++it) {
        Vector y = cg.solveWithGuess(M * x, guess);
        y /= std::sqrt(y.dot(M * y));
        lambda = y.dot(A * y);
        residual = (A * y - lambda * (M * y)).norm() / y.norm();
        x = y;
        guess = y / lambda;
        if (residual <= 1e-8) break;
    }
    if (residual > 1e-8)
        throw std::runtime_error("smallest_eigenpair: inverse iteration stalled, residual " +
                                 std::to_string(residual));
    int imax = 0;
    x.cwiseAbs().maxCoeff(&imax);
    if (x[imax] < 0.0) x = -x;

    EigenResult res;
    res.lambda = lambda;
    res.residual = residual;
    res.field.mesh = &mesh;
    res.field.values = std::move(x);
    return res;
}

double weighted_l1_norm(const SparseMatrix& weighted_mass, const Vector& u) {
    return (weighted_mass * u.cwiseAbs()).sum();
}

double weighted_l2_norm(const SparseMatrix& weighted_mass, const Vector& u) {
    return std::sqrt(std::max(0.0, u.dot(weighted_mass * u)));
}

void write_field_csv(const FemField& field, std::ostream& out) {
    out.precision(17);
    out << "x,y,value\n";
    for (int i = 0; i < field.values.size(); ++i)
        out << field.mesh->nodes[i].x() << "," << field.mesh->nodes[i].y() << ","
            << field.values[i] << "\n";
}

} // namespace robinsym

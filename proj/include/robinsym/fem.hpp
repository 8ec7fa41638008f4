// P1 finite elements for the weighted Robin problem
//   -div grad u = f |x|^l in Omega,   du/dn + beta |x|^(l/2) u = 0 on the boundary.
#pragma once

#include "robinsym/mesh.hpp"

#include <Eigen/Sparse>

namespace robinsym {

using SparseMatrix = Eigen::SparseMatrix<double>;
using Vector = Eigen::VectorXd;
using ScalarFn = std::function<double(const Vec2&)>;

// Nodal values of a P1 field on a mesh.  The mesh is referenced, not owned.
struct FemField {
    const TriangleMesh* mesh = nullptr;
    Vector values;

    double value(int node) const { return values[node]; }
};

struct EigenResult {
    double lambda = 0.0;
    FemField field;      // normalized: field' M field = 1, sign fixed
    double residual = 0.0;
};

// Int grad phi_i . grad phi_j dx.  Row sums vanish; K + beta B is SPD.
SparseMatrix assemble_stiffness(const TriangleMesh& mesh);

// Int phi_i phi_j |x|^l dx.  Origin-adjacent triangles use exact radial
// moments in polar form; the rest a degree-5 rule with subdivision.
SparseMatrix assemble_weighted_mass(const TriangleMesh& mesh, double l);

// Int phi_i phi_j |x|^(l/2) ds over the tagged boundary (times
// beta_fn(x)/beta when a variable coefficient is present), so beta * B is
// always the Robin term of the bilinear form.
SparseMatrix assemble_boundary_mass(const TriangleMesh& mesh, double l,
                                    double beta = 1.0, const BetaFn& beta_fn = {});

// b_i = Int f phi_i |x|^l dx, f evaluated at quadrature points.
// Emits a warning on stderr when f is negative at some node.
Vector assemble_load(const TriangleMesh& mesh, const ScalarFn& f, double l);

// (K + beta B) u = b by diagonally preconditioned CG from a zero start,
// relative residual 1e-10; throws when 20n iterations do not get there.
FemField solve_robin(const TriangleMesh& mesh, const WeightedDomain& domain,
                     const ScalarFn& f);

// Smallest eigenpair of (K + beta B) x = lambda M x by inverse power
// iteration with CG inner solves; residual ||Ax - lambda Mx|| / ||x|| <= 1e-8.
EigenResult smallest_eigenpair(const TriangleMesh& mesh, const WeightedDomain& domain);

// weighted norms of P1 fields against an assembled weighted mass matrix
double weighted_l1_norm(const SparseMatrix& weighted_mass, const Vector& u);
double weighted_l2_norm(const SparseMatrix& weighted_mass, const Vector& u);

// Int_T f(x) (phi_0, phi_1, phi_2)^T |x|^l dx on one triangle
Eigen::Vector3d weighted_p1_integral(const TriangleMesh& mesh, int t,
                                     const ScalarFn& f, double l);

void write_field_csv(const FemField& field, std::ostream& out);

} // namespace robinsym

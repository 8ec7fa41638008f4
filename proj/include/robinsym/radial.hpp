// Radial solver on the symmetrized disk: torsion-type problems driven by a
// rearranged source profile, and the first Robin eigenvalue of the weighted
// Laplacian, both reduced to one dimension.
#pragma once

#include "robinsym/geometry.hpp"
#include "robinsym/rearrange.hpp"

#include <iosfwd>

namespace robinsym {

// Solution of  -div(grad v) = f^sharp(x) |x|^l  on the disk with
// grad v . nu + beta |x|^(l/2) v = 0, obtained in closed form from the
// measure variable sigma = 2 pi r^(l+2) / (l+2).  Between the profile's
// breakpoints the cumulative source is quadratic in sigma, so every tail
// integral has an elementary antiderivative (quadratic plus log) and the
// evaluator is exact up to rounding.
struct RadialField {
    double R = 0.0, l = 0.0, beta = 0.0;
    Eigen::VectorXd radii;   // graded grid 0 = r_0 < ... < r_n = R
    Eigen::VectorXd values;  // v at the grid radii

    double value(double r) const;          // exact evaluator, any r in [0, R]
    double sigma(double r) const;          // 2 pi r^(l+2) / (l+2)
    double flux(double r) const;           // Q(r) = Int_0^r f^sharp rho^(l+1) drho
    double weighted_lp_norm(double p) const;  // (Int v^p |x|^l)^(1/p), p in {1, 2}

    // closed-form machinery, in sigma coordinates
    Eigen::VectorXd seg_s;       // breakpoints of f^sharp, strictly ascending
    Eigen::VectorXd seg_fa, seg_fb;  // source values at each segment's ends
    Eigen::VectorXd cum_source;  // Int_0^{s_j} f^sharp, per breakpoint
    Eigen::VectorXd tail;        // Int_{s_j}^{S} (cum source)/sigma dsigma
    double v_R = 0.0;

    double value_at_sigma(double s) const;
    double cumulative_source(double s) const;
};

// pre: profile.total_measure matches disk.weighted_measure to 1e-6 relative
RadialField solve_symmetrized(const RearrangementProfile& fsharp,
                              const SymmetrizedDisk& disk, int n_grid = 2048);

// Distribution function of the radial field, by exact inversion of its
// table: levels are the grid values, measures the corresponding sigma.
DistributionCurve radial_distribution(const RadialField& v);

struct RadialEigenResult {
    double lambda = 0.0;         // Richardson-extrapolated over (n, 2n)
    double lambda_fine = 0.0;    // raw value on the 2n grid
    double lambda_coarse = 0.0;  // raw value on the n grid
    double residual = 0.0;       // discrete eigen residual on the fine grid
    Eigen::VectorXd radii;       // fine grid
    Eigen::VectorXd values;      // eigenfunction, positive, W-normalized
};

// Smallest eigenvalue of -div(grad v) = lambda |x|^l v with the Robin
// condition, via a finite-volume tridiagonal discretization of the
// Sturm-Liouville form -(r v')' = lambda r^(l+1) v on a graded grid and
// inverse power iteration.
RadialEigenResult radial_eigen(const SymmetrizedDisk& disk, int n_grid = 4096);

void write_radial_csv(const RadialField& field, std::ostream& out);  // r,v

} // namespace robinsym

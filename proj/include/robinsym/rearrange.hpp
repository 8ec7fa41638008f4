// Weighted distribution functions, decreasing rearrangements, and the
// Schwarz symmetrization of P1 fields, all against the |x|^l measure.
#pragma once

#include "robinsym/fem.hpp"

#include <iosfwd>

namespace robinsym {

// mu(t) = |{ |u| > t }|_l sampled at ascending levels.  A level may appear
// twice when the field is flat on a set of positive measure: the first
// entry carries the left limit, the second the right-continuous value, so
// the curve represents jumps exactly.
struct DistributionCurve {
    Eigen::VectorXd levels;
    Eigen::VectorXd measures;   // nonincreasing
    double total_measure = 0.0; // |Omega|_l

    double value(double t) const;  // right-continuous, linear between levels
};

// u*(s) = inf{ t >= 0 : mu(t) < s } on [0, total_measure].  Plateaus of mu
// become jumps (duplicated s entries) and jumps of mu become plateaus.
struct RearrangementProfile {
    Eigen::VectorXd s;
    Eigen::VectorXd values;  // nonincreasing
    double total_measure = 0.0;

    double value(double s) const;
    double integral(double s_hi) const;   // Int_0^{s_hi} u* ds
    double integral_pow(double p) const;  // Int_0^{total} (u*)^p ds, p in {1, 2}
};

// Exact per-triangle clipping of the linear interpolant against each level;
// levels are measure-weighted quantiles of the nodal values plus 0, with
// flat-triangle values inserted as jump pairs.
DistributionCurve distribution_function(const FemField& field, double l,
                                        int n_levels = 512);

// Same clipping at caller-chosen levels (ascending, deduplicated).
DistributionCurve distribution_function(const FemField& field, double l,
                                        const std::vector<double>& levels);

RearrangementProfile decreasing_rearrangement(const DistributionCurve& curve);

// u_sharp(x) = u*(2 pi |x|^(l+2) / (l+2)); domain error outside the disk
// of the profile's total measure.
double schwarz_value(const RearrangementProfile& profile, const Vec2& x, double l);

// Rearranged source f^sharp: P1 interpolation of f (>= 0) on `mesh`, or on
// an internally built mesh when null, then the exact clipping path.
RearrangementProfile rearranged_source(const ScalarFn& f, const WeightedDomain& domain,
                                       int n_levels = 512,
                                       const TriangleMesh* mesh = nullptr);

struct HardyLittlewoodResult {
    double lhs = 0.0;             // Int_E u |x|^l dx
    double rhs = 0.0;             // Int_0^{|E|_l} u* ds
    double subset_measure = 0.0;  // |E|_l
    bool pass = false;            // lhs <= rhs + 1e-6 rhs
};

// Precomputed per-triangle data so many subsets of one field stay cheap.
struct HardyLittlewoodContext {
    const FemField* field = nullptr;
    double l = 0.0;
    Eigen::VectorXd triangle_integral;  // Int_T u |x|^l dx
    Eigen::VectorXd triangle_measure;   // |T|_l
    RearrangementProfile profile;
};

HardyLittlewoodContext make_hardy_littlewood_context(const FemField& field, double l,
                                                     int n_levels = 512);

HardyLittlewoodResult hardy_littlewood_check(const HardyLittlewoodContext& ctx,
                                             const std::vector<int>& subset_triangles);

// convenience form matching the one-shot operation
HardyLittlewoodResult hardy_littlewood_check(const FemField& field, double l,
                                             const std::vector<int>& subset_triangles);

void write_distribution_csv(const DistributionCurve& curve, std::ostream& out);  // t,mu
void write_profile_csv(const RearrangementProfile& profile, std::ostream& out);  // s,u_star

} // namespace robinsym

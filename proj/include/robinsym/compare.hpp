// Certified comparisons between a polygonal Robin problem and its
// symmetrized radial counterpart, with Richardson-style margins attached to
// every inequality so a pass is meaningful at finite resolution.
#pragma once

#include "robinsym/mesh.hpp"
#include "robinsym/radial.hpp"

#include <string>
#include <vector>

namespace robinsym {

// one inequality lhs <= rhs + margin
struct CheckResult {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0;
    bool pass = false;
};

struct ComparisonReport {
    std::string domain_name;
    double l = 0.0, beta = 0.0, h = 0.0;
    std::vector<CheckResult> checks;
    std::vector<std::string> errors;  // failures of machinery, not of math
    double weighted_area = 0.0;       // |Omega|_l
    double r_sharp = 0.0;
    double C_l = 0.0;                 // 2 pi (l+2)

    bool all_pass() const;
};

struct SuiteOptions {
    double h = 0.1;
    int n_levels = 512;
    int n_radii = 256;       // graded radii for pointwise comparison
    int n_grid = 2048;       // radial solve resolution
    int eigen_grid = 2048;   // radial eigensolve base grid
    int hl_subsets = 32;     // random subsets per Hardy-Littlewood pass
    unsigned seed = 42;
    // which families to run; empty list runs nothing
    std::vector<std::string> families = {"isoperimetric",   "norm_domination",
                                         "pointwise",       "faber_krahn",
                                         "min_comparison",  "hardy_littlewood"};
};

// P_{l/2}^2 >= C(l) |Omega|_l, margin 1e-6 relative
ComparisonReport isoperimetric_report(const WeightedDomain& domain,
                                      const std::string& name);

// ||v||_{1,l} >= ||u||_{1,l} and same in L^2, margins from an h vs h/2 pair
ComparisonReport norm_domination_report(const WeightedDomain& domain,
                                        const std::string& name, const ScalarFn& f,
                                        const std::string& f_label,
                                        const SuiteOptions& opts);

// f == 1 only: u_sharp(r) <= v(r) on graded radii, sup-norm margin
ComparisonReport pointwise_domination_report(const WeightedDomain& domain,
                                             const std::string& name,
                                             const SuiteOptions& opts);

// lambda_1(Omega) >= lambda_1(disk), FEM pair vs extrapolated radial value
ComparisonReport faber_krahn_report(const WeightedDomain& domain,
                                    const std::string& name, const SuiteOptions& opts);

// 0 <= min u and min u <= min v
ComparisonReport min_comparison_report(const WeightedDomain& domain,
                                       const std::string& name, const ScalarFn& f,
                                       const std::string& f_label,
                                       const SuiteOptions& opts);

// Int_E u|x|^l <= Int_0^{|E|_l} u* over seeded random triangle subsets
ComparisonReport hardy_littlewood_report(const WeightedDomain& domain,
                                         const std::string& name,
                                         const SuiteOptions& opts);

// every family in opts.families, torsion source f == 1 plus the pinned
// nonradial source 1 + max(0, x) for the norm and min families; machinery
// errors are collected per report instead of thrown
std::vector<ComparisonReport> full_suite(const WeightedDomain& domain,
                                         const std::string& name,
                                         const SuiteOptions& opts);

ScalarFn source_by_name(const std::string& name);  // "one", "nonradial", "zero"

std::string report_to_json(const ComparisonReport& report, int indent = 2);
std::string reports_to_json(const std::vector<ComparisonReport>& reports, int indent = 2);

} // namespace robinsym

#include "doctest.h"
#include "robinsym/compare.hpp"

#include "json.hpp"

#include <cmath>

using namespace robinsym;

namespace {

WeightedDomain make(const std::string& shape, double l = 0.0, double beta = 1.0) {
    WeightedDomain d;
    d.vertices = gallery_shape(shape);
    d.l = l;
    d.beta = beta;
    validate(d);
    return d;
}

SuiteOptions small_opts() {
    SuiteOptions o;
    o.h = 0.2;
    o.n_levels = 128;
    o.n_radii = 64;
    o.n_grid = 256;
    o.eigen_grid = 512;
    o.hl_subsets = 6;
    return o;
}

} // namespace

TEST_SUITE("compare") {

TEST_CASE("isoperimetric report on the square and near-equality on a disk") {
    ComparisonReport r = isoperimetric_report(make("square"), "square");
    REQUIRE(r.checks.size() == 1);
    CHECK(r.checks[0].name == "isoperimetric");
    CHECK(r.checks[0].pass);
    CHECK(r.all_pass());
    CHECK(r.C_l == doctest::Approx(4.0 * M_PI).epsilon(1e-12));
    CHECK(r.r_sharp == doctest::Approx(2.0 / std::sqrt(M_PI)).epsilon(1e-8));
    CHECK(r.checks[0].lhs == doctest::Approx(16.0 * M_PI).epsilon(1e-8));
    CHECK(r.checks[0].rhs == doctest::Approx(64.0).epsilon(1e-8));

    ComparisonReport disk = isoperimetric_report(make("ngon:128", -1.0), "disk");
    CHECK(disk.all_pass());
    CHECK(disk.checks[0].rhs / disk.checks[0].lhs - 1.0 <= 1e-3);
}

TEST_CASE("norm domination holds for radial and nonradial sources") {
    const SuiteOptions opts = small_opts();
    for (double l : {0.0, -1.0}) {
        ComparisonReport r = norm_domination_report(
            make("square", l), "square", source_by_name("one"), "one", opts);
        REQUIRE(r.checks.size() == 2);
        CAPTURE(l);
        CHECK(r.checks[0].name == "l1_domination:one");
        CHECK(r.checks[1].name == "l2_domination:one");
        CHECK(r.all_pass());
        CHECK(r.checks[0].lhs < r.checks[0].rhs);
        CHECK(r.checks[1].lhs < r.checks[1].rhs);
    }

    ComparisonReport rn = norm_domination_report(
        make("lshape", -0.5), "lshape", source_by_name("nonradial"), "nonradial", opts);
    CHECK(rn.all_pass());
    CHECK(rn.checks[0].name == "l1_domination:nonradial");
}

TEST_CASE("margins shrink when the mesh is refined") {
    SuiteOptions coarse = small_opts();
    coarse.h = 0.3;
    SuiteOptions fine = small_opts();
    fine.h = 0.15;
    const WeightedDomain d = make("square");

    ComparisonReport rc =
        norm_domination_report(d, "square", source_by_name("one"), "one", coarse);
    ComparisonReport rf =
        norm_domination_report(d, "square", source_by_name("one"), "one", fine);
    for (int k : {0, 1}) {
        CAPTURE(k);
        CHECK(rf.checks[k].margin <= 0.5 * rc.checks[k].margin);
    }
}

TEST_CASE("pointwise domination, with near-equality on a disk") {
    const SuiteOptions opts = small_opts();
    ComparisonReport r = pointwise_domination_report(make("square", -0.5), "square", opts);
    REQUIRE(r.checks.size() == 1);
    CHECK(r.checks[0].name == "pointwise_domination");
    CHECK(r.all_pass());

    ComparisonReport disk = pointwise_domination_report(make("ngon:128"), "disk", opts);
    CHECK(disk.all_pass());
    // on the disk the two solutions coincide, so the worst gap is tiny
    CHECK(std::abs(disk.checks[0].lhs) <= 2e-2);
}

TEST_CASE("symmetrization lowers the first eigenvalue") {
    const SuiteOptions opts = small_opts();
    ComparisonReport r = faber_krahn_report(make("square", -1.0), "square", opts);
    REQUIRE(r.checks.size() == 1);
    CHECK(r.checks[0].name == "faber_krahn");
    CHECK(r.all_pass());
    CHECK(r.checks[0].lhs < r.checks[0].rhs);

    ComparisonReport disk = faber_krahn_report(make("ngon:128"), "disk", opts);
    CHECK(disk.all_pass());
    CHECK(std::abs(disk.checks[0].lhs / disk.checks[0].rhs - 1.0) <= 2e-2);
}

TEST_CASE("minimum comparison") {
    const SuiteOptions opts = small_opts();
    ComparisonReport r = min_comparison_report(make("square"), "square",
                                               source_by_name("one"), "one", opts);
    REQUIRE(r.checks.size() == 2);
    CHECK(r.checks[0].name == "min_nonnegative:one");
    CHECK(r.checks[1].name == "min_domination:one");
    CHECK(r.all_pass());
}

TEST_CASE("Hardy-Littlewood report") {
    const SuiteOptions opts = small_opts();
    ComparisonReport r = hardy_littlewood_report(make("lshape", -1.0), "lshape", opts);
    REQUIRE(r.checks.size() == 1);
    CHECK(r.checks[0].name == "hardy_littlewood");
    CHECK(r.all_pass());
}

TEST_CASE("full suite composition and error capture") {
    SuiteOptions opts = small_opts();
    const WeightedDomain d = make("ngon:64", -0.5);

    std::vector<ComparisonReport> reports = full_suite(d, "ngon:64", opts);
    CHECK(reports.size() == 8);
    for (const ComparisonReport& r : reports) {
        CAPTURE(r.domain_name);
        CHECK(r.errors.empty());
        CHECK(r.all_pass());
    }

    opts.families = {};
    CHECK(full_suite(d, "ngon:64", opts).empty());

    opts.families = {"no_such_family"};
    CHECK_THROWS_AS(full_suite(d, "ngon:64", opts), std::invalid_argument);

    // machinery failures land in the report instead of propagating
    SuiteOptions bad = small_opts();
    bad.h = 100.0;
    bad.families = {"norm_domination"};
    std::vector<ComparisonReport> broken = full_suite(d, "ngon:64", bad);
    REQUIRE(!broken.empty());
    CHECK(!broken[0].errors.empty());
    CHECK(!broken[0].all_pass());
}

TEST_CASE("JSON serialization schema") {
    ComparisonReport r = isoperimetric_report(make("square", -1.0, 2.0), "square");
    const nlohmann::json j = nlohmann::json::parse(report_to_json(r));

    CHECK(j["domain"] == "square");
    CHECK(j["l"] == doctest::Approx(-1.0));
    CHECK(j["beta"] == doctest::Approx(2.0));
    CHECK(j.contains("h"));
    REQUIRE(j["checks"].is_array());
    REQUIRE(j["checks"].size() == 1);
    for (const char* key : {"name", "lhs", "rhs", "margin", "pass"})
        CHECK(j["checks"][0].contains(key));
    for (const char* key : {"area_l", "r_sharp", "C_l"})
        CHECK(j["constants"].contains(key));
    CHECK(!j.contains("errors"));

    ComparisonReport withErr;
    withErr.domain_name = "x";
    withErr.errors.push_back("boom");
    const nlohmann::json je = nlohmann::json::parse(report_to_json(withErr));
    CHECK(je.contains("errors"));

    const nlohmann::json all =
        nlohmann::json::parse(reports_to_json({r, r}));
    REQUIRE(all["reports"].is_array());
    CHECK(all["reports"].size() == 2);
    CHECK(all["all_pass"] == true);
}

TEST_CASE("source_by_name") {
    CHECK(source_by_name("one")(Vec2(3.0, 4.0)) == 1.0);
    CHECK(source_by_name("zero")(Vec2(1.0, 1.0)) == 0.0);
    CHECK(source_by_name("nonradial")(Vec2(0.5, 0.0)) == doctest::Approx(1.5));
    CHECK(source_by_name("nonradial")(Vec2(-0.5, 0.0)) == doctest::Approx(1.0));
    CHECK_THROWS_AS(source_by_name("bogus"), std::invalid_argument);
}

} // TEST_SUITE

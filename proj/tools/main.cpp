// Command-line front end: weighted measures, Robin solves, symmetrization,
// eigenvalues, comparison suites, and a convergence table.
#include "robinsym/compare.hpp"
#include "robinsym/fem.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace robinsym;

namespace {

struct Options {
    std::string shape, vertices_file, source = "one", out_dir = ".";
    double l = 0.0, beta = 1.0, h = 0.1;
    int levels = 512, grid = 2048, radii = 256, subsets = 32, refinements = 3;
    unsigned seed = 42;
    bool dump_mesh = false;
};

std::string domain_label(const Options& opt) {
    if (!opt.shape.empty()) return opt.shape;
    return "file:" + fs::path(opt.vertices_file).filename().string();
}

WeightedDomain make_domain(const Options& opt) {
    if (!opt.shape.empty() && !opt.vertices_file.empty())
        throw std::invalid_argument("give either --shape or --vertices, not both");
    if (opt.shape.empty() && opt.vertices_file.empty())
        throw std::invalid_argument("a domain is required: --shape or --vertices");
    WeightedDomain d;
    d.vertices = opt.shape.empty() ? read_vertices_file(opt.vertices_file)
                                   : gallery_shape(opt.shape);
    d.l = opt.l;
    d.beta = opt.beta;
    validate(d);
    return d;
}

std::ofstream open_out(const Options& opt, const std::string& name) {
    fs::create_directories(opt.out_dir);
    std::ofstream out(fs::path(opt.out_dir) / name);
    if (!out) throw std::runtime_error("cannot write " + name + " in " + opt.out_dir);
    out.precision(17);
    return out;
}

void write_json(const Options& opt, const std::string& name, const json& j) {
    std::ofstream out = open_out(opt, name);
    out << j.dump(2) << '\n';
}

int run_measure(const Options& opt) {
    const WeightedDomain domain = make_domain(opt);
    const double area = weighted_area(domain);
    const double per = weighted_perimeter(domain);
    const SymmetrizedDisk disk = symmetrized_disk(area, domain.l, domain.beta);
    const double ratio = per * per / (2.0 * M_PI * (domain.l + 2.0) * area);

    json j;
    j["domain"] = domain_label(opt);
    j["l"] = domain.l;
    j["beta"] = domain.beta;
    j["weighted_area"] = area;
    j["weighted_perimeter"] = per;
    j["r_sharp"] = disk.radius;
    j["isoperimetric_ratio"] = ratio;
    j["C_l"] = 2.0 * M_PI * (domain.l + 2.0);
    write_json(opt, "measure.json", j);

    std::cout.precision(12);
    std::cout << "weighted area        " << area << '\n'
              << "weighted perimeter   " << per << '\n'
              << "r_sharp              " << disk.radius << '\n'
              << "isoperimetric ratio  " << ratio << '\n';
    return 0;
}

int run_solve(const Options& opt) {
    const WeightedDomain domain = make_domain(opt);
    const ScalarFn f = source_by_name(opt.source);
    const TriangleMesh mesh = triangulate(domain, opt.h);
    const FemField u = solve_robin(mesh, domain, f);
    const SparseMatrix M = assemble_weighted_mass(mesh, domain.l);

    {
        std::ofstream out = open_out(opt, "solution.csv");
        write_field_csv(u, out);
    }
    if (opt.dump_mesh) {
        std::ofstream out = open_out(opt, "mesh.txt");
        write_mesh(mesh, out);
    }
    json j;
    j["domain"] = domain_label(opt);
    j["l"] = domain.l;
    j["beta"] = domain.beta;
    j["h"] = opt.h;
    j["f"] = opt.source;
    j["nodes"] = mesh.nodes.size();
    j["triangles"] = mesh.triangles.size();
    j["min"] = u.values.minCoeff();
    j["max"] = u.values.maxCoeff();
    j["weighted_l1"] = weighted_l1_norm(M, u.values);
    j["weighted_l2"] = weighted_l2_norm(M, u.values);
    j["min_angle_deg"] = mesh_min_angle_deg(mesh);
    write_json(opt, "solve.json", j);

    std::cout.precision(12);
    std::cout << "nodes " << mesh.nodes.size() << "  triangles " << mesh.triangles.size()
              << "  min angle " << mesh_min_angle_deg(mesh) << '\n'
              << "u in [" << u.values.minCoeff() << ", " << u.values.maxCoeff() << "]\n";
    return 0;
}

int run_symmetrize(const Options& opt) {
    const WeightedDomain domain = make_domain(opt);
    const ScalarFn f = source_by_name(opt.source);
    const TriangleMesh mesh = triangulate(domain, opt.h);
    const FemField u = solve_robin(mesh, domain, f);

    const DistributionCurve mu = distribution_function(u, domain.l, opt.levels);
    const RearrangementProfile ustar = decreasing_rearrangement(mu);
    const double area = weighted_area(domain);
    const SymmetrizedDisk disk = symmetrized_disk(area, domain.l, domain.beta);
    const RearrangementProfile fs = rearranged_source(f, domain, opt.levels, &mesh);
    const RadialField v = solve_symmetrized(fs, disk, opt.grid);

    {
        std::ofstream out = open_out(opt, "mu.csv");
        write_distribution_csv(mu, out);
    }
    {
        std::ofstream out = open_out(opt, "u_star.csv");
        write_profile_csv(ustar, out);
    }
    {
        std::ofstream out = open_out(opt, "v.csv");
        write_radial_csv(v, out);
    }
    json j;
    j["domain"] = domain_label(opt);
    j["l"] = domain.l;
    j["beta"] = domain.beta;
    j["h"] = opt.h;
    j["f"] = opt.source;
    j["R"] = disk.radius;
    j["total_measure"] = mu.total_measure;
    j["u_star_max"] = ustar.values.size() ? ustar.values[0] : 0.0;
    j["v_center"] = v.values[0];
    j["v_boundary"] = v.values[v.values.size() - 1];
    write_json(opt, "symmetrize.json", j);

    std::cout.precision(12);
    std::cout << "R " << disk.radius << "  |Omega|_l " << mu.total_measure << '\n'
              << "u* max " << (ustar.values.size() ? ustar.values[0] : 0.0) << "  v(0) "
              << v.values[0] << "  v(R) " << v.values[v.values.size() - 1] << '\n';
    return 0;
}

int run_eigen(const Options& opt) {
    const WeightedDomain domain = make_domain(opt);
    const TriangleMesh mesh = triangulate(domain, opt.h);
    const EigenResult fem = smallest_eigenpair(mesh, domain);
    const double area = weighted_area(domain);
    const SymmetrizedDisk disk = symmetrized_disk(area, domain.l, domain.beta);
    const RadialEigenResult rad = radial_eigen(disk, opt.grid);

    json j;
    j["domain"] = domain_label(opt);
    j["l"] = domain.l;
    j["beta"] = domain.beta;
    j["h"] = opt.h;
    j["lambda_fem"] = fem.lambda;
    j["residual_fem"] = fem.residual;
    j["lambda_radial"] = rad.lambda;
    j["lambda_radial_fine"] = rad.lambda_fine;
    j["lambda_radial_coarse"] = rad.lambda_coarse;
    j["residual_radial"] = rad.residual;
    j["ratio"] = fem.lambda / rad.lambda;
    write_json(opt, "eigen.json", j);

    std::cout.precision(12);
    std::cout << "lambda_1 domain (FEM)   " << fem.lambda << '\n'
              << "lambda_1 disk (radial)  " << rad.lambda << '\n'
              << "ratio                   " << fem.lambda / rad.lambda << '\n';
    return 0;
}

int run_compare(const Options& opt) {
    const WeightedDomain domain = make_domain(opt);
    SuiteOptions sopts;
    sopts.h = opt.h;
    sopts.n_levels = opt.levels;
    sopts.n_radii = opt.radii;
    sopts.n_grid = opt.grid;
    sopts.hl_subsets = opt.subsets;
    sopts.seed = opt.seed;
    const std::vector<ComparisonReport> reports = full_suite(domain, domain_label(opt), sopts);

    {
        std::ofstream out = open_out(opt, "compare.json");
        out << reports_to_json(reports) << '\n';
    }
    std::cout.precision(12);
    bool all = true;
    for (const ComparisonReport& r : reports) {
        for (const std::string& e : r.errors) {
            std::cout << "[ERROR] " << e << '\n';
            all = false;
        }
        for (const CheckResult& c : r.checks) {
            std::cout << (c.pass ? "[PASS] " : "[FAIL] ") << c.name << "  lhs " << c.lhs
                      << "  rhs " << c.rhs << "  margin " << c.margin << '\n';
            all = all && c.pass;
        }
    }
    return all ? 0 : 1;
}

int run_convergence(Options opt) {
    if (opt.shape.empty() && opt.vertices_file.empty()) opt.shape = "ngon:1024";
    const WeightedDomain domain = make_domain(opt);
    const double area = weighted_area(domain);
    const SymmetrizedDisk disk = symmetrized_disk(area, domain.l, domain.beta);
    RearrangementProfile one;
    one.total_measure = disk.weighted_measure;
    one.s.resize(2);
    one.values.resize(2);
    one.s << 0.0, disk.weighted_measure;
    one.values << 1.0, 1.0;
    const RadialField v = solve_symmetrized(one, disk, opt.grid);

    std::vector<double> hs, errs, lambdas;
    TriangleMesh mesh = triangulate(domain, opt.h);
    for (int k = 0; k < std::max(1, opt.refinements); ++k) {
        if (k > 0) mesh = refine(mesh);
        const FemField u = solve_robin(mesh, domain, source_by_name("one"));
        double err = 0.0;
        for (size_t i = 0; i < mesh.nodes.size(); ++i)
            err = std::max(err, std::abs(u.values[(long)i] - v.value(mesh.nodes[i].norm())));
        hs.push_back(mesh.h);
        errs.push_back(err);
        lambdas.push_back(smallest_eigenpair(mesh, domain).lambda);
    }

    std::ofstream out = open_out(opt, "convergence.csv");
    const bool single = hs.size() == 1;
    out << (single ? "h,linf_error,lambda\n" : "h,linf_error,lambda,lambda_margin,order\n");
    std::cout << "        h    linf_error        lambda      order\n";
    for (size_t k = 0; k < hs.size(); ++k) {
        out << hs[k] << ',' << errs[k] << ',' << lambdas[k];
        if (!single) {
            out << ',';
            if (k > 0) out << std::abs(lambdas[k] - lambdas[k - 1]);
            out << ',';
            if (k > 0) out << std::log2(errs[k - 1] / errs[k]);
        }
        out << '\n';
        std::cout.precision(6);
        std::cout << std::setw(9) << hs[k] << "  " << std::setw(12) << errs[k] << "  "
                  << std::setw(12) << lambdas[k] << "  ";
        if (k > 0) std::cout << std::setw(9) << std::log2(errs[k - 1] / errs[k]);
        std::cout << '\n';
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for weighted Robin symmetrization on the plane"};
    app.set_help_flag("--help", "print usage");  // frees -h for the mesh size
    app.require_subcommand(1);
    Options opt;

    app.add_option("--shape", opt.shape,
                   "gallery domain: square | rectangle[:a:b] | ngon:n[:r] | lshape");
    app.add_option("--vertices", opt.vertices_file, "polygon file, one 'x y' pair per line")
        ->check(CLI::ExistingFile);
    app.add_option("--l", opt.l, "weight exponent, in (-2, 0]")->capture_default_str();
    app.add_option("--beta", opt.beta, "Robin parameter, > 0")->capture_default_str();
    app.add_option("--f", opt.source, "source: one | nonradial | zero")->capture_default_str();
    app.add_option("--h", opt.h, "target mesh size")->capture_default_str();
    app.add_option("--levels", opt.levels, "levels for distribution functions")
        ->capture_default_str();
    app.add_option("--grid", opt.grid, "radial grid resolution")->capture_default_str();
    app.add_option("--radii", opt.radii, "sample radii for pointwise comparison")
        ->capture_default_str();
    app.add_option("--subsets", opt.subsets, "random subsets per rearrangement spot check")
        ->capture_default_str();
    app.add_option("--seed", opt.seed, "seed for randomized checks")->capture_default_str();
    app.add_option("--out", opt.out_dir, "output directory")->capture_default_str();
    app.set_config("--config", "", "key=value file; command-line flags win");

    CLI::App* c_measure = app.add_subcommand("measure", "weighted area, perimeter, r_sharp");
    CLI::App* c_solve = app.add_subcommand("solve", "Robin solve on a triangulation");
    c_solve->add_flag("--dump-mesh", opt.dump_mesh, "also write mesh.txt");
    CLI::App* c_symm =
        app.add_subcommand("symmetrize", "distribution, rearrangement, radial comparison data");
    CLI::App* c_eigen = app.add_subcommand("eigen", "first Robin eigenvalue, domain vs disk");
    CLI::App* c_compare = app.add_subcommand("compare", "run the full comparison suite");
    CLI::App* c_conv =
        app.add_subcommand("convergence", "refinement study against the radial closed form");
    c_conv->add_option("--refinements", opt.refinements, "number of mesh levels")
        ->capture_default_str();
    for (CLI::App* sub : {c_measure, c_solve, c_symm, c_eigen, c_compare, c_conv})
        sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (app.got_subcommand(c_measure)) return run_measure(opt);
        if (app.got_subcommand(c_solve)) return run_solve(opt);
        if (app.got_subcommand(c_symm)) return run_symmetrize(opt);
        if (app.got_subcommand(c_eigen)) return run_eigen(opt);
        if (app.got_subcommand(c_compare)) return run_compare(opt);
        if (app.got_subcommand(c_conv)) return run_convergence(opt);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}

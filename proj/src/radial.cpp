#include "robinsym/radial.hpp"
#include "robinsym/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace robinsym {

namespace {

// grading exponent: clusters points at the origin once l + 2 < 2
double grid_exponent(double l) { return std::max(1.0, 2.0 / (l + 2.0)); }

// Int_sa^sb (A s^2 + B s + C)/s ds, the log term dropped at sa == 0 where
// C vanishes identically
double quad_over_s(double A, double B, double C, double sa, double sb) {
    double out = 0.5 * A * (sb * sb - sa * sa) + B * (sb - sa);
    if (sa > 0.0 && C != 0.0) out += C * std::log(sb / sa);
    return out;
}

struct SegCoef {
    double A, B, C;
};

SegCoef seg_coefficients(double sa, double sb, double fa, double fb, double I) {
    const double slope = (fb - fa) / (sb - sa);
    SegCoef c;
    c.A = 0.5 * slope;
    c.B = fa - sa * slope;
    c.C = I - fa * sa + 0.5 * sa * sa * slope;
    return c;
}

} // namespace

double RadialField::sigma(double r) const {
    return 2.0 * M_PI * std::pow(r, l + 2.0) / (l + 2.0);
}

double RadialField::cumulative_source(double s) const {
    const long m = seg_s.size() - 1;
    if (s <= seg_s[0]) return 0.0;
    long j = std::upper_bound(seg_s.data(), seg_s.data() + m + 1, s) - seg_s.data() - 1;
    j = std::min(j, m - 1);
    const double sa = seg_s[j], sb = seg_s[j + 1];
    const double w = (s - sa) / (sb - sa);
    const double fs = seg_fa[j] + w * (seg_fb[j] - seg_fa[j]);
    return cum_source[j] + (s - sa) * 0.5 * (seg_fa[j] + fs);
}

double RadialField::value_at_sigma(double s) const {
    const long m = seg_s.size() - 1;
    const double S = seg_s[m];
    if (s >= S) return v_R;
    if (s <= seg_s[0]) return v_R + tail[0] / (2.0 * M_PI * (l + 2.0));
    long j = std::upper_bound(seg_s.data(), seg_s.data() + m + 1, s) - seg_s.data() - 1;
    j = std::min(j, m - 1);
    const SegCoef c = seg_coefficients(seg_s[j], seg_s[j + 1], seg_fa[j], seg_fb[j], cum_source[j]);
    const double part = quad_over_s(c.A, c.B, c.C, s, seg_s[j + 1]);
    return v_R + (part + tail[j + 1]) / (2.0 * M_PI * (l + 2.0));
}

double RadialField::value(double r) const {
    return value_at_sigma(std::clamp(sigma(r), 0.0, seg_s[seg_s.size() - 1]));
}

double RadialField::flux(double r) const {
    return cumulative_source(std::clamp(sigma(r), 0.0, seg_s[seg_s.size() - 1])) / (2.0 * M_PI);
}

double RadialField::weighted_lp_norm(double p) const {
    if (p != 1.0 && p != 2.0)
        throw std::invalid_argument("weighted_lp_norm: only p = 1 or 2");
    double acc = 0.0;
    for (long j = 0; j + 1 < seg_s.size(); ++j) {
        auto g = [&](double s) { return std::pow(value_at_sigma(s), p); };
        acc += integrate_adaptive(g, seg_s[j], seg_s[j + 1], 1e-11);
    }
    return std::pow(acc, 1.0 / p);
}

RadialField solve_symmetrized(const RearrangementProfile& fsharp,
                              const SymmetrizedDisk& disk, int n_grid) {
    if (n_grid < 2) throw std::invalid_argument("solve_symmetrized: n_grid too small");
    if (fsharp.values.size() > 0 && fsharp.values.minCoeff() < 0.0)
        throw std::invalid_argument("solve_symmetrized: source profile takes negative values");
    const double S = disk.weighted_measure;
    if (std::abs(fsharp.total_measure - S) > 1e-6 * std::max(S, 1.0))
        throw std::invalid_argument(
            "solve_symmetrized: profile measure does not match the disk");

    RadialField v;
    v.R = disk.radius;
    v.l = disk.l;
    v.beta = disk.beta;

    // collapse the profile to strictly ascending breakpoints; zero-width
    // (jump) segments carry no mass and drop out
    std::vector<double> ss, fa, fb;
    const long K = fsharp.s.size();
    for (long k = 0; k + 1 < K; ++k) {
        if (fsharp.s[k + 1] > fsharp.s[k]) {
            ss.push_back(fsharp.s[k]);
            fa.push_back(fsharp.values[k]);
            fb.push_back(fsharp.values[k + 1]);
        }
    }
    if (ss.empty()) {
        // degenerate profile: a single jump column; treat as zero source
        ss = {0.0};
        fa = {0.0};
        fb = {0.0};
    }
    ss.push_back(fsharp.s[K - 1]);
    // the table keeps the profile's own total; sigma queries clamp onto it,
    // which absorbs the <= 1e-6 relative mismatch tolerated above
    const long m = (long)ss.size() - 1;
    v.seg_s = Eigen::Map<Eigen::VectorXd>(ss.data(), m + 1);
    v.seg_fa = Eigen::Map<Eigen::VectorXd>(fa.data(), m);
    v.seg_fb = Eigen::Map<Eigen::VectorXd>(fb.data(), m);

    v.cum_source.resize(m + 1);
    v.cum_source[0] = 0.0;
    for (long j = 0; j < m; ++j)
        v.cum_source[j + 1] =
            v.cum_source[j] + (v.seg_s[j + 1] - v.seg_s[j]) * 0.5 * (v.seg_fa[j] + v.seg_fb[j]);

    v.tail.resize(m + 1);
    v.tail[m] = 0.0;
    for (long j = m - 1; j >= 0; --j) {
        const SegCoef c =
            seg_coefficients(v.seg_s[j], v.seg_s[j + 1], v.seg_fa[j], v.seg_fb[j], v.cum_source[j]);
        v.tail[j] = v.tail[j + 1] + quad_over_s(c.A, c.B, c.C, v.seg_s[j], v.seg_s[j + 1]);
    }

    v.v_R = v.cum_source[m] /
            (2.0 * M_PI * disk.beta * std::pow(disk.radius, 0.5 * (disk.l + 2.0)));

    const double g = grid_exponent(disk.l);
    v.radii.resize(n_grid + 1);
    v.values.resize(n_grid + 1);
    for (int i = 0; i <= n_grid; ++i) {
        v.radii[i] = disk.radius * std::pow((double)i / n_grid, g);
        v.values[i] = v.value(v.radii[i]);
    }
    return v;
}

DistributionCurve radial_distribution(const RadialField& v) {
    const long n = v.radii.size() - 1;
    for (long i = 0; i < n; ++i)
        if (v.values[i + 1] > v.values[i])
            throw std::invalid_argument("radial_distribution: field is not radially nonincreasing");
    const double S = v.sigma(v.radii[n]);
    DistributionCurve curve;
    curve.total_measure = S;
    if (v.values[0] <= 0.0) {
        curve.levels = Eigen::VectorXd::Zero(1);
        curve.measures = Eigen::VectorXd::Zero(1);
        return curve;
    }
    std::vector<double> L = {0.0}, M = {S};
    // ascending levels; runs of equal values become a left-limit/right-value
    // pair so plateaus are represented exactly
    long i = n;
    while (i >= 0) {
        long j = i;
        while (j > 0 && v.values[j - 1] == v.values[i]) --j;
        const double lev = v.values[i];
        const double hi = v.sigma(v.radii[i]);
        const double lo = v.sigma(v.radii[j]);
        if (hi > lo) {
            L.push_back(lev);
            M.push_back(hi);
        }
        L.push_back(lev);
        M.push_back(lo);
        i = j - 1;
    }
    curve.levels = Eigen::Map<Eigen::VectorXd>(L.data(), (long)L.size());
    curve.measures = Eigen::Map<Eigen::VectorXd>(M.data(), (long)M.size());
    for (long k = 0; k < curve.measures.size(); ++k) {
        double m = std::clamp(curve.measures[k], 0.0, S);
        if (k > 0) m = std::min(m, curve.measures[k - 1]);
        curve.measures[k] = m;
    }
    return curve;
}

namespace {

// symmetric tridiagonal solve, diag/off overwritten by the factorization
void thomas_solve(Eigen::VectorXd& diag, const Eigen::VectorXd& off, Eigen::VectorXd& rhs) {
    const long n = diag.size();
    for (long i = 1; i < n; ++i) {
        const double w = off[i - 1] / diag[i - 1];
        diag[i] -= w * off[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    rhs[n - 1] /= diag[n - 1];
    for (long i = n - 2; i >= 0; --i) rhs[i] = (rhs[i] - off[i] * rhs[i + 1]) / diag[i];
}

double eigen_on_grid(const SymmetrizedDisk& disk, int n, Eigen::VectorXd* radii_out,
                     Eigen::VectorXd* values_out, double* residual_out) {
    const double R = disk.radius, l = disk.l, p = l + 2.0;
    const double g = grid_exponent(l);
    Eigen::VectorXd r(n + 1);
    for (int i = 0; i <= n; ++i) r[i] = R * std::pow((double)i / n, g);

    // flux coefficients at midpoints and lumped weighted volumes
    Eigen::VectorXd a(n), w(n + 1);
    for (int i = 0; i < n; ++i) a[i] = 0.5 * (r[i] + r[i + 1]) / (r[i + 1] - r[i]);
    w[0] = std::pow(0.5 * (r[0] + r[1]), p) / p;
    for (int i = 1; i < n; ++i)
        w[i] = (std::pow(0.5 * (r[i] + r[i + 1]), p) - std::pow(0.5 * (r[i - 1] + r[i]), p)) / p;
    w[n] = (std::pow(R, p) - std::pow(0.5 * (r[n - 1] + r[n]), p)) / p;

    Eigen::VectorXd diag(n + 1), off(n);
    diag[0] = a[0];
    for (int i = 1; i < n; ++i) diag[i] = a[i - 1] + a[i];
    diag[n] = a[n - 1] + disk.beta * std::pow(R, 0.5 * p);
    for (int i = 0; i < n; ++i) off[i] = -a[i];

    auto apply_A = [&](const Eigen::VectorXd& x) {
        Eigen::VectorXd y(n + 1);
        for (long i = 0; i <= n; ++i) {
            y[i] = diag[i] * x[i];
            if (i > 0) y[i] += off[i - 1] * x[i - 1];
            if (i < n) y[i] += off[i] * x[i + 1];
        }
        return y;
    };

    Eigen::VectorXd x = Eigen::VectorXd::Ones(n + 1);
    x /= std::sqrt(x.dot(w.cwiseProduct(x)));
    double lambda = 0.0, residual = 0.0;
    for (int it = 0; it < 200; ++it) {
        Eigen::VectorXd rhs = w.cwiseProduct(x);
        Eigen::VectorXd d = diag;
        thomas_solve(d, off, rhs);
        rhs /= std::sqrt(rhs.dot(w.cwiseProduct(rhs)));
        const Eigen::VectorXd Ax = apply_A(rhs);
        lambda = rhs.dot(Ax);
        residual = (Ax - lambda * w.cwiseProduct(rhs)).norm() / rhs.norm();
        x = rhs;
        if (residual <= 1e-12 * std::max(1.0, lambda)) break;
    }
    if (x[0] < 0.0) x = -x;
    if (radii_out) *radii_out = r;
    if (values_out) *values_out = x;
    if (residual_out) *residual_out = residual;
    return lambda;
}

} // namespace

RadialEigenResult radial_eigen(const SymmetrizedDisk& disk, int n_grid) {
    if (n_grid < 64) throw std::invalid_argument("radial_eigen: n_grid must be >= 64");
    RadialEigenResult out;
    out.lambda_coarse = eigen_on_grid(disk, n_grid, nullptr, nullptr, nullptr);
    out.lambda_fine =
        eigen_on_grid(disk, 2 * n_grid, &out.radii, &out.values, &out.residual);
    out.lambda = (4.0 * out.lambda_fine - out.lambda_coarse) / 3.0;
    if (out.residual > 1e-8 * std::max(1.0, out.lambda_fine))
        throw std::runtime_error("radial_eigen: inverse iteration did not converge");
    return out;
}

void write_radial_csv(const RadialField& field, std::ostream& out) {
    out.precision(17);
    out << "r,v\n";
    for (long i = 0; i < field.radii.size(); ++i)
        out << field.radii[i] << ',' << field.values[i] << '\n';
}

} // namespace robinsym

#include "robinsym/quadrature.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

namespace robinsym {

namespace {

GaussRule compute_gauss_rule(int n) {
    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    // Newton iteration on the Legendre polynomial, roots come in +/- pairs.
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            // three-term recurrence for P_n(x) and P_n'(x)
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    if (n == 1) {
        rule.nodes[0] = 0.0;
        rule.weights[0] = 2.0;
    }
    return rule;
}

double gauss_panel(const std::function<double(double)>& f,
                   double a, double b, const GaussRule& rule) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double sum = 0.0;
    for (int i = 0; i < rule.nodes.size(); ++i)
        sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
    return sum * half;
}

double gauss_panel_abs(const std::function<double(double)>& f,
                       double a, double b, const GaussRule& rule) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double sum = 0.0;
    for (int i = 0; i < rule.nodes.size(); ++i)
        sum += rule.weights[i] * std::abs(f(mid + half * rule.nodes[i]));
    return sum * std::abs(half);
}

double adapt(const std::function<double(double)>& f, double a, double b,
             double whole, double tol_abs, const GaussRule& rule, int depth) {
    const double mid = 0.5 * (a + b);
    const double left = gauss_panel(f, a, mid, rule);
    const double right = gauss_panel(f, mid, b, rule);
    if (depth <= 0 || std::abs(left + right - whole) <= tol_abs)
        return left + right;
    return adapt(f, a, mid, left, 0.5 * tol_abs, rule, depth - 1) +
           adapt(f, mid, b, right, 0.5 * tol_abs, rule, depth - 1);
}

} // namespace

const GaussRule& gauss_rule(int n) {
    if (n < 1 || n > 64) throw std::invalid_argument("gauss_rule: n out of range");
    static std::map<int, GaussRule> cache;
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, compute_gauss_rule(n)).first;
    return it->second;
}

double integrate_adaptive(const std::function<double(double)>& f,
                          double a, double b, double rel_tol, int n) {
    if (a == b) return 0.0;
    const GaussRule& rule = gauss_rule(n);
    const double whole = gauss_panel(f, a, b, rule);
    const double scale = gauss_panel_abs(f, a, b, rule);
    const double tol_abs = rel_tol * std::max(scale, 1e-300);
    return adapt(f, a, b, whole, tol_abs, rule, 24);
}

Eigen::VectorXd integrate_adaptive_vec(
    int dim,
    const std::function<void(double, Eigen::Ref<Eigen::VectorXd>)>& f,
    double a, double b, double rel_tol, int n) {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(dim);
    if (a == b) return out;
    const GaussRule& rule = gauss_rule(n);

    Eigen::VectorXd vals(dim);
    auto panel = [&](double lo, double hi, Eigen::VectorXd& acc, Eigen::VectorXd* acc_abs) {
        const double mid = 0.5 * (lo + hi);
        const double half = 0.5 * (hi - lo);
        acc.setZero();
        for (int i = 0; i < rule.nodes.size(); ++i) {
            f(mid + half * rule.nodes[i], vals);
            acc += rule.weights[i] * vals;
            if (acc_abs) *acc_abs += std::abs(half) * rule.weights[i] * vals.cwiseAbs();
        }
        acc *= half;
    };

    Eigen::VectorXd scale = Eigen::VectorXd::Zero(dim);
    Eigen::VectorXd whole(dim);
    panel(a, b, whole, &scale);
    Eigen::VectorXd tol = (rel_tol * scale).cwiseMax(1e-300);

    struct Item { double a, b; Eigen::VectorXd whole; Eigen::VectorXd tol; int depth; };
    std::vector<Item> stack;
    stack.push_back({a, b, whole, tol, 24});
    Eigen::VectorXd left(dim), right(dim);
    while (!stack.empty()) {
        Item it = std::move(stack.back());
        stack.pop_back();
        const double mid = 0.5 * (it.a + it.b);
        panel(it.a, mid, left, nullptr);
        panel(mid, it.b, right, nullptr);
        const bool ok =
            ((left + right - it.whole).cwiseAbs().array() <= it.tol.array()).all();
        if (it.depth <= 0 || ok) {
            out += left + right;
        } else {
            stack.push_back({it.a, mid, left, 0.5 * it.tol, it.depth - 1});
            stack.push_back({mid, it.b, right, 0.5 * it.tol, it.depth - 1});
        }
    }
    return out;
}

double integrate_composite(const std::function<double(double)>& f,
                           double a, double b, double max_panel, int n) {
    if (a == b) return 0.0;
    const GaussRule& rule = gauss_rule(n);
    const int panels = std::max(1, (int)std::ceil(std::abs(b - a) / max_panel));
    double sum = 0.0;
    for (int k = 0; k < panels; ++k) {
        const double lo = a + (b - a) * k / panels;
        const double hi = a + (b - a) * (k + 1) / panels;
        sum += gauss_panel(f, lo, hi, rule);
    }
    return sum;
}

const TriangleRule& triangle_rule_deg5() {
    static const TriangleRule rule = [] {
        TriangleRule r;
        r.points.resize(7, 4);
        const double w0 = 9.0 / 40.0;
        const double w1 = 0.13239415278850618;  // (155 + sqrt(15)) / 1200
        const double w2 = 0.12593918054482715;  // (155 - sqrt(15)) / 1200
        const double a1 = 0.47014206410511509;  // (6 + sqrt(15)) / 21
        const double b1 = 0.05971587178976982;  // 1 - 2 a1
        const double a2 = 0.10128650732345634;  // (6 - sqrt(15)) / 21
        const double b2 = 0.79742698535308732;  // 1 - 2 a2
        int row = 0;
        r.points.row(row++) << w0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0;
        r.points.row(row++) << w1, b1, a1, a1;
        r.points.row(row++) << w1, a1, b1, a1;
        r.points.row(row++) << w1, a1, a1, b1;
        r.points.row(row++) << w2, b2, a2, a2;
        r.points.row(row++) << w2, a2, b2, a2;
        r.points.row(row++) << w2, a2, a2, b2;
        return r;
    }();
    return rule;
}

} // namespace robinsym

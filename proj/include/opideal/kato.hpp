#pragma once

// The admissible scalar functions fed into the product formula: Borel maps h
// on [0, inf) with 0 <= h <= 1, h(0) = 1 and h'(+0) = -1, plus the class-beta
// refinement bounding |h(s) - 1 + s| / s^beta. Membership is certified
// numerically on a grid; the reported seminorm is a grid maximum, hence a
// lower bound of the true sup.

#include <cmath>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace opideal {

struct KatoFunction {
    std::function<double(double)> evaluator;
    std::string name;
    std::vector<double> params;
    double declared_beta = 2.0;
    // optional ln h(s); lets the defect h(s) - 1 + s be computed without the
    // catastrophic cancellation of the naive difference near s = 0
    std::function<double(double)> log_evaluator;

    double operator()(double s) const { return evaluator(s); }
};

// h(s) - 1 + s, the numerator of the beta seminorm
inline double kato_defect(const KatoFunction& h, double s) {
    if (h.log_evaluator)
        return s + std::expm1(h.log_evaluator(s));
    return h(s) - 1.0 + s;
}

inline KatoFunction kato_exp() {
    return {[](double s) { return std::exp(-s); }, "exp", {}, 2.0,
            [](double s) { return -s; }};
}

// h(s) = (1 + s/a)^{-a}, a > 0
inline KatoFunction kato_resolvent_power(double a) {
    if (!(a > 0.0))
        throw std::invalid_argument("kato_resolvent_power: parameter a must be > 0");
    return {[a](double s) { return std::exp(-a * std::log1p(s / a)); },
            "resolvent_power", {a}, 2.0,
            [a](double s) { return -a * std::log1p(s / a); }};
}

inline KatoFunction make_builtin(const std::string& name, double a = 1.0) {
    if (name == "exp")
        return kato_exp();
    if (name == "resolvent_power")
        return kato_resolvent_power(a);
    throw std::invalid_argument("make_builtin: unknown Kato function '" + name +
                                "' (builtins: exp, resolvent_power)");
}

// Log-spaced grid over [1e-8, 1e3], dense near zero; shared default for
// validation and the beta seminorm.
inline std::vector<double> default_kato_grid(std::size_t points = 400) {
    if (points < 2)
        throw std::invalid_argument("default_kato_grid: need at least 2 points");
    std::vector<double> grid(points);
    const double lo = std::log(1e-8), hi = std::log(1e3);
    for (std::size_t k = 0; k < points; ++k)
        grid[k] = std::exp(lo + (hi - lo) * static_cast<double>(k) /
                                    static_cast<double>(points - 1));
    return grid;
}

// grid maximum of |h(s) - 1 + s| / s^beta, 1 < beta <= 2
inline double beta_seminorm(const KatoFunction& h, double beta, std::span<const double> grid) {
    if (!(beta > 1.0) || !(beta <= 2.0))
        throw std::invalid_argument("beta_seminorm: beta must lie in (1, 2]");
    if (grid.empty())
        throw std::invalid_argument("beta_seminorm: empty grid");
    double best = 0.0;
    for (double s : grid) {
        if (!(s > 0.0))
            throw std::invalid_argument("beta_seminorm: grid points must be positive");
        best = std::max(best, std::abs(kato_defect(h, s)) / std::pow(s, beta));
    }
    return best;
}

inline double beta_seminorm(const KatoFunction& h, double beta) {
    const std::vector<double> grid = default_kato_grid();
    return beta_seminorm(h, beta, grid);
}

struct DeltaSample {
    double eps = 0.0;
    double delta = 0.0; // 1 - sup_{s >= eps} h(s)
};

struct KatoValidationReport {
    double value_at_zero = 0.0;
    double right_derivative = 0.0; // Richardson estimate of h'(+0)
    bool range_ok = false;         // 0 <= h <= 1 across the grid
    std::vector<DeltaSample> delta_of_eps;
    double beta = 2.0;
    double beta_seminorm = 0.0;

    bool zero_ok = false;       // |h(0) - 1| <= 1e-12
    bool derivative_ok = false; // |h'(+0) + 1| <= 1e-6
    bool delta_ok = false;      // every sampled delta(eps) > 0
    bool seminorm_ok = false;   // [h]_beta finite
    bool pass = false;
};

namespace detail {

// Richardson extrapolation of (h(s) - 1)/s at s = 1e-3, 5e-4, 2.5e-4;
// eliminates the O(s) and O(s^2) error terms.
inline double right_derivative_at_zero(const KatoFunction& h) {
    const double s0 = 1e-3;
    const double d1 = (h(s0) - 1.0) / s0;
    const double d2 = (h(s0 / 2) - 1.0) / (s0 / 2);
    const double d3 = (h(s0 / 4) - 1.0) / (s0 / 4);
    const double r1 = 2.0 * d2 - d1;
    const double r2 = 2.0 * d3 - d2;
    return (4.0 * r2 - r1) / 3.0;
}

} // namespace detail

inline KatoValidationReport validate_kato(const KatoFunction& h, std::span<const double> grid,
                                          double beta = 2.0) {
    if (grid.size() < 200)
        throw std::invalid_argument("validate_kato: grid must have >= 200 points");

    KatoValidationReport report;
    report.beta = beta;
    report.value_at_zero = h(0.0);
    report.right_derivative = detail::right_derivative_at_zero(h);

    report.range_ok = report.value_at_zero >= 0.0 && report.value_at_zero <= 1.0;
    for (double s : grid) {
        const double v = h(s);
        if (!(v >= 0.0) || !(v <= 1.0)) {
            report.range_ok = false;
            break;
        }
    }

    // delta(eps) = 1 - sup_{s >= eps} h(s), sampled per decade; the sup runs
    // over the grid points at or above eps
    const double s_max = grid.back();
    for (double eps = 1e-6; eps <= s_max / 2; eps *= 10.0) {
        double sup = h(eps);
        for (double s : grid)
            if (s >= eps)
                sup = std::max(sup, h(s));
        report.delta_of_eps.push_back({eps, 1.0 - sup});
    }

    report.beta_seminorm = beta_seminorm(h, beta, grid);

    report.zero_ok = std::abs(report.value_at_zero - 1.0) <= 1e-12;
    report.derivative_ok = std::abs(report.right_derivative + 1.0) <= 1e-6;
    report.delta_ok = !report.delta_of_eps.empty();
    for (const DeltaSample& d : report.delta_of_eps)
        report.delta_ok = report.delta_ok && d.delta > 0.0;
    report.seminorm_ok = std::isfinite(report.beta_seminorm);
    report.pass = report.zero_ok && report.derivative_ok && report.range_ok && report.delta_ok &&
                  report.seminorm_ok;
    return report;
}

inline KatoValidationReport validate_kato(const KatoFunction& h, double beta = 2.0) {
    const std::vector<double> grid = default_kato_grid();
    return validate_kato(h, grid, beta);
}

struct KatoProductResult {
    KatoFunction function;
    KatoValidationReport report; // revalidation of the product
};

// Pointwise product prod_i f(a_i s) * prod_j g(c_j s) for declared scale
// weights. The class is closed under products only when the scales sum to 1;
// the returned report shows whether the normalization h'(+0) = -1 survived.
inline KatoProductResult product_closure(const KatoFunction& f, const KatoFunction& g,
                                         std::span<const double> f_scales,
                                         std::span<const double> g_scales, double beta = 2.0) {
    if (f_scales.empty() && g_scales.empty())
        throw std::invalid_argument("product_closure: need at least one factor");

    std::vector<double> fa(f_scales.begin(), f_scales.end());
    std::vector<double> ga(g_scales.begin(), g_scales.end());
    auto f_eval = f.evaluator;
    auto g_eval = g.evaluator;
    KatoFunction product;
    product.evaluator = [fa, ga, f_eval, g_eval](double s) {
        double v = 1.0;
        for (double a : fa)
            v *= f_eval(a * s);
        for (double c : ga)
            v *= g_eval(c * s);
        return v;
    };
    if (f.log_evaluator && g.log_evaluator) {
        auto f_log = f.log_evaluator;
        auto g_log = g.log_evaluator;
        product.log_evaluator = [fa, ga, f_log, g_log](double s) {
            double acc = 0.0;
            for (double a : fa)
                acc += f_log(a * s);
            for (double c : ga)
                acc += g_log(c * s);
            return acc;
        };
    }
    product.name = "product(" + f.name + "," + g.name + ")";
    product.params.insert(product.params.end(), fa.begin(), fa.end());
    product.params.insert(product.params.end(), ga.begin(), ga.end());
    product.declared_beta = beta;

    return {product, validate_kato(product, beta)};
}

} // namespace opideal

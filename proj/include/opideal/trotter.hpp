#pragma once

// Product-formula approximants for e^{-t(A+B)}, their error curves in
// operator and ideal norms, power-law rate fitting, and the two bound checks
// that tie ideal-norm convergence back to the operator-norm error: the
// half-index lifting bound and the trace-difference bound.

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "opideal/dixmier.hpp"
#include "opideal/kato.hpp"
#include "opideal/norms.hpp"
#include "opideal/parallel.hpp"
#include "opideal/spectral.hpp"

namespace opideal {

inline constexpr double kErrorFloor = 1e-13; // below this, errors count as roundoff

enum class Scheme { FG, GF, FSym, TSym };

inline std::string scheme_name(Scheme s) {
    switch (s) {
    case Scheme::FG:
        return "FG";
    case Scheme::GF:
        return "GF";
    case Scheme::FSym:
        return "F_sym";
    case Scheme::TSym:
        return "T_sym";
    }
    return "?";
}

inline Scheme parse_scheme(const std::string& token) {
    if (token == "FG")
        return Scheme::FG;
    if (token == "GF")
        return Scheme::GF;
    if (token == "F_sym")
        return Scheme::FSym;
    if (token == "T_sym")
        return Scheme::TSym;
    throw std::invalid_argument("parse_scheme: unknown scheme '" + token +
                                "' (expected FG, GF, F_sym or T_sym)");
}

inline std::vector<Scheme> all_schemes() {
    return {Scheme::FG, Scheme::GF, Scheme::FSym, Scheme::TSym};
}

// e^{-tC} with C = A + B, via Hermitian eigendecomposition of C. Both
// summands must be PSD on their own, not just the sum.
inline Matrix exact_semigroup(const Matrix& a, const Matrix& b, double t) {
    detail::clamped_psd_eigenvalues(eig_hermitian(a), "exact_semigroup (A)");
    detail::clamped_psd_eigenvalues(eig_hermitian(b), "exact_semigroup (B)");
    return apply_spectral_function([](double s) { return std::exp(-s); }, a + b, t);
}

namespace detail {

// cached spectral data of one generator, for building h(tau * X) factors
struct SpectralFactor {
    EigenSystem es;

    explicit SpectralFactor(const Matrix& m, const char* who) : es(eig_hermitian(m)) {
        es.eigenvalues = clamped_psd_eigenvalues(es, who);
    }

    Matrix at(const KatoFunction& h, double tau) const {
        return es.apply([&](double lam) { return h(tau * lam); });
    }
};

inline Matrix scheme_step(Scheme scheme, const SpectralFactor& fa, const SpectralFactor& gb,
                          const KatoFunction& f, const KatoFunction& g, double tau) {
    switch (scheme) {
    case Scheme::FG:
        return fa.at(f, tau) * gb.at(g, tau);
    case Scheme::GF:
        return gb.at(g, tau) * fa.at(f, tau);
    case Scheme::FSym: {
        const Matrix half = gb.at(g, tau / 2.0);
        return half * fa.at(f, tau) * half;
    }
    case Scheme::TSym: {
        const Matrix half = fa.at(f, tau / 2.0);
        return half * gb.at(g, tau) * half;
    }
    }
    throw std::logic_error("scheme_step: unreachable");
}

} // namespace detail

// The n-fold product per scheme:
//   FG    [f(tA/n) g(tB/n)]^n          GF    [g(tB/n) f(tA/n)]^n
//   F_sym [g(tB/2n) f(tA/n) g(tB/2n)]^n  T_sym [f(tA/2n) g(tB/n) f(tA/2n)]^n
inline Matrix approximant(Scheme scheme, const KatoFunction& f, const KatoFunction& g,
                          const Matrix& a, const Matrix& b, double t, std::size_t n) {
    if (n < 1)
        throw std::invalid_argument("approximant: need n >= 1");
    if (!(t >= 0.0))
        throw std::domain_error("approximant: need t >= 0");
    const detail::SpectralFactor fa(a, "approximant");
    const detail::SpectralFactor gb(b, "approximant");
    return matrix_power(detail::scheme_step(scheme, fa, gb, f, g, t / static_cast<double>(n)), n);
}

struct ErrorSample {
    std::size_t n = 0;
    double error = 0.0;
};

struct ErrorCurve {
    Scheme scheme = Scheme::FG;
    std::string norm_name;
    double t = 0.0;
    std::vector<ErrorSample> samples; // ascending n

    std::optional<double> error_at(std::size_t n) const {
        for (const ErrorSample& s : samples)
            if (s.n == n)
                return s.error;
        return std::nullopt;
    }
};

// One curve per norm kind, all evaluated on the same per-n singular spectrum
// of (approximant - exact). Errors below 1e-13 are floored to zero. The per-n
// spectra are independent tasks; results are assembled in ascending-n order
// regardless of the thread count.
inline std::vector<ErrorCurve> error_curves(Scheme scheme, const KatoFunction& f,
                                            const KatoFunction& g, const Matrix& a,
                                            const Matrix& b, double t,
                                            std::span<const std::size_t> n_grid,
                                            std::span<const NormKind> kinds,
                                            std::size_t threads = 1) {
    for (std::size_t k = 0; k + 1 < n_grid.size(); ++k)
        if (n_grid[k] >= n_grid[k + 1])
            throw std::invalid_argument("error_curves: n_grid must be strictly ascending");
    if (n_grid.empty() || n_grid.front() < 1)
        throw std::invalid_argument("error_curves: n_grid must contain positive entries");

    const detail::SpectralFactor fa(a, "error_curves");
    const detail::SpectralFactor gb(b, "error_curves");
    const Matrix exact = exact_semigroup(a, b, t);

    std::vector<SingularSpectrum> spectra(n_grid.size());
    parallel_for_index(n_grid.size(), threads, [&](std::size_t idx) {
        const std::size_t n = n_grid[idx];
        const Matrix approx = matrix_power(
            detail::scheme_step(scheme, fa, gb, f, g, t / static_cast<double>(n)), n);
        spectra[idx] = singular_values(approx - exact);
    });

    std::vector<ErrorCurve> curves(kinds.size());
    for (std::size_t k = 0; k < kinds.size(); ++k) {
        curves[k] = ErrorCurve{scheme, kinds[k].name(), t, {}};
        for (std::size_t idx = 0; idx < n_grid.size(); ++idx) {
            double err = kinds[k].evaluate(spectra[idx]);
            if (err < kErrorFloor)
                err = 0.0;
            curves[k].samples.push_back({n_grid[idx], err});
        }
    }
    return curves;
}

inline ErrorCurve error_curve(Scheme scheme, const KatoFunction& f, const KatoFunction& g,
                              const Matrix& a, const Matrix& b, double t,
                              std::span<const std::size_t> n_grid, const NormKind& kind) {
    const NormKind kinds[] = {kind};
    return error_curves(scheme, f, g, a, b, t, n_grid, kinds)[0];
}

struct RateFit {
    double gamma = 0.0;     // fitted exponent: error ~ prefactor * n^{-gamma}
    double prefactor = 0.0; // fitted Gamma
    double r_squared = 0.0;
    std::size_t window_lo = 0; // n-range used, inclusive
    std::size_t window_hi = 0;
    std::size_t points_used = 0;
};

struct FitWindow {
    std::size_t n_lo = 0;
    std::size_t n_hi = 0;
};

// Least squares of ln error against ln n. Zero (floored) errors are excluded;
// fewer than 4 usable points is an error. The default window drops the two
// smallest n of the curve as transient.
inline RateFit fit_rate(const ErrorCurve& curve, std::optional<FitWindow> window = std::nullopt) {
    FitWindow w;
    if (window) {
        w = *window;
    } else {
        if (curve.samples.size() < 3)
            throw std::invalid_argument("fit_rate: curve too short for the default window");
        w.n_lo = curve.samples[2].n;
        w.n_hi = curve.samples.back().n;
    }

    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0, syy = 0.0;
    std::size_t used = 0;
    for (const ErrorSample& s : curve.samples) {
        if (s.n < w.n_lo || s.n > w.n_hi || s.error <= 0.0)
            continue;
        const double x = std::log(static_cast<double>(s.n));
        const double y = std::log(s.error);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        syy += y * y;
        ++used;
    }
    if (used < 4)
        throw std::invalid_argument("fit_rate: fewer than 4 usable points (zero errors are "
                                    "excluded)");

    const double m = static_cast<double>(used);
    const double denom = m * sxx - sx * sx;
    const double slope = (m * sxy - sx * sy) / denom;
    const double intercept = (sy - slope * sx) / m;

    RateFit fit;
    fit.gamma = -slope;
    fit.prefactor = std::exp(intercept);
    fit.window_lo = w.n_lo;
    fit.window_hi = w.n_hi;
    fit.points_used = used;

    const double ss_tot = syy - sy * sy / m;
    double ss_res = 0.0;
    for (const ErrorSample& s : curve.samples) {
        if (s.n < w.n_lo || s.n > w.n_hi || s.error <= 0.0)
            continue;
        const double x = std::log(static_cast<double>(s.n));
        const double r = std::log(s.error) - (intercept + slope * x);
        ss_res += r * r;
    }
    fit.r_squared = ss_tot > 0.0 ? std::max(0.0, 1.0 - ss_res / ss_tot) : 1.0;
    return fit;
}

struct LiftingRow {
    std::size_t n = 0;
    double ideal_error = 0.0; // left-hand side
    double bound = 0.0;       // Gamma_t0 * ||F(t0)||_ideal * (eps([n/2]) + eps([(n+1)/2]))
    double margin = 0.0;      // bound - ideal_error
    bool violated = false;
};

struct LiftingReport {
    double gamma_t0 = 0.0;   // calibrated as max_n n * op_error(n)
    double f_t0_norm = 0.0;  // ideal norm of F(t0)
    std::vector<LiftingRow> rows;
    std::size_t checked = 0;
    std::size_t violations = 0;
    std::size_t n0 = 0; // smallest grid n from which every checked n is clean; 0 if none
};

// Checks ideal_error(n) <= Gamma_t0 * F_t0_norm * (eps([n/2]) + eps([(n+1)/2]))
// for every grid n >= 3, with eps(k) = 1/k the operator-norm rate function.
// Gamma_t0 * eps is then the tightest k^{-1} envelope of the measured operator
// curve: Gamma_t0 * eps(k) >= op_error(k) for every grid k, with equality at
// the calibration point.
inline LiftingReport lifting_bound_check(const ErrorCurve& op_curve,
                                         const ErrorCurve& ideal_curve, double f_t0_norm,
                                         double gamma_t0) {
    if (op_curve.samples.size() != ideal_curve.samples.size())
        throw std::invalid_argument("lifting_bound_check: curves must share the n grid");
    for (std::size_t k = 0; k < op_curve.samples.size(); ++k)
        if (op_curve.samples[k].n != ideal_curve.samples[k].n)
            throw std::invalid_argument("lifting_bound_check: curves must share the n grid");
    if (op_curve.t != ideal_curve.t)
        throw std::invalid_argument("lifting_bound_check: curves must share t");

    LiftingReport report;
    report.gamma_t0 = gamma_t0;
    report.f_t0_norm = f_t0_norm;

    for (const ErrorSample& s : ideal_curve.samples) {
        if (s.n < 3)
            continue;
        const double eps_lo = 1.0 / static_cast<double>(s.n / 2);
        const double eps_hi = 1.0 / static_cast<double>((s.n + 1) / 2);
        LiftingRow row;
        row.n = s.n;
        row.ideal_error = s.error;
        row.bound = gamma_t0 * f_t0_norm * (eps_lo + eps_hi);
        row.margin = row.bound - row.ideal_error;
        row.violated = row.ideal_error > row.bound;
        report.rows.push_back(row);
        ++report.checked;
        if (row.violated)
            ++report.violations;
    }

    // smallest checked n such that no violation occurs at it or beyond
    for (auto it = report.rows.rbegin(); it != report.rows.rend(); ++it) {
        if (it->violated)
            break;
        report.n0 = it->n;
    }
    return report;
}

// max over the grid of n * op_error(n): the empirical operator-norm prefactor
inline double calibrate_gamma_t0(const ErrorCurve& op_curve) {
    double best = 0.0;
    for (const ErrorSample& s : op_curve.samples)
        best = std::max(best, static_cast<double>(s.n) * s.error);
    return best;
}

struct TraceCheckReport {
    double approximant_tee = 0.0; // T_N of the approximant, N = dim
    double exact_tee = 0.0;       // T_N of e^{-tC}
    double delta = 0.0;           // |difference|
    double ideal_norm = 0.0;      // ||approximant - e^{-tC}||_{1,inf}
    double slack = 0.0;           // ideal_norm - delta
    bool pass = false;
};

// |T_N(approximant) - T_N(exact)| <= ||approximant - exact||_{1,inf}: the
// trace-difference bound instantiated at the full-dimension tail N = dim.
inline TraceCheckReport trace_error_check(Scheme scheme, const KatoFunction& f,
                                          const KatoFunction& g, const Matrix& a, const Matrix& b,
                                          double t, std::size_t n) {
    const Matrix approx = approximant(scheme, f, g, a, b, t, n);
    const Matrix exact = exact_semigroup(a, b, t);

    TraceCheckReport report;
    report.approximant_tee = trace_sequence(singular_values(approx)).tee.back();
    report.exact_tee = trace_sequence(singular_values(exact)).tee.back();
    report.delta = std::abs(report.approximant_tee - report.exact_tee);
    report.ideal_norm = dixmier_norm(singular_values(approx - exact));
    report.slack = report.ideal_norm - report.delta;
    report.pass = report.delta <= report.ideal_norm + 1e-12;
    return report;
}

} // namespace opideal

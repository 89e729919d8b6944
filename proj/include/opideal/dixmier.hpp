#pragma once

// Partial-sum machinery for the singular trace: sigma_n and
// T_n = sigma_n / (1 + ln n), the Horn-Ky Fan partial-sum inequalities, the
// doubling dilation, and a trailing-window trace estimator.
//
// No invariant mean is ever constructed. The estimator realizes the two
// conditions an admissible state must satisfy on convergent sequences --
// positivity and agreement with the ordinary limit -- by averaging T_n over a
// trailing window and flagging convergence through the fitted slope against
// ln n. On convergent T_n every admissible mean gives this same value; on
// non-convergent input the estimator reports converged = false together with
// the window extremes, and the value is not a trace claim.

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "opideal/norms.hpp"
#include "opideal/spectral.hpp"

namespace opideal {

struct TraceSequence {
    std::vector<double> sigma; // sigma_n = s_1 + ... + s_n
    std::vector<double> tee;   // T_n = sigma_n / (1 + ln n); tee[0] = sigma_1

    std::size_t size() const { return sigma.size(); }
};

// Exact running sums, sequential left-to-right; spectra up to 10^6 entries.
inline TraceSequence trace_sequence(const SingularSpectrum& s) {
    require_spectrum(s, "trace_sequence");
    TraceSequence ts;
    ts.sigma.resize(s.size());
    ts.tee.resize(s.size());
    double acc = 0.0;
    for (std::size_t j = 0; j < s.size(); ++j) {
        acc += s.values[j];
        ts.sigma[j] = acc;
        ts.tee[j] = acc / (1.0 + std::log(static_cast<double>(j + 1)));
    }
    return ts;
}

struct TraceEstimate {
    double value = 0.0;      // mean of T_n over the trailing window
    std::size_t window_lo = 0; // 1-based n range, inclusive
    std::size_t window_hi = 0;
    double slope = 0.0;      // least-squares slope of T_n against ln n
    bool converged = false;  // |slope| <= slope_tol
    double window_min = 0.0; // reported bracket for non-convergent input
    double window_max = 0.0;
};

inline TraceEstimate estimate_dixmier_trace(const SingularSpectrum& s,
                                            double window_fraction = 0.5,
                                            double slope_tol = 0.02) {
    require_spectrum(s, "estimate_dixmier_trace");
    const std::size_t n_total = s.size();
    if (n_total < 16)
        throw std::invalid_argument("estimate_dixmier_trace: need a spectrum of length >= 16");
    if (!(window_fraction > 0.0) || !(window_fraction < 1.0))
        throw std::invalid_argument("estimate_dixmier_trace: window_fraction must lie in (0, 1)");

    const TraceSequence ts = trace_sequence(s);
    const std::size_t lo =
        std::max<std::size_t>(1, static_cast<std::size_t>(
                                     std::ceil((1.0 - window_fraction) * n_total)));
    const std::size_t count = n_total - lo + 1;
    if (count < 8)
        throw std::invalid_argument("estimate_dixmier_trace: trailing window has fewer than "
                                    "8 points");

    TraceEstimate est;
    est.window_lo = lo;
    est.window_hi = n_total;
    est.window_min = est.window_max = ts.tee[lo - 1];

    double sum_t = 0.0, sum_x = 0.0, sum_xx = 0.0, sum_xt = 0.0;
    for (std::size_t n = lo; n <= n_total; ++n) {
        const double t = ts.tee[n - 1];
        const double x = std::log(static_cast<double>(n));
        sum_t += t;
        sum_x += x;
        sum_xx += x * x;
        sum_xt += x * t;
        est.window_min = std::min(est.window_min, t);
        est.window_max = std::max(est.window_max, t);
    }
    const double m = static_cast<double>(count);
    est.value = sum_t / m;
    const double denom = m * sum_xx - sum_x * sum_x;
    est.slope = denom > 0.0 ? (m * sum_xt - sum_x * sum_t) / denom : 0.0;
    est.converged = std::abs(est.slope) <= slope_tol;
    return est;
}

// Matrix inputs go through their singular values. A finite matrix is trace
// class, so its T_n tail decays and only model spectra exhibit nonzero limits.
inline TraceEstimate estimate_dixmier_trace(const Matrix& m, double window_fraction = 0.5,
                                            double slope_tol = 0.02) {
    return estimate_dixmier_trace(singular_values(m), window_fraction, slope_tol);
}

// (eta_1, eta_1, eta_2, eta_2, ...): each entry repeated k times.
inline std::vector<double> dilation_dk(std::span<const double> seq, std::size_t k) {
    if (k == 0)
        throw std::invalid_argument("dilation_dk: k must be >= 1");
    std::vector<double> out;
    out.reserve(seq.size() * k);
    for (double x : seq)
        for (std::size_t r = 0; r < k; ++r)
            out.push_back(x);
    return out;
}

inline std::vector<double> dilation_d2(std::span<const double> seq) { return dilation_dk(seq, 2); }

namespace detail {

// eigenvalues sorted descending; rejects non-PSD input
inline std::vector<double> psd_spectrum_descending(const Matrix& m, const char* who) {
    EigenSystem es = eig_hermitian(m);
    std::vector<double> lam = clamped_psd_eigenvalues(es, who);
    std::sort(lam.begin(), lam.end(), std::greater<double>());
    return lam;
}

inline std::vector<double> partial_sums(std::span<const double> v) {
    std::vector<double> out(v.size());
    double acc = 0.0;
    for (std::size_t j = 0; j < v.size(); ++j)
        out[j] = acc += v[j];
    return out;
}

} // namespace detail

struct HornKyFanReport {
    // sigma_n(X+Y) <= sigma_n(X) + sigma_n(Y) for all n, and
    // sigma_2n(X+Y) >= sigma_n(X) + sigma_n(Y) for 2n <= dim
    double max_subadditive_violation = 0.0;
    double max_superadditive_violation = 0.0;
    bool pass = true;
};

inline HornKyFanReport horn_ky_fan_check(const Matrix& x, const Matrix& y, double tol = 1e-10) {
    const auto sx = detail::partial_sums(detail::psd_spectrum_descending(x, "horn_ky_fan_check"));
    const auto sy = detail::partial_sums(detail::psd_spectrum_descending(y, "horn_ky_fan_check"));
    const auto sxy =
        detail::partial_sums(detail::psd_spectrum_descending(x + y, "horn_ky_fan_check"));

    HornKyFanReport report;
    const std::size_t dim = sxy.size();
    for (std::size_t n = 1; n <= dim; ++n) {
        report.max_subadditive_violation = std::max(
            report.max_subadditive_violation, sxy[n - 1] - (sx[n - 1] + sy[n - 1]));
        if (2 * n <= dim)
            report.max_superadditive_violation = std::max(
                report.max_superadditive_violation, (sx[n - 1] + sy[n - 1]) - sxy[2 * n - 1]);
    }
    report.pass = report.max_subadditive_violation <= tol &&
                  report.max_superadditive_violation <= tol;
    return report;
}

// sigma_n(X) = max over rank-n orthogonal projections P of trace(X P),
// attained on the top eigenspace: the sum of the n largest eigenvalues.
inline double variational_sigma(const Matrix& x, std::size_t n) {
    const auto lam = detail::psd_spectrum_descending(x, "variational_sigma");
    if (n < 1 || n > lam.size())
        throw std::invalid_argument("variational_sigma: n out of range [1, dim]");
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j)
        acc += lam[j];
    return acc;
}

enum class ModelSpectrumKind { harmonic, log_semigroup, trace_class };

// Desk-scale stand-ins for Dixmier-ideal membership:
//   harmonic(c):      s_j = c / j
//   log_semigroup(t): s_j = j^{-t}  (spectrum of e^{-tC} for C = diag(ln j))
//   trace_class(r):   s_j = r^j, 0 < r < 1
inline SingularSpectrum make_model_spectrum(ModelSpectrumKind kind, double param, std::size_t n) {
    if (n < 1)
        throw std::invalid_argument("make_model_spectrum: need N >= 1");
    SingularSpectrum s;
    s.values.resize(n);
    switch (kind) {
    case ModelSpectrumKind::harmonic:
        if (!(param > 0.0))
            throw std::invalid_argument("make_model_spectrum: harmonic needs c > 0");
        for (std::size_t j = 0; j < n; ++j)
            s.values[j] = param / static_cast<double>(j + 1);
        break;
    case ModelSpectrumKind::log_semigroup:
        if (!(param > 0.0))
            throw std::invalid_argument("make_model_spectrum: log_semigroup needs t > 0");
        for (std::size_t j = 0; j < n; ++j)
            s.values[j] = std::pow(static_cast<double>(j + 1), -param);
        break;
    case ModelSpectrumKind::trace_class:
        if (!(param > 0.0) || !(param < 1.0))
            throw std::invalid_argument("make_model_spectrum: trace_class needs r in (0, 1)");
        for (std::size_t j = 0; j < n; ++j)
            s.values[j] = std::pow(param, static_cast<double>(j + 1));
        break;
    }
    return s;
}

} // namespace opideal

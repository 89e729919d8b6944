#pragma once

// Hermitian eigendecomposition (cyclic Jacobi), singular values and spectral
// calculus. Everything downstream (ideal norms, trace sequences, product
// formula approximants) consumes the spectra produced here.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "opideal/matrix.hpp"

namespace opideal {

inline constexpr std::size_t kMaxDim = 512;          // documented desk-scale cap
inline constexpr double kHermitianTol = 1e-12;       // relative conjugate-symmetry tolerance
inline constexpr double kPsdClampTol = 1e-12;        // eigenvalues in [-tol, 0) count as 0
inline constexpr double kJacobiThreshold = 1e-13;    // off-diagonal Frobenius mass, relative

// Non-increasing, non-negative sequence s_1 >= s_2 >= ... >= 0.
struct SingularSpectrum {
    std::vector<double> values;

    std::size_t size() const { return values.size(); }
    double operator[](std::size_t j) const { return values[j]; }

    bool is_valid() const {
        for (std::size_t j = 0; j < values.size(); ++j) {
            if (!(values[j] >= 0.0) || !std::isfinite(values[j]))
                return false;
            if (j + 1 < values.size() && values[j] < values[j + 1])
                return false;
        }
        return true;
    }

    double sum() const { return std::accumulate(values.begin(), values.end(), 0.0); }
    double largest() const { return values.empty() ? 0.0 : values.front(); }
};

struct EigenSystem {
    std::vector<double> eigenvalues; // ascending
    Matrix basis;                    // unitary; column j pairs with eigenvalues[j]

    // U diag(f(lambda)) U*
    template <typename F>
    Matrix apply(F&& f) const {
        const std::size_t n = eigenvalues.size();
        Matrix scaled = basis;
        for (std::size_t j = 0; j < n; ++j) {
            const double fj = f(eigenvalues[j]);
            for (std::size_t i = 0; i < n; ++i)
                scaled(i, j) *= fj;
        }
        return scaled * basis.adjoint();
    }
};

namespace detail {

inline double offdiagonal_mass(const Matrix& a) {
    const std::size_t n = a.dim();
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            s += 2.0 * std::norm(a(i, j));
    return std::sqrt(s);
}

} // namespace detail

// Cyclic Jacobi sweeps on a complex Hermitian matrix. Deterministic: fixed
// sweep order, convergence on off-diagonal Frobenius mass <= 1e-13 relative.
inline EigenSystem eig_hermitian(const Matrix& input) {
    const std::size_t n = input.dim();
    if (n == 0)
        throw std::invalid_argument("eig_hermitian: empty matrix");
    if (n > kMaxDim)
        throw std::invalid_argument("eig_hermitian: dimension exceeds supported cap of 512");
    if (!input.all_finite())
        throw std::invalid_argument("eig_hermitian: non-finite entries");
    if (!input.is_hermitian(kHermitianTol))
        throw std::invalid_argument("eig_hermitian: matrix violates conjugate symmetry beyond "
                                    "relative tolerance 1e-12");

    // symmetrize roundoff-level asymmetry away so the iteration sees an
    // exactly Hermitian matrix
    Matrix a(n);
    for (std::size_t i = 0; i < n; ++i) {
        a(i, i) = Complex{input(i, i).real(), 0.0};
        for (std::size_t j = i + 1; j < n; ++j) {
            const Complex v = 0.5 * (input(i, j) + std::conj(input(j, i)));
            a(i, j) = v;
            a(j, i) = std::conj(v);
        }
    }

    Matrix v = Matrix::identity(n);
    const double scale = a.frobenius_norm();

    if (scale > 0.0) {
        constexpr int max_sweeps = 64;
        bool converged = false;
        for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
            if (detail::offdiagonal_mass(a) <= kJacobiThreshold * scale) {
                converged = true;
                break;
            }
            for (std::size_t p = 0; p + 1 < n; ++p) {
                for (std::size_t q = p + 1; q < n; ++q) {
                    const Complex apq = a(p, q);
                    const double absa = std::abs(apq);
                    if (absa == 0.0)
                        continue;
                    const Complex phase = apq / absa; // e^{i arg(a_pq)}
                    const double app = a(p, p).real();
                    const double aqq = a(q, q).real();
                    const double theta = (app - aqq) / (2.0 * absa);
                    const double t = (theta >= 0.0)
                                         ? -1.0 / (theta + std::sqrt(1.0 + theta * theta))
                                         : 1.0 / (-theta + std::sqrt(1.0 + theta * theta));
                    const double c = 1.0 / std::sqrt(1.0 + t * t);
                    const double s = t * c;
                    const Complex s_phase = s * phase;            // s e^{i phi}
                    const Complex s_phase_conj = std::conj(s_phase);

                    // columns p and q of A <- A W, rows via conjugate symmetry
                    for (std::size_t k = 0; k < n; ++k) {
                        if (k == p || k == q)
                            continue;
                        const Complex akp = a(k, p);
                        const Complex akq = a(k, q);
                        const Complex new_kp = c * akp - s_phase_conj * akq;
                        const Complex new_kq = s_phase * akp + c * akq;
                        a(k, p) = new_kp;
                        a(p, k) = std::conj(new_kp);
                        a(k, q) = new_kq;
                        a(q, k) = std::conj(new_kq);
                    }
                    a(p, p) = app * c * c - 2.0 * absa * c * s + aqq * s * s;
                    a(q, q) = app * s * s + 2.0 * absa * c * s + aqq * c * c;
                    a(p, q) = Complex{0.0, 0.0};
                    a(q, p) = Complex{0.0, 0.0};

                    for (std::size_t k = 0; k < n; ++k) {
                        const Complex vkp = v(k, p);
                        const Complex vkq = v(k, q);
                        v(k, p) = c * vkp - s_phase_conj * vkq;
                        v(k, q) = s_phase * vkp + c * vkq;
                    }
                }
            }
        }
        if (!converged && detail::offdiagonal_mass(a) > kJacobiThreshold * scale)
            throw std::runtime_error("eig_hermitian: Jacobi iteration did not converge");
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&a](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });

    EigenSystem es;
    es.eigenvalues.resize(n);
    es.basis = Matrix(n);
    for (std::size_t j = 0; j < n; ++j) {
        es.eigenvalues[j] = a(order[j], order[j]).real();
        for (std::size_t i = 0; i < n; ++i)
            es.basis(i, j) = v(i, order[j]);
    }
    return es;
}

// Singular values, non-increasing. Hermitian input: sorted |eigenvalues|;
// general input: square roots of the eigenvalues of M* M.
inline SingularSpectrum singular_values(const Matrix& m) {
    if (!m.all_finite())
        throw std::invalid_argument("singular_values: non-finite entries");
    SingularSpectrum s;
    if (m.is_hermitian(kHermitianTol)) {
        const EigenSystem es = eig_hermitian(m);
        s.values.resize(es.eigenvalues.size());
        for (std::size_t j = 0; j < es.eigenvalues.size(); ++j)
            s.values[j] = std::abs(es.eigenvalues[j]);
    } else {
        const EigenSystem es = eig_hermitian(m.adjoint() * m);
        s.values.resize(es.eigenvalues.size());
        for (std::size_t j = 0; j < es.eigenvalues.size(); ++j)
            s.values[j] = std::sqrt(std::max(es.eigenvalues[j], 0.0));
    }
    std::sort(s.values.begin(), s.values.end(), std::greater<double>());
    return s;
}

inline double operator_norm(const Matrix& m) { return singular_values(m).largest(); }

namespace detail {

inline std::vector<double> clamped_psd_eigenvalues(const EigenSystem& es, const char* who) {
    std::vector<double> lam = es.eigenvalues;
    for (double& x : lam) {
        if (x < -kPsdClampTol)
            throw std::domain_error(std::string(who) + ": matrix is not positive semi-definite, "
                                    "eigenvalue " + std::to_string(x) + " below -1e-12");
        if (x < 0.0)
            x = 0.0;
    }
    return lam;
}

} // namespace detail

// U diag(h(t * lambda_j)) U* for PSD M and t >= 0.
template <typename F>
Matrix apply_spectral_function(F&& h, const Matrix& m, double t) {
    if (!(t >= 0.0))
        throw std::domain_error("apply_spectral_function: scale t must be >= 0");
    EigenSystem es = eig_hermitian(m);
    es.eigenvalues = detail::clamped_psd_eigenvalues(es, "apply_spectral_function");
    return es.apply([&](double lam) { return h(t * lam); });
}

} // namespace opideal

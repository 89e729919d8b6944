#pragma once

// Independent reference implementations used only for cross-checking: they
// must not share the code paths of the routines they certify.

#include <cmath>

#include "opideal/kato.hpp"
#include "opideal/matrix.hpp"
#include "opideal/rng.hpp"
#include "opideal/spectral.hpp"
#include "opideal/trotter.hpp"

namespace opideal::selftest {

// e^{-t C} by scaling and squaring with a degree-20 Taylor polynomial; no
// eigendecomposition involved.
inline Matrix expm_oracle(const Matrix& c, double t) {
    const std::size_t dim = c.dim();
    Matrix x = c * Complex{-t, 0.0};

    double row_sum_max = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < dim; ++j)
            row += std::abs(x(i, j));
        row_sum_max = std::max(row_sum_max, row);
    }
    int squarings = 0;
    while (row_sum_max > 0.5 && squarings < 60) {
        row_sum_max /= 2.0;
        ++squarings;
    }
    x *= Complex{std::pow(0.5, squarings), 0.0};

    // Horner evaluation of sum_{k<=20} X^k / k!
    Matrix result = Matrix::identity(dim);
    for (int k = 20; k >= 1; --k) {
        result = x * result;
        result *= Complex{1.0 / static_cast<double>(k), 0.0};
        result += Matrix::identity(dim);
    }
    for (int k = 0; k < squarings; ++k)
        result = result * result;
    return result;
}

// The n-fold product assembled factor by factor, left to right; independent
// of the binary powering used by approximant().
inline Matrix approximant_direct(Scheme scheme, const KatoFunction& f, const KatoFunction& g,
                                 const Matrix& a, const Matrix& b, double t, std::size_t n) {
    const double tau = t / static_cast<double>(n);
    auto f_at = [&](double scale) {
        return apply_spectral_function([&](double s) { return f(s); }, a, scale);
    };
    auto g_at = [&](double scale) {
        return apply_spectral_function([&](double s) { return g(s); }, b, scale);
    };

    std::vector<Matrix> step;
    switch (scheme) {
    case Scheme::FG:
        step = {f_at(tau), g_at(tau)};
        break;
    case Scheme::GF:
        step = {g_at(tau), f_at(tau)};
        break;
    case Scheme::FSym:
        step = {g_at(tau / 2), f_at(tau), g_at(tau / 2)};
        break;
    case Scheme::TSym:
        step = {f_at(tau / 2), g_at(tau), f_at(tau / 2)};
        break;
    }

    Matrix result = Matrix::identity(a.dim());
    for (std::size_t rep = 0; rep < n; ++rep)
        for (const Matrix& factor : step)
            result = result * factor;
    return result;
}

// Singular values through the M*M route regardless of Hermitian shortcuts.
inline SingularSpectrum cross_route_singular_values(const Matrix& m) {
    const EigenSystem es = eig_hermitian(m.adjoint() * m);
    SingularSpectrum s;
    s.values.resize(es.eigenvalues.size());
    for (std::size_t j = 0; j < es.eigenvalues.size(); ++j)
        s.values[j] = std::sqrt(std::max(es.eigenvalues[j], 0.0));
    std::sort(s.values.begin(), s.values.end(), std::greater<double>());
    return s;
}

inline Matrix unit_norm_psd(std::size_t dim, Rng& rng) {
    Matrix m = random_psd(dim, rng);
    m *= Complex{1.0 / operator_norm(m), 0.0};
    return m;
}

} // namespace opideal::selftest

#include <doctest.h>

#include <cmath>
#include <sstream>

#include "opideal/matrix.hpp"
#include "opideal/rng.hpp"
#include "opideal/spectral.hpp"

using namespace opideal;

namespace {

Matrix hermitian_from_seed(std::size_t dim, std::uint64_t seed) {
    Rng rng(seed);
    return random_hermitian(dim, rng);
}

double reconstruction_residual(const Matrix& m, const EigenSystem& es) {
    Matrix rebuilt = es.apply([](double x) { return x; });
    return (rebuilt - m).frobenius_norm();
}

double unitarity_defect(const Matrix& u) {
    return ((u.adjoint() * u) - Matrix::identity(u.dim())).max_abs();
}

} // namespace

TEST_CASE("eig_hermitian: pauli-x spectrum") {
    Matrix m(2);
    m(0, 1) = 1.0;
    m(1, 0) = 1.0;
    const EigenSystem es = eig_hermitian(m);
    CHECK(es.eigenvalues[0] == doctest::Approx(-1.0).epsilon(1e-13));
    CHECK(es.eigenvalues[1] == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(unitarity_defect(es.basis) <= 1e-10);
}

TEST_CASE("eig_hermitian: identity has unit spectrum") {
    const EigenSystem es = eig_hermitian(Matrix::identity(3));
    for (double lam : es.eigenvalues)
        CHECK(lam == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("eig_hermitian: seeded reconstruction and unitarity") {
    const Matrix m = hermitian_from_seed(6, 20240611);
    const EigenSystem es = eig_hermitian(m);
    CHECK(reconstruction_residual(m, es) <= 1e-10 * m.frobenius_norm());
    CHECK(unitarity_defect(es.basis) <= 1e-10);
    for (std::size_t j = 0; j + 1 < es.eigenvalues.size(); ++j)
        CHECK(es.eigenvalues[j] <= es.eigenvalues[j + 1]);
}

TEST_CASE("eig_hermitian: deterministic for fixed input") {
    const Matrix m = hermitian_from_seed(8, 7);
    const EigenSystem a = eig_hermitian(m);
    const EigenSystem b = eig_hermitian(m);
    CHECK(a.eigenvalues == b.eigenvalues);
    CHECK(a.basis == b.basis);
}

TEST_CASE("eig_hermitian: degenerate spectra reconstruct cleanly") {
    Rng rng(1213);
    const Matrix u = random_unitary(5, rng);
    const Matrix m = u * Matrix::diagonal({2.0, 1.0, 1.0, 1.0, -3.0}) * u.adjoint();
    const EigenSystem es = eig_hermitian(m);
    CHECK(es.eigenvalues[0] == doctest::Approx(-3.0).epsilon(1e-12));
    for (int k = 1; k <= 3; ++k)
        CHECK(es.eigenvalues[k] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(es.eigenvalues[4] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(reconstruction_residual(m, es) <= 1e-10 * m.frobenius_norm());
    CHECK(unitarity_defect(es.basis) <= 1e-10);
}

TEST_CASE("eig_hermitian: rejects non-Hermitian input") {
    Matrix m(2);
    m(0, 1) = 1.0;
    m(1, 0) = 0.5; // clearly not conj-symmetric
    CHECK_THROWS_AS(eig_hermitian(m), std::invalid_argument);
}

TEST_CASE("singular_values: diagonal and identity cases") {
    const SingularSpectrum s = singular_values(Matrix::diagonal({3.0, -4.0}));
    CHECK(s[0] == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(s[1] == doctest::Approx(3.0).epsilon(1e-14));

    const SingularSpectrum id = singular_values(Matrix::identity(2));
    CHECK(id[0] == doctest::Approx(1.0));
    CHECK(id[1] == doctest::Approx(1.0));

    CHECK(singular_values(Matrix(3)).largest() == 0.0);
}

TEST_CASE("singular_values: hermitian path matches M*M eigensolve") {
    const Matrix m = hermitian_from_seed(5, 99);
    const SingularSpectrum s = singular_values(m);
    const EigenSystem mm = eig_hermitian(m.adjoint() * m);
    std::vector<double> oracle(mm.eigenvalues.size());
    for (std::size_t j = 0; j < oracle.size(); ++j)
        oracle[j] = std::sqrt(std::max(mm.eigenvalues[j], 0.0));
    std::sort(oracle.begin(), oracle.end(), std::greater<double>());
    REQUIRE(s.size() == oracle.size());
    for (std::size_t j = 0; j < s.size(); ++j)
        CHECK(s[j] == doctest::Approx(oracle[j]).epsilon(1e-10));
}

TEST_CASE("singular_values: recovers prescribed spectrum of U S V*") {
    Rng rng(314159);
    const std::size_t n = 6;
    const Matrix u = random_unitary(n, rng);
    const Matrix v = random_unitary(n, rng);
    std::vector<double> sigma = {2.5, 1.75, 1.0, 0.4, 0.1, 0.05};
    const Matrix m = u * Matrix::diagonal(sigma) * v.adjoint();
    const SingularSpectrum s = singular_values(m);
    for (std::size_t j = 0; j < n; ++j)
        CHECK(s[j] == doctest::Approx(sigma[j]).epsilon(1e-9).scale(1.0));
}

TEST_CASE("singular_values: unitary invariance") {
    Rng rng(2718);
    for (int trial = 0; trial < 10; ++trial) {
        const Matrix m = random_matrix(5, rng);
        const Matrix u = random_unitary(5, rng);
        const Matrix v = random_unitary(5, rng);
        const SingularSpectrum s0 = singular_values(m);
        const SingularSpectrum s1 = singular_values(u * m * v);
        for (std::size_t j = 0; j < s0.size(); ++j)
            CHECK(s1[j] == doctest::Approx(s0[j]).epsilon(1e-9).scale(1.0));
    }
}

TEST_CASE("singular_values: s_j(ABC) <= ||A|| s_j(B) ||C||") {
    Rng rng(515);
    for (int trial = 0; trial < 8; ++trial) {
        const Matrix a = random_matrix(6, rng);
        const Matrix b = random_matrix(6, rng);
        const Matrix c = random_matrix(6, rng);
        const double na = operator_norm(a);
        const double nc = operator_norm(c);
        const SingularSpectrum sb = singular_values(b);
        const SingularSpectrum sabc = singular_values(a * b * c);
        for (std::size_t j = 0; j < sabc.size(); ++j)
            CHECK(sabc[j] <= na * sb[j] * nc + 1e-9);
    }
}

TEST_CASE("apply_spectral_function: exponential on a diagonal") {
    const Matrix m = Matrix::diagonal({0.0, std::log(2.0)});
    const Matrix r = apply_spectral_function([](double s) { return std::exp(-s); }, m, 1.0);
    CHECK(r(0, 0).real() == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(r(1, 1).real() == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(std::abs(r(0, 1)) <= 1e-13);
}

TEST_CASE("apply_spectral_function: t = 0 gives the identity when h(0) = 1") {
    Rng rng(4242);
    Matrix m = random_psd(5, rng);
    const Matrix r = apply_spectral_function([](double s) { return std::exp(-s); }, m, 0.0);
    CHECK((r - Matrix::identity(5)).max_abs() <= 1e-12);
}

TEST_CASE("apply_spectral_function: resolvent values per eigenvalue") {
    const Matrix m = Matrix::diagonal({1.0, 3.0});
    const Matrix r = apply_spectral_function([](double s) { return 1.0 / (1.0 + s); }, m, 1.0);
    CHECK(r(0, 0).real() == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(r(1, 1).real() == doctest::Approx(0.25).epsilon(1e-13));
}

TEST_CASE("apply_spectral_function: homomorphism over commuting factors") {
    Rng rng(8888);
    const Matrix m = random_psd(6, rng);
    auto h1 = [](double s) { return std::exp(-s); };
    auto h2 = [](double s) { return 1.0 / (1.0 + s); };
    auto h12 = [&](double s) { return h1(s) * h2(s); };
    const Matrix lhs = apply_spectral_function(h12, m, 0.7);
    const Matrix rhs =
        apply_spectral_function(h1, m, 0.7) * apply_spectral_function(h2, m, 0.7);
    CHECK((lhs - rhs).max_abs() <= 1e-9);
}

TEST_CASE("apply_spectral_function: clamp window and rejection") {
    // -5e-13 sits inside the clamp window, treated as 0
    const Matrix ok = Matrix::diagonal({-5e-13, 1.0});
    const Matrix r = apply_spectral_function([](double s) { return std::exp(-s); }, ok, 1.0);
    CHECK(r(0, 0).real() == doctest::Approx(1.0).epsilon(1e-12));

    const Matrix bad = Matrix::diagonal({-1e-6, 1.0});
    CHECK_THROWS_AS(
        apply_spectral_function([](double s) { return std::exp(-s); }, bad, 1.0),
        std::domain_error);
}

TEST_CASE("operator_norm: basic values and consistency") {
    CHECK(operator_norm(Matrix::diagonal({3.0, -4.0})) == doctest::Approx(4.0));
    CHECK(operator_norm(Matrix(4)) == 0.0);

    const Matrix m = hermitian_from_seed(8, 606);
    const SingularSpectrum s = singular_values(m);
    CHECK(operator_norm(m) == doctest::Approx(s.largest()).epsilon(1e-12));
}

TEST_CASE("matrix text format round trips") {
    Rng rng(31337);
    const Matrix m = random_matrix(3, rng);
    std::stringstream ss;
    write_matrix(ss, m);
    const Matrix back = read_matrix(ss);
    CHECK(back == m);
}

TEST_CASE("matrix text format: malformed input is rejected") {
    std::stringstream empty;
    CHECK_THROWS_AS(read_matrix(empty), std::runtime_error);

    std::stringstream truncated("2\n1 0 0 0\n0 0\n");
    CHECK_THROWS_AS(read_matrix(truncated), std::runtime_error);
}

TEST_CASE("dimension cap is enforced") {
    CHECK_THROWS_AS(eig_hermitian(Matrix::identity(513)), std::invalid_argument);
}

TEST_CASE("apply_spectral_function rejects negative scale") {
    CHECK_THROWS_AS(
        apply_spectral_function([](double s) { return std::exp(-s); }, Matrix::identity(2), -1.0),
        std::domain_error);
}

TEST_CASE("matrix_power agrees with repeated multiplication") {
    Rng rng(11);
    const Matrix m = random_matrix(4, rng) * Complex{0.3, 0.0};
    Matrix direct = Matrix::identity(4);
    for (int k = 0; k < 11; ++k)
        direct = direct * m;
    CHECK((matrix_power(m, 11) - direct).max_abs() <= 1e-12);
}

#include <doctest.h>

#include <cmath>

#include "opideal/norms.hpp"
#include "opideal/rng.hpp"

using namespace opideal;

namespace {

SingularSpectrum seeded_spectrum(std::size_t length, std::uint64_t seed) {
    Rng rng(seed);
    return SingularSpectrum{random_nonincreasing(length, rng)};
}

std::vector<NormKind> all_norm_kinds(std::size_t pi_length) {
    return {NormKind::schatten(1.0), NormKind::schatten(2.0), NormKind::operator_norm_kind(),
            NormKind::dixmier(),     NormKind::weak(2.0),     NormKind::macaev(1.0),
            NormKind::macaev(2.0),   NormKind::pi(PiWeights::power_law(1.0, pi_length))};
}

} // namespace

TEST_CASE("decreasing_rearrangement: sorts absolute values") {
    const SingularSpectrum s = decreasing_rearrangement({-2.0, 1.0, 3.0});
    CHECK(s.values == std::vector<double>{3.0, 2.0, 1.0});

    const SingularSpectrum sorted = decreasing_rearrangement({5.0, 4.0, 1.0});
    CHECK(sorted.values == std::vector<double>{5.0, 4.0, 1.0});

    Rng rng(123);
    std::vector<double> raw(10);
    for (double& x : raw)
        x = rng.gaussian();
    std::vector<double> oracle;
    for (double x : raw)
        oracle.push_back(std::abs(x));
    std::sort(oracle.begin(), oracle.end(), std::greater<double>());
    CHECK(decreasing_rearrangement(raw).values == oracle);
}

TEST_CASE("rearrangement invariance: phi(xi) = phi(xi*) for every kind") {
    Rng rng(77);
    std::vector<double> raw(12);
    for (double& x : raw)
        x = 2.0 * rng.gaussian();
    const SingularSpectrum rearranged = decreasing_rearrangement(raw);

    // the same multiset in a different (still admissible) evaluation order:
    // compare against a second rearrangement of a shuffled copy
    std::vector<double> shuffled = raw;
    std::swap(shuffled[0], shuffled[7]);
    std::swap(shuffled[3], shuffled[11]);
    const SingularSpectrum rearranged2 = decreasing_rearrangement(shuffled);

    for (const NormKind& kind : all_norm_kinds(12))
        CHECK(kind.evaluate(rearranged) ==
              doctest::Approx(kind.evaluate(rearranged2)).epsilon(1e-12));
}

TEST_CASE("schatten_norm: pinned values and oracle") {
    const SingularSpectrum unit = decreasing_rearrangement({1.0, 0.0, 0.0});
    for (double p : {1.0, 2.0, 3.0, std::numeric_limits<double>::infinity()})
        CHECK(schatten_norm(unit, p) == doctest::Approx(1.0).epsilon(1e-14));

    CHECK(schatten_norm(decreasing_rearrangement({4.0, 3.0}), 2.0) ==
          doctest::Approx(5.0).epsilon(1e-14));

    const SingularSpectrum s = seeded_spectrum(20, 9001);
    double oracle = 0.0;
    for (double x : s.values)
        oracle += x * x * x;
    oracle = std::cbrt(oracle);
    CHECK(schatten_norm(s, 3.0) == doctest::Approx(oracle).epsilon(1e-12));

    CHECK(schatten_norm(s, 1.0) == doctest::Approx(s.sum()).epsilon(1e-14));
    CHECK_THROWS_AS(schatten_norm(s, 0.5), std::invalid_argument);
}

TEST_CASE("pi_norm: sup of weighted partial-sum ratios") {
    const PiWeights flat(std::vector<double>{1.0, 1.0, 1.0});
    CHECK(pi_norm(decreasing_rearrangement({3.0, 2.0, 1.0}), flat) ==
          doctest::Approx(3.0).epsilon(1e-14));

    const PiWeights inv_j = PiWeights::power_law(1.0, 6);
    CHECK(pi_norm(decreasing_rearrangement({1.0, 0.0, 0.0}), inv_j) ==
          doctest::Approx(1.0).epsilon(1e-14));

    // spectrum equal to the weights: every ratio is exactly 1
    SingularSpectrum self{inv_j.weights};
    CHECK(pi_norm(self, inv_j) == doctest::Approx(1.0).epsilon(1e-14));

    CHECK_THROWS_AS(pi_norm(seeded_spectrum(10, 1), PiWeights::power_law(0.5, 4)),
                    std::invalid_argument);
}

TEST_CASE("pi regularity diagnostic") {
    // j^{-1/2} is regular: the ratio stays bounded near 2
    CHECK(PiWeights::power_law(0.5, 10000).regularity_ratio() == doctest::Approx(2.0).epsilon(0.02));
    // j^{-1} is not: the ratio is the harmonic sum and keeps growing
    const double r1k = PiWeights::power_law(1.0, 1000).regularity_ratio();
    const double r100k = PiWeights::power_law(1.0, 100000).regularity_ratio();
    CHECK(r100k > r1k + 4.0);
}

TEST_CASE("weak_norm: pinned value at p = 2") {
    std::vector<double> v(4);
    for (std::size_t j = 0; j < 4; ++j)
        v[j] = 1.0 / std::sqrt(static_cast<double>(j + 1));
    const SingularSpectrum s{v};
    // ratios: 1, 1.20711, 1.31893, 1.39223 -> sup at n = 4
    CHECK(weak_norm(s, 2.0) == doctest::Approx(1.39223).epsilon(1e-5));

    CHECK(weak_norm(decreasing_rearrangement({1.0, 0.0, 0.0}), 2.0) ==
          doctest::Approx(1.0).epsilon(1e-14));

    const SingularSpectrum r = seeded_spectrum(15, 52);
    SingularSpectrum doubled = r;
    for (double& x : doubled.values)
        x *= 2.0;
    CHECK(weak_norm(doubled, 2.0) == doctest::Approx(2.0 * weak_norm(r, 2.0)).epsilon(1e-13));

    CHECK_THROWS_AS(weak_norm(r, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(weak_norm(r, 0.5), std::invalid_argument);
}

TEST_CASE("dixmier_norm: pinned values") {
    CHECK(dixmier_norm(decreasing_rearrangement({1.0, 0.0, 0.0})) ==
          doctest::Approx(1.0).epsilon(1e-14));

    // harmonic spectrum: H_n/(1 + ln n) < 1 for n >= 2, so the sup sits at n = 1
    std::vector<double> harmonic(100);
    for (std::size_t j = 0; j < 100; ++j)
        harmonic[j] = 1.0 / static_cast<double>(j + 1);
    CHECK(dixmier_norm(SingularSpectrum{harmonic}) == doctest::Approx(1.0).epsilon(1e-14));

    std::vector<double> geometric(30);
    for (std::size_t j = 0; j < 30; ++j)
        geometric[j] = std::pow(2.0, -static_cast<double>(j + 1));
    const SingularSpectrum g{geometric};
    CHECK(dixmier_norm(g) <= schatten_norm(g, 1.0));
}

TEST_CASE("macaev_norm: pinned values and oracle") {
    CHECK(macaev_norm(decreasing_rearrangement({1.0, 0.0}), 1.0) ==
          doctest::Approx(1.0).epsilon(1e-14));
    CHECK(macaev_norm(decreasing_rearrangement({1.0, 1.0}), 1.0) ==
          doctest::Approx(1.5).epsilon(1e-14));

    const SingularSpectrum s = seeded_spectrum(20, 31);
    double oracle = 0.0;
    for (std::size_t j = 0; j < s.size(); ++j)
        oracle += s[j] / std::sqrt(static_cast<double>(j + 1));
    CHECK(macaev_norm(s, 2.0) == doctest::Approx(oracle).epsilon(1e-13));
}

TEST_CASE("operator_ideal_norm: matrix inputs") {
    CHECK(operator_ideal_norm(Matrix::diagonal({1.0, 0.5, 1.0 / 3.0}), NormKind::dixmier()) ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(operator_ideal_norm(Matrix::identity(2), NormKind::schatten(1.0)) ==
          doctest::Approx(2.0).epsilon(1e-12));

    Rng rng(640);
    const Matrix m = random_matrix(6, rng);
    double frob = 0.0;
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = 0; j < 6; ++j)
            frob += std::norm(m(i, j));
    frob = std::sqrt(frob);
    CHECK(operator_ideal_norm(m, NormKind::schatten(2.0)) == doctest::Approx(frob).epsilon(1e-10));
}

TEST_CASE("ky_fan_dominates: partial-sum comparisons") {
    CHECK(ky_fan_dominates(decreasing_rearrangement({1.0, 1.0}),
                           decreasing_rearrangement({2.0, 0.0})));
    const SingularSpectrum s = seeded_spectrum(8, 4);
    CHECK(ky_fan_dominates(s, s));
    CHECK_FALSE(ky_fan_dominates(decreasing_rearrangement({2.0, 0.0}),
                                 decreasing_rearrangement({1.0, 1.0})));
    // unequal lengths zero-pad
    CHECK(ky_fan_dominates(decreasing_rearrangement({1.0}),
                           decreasing_rearrangement({1.0, 0.5})));
    CHECK_FALSE(ky_fan_dominates(decreasing_rearrangement({1.0, 0.5}),
                                 decreasing_rearrangement({1.0})));
}

TEST_CASE("dominance property: Ky Fan domination implies norm domination") {
    Rng rng(1001);
    const auto kinds = all_norm_kinds(16);
    for (int trial = 0; trial < 100; ++trial) {
        const SingularSpectrum eta{random_nonincreasing(16, rng)};
        // flatten toward (slightly less than) the mean: partial sums shrink
        // by a margin far above roundoff
        const double mean = eta.sum() / 16.0;
        const double lam = rng.uniform(0.1, 0.9);
        std::vector<double> mixed(16);
        for (std::size_t j = 0; j < 16; ++j)
            mixed[j] = (1.0 - lam) * eta.values[j] + lam * 0.9 * mean;
        const SingularSpectrum xi{mixed};
        REQUIRE(ky_fan_dominates(xi, eta));
        for (const NormKind& kind : kinds)
            CHECK(kind.evaluate(xi) <= kind.evaluate(eta) + 1e-12);
    }
}

TEST_CASE("sandwich: s_1 <= phi(s) <= sum s_j for every kind") {
    Rng rng(2002);
    const auto kinds = all_norm_kinds(12);
    for (int trial = 0; trial < 50; ++trial) {
        const SingularSpectrum s{random_nonincreasing(12, rng)};
        for (const NormKind& kind : kinds) {
            const double phi = kind.evaluate(s);
            CHECK(phi >= s.largest() - 1e-12);
            CHECK(phi <= s.sum() + 1e-12);
        }
    }
}

TEST_CASE("norm nesting: ||X||_phi <= ||X||_1 on matrices") {
    Rng rng(3003);
    for (int trial = 0; trial < 10; ++trial) {
        const Matrix x = random_matrix(8, rng);
        const double trace_norm = operator_ideal_norm(x, NormKind::schatten(1.0));
        for (const NormKind& kind : all_norm_kinds(8))
            CHECK(operator_ideal_norm(x, kind) <= trace_norm + 1e-10);
    }
}

TEST_CASE("banach ideal inequality: ||ABC||_{1,inf} <= ||A|| ||B||_{1,inf} ||C||") {
    Rng rng(4004);
    for (int trial = 0; trial < 25; ++trial) {
        const Matrix a = random_matrix(8, rng);
        const Matrix b = random_matrix(8, rng);
        const Matrix c = random_matrix(8, rng);
        const double lhs = operator_ideal_norm(a * b * c, NormKind::dixmier());
        const double rhs =
            operator_norm(a) * operator_ideal_norm(b, NormKind::dixmier()) * operator_norm(c);
        CHECK(lhs <= rhs + 1e-10 * std::max(1.0, rhs));
    }
}

TEST_CASE("trivial ideal norming functions phi^(r) equal Ky Fan r-sums") {
    const SingularSpectrum s = seeded_spectrum(10, 55);
    for (std::size_t r : {1u, 3u, 10u}) {
        double direct = 0.0;
        for (std::size_t j = 0; j < r; ++j)
            direct += s[j];
        CHECK(ky_fan_sum(s, r) == doctest::Approx(direct).epsilon(1e-15));
    }
    CHECK(ky_fan_sum(s, 99) == doctest::Approx(s.sum()).epsilon(1e-15));
}

TEST_CASE("dixmier vs pi(1/j): equivalence ratio is reported, not asserted") {
    std::vector<double> harmonic(50);
    for (std::size_t j = 0; j < 50; ++j)
        harmonic[j] = 1.0 / static_cast<double>(j + 1);
    const DixmierPiComparison c = compare_dixmier_pi(SingularSpectrum{harmonic});
    CHECK(c.dixmier == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(c.pi_inverse_j == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(c.ratio > 0.0);

    const DixmierPiComparison r = compare_dixmier_pi(seeded_spectrum(20, 8));
    CHECK(std::isfinite(r.ratio));
    CHECK(r.ratio > 0.0);
}

TEST_CASE("principal truncation diagnostic reaches the full-dimension norm") {
    Rng rng(5005);
    const Matrix x = random_matrix(6, rng);
    const NormKind kind = NormKind::dixmier();
    const double sup = principal_truncation_sup(x, kind);
    const double full = operator_ideal_norm(x, kind);
    CHECK(sup >= full - 1e-12);
    CHECK(sup <= full + 1e-9 * std::max(1.0, full)); // truncations never exceed the full norm
}

TEST_CASE("norm kind parse/name round trip") {
    for (const std::string token : {"operator", "schatten:1", "schatten:2", "dixmier", "weak:2",
                                    "macaev:1", "macaev:2"}) {
        const NormKind kind = parse_norm_kind(token, 8);
        CHECK(kind.name() == token);
    }
    CHECK(parse_norm_kind("schatten:inf", 8).name() == "operator");
    CHECK(parse_norm_kind("pi:alpha:1", 8).name() == "pi");
    CHECK_THROWS_AS(parse_norm_kind("weak:0.5", 8), std::invalid_argument);
    CHECK_THROWS_AS(parse_norm_kind("nonsense", 8), std::invalid_argument);
    CHECK_THROWS_AS(parse_norm_kind("pi:alpha:1", 0), std::invalid_argument);
}

TEST_CASE("symmetric norm axioms: dixmier on seeded 8x8 samples") {
    const NormAxiomReport report =
        check_symmetric_norm_axioms(NormKind::dixmier(), 8, 200, 0xD1A7);
    CHECK(report.all_pass);
    for (const AxiomCheck& c : report.checks)
        CHECK(c.pass);
    REQUIRE(report.find("rank_one_normalization") != nullptr);
    CHECK(report.find("rank_one_normalization")->pass);
}

TEST_CASE("rank-one operators have norm |alpha| in every kind") {
    Rng rng(6006);
    const Matrix u = random_unitary(6, rng);
    const Matrix v = random_unitary(6, rng);

    // scaled unit projector: Hermitian, so singular values come from the
    // |eigenvalue| path with no precision loss
    const double alpha_r = -1.7;
    Matrix projector(6);
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = 0; j < 6; ++j)
            projector(i, j) = alpha_r * u(i, 0) * std::conj(u(j, 0));
    for (const NormKind& kind : all_norm_kinds(6))
        CHECK(operator_ideal_norm(projector, kind) ==
              doctest::Approx(std::abs(alpha_r)).epsilon(1e-10));

    // general |u0><v0| dyad goes through M*M, whose noise eigenvalues get
    // sqrt-amplified to ~1e-8 tails; sum-type norms see that floor
    const Complex alpha{1.7, -0.4};
    Matrix dyad(6);
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = 0; j < 6; ++j)
            dyad(i, j) = alpha * u(i, 0) * std::conj(v(j, 0));
    for (const NormKind& kind : all_norm_kinds(6))
        CHECK(operator_ideal_norm(dyad, kind) ==
              doctest::Approx(std::abs(alpha)).epsilon(5e-7));
}

TEST_CASE("unitary conjugation preserves every norm kind") {
    Rng rng(7007);
    const Matrix x = random_matrix(6, rng);
    const Matrix u = random_unitary(6, rng);
    for (const NormKind& kind : all_norm_kinds(6)) {
        const double n0 = operator_ideal_norm(x, kind);
        const double n1 = operator_ideal_norm(u * x * u.adjoint(), kind);
        CHECK(n1 == doctest::Approx(n0).epsilon(1e-10));
    }
}

#pragma once

// Norming functions on finite spectra and the operator norms they induce:
// Schatten p, Pi-weighted, weak-p, Dixmier (||.||_{1,inf}) and Macaev
// (||.||_{inf,p}), plus partial-sum domination and the symmetric-norm axiom
// checker. All sups over n run to the spectrum length: every matrix here is
// finite rank, so the truncated sup IS the norm.

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "opideal/rng.hpp"
#include "opideal/spectral.hpp"

namespace opideal {

// Non-increasing positive weights with pi_1 = 1.
struct PiWeights {
    std::vector<double> weights;

    explicit PiWeights(std::vector<double> w) : weights(std::move(w)) { validate(); }

    static PiWeights power_law(double alpha, std::size_t length) {
        if (!(alpha > 0.0) || alpha > 1.0)
            throw std::invalid_argument("PiWeights::power_law: alpha must be in (0, 1]");
        std::vector<double> w(length);
        for (std::size_t j = 0; j < length; ++j)
            w[j] = std::pow(static_cast<double>(j + 1), -alpha);
        return PiWeights(std::move(w));
    }

    void validate() const {
        if (weights.empty() || weights.front() != 1.0)
            throw std::invalid_argument("PiWeights: first weight must equal 1");
        for (std::size_t j = 0; j < weights.size(); ++j) {
            if (!(weights[j] > 0.0))
                throw std::invalid_argument("PiWeights: weights must be positive");
            if (j + 1 < weights.size() && weights[j] < weights[j + 1])
                throw std::invalid_argument("PiWeights: weights must be non-increasing");
        }
    }

    // sum_{j<=N} pi_j / (N pi_N), reported at N = length. Stays O(1) for
    // regular weight sequences and grows without bound otherwise; diagnostic
    // only, never enforced.
    double regularity_ratio() const {
        double sum = 0.0;
        for (double w : weights)
            sum += w;
        const std::size_t n = weights.size();
        return sum / (static_cast<double>(n) * weights.back());
    }

    bool operator==(const PiWeights&) const = default;
};

inline SingularSpectrum decreasing_rearrangement(std::span<const double> seq) {
    SingularSpectrum s;
    s.values.reserve(seq.size());
    for (double x : seq) {
        if (!std::isfinite(x))
            throw std::invalid_argument("decreasing_rearrangement: non-finite entry");
        s.values.push_back(std::abs(x));
    }
    std::sort(s.values.begin(), s.values.end(), std::greater<double>());
    return s;
}

inline SingularSpectrum decreasing_rearrangement(std::initializer_list<double> seq) {
    return decreasing_rearrangement(std::span<const double>(seq.begin(), seq.size()));
}

inline void require_spectrum(const SingularSpectrum& s, const char* who) {
    if (!s.is_valid())
        throw std::invalid_argument(std::string(who) + ": spectrum must be non-negative and "
                                    "non-increasing");
}

// (sum_j s_j^p)^{1/p}; p = inf gives s_1, p = 1 the trace norm.
inline double schatten_norm(const SingularSpectrum& s, double p) {
    require_spectrum(s, "schatten_norm");
    if (!(p >= 1.0))
        throw std::invalid_argument("schatten_norm: p must satisfy p >= 1");
    if (std::isinf(p))
        return s.largest();
    if (p == 1.0)
        return s.sum();
    double acc = 0.0;
    for (double x : s.values)
        acc += std::pow(x, p);
    return std::pow(acc, 1.0 / p);
}

// sup_n (sum_{j<=n} s_j) / (sum_{j<=n} pi_j)
inline double pi_norm(const SingularSpectrum& s, const PiWeights& pi) {
    require_spectrum(s, "pi_norm");
    if (s.size() > pi.weights.size())
        throw std::invalid_argument("pi_norm: spectrum longer than weight sequence");
    double num = 0.0, den = 0.0, best = 0.0;
    for (std::size_t j = 0; j < s.size(); ++j) {
        num += s.values[j];
        den += pi.weights[j];
        best = std::max(best, num / den);
    }
    return best;
}

// sup_n n^{-(1-1/p)} sum_{j<=n} s_j, p > 1
inline double weak_norm(const SingularSpectrum& s, double p) {
    require_spectrum(s, "weak_norm");
    if (!(p > 1.0) || std::isinf(p))
        throw std::invalid_argument("weak_norm: p must satisfy 1 < p < inf (p = 1 is the "
                                    "Dixmier norm)");
    const double expo = 1.0 - 1.0 / p;
    double partial = 0.0, best = 0.0;
    for (std::size_t j = 0; j < s.size(); ++j) {
        partial += s.values[j];
        best = std::max(best, partial / std::pow(static_cast<double>(j + 1), expo));
    }
    return best;
}

// sup_n (sum_{j<=n} s_j) / (1 + ln n), natural log; the n = 1 ratio is s_1.
inline double dixmier_norm(const SingularSpectrum& s) {
    require_spectrum(s, "dixmier_norm");
    double partial = 0.0, best = 0.0;
    for (std::size_t j = 0; j < s.size(); ++j) {
        partial += s.values[j];
        best = std::max(best, partial / (1.0 + std::log(static_cast<double>(j + 1))));
    }
    return best;
}

// sum_j j^{-1/p} s_j
inline double macaev_norm(const SingularSpectrum& s, double p) {
    require_spectrum(s, "macaev_norm");
    if (!(p >= 1.0) || std::isinf(p))
        throw std::invalid_argument("macaev_norm: p must satisfy 1 <= p < inf");
    double acc = 0.0;
    for (std::size_t j = 0; j < s.size(); ++j)
        acc += std::pow(static_cast<double>(j + 1), -1.0 / p) * s.values[j];
    return acc;
}

struct NormKind {
    enum class Tag { schatten, pi, weak, dixmier, macaev };

    Tag tag = Tag::schatten;
    double p = std::numeric_limits<double>::infinity();
    std::vector<double> pi_weights; // materialized Pi weights (tag == pi)

    static NormKind schatten(double p) {
        if (!(p >= 1.0))
            throw std::invalid_argument("NormKind::schatten: p must satisfy p >= 1");
        return {Tag::schatten, p, {}};
    }
    static NormKind operator_norm_kind() { return schatten(std::numeric_limits<double>::infinity()); }
    static NormKind pi(const PiWeights& w) { return {Tag::pi, 0.0, w.weights}; }
    static NormKind weak(double p) {
        if (!(p > 1.0) || std::isinf(p))
            throw std::invalid_argument("NormKind::weak: p must satisfy 1 < p < inf");
        return {Tag::weak, p, {}};
    }
    static NormKind dixmier() { return {Tag::dixmier, 0.0, {}}; }
    static NormKind macaev(double p) {
        if (!(p >= 1.0) || std::isinf(p))
            throw std::invalid_argument("NormKind::macaev: p must satisfy 1 <= p < inf");
        return {Tag::macaev, p, {}};
    }

    double evaluate(const SingularSpectrum& s) const {
        switch (tag) {
        case Tag::schatten:
            return schatten_norm(s, p);
        case Tag::pi:
            return pi_norm(s, PiWeights(pi_weights));
        case Tag::weak:
            return weak_norm(s, p);
        case Tag::dixmier:
            return dixmier_norm(s);
        case Tag::macaev:
            return macaev_norm(s, p);
        }
        throw std::logic_error("NormKind::evaluate: unreachable");
    }

    std::string name() const {
        char buf[48];
        switch (tag) {
        case Tag::schatten:
            if (std::isinf(p))
                return "operator";
            std::snprintf(buf, sizeof(buf), "schatten:%g", p);
            return buf;
        case Tag::pi:
            return "pi";
        case Tag::weak:
            std::snprintf(buf, sizeof(buf), "weak:%g", p);
            return buf;
        case Tag::dixmier:
            return "dixmier";
        case Tag::macaev:
            std::snprintf(buf, sizeof(buf), "macaev:%g", p);
            return buf;
        }
        return "?";
    }

    bool operator==(const NormKind&) const = default;
};

// Token grammar: operator | schatten:<p|inf> | dixmier | weak:<p> |
// macaev:<p> | pi:alpha:<a>. Pi weights j^{-a} are materialized to
// `pi_length` entries (required for pi tokens).
inline NormKind parse_norm_kind(const std::string& token, std::size_t pi_length = 0) {
    auto param_after = [&](std::size_t pos) -> double {
        const std::string text = token.substr(pos);
        try {
            std::size_t used = 0;
            const double x = std::stod(text, &used);
            if (used == text.size())
                return x;
        } catch (const std::exception&) {
        }
        throw std::invalid_argument("parse_norm_kind: malformed parameter in '" + token + "'");
    };
    if (token == "operator" || token == "schatten:inf")
        return NormKind::operator_norm_kind();
    if (token == "dixmier")
        return NormKind::dixmier();
    if (token.rfind("schatten:", 0) == 0)
        return NormKind::schatten(param_after(9));
    if (token.rfind("weak:", 0) == 0)
        return NormKind::weak(param_after(5));
    if (token.rfind("macaev:", 0) == 0)
        return NormKind::macaev(param_after(7));
    if (token.rfind("pi:alpha:", 0) == 0) {
        if (pi_length == 0)
            throw std::invalid_argument("parse_norm_kind: pi norm needs a target spectrum length");
        return NormKind::pi(PiWeights::power_law(param_after(9), pi_length));
    }
    throw std::invalid_argument("parse_norm_kind: unknown norm kind '" + token + "'");
}

// ||X||_phi = phi(s(X))
inline double operator_ideal_norm(const Matrix& m, const NormKind& kind) {
    return kind.evaluate(singular_values(m));
}

// true iff sum_{j<=n} xi_j <= sum_{j<=n} eta_j for every n; shorter side is
// zero padded.
inline bool ky_fan_dominates(const SingularSpectrum& xi, const SingularSpectrum& eta) {
    require_spectrum(xi, "ky_fan_dominates");
    require_spectrum(eta, "ky_fan_dominates");
    const std::size_t n = std::max(xi.size(), eta.size());
    double sx = 0.0, se = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        sx += j < xi.size() ? xi.values[j] : 0.0;
        se += j < eta.size() ? eta.values[j] : 0.0;
        if (sx > se)
            return false;
    }
    return true;
}

// Ky Fan r-sum: sum of the r largest absolute values. The "trivial ideal"
// norming functions phi^(r) coincide with these partial sums.
inline double ky_fan_sum(const SingularSpectrum& s, std::size_t r) {
    require_spectrum(s, "ky_fan_sum");
    double acc = 0.0;
    for (std::size_t j = 0; j < std::min(r, s.size()); ++j)
        acc += s.values[j];
    return acc;
}

// The two norms are equivalent without a stated constant; we report the
// observed ratio instead of asserting one.
struct DixmierPiComparison {
    double dixmier = 0.0;
    double pi_inverse_j = 0.0;
    double ratio = 0.0; // dixmier / pi
};

inline DixmierPiComparison compare_dixmier_pi(const SingularSpectrum& s) {
    DixmierPiComparison c;
    c.dixmier = dixmier_norm(s);
    c.pi_inverse_j = pi_norm(s, PiWeights::power_law(1.0, std::max<std::size_t>(s.size(), 1)));
    c.ratio = c.pi_inverse_j > 0.0 ? c.dixmier / c.pi_inverse_j : 0.0;
    return c;
}

// Membership diagnostic: sup over leading principal truncations P_m X P_m of
// the norm. Informative only.
inline double principal_truncation_sup(const Matrix& m, const NormKind& kind) {
    double best = 0.0;
    for (std::size_t cut = 1; cut <= m.dim(); ++cut) {
        Matrix truncated(cut);
        for (std::size_t i = 0; i < cut; ++i)
            for (std::size_t j = 0; j < cut; ++j)
                truncated(i, j) = m(i, j);
        best = std::max(best, operator_ideal_norm(truncated, kind));
    }
    return best;
}

struct AxiomCheck {
    std::string axiom;
    double worst_violation = 0.0; // relative; <= 0 means satisfied with margin
    bool pass = true;
};

struct NormAxiomReport {
    std::string norm_name;
    std::size_t samples = 0;
    double tolerance = 0.0;
    std::vector<AxiomCheck> checks;
    bool all_pass = true;

    const AxiomCheck* find(const std::string& axiom) const {
        for (const AxiomCheck& c : checks)
            if (c.axiom == axiom)
                return &c;
        return nullptr;
    }
};

// Exercises positivity, homogeneity, triangle, the two-sided multiplicative
// bound, unitary invariance, adjoint equality, rank-one normalization and the
// sandwich s_1 <= phi(s) <= sum s_j on seeded general complex samples.
inline NormAxiomReport check_symmetric_norm_axioms(const NormKind& kind, std::size_t dim,
                                                   std::size_t n_samples, std::uint64_t seed,
                                                   double rel_tol = 1e-9) {
    NormAxiomReport report;
    report.norm_name = kind.name();
    report.samples = n_samples;
    report.tolerance = rel_tol;

    AxiomCheck positivity{"positivity"};
    AxiomCheck homogeneity{"homogeneity"};
    AxiomCheck triangle{"triangle"};
    AxiomCheck multiplicative{"multiplicative_bound"};
    AxiomCheck unitary{"unitary_invariance"};
    AxiomCheck adjoint{"adjoint_equality"};
    AxiomCheck rank_one{"rank_one_normalization"};
    AxiomCheck sandwich{"sandwich"};

    auto record = [](AxiomCheck& c, double violation) {
        c.worst_violation = std::max(c.worst_violation, violation);
    };

    Rng rng(seed);
    for (std::size_t trial = 0; trial < n_samples; ++trial) {
        const Matrix x = random_matrix(dim, rng);
        const Matrix y = random_matrix(dim, rng);
        const Matrix a = random_matrix(dim, rng);
        const Matrix b = random_matrix(dim, rng);
        const Matrix u = random_unitary(dim, rng);
        const Matrix v = random_unitary(dim, rng);
        const Complex alpha = rng.complex_gaussian();

        const SingularSpectrum sx = singular_values(x);
        const double nx = kind.evaluate(sx);
        const double ny = operator_ideal_norm(y, kind);
        const double scale = std::max({nx, ny, 1e-30});

        record(positivity, nx > 0.0 ? -1.0 : 1.0);
        record(homogeneity,
               std::abs(operator_ideal_norm(alpha * x, kind) - std::abs(alpha) * nx) /
                   std::max(std::abs(alpha) * nx, 1e-30) - rel_tol);
        record(triangle, (operator_ideal_norm(x + y, kind) - (nx + ny)) / scale - rel_tol);
        record(multiplicative,
               (operator_ideal_norm(a * x * b, kind) -
                operator_norm(a) * nx * operator_norm(b)) /
                   std::max(operator_norm(a) * nx * operator_norm(b), 1e-30) - rel_tol);
        record(unitary,
               std::abs(operator_ideal_norm(u * x * v, kind) - nx) / scale - rel_tol);
        record(adjoint, std::abs(operator_ideal_norm(x.adjoint(), kind) - nx) / scale - rel_tol);

        // rank-one: a scaled unit projector |u0><u0| -> norm |alpha|
        const double alpha_r = rng.gaussian();
        Matrix projector(dim);
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t j = 0; j < dim; ++j)
                projector(i, j) = alpha_r * u(i, 0) * std::conj(u(j, 0));
        record(rank_one,
               std::abs(operator_ideal_norm(projector, kind) - std::abs(alpha_r)) /
                   std::max(std::abs(alpha_r), 1e-30) - rel_tol);

        record(sandwich, std::max(sx.largest() - nx, nx - sx.sum()) / scale - rel_tol);
    }

    report.checks = {positivity, homogeneity, triangle,  multiplicative,
                     unitary,    adjoint,     rank_one, sandwich};
    for (AxiomCheck& c : report.checks) {
        c.pass = c.worst_violation <= 0.0;
        report.all_pass = report.all_pass && c.pass;
    }
    return report;
}

} // namespace opideal

#pragma once

// Seeded random inputs for property suites and the random_psd operator
// builder. Uniform and Gaussian variates are derived from raw mt19937_64
// output so that streams are identical across standard libraries.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "opideal/matrix.hpp"

namespace opideal {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform01() {
        // 53-bit mantissa in [0, 1)
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u = 0.0;
        do {
            u = uniform01();
        } while (u <= 0.0);
        constexpr double two_pi = 6.283185307179586476925286766559;
        const double v = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u));
        spare_ = r * std::sin(two_pi * v);
        have_spare_ = true;
        return r * std::cos(two_pi * v);
    }

    Complex complex_gaussian() { return Complex{gaussian(), gaussian()}; }

private:
    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

inline Matrix random_matrix(std::size_t dim, Rng& rng) {
    Matrix m(dim);
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j)
            m(i, j) = rng.complex_gaussian();
    return m;
}

inline Matrix random_hermitian(std::size_t dim, Rng& rng) {
    Matrix g = random_matrix(dim, rng);
    Matrix h(dim);
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j)
            h(i, j) = 0.5 * (g(i, j) + std::conj(g(j, i)));
    return h;
}

inline Matrix random_psd(std::size_t dim, Rng& rng) {
    Matrix g = random_matrix(dim, rng);
    return g.adjoint() * g;
}

// Modified Gram-Schmidt, two passes; random Gaussian columns are well enough
// conditioned that this lands within ~1e-14 of unitarity.
inline Matrix random_unitary(std::size_t dim, Rng& rng) {
    Matrix q = random_matrix(dim, rng);
    for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t j = 0; j < dim; ++j) {
            for (std::size_t k = 0; k < j; ++k) {
                Complex proj{0.0, 0.0};
                for (std::size_t i = 0; i < dim; ++i)
                    proj += std::conj(q(i, k)) * q(i, j);
                for (std::size_t i = 0; i < dim; ++i)
                    q(i, j) -= proj * q(i, k);
            }
            double nrm = 0.0;
            for (std::size_t i = 0; i < dim; ++i)
                nrm += std::norm(q(i, j));
            nrm = std::sqrt(nrm);
            if (nrm == 0.0)
                throw std::runtime_error("random_unitary: degenerate column");
            for (std::size_t i = 0; i < dim; ++i)
                q(i, j) /= nrm;
        }
    }
    return q;
}

inline std::vector<double> random_nonincreasing(std::size_t length, Rng& rng, double scale = 1.0) {
    std::vector<double> v(length);
    double level = 0.0;
    for (std::size_t j = 0; j < length; ++j)
        level = v[j] = level + scale * rng.uniform01();
    // built as increasing partial sums; reverse for a non-increasing sequence
    std::vector<double> out(length);
    for (std::size_t j = 0; j < length; ++j)
        out[j] = v[length - 1 - j];
    return out;
}

} // namespace opideal

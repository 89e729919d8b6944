#pragma once

// Dense square complex matrices: the finite-dimensional stand-ins for the
// bounded self-adjoint operators everything else manipulates.

#include <cmath>
#include <complex>
#include <cstddef>
#include <istream>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace opideal {

using Complex = std::complex<double>;

class Matrix {
public:
    Matrix() = default;

    explicit Matrix(std::size_t dim) : dim_(dim), entries_(dim * dim, Complex{0.0, 0.0}) {
        if (dim == 0)
            throw std::invalid_argument("Matrix: dimension must be >= 1");
    }

    static Matrix identity(std::size_t dim) {
        Matrix m(dim);
        for (std::size_t i = 0; i < dim; ++i)
            m(i, i) = 1.0;
        return m;
    }

    static Matrix diagonal(std::span<const double> values) {
        Matrix m(values.size());
        for (std::size_t i = 0; i < values.size(); ++i)
            m(i, i) = values[i];
        return m;
    }

    static Matrix diagonal(std::initializer_list<double> values) {
        return diagonal(std::span<const double>(values.begin(), values.size()));
    }

    std::size_t dim() const { return dim_; }

    Complex& operator()(std::size_t i, std::size_t j) { return entries_[i * dim_ + j]; }
    const Complex& operator()(std::size_t i, std::size_t j) const { return entries_[i * dim_ + j]; }

    std::span<const Complex> entries() const { return entries_; }

    Matrix adjoint() const {
        Matrix r(dim_);
        for (std::size_t i = 0; i < dim_; ++i)
            for (std::size_t j = 0; j < dim_; ++j)
                r(j, i) = std::conj((*this)(i, j));
        return r;
    }

    double max_abs() const {
        double m = 0.0;
        for (const Complex& z : entries_)
            m = std::max(m, std::abs(z));
        return m;
    }

    double frobenius_norm() const {
        double s = 0.0;
        for (const Complex& z : entries_)
            s += std::norm(z);
        return std::sqrt(s);
    }

    Complex trace() const {
        Complex t = 0.0;
        for (std::size_t i = 0; i < dim_; ++i)
            t += (*this)(i, i);
        return t;
    }

    // max_ij |a_ij - conj(a_ji)| relative to the largest entry magnitude
    double hermitian_defect() const {
        double scale = max_abs();
        if (scale == 0.0)
            return 0.0;
        double worst = 0.0;
        for (std::size_t i = 0; i < dim_; ++i)
            for (std::size_t j = i; j < dim_; ++j)
                worst = std::max(worst, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
        return worst / scale;
    }

    bool is_hermitian(double rel_tol = 1e-12) const { return hermitian_defect() <= rel_tol; }

    bool all_finite() const {
        for (const Complex& z : entries_)
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
                return false;
        return true;
    }

    Matrix& operator+=(const Matrix& rhs) {
        require_same_dim(rhs);
        for (std::size_t k = 0; k < entries_.size(); ++k)
            entries_[k] += rhs.entries_[k];
        return *this;
    }

    Matrix& operator-=(const Matrix& rhs) {
        require_same_dim(rhs);
        for (std::size_t k = 0; k < entries_.size(); ++k)
            entries_[k] -= rhs.entries_[k];
        return *this;
    }

    Matrix& operator*=(Complex alpha) {
        for (Complex& z : entries_)
            z *= alpha;
        return *this;
    }

    friend Matrix operator+(Matrix lhs, const Matrix& rhs) { return lhs += rhs; }
    friend Matrix operator-(Matrix lhs, const Matrix& rhs) { return lhs -= rhs; }
    friend Matrix operator*(Matrix lhs, Complex alpha) { return lhs *= alpha; }
    friend Matrix operator*(Complex alpha, Matrix rhs) { return rhs *= alpha; }

    friend Matrix operator*(const Matrix& lhs, const Matrix& rhs) {
        lhs.require_same_dim(rhs);
        const std::size_t n = lhs.dim_;
        Matrix out(n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t k = 0; k < n; ++k) {
                const Complex a = lhs(i, k);
                if (a == Complex{0.0, 0.0})
                    continue;
                for (std::size_t j = 0; j < n; ++j)
                    out(i, j) += a * rhs(k, j);
            }
        }
        return out;
    }

    bool operator==(const Matrix& rhs) const = default;

private:
    void require_same_dim(const Matrix& rhs) const {
        if (dim_ != rhs.dim_)
            throw std::invalid_argument("Matrix: dimension mismatch (" + std::to_string(dim_) +
                                        " vs " + std::to_string(rhs.dim_) + ")");
    }

    std::size_t dim_ = 0;
    std::vector<Complex> entries_;
};

inline Matrix matrix_power(const Matrix& m, std::size_t n) {
    Matrix result = Matrix::identity(m.dim());
    Matrix base = m;
    while (n > 0) {
        if (n & 1u)
            result = result * base;
        n >>= 1;
        if (n > 0)
            base = base * base;
    }
    return result;
}

// Text format: first line the dimension, then dim*dim whitespace-separated
// entries as real/imaginary pairs, row-major.
inline void write_matrix(std::ostream& out, const Matrix& m) {
    out << m.dim() << "\n";
    char buf[64];
    for (std::size_t i = 0; i < m.dim(); ++i) {
        for (std::size_t j = 0; j < m.dim(); ++j) {
            const Complex z = m(i, j);
            std::snprintf(buf, sizeof(buf), "%.17g %.17g", z.real(), z.imag());
            out << buf << (j + 1 < m.dim() ? " " : "");
        }
        out << "\n";
    }
}

inline Matrix read_matrix(std::istream& in) {
    std::size_t dim = 0;
    if (!(in >> dim) || dim == 0)
        throw std::runtime_error("read_matrix: missing or invalid dimension");
    Matrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = 0; j < dim; ++j) {
            double re = 0.0, im = 0.0;
            if (!(in >> re >> im))
                throw std::runtime_error("read_matrix: expected " + std::to_string(2 * dim * dim) +
                                         " values, input ended early");
            m(i, j) = Complex{re, im};
        }
    }
    return m;
}

} // namespace opideal

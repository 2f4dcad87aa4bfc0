#pragma once

/**
 * @file linalg.hpp
 * @brief Minimal dense matrix and a cyclic Jacobi eigensolver for real
 * symmetric matrices.
 */

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <vector>

#include "zqlab/error.hpp"

namespace zqlab {

/// Row-major dense matrix.
template <class T>
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols, T fill = T{}) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static DenseMatrix identity(std::size_t n) {
        DenseMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = T{1};
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    T& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
    const T& operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

    const std::vector<T>& data() const noexcept { return data_; }

    DenseMatrix transposed() const {
        DenseMatrix t(cols_, rows_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
        return t;
    }

    bool is_symmetric(T tol = T{}) const {
        if (rows_ != cols_) return false;
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = r + 1; c < cols_; ++c) {
                const T diff = (*this)(r, c) - (*this)(c, r);
                if (diff > tol || -diff > tol) return false;
            }
        return true;
    }

    friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

/// M * M^T.
template <class Out, class T>
DenseMatrix<Out> gram(const DenseMatrix<T>& m) {
    DenseMatrix<Out> g(m.rows(), m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = i; j < m.rows(); ++j) {
            Out acc{};
            for (std::size_t k = 0; k < m.cols(); ++k) acc += static_cast<Out>(m(i, k)) * static_cast<Out>(m(j, k));
            g(i, j) = acc;
            g(j, i) = acc;
        }
    return g;
}

struct EigenDecomposition {
    /// Descending.
    std::vector<double> values;
    /// Column j is the unit eigenvector for values[j].
    DenseMatrix<double> vectors;
    int sweeps = 0;
};

struct JacobiOptions {
    double off_tol = 1e-10;
    int max_sweeps = 100;
};

inline double off_diagonal_norm(const DenseMatrix<double>& a) {
    double s = 0.0;
    for (std::size_t r = 0; r < a.rows(); ++r)
        for (std::size_t c = 0; c < a.cols(); ++c)
            if (r != c) s += a(r, c) * a(r, c);
    return std::sqrt(s);
}

/// Cyclic Jacobi: rotations sweep pairs (p, q), p < q, in row order until the
/// off-diagonal Frobenius norm drops below off_tol (scaled by the matrix norm
/// when that exceeds one).
inline EigenDecomposition eig_symmetric(const DenseMatrix<double>& m, const JacobiOptions& opts = {}) {
    require(m.is_symmetric(1e-12), ErrorCode::invalid_argument, "eig_symmetric needs a symmetric matrix (use singular_values)");
    const std::size_t n = m.rows();
    DenseMatrix<double> a = m;
    DenseMatrix<double> v = DenseMatrix<double>::identity(n);

    double frob = 0.0;
    for (double x : m.data()) frob += x * x;
    const double target = opts.off_tol * std::max(1.0, std::sqrt(frob));

    EigenDecomposition out;
    for (; out.sweeps < opts.max_sweeps; ++out.sweeps) {
        if (off_diagonal_norm(a) < target) break;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }
    require(off_diagonal_norm(a) < target, ErrorCode::invalid_argument, "Jacobi iteration did not converge");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return a(i, i) > a(j, j); });
    out.values.resize(n);
    out.vectors = DenseMatrix<double>(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        out.values[j] = a(order[j], order[j]);
        for (std::size_t k = 0; k < n; ++k) out.vectors(k, j) = v(k, order[j]);
    }
    return out;
}

/// max |M - U diag(values) U^T|.
inline double reconstruction_error(const DenseMatrix<double>& m, const EigenDecomposition& e) {
    double worst = 0.0;
    const std::size_t n = m.rows();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            double acc = 0.0;
            for (std::size_t k = 0; k < n; ++k) acc += e.vectors(i, k) * e.values[k] * e.vectors(j, k);
            worst = std::max(worst, std::abs(acc - m(i, j)));
        }
    return worst;
}

}  // namespace zqlab

#pragma once

/**
 * @file spectra.hpp
 * @brief Incidence matrices, their spectra, the exact rectangular norm
 * sum_{a,a'} (sum_b M(a,b) M(a',b))^2, eigenvalue clustering, and checks that
 * a family of transformations preserves a matrix.
 */

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <istream>
#include <numeric>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "zqlab/error.hpp"
#include "zqlab/gl2.hpp"
#include "zqlab/incidence.hpp"
#include "zqlab/linalg.hpp"
#include "zqlab/modring.hpp"
#include "zqlab/parallel.hpp"

namespace zqlab {

/// A dense 0/1 incidence matrix with its row and column labels.
struct IncidenceMatrix {
    IncidenceKind kind = IncidenceKind::dot;
    Modulus modulus{2};
    Residue lambda = 0;
    DetShape shape;
    std::vector<Point> row_index;  ///< sorted
    std::vector<Point> col_index;  ///< sorted
    DenseMatrix<std::uint8_t> entries;

    std::size_t rows() const noexcept { return entries.rows(); }
    std::size_t cols() const noexcept { return entries.cols(); }
    bool entry(std::size_t r, std::size_t c) const noexcept { return entries(r, c) != 0; }

    std::optional<std::size_t> row_of(const Point& p) const { return find(row_index, p); }
    std::optional<std::size_t> col_of(const Point& p) const { return find(col_index, p); }

    std::uint64_t row_sum(std::size_t r) const {
        std::uint64_t s = 0;
        for (std::size_t c = 0; c < cols(); ++c) s += entries(r, c);
        return s;
    }

    DenseMatrix<double> to_double() const {
        DenseMatrix<double> m(rows(), cols());
        for (std::size_t r = 0; r < rows(); ++r)
            for (std::size_t c = 0; c < cols(); ++c) m(r, c) = entries(r, c);
        return m;
    }

    bool is_symmetric() const { return row_index == col_index && entries.is_symmetric(); }

private:
    static std::optional<std::size_t> find(const std::vector<Point>& idx, const Point& p) {
        auto it = std::lower_bound(idx.begin(), idx.end(), p);
        if (it == idx.end() || *it != p) return std::nullopt;
        return static_cast<std::size_t>(it - idx.begin());
    }
};

struct BuildOptions {
    std::size_t cap = 5000;
    unsigned threads = 1;
};

namespace detail {

inline bool incidence_holds(IncidenceKind kind, const Point& a, const Point& b, Residue lambda, const DetShape& shape,
                            std::int64_t q) {
    switch (kind) {
        case IncidenceKind::dot: return dot_mod(a, b, q) == lambda;
        case IncidenceKind::det: return det_value(a, b, shape, q) == lambda;
        case IncidenceKind::crossratio: {
            const auto v = cross_ratio(a[0], a[1], b[0], b[1], q);
            return v && *v == lambda;
        }
    }
    return false;
}

}  // namespace detail

/// Matrix over explicit row and column families (sorted and deduplicated here).
inline IncidenceMatrix build_matrix(IncidenceKind kind, const Modulus& mod, Residue lambda, std::vector<Point> rows,
                                    std::vector<Point> cols, DetShape shape = {}, const BuildOptions& opts = {}) {
    require(rows.size() <= opts.cap && cols.size() <= opts.cap, ErrorCode::too_large,
            "matrix dimension " + std::to_string(std::max(rows.size(), cols.size())) + " exceeds cap " +
                std::to_string(opts.cap));
    if (kind != IncidenceKind::dot)
        require(mod.is_prime(), ErrorCode::invalid_modulus, std::string(to_string(kind)) + " matrices need a prime modulus");
    for (auto* fam : {&rows, &cols}) {
        std::sort(fam->begin(), fam->end());
        fam->erase(std::unique(fam->begin(), fam->end()), fam->end());
    }
    IncidenceMatrix m;
    m.kind = kind;
    m.modulus = mod;
    m.lambda = mod.reduce(lambda);
    m.shape = shape;
    m.row_index = std::move(rows);
    m.col_index = std::move(cols);
    m.entries = DenseMatrix<std::uint8_t>(m.row_index.size(), m.col_index.size());
    const auto q = mod.value();
    parallel_for(m.rows(), opts.threads, [&](std::size_t r) {
        for (std::size_t c = 0; c < m.cols(); ++c)
            m.entries(r, c) = detail::incidence_holds(kind, m.row_index[r], m.col_index[c], m.lambda, shape, q);
    });
    return m;
}

/// Full families: dot uses all coprime n-tuples (shape.n = n) on both sides,
/// det all n-tuples against all m-tuples of vectors in Z_q^d, crossratio all
/// of Z_q^2.
inline IncidenceMatrix build_full_matrix(IncidenceKind kind, const Modulus& mod, Residue lambda, DetShape shape,
                                         const BuildOptions& opts = {}) {
    const auto q = static_cast<std::uint64_t>(mod.value());
    switch (kind) {
        case IncidenceKind::dot: {
            const auto n = static_cast<unsigned>(shape.n);
            require(n >= 1, ErrorCode::invalid_argument, "dot matrix needs n >= 1");
            require(jordan_totient(n, mod) <= opts.cap, ErrorCode::too_large, "dot family exceeds cap");
            auto fam = coprime_tuples(mod, n);
            return build_matrix(kind, mod, lambda, fam, fam, shape, opts);
        }
        case IncidenceKind::det: {
            const std::size_t d = shape.d();
            for (auto k : {shape.n, shape.m}) {
                std::uint64_t size = 1;
                for (std::size_t i = 0; i < k * d; ++i) {
                    size = checked_mul(size, q);
                    require(size <= opts.cap, ErrorCode::too_large, "det family exceeds cap");
                }
            }
            return build_matrix(kind, mod, lambda, all_tuples(mod, shape.n * d), all_tuples(mod, shape.m * d), shape, opts);
        }
        case IncidenceKind::crossratio: {
            require(q * q <= opts.cap, ErrorCode::too_large, "cross-ratio family exceeds cap");
            auto fam = all_tuples(mod, 2);
            return build_matrix(kind, mod, lambda, fam, fam, {2, 0}, opts);
        }
    }
    fail(ErrorCode::invalid_argument, "unknown kind");
}

/// Square roots of the eigenvalues of the smaller Gram matrix, descending;
/// min(rows, cols) values.
inline std::vector<double> singular_values(const DenseMatrix<double>& m) {
    if (m.rows() == 0 || m.cols() == 0) return {};
    const auto g = m.rows() <= m.cols() ? gram<double>(m) : gram<double>(m.transposed());
    auto e = eig_symmetric(g);
    std::vector<double> out;
    out.reserve(e.values.size());
    for (double v : e.values) out.push_back(std::sqrt(std::max(0.0, v)));
    return out;
}

// ---------------------------------------------------------------------------
// Exact Gram matrix and rectangular norm
// ---------------------------------------------------------------------------

namespace detail {

inline std::vector<std::uint64_t> pack_rows(const IncidenceMatrix& m, std::size_t& words) {
    words = (m.cols() + 63) / 64;
    std::vector<std::uint64_t> bits(m.rows() * words, 0);
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c)
            if (m.entries(r, c)) bits[r * words + c / 64] |= std::uint64_t{1} << (c % 64);
    return bits;
}

}  // namespace detail

/// G = M M^T in exact integers (rows packed into 64-bit words).
inline DenseMatrix<std::uint32_t> gram_counts(const IncidenceMatrix& m, unsigned threads = 1) {
    std::size_t words = 0;
    const auto bits = detail::pack_rows(m, words);
    DenseMatrix<std::uint32_t> g(m.rows(), m.rows());
    parallel_for(m.rows(), threads, [&](std::size_t i) {
        for (std::size_t j = 0; j < m.rows(); ++j) {
            std::uint32_t acc = 0;
            for (std::size_t w = 0; w < words; ++w)
                acc += static_cast<std::uint32_t>(std::popcount(bits[i * words + w] & bits[j * words + w]));
            g(i, j) = acc;
        }
    });
    return g;
}

struct RectangularNorm {
    std::uint64_t total = 0;         ///< sum over all (a, a')
    std::uint64_t diagonal = 0;      ///< a = a' only
    std::uint64_t off_diagonal = 0;  ///< a != a'
};

/// sigma = sum_{a,a'} |sum_b M(a,b) M(a',b)|^2, which equals the sum of fourth
/// powers of the singular values.
inline RectangularNorm rectangular_norm(const IncidenceMatrix& m, unsigned threads = 1) {
    const auto g = gram_counts(m, threads);
    unsigned __int128 diag = 0, off = 0;
    for (std::size_t i = 0; i < g.rows(); ++i)
        for (std::size_t j = 0; j < g.cols(); ++j) {
            const auto v = static_cast<unsigned __int128>(g(i, j)) * g(i, j);
            (i == j ? diag : off) += v;
        }
    const unsigned __int128 total = diag + off;
    require(total <= UINT64_MAX, ErrorCode::too_large, "rectangular norm overflows 64 bits");
    return {static_cast<std::uint64_t>(total), static_cast<std::uint64_t>(diag), static_cast<std::uint64_t>(off)};
}

// ---------------------------------------------------------------------------
// Clustering and spectrum reports
// ---------------------------------------------------------------------------

struct EigenCluster {
    double value = 0.0;  ///< mean of the members
    std::size_t multiplicity = 0;
};

/// Greedy clustering of a descending list: a value joins the current cluster
/// when it is within tol of the previous value.
inline std::vector<EigenCluster> cluster_multiplicities(const std::vector<double>& descending, double tol) {
    std::vector<EigenCluster> out;
    double sum = 0.0;
    for (std::size_t i = 0; i < descending.size(); ++i) {
        if (i > 0 && descending[i - 1] - descending[i] <= tol) {
            sum += descending[i];
            ++out.back().multiplicity;
            out.back().value = sum / static_cast<double>(out.back().multiplicity);
            continue;
        }
        sum = descending[i];
        out.push_back({descending[i], 1});
    }
    return out;
}

struct SpectrumReport {
    /// Eigenvalues for symmetric matrices, singular values otherwise; descending.
    std::vector<double> values;
    bool symmetric = true;
    std::vector<EigenCluster> clusters;
    double cluster_tol = 0.0;
    double top_value = 0.0;
    /// Largest |value| after the first.
    double second_value = 0.0;
    double fourth_moment_float = 0.0;
    std::uint64_t fourth_moment_exact = 0;
    RectangularNorm norm;
    /// Max reconstruction error of the eigendecomposition (symmetric case).
    double reconstruction_error = 0.0;
    std::optional<EigenDecomposition> eigen;

    double fourth_moment_rel_error() const {
        if (fourth_moment_exact == 0) return std::abs(fourth_moment_float);
        return std::abs(fourth_moment_float - static_cast<double>(fourth_moment_exact)) / static_cast<double>(fourth_moment_exact);
    }

    std::size_t min_nontop_multiplicity() const {
        std::size_t best = 0;
        for (std::size_t i = 1; i < clusters.size(); ++i)
            best = best == 0 ? clusters[i].multiplicity : std::min(best, clusters[i].multiplicity);
        return best;
    }
};

/// Default tolerance 1e-6 * dim * max|M| (max|M| = 1 for incidence matrices).
inline double default_cluster_tol(const IncidenceMatrix& m) {
    return 1e-6 * static_cast<double>(std::max(m.rows(), m.cols()));
}

inline SpectrumReport analyze_spectrum(const IncidenceMatrix& m, std::optional<double> cluster_tol = std::nullopt,
                                       unsigned threads = 1, bool keep_vectors = false) {
    SpectrumReport r;
    const auto dm = m.to_double();
    r.symmetric = m.is_symmetric();
    if (r.symmetric) {
        auto e = eig_symmetric(dm);
        r.values = e.values;
        r.reconstruction_error = reconstruction_error(dm, e);
        if (keep_vectors) r.eigen = std::move(e);
    } else {
        r.values = singular_values(dm);
    }
    r.cluster_tol = cluster_tol.value_or(default_cluster_tol(m));
    r.clusters = cluster_multiplicities(r.values, r.cluster_tol);
    if (!r.values.empty()) r.top_value = r.values.front();
    for (std::size_t i = 1; i < r.values.size(); ++i) r.second_value = std::max(r.second_value, std::abs(r.values[i]));
    for (double v : r.values) r.fourth_moment_float += v * v * v * v;
    r.norm = rectangular_norm(m, threads);
    r.fourth_moment_exact = r.norm.total;
    return r;
}

// ---------------------------------------------------------------------------
// Invariance checks
// ---------------------------------------------------------------------------

struct InvarianceCounterexample {
    std::size_t transform = 0;
    Point row;
    Point col;
};

struct InvarianceReport {
    bool invariant = true;
    std::size_t transforms_checked = 0;
    std::uint64_t pairs_checked = 0;
    std::optional<InvarianceCounterexample> counterexample;
};

/// entry(a, b) == entry(g a, g b) for every g. `action(g, label)` returns the
/// image label, or nullopt when the image is not a finite point (such labels
/// are skipped). A finite image missing from the index is a mapping error.
template <class Transform, class Action>
InvarianceReport check_invariance(const IncidenceMatrix& m, const std::vector<Transform>& transforms, Action&& action) {
    InvarianceReport rep;
    auto map_index = [&](const std::vector<Point>& idx, const Transform& g, bool rows) {
        std::vector<std::optional<std::size_t>> out(idx.size());
        for (std::size_t i = 0; i < idx.size(); ++i) {
            auto img = action(g, idx[i]);
            if (!img) continue;
            out[i] = rows ? m.row_of(*img) : m.col_of(*img);
            require(out[i].has_value(), ErrorCode::mapping, "image of a label is not in the index");
        }
        return out;
    };
    for (std::size_t t = 0; t < transforms.size(); ++t) {
        const auto rmap = map_index(m.row_index, transforms[t], true);
        const auto cmap = map_index(m.col_index, transforms[t], false);
        ++rep.transforms_checked;
        for (std::size_t r = 0; r < m.rows(); ++r) {
            if (!rmap[r]) continue;
            for (std::size_t c = 0; c < m.cols(); ++c) {
                if (!cmap[c]) continue;
                ++rep.pairs_checked;
                if (m.entries(r, c) != m.entries(*rmap[r], *cmap[c])) {
                    rep.invariant = false;
                    rep.counterexample = InvarianceCounterexample{t, m.row_index[r], m.col_index[c]};
                    return rep;
                }
            }
        }
    }
    return rep;
}

/// g applied to each consecutive pair of coordinates (a tuple of vectors in Z_q^2).
inline auto linear_action(std::int64_t q) {
    return [q](const Mat2& g, const Point& p) -> std::optional<Point> {
        Point out(p.size());
        for (std::size_t i = 0; i + 1 < p.size(); i += 2) {
            const auto v = apply_linear(g, p[i], p[i + 1], q);
            out[i] = v[0];
            out[i + 1] = v[1];
        }
        return out;
    };
}

/// g acting by Moebius transformation on every coordinate.
inline auto mobius_action(std::int64_t q) {
    return [q](const Mat2& g, const Point& p) -> std::optional<Point> {
        Point out(p.size());
        for (std::size_t i = 0; i < p.size(); ++i) {
            auto v = apply_mobius(g, p[i], q);
            if (!v) return std::nullopt;
            out[i] = *v;
        }
        return out;
    };
}

struct SignedPermutation {
    std::vector<std::size_t> perm;  ///< (g a)_i = sign_i * a_{perm_i}
    std::vector<int> signs;
};

inline std::vector<SignedPermutation> all_signed_permutations(std::size_t n) {
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::vector<SignedPermutation> out;
    do {
        for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
            SignedPermutation s{perm, std::vector<int>(n, 1)};
            for (std::size_t i = 0; i < n; ++i)
                if (mask & (std::size_t{1} << i)) s.signs[i] = -1;
            out.push_back(std::move(s));
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
}

inline auto signed_permutation_action(std::int64_t q) {
    return [q](const SignedPermutation& g, const Point& p) -> std::optional<Point> {
        Point out(p.size());
        for (std::size_t i = 0; i < p.size(); ++i) out[i] = mod_reduce(g.signs[i] * p[g.perm[i]], q);
        return out;
    };
}

// ---------------------------------------------------------------------------
// Plain-text dump
// ---------------------------------------------------------------------------

/// Header line "incidence-matrix kind=<k> q=<q> lambda=<l> rows=<r> cols=<c>"
/// followed by one line of 0/1 characters per row.
inline void write_matrix_dump(std::ostream& os, const IncidenceMatrix& m) {
    os << "incidence-matrix kind=" << to_string(m.kind) << " q=" << m.modulus.value() << " lambda=" << m.lambda
       << " rows=" << m.rows() << " cols=" << m.cols() << '\n';
    std::string line(m.cols(), '0');
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) line[c] = m.entries(r, c) ? '1' : '0';
        os << line << '\n';
    }
}

struct MatrixDump {
    IncidenceKind kind = IncidenceKind::dot;
    std::int64_t q = 0;
    Residue lambda = 0;
    DenseMatrix<std::uint8_t> entries;
};

inline MatrixDump read_matrix_dump(std::istream& is) {
    std::string header;
    require(static_cast<bool>(std::getline(is, header)), ErrorCode::io, "empty matrix dump");
    std::istringstream hs(header);
    std::string tag;
    hs >> tag;
    require(tag == "incidence-matrix", ErrorCode::io, "bad matrix dump header");
    MatrixDump out;
    std::size_t rows = 0, cols = 0;
    std::string field;
    while (hs >> field) {
        const auto eq = field.find('=');
        require(eq != std::string::npos, ErrorCode::io, "bad header field '" + field + "'");
        const auto key = field.substr(0, eq), val = field.substr(eq + 1);
        if (key == "kind") out.kind = parse_incidence_kind(val);
        else if (key == "q") out.q = std::stoll(val);
        else if (key == "lambda") out.lambda = std::stoll(val);
        else if (key == "rows") rows = std::stoull(val);
        else if (key == "cols") cols = std::stoull(val);
    }
    out.entries = DenseMatrix<std::uint8_t>(rows, cols);
    std::string line;
    for (std::size_t r = 0; r < rows; ++r) {
        require(static_cast<bool>(std::getline(is, line)) && line.size() == cols, ErrorCode::io, "truncated matrix dump");
        for (std::size_t c = 0; c < cols; ++c) {
            require(line[c] == '0' || line[c] == '1', ErrorCode::io, "matrix dump rows hold only 0/1");
            out.entries(r, c) = line[c] == '1';
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Cross-ratio pair caps
// ---------------------------------------------------------------------------

struct PairCaps {
    /// max over pairs a != a' (and not swapped when lambda = -1) of #{b : M(a,b) M(a',b) = 1}
    std::uint64_t max_nondegenerate = 0;
    /// the same maximum over a = a' and, for lambda = -1, a' = (d, c)
    std::uint64_t max_degenerate = 0;
    std::uint64_t pairs_checked = 0;
};

/// Exhaustive common-neighbour counts over the full cross-ratio matrix on Z_q^2.
inline PairCaps crossratio_pair_caps(const Modulus& mod, Residue lambda, const BuildOptions& opts = {}) {
    const auto m = build_full_matrix(IncidenceKind::crossratio, mod, lambda, {2, 0}, opts);
    const auto g = gram_counts(m, opts.threads);
    const bool minus_one = mod.reduce(lambda) == mod.value() - 1;
    PairCaps caps;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = i; j < m.rows(); ++j) {
            const auto& a = m.row_index[i];
            const auto& b = m.row_index[j];
            const bool degenerate = i == j || (minus_one && a[0] == b[1] && a[1] == b[0]);
            auto& slot = degenerate ? caps.max_degenerate : caps.max_nondegenerate;
            slot = std::max<std::uint64_t>(slot, g(i, j));
            ++caps.pairs_checked;
        }
    return caps;
}

}  // namespace zqlab

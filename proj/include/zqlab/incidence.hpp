#pragma once

/**
 * @file incidence.hpp
 * @brief Dot-product, determinant and cross-ratio incidence counters with
 * exact main terms and the right-hand sides of the corresponding
 * representation-theoretic error bounds.
 *
 * Counters are plain O(|A||B|) double loops split into contiguous chunks of
 * A; the chunk results are integers, so the total does not depend on the
 * worker count.
 */

#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "zqlab/error.hpp"
#include "zqlab/modring.hpp"
#include "zqlab/parallel.hpp"
#include "zqlab/rational.hpp"
#include "zqlab/setops.hpp"

namespace zqlab {

enum class IncidenceKind { dot, det, crossratio };

inline const char* to_string(IncidenceKind k) {
    switch (k) {
        case IncidenceKind::dot: return "dot";
        case IncidenceKind::det: return "det";
        case IncidenceKind::crossratio: return "crossratio";
    }
    return "?";
}

inline IncidenceKind parse_incidence_kind(const std::string& s) {
    if (s == "dot") return IncidenceKind::dot;
    if (s == "det") return IncidenceKind::det;
    if (s == "crossratio" || s == "cross-ratio") return IncidenceKind::crossratio;
    fail(ErrorCode::invalid_argument, "unknown incidence kind '" + s + "'");
}

// ---------------------------------------------------------------------------
// Index families
// ---------------------------------------------------------------------------

/// Every point of Z_q^dim in lexicographic order.
inline std::vector<Point> all_tuples(const Modulus& mod, std::size_t dim, std::uint64_t cap = 50'000'000) {
    const auto q = static_cast<std::uint64_t>(mod.value());
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < dim; ++i) {
        total = checked_mul(total, q);
        require(total <= cap, ErrorCode::too_large, "tuple family exceeds cap");
    }
    std::vector<Point> out;
    out.reserve(total);
    Point cur(dim, 0);
    for (std::uint64_t i = 0; i < total; ++i) {
        out.push_back(cur);
        for (std::size_t j = dim; j-- > 0;) {
            if (++cur[j] < mod.value()) break;
            cur[j] = 0;
        }
    }
    return out;
}

inline bool is_coprime_tuple(const Point& a, const Modulus& mod) {
    std::int64_t g = mod.value();
    for (auto c : a) g = std::gcd(g, c);
    return g == 1;
}

/// n-tuples with gcd(a_1, ..., a_n, q) = 1; there are J_n(q) of them.
inline std::vector<Point> coprime_tuples(const Modulus& mod, std::size_t n) {
    std::vector<Point> out;
    for (auto& p : all_tuples(mod, n))
        if (is_coprime_tuple(p, mod)) out.push_back(std::move(p));
    return out;
}

/// Row-reduces a row-major rows x cols matrix over F_p in place; returns the rank.
inline std::size_t rank_mod_prime(std::vector<Residue>& mat, std::size_t rows, std::size_t cols, std::int64_t p) {
    std::size_t rank = 0;
    for (std::size_t col = 0; col < cols && rank < rows; ++col) {
        std::size_t pivot = rank;
        while (pivot < rows && mat[pivot * cols + col] == 0) ++pivot;
        if (pivot == rows) continue;
        for (std::size_t j = 0; j < cols; ++j) std::swap(mat[pivot * cols + j], mat[rank * cols + j]);
        const Residue inv = *inv_mod(mat[rank * cols + col], p);
        for (std::size_t r = rank + 1; r < rows; ++r) {
            const Residue f = mul_mod(mat[r * cols + col], inv, p);
            if (f == 0) continue;
            for (std::size_t j = col; j < cols; ++j)
                mat[r * cols + j] = mod_reduce(mat[r * cols + j] - mul_mod(f, mat[rank * cols + j], p), p);
        }
        ++rank;
    }
    return rank;
}

/// Determinant over F_p of a row-major d x d matrix.
inline Residue det_mod_prime(std::vector<Residue> mat, std::size_t d, std::int64_t p) {
    Residue det = 1;
    for (std::size_t col = 0; col < d; ++col) {
        std::size_t pivot = col;
        while (pivot < d && mat[pivot * d + col] == 0) ++pivot;
        if (pivot == d) return 0;
        if (pivot != col) {
            for (std::size_t j = 0; j < d; ++j) std::swap(mat[pivot * d + j], mat[col * d + j]);
            det = mod_reduce(-det, p);
        }
        const Residue piv = mat[col * d + col];
        det = mul_mod(det, piv, p);
        const Residue inv = *inv_mod(piv, p);
        for (std::size_t r = col + 1; r < d; ++r) {
            const Residue f = mul_mod(mat[r * d + col], inv, p);
            if (f == 0) continue;
            for (std::size_t j = col; j < d; ++j)
                mat[r * d + j] = mod_reduce(mat[r * d + j] - mul_mod(f, mat[col * d + j], p), p);
        }
    }
    return det;
}

/// Whether the n vectors of length d packed in `tuple` are linearly independent over F_p.
inline bool is_independent_tuple(const Point& tuple, std::size_t n, std::size_t d, std::int64_t p) {
    std::vector<Residue> m(tuple.begin(), tuple.end());
    return rank_mod_prime(m, n, d, p) == n;
}

/// Linearly independent n-tuples of vectors in F_p^d, each packed as n*d coordinates.
inline std::vector<Point> independent_tuples(const Modulus& mod, std::size_t n, std::size_t d) {
    std::vector<Point> out;
    for (auto& p : all_tuples(mod, n * d))
        if (is_independent_tuple(p, n, d, mod.value())) out.push_back(std::move(p));
    return out;
}

// ---------------------------------------------------------------------------
// Slack bookkeeping
// ---------------------------------------------------------------------------

/// bound_rhs / error_lhs, +inf when the error vanishes.
inline double compute_slack(const Rational& error_lhs, double bound_rhs) {
    if (error_lhs == 0) return std::numeric_limits<double>::infinity();
    return bound_rhs / to_double(error_lhs);
}

struct BoundValue {
    double value = 0.0;
    /// False when the bound's hypothesis fails for these parameters; the value is still computed.
    bool hypothesis_ok = true;
    std::string warning;
};

// ---------------------------------------------------------------------------
// Dot-product incidences
// ---------------------------------------------------------------------------

inline Residue dot_mod(const Point& a, const Point& b, std::int64_t q) {
    __int128 acc = 0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += static_cast<__int128>(a[i]) * b[i];
    return static_cast<Residue>(acc % q);
}

/// #{(a, b) in A x B : a . b = lambda (mod q)}, lambda a unit.
inline std::uint64_t count_dot(const PointSet& a, const PointSet& b, Residue lambda, unsigned threads = 1) {
    detail::require_compatible(a, b);
    const auto& mod = a.modulus();
    lambda = mod.reduce(lambda);
    require(mod.is_unit(lambda), ErrorCode::invalid_lambda,
            "lambda " + std::to_string(lambda) + " is not a unit mod " + std::to_string(mod.value()));
    const auto q = mod.value();
    const auto& ae = a.elements();
    const auto& be = b.elements();
    const auto parts = chunked_map<std::uint64_t>(ae.size(), threads, [&](std::size_t lo, std::size_t hi) {
        std::uint64_t c = 0;
        for (std::size_t i = lo; i < hi; ++i)
            for (const auto& y : be) c += dot_mod(ae[i], y, q) == lambda;
        return c;
    });
    return std::accumulate(parts.begin(), parts.end(), std::uint64_t{0});
}

/// |A||B| q^{n-1} / J_n(q), exactly.
inline Rational dot_main_term(std::uint64_t size_a, std::uint64_t size_b, const Modulus& mod, unsigned n) {
    const BigInt numerator = BigInt(size_a) * BigInt(size_b) * boost::multiprecision::pow(BigInt(mod.value()), n - 1);
    return Rational(numerator, BigInt(jordan_totient(n, mod)));
}

/// Theta(n) = sum over 0 <= r_j <= omega_j of prod_j p_j^{-r_j (n - 2)}, which
/// factors as a product of finite geometric sums.
inline Rational theta(const Modulus& mod, unsigned n) {
    require(n >= 2, ErrorCode::invalid_argument, "theta needs n >= 2");
    Rational out = 1;
    for (const auto& [p, e] : mod.factors()) {
        const Rational ratio(BigInt(1), boost::multiprecision::pow(BigInt(p), n - 2));
        Rational geometric = 0;
        Rational term = 1;
        for (unsigned r = 0; r <= e; ++r) {
            geometric += term;
            term *= ratio;
        }
        out *= geometric;
    }
    return out;
}

inline unsigned n_star(unsigned n) { return n <= 3 ? 1 : n - 3; }

/// 2 q^{n-1} sqrt(|A||B|) (Theta(n) m^{-n_*})^{1/4}. The bound is proven for
/// least prime divisor m >= 5; smaller m only sets the warning.
inline BoundValue dot_bound_rhs(const Modulus& mod, unsigned n, std::uint64_t size_a, std::uint64_t size_b) {
    BoundValue out;
    const auto m = static_cast<double>(mod.least_prime());
    const double inner = to_double(theta(mod, n)) * std::pow(m, -static_cast<double>(n_star(n)));
    out.value = 2.0 * std::pow(static_cast<double>(mod.value()), static_cast<double>(n - 1)) *
                std::sqrt(static_cast<double>(size_a) * static_cast<double>(size_b)) * std::pow(inner, 0.25);
    if (mod.least_prime() < 5) {
        out.hypothesis_ok = false;
        out.warning = "least prime divisor " + std::to_string(mod.least_prime()) + " < 5";
    }
    return out;
}

/// sqrt(q |A||B|), the finite-geometry bound for a_1 b_1 - a_2 b_2 = 1 over a prime field.
inline double vinh_rhs(const Modulus& mod, std::uint64_t size_a, std::uint64_t size_b) {
    return std::sqrt(static_cast<double>(mod.value()) * static_cast<double>(size_a) * static_cast<double>(size_b));
}

// ---------------------------------------------------------------------------
// Determinant incidences
// ---------------------------------------------------------------------------

struct DetShape {
    std::size_t n = 1;
    std::size_t m = 1;
    std::size_t d() const noexcept { return n + m; }
};

/// det(a_1, ..., a_n, b_1, ..., b_m) mod p with a, b packed as n*d and m*d coordinates.
inline Residue det_value(const Point& a, const Point& b, const DetShape& shape, std::int64_t p) {
    const std::size_t d = shape.d();
    if (d == 2) return mod_reduce(a[0] * b[1] - a[1] * b[0], p);
    std::vector<Residue> mat;
    mat.reserve(d * d);
    mat.insert(mat.end(), a.begin(), a.end());
    mat.insert(mat.end(), b.begin(), b.end());
    return det_mod_prime(std::move(mat), d, p);
}

namespace detail {

inline void require_det_args(const PointSet& a, const PointSet& b, Residue lambda, const DetShape& shape) {
    const auto& mod = a.modulus();
    require(mod.is_prime() && mod.value() % 2 == 1, ErrorCode::invalid_modulus,
            "determinant incidences need an odd prime modulus, got " + std::to_string(mod.value()));
    require(b.modulus() == mod, ErrorCode::invalid_argument, "modulus mismatch");
    require(shape.n >= 1 && shape.m >= 1, ErrorCode::invalid_argument, "n and m must be >= 1");
    require(a.dimension() == shape.n * shape.d(), ErrorCode::invalid_argument, "A must hold n-tuples of vectors in Z_q^d");
    require(b.dimension() == shape.m * shape.d(), ErrorCode::invalid_argument, "B must hold m-tuples of vectors in Z_q^d");
    require(mod.reduce(lambda) != 0, ErrorCode::invalid_lambda, "lambda must be nonzero");
}

}  // namespace detail

/// #{(a, b) in A x B : det(a | b) = lambda (mod q)} for an odd prime q.
inline std::uint64_t count_det(const PointSet& a, const PointSet& b, Residue lambda, const DetShape& shape,
                               unsigned threads = 1) {
    detail::require_det_args(a, b, lambda, shape);
    const auto q = a.modulus().value();
    lambda = a.modulus().reduce(lambda);
    const auto& ae = a.elements();
    const auto& be = b.elements();
    const auto parts = chunked_map<std::uint64_t>(ae.size(), threads, [&](std::size_t lo, std::size_t hi) {
        std::uint64_t c = 0;
        for (std::size_t i = lo; i < hi; ++i)
            for (const auto& y : be) c += det_value(ae[i], y, shape, q) == lambda;
        return c;
    });
    return std::accumulate(parts.begin(), parts.end(), std::uint64_t{0});
}

struct DetMainTerms {
    Rational over_q_minus_1;  ///< |A||B| / (q - 1)
    Rational over_q;          ///< |A||B| / q
};

inline DetMainTerms det_main_terms(std::uint64_t size_a, std::uint64_t size_b, const Modulus& mod) {
    const BigInt ab = BigInt(size_a) * BigInt(size_b);
    return {Rational(ab, BigInt(mod.value() - 1)), Rational(ab, BigInt(mod.value()))};
}

inline double det_exponent(std::size_t d) {
    const auto dd = static_cast<double>(d);
    return dd * dd / 2.0 - dd / 4.0 - 0.75;
}

/// q^{d^2/2 - d/4 - 3/4} sqrt(|A||B|) + |A||B| / q^2.
inline double det_bound_rhs(const Modulus& mod, std::size_t d, std::uint64_t size_a, std::uint64_t size_b) {
    const auto q = static_cast<double>(mod.value());
    const double ab = static_cast<double>(size_a) * static_cast<double>(size_b);
    return std::pow(q, det_exponent(d)) * std::sqrt(ab) + ab / (q * q);
}

/// q^{dn} prod_{j=1}^{n} (1 - q^{-j}), the closed form used for the number of
/// independent n-tuples (compare independent_tuple_count).
inline Rational det_family_size_formula(const Modulus& mod, std::size_t d, std::size_t n) {
    const BigInt q(mod.value());
    Rational out(boost::multiprecision::pow(q, static_cast<unsigned>(d * n)));
    for (std::size_t j = 1; j <= n; ++j) out *= Rational(1) - Rational(BigInt(1), boost::multiprecision::pow(q, static_cast<unsigned>(j)));
    return out;
}

/// prod_{j=0}^{n-1} (q^d - q^j): the true number of independent n-tuples in F_q^d.
inline BigInt independent_tuple_count(const Modulus& mod, std::size_t d, std::size_t n) {
    const BigInt q(mod.value());
    BigInt out = 1;
    const BigInt qd = boost::multiprecision::pow(q, static_cast<unsigned>(d));
    for (std::size_t j = 0; j < n; ++j) out *= qd - boost::multiprecision::pow(q, static_cast<unsigned>(j));
    return out;
}

/// sqrt(M N) / (q - 1) with N, M from det_family_size_formula.
inline double det_lambda1_formula(const Modulus& mod, const DetShape& shape) {
    const double big_n = to_double(det_family_size_formula(mod, shape.d(), shape.n));
    const double big_m = to_double(det_family_size_formula(mod, shape.d(), shape.m));
    return std::sqrt(big_m * big_n) / static_cast<double>(mod.value() - 1);
}

// ---------------------------------------------------------------------------
// Cross-ratio incidences
// ---------------------------------------------------------------------------

/// [a, b, c, d] = (a - c)(b - d) / ((a - d)(b - c)) over F_q; nullopt when the denominator vanishes.
inline std::optional<Residue> cross_ratio(Residue a, Residue b, Residue c, Residue d, std::int64_t q) {
    const Residue den = mul_mod(mod_reduce(a - d, q), mod_reduce(b - c, q), q);
    if (den == 0) return std::nullopt;
    const Residue num = mul_mod(mod_reduce(a - c, q), mod_reduce(b - d, q), q);
    return mul_mod(num, *inv_mod(den, q), q);
}

namespace detail {

inline void require_crossratio_args(const PointSet& a, const PointSet& b, Residue lambda) {
    require_compatible(a, b);
    const auto& mod = a.modulus();
    require(mod.is_prime(), ErrorCode::invalid_modulus, "cross-ratio incidences need a prime modulus");
    require(a.dimension() == 2, ErrorCode::invalid_argument, "cross-ratio sets live in Z_q^2");
    const auto l = mod.reduce(lambda);
    require(l != 0 && l != 1, ErrorCode::invalid_lambda, "lambda must avoid {0, 1}");
}

}  // namespace detail

/// #{(a, b) in A x B : [a_1, a_2, b_1, b_2] = lambda}; undefined cross-ratios never count.
inline std::uint64_t count_crossratio(const PointSet& a, const PointSet& b, Residue lambda, unsigned threads = 1) {
    detail::require_crossratio_args(a, b, lambda);
    const auto q = a.modulus().value();
    lambda = a.modulus().reduce(lambda);
    const auto& ae = a.elements();
    const auto& be = b.elements();
    const auto parts = chunked_map<std::uint64_t>(ae.size(), threads, [&](std::size_t lo, std::size_t hi) {
        std::uint64_t c = 0;
        for (std::size_t i = lo; i < hi; ++i)
            for (const auto& y : be) {
                const auto v = cross_ratio(ae[i][0], ae[i][1], y[0], y[1], q);
                c += v && *v == lambda;
            }
        return c;
    });
    return std::accumulate(parts.begin(), parts.end(), std::uint64_t{0});
}

inline Rational crossratio_main_term(std::uint64_t size_a, std::uint64_t size_b, const Modulus& mod) {
    return Rational(BigInt(size_a) * BigInt(size_b), BigInt(mod.value()));
}

/// 4 q^{3/4} sqrt(|A||B|).
inline double crossratio_bound_rhs(const Modulus& mod, std::uint64_t size_a, std::uint64_t size_b) {
    return 4.0 * std::pow(static_cast<double>(mod.value()), 0.75) *
           std::sqrt(static_cast<double>(size_a) * static_cast<double>(size_b));
}

// ---------------------------------------------------------------------------
// Instances and slack reports
// ---------------------------------------------------------------------------

/// A validated incidence problem. Use the named constructors.
struct IncidenceInstance {
    IncidenceKind kind;
    Residue lambda;
    DetShape shape;  ///< det only; dot keeps n in shape.n
    PointSet a;
    PointSet b;

    const Modulus& modulus() const noexcept { return a.modulus(); }

    /// Tuples not coprime to q are rejected.
    static IncidenceInstance dot(PointSet a, PointSet b, Residue lambda) {
        detail::require_compatible(a, b);
        const auto& mod = a.modulus();
        require(mod.is_unit(lambda), ErrorCode::invalid_lambda, "lambda must be a unit");
        for (const auto* s : {&a, &b})
            for (const auto& p : s->elements())
                require(is_coprime_tuple(p, mod), ErrorCode::invalid_argument, "dot instance needs tuples coprime to q");
        const std::size_t n = a.dimension();
        require(n >= 2, ErrorCode::invalid_argument, "dot instance needs n >= 2");
        return {IncidenceKind::dot, mod.reduce(lambda), {n, 0}, std::move(a), std::move(b)};
    }

    static IncidenceInstance det(PointSet a, PointSet b, Residue lambda, DetShape shape) {
        detail::require_det_args(a, b, lambda, shape);
        const auto l = a.modulus().reduce(lambda);
        return {IncidenceKind::det, l, shape, std::move(a), std::move(b)};
    }

    static IncidenceInstance crossratio(PointSet a, PointSet b, Residue lambda) {
        detail::require_crossratio_args(a, b, lambda);
        const auto l = a.modulus().reduce(lambda);
        return {IncidenceKind::crossratio, l, {2, 0}, std::move(a), std::move(b)};
    }
};

struct SlackReport {
    IncidenceKind kind = IncidenceKind::dot;
    std::uint64_t count = 0;
    Rational main_term;
    /// Left-hand side of the checked inequality (for det it carries the 2^{-3} factor).
    Rational error_lhs;
    double bound_rhs = 0.0;
    /// bound_rhs / error_lhs; +inf when error_lhs == 0. slack >= 1 certifies the inequality.
    double slack = 0.0;
    bool hypothesis_ok = true;
    std::string warning;
    /// det: |A||B|/(q-1), the other normalization of the main term.
    std::optional<Rational> alt_main_term;
    /// dot, n = 2: sqrt(q|A||B|) for comparison only.
    std::optional<double> comparison_rhs;

    bool holds() const noexcept { return slack >= 1.0; }
};

inline SlackReport check_inequality(const IncidenceInstance& inst, unsigned threads = 1) {
    SlackReport r;
    r.kind = inst.kind;
    const auto& mod = inst.modulus();
    const auto sa = static_cast<std::uint64_t>(inst.a.size());
    const auto sb = static_cast<std::uint64_t>(inst.b.size());
    switch (inst.kind) {
        case IncidenceKind::dot: {
            const auto n = static_cast<unsigned>(inst.shape.n);
            r.count = count_dot(inst.a, inst.b, inst.lambda, threads);
            r.main_term = dot_main_term(sa, sb, mod, n);
            r.error_lhs = abs(Rational(BigInt(r.count)) - r.main_term);
            const auto bound = dot_bound_rhs(mod, n, sa, sb);
            r.bound_rhs = bound.value;
            r.hypothesis_ok = bound.hypothesis_ok;
            r.warning = bound.warning;
            if (n == 2) r.comparison_rhs = vinh_rhs(mod, sa, sb);
            break;
        }
        case IncidenceKind::det: {
            r.count = count_det(inst.a, inst.b, inst.lambda, inst.shape, threads);
            const auto mains = det_main_terms(sa, sb, mod);
            r.main_term = mains.over_q;
            r.alt_main_term = mains.over_q_minus_1;
            r.error_lhs = abs(Rational(BigInt(r.count)) - r.main_term) / 8;
            r.bound_rhs = det_bound_rhs(mod, inst.shape.d(), sa, sb);
            break;
        }
        case IncidenceKind::crossratio: {
            r.count = count_crossratio(inst.a, inst.b, inst.lambda, threads);
            r.main_term = crossratio_main_term(sa, sb, mod);
            r.error_lhs = abs(Rational(BigInt(r.count)) - r.main_term);
            r.bound_rhs = crossratio_bound_rhs(mod, sa, sb);
            break;
        }
    }
    r.slack = compute_slack(r.error_lhs, r.bound_rhs);
    return r;
}

}  // namespace zqlab

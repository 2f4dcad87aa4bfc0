#pragma once

/**
 * @file charsums.hpp
 * @brief Multiplicative character sums over F_p: twisted Kloosterman sums and
 * their bilinear forms, sums over the hyperbola (a + x)(b + y) = 1, sums
 * twisted along a family G of 2x2 matrices, the projective-lift identity
 * relating the two, T_{2k} energies of matrix families, and the evaluator
 * of the corresponding two-term bound.
 *
 * All sums run in a fixed order, so results are bit-reproducible.
 */

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "zqlab/error.hpp"
#include "zqlab/gl2.hpp"
#include "zqlab/modring.hpp"
#include "zqlab/rational.hpp"
#include "zqlab/setops.hpp"

namespace zqlab {

/// Duplicate-free set of invertible 2x2 matrices mod a prime.
class MatrixFamily {
public:
    MatrixFamily(std::int64_t p, std::vector<Mat2> elements) : p_(p) {
        require(is_prime(p), ErrorCode::invalid_argument, "matrix family needs a prime modulus");
        for (auto& g : elements) {
            g = reduce(g, p);
            require(determinant(g, p) != 0, ErrorCode::invalid_argument, "matrix " + to_string(g) + " is singular");
        }
        std::sort(elements.begin(), elements.end());
        elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
        elements_ = std::move(elements);
    }

    std::int64_t modulus() const noexcept { return p_; }
    const std::vector<Mat2>& elements() const noexcept { return elements_; }
    std::size_t size() const noexcept { return elements_.size(); }

private:
    std::int64_t p_;
    std::vector<Mat2> elements_;
};

namespace detail {

inline std::vector<Residue> inverse_table(std::int64_t p) {
    std::vector<Residue> inv(static_cast<std::size_t>(p), 0);
    for (Residue x = 1; x < p; ++x) inv[static_cast<std::size_t>(x)] = *inv_mod(x, p);
    return inv;
}

inline void require_field_set(const PointSet& s, std::int64_t p, const char* name) {
    require(s.modulus().value() == p && s.dimension() == 1, ErrorCode::invalid_argument,
            std::string(name) + " must be a one-dimensional subset of F_p");
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Kloosterman sums and bilinear forms
// ---------------------------------------------------------------------------

/// K_chi(n, m) = sum_{x != 0} chi(x) e((n x + m x^{-1}) / p).
inline Complex kloosterman(const Character& chi, Residue n, Residue m) {
    const auto p = chi.modulus();
    const auto w = roots_of_unity(p);
    n = mod_reduce(n, p);
    m = mod_reduce(m, p);
    Complex acc{0.0, 0.0};
    for (Residue x = 1; x < p; ++x) {
        const Residue phase = mod_reduce(mul_mod(n, x, p) + mul_mod(m, *inv_mod(x, p), p), p);
        acc += chi(x) * w[static_cast<std::size_t>(phase)];
    }
    return acc;
}

/// The full p x p table K_chi(n, m), row n, column m.
inline std::vector<ComplexVector> kloosterman_table(const Character& chi) {
    const auto p = chi.modulus();
    const auto w = roots_of_unity(p);
    const auto inv = detail::inverse_table(p);
    std::vector<ComplexVector> table(static_cast<std::size_t>(p), ComplexVector(static_cast<std::size_t>(p)));
    for (Residue n = 0; n < p; ++n)
        for (Residue m = 0; m < p; ++m) {
            Complex acc{0.0, 0.0};
            for (Residue x = 1; x < p; ++x)
                acc += chi(x) * w[static_cast<std::size_t>((n * x + m * inv[static_cast<std::size_t>(x)]) % p)];
            table[static_cast<std::size_t>(n)][static_cast<std::size_t>(m)] = acc;
        }
    return table;
}

struct BilinearResult {
    Complex direct;       ///< sum_{n,m} alpha(n) beta(m) sum_x chi(x) e(n x + m / x)
    Complex via_table;    ///< sum_{n,m} alpha(n) beta(m) K[n][m] over a precomputed table
    Complex via_fourier;  ///< sum_x chi(x) alphahat(x) betahat(1/x)

    double rel_diff() const {
        const double scale = std::max({std::abs(direct), std::abs(via_table), 1e-300});
        return std::abs(direct - via_table) / scale;
    }
};

/// S_chi(alpha, beta) = sum_{n,m} alpha(n) beta(m) K_chi(n, m), three ways.
inline BilinearResult bilinear_form(const Character& chi, std::span<const Complex> alpha, std::span<const Complex> beta) {
    const auto p = chi.modulus();
    require(alpha.size() == static_cast<std::size_t>(p) && beta.size() == static_cast<std::size_t>(p),
            ErrorCode::invalid_argument, "alpha and beta must be functions on F_p");
    require_finite(alpha);
    require_finite(beta);
    const auto w = roots_of_unity(p);
    const auto inv = detail::inverse_table(p);
    BilinearResult out;

    for (Residue n = 0; n < p; ++n) {
        if (alpha[static_cast<std::size_t>(n)] == Complex{}) continue;
        for (Residue m = 0; m < p; ++m) {
            const Complex coeff = alpha[static_cast<std::size_t>(n)] * beta[static_cast<std::size_t>(m)];
            if (coeff == Complex{}) continue;
            Complex inner{0.0, 0.0};
            for (Residue x = 1; x < p; ++x)
                inner += chi(x) * w[static_cast<std::size_t>((n * x + m * inv[static_cast<std::size_t>(x)]) % p)];
            out.direct += coeff * inner;
        }
    }

    const auto table = kloosterman_table(chi);
    for (Residue n = 0; n < p; ++n)
        for (Residue m = 0; m < p; ++m)
            out.via_table += alpha[static_cast<std::size_t>(n)] * beta[static_cast<std::size_t>(m)] *
                             table[static_cast<std::size_t>(n)][static_cast<std::size_t>(m)];

    const auto ahat = dft(alpha);
    const auto bhat = dft(beta);
    for (Residue x = 1; x < p; ++x)
        out.via_fourier += chi(x) * ahat[static_cast<std::size_t>(x)] * bhat[static_cast<std::size_t>(inv[static_cast<std::size_t>(x)])];
    return out;
}

/// Report-only comparison terms for bilinear Kloosterman bounds with alpha
/// supported on an interval of length N and beta on one of length M.
struct BilinearComparison {
    double alpha_l1 = 0, alpha_l2 = 0, beta_l2 = 0;
    double alpha_hat_l43 = 0;  ///< (sum_xi |alphahat(xi)|^{4/3})^{3/4}, unnormalized
    double trivial = 0;        ///< ||alpha||_2 ||beta||_2 p
    double nm1_rhs = 0;        ///< ||beta||_2 (||alphahat||_{4/3} N^{7/48} M^{7/48} p^{23/24} + (||alpha||_2 ||alpha||_1)^{1/2} p^{3/4})
    double nm2_rhs = 0;        ///< ||beta||_2 (||alphahat||^{6/7} ||alpha||_2^{1/7} (NM)^{1/7} p^{13/14} + (..)^{1/2} p^{3/4} + p^{13/12} ||alphahat||)
    bool nm2_condition = false;
};

inline BilinearComparison bilinear_comparison(std::span<const Complex> alpha, std::span<const Complex> beta, double big_n,
                                              double big_m) {
    const auto p = static_cast<double>(alpha.size());
    BilinearComparison c;
    for (const auto& z : alpha) {
        c.alpha_l1 += std::abs(z);
        c.alpha_l2 += std::norm(z);
    }
    for (const auto& z : beta) c.beta_l2 += std::norm(z);
    c.alpha_l2 = std::sqrt(c.alpha_l2);
    c.beta_l2 = std::sqrt(c.beta_l2);
    double s = 0;
    for (const auto& z : dft(alpha)) s += std::pow(std::abs(z), 4.0 / 3.0);
    c.alpha_hat_l43 = std::pow(s, 0.75);
    c.trivial = c.alpha_l2 * c.beta_l2 * p;
    const double tail = std::sqrt(c.alpha_l2 * c.alpha_l1) * std::pow(p, 0.75);
    c.nm1_rhs = c.beta_l2 * (c.alpha_hat_l43 * std::pow(big_n * big_m, 7.0 / 48.0) * std::pow(p, 23.0 / 24.0) + tail);
    c.nm2_rhs = c.beta_l2 * (std::pow(c.alpha_hat_l43, 6.0 / 7.0) * std::pow(c.alpha_l2, 1.0 / 7.0) *
                                 std::pow(big_n * big_m, 1.0 / 7.0) * std::pow(p, 13.0 / 14.0) +
                             tail + std::pow(p, 13.0 / 12.0) * c.alpha_hat_l43);
    c.nm2_condition = big_m * big_m * big_n * big_n * std::pow(c.alpha_hat_l43, 12) < p * std::pow(c.alpha_l2, 12);
    return c;
}

// ---------------------------------------------------------------------------
// Hyperbola sums and G-twisted sums
// ---------------------------------------------------------------------------

struct HyperbolaResult {
    Complex sum;
    /// Number of (a, b, x, y) with (a + x)(b + y) = 1.
    std::uint64_t solutions = 0;
    /// sqrt(|A||B|) |X||Y|.
    double trivial_bound = 0.0;

    double cancellation_ratio() const { return trivial_bound > 0 ? std::abs(sum) / trivial_bound : 0.0; }
};

/// sum over (a + x)(b + y) = 1 of c_A(a) c_B(b) chi(a + x). Weights come from
/// A and B (1 when unweighted).
inline HyperbolaResult hyperbola_sum(const Character& chi, const PointSet& a, const PointSet& b, const PointSet& x,
                                     const PointSet& y) {
    const auto p = chi.modulus();
    detail::require_field_set(a, p, "A");
    detail::require_field_set(b, p, "B");
    detail::require_field_set(x, p, "X");
    detail::require_field_set(y, p, "Y");
    const auto inv = detail::inverse_table(p);
    const auto y_in = y.indicator();
    HyperbolaResult out;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const Residue av = a.elements()[i][0];
        for (const auto& xp : x.elements()) {
            const Residue u = mod_reduce(av + xp[0], p);
            if (u == 0) continue;
            const Residue v = inv[static_cast<std::size_t>(u)];
            const Complex head = a.weight(i) * chi(u);
            for (std::size_t j = 0; j < b.size(); ++j) {
                const Residue yv = mod_reduce(v - b.elements()[j][0], p);
                if (!y_in[static_cast<std::size_t>(yv)]) continue;
                out.sum += head * b.weight(j);
                ++out.solutions;
            }
        }
    }
    out.trivial_bound = std::sqrt(static_cast<double>(a.size()) * static_cast<double>(b.size())) *
                        static_cast<double>(x.size()) * static_cast<double>(y.size());
    return out;
}

/// g_{a,b} = (-b, 1 - ab | 1, a), so that g_{a,b} x = -b + 1/(a + x).
inline Mat2 hyperbola_matrix(Residue a, Residue b, std::int64_t p) {
    return reduce({-b, 1 - mul_mod(a, b, p), 1, a}, p);
}

inline MatrixFamily hyperbola_family(const PointSet& a, const PointSet& b) {
    const auto p = a.modulus().value();
    std::vector<Mat2> g;
    for (const auto& av : a.elements())
        for (const auto& bv : b.elements()) g.push_back(hyperbola_matrix(av[0], bv[0], p));
    return MatrixFamily(p, std::move(g));
}

/// sum_{a, b} c_A(a) c_B(b) sum_{g in G : g a = b} chi(gamma a + delta), with g
/// acting by Moebius maps; points sent to infinity never match.
inline Complex group_twisted_sum(const Character& chi, const MatrixFamily& g, const PointSet& a, const PointSet& b) {
    const auto p = chi.modulus();
    require(g.modulus() == p, ErrorCode::invalid_argument, "family and character moduli differ");
    detail::require_field_set(a, p, "A");
    detail::require_field_set(b, p, "B");
    const auto wb = b.weight_table();
    const auto b_in = b.indicator();
    Complex acc{0.0, 0.0};
    for (std::size_t i = 0; i < a.size(); ++i) {
        const Residue x = a.elements()[i][0];
        for (const auto& m : g.elements()) {
            const Residue den = mod_reduce(mul_mod(m.c, x, p) + m.d, p);
            if (den == 0) continue;
            const Residue image = mul_mod(mod_reduce(mul_mod(m.a, x, p) + m.b, p), *inv_mod(den, p), p);
            if (!b_in[static_cast<std::size_t>(image)]) continue;
            acc += a.weight(i) * wb[static_cast<std::size_t>(image)] * chi(den);
        }
    }
    return acc;
}

struct LiftCheck {
    Complex lhs;         ///< sum over lifts with the linear action on F_p^2 \ {0}
    Complex rhs_scaled;  ///< (p - 1) * group_twisted_sum
    double residual = 0.0;
    double tolerance = 0.0;  ///< 1e-6 (p - 1) sqrt(|A||B|) |G|

    bool holds() const noexcept { return residual <= tolerance; }
};

/// Lifts A(l a, l) = c_A(a) conj(chi(l)) and B(m b, m) = c_B(b) chi(m) to
/// F_p^2 and evaluates sum_{x, y} A(x) B(y) #{g : g x = y} by brute force.
inline LiftCheck projective_lift_check(const Character& chi, const MatrixFamily& g, const PointSet& a, const PointSet& b) {
    const auto p = chi.modulus();
    detail::require_field_set(a, p, "A");
    detail::require_field_set(b, p, "B");
    const auto idx = [p](Residue x1, Residue x2) { return static_cast<std::size_t>(x1 * p + x2); };
    ComplexVector lift_b(static_cast<std::size_t>(p * p), Complex{0.0, 0.0});
    for (std::size_t j = 0; j < b.size(); ++j)
        for (Residue mu = 1; mu < p; ++mu)
            lift_b[idx(mul_mod(mu, b.elements()[j][0], p), mu)] = b.weight(j) * chi(mu);

    LiftCheck out;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (Residue lam = 1; lam < p; ++lam) {
            const Residue x1 = mul_mod(lam, a.elements()[i][0], p);
            const Complex va = a.weight(i) * std::conj(chi(lam));
            for (const auto& m : g.elements()) {
                const auto y = apply_linear(m, x1, lam, p);
                out.lhs += va * lift_b[idx(y[0], y[1])];
            }
        }
    out.rhs_scaled = static_cast<double>(p - 1) * group_twisted_sum(chi, g, a, b);
    out.residual = std::abs(out.lhs - out.rhs_scaled);
    out.tolerance = 1e-6 * static_cast<double>(p - 1) *
                    std::sqrt(static_cast<double>(a.size()) * static_cast<double>(b.size())) * static_cast<double>(g.size());
    return out;
}

// ---------------------------------------------------------------------------
// T_{2k} energies
// ---------------------------------------------------------------------------

struct EnergyOptions {
    /// Cap on the total number of pairwise products across all convolutions.
    std::uint64_t cap = 10'000'000;
};

/// T_{2k}(G) = sum_x c^{(k)}(x)^2 where c(x) = #{(g, h) in G^2 : g h^{-1} = x}
/// and c^{(k)} is its k-fold convolution; exact.
inline BigInt energy_T2k_raw(const MatrixFamily& g, unsigned k, const EnergyOptions& opts = {}) {
    require(k >= 1, ErrorCode::invalid_argument, "energy needs k >= 1");
    const auto p = g.modulus();
    std::map<Mat2, std::uint64_t> c;
    std::vector<Mat2> inverses;
    for (const auto& y : g.elements()) inverses.push_back(*inverse(y, p));
    for (const auto& x : g.elements())
        for (const auto& yinv : inverses) ++c[multiply(x, yinv, p)];
    std::uint64_t work = static_cast<std::uint64_t>(g.size()) * g.size();
    std::map<Mat2, std::uint64_t> acc = c;
    for (unsigned step = 1; step < k; ++step) {
        work += static_cast<std::uint64_t>(acc.size()) * c.size();
        require(work <= opts.cap, ErrorCode::too_large, "T_2k convolution exceeds the product cap");
        std::map<Mat2, std::uint64_t> next;
        for (const auto& [x, cx] : acc)
            for (const auto& [y, cy] : c) next[multiply(x, y, p)] += checked_mul(cx, cy);
        acc = std::move(next);
    }
    BigInt total = 0;
    for (const auto& [x, cx] : acc) total += BigInt(cx) * cx;
    return total;
}

/// The same raw count by histogramming g_1 g_2^{-1} ... g_{2k-1} g_{2k}^{-1}
/// over all |G|^{2k} tuples; used as the in-run cross-check of the convolution.
inline BigInt energy_T2k_enumerate(const MatrixFamily& g, unsigned k, const EnergyOptions& opts = {}) {
    require(k >= 1, ErrorCode::invalid_argument, "energy needs k >= 1");
    const auto p = g.modulus();
    const std::size_t n = g.size();
    const std::uint64_t tuples = checked_pow(n, 2 * k);
    require(tuples <= opts.cap, ErrorCode::too_large, "T_2k enumeration exceeds the product cap");
    std::vector<Mat2> inverses;
    for (const auto& y : g.elements()) inverses.push_back(*inverse(y, p));
    std::map<Mat2, std::uint64_t> hist;
    std::vector<std::size_t> idx(2 * k, 0);
    for (std::uint64_t t = 0; t < tuples; ++t) {
        Mat2 prod{};
        for (unsigned j = 0; j < k; ++j)
            prod = multiply(multiply(prod, g.elements()[idx[2 * j]], p), inverses[idx[2 * j + 1]], p);
        ++hist[prod];
        for (std::size_t pos = 0; pos < idx.size() && ++idx[pos] == n; ++pos) idx[pos] = 0;
    }
    BigInt total = 0;
    for (const auto& [x, c] : hist) total += BigInt(c) * c;
    return total;
}

/// T_{2k} of the indicator of G (raw) or of its balanced function
/// f_G = G - |G| / |GL_2(F_p)| on GL_2(F_p). The balanced value uses the exact
/// identity T_{2k}(f_G) = T_{2k}(G) - |G|^{4k} / |GL_2(F_p)|.
inline double energy_T2k(const MatrixFamily& g, unsigned k, bool balanced, const EnergyOptions& opts = {}) {
    const BigInt raw = energy_T2k_raw(g, k, opts);
    if (!balanced) return raw.convert_to<double>();
    const Rational correction(boost::multiprecision::pow(BigInt(g.size()), 4 * k), BigInt(gl2_order(g.modulus())));
    return to_double(Rational(raw) - correction);
}

/// sqrt(|A||B||G|) T^{1/(8k)} + sqrt(|A||B|) |G| max(|A|, |B|)^{-1/(2k)}.
inline double prop_rhs(unsigned k, std::uint64_t size_a, std::uint64_t size_b, std::uint64_t size_g, double t) {
    require(t >= 0.0, ErrorCode::invalid_argument, "energy must be nonnegative");
    require(k >= 1, ErrorCode::invalid_argument, "k must be >= 1");
    const double ab = static_cast<double>(size_a) * static_cast<double>(size_b);
    if (ab == 0.0) return 0.0;
    const auto kk = static_cast<double>(k);
    const double mx = static_cast<double>(std::max(size_a, size_b));
    return std::sqrt(ab * static_cast<double>(size_g)) * std::pow(t, 1.0 / (8.0 * kk)) +
           std::sqrt(ab) * static_cast<double>(size_g) * std::pow(mx, -1.0 / (2.0 * kk));
}

// ---------------------------------------------------------------------------
// Character sums over A cap A^{-1} and A^{-1} cap (A^{-1} + 1)
// ---------------------------------------------------------------------------

enum class IntersectionVariant { multiplicative, shifted };

struct IntersectionSum {
    Complex sum;
    std::size_t size = 0;
    /// |A|^2 / p.
    double comparison = 0.0;

    double ratio() const { return size == 0 ? 0.0 : std::abs(sum) / static_cast<double>(size); }
};

inline IntersectionSum intersection_char_sum(const Character& chi, const PointSet& a, IntersectionVariant variant) {
    const auto p = chi.modulus();
    detail::require_field_set(a, p, "A");
    for (const auto& x : a.elements()) require(x[0] != 0, ErrorCode::invalid_argument, "A must avoid 0");
    const auto a_inv = transform_set(a, Invert{}).set;
    const PointSet target = variant == IntersectionVariant::multiplicative
                                ? set_intersection(a, a_inv)
                                : set_intersection(a_inv, transform_set(a_inv, Shift{1}).set);
    IntersectionSum out;
    for (const auto& x : target.elements()) out.sum += chi(x[0]);
    out.size = target.size();
    out.comparison = static_cast<double>(a.size()) * static_cast<double>(a.size()) / static_cast<double>(p);
    return out;
}

}  // namespace zqlab

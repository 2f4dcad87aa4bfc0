#pragma once

/**
 * @file zaremba.hpp
 * @brief Continued fractions with bounded partial quotients, Zaremba sets
 * Z_M(q), witness search inside multiplicative subgroups, multiplicative
 * energy, Ahlfors-David regularity ratios, and interval-union sets.
 */

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "zqlab/error.hpp"
#include "zqlab/modring.hpp"
#include "zqlab/rational.hpp"
#include "zqlab/setops.hpp"

namespace zqlab {

/// a/q = [0; c_1, ..., c_s] in canonical form (c_s >= 2 when s >= 2).
struct ContinuedFraction {
    std::int64_t numerator = 0;
    std::int64_t denominator = 1;
    std::vector<std::int64_t> quotients;

    std::int64_t max_quotient() const {
        return quotients.empty() ? 0 : *std::max_element(quotients.begin(), quotients.end());
    }

    /// Max quotient of [0; c_1, ..., c_s - 1, 1], the other expansion of the
    /// same rational.
    std::int64_t alternate_max_quotient() const {
        if (quotients.empty()) return 0;
        auto alt = quotients;
        alt.back() -= 1;
        std::int64_t m = 1;
        for (auto c : alt) m = std::max(m, c);
        return m;
    }
};

namespace detail {

/// c * x + y with overflow detection.
inline std::int64_t continuant_step(std::int64_t c, std::int64_t x, std::int64_t y) {
    std::int64_t out = 0;
    if (__builtin_mul_overflow(c, x, &out) || __builtin_add_overflow(out, y, &out))
        fail(ErrorCode::too_large, "continued fraction overflows 64 bits");
    return out;
}

}  // namespace detail

/// Euclid quotients of a/q. Euclid already ends on a quotient >= 2 unless
/// a/q = 1/1, which the precondition excludes.
inline ContinuedFraction cf_expand(std::int64_t a, std::int64_t q) {
    require(0 < a && a < q, ErrorCode::invalid_fraction, "need 0 < a < q, got " + std::to_string(a) + "/" + std::to_string(q));
    require(std::gcd(a, q) == 1, ErrorCode::invalid_fraction,
            std::to_string(a) + "/" + std::to_string(q) + " is not reduced");
    ContinuedFraction cf{a, q, {}};
    std::int64_t num = q, den = a;
    while (den != 0) {
        cf.quotients.push_back(num / den);
        num = std::exchange(den, num % den);
    }
    return cf;
}

/// [0; c_1, ..., c_s] as a reduced pair (a, q) via the backward recurrence.
inline std::pair<std::int64_t, std::int64_t> cf_value(const std::vector<std::int64_t>& quotients) {
    require(!quotients.empty(), ErrorCode::invalid_fraction, "empty quotient list");
    for (auto c : quotients) require(c >= 1, ErrorCode::invalid_fraction, "quotients must be >= 1");
    // x = c_s, then x = c_j + 1/x; the value is 1/x.
    std::int64_t num = quotients.back(), den = 1;
    for (auto it = std::next(quotients.rbegin()); it != quotients.rend(); ++it) {
        const std::int64_t next = detail::continuant_step(*it, num, den);
        den = num;
        num = next;
    }
    return {den, num};
}

/// Denominators q_1, ..., q_s of the convergents [0; c_1, ..., c_j].
inline std::vector<std::int64_t> convergent_denominators(const std::vector<std::int64_t>& quotients) {
    std::vector<std::int64_t> out;
    std::int64_t prev = 0, cur = 1;  // q_{-1}, q_0
    for (auto c : quotients) {
        const std::int64_t next = detail::continuant_step(c, cur, prev);
        prev = cur;
        cur = next;
        out.push_back(cur);
    }
    return out;
}

/// Z_M(q) = {a in [1, q) : gcd(a, q) = 1, all quotients of a/q <= M}.
inline std::vector<std::int64_t> zaremba_set(std::int64_t q, std::int64_t big_m) {
    require(q >= 2 && big_m >= 1, ErrorCode::invalid_argument, "zaremba_set needs q >= 2 and M >= 1");
    std::vector<std::int64_t> out;
    for (std::int64_t a = 1; a < q; ++a)
        if (std::gcd(a, q) == 1 && cf_expand(a, q).max_quotient() <= big_m) out.push_back(a);
    return out;
}

/// Cyclic subgroup of F_q^* generated by one element.
class SubgroupSpec {
public:
    SubgroupSpec(std::int64_t q, Residue generator) : q_(q), generator_(mod_reduce(generator, q)) {
        require(is_prime(q), ErrorCode::invalid_modulus, "subgroups are taken in F_q^* for prime q");
        require(generator_ != 0, ErrorCode::invalid_argument, "generator must be a unit");
        Residue x = 1;
        do {
            elements_.push_back(x);
            x = mul_mod(x, generator_, q);
        } while (x != 1);
        std::sort(elements_.begin(), elements_.end());
    }

    static SubgroupSpec quadratic_residues(std::int64_t q) {
        return SubgroupSpec(q, q == 2 ? 1 : mul_mod(primitive_root(q), primitive_root(q), q));
    }

    /// One subgroup per divisor of q - 1, ordered by size.
    static std::vector<SubgroupSpec> all(std::int64_t q) {
        const Residue g = primitive_root(q);
        std::vector<SubgroupSpec> out;
        for (std::int64_t d = 1; d <= q - 1; ++d)
            if ((q - 1) % d == 0) out.emplace_back(q, pow_mod(g, (q - 1) / d, q));
        return out;
    }

    std::int64_t modulus() const noexcept { return q_; }
    Residue generator() const noexcept { return generator_; }
    const std::vector<Residue>& elements() const noexcept { return elements_; }
    std::size_t size() const noexcept { return elements_.size(); }

    bool contains(Residue x) const { return std::binary_search(elements_.begin(), elements_.end(), mod_reduce(x, q_)); }

    PointSet as_set() const {
        return PointSet::scalars(Modulus(q_), std::span<const Residue>(elements_));
    }

private:
    std::int64_t q_;
    Residue generator_;
    std::vector<Residue> elements_;
};

struct WitnessKnobs {
    double big_c = 1.0;
    double c_star = 1.0;
    /// Interval length N in the saving term; 1 when unset.
    double big_n = 1.0;
};

struct WitnessResult {
    std::optional<std::int64_t> witness;
    std::size_t intersection = 0;   ///< |Z_M(q) cap Gamma|
    std::size_t zaremba_size = 0;   ///< |Z_M(q)|
    double lower_bound_expr = 0.0;  ///< |A||Gamma|/(q - 1) - C |A| N^{-c*}, with A = Z_M(q)
};

inline WitnessResult find_in_subgroup(std::int64_t q, std::int64_t big_m, const SubgroupSpec& gamma, const WitnessKnobs& knobs = {}) {
    require(is_prime(q) && gamma.modulus() == q, ErrorCode::invalid_modulus, "find_in_subgroup needs a prime q matching the subgroup");
    const auto z = zaremba_set(q, big_m);
    WitnessResult out;
    out.zaremba_size = z.size();
    for (auto a : z)
        if (gamma.contains(a)) {
            if (!out.witness) out.witness = a;
            ++out.intersection;
        }
    const auto sa = static_cast<double>(z.size());
    out.lower_bound_expr = sa * static_cast<double>(gamma.size()) / static_cast<double>(q - 1) -
                           knobs.big_c * sa * std::pow(knobs.big_n, -knobs.c_star);
    return out;
}

/// E(Z) = #{z1 z2 = z3 z4} = sum_x r_{ZZ}(x)^2.
inline BigInt mult_energy(const PointSet& z) {
    require(z.dimension() == 1, ErrorCode::invalid_argument, "mult_energy needs a one-dimensional set");
    const auto r = rep_function(z, z, RepOp::product);
    BigInt total = 0;
    for (const auto& [x, c] : r.counts) total += BigInt(c) * c;
    return total;
}

/// #{(z1, z2, z3, z4) in Z^4 : z1 z2 = z3 z4} by direct quadruple loop.
inline BigInt mult_energy_enumerate(const PointSet& z) {
    require(z.dimension() == 1, ErrorCode::invalid_argument, "mult_energy needs a one-dimensional set");
    const auto q = z.modulus().value();
    std::uint64_t count = 0;
    for (const auto& a : z.elements())
        for (const auto& b : z.elements())
            for (const auto& c : z.elements())
                for (const auto& d : z.elements())
                    if (mul_mod(a[0], b[0], q) == mul_mod(c[0], d[0], q)) ++count;
    return BigInt(count);
}

struct RegularityRow {
    Residue center = 0;
    std::int64_t length = 0;
    std::size_t count = 0;
    double ratio = 0.0;  ///< count / (length^w N^{1-w})
};

struct RegularityReport {
    double min_ratio = 0.0;
    double max_ratio = 0.0;
    std::vector<RegularityRow> rows;
};

/// Ratios |Z cap (D + z)| / (|D|^w N^{1-w}) for z in Z and |D| in {N, 2N, ...} below q,
/// where D + z holds the |D| residues z - floor(|D|/2), ..., wrapped mod q.
inline RegularityReport ad_regularity(const PointSet& z, std::int64_t big_n, double w) {
    require(z.dimension() == 1, ErrorCode::invalid_argument, "ad_regularity needs a one-dimensional set");
    require(big_n >= 1, ErrorCode::invalid_argument, "N must be >= 1");
    require(w > 0.0 && w <= 1.0, ErrorCode::invalid_argument, "w must lie in (0, 1]");
    const auto q = z.modulus().value();
    const auto in = z.indicator();
    // prefix[i] = #{x < i in Z}, doubled so windows never wrap twice.
    std::vector<std::size_t> prefix(static_cast<std::size_t>(2 * q + 1), 0);
    for (std::int64_t i = 0; i < 2 * q; ++i)
        prefix[static_cast<std::size_t>(i + 1)] = prefix[static_cast<std::size_t>(i)] + (in[static_cast<std::size_t>(i % q)] ? 1 : 0);

    RegularityReport out;
    bool first = true;
    for (std::int64_t len = big_n; len < q; len *= 2) {
        const double denom = std::pow(static_cast<double>(len), w) * std::pow(static_cast<double>(big_n), 1.0 - w);
        for (const auto& pt : z.elements()) {
            const std::int64_t start = mod_reduce(pt[0] - len / 2, q);
            const std::size_t count = prefix[static_cast<std::size_t>(start + len)] - prefix[static_cast<std::size_t>(start)];
            const double ratio = static_cast<double>(count) / denom;
            out.rows.push_back({pt[0], len, count, ratio});
            out.min_ratio = first ? ratio : std::min(out.min_ratio, ratio);
            out.max_ratio = first ? ratio : std::max(out.max_ratio, ratio);
            first = false;
        }
    }
    return out;
}

/// A = [N] + Lambda with [N] = {1, ..., N}; the sum must be direct.
struct IntervalUnion {
    PointSet set;
    std::int64_t big_n = 0;
    PointSet lambda;
};

inline IntervalUnion interval_union(const PointSet& lambda, std::int64_t big_n) {
    require(lambda.dimension() == 1, ErrorCode::invalid_argument, "Lambda must be one-dimensional");
    require(big_n >= 1 && big_n < lambda.modulus().value(), ErrorCode::invalid_argument, "need 1 <= N < q");
    const PointSet base = interval(lambda.modulus(), 1, big_n);
    const auto plain = lambda.without_weights();
    require(is_direct_sum(base, plain), ErrorCode::structure, "[N] + Lambda is not a direct sum");
    return {sumset(base, plain), big_n, plain};
}

struct EnergyBoundRow {
    BigInt energy;
    double rhs = 0.0;         ///< |Z|^3 (p/|Z|)^{3-4w} N^{-2(1-w)}
    double trivial = 0.0;     ///< |Z|^3
    double random_baseline = 0.0;  ///< |Z|^4/p + |Z|^2
    bool regime_ok = false;   ///< w > 3/4
};

inline EnergyBoundRow energy_bound_report(const PointSet& z, std::int64_t big_n, double w) {
    const auto p = static_cast<double>(z.modulus().value());
    const auto s = static_cast<double>(z.size());
    EnergyBoundRow row;
    row.energy = mult_energy(z);
    row.trivial = s * s * s;
    row.rhs = s == 0.0 ? 0.0 : row.trivial * std::pow(p / s, 3.0 - 4.0 * w) * std::pow(static_cast<double>(big_n), -2.0 * (1.0 - w));
    row.random_baseline = s * s * s * s / p + s * s;
    row.regime_ok = w > 0.75;
    return row;
}

}  // namespace zqlab

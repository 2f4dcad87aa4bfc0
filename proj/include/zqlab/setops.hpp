#pragma once

/**
 * @file setops.hpp
 * @brief Finite point sets over Z_q^n and the set algebra used by the
 * character-sum and Zaremba experiments: sumsets, product sets, direct sums,
 * representation functions, inversion / shift / dilation.
 */

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "zqlab/error.hpp"
#include "zqlab/modring.hpp"

namespace zqlab {

using Point = std::vector<Residue>;

inline constexpr double kUnitDiskSlack = 1e-12;

/// A finite subset of Z_q^n, stored sorted and duplicate-free, with optional
/// weights in the closed unit disk (one per element, aligned with elements()).
class PointSet {
public:
    PointSet(Modulus modulus, std::size_t dimension) : modulus_(std::move(modulus)), dimension_(dimension) {
        require(dimension >= 1, ErrorCode::invalid_argument, "point set dimension must be >= 1");
    }

    /// Reduces every coordinate into [0, q). Duplicates are merged when there
    /// are no weights and rejected when there are.
    PointSet(Modulus modulus, std::size_t dimension, std::vector<Point> points,
             std::optional<ComplexVector> weights = std::nullopt)
        : PointSet(std::move(modulus), dimension) {
        if (weights) {
            require(weights->size() == points.size(), ErrorCode::invalid_argument, "one weight per point required");
            for (const auto& w : *weights)
                require(std::isfinite(w.real()) && std::isfinite(w.imag()) && std::abs(w) <= 1.0 + kUnitDiskSlack,
                        ErrorCode::invalid_argument, "weights must lie in the unit disk");
        }
        for (auto& p : points) {
            require(p.size() == dimension_, ErrorCode::invalid_argument, "point has wrong dimension");
            for (auto& c : p) c = modulus_.reduce(c);
        }
        std::vector<std::size_t> order(points.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return points[a] < points[b]; });
        elements_.reserve(points.size());
        if (weights) weights_.emplace();
        for (std::size_t i : order) {
            if (!elements_.empty() && elements_.back() == points[i]) {
                require(!weights, ErrorCode::invalid_argument, "duplicate point in weighted set");
                continue;
            }
            elements_.push_back(std::move(points[i]));
            if (weights) weights_->push_back((*weights)[i]);
        }
    }

    static PointSet scalars(const Modulus& modulus, std::span<const Residue> values,
                            std::optional<ComplexVector> weights = std::nullopt) {
        std::vector<Point> pts;
        pts.reserve(values.size());
        for (auto v : values) pts.push_back({v});
        return PointSet(modulus, 1, std::move(pts), std::move(weights));
    }

    static PointSet scalars(const Modulus& modulus, std::initializer_list<Residue> values) {
        return scalars(modulus, std::span<const Residue>(values.begin(), values.size()));
    }

    const Modulus& modulus() const noexcept { return modulus_; }
    std::size_t dimension() const noexcept { return dimension_; }
    std::size_t size() const noexcept { return elements_.size(); }
    bool empty() const noexcept { return elements_.empty(); }
    const std::vector<Point>& elements() const noexcept { return elements_; }
    bool has_weights() const noexcept { return weights_.has_value(); }
    const std::optional<ComplexVector>& weights() const noexcept { return weights_; }

    /// Weight of the i-th element (1 when unweighted).
    Complex weight(std::size_t i) const { return weights_ ? (*weights_)[i] : Complex{1.0, 0.0}; }

    std::optional<std::size_t> index_of(const Point& p) const {
        auto it = std::lower_bound(elements_.begin(), elements_.end(), p);
        if (it == elements_.end() || *it != p) return std::nullopt;
        return static_cast<std::size_t>(it - elements_.begin());
    }

    bool contains(const Point& p) const { return index_of(p).has_value(); }

    /// Values of a one-dimensional set, ascending.
    std::vector<Residue> values() const {
        require(dimension_ == 1, ErrorCode::invalid_argument, "values() needs a one-dimensional set");
        std::vector<Residue> out;
        out.reserve(elements_.size());
        for (const auto& p : elements_) out.push_back(p[0]);
        return out;
    }

    /// Dense weight table over Z_q for a one-dimensional set (0 off the set).
    ComplexVector weight_table() const {
        require(dimension_ == 1, ErrorCode::invalid_argument, "weight_table() needs a one-dimensional set");
        ComplexVector out(static_cast<std::size_t>(modulus_.value()), Complex{0.0, 0.0});
        for (std::size_t i = 0; i < elements_.size(); ++i) out[static_cast<std::size_t>(elements_[i][0])] = weight(i);
        return out;
    }

    /// Indicator table over Z_q for a one-dimensional set.
    std::vector<char> indicator() const {
        require(dimension_ == 1, ErrorCode::invalid_argument, "indicator() needs a one-dimensional set");
        std::vector<char> out(static_cast<std::size_t>(modulus_.value()), 0);
        for (const auto& p : elements_) out[static_cast<std::size_t>(p[0])] = 1;
        return out;
    }

    PointSet without_weights() const { return PointSet(modulus_, dimension_, elements_); }

    friend bool operator==(const PointSet& a, const PointSet& b) {
        return a.modulus_ == b.modulus_ && a.dimension_ == b.dimension_ && a.elements_ == b.elements_;
    }

private:
    Modulus modulus_;
    std::size_t dimension_;
    std::vector<Point> elements_;
    std::optional<ComplexVector> weights_;
};

namespace detail {

inline void require_compatible(const PointSet& a, const PointSet& b) {
    require(a.modulus() == b.modulus(), ErrorCode::invalid_argument,
            "modulus mismatch: " + std::to_string(a.modulus().value()) + " vs " + std::to_string(b.modulus().value()));
    require(a.dimension() == b.dimension(), ErrorCode::invalid_argument, "dimension mismatch");
}

}  // namespace detail

/// A + B, componentwise mod q.
inline PointSet sumset(const PointSet& a, const PointSet& b) {
    detail::require_compatible(a, b);
    std::vector<Point> out;
    out.reserve(a.size() * b.size());
    for (const auto& x : a.elements())
        for (const auto& y : b.elements()) {
            Point s(x.size());
            for (std::size_t i = 0; i < x.size(); ++i) s[i] = a.modulus().reduce(x[i] + y[i]);
            out.push_back(std::move(s));
        }
    return PointSet(a.modulus(), a.dimension(), std::move(out));
}

/// A * B for one-dimensional sets.
inline PointSet productset(const PointSet& a, const PointSet& b) {
    detail::require_compatible(a, b);
    require(a.dimension() == 1, ErrorCode::invalid_argument, "productset needs one-dimensional sets");
    std::vector<Residue> out;
    out.reserve(a.size() * b.size());
    for (const auto& x : a.elements())
        for (const auto& y : b.elements()) out.push_back(mul_mod(x[0], y[0], a.modulus().value()));
    return PointSet::scalars(a.modulus(), out);
}

/// |I + L| == |I| |L|.
inline bool is_direct_sum(const PointSet& i, const PointSet& l) {
    detail::require_compatible(i, l);
    return sumset(i, l).size() == i.size() * l.size();
}

enum class RepOp { sum, product, quotient };
enum class NonInvertible { skip, error };

struct RepFunction {
    std::map<Residue, std::uint64_t> counts;
    /// Pairs dropped in quotient mode because b was not a unit.
    std::uint64_t skipped = 0;

    std::uint64_t operator()(Residue x) const {
        auto it = counts.find(x);
        return it == counts.end() ? 0 : it->second;
    }

    std::uint64_t total() const {
        std::uint64_t t = 0;
        for (const auto& [x, c] : counts) t += c;
        return t;
    }
};

/// r(x) = #{(a, b) : a o b = x} for o in {+, *, a b^{-1}}.
inline RepFunction rep_function(const PointSet& a, const PointSet& b, RepOp op,
                                NonInvertible policy = NonInvertible::error) {
    detail::require_compatible(a, b);
    require(a.dimension() == 1, ErrorCode::invalid_argument, "rep_function needs one-dimensional sets");
    const auto q = a.modulus().value();
    RepFunction out;
    for (const auto& y : b.elements()) {
        Residue factor = y[0];
        if (op == RepOp::quotient) {
            auto inv = inv_mod(y[0], q);
            if (!inv) {
                require(policy == NonInvertible::skip, ErrorCode::invalid_argument,
                        "non-invertible element " + std::to_string(y[0]) + " in quotient mode");
                out.skipped += a.size();
                continue;
            }
            factor = *inv;
        }
        for (const auto& x : a.elements()) {
            const Residue v = op == RepOp::sum ? mod_reduce(x[0] + factor, q) : mul_mod(x[0], factor, q);
            ++out.counts[v];
        }
    }
    return out;
}

struct Invert {};
struct Shift {
    Residue t;
};
struct Dilate {
    Residue s;
};
using SetTransform = std::variant<Invert, Shift, Dilate>;

struct TransformResult {
    PointSet set;
    /// Elements dropped because they had no inverse.
    std::size_t dropped = 0;
};

/// Image of a one-dimensional set under x -> x^{-1}, x + t or s x.
inline TransformResult transform_set(const PointSet& a, const SetTransform& kind) {
    require(a.dimension() == 1, ErrorCode::invalid_argument, "transform_set needs a one-dimensional set");
    const auto& mod = a.modulus();
    std::vector<Residue> out;
    std::size_t dropped = 0;
    for (const auto& p : a.elements()) {
        const Residue x = p[0];
        if (std::holds_alternative<Invert>(kind)) {
            if (auto inv = inv_mod(x, mod)) out.push_back(*inv);
            else ++dropped;
        } else if (const auto* s = std::get_if<Shift>(&kind)) {
            out.push_back(mod.reduce(x + s->t));
        } else {
            out.push_back(mul_mod(x, mod.reduce(std::get<Dilate>(kind).s), mod.value()));
        }
    }
    return {PointSet::scalars(mod, out), dropped};
}

inline PointSet set_intersection(const PointSet& a, const PointSet& b) {
    detail::require_compatible(a, b);
    std::vector<Point> out;
    std::set_intersection(a.elements().begin(), a.elements().end(), b.elements().begin(), b.elements().end(),
                          std::back_inserter(out));
    return PointSet(a.modulus(), a.dimension(), std::move(out));
}

/// The interval {lo, lo + 1, ..., lo + len - 1} mod q.
inline PointSet interval(const Modulus& mod, Residue lo, std::int64_t len) {
    std::vector<Residue> v;
    v.reserve(static_cast<std::size_t>(std::max<std::int64_t>(len, 0)));
    for (std::int64_t i = 0; i < len; ++i) v.push_back(lo + i);
    return PointSet::scalars(mod, v);
}

}  // namespace zqlab

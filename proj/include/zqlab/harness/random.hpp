#pragma once

/**
 * @file random.hpp
 * @brief Seeded instance generation. Every trial gets its own engine seeded
 * from (seed, trial keys), so records do not depend on scheduling. Integer
 * and real draws are done here rather than through the standard
 * distributions, whose output is implementation-defined.
 */

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <numbers>
#include <numeric>
#include <random>
#include <vector>

#include "zqlab/error.hpp"
#include "zqlab/gl2.hpp"
#include "zqlab/incidence.hpp"
#include "zqlab/modring.hpp"
#include "zqlab/setops.hpp"

namespace zqlab::harness {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> keys) {
    std::uint64_t h = splitmix64(seed);
    for (auto k : keys) h = splitmix64(h ^ k);
    return h;
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, n), by rejection.
    std::uint64_t below(std::uint64_t n) {
        require(n > 0, ErrorCode::invalid_params, "empty range");
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x;
        do x = engine_();
        while (x >= limit);
        return x % n;
    }

    /// Uniform on [lo, hi].
    std::int64_t between(std::int64_t lo, std::int64_t hi) {
        require(lo <= hi, ErrorCode::invalid_params, "empty range");
        return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo) + 1));
    }

    /// Uniform on [0, 1) with 53 random bits.
    double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform on the closed unit disk.
    Complex disk() {
        const double r = std::sqrt(unit());
        const double theta = 2.0 * std::numbers::pi * unit();
        return std::polar(r, theta);
    }

private:
    std::mt19937_64 engine_;
};

/// k distinct indices from [0, n), sorted; partial Fisher-Yates.
inline std::vector<std::size_t> sample_indices(Rng& rng, std::size_t n, std::size_t k) {
    require(k <= n, ErrorCode::invalid_params,
            "sample size " + std::to_string(k) + " exceeds domain size " + std::to_string(n));
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    for (std::size_t i = 0; i < k; ++i) std::swap(idx[i], idx[i + rng.below(n - i)]);
    idx.resize(k);
    std::sort(idx.begin(), idx.end());
    return idx;
}

template <class T>
std::vector<T> sample_from(Rng& rng, const std::vector<T>& domain, std::size_t k) {
    std::vector<T> out;
    out.reserve(k);
    for (auto i : sample_indices(rng, domain.size(), k)) out.push_back(domain[i]);
    return out;
}

/// k points drawn without replacement from `domain`, optionally with weights
/// uniform on the unit disk.
inline PointSet random_subset(Rng& rng, const Modulus& mod, std::size_t dim, const std::vector<Point>& domain, std::size_t k,
                              bool weighted = false) {
    auto pts = sample_from(rng, domain, k);
    if (!weighted) return PointSet(mod, dim, std::move(pts));
    ComplexVector w;
    w.reserve(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) w.push_back(rng.disk());
    return PointSet(mod, dim, std::move(pts), std::move(w));
}

inline std::vector<Point> scalar_domain(std::int64_t lo, std::int64_t hi) {
    std::vector<Point> d;
    for (auto x = lo; x < hi; ++x) d.push_back({x});
    return d;
}

/// A uniformly random unit of Z_q.
inline Residue random_unit(Rng& rng, const Modulus& mod) {
    for (;;) {
        const auto x = static_cast<Residue>(rng.below(static_cast<std::uint64_t>(mod.value())));
        if (mod.is_unit(x)) return x;
    }
}

/// k distinct elements of GL_2(F_p).
inline std::vector<Mat2> random_gl2_subset(Rng& rng, std::int64_t p, std::size_t k) {
    return sample_from(rng, enumerate_gl2(p), k);
}

inline ComplexVector random_interval_function(Rng& rng, std::int64_t p, std::int64_t start, std::int64_t len) {
    ComplexVector f(static_cast<std::size_t>(p), Complex{0.0, 0.0});
    for (std::int64_t i = 0; i < len; ++i) f[static_cast<std::size_t>(mod_reduce(start + i, p))] = rng.disk();
    return f;
}

}  // namespace zqlab::harness

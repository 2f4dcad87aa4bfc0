#pragma once

/**
 * @file gl2.hpp
 * @brief 2x2 matrices over Z_q: products, inverses, the linear action on
 * Z_q^2, the Moebius action on Z_q, and SL_2 / GL_2 enumeration.
 */

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "zqlab/error.hpp"
#include "zqlab/modring.hpp"

namespace zqlab {

/// (a, b | c, d), entries reduced into [0, q).
struct Mat2 {
    Residue a = 1, b = 0, c = 0, d = 1;

    auto operator<=>(const Mat2&) const = default;
};

inline Mat2 reduce(const Mat2& g, std::int64_t q) {
    return {mod_reduce(g.a, q), mod_reduce(g.b, q), mod_reduce(g.c, q), mod_reduce(g.d, q)};
}

inline Mat2 multiply(const Mat2& x, const Mat2& y, std::int64_t q) {
    return {mod_reduce(mul_mod(x.a, y.a, q) + mul_mod(x.b, y.c, q), q),
            mod_reduce(mul_mod(x.a, y.b, q) + mul_mod(x.b, y.d, q), q),
            mod_reduce(mul_mod(x.c, y.a, q) + mul_mod(x.d, y.c, q), q),
            mod_reduce(mul_mod(x.c, y.b, q) + mul_mod(x.d, y.d, q), q)};
}

inline Residue determinant(const Mat2& g, std::int64_t q) {
    return mod_reduce(mul_mod(g.a, g.d, q) - mul_mod(g.b, g.c, q), q);
}

inline std::optional<Mat2> inverse(const Mat2& g, std::int64_t q) {
    const auto inv_det = inv_mod(determinant(g, q), q);
    if (!inv_det) return std::nullopt;
    const Residue k = *inv_det;
    return Mat2{mul_mod(g.d, k, q), mul_mod(mod_reduce(-g.b, q), k, q), mul_mod(mod_reduce(-g.c, q), k, q),
                mul_mod(g.a, k, q)};
}

/// g (x, y) = (a x + b y, c x + d y).
inline std::array<Residue, 2> apply_linear(const Mat2& g, Residue x, Residue y, std::int64_t q) {
    return {mod_reduce(mul_mod(g.a, x, q) + mul_mod(g.b, y, q), q), mod_reduce(mul_mod(g.c, x, q) + mul_mod(g.d, y, q), q)};
}

/// g x = (a x + b) / (c x + d) over F_q; nullopt when x maps to infinity.
inline std::optional<Residue> apply_mobius(const Mat2& g, Residue x, std::int64_t q) {
    const auto den = inv_mod(mod_reduce(mul_mod(g.c, x, q) + g.d, q), q);
    if (!den) return std::nullopt;
    return mul_mod(mod_reduce(mul_mod(g.a, x, q) + g.b, q), *den, q);
}

inline std::string to_string(const Mat2& g) {
    return "(" + std::to_string(g.a) + "," + std::to_string(g.b) + "|" + std::to_string(g.c) + "," + std::to_string(g.d) + ")";
}

/// Every matrix mod q with determinant 1; there are q J_2(q) of them.
inline std::vector<Mat2> enumerate_sl2(const Modulus& mod, std::uint64_t cap = 1'000'000) {
    const std::uint64_t expected = checked_mul(static_cast<std::uint64_t>(mod.value()), jordan_totient(2, mod));
    require(expected <= cap, ErrorCode::too_large,
            "|SL_2(Z_" + std::to_string(mod.value()) + ")| = " + std::to_string(expected) + " exceeds cap");
    const auto q = mod.value();
    std::vector<Mat2> out;
    out.reserve(expected);
    for (Residue a = 0; a < q; ++a)
        for (Residue b = 0; b < q; ++b)
            for (Residue c = 0; c < q; ++c)
                for (Residue d = 0; d < q; ++d)
                    if (mod_reduce(mul_mod(a, d, q) - mul_mod(b, c, q), q) == 1) out.push_back({a, b, c, d});
    return out;
}

/// Every invertible matrix mod a prime p; (p^2 - 1)(p^2 - p) of them.
inline std::vector<Mat2> enumerate_gl2(std::int64_t p) {
    require(is_prime(p), ErrorCode::invalid_argument, "enumerate_gl2 needs a prime");
    std::vector<Mat2> out;
    for (Residue a = 0; a < p; ++a)
        for (Residue b = 0; b < p; ++b)
            for (Residue c = 0; c < p; ++c)
                for (Residue d = 0; d < p; ++d)
                    if (mod_reduce(a * d - b * c, p) != 0) out.push_back({a, b, c, d});
    return out;
}

inline std::uint64_t gl2_order(std::int64_t p) {
    const auto pp = static_cast<std::uint64_t>(p);
    return (pp * pp - 1) * (pp * pp - pp);
}

}  // namespace zqlab

#pragma once

// Brute-force reference implementations. Nothing here calls into the library
// beyond its plain data types; every routine is the most literal loop that
// computes the quantity.

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <numbers>
#include <numeric>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace oracle {

using i64 = std::int64_t;
using Vec = std::vector<i64>;
using Cx = std::complex<double>;
using Rat = boost::multiprecision::cpp_rational;

inline i64 md(i64 x, i64 q) { return ((x % q) + q) % q; }

inline i64 power(i64 b, i64 e, i64 q) {
    i64 r = 1 % q;
    for (i64 i = 0; i < e; ++i) r = md(r * b, q);
    return r;
}

inline i64 inverse(i64 a, i64 q) {
    for (i64 x = 1; x < q; ++x)
        if (md(a * x, q) == 1) return x;
    return -1;
}

inline Cx e(i64 t, i64 q) { return std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(md(t, q)) / static_cast<double>(q)); }

inline i64 jordan(unsigned k, i64 q) {
    i64 count = 0, total = 1;
    for (unsigned i = 0; i < k; ++i) total *= q;
    for (i64 idx = 0; idx < total; ++idx) {
        i64 g = q, rest = idx;
        for (unsigned i = 0; i < k; ++i) {
            g = std::gcd(g, rest % q);
            rest /= q;
        }
        count += g == 1;
    }
    return count;
}

inline i64 dot(const Vec& a, const Vec& b, i64 q) {
    i64 s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return md(s, q);
}

inline i64 count_dot(const std::vector<Vec>& A, const std::vector<Vec>& B, i64 lambda, i64 q) {
    i64 c = 0;
    for (const auto& a : A)
        for (const auto& b : B) c += dot(a, b, q) == md(lambda, q);
    return c;
}

/// sum_t e(-t lambda) sum_{a,b} e(t a.b) / q
inline double count_dot_characters(const std::vector<Vec>& A, const std::vector<Vec>& B, i64 lambda, i64 q) {
    Cx total = 0;
    for (i64 t = 0; t < q; ++t) {
        Cx inner = 0;
        for (const auto& a : A)
            for (const auto& b : B) inner += e(t * dot(a, b, q), q);
        total += e(-t * lambda, q) * inner;
    }
    return total.real() / static_cast<double>(q);
}

inline i64 count_det2(const std::vector<Vec>& A, const std::vector<Vec>& B, i64 lambda, i64 q) {
    i64 c = 0;
    for (const auto& a : A)
        for (const auto& b : B) c += md(a[0] * b[1] - a[1] * b[0], q) == md(lambda, q);
    return c;
}

/// (a-c)(b-d) = lambda (a-d)(b-c) with (a-d)(b-c) a unit, for a prime q.
inline i64 count_crossratio(const std::vector<Vec>& A, const std::vector<Vec>& B, i64 lambda, i64 q) {
    i64 c = 0;
    for (const auto& x : A)
        for (const auto& y : B) {
            const i64 den = md((x[0] - y[1]) * (x[1] - y[0]), q);
            if (den == 0) continue;
            c += md((x[0] - y[0]) * (x[1] - y[1]), q) == md(lambda * den, q);
        }
    return c;
}

inline std::vector<Vec> all_points(i64 q, std::size_t dim) {
    std::vector<Vec> out{Vec{}};
    for (std::size_t i = 0; i < dim; ++i) {
        std::vector<Vec> next;
        for (const auto& p : out)
            for (i64 x = 0; x < q; ++x) {
                auto v = p;
                v.push_back(x);
                next.push_back(v);
            }
        out = next;
    }
    return out;
}

/// sum_{a,a'} (sum_b M(a,b) M(a',b))^2
inline i64 sigma(const std::vector<std::vector<int>>& M) {
    i64 s = 0;
    for (std::size_t a = 0; a < M.size(); ++a)
        for (std::size_t a2 = 0; a2 < M.size(); ++a2) {
            i64 inner = 0;
            for (std::size_t b = 0; b < M[a].size(); ++b) inner += M[a][b] * M[a2][b];
            s += inner * inner;
        }
    return s;
}

using M2 = std::array<i64, 4>;

inline M2 mul(const M2& x, const M2& y, i64 p) {
    return {md(x[0] * y[0] + x[1] * y[2], p), md(x[0] * y[1] + x[1] * y[3], p), md(x[2] * y[0] + x[3] * y[2], p),
            md(x[2] * y[1] + x[3] * y[3], p)};
}

inline M2 inv(const M2& x, i64 p) {
    const i64 di = inverse(md(x[0] * x[3] - x[1] * x[2], p), p);
    return {md(x[3] * di, p), md(-x[1] * di, p), md(-x[2] * di, p), md(x[0] * di, p)};
}

/// #{(g_1..g_2k) : g_1 g_2^{-1} ... g_{2k-1} g_{2k}^{-1} = h_1 h_2^{-1} ...}
inline i64 energy(const std::vector<M2>& G, unsigned k, i64 p) {
    std::map<M2, i64> hist;
    const std::size_t n = G.size();
    std::size_t total = 1;
    for (unsigned i = 0; i < 2 * k; ++i) total *= n;
    for (std::size_t idx = 0; idx < total; ++idx) {
        M2 x{1, 0, 0, 1};
        std::size_t rest = idx;
        for (unsigned j = 0; j < k; ++j) {
            const auto& g = G[rest % n];
            rest /= n;
            const auto& h = G[rest % n];
            rest /= n;
            x = mul(mul(x, g, p), inv(h, p), p);
        }
        ++hist[x];
    }
    i64 s = 0;
    for (const auto& [m, c] : hist) s += c * c;
    return s;
}

inline i64 mult_energy(const Vec& Z, i64 q) {
    i64 c = 0;
    for (auto a : Z)
        for (auto b : Z)
            for (auto x : Z)
                for (auto y : Z) c += md(a * b, q) == md(x * y, q);
    return c;
}

inline i64 smallest_primitive_root(i64 p) {
    for (i64 g = 2; g < p; ++g) {
        i64 order = 1, x = g;
        while (x != 1) {
            x = md(x * g, p);
            ++order;
        }
        if (order == p - 1) return g;
    }
    return 1;
}

/// exp(2 pi i k log_g(x) / (p - 1)), 0 at x = 0.
inline Cx character(i64 k, i64 g, i64 p, i64 x) {
    x = md(x, p);
    if (x == 0) return 0;
    i64 log = 0;
    for (i64 y = 1; y != x; y = md(y * g, p)) ++log;
    return std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(md(k * log, p - 1)) / static_cast<double>(p - 1));
}

inline Cx kloosterman(i64 k, i64 g, i64 p, i64 n, i64 m) {
    Cx s = 0;
    for (i64 x = 1; x < p; ++x) s += character(k, g, p, x) * e(n * x + m * inverse(x, p), p);
    return s;
}

/// sum over (a+x)(b+y) = 1 of w_A(a) w_B(b) chi(a+x)
inline Cx hyperbola(i64 k, i64 g, i64 p, const Vec& A, const std::vector<Cx>& wa, const Vec& B, const std::vector<Cx>& wb,
                    const Vec& X, const Vec& Y) {
    Cx s = 0;
    for (std::size_t i = 0; i < A.size(); ++i)
        for (auto x : X)
            for (std::size_t j = 0; j < B.size(); ++j)
                for (auto y : Y)
                    if (md((A[i] + x) * (B[j] + y), p) == 1) s += wa[i] * wb[j] * character(k, g, p, A[i] + x);
    return s;
}

/// [0; c_1, ..., c_s] as an exact rational.
inline Rat cf(const Vec& c) {
    Rat v = 0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) v = Rat(1) / (Rat(*it) + v);
    return v;
}

/// Euclid quotients of a/q.
inline Vec euclid(i64 a, i64 q) {
    Vec out;
    while (a != 0) {
        out.push_back(q / a);
        const i64 r = q % a;
        q = a;
        a = r;
    }
    return out;
}

}  // namespace oracle

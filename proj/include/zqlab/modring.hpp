#pragma once

/**
 * @file modring.hpp
 * @brief Exact arithmetic over Z_q and the number-theoretic kernel.
 *
 * Factorization by trial division, Jordan totients, inverses, primitive
 * roots with full discrete-log tables, multiplicative characters (with the
 * convention chi(0) = 0), the naive additive Fourier transform and balanced
 * functions. Integer results are exact; only character values and Fourier
 * coefficients are floating point.
 */

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <memory>
#include <numbers>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "zqlab/error.hpp"

namespace zqlab {

using Residue = std::int64_t;
using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;

// ---------------------------------------------------------------------------
// Checked integer helpers
// ---------------------------------------------------------------------------

inline std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
    std::uint64_t out = 0;
    if (__builtin_mul_overflow(a, b, &out)) fail(ErrorCode::too_large, "64-bit overflow in product");
    return out;
}

inline std::uint64_t checked_pow(std::uint64_t base, unsigned exp) {
    std::uint64_t out = 1;
    for (unsigned i = 0; i < exp; ++i) out = checked_mul(out, base);
    return out;
}

inline Residue mod_reduce(std::int64_t x, Residue q) {
    x %= q;
    return x < 0 ? x + q : x;
}

inline Residue mul_mod(Residue a, Residue b, Residue q) {
    return static_cast<Residue>((static_cast<__int128>(a) * b) % q);
}

inline Residue pow_mod(Residue base, std::uint64_t exp, Residue q) {
    Residue result = 1 % q;
    base = mod_reduce(base, q);
    while (exp > 0) {
        if (exp & 1U) result = mul_mod(result, base, q);
        base = mul_mod(base, base, q);
        exp >>= 1U;
    }
    return result;
}

inline bool is_prime(std::int64_t n) {
    if (n < 2) return false;
    if (n % 2 == 0) return n == 2;
    for (std::int64_t d = 3; d <= n / d; d += 2)
        if (n % d == 0) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Modulus
// ---------------------------------------------------------------------------

struct PrimePower {
    std::int64_t prime;
    unsigned exponent;

    friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// A modulus q >= 2 together with its verified factorization.
class Modulus {
public:
    explicit Modulus(std::int64_t q) : q_(q) {
        require(q >= 2, ErrorCode::invalid_modulus, "modulus must be >= 2, got " + std::to_string(q));
        std::int64_t rest = q;
        for (std::int64_t p = 2; p <= rest / p; ++p) {
            if (rest % p != 0) continue;
            unsigned e = 0;
            while (rest % p == 0) {
                rest /= p;
                ++e;
            }
            factors_.push_back({p, e});
        }
        if (rest > 1) factors_.push_back({rest, 1});
    }

    std::int64_t value() const noexcept { return q_; }
    const std::vector<PrimePower>& factors() const noexcept { return factors_; }
    std::int64_t least_prime() const noexcept { return factors_.front().prime; }

    /// Number of distinct prime divisors.
    std::size_t omega() const noexcept { return factors_.size(); }

    /// Number of divisors.
    std::uint64_t tau() const noexcept {
        std::uint64_t t = 1;
        for (const auto& f : factors_) t *= f.exponent + 1;
        return t;
    }

    bool is_prime() const noexcept { return factors_.size() == 1 && factors_[0].exponent == 1; }

    Residue reduce(std::int64_t x) const noexcept { return mod_reduce(x, q_); }

    bool is_unit(Residue a) const noexcept { return std::gcd(mod_reduce(a, q_), q_) == 1; }

    friend bool operator==(const Modulus& a, const Modulus& b) noexcept { return a.q_ == b.q_; }

private:
    std::int64_t q_;
    std::vector<PrimePower> factors_;
};

inline Modulus factorize(std::int64_t q) { return Modulus(q); }

// ---------------------------------------------------------------------------
// Totients and inverses
// ---------------------------------------------------------------------------

/// J_k(q) = q^k prod_{p | q} (1 - p^{-k}), computed as prod p^{k(e-1)} (p^k - 1).
inline std::uint64_t jordan_totient(unsigned k, const Modulus& q) {
    require(k >= 1, ErrorCode::invalid_argument, "jordan_totient needs k >= 1");
    std::uint64_t out = 1;
    for (const auto& [p, e] : q.factors()) {
        const auto pk = checked_pow(static_cast<std::uint64_t>(p), k);
        out = checked_mul(out, checked_pow(pk, e - 1));
        out = checked_mul(out, pk - 1);
    }
    return out;
}

inline std::uint64_t jordan_totient(unsigned k, std::int64_t n) {
    require(n >= 1, ErrorCode::invalid_argument, "jordan_totient needs n >= 1");
    if (n == 1) return 1;
    return jordan_totient(k, Modulus(n));
}

inline std::uint64_t euler_phi(const Modulus& q) { return jordan_totient(1, q); }

/// Multiplicative inverse of a modulo q, or nullopt when gcd(a, q) != 1.
inline std::optional<Residue> inv_mod(Residue a, std::int64_t q) {
    std::int64_t r0 = q, r1 = mod_reduce(a, q);
    std::int64_t s0 = 0, s1 = 1;
    while (r1 != 0) {
        const std::int64_t t = r0 / r1;
        std::tie(r0, r1) = std::pair{r1, r0 - t * r1};
        std::tie(s0, s1) = std::pair{s1, s0 - t * s1};
    }
    if (r0 != 1) return std::nullopt;
    return mod_reduce(s0, q);
}

inline std::optional<Residue> inv_mod(Residue a, const Modulus& q) { return inv_mod(a, q.value()); }

// ---------------------------------------------------------------------------
// Primitive roots and discrete logs
// ---------------------------------------------------------------------------

/// Smallest generator of F_p^*.
inline Residue primitive_root(std::int64_t p) {
    require(p >= 3 && is_prime(p), ErrorCode::invalid_argument,
            "primitive_root needs an odd prime, got " + std::to_string(p));
    const Modulus group_order(p - 1);
    for (Residue g = 2; g < p; ++g) {
        bool generates = true;
        for (const auto& f : group_order.factors()) {
            if (pow_mod(g, static_cast<std::uint64_t>((p - 1) / f.prime), p) == 1) {
                generates = false;
                break;
            }
        }
        if (generates) return g;
    }
    fail(ErrorCode::invalid_argument, "no primitive root found");  // unreachable for primes
}

/// Full discrete-log table: log[x] = e with g^e = x for every x in [1, p).
class DlogTable {
public:
    DlogTable(std::int64_t p, Residue g) : p_(p), g_(g), log_(static_cast<std::size_t>(p), 0) {
        require(p >= 3 && is_prime(p), ErrorCode::invalid_argument, "dlog table needs an odd prime");
        Residue x = 1;
        for (std::int64_t e = 0; e < p - 1; ++e) {
            if (e > 0 && x == 1) fail(ErrorCode::invalid_argument, "g is not a primitive root");
            log_[static_cast<std::size_t>(x)] = e;
            x = mul_mod(x, g, p);
        }
    }

    std::int64_t prime() const noexcept { return p_; }
    Residue generator() const noexcept { return g_; }

    /// Exponent of x != 0; nullopt for x == 0.
    std::optional<std::int64_t> at(Residue x) const {
        x = mod_reduce(x, p_);
        if (x == 0) return std::nullopt;
        return log_[static_cast<std::size_t>(x)];
    }

private:
    std::int64_t p_;
    Residue g_;
    std::vector<std::int64_t> log_;
};

inline DlogTable dlog_table(std::int64_t p, Residue g) { return DlogTable(p, g); }

// ---------------------------------------------------------------------------
// Multiplicative characters
// ---------------------------------------------------------------------------

/// chi_k(g^e) = exp(2 pi i k e / (p - 1)), chi_k(0) = 0.
class Character {
public:
    Character(std::int64_t p, std::int64_t index) : Character(std::make_shared<DlogTable>(p, primitive_root(p)), index) {}

    Character(std::shared_ptr<const DlogTable> table, std::int64_t index)
        : table_(std::move(table)), index_(mod_reduce(index, table_->prime() - 1)) {
        const std::int64_t p = table_->prime();
        values_.assign(static_cast<std::size_t>(p), Complex{0.0, 0.0});
        for (Residue x = 1; x < p; ++x) {
            const auto e = *table_->at(x);
            // Reduce k*e exactly before going to floating point.
            const auto phase = static_cast<double>(mul_mod(index_, e, p - 1)) / static_cast<double>(p - 1);
            values_[static_cast<std::size_t>(x)] = std::polar(1.0, 2.0 * std::numbers::pi * phase);
        }
        values_[1] = Complex{1.0, 0.0};
    }

    static Character legendre(std::int64_t p) { return Character(p, (p - 1) / 2); }

    std::int64_t modulus() const noexcept { return table_->prime(); }
    Residue generator() const noexcept { return table_->generator(); }
    std::int64_t index() const noexcept { return index_; }
    std::int64_t order() const noexcept {
        return (table_->prime() - 1) / std::gcd(index_, table_->prime() - 1);
    }
    bool is_principal() const noexcept { return index_ == 0; }

    Complex operator()(Residue x) const noexcept {
        return values_[static_cast<std::size_t>(mod_reduce(x, table_->prime()))];
    }

    const std::shared_ptr<const DlogTable>& table() const noexcept { return table_; }

private:
    std::shared_ptr<const DlogTable> table_;
    std::int64_t index_;
    ComplexVector values_;
};

inline Complex char_eval(const Character& chi, Residue x) { return chi(x); }

/// All p - 1 characters mod p sharing one discrete-log table.
inline std::vector<Character> all_characters(std::int64_t p) {
    auto table = std::make_shared<const DlogTable>(p, primitive_root(p));
    std::vector<Character> out;
    out.reserve(static_cast<std::size_t>(p - 1));
    for (std::int64_t k = 0; k < p - 1; ++k) out.emplace_back(table, k);
    return out;
}

// ---------------------------------------------------------------------------
// Fourier transform and balanced functions
// ---------------------------------------------------------------------------

inline void require_finite(std::span<const Complex> v) {
    for (const auto& z : v)
        require(std::isfinite(z.real()) && std::isfinite(z.imag()), ErrorCode::invalid_argument,
                "vector entry is not finite");
}

/// e(t/q) for t in [0, q), indexed by t so products t*x only need reducing.
inline ComplexVector roots_of_unity(std::int64_t q) {
    ComplexVector w(static_cast<std::size_t>(q));
    for (std::int64_t t = 0; t < q; ++t)
        w[static_cast<std::size_t>(t)] = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(t) / static_cast<double>(q));
    return w;
}

/// fhat(t) = sum_x f(x) e(tx/q), naive O(q^2).
inline ComplexVector dft(std::span<const Complex> f) {
    const auto q = static_cast<std::int64_t>(f.size());
    require(q >= 1, ErrorCode::invalid_argument, "dft of empty vector");
    require_finite(f);
    const auto w = roots_of_unity(q);
    ComplexVector out(f.size());
    for (std::int64_t t = 0; t < q; ++t) {
        Complex acc{0.0, 0.0};
        for (std::int64_t x = 0; x < q; ++x) acc += f[static_cast<std::size_t>(x)] * w[static_cast<std::size_t>((t * x) % q)];
        out[static_cast<std::size_t>(t)] = acc;
    }
    return out;
}

/// f(x) = q^{-1} sum_t fhat(t) e(-tx/q).
inline ComplexVector inverse_dft(std::span<const Complex> fhat) {
    const auto q = static_cast<std::int64_t>(fhat.size());
    require(q >= 1, ErrorCode::invalid_argument, "inverse_dft of empty vector");
    require_finite(fhat);
    const auto w = roots_of_unity(q);
    ComplexVector out(fhat.size());
    for (std::int64_t x = 0; x < q; ++x) {
        Complex acc{0.0, 0.0};
        for (std::int64_t t = 0; t < q; ++t)
            acc += fhat[static_cast<std::size_t>(t)] * std::conj(w[static_cast<std::size_t>((t * x) % q)]);
        out[static_cast<std::size_t>(x)] = acc / static_cast<double>(q);
    }
    return out;
}

/// f(x) - (sum f) / |G|.
inline ComplexVector balanced(std::span<const Complex> f, std::size_t group_size) {
    require(group_size == f.size() && group_size > 0, ErrorCode::invalid_argument,
            "balanced: group size must equal the vector length");
    require_finite(f);
    Complex total{0.0, 0.0};
    for (const auto& z : f) total += z;
    const Complex mean = total / static_cast<double>(group_size);
    ComplexVector out(f.begin(), f.end());
    for (auto& z : out) z -= mean;
    return out;
}

}  // namespace zqlab

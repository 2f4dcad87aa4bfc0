#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "support.hpp"
#include "zqlab/charsums.hpp"

using namespace zqlab;

namespace {

Complex disk(std::mt19937_64& gen) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    return std::polar(std::sqrt(u(gen)), 2.0 * std::numbers::pi * u(gen));
}

PointSet weighted(std::mt19937_64& gen, std::int64_t p, std::size_t k, Residue lo = 0) {
    std::vector<Residue> all;
    for (Residue x = lo; x < p; ++x) all.push_back(x);
    std::shuffle(all.begin(), all.end(), gen);
    all.resize(std::min(k, all.size()));
    ComplexVector w;
    for (std::size_t i = 0; i < all.size(); ++i) w.push_back(disk(gen));
    return PointSet::scalars(Modulus(p), all, w);
}

std::vector<Residue> field(std::int64_t p, Residue lo = 0) {
    std::vector<Residue> v;
    for (Residue x = lo; x < p; ++x) v.push_back(x);
    return v;
}

MatrixFamily random_family(std::mt19937_64& gen, std::int64_t p, std::size_t k) {
    auto all = enumerate_gl2(p);
    std::shuffle(all.begin(), all.end(), gen);
    all.resize(k);
    return MatrixFamily(p, all);
}

oracle::M2 as_array(const Mat2& m) { return {m.a, m.b, m.c, m.d}; }

}  // namespace

TEST(MatrixFamily, ReducesSortsAndRejectsSingular) {
    const MatrixFamily f(5, {{6, 0, 0, 1}, {1, 0, 0, 1}, {1, 1, 0, 1}});
    EXPECT_EQ(f.size(), 2u);
    EXPECT_ZQ_ERROR(MatrixFamily(5, {{1, 2, 2, 4}}), ErrorCode::invalid_argument);
    EXPECT_ZQ_ERROR(MatrixFamily(6, {{1, 0, 0, 1}}), ErrorCode::invalid_argument);
}

TEST(Kloosterman, Examples) {
    for (std::int64_t p : {7, 11, 13}) {
        for (const auto& chi : all_characters(p)) {
            if (chi.is_principal()) continue;
            EXPECT_LT(std::abs(kloosterman(chi, 0, 0)), 1e-12);
        }
    }
    EXPECT_NEAR(std::abs(kloosterman(Character::legendre(7), 1, 0)), std::sqrt(7.0), 1e-12);
    EXPECT_NEAR(std::abs(kloosterman(Character::legendre(7), 1, 0)), 2.64575131106459, 1e-12);
}

TEST(Kloosterman, ClassicalSumsFrozen) {
    const std::vector<std::pair<std::int64_t, double>> cases = {{7, 2.048917339522305}, {11, -2.3578722628705084}, {13, 5.2595340479050074}};
    for (auto [p, want] : cases) {
        const auto k = kloosterman(Character(p, 0), 1, 1);
        EXPECT_NEAR(k.real(), want, 1e-12);
        EXPECT_NEAR(k.imag(), 0.0, 1e-12);
        EXPECT_LE(std::abs(k), 2.0 * std::sqrt(static_cast<double>(p)));
    }
}

TEST(Kloosterman, GaussSumModulus) {
    for (std::int64_t p : {7, 11, 13, 17})
        for (const auto& chi : all_characters(p)) {
            if (chi.is_principal()) continue;
            for (Residue n = 1; n < p; ++n) EXPECT_NEAR(std::abs(kloosterman(chi, n, 0)), std::sqrt(static_cast<double>(p)), 1e-8);
        }
}

TEST(Kloosterman, MatchesPowerLoopOracleAndTable) {
    for (std::int64_t p : {5, 7, 11}) {
        const auto g = oracle::smallest_primitive_root(p);
        for (const auto& chi : all_characters(p)) {
            const auto table = kloosterman_table(chi);
            for (Residue n = 0; n < p; ++n)
                for (Residue m = 0; m < p; ++m) {
                    const auto want = oracle::kloosterman(chi.index(), g, p, n, m);
                    ASSERT_LT(std::abs(kloosterman(chi, n, m) - want), 1e-10);
                    ASSERT_LT(std::abs(table[static_cast<std::size_t>(n)][static_cast<std::size_t>(m)] - want), 1e-10);
                }
        }
    }
}

TEST(Kloosterman, WeilBoundForNonzeroArguments) {
    for (std::int64_t p : {7, 11, 13, 17, 19})
        for (const auto& chi : all_characters(p))
            for (Residue n = 1; n < p; ++n)
                for (Residue m = 1; m < p; ++m)
                    ASSERT_LE(std::abs(kloosterman(chi, n, m)), 2.0 * std::sqrt(static_cast<double>(p)) + 1e-9);
}

TEST(Bilinear, Impulses) {
    const std::int64_t p = 11;
    const Character chi(p, 3);
    for (Residue n0 : {0, 2, 7})
        for (Residue m0 : {0, 5}) {
            ComplexVector a(p, 0.0), b(p, 0.0);
            a[static_cast<std::size_t>(n0)] = 1.0;
            b[static_cast<std::size_t>(m0)] = 1.0;
            const auto r = bilinear_form(chi, a, b);
            EXPECT_LT(std::abs(r.direct - kloosterman(chi, n0, m0)), 1e-12);
            EXPECT_LT(std::abs(r.via_table - r.direct), 1e-12);
            EXPECT_LT(std::abs(r.via_fourier - r.direct), 1e-10);
        }
    const ComplexVector zero(p, 0.0);
    const auto r = bilinear_form(chi, zero, zero);
    EXPECT_EQ(r.direct, Complex(0, 0));
    EXPECT_EQ(r.rel_diff(), 0.0);
}

TEST(Bilinear, DualPathAgreement) {
    std::mt19937_64 gen(21);
    for (std::int64_t p = 3; p <= 31; ++p) {
        if (!is_prime(p)) continue;
        for (const auto& chi : all_characters(p)) {
            ComplexVector a(p), b(p);
            for (auto& z : a) z = disk(gen);
            for (auto& z : b) z = disk(gen);
            const auto r = bilinear_form(chi, a, b);
            EXPECT_LT(r.rel_diff(), 1e-6) << p << " " << chi.index();
            EXPECT_LT(std::abs(r.via_fourier - r.direct), 1e-6 * std::max(1.0, std::abs(r.direct)));
        }
    }
}

TEST(Bilinear, RejectsLengthMismatch) {
    const Character chi(7, 1);
    const ComplexVector a(7, 0.0), b(5, 0.0);
    EXPECT_ZQ_ERROR(bilinear_form(chi, a, b), ErrorCode::invalid_argument);
}

TEST(Bilinear, ComparisonTerms) {
    const std::int64_t p = 13;
    ComplexVector a(p, 0.0), b(p, 0.0);
    for (int i = 1; i <= 4; ++i) a[static_cast<std::size_t>(i)] = 1.0;
    for (int i = 1; i <= 3; ++i) b[static_cast<std::size_t>(i)] = 1.0;
    const auto c = bilinear_comparison(a, b, 4, 3);
    EXPECT_DOUBLE_EQ(c.alpha_l1, 4.0);
    EXPECT_DOUBLE_EQ(c.alpha_l2, 2.0);
    EXPECT_NEAR(c.beta_l2, std::sqrt(3.0), 1e-15);
    EXPECT_NEAR(c.trivial, 2.0 * std::sqrt(3.0) * 13.0, 1e-12);
    double s = 0;
    for (std::int64_t t = 0; t < p; ++t) {
        Complex h = 0;
        for (int x = 1; x <= 4; ++x) h += oracle::e(t * x, p);
        s += std::pow(std::abs(h), 4.0 / 3.0);
    }
    EXPECT_NEAR(c.alpha_hat_l43, std::pow(s, 0.75), 1e-9);
    const double tail = std::sqrt(2.0 * 4.0) * std::pow(13.0, 0.75);
    EXPECT_NEAR(c.nm1_rhs, std::sqrt(3.0) * (c.alpha_hat_l43 * std::pow(12.0, 7.0 / 48.0) * std::pow(13.0, 23.0 / 24.0) + tail), 1e-9);
    EXPECT_EQ(c.nm2_condition, 144.0 * std::pow(c.alpha_hat_l43, 12) < 13.0 * std::pow(2.0, 12));
}

TEST(Hyperbola, PrincipalCharacterCountsSolutions) {
    std::mt19937_64 gen(1);
    const std::int64_t p = 11;
    const Character chi(p, 0);
    const auto a = PointSet::scalars(Modulus(p), {1, 2, 3, 7});
    const auto b = PointSet::scalars(Modulus(p), {0, 4, 9});
    const auto x = PointSet::scalars(Modulus(p), {0, 1, 5});
    const auto y = PointSet::scalars(Modulus(p), {2, 3, 6, 10});
    const auto r = hyperbola_sum(chi, a, b, x, y);
    EXPECT_NEAR(r.sum.real(), static_cast<double>(r.solutions), 1e-12);
    EXPECT_NEAR(r.sum.imag(), 0.0, 1e-12);
    std::uint64_t count = 0;
    for (auto av : a.values())
        for (auto xv : x.values())
            for (auto bv : b.values())
                for (auto yv : y.values()) count += oracle::md((av + xv) * (bv + yv), p) == 1;
    EXPECT_EQ(r.solutions, count);
    EXPECT_NEAR(r.trivial_bound, std::sqrt(12.0) * 12.0, 1e-12);
}

TEST(Hyperbola, FullFieldCancelsForNonPrincipal) {
    for (std::int64_t p : {7, 11}) {
        const auto all = PointSet::scalars(Modulus(p), field(p));
        for (const auto& chi : all_characters(p)) {
            if (chi.is_principal()) continue;
            EXPECT_LT(std::abs(hyperbola_sum(chi, all, all, all, all).sum), 1e-9);
        }
    }
}

TEST(Hyperbola, MatchesQuadrupleLoop) {
    std::mt19937_64 gen(99);
    for (std::int64_t p : {7, 11, 13}) {
        const auto g = oracle::smallest_primitive_root(p);
        for (int t = 0; t < 6; ++t) {
            const Character chi(p, static_cast<std::int64_t>(gen() % static_cast<std::uint64_t>(p - 1)));
            const auto a = weighted(gen, p, 1 + gen() % 6);
            const auto b = weighted(gen, p, 1 + gen() % 6);
            const auto x = PointSet::scalars(Modulus(p), {0, 1, 2, 3});
            const auto y = PointSet::scalars(Modulus(p), {4, 5, 6});
            const auto want = oracle::hyperbola(chi.index(), g, p, a.values(), *a.weights(), b.values(), *b.weights(), x.values(), y.values());
            EXPECT_LT(std::abs(hyperbola_sum(chi, a, b, x, y).sum - want), 1e-10);
        }
    }
}

TEST(Hyperbola, MatrixEncodingReproducesTheSum) {
    // g_{a,b} x = -b + 1/(a + x), so (a+x)(b+y) = 1 iff g_{a,b} x = y.
    std::mt19937_64 gen(4);
    for (std::int64_t p : {7, 11}) {
        for (Residue a = 0; a < p; ++a)
            for (Residue b = 0; b < p; ++b) {
                const auto g = hyperbola_matrix(a, b, p);
                EXPECT_EQ(determinant(g, p), mod_reduce(-1, p));
                for (Residue x = 0; x < p; ++x) {
                    const auto den = mod_reduce(g.c * x + g.d, p);
                    if (den == 0) {
                        EXPECT_EQ(mod_reduce(a + x, p), 0);
                        continue;
                    }
                    const auto img = mod_reduce((g.a * x + g.b) * *inv_mod(den, p), p);
                    EXPECT_EQ(mod_reduce((a + x) * (b + img), p), 1);
                }
            }
    }
    // With unit weights on A, B and chi(gamma x + delta) = chi(a + x) the
    // family sum over X x Y is the hyperbola sum.
    const std::int64_t p = 11;
    const auto a = PointSet::scalars(Modulus(p), {1, 4, 6});
    const auto b = PointSet::scalars(Modulus(p), {0, 2, 9, 10});
    const auto x = PointSet::scalars(Modulus(p), {0, 3, 5, 8});
    const auto y = PointSet::scalars(Modulus(p), {1, 2, 7});
    for (const auto& chi : all_characters(p)) {
        const auto fam = hyperbola_family(a, b);
        ASSERT_EQ(fam.size(), a.size() * b.size());
        EXPECT_LT(std::abs(group_twisted_sum(chi, fam, x, y) - hyperbola_sum(chi, a, b, x, y).sum), 1e-10);
    }
}

TEST(GroupTwistedSum, IdentityFamily) {
    std::mt19937_64 gen(6);
    const std::int64_t p = 13;
    const MatrixFamily id(p, {{1, 0, 0, 1}});
    const auto a = weighted(gen, p, 8);
    const auto b = weighted(gen, p, 8);
    Complex want = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (auto j = b.index_of(a.elements()[i])) want += a.weight(i) * b.weight(*j);
    EXPECT_LT(std::abs(group_twisted_sum(Character(p, 0), id, a, b) - want), 1e-12);
    EXPECT_LT(std::abs(group_twisted_sum(Character(p, 5), id, a, b) - want), 1e-12);
}

TEST(ProjectiveLift, Examples) {
    std::mt19937_64 gen(8);
    const std::int64_t p = 7;
    const auto g = random_family(gen, p, 10);
    const auto b = weighted(gen, p, 5);
    const auto empty = projective_lift_check(Character::legendre(p), g, PointSet(Modulus(p), 1), b);
    EXPECT_EQ(empty.residual, 0.0);
    const auto a = weighted(gen, p, 5);
    EXPECT_LT(projective_lift_check(Character::legendre(p), g, a, b).residual, 1e-8);
    EXPECT_LT(projective_lift_check(Character(p, 0), g, a, b).residual, 1e-8);
}

TEST(ProjectiveLift, SeededInstances) {
    std::mt19937_64 gen(2718);
    for (std::int64_t p : {7, 11, 13})
        for (int t = 0; t < 17; ++t) {
            const Character chi(p, t % 3 == 0 ? 0 : 1 + static_cast<std::int64_t>(gen() % static_cast<std::uint64_t>(p - 2)));
            const auto g = random_family(gen, p, 1 + gen() % 30);
            const auto a = weighted(gen, p, 1 + gen() % p);
            const auto b = weighted(gen, p, 1 + gen() % p);
            const auto r = projective_lift_check(chi, g, a, b);
            EXPECT_TRUE(r.holds()) << r.residual << " > " << r.tolerance;
        }
}

TEST(Energy, Examples) {
    const MatrixFamily one(5, {{2, 1, 1, 1}});
    EXPECT_EQ(energy_T2k_raw(one, 2), BigInt(1));
    const MatrixFamily whole(3, enumerate_gl2(3));
    EXPECT_NEAR(energy_T2k(whole, 2, true), 0.0, 1e-6 * energy_T2k(whole, 2, false));
}

TEST(Energy, FrozenSmallFamilies) {
    const MatrixFamily g3(5, {{1, 0, 0, 1}, {1, 1, 0, 1}, {0, 4, 1, 0}});
    EXPECT_EQ(energy_T2k_raw(g3, 2), BigInt(577));
    EXPECT_EQ(energy_T2k_raw(g3, 3), BigInt(28677));
    // The unipotent subgroup of order 5 gives |H|^{4k-1}.
    const MatrixFamily h(5, {{1, 0, 0, 1}, {1, 1, 0, 1}, {1, 2, 0, 1}, {1, 3, 0, 1}, {1, 4, 0, 1}});
    EXPECT_EQ(energy_T2k_raw(h, 2), BigInt(78125));
    EXPECT_NEAR(energy_T2k(h, 2, true), 78125.0 - std::pow(5.0, 8) / 480.0, 1e-6);
}

TEST(Energy, ConvolutionMatchesEnumeration) {
    std::mt19937_64 gen(314);
    for (std::size_t size = 1; size <= 12; ++size) {
        const auto g = random_family(gen, 5, size);
        std::vector<oracle::M2> arr;
        for (const auto& m : g.elements()) arr.push_back(as_array(m));
        const auto conv = energy_T2k_raw(g, 2);
        EXPECT_EQ(conv, energy_T2k_enumerate(g, 2));
        EXPECT_EQ(conv, BigInt(oracle::energy(arr, 2, 5)));
    }
    const auto g = random_family(gen, 5, 20);
    std::vector<oracle::M2> arr;
    for (const auto& m : g.elements()) arr.push_back(as_array(m));
    EXPECT_EQ(energy_T2k_raw(g, 2), BigInt(oracle::energy(arr, 2, 5)));
    const auto g6 = random_family(gen, 7, 6);
    arr.clear();
    for (const auto& m : g6.elements()) arr.push_back(as_array(m));
    EXPECT_EQ(energy_T2k_raw(g6, 3), BigInt(oracle::energy(arr, 3, 7)));
}

TEST(Energy, CapsAreEnforced) {
    std::mt19937_64 gen(5);
    const auto g = random_family(gen, 5, 20);
    EXPECT_ZQ_ERROR(energy_T2k_enumerate(g, 2, {1000}), ErrorCode::too_large);
    EXPECT_ZQ_ERROR(energy_T2k_raw(g, 3, {500}), ErrorCode::too_large);
    EXPECT_ZQ_ERROR(energy_T2k_raw(g, 0), ErrorCode::invalid_argument);
}

TEST(PropRhs, Examples) {
    EXPECT_EQ(prop_rhs(2, 0, 0, 50, 1000.0), 0.0);
    EXPECT_NEAR(prop_rhs(2, 10, 10, 50, 1000.0), std::sqrt(5000.0) * std::pow(1000.0, 1.0 / 16.0) + 10.0 * 50.0 * std::pow(10.0, -0.25), 1e-9);
    double prev = 0.0;
    for (double t : {0.0, 1.0, 10.0, 1e3, 1e6}) {
        const double v = prop_rhs(3, 7, 12, 30, t);
        EXPECT_GE(v, prev);
        prev = v;
    }
    EXPECT_ZQ_ERROR(prop_rhs(2, 1, 1, 1, -1.0), ErrorCode::invalid_argument);
}

TEST(IntersectionSum, Examples) {
    for (std::int64_t p : {7, 11, 101}) {
        const auto units = PointSet::scalars(Modulus(p), field(p, 1));
        for (std::int64_t k : {1, 2}) {
            const auto r = intersection_char_sum(Character(p, k), units, IntersectionVariant::multiplicative);
            EXPECT_LT(std::abs(r.sum), 1e-9);
            EXPECT_EQ(r.size, static_cast<std::size_t>(p - 1));
        }
        const auto one = intersection_char_sum(Character(p, 1), PointSet::scalars(Modulus(p), {1}), IntersectionVariant::multiplicative);
        EXPECT_LT(std::abs(one.sum - Complex{1, 0}), 1e-12);
        EXPECT_EQ(one.size, 1u);
    }
    EXPECT_ZQ_ERROR(intersection_char_sum(Character(7, 1), PointSet::scalars(Modulus(7), {0, 1}), IntersectionVariant::shifted),
                    ErrorCode::invalid_argument);
}

TEST(IntersectionSum, MatchesMembershipLoops) {
    std::mt19937_64 gen(55);
    const std::int64_t p = 101;
    const auto g = oracle::smallest_primitive_root(p);
    for (int t = 0; t < 10; ++t) {
        auto a = weighted(gen, p, 40, 1).without_weights();
        const auto vals = a.values();
        auto in_a = [&](std::int64_t x) { return std::find(vals.begin(), vals.end(), oracle::md(x, p)) != vals.end(); };
        Complex mult = 0, shifted = 0;
        std::size_t nm = 0, ns = 0;
        for (std::int64_t x = 1; x < p; ++x) {
            const auto xi = oracle::inverse(x, p);
            if (in_a(x) && in_a(xi)) mult += oracle::character(3, g, p, x), ++nm;
            // x in A^{-1} and x - 1 in A^{-1}
            if (in_a(xi) && x != 1 && in_a(oracle::inverse(x - 1, p))) shifted += oracle::character(3, g, p, x), ++ns;
        }
        const Character chi(p, 3);
        const auto rm = intersection_char_sum(chi, a, IntersectionVariant::multiplicative);
        const auto rs = intersection_char_sum(chi, a, IntersectionVariant::shifted);
        EXPECT_EQ(rm.size, nm);
        EXPECT_EQ(rs.size, ns);
        EXPECT_LT(std::abs(rm.sum - mult), 1e-9);
        EXPECT_LT(std::abs(rs.sum - shifted), 1e-9);
        EXPECT_DOUBLE_EQ(rm.comparison, 1600.0 / 101.0);
    }
}

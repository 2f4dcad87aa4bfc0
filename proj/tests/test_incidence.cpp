#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "support.hpp"
#include "zqlab/gl2.hpp"
#include "zqlab/incidence.hpp"
#include "zqlab/spectra.hpp"

using namespace zqlab;

namespace {

std::vector<Point> pick(std::mt19937_64& gen, const std::vector<Point>& domain, std::size_t k) {
    std::vector<Point> d = domain;
    std::shuffle(d.begin(), d.end(), gen);
    d.resize(std::min(k, d.size()));
    return d;
}

Rational theta_by_summation(std::int64_t q, unsigned n) {
    // Sum over every exponent vector (r_1..r_t) directly.
    const Modulus mod(q);
    const auto& f = mod.factors();
    std::vector<unsigned> r(f.size(), 0);
    Rational total = 0;
    for (;;) {
        Rational term = 1;
        for (std::size_t j = 0; j < f.size(); ++j)
            for (unsigned i = 0; i < r[j] * (n - 2); ++i) term /= f[j].prime;
        total += term;
        std::size_t j = 0;
        while (j < f.size() && r[j] == f[j].exponent) r[j++] = 0;
        if (j == f.size()) break;
        ++r[j];
    }
    return total;
}

std::vector<Point> as_points(const PointSet& s) { return s.elements(); }

}  // namespace

TEST(CountDot, FullCoprimeFamilyModThree) {
    const Modulus q(3);
    const PointSet all(q, 2, coprime_tuples(q, 2));
    ASSERT_EQ(all.size(), 8u);
    EXPECT_EQ(count_dot(all, all, 1), 24u);
    EXPECT_EQ(dot_main_term(8, 8, q, 2), Rational(24));
    EXPECT_EQ(count_dot(PointSet(q, 2), all, 1), 0u);
}

TEST(CountDot, SmallFrozenInstance) {
    const Modulus q(7);
    const PointSet a(q, 2, {{1, 2}, {3, 4}, {5, 6}, {0, 1}, {2, 0}});
    const PointSet b(q, 2, {{1, 1}, {2, 3}, {4, 5}, {6, 0}, {3, 3}, {1, 0}});
    EXPECT_EQ(count_dot(a, b, 3), 4u);
}

TEST(CountDot, RejectsNonUnitLambda) {
    const Modulus q(6);
    const PointSet a(q, 2, {{1, 0}});
    EXPECT_ZQ_ERROR(count_dot(a, a, 0), ErrorCode::invalid_lambda);
    EXPECT_ZQ_ERROR(count_dot(a, a, 3), ErrorCode::invalid_lambda);
    EXPECT_ZQ_ERROR(count_dot(a, PointSet(Modulus(7), 2, {{1, 0}}), 1), ErrorCode::invalid_argument);
}

TEST(CountDot, MatchesCharacterExpansion) {
    std::mt19937_64 gen(41);
    for (std::int64_t q = 3; q <= 31; ++q) {
        const Modulus mod(q);
        for (unsigned n : {2u, 3u}) {
            if (n == 3 && q > 13) continue;
            const auto domain = coprime_tuples(mod, n);
            const auto A = pick(gen, domain, 1 + gen() % 25);
            const auto B = pick(gen, domain, 1 + gen() % 25);
            const PointSet a(mod, n, A), b(mod, n, B);
            for (Residue l = 1; l < q; ++l) {
                if (!mod.is_unit(l)) continue;
                const auto got = count_dot(a, b, l);
                const double expansion = oracle::count_dot_characters(A, B, l, q);
                ASSERT_LT(std::abs(expansion - std::round(expansion)), 1e-6);
                ASSERT_EQ(static_cast<double>(got), std::round(expansion)) << "q=" << q << " n=" << n << " l=" << l;
                ASSERT_EQ(static_cast<std::int64_t>(got), oracle::count_dot(A, B, l, q));
            }
        }
    }
}

TEST(CountDot, SumOverAllLambdaIsEveryPair) {
    std::mt19937_64 gen(7);
    for (std::int64_t q : {5, 9, 12, 15}) {
        const Modulus mod(q);
        const auto domain = coprime_tuples(mod, 2);
        const PointSet a(mod, 2, pick(gen, domain, 20)), b(mod, 2, pick(gen, domain, 17));
        std::int64_t total = 0;
        for (Residue l = 0; l < q; ++l)
            total += mod.is_unit(l) ? static_cast<std::int64_t>(count_dot(a, b, l)) : oracle::count_dot(as_points(a), as_points(b), l, q);
        EXPECT_EQ(total, static_cast<std::int64_t>(a.size() * b.size()));
    }
}

TEST(CountDot, InvariantUnderSignedPermutations) {
    std::mt19937_64 gen(19);
    for (std::int64_t q : {7, 9, 10}) {
        const Modulus mod(q);
        for (unsigned n : {2u, 3u}) {
            const auto domain = coprime_tuples(mod, n);
            const PointSet a(mod, n, pick(gen, domain, 25)), b(mod, n, pick(gen, domain, 25));
            const auto act = signed_permutation_action(q);
            for (const auto& g : all_signed_permutations(n)) {
                std::vector<Point> ga, gb;
                for (const auto& p : a.elements()) ga.push_back(*act(g, p));
                for (const auto& p : b.elements()) gb.push_back(*act(g, p));
                for (Residue l : {Residue{1}, q - 1})
                    ASSERT_EQ(count_dot(PointSet(mod, n, ga), PointSet(mod, n, gb), l), count_dot(a, b, l));
            }
        }
    }
}

TEST(CountDot, ThreadCountDoesNotChangeResult) {
    const Modulus q(11);
    const PointSet all(q, 2, coprime_tuples(q, 2));
    const auto one = count_dot(all, all, 4, 1);
    for (unsigned t : {2u, 3u, 8u, 200u}) EXPECT_EQ(count_dot(all, all, 4, t), one);
}

TEST(DotMainTerm, Examples) {
    EXPECT_EQ(dot_main_term(1, 1, Modulus(15), 2), Rational(5, 64));
    const auto a = make_rational(15) / (225 * (1 - make_rational(1, 9)) * (1 - make_rational(1, 25)));
    EXPECT_EQ(dot_main_term(1, 1, Modulus(15), 2), a);
    for (std::int64_t q : {4, 7, 12, 30})
        for (unsigned n : {2u, 3u}) {
            const auto j = jordan_totient(n, Modulus(q));
            EXPECT_EQ(dot_main_term(j, j, Modulus(q), n), Rational(BigInt(j) * boost::multiprecision::pow(BigInt(q), n - 1)));
        }
}

TEST(Theta, Examples) {
    EXPECT_EQ(theta(Modulus(12), 2), Rational(6));
    for (std::int64_t p : {3, 5, 7, 101}) EXPECT_EQ(theta(Modulus(p), 3), Rational(1) + Rational(1, p));
    EXPECT_EQ(theta(Modulus(12), 4), Rational(35, 24));
    EXPECT_ZQ_ERROR(theta(Modulus(12), 1), ErrorCode::invalid_argument);
}

TEST(Theta, MatchesDirectSummation) {
    for (std::int64_t q = 2; q <= 400; ++q)
        for (unsigned n : {2u, 3u, 4u, 5u}) ASSERT_EQ(theta(Modulus(q), n), theta_by_summation(q, n)) << q << " " << n;
}

TEST(DotBound, Examples) {
    EXPECT_EQ(dot_bound_rhs(Modulus(7), 2, 0, 0).value, 0.0);
    const auto b = dot_bound_rhs(Modulus(7), 2, 48, 48);
    EXPECT_NEAR(b.value, 2.0 * 7 * 48 * std::pow(2.0 / 7.0, 0.25), 1e-9);
    EXPECT_TRUE(b.hypothesis_ok);
    const auto w = dot_bound_rhs(Modulus(9), 2, 4, 4);
    EXPECT_FALSE(w.hypothesis_ok);
    EXPECT_FALSE(w.warning.empty());
}

TEST(CheckInequality, FullSetHasInfiniteSlack) {
    const Modulus q(3);
    const PointSet all(q, 2, coprime_tuples(q, 2));
    const auto r = check_inequality(IncidenceInstance::dot(all, all, 1));
    EXPECT_EQ(r.count, 24u);
    EXPECT_EQ(r.error_lhs, Rational(0));
    EXPECT_TRUE(std::isinf(r.slack));
    EXPECT_TRUE(r.holds());
    EXPECT_FALSE(r.hypothesis_ok);
}

TEST(CheckInequality, RandomDotInstancesHold) {
    std::mt19937_64 gen(2024);
    for (std::int64_t q : {5, 7, 11, 13, 25, 35}) {
        const Modulus mod(q);
        for (unsigned n : {2u, 3u}) {
            const auto domain = coprime_tuples(mod, n);
            for (int t = 0; t < 5; ++t) {
                const auto inst = IncidenceInstance::dot(PointSet(mod, n, pick(gen, domain, 1 + gen() % domain.size())),
                                                         PointSet(mod, n, pick(gen, domain, 1 + gen() % domain.size())), 1 + t % 4);
                const auto r = check_inequality(inst);
                EXPECT_GE(r.slack, 1.0) << "q=" << q << " n=" << n;
                EXPECT_EQ(r.error_lhs, abs(Rational(BigInt(r.count)) - r.main_term));
            }
        }
    }
}

TEST(CheckInequality, DotInstanceNeedsCoprimeTuples) {
    const Modulus q(9);
    EXPECT_ZQ_ERROR(IncidenceInstance::dot(PointSet(q, 2, {{3, 6}}), PointSet(q, 2, {{1, 0}}), 1), ErrorCode::invalid_argument);
    EXPECT_ZQ_ERROR(IncidenceInstance::dot(PointSet(q, 2, {{1, 0}}), PointSet(q, 2, {{1, 0}}), 3), ErrorCode::invalid_lambda);
}

TEST(CountDet, NonzeroVectorsModThreeAndFive) {
    for (auto [q, want] : {std::pair<std::int64_t, std::uint64_t>{3, 24}, {5, 120}}) {
        const Modulus mod(q);
        auto nonzero = all_tuples(mod, 2);
        nonzero.erase(nonzero.begin());
        const PointSet a(mod, 2, nonzero);
        EXPECT_EQ(count_det(a, a, 1, {1, 1}), want);
        EXPECT_EQ(want, static_cast<std::uint64_t>((q * q - 1) * q));
    }
    const Modulus q(3);
    EXPECT_EQ(count_det(PointSet(q, 2), PointSet(q, 2, {{1, 0}}), 1, {1, 1}), 0u);
}

TEST(CountDet, Errors) {
    const PointSet a9(Modulus(9), 2, {{1, 0}});
    EXPECT_ZQ_ERROR(count_det(a9, a9, 1, {1, 1}), ErrorCode::invalid_modulus);
    const PointSet a2(Modulus(2), 2, {{1, 0}});
    EXPECT_ZQ_ERROR(count_det(a2, a2, 1, {1, 1}), ErrorCode::invalid_modulus);
    const PointSet a(Modulus(5), 2, {{1, 0}});
    EXPECT_ZQ_ERROR(count_det(a, a, 0, {1, 1}), ErrorCode::invalid_lambda);
    EXPECT_ZQ_ERROR(count_det(a, a, 1, {2, 1}), ErrorCode::invalid_argument);
}

TEST(CountDet, MatchesExplicitDeterminant) {
    std::mt19937_64 gen(3);
    for (std::int64_t q : {3, 5, 7, 11}) {
        const Modulus mod(q);
        const auto domain = all_tuples(mod, 2);
        for (int t = 0; t < 10; ++t) {
            const auto A = pick(gen, domain, 1 + gen() % domain.size());
            const auto B = pick(gen, domain, 1 + gen() % domain.size());
            const Residue l = 1 + static_cast<Residue>(gen() % static_cast<std::uint64_t>(q - 1));
            ASSERT_EQ(static_cast<std::int64_t>(count_det(PointSet(mod, 2, A), PointSet(mod, 2, B), l, {1, 1})),
                      oracle::count_det2(A, B, l, q));
        }
    }
}

TEST(CountDet, HigherDimensionMatchesCofactorExpansion) {
    // d = 3 with n = 1, m = 2: det(a | b1 | b2) by the rule of Sarrus.
    const std::int64_t q = 5;
    const Modulus mod(q);
    std::mt19937_64 gen(12);
    const auto rows = pick(gen, all_tuples(mod, 3), 30);
    const auto cols = pick(gen, all_tuples(mod, 6), 60);
    std::uint64_t want = 0;
    for (const auto& a : rows)
        for (const auto& b : cols) {
            const std::int64_t m[3][3] = {{a[0], a[1], a[2]}, {b[0], b[1], b[2]}, {b[3], b[4], b[5]}};
            const std::int64_t det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                                     m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                                     m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
            want += oracle::md(det, q) == 2;
        }
    EXPECT_EQ(count_det(PointSet(mod, 3, rows), PointSet(mod, 6, cols), 2, {1, 2}), want);
}

TEST(CountDet, InvariantUnderSl2) {
    std::mt19937_64 gen(29);
    for (std::int64_t q : {3, 5, 7}) {
        const Modulus mod(q);
        const auto domain = all_tuples(mod, 2);
        const PointSet a(mod, 2, pick(gen, domain, 15)), b(mod, 2, pick(gen, domain, 20));
        const auto act = linear_action(q);
        for (const auto& g : enumerate_sl2(mod)) {
            std::vector<Point> ga, gb;
            for (const auto& p : a.elements()) ga.push_back(*act(g, p));
            for (const auto& p : b.elements()) gb.push_back(*act(g, p));
            for (Residue l : {1, 2}) ASSERT_EQ(count_det(PointSet(mod, 2, ga), PointSet(mod, 2, gb), l, {1, 1}), count_det(a, b, l, {1, 1}));
        }
    }
}

TEST(DetTerms, MainTermsAndBound) {
    const auto m = det_main_terms(8, 8, Modulus(3));
    EXPECT_EQ(m.over_q_minus_1, Rational(32));
    EXPECT_EQ(m.over_q, Rational(64, 3));
    EXPECT_NEAR(det_bound_rhs(Modulus(3), 2, 8, 8), std::pow(3.0, 0.75) * 8 + 64.0 / 9.0, 1e-12);
    EXPECT_EQ(det_exponent(2), 0.75);
    EXPECT_EQ(det_exponent(3), 3.0);
}

TEST(DetTerms, FamilySizeFormulaVersusTrueCount) {
    // The closed form and the count of nonzero vectors disagree for n = 1.
    EXPECT_EQ(det_family_size_formula(Modulus(3), 2, 1), Rational(6));
    EXPECT_EQ(independent_tuple_count(Modulus(3), 2, 1), BigInt(8));
    EXPECT_EQ(independent_tuples(Modulus(3), 1, 2).size(), 8u);
    EXPECT_EQ(independent_tuple_count(Modulus(5), 3, 2), BigInt((125 - 1) * (125 - 5)));
    EXPECT_EQ(independent_tuples(Modulus(5), 2, 3).size(), 124u * 120u);
}

TEST(DetTerms, RandomInstancesHold) {
    std::mt19937_64 gen(77);
    for (std::int64_t q : {3, 5, 7}) {
        const Modulus mod(q);
        const auto domain = independent_tuples(mod, 1, 2);
        for (int t = 0; t < 8; ++t) {
            const auto inst = IncidenceInstance::det(PointSet(mod, 2, pick(gen, domain, 1 + gen() % domain.size())),
                                                     PointSet(mod, 2, pick(gen, domain, 1 + gen() % domain.size())), 1 + t % (q - 1), {1, 1});
            const auto r = check_inequality(inst);
            EXPECT_GE(r.slack, 1.0);
            ASSERT_TRUE(r.alt_main_term.has_value());
            EXPECT_EQ(r.error_lhs, abs(Rational(BigInt(r.count)) - r.main_term) / 8);
        }
    }
}

TEST(CrossRatio, Examples) {
    EXPECT_EQ(cross_ratio(0, 1, 2, 3, 7), 6);
    for (Residue a = 0; a < 7; ++a)
        for (Residue b = 0; b < 7; ++b)
            for (Residue d = 0; d < 7; ++d) {
                const auto v = cross_ratio(a, b, a, d, 7);
                if (v) {
                    EXPECT_EQ(*v, 0);
                }
                EXPECT_EQ(cross_ratio(a, b, d, a, 7), std::nullopt);
            }
}

TEST(CrossRatio, FullPlaneCounts) {
    for (auto [q, l, want] : {std::tuple<std::int64_t, Residue, std::uint64_t>{7, 2, 168}, {5, 2, 40}, {11, 3, 880}}) {
        const Modulus mod(q);
        const PointSet all(mod, 2, all_tuples(mod, 2));
        EXPECT_EQ(count_crossratio(all, all, l), want);
        EXPECT_EQ(static_cast<std::int64_t>(want), oracle::count_crossratio(all.elements(), all.elements(), l, q));
    }
    const Modulus mod(7);
    EXPECT_EQ(count_crossratio(PointSet(mod, 2), PointSet(mod, 2, {{1, 2}}), 3), 0u);
}

TEST(CrossRatio, Errors) {
    const PointSet a(Modulus(7), 2, {{1, 2}});
    EXPECT_ZQ_ERROR(count_crossratio(a, a, 0), ErrorCode::invalid_lambda);
    EXPECT_ZQ_ERROR(count_crossratio(a, a, 8), ErrorCode::invalid_lambda);
    const PointSet b(Modulus(9), 2, {{1, 2}});
    EXPECT_ZQ_ERROR(count_crossratio(b, b, 2), ErrorCode::invalid_modulus);
}

TEST(CrossRatio, MatchesCrossMultipliedEquation) {
    std::mt19937_64 gen(5);
    for (std::int64_t q : {5, 7, 11, 13}) {
        const Modulus mod(q);
        const auto domain = all_tuples(mod, 2);
        for (int t = 0; t < 6; ++t) {
            const auto A = pick(gen, domain, 1 + gen() % 60);
            const auto B = pick(gen, domain, 1 + gen() % 60);
            const Residue l = 2 + static_cast<Residue>(gen() % static_cast<std::uint64_t>(q - 2));
            ASSERT_EQ(static_cast<std::int64_t>(count_crossratio(PointSet(mod, 2, A), PointSet(mod, 2, B), l)),
                      oracle::count_crossratio(A, B, l, q));
        }
    }
}

TEST(CrossRatio, InvariantUnderMobiusSl2) {
    std::mt19937_64 gen(31);
    for (std::int64_t q : {5, 7}) {
        const Modulus mod(q);
        const auto domain = all_tuples(mod, 2);
        const auto act = mobius_action(q);
        for (const auto& g : enumerate_sl2(mod)) {
            // Keep only elements whose image is finite.
            std::vector<Point> A, B, gA, gB;
            for (const auto& p : pick(gen, domain, 20))
                if (auto img = act(g, p)) A.push_back(p), gA.push_back(*img);
            for (const auto& p : pick(gen, domain, 20))
                if (auto img = act(g, p)) B.push_back(p), gB.push_back(*img);
            for (Residue l = 2; l < q; ++l)
                ASSERT_EQ(count_crossratio(PointSet(mod, 2, gA), PointSet(mod, 2, gB), l), count_crossratio(PointSet(mod, 2, A), PointSet(mod, 2, B), l));
        }
    }
}

TEST(CrossRatio, RandomInstancesHold) {
    std::mt19937_64 gen(11);
    const Modulus mod(11);
    const auto domain = all_tuples(mod, 2);
    for (int t = 0; t < 20; ++t) {
        const auto r = check_inequality(IncidenceInstance::crossratio(PointSet(mod, 2, pick(gen, domain, 30)),
                                                                      PointSet(mod, 2, pick(gen, domain, 30)), 2 + t % 9));
        EXPECT_GE(r.slack, 1.0);
        EXPECT_EQ(r.main_term, Rational(900, 11));
    }
}

TEST(Slack, Sentinels) {
    EXPECT_TRUE(std::isinf(compute_slack(Rational(0), 3.0)));
    EXPECT_DOUBLE_EQ(compute_slack(Rational(2), 3.0), 1.5);
}

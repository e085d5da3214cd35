#include "periods/relations.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace periods;

namespace {

RelationProblem zeta_problem(std::vector<std::vector<CompositionIndex>> terms, unsigned digits, long bound) {
    RelationProblem p;
    for (const auto& t : terms) {
        std::string s;
        for (const auto& idx : t) s += (s.empty() ? "" : "*") + idx.str();
        p.labels.push_back(s);
    }
    p.evaluate = zeta_products(std::move(terms));
    p.digits = digits;
    p.bound = bound;
    return p;
}

std::vector<Real> pi_pair(unsigned d) {
    ZetaEvaluator ev(d);
    WorkingPrecision wp(guarded_digits(d));
    Real pi = real_pi(guarded_digits(d));
    return {ev({2}).value, pi * pi};
}

Rational rat_det(std::vector<std::vector<Rational>> m) {
    Rational det = 1;
    std::size_t n = m.size();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && m[p][c] == 0) ++p;
        if (p == n) return 0;
        if (p != c) {
            std::swap(m[p], m[c]);
            det = -det;
        }
        det *= m[c][c];
        for (std::size_t r = c + 1; r < n; ++r) {
            Rational f = m[r][c] / m[c][c];
            for (std::size_t k = c; k < n; ++k) m[r][k] -= f * m[c][k];
        }
    }
    return det;
}

}  // namespace

TEST(Lll, ReducedBasisSatisfiesConditionsAndKeepsTheLattice) {
    std::mt19937 rng(17);
    std::uniform_int_distribution<int> d(-50, 50);
    for (int trial = 0; trial < 25; ++trial) {
        std::size_t n = 2 + rng() % 4;
        std::vector<IntVector> b;
        std::vector<std::vector<Rational>> before;
        do {
            b.assign(n, IntVector(n));
            before.assign(n, std::vector<Rational>(n));
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) before[i][j] = b[i][j] = d(rng) * (1 + (j == 0) * 1000);
        } while (rat_det(before) == 0);
        auto r = lll_reduce(b);
        std::vector<std::vector<Rational>> after(n, std::vector<Rational>(n));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) after[i][j] = r[i][j];
        EXPECT_EQ(abs(rat_det(after)), abs(rat_det(before)));

        // Gram-Schmidt from scratch
        std::vector<std::vector<Rational>> bs(n);
        std::vector<Rational> B(n);
        std::vector<std::vector<Rational>> mu(n, std::vector<Rational>(n));
        for (std::size_t i = 0; i < n; ++i) {
            bs[i] = after[i];
            for (std::size_t j = 0; j < i; ++j) {
                Rational dot = 0;
                for (std::size_t k = 0; k < n; ++k) dot += after[i][k] * bs[j][k];
                mu[i][j] = dot / B[j];
                for (std::size_t k = 0; k < n; ++k) bs[i][k] -= mu[i][j] * bs[j][k];
            }
            B[i] = 0;
            for (auto& x : bs[i]) B[i] += x * x;
        }
        for (std::size_t i = 1; i < n; ++i) {
            for (std::size_t j = 0; j < i; ++j) EXPECT_LE(abs(mu[i][j]), Rational(1, 2));
            EXPECT_GE(B[i], (Rational(3, 4) - mu[i][i - 1] * mu[i][i - 1]) * B[i - 1]);
        }
    }
}

TEST(FindRelation, ZetaTwoAndPiSquared) {
    RelationProblem p{{"zeta(2)", "pi^2"}, pi_pair, 60, 1000};
    auto r = find_relation(p);
    ASSERT_TRUE(r);
    EXPECT_EQ(r->coefficients, (IntVector{6, -1}));
    EXPECT_LT(r->verified_residual, pow10_real(-60, 130));
}

TEST(FindRelation, DualityAtWeightThree) {
    auto r = find_relation(zeta_problem({{{3}}, {{1, 2}}}, 60, 1000));
    ASSERT_TRUE(r);
    EXPECT_EQ(r->coefficients, (IntVector{1, -1}));
    EXPECT_EQ(r->str(), "zeta(3) - zeta(1,2) = 0");
}

TEST(FindRelation, IrrationalPairHasNone) {
    RelationProblem p;
    p.labels = {"1", "sqrt(2)"};
    p.evaluate = [](unsigned d) {
        WorkingPrecision wp(guarded_digits(d));
        return std::vector<Real>{Real(1), sqrt(Real(2))};
    };
    p.bound = 1000000;
    p.digits = 120;
    EXPECT_FALSE(find_relation(p));
}

TEST(FindRelation, PrecisionGuard) {
    RelationProblem p{{"zeta(2)", "pi^2"}, pi_pair, 60, 1000000};
    try {
        find_relation(p);
        FAIL() << "guard not enforced";
    } catch (const PrecisionError& e) {
        EXPECT_NE(std::string(e.what()).find("120"), std::string::npos) << e.what();
    }
    EXPECT_EQ(required_digits(2, 1000), 60u);
    EXPECT_EQ(guard_bound(4, 80), Integer(100));
    EXPECT_EQ(guard_bound(2, 60), Integer(1000));
}

TEST(FindRelation, CoincidenceRejectedAtDoubledPrecision) {
    RelationProblem p;
    p.labels = {"pi", "pi + 1e-45"};
    p.evaluate = [](unsigned d) {
        WorkingPrecision wp(guarded_digits(d));
        Real pi = real_pi(guarded_digits(d));
        return std::vector<Real>{pi, pi + pow10_real(-45, guarded_digits(d))};
    };
    p.digits = 60;
    p.bound = 1000;
    EXPECT_FALSE(find_relation(p));
}

TEST(FindRelation, ProductRelationsAreRefound) {
    std::mt19937 rng(23);
    auto pick = [&](unsigned w) {
        auto all = enumerate_admissible(w);
        return all[rng() % all.size()];
    };
    for (int trial = 0; trial < 8; ++trial) {
        unsigned wa = 2 + rng() % 2, wb = 2 + rng() % 2;
        auto a = pick(wa), b = pick(wb);
        std::vector<std::vector<CompositionIndex>> terms{{a, b}};
        IntVector expect{1};
        if (trial % 2 == 0) {
            for (const auto& [idx, c] : stuffle(a, b)) {
                terms.push_back({idx});
                expect.push_back(-c);
            }
        } else {
            for (const auto& [w, c] : shuffle(word_of_index(a), word_of_index(b))) {
                terms.push_back({index_of_word(w)});
                expect.push_back(-c);
            }
        }
        unsigned digits = 160;
        auto p = zeta_problem(terms, digits, guard_bound(terms.size(), digits).convert_to<long>());
        Integer h = 0;
        for (auto& c : expect) h = std::max(h, Integer(abs(c)));
        ASSERT_LE(h, p.bound) << trial;
        // the product identity itself holds to working precision
        auto vals = p.evaluate(digits);
        EXPECT_LT(detail::residual(expect, vals, digits), pow10_real(-static_cast<long>(digits) + 5, digits));
        auto r = find_relation(p);
        ASSERT_TRUE(r) << trial;
        EXPECT_LE(r->height(), h);
        EXPECT_LT(r->verified_residual, pow10_real(-static_cast<long>(digits), 2 * digits));
    }
}

TEST(Zagier, DimensionsAndRecursion) {
    auto d = zagier_dimensions(12);
    std::vector<unsigned long long> head(d.begin(), d.begin() + 9);
    EXPECT_EQ(head, (std::vector<unsigned long long>{1, 0, 1, 1, 1, 2, 2, 3, 4}));
    for (unsigned m = 3; m <= 12; ++m) EXPECT_EQ(d[m], d[m - 2] + d[m - 3]);
    for (unsigned m = 0; m <= 12; ++m) EXPECT_EQ(zagier_monomials(m).size(), d[m]) << m;
    auto five = zagier_monomials(5);
    std::sort(five.begin(), five.end());
    EXPECT_EQ(five, (std::vector<std::string>{"Z2 Z3", "Z5"}));
}

TEST(SpanExperiment, SmallWeights) {
    auto w2 = mzn_span_experiment(2, 80);
    EXPECT_EQ(w2.dimension(), 1u);
    EXPECT_TRUE(w2.relations.empty());

    auto w3 = mzn_span_experiment(3, 80);
    EXPECT_EQ(w3.dimension(), 1u);
    ASSERT_EQ(w3.relations.size(), 1u);
    EXPECT_EQ(w3.relations[0].coefficients, (IntVector{1, -1}));
    EXPECT_EQ(w3.relations[0].labels, (std::vector<std::string>{"zeta(3)", "zeta(1,2)"}));

    auto w4 = mzn_span_experiment(4, 80);
    EXPECT_EQ(w4.labels.size(), 4u);
    EXPECT_EQ(w4.dimension(), 1u);
    auto j = w4.to_json();
    EXPECT_EQ(j["dimension_kind"], "upper-bound estimate from numerics");
    EXPECT_EQ(j["weight"], 4);
}

TEST(SpanExperiment, RelationsVerifyAndDimensionsStayWithinBound) {
    for (unsigned m = 5; m <= 7; ++m) {
        auto e = mzn_span_experiment(m, 80);
        EXPECT_EQ(e.labels.size(), 1u << (m - 2));
        EXPECT_EQ(e.dimension() + e.relations.size(), e.labels.size());
        EXPECT_LE(e.dimension(), e.zagier_bound) << m;
        for (const auto& r : e.relations) EXPECT_LT(r.verified_residual, pow10_real(-80, 160));
    }
}

TEST(SpanExperiment, GuardPropagates) {
    EXPECT_THROW(mzn_span_experiment(5, 5), PrecisionError);
    EXPECT_THROW(mzn_span_experiment(1, 80), InputError);
}

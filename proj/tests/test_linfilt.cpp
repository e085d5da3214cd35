#include "periods/linfilt.hpp"

#include "random_matrices.hpp"

#include <gtest/gtest.h>

using namespace periods;
using namespace testing_support;

namespace {

RationalSubspace span_of(std::size_t n, std::vector<std::vector<Rational>> vs) { return RationalSubspace::span(n, vs); }

std::vector<Rational> vec(std::initializer_list<long> xs) {
    std::vector<Rational> v;
    for (auto x : xs) v.emplace_back(x);
    return v;
}

// Filtration from a basis with assigned weights.
IndexedFiltration from_weights(std::size_t n, const std::vector<std::pair<std::vector<Rational>, int>>& graded) {
    int lo = 0, hi = 0;
    for (const auto& [v, w] : graded) {
        lo = std::min(lo, w);
        hi = std::max(hi, w);
    }
    std::vector<RationalSubspace> st;
    for (int k = lo; k <= hi; ++k) {
        std::vector<std::vector<Rational>> vs;
        for (const auto& [v, w] : graded)
            if (w <= k) vs.push_back(v);
        st.push_back(RationalSubspace::span(n, vs));
    }
    return IndexedFiltration(n, lo, st);
}

}  // namespace

TEST(WeightFiltration, ZeroOperator) {
    Matrix<Rational> N(2, 2);
    auto W = weight_filtration(N);
    EXPECT_EQ(W.at(-1).dim(), 0u);
    EXPECT_EQ(W.at(0).dim(), 2u);
    EXPECT_EQ(W.jumps(), std::vector<int>{0});
}

TEST(WeightFiltration, TwoByTwoBlock) {
    auto N = jordan_matrix({2});
    auto W = weight_filtration(N);
    auto imN = RationalSubspace::full(2).image(N);
    EXPECT_EQ(W.at(-2).dim(), 0u);
    EXPECT_EQ(W.at(-1), imN);
    EXPECT_EQ(W.at(0), imN);
    EXPECT_EQ(W.at(1).dim(), 2u);
    EXPECT_EQ(W.jumps(), (std::vector<int>{-1, 1}));
}

TEST(WeightFiltration, TwoByTwoBlockIsUniqueAmongCandidates) {
    // every increasing filtration of Q^2 on [-2,2] built from a few lines
    auto N = jordan_matrix({2});
    std::vector<RationalSubspace> cands{RationalSubspace(2), RationalSubspace::full(2)};
    for (auto v : {vec({1, 0}), vec({0, 1}), vec({1, 1}), vec({1, -1}), vec({2, 1})}) cands.push_back(span_of(2, {v}));
    int passing = 0;
    std::vector<RationalSubspace> cur;
    auto rec = [&](auto&& self) -> void {
        if (cur.size() == 5) {
            IndexedFiltration W(2, -2, cur);
            if (verify_weight_properties(N, W).ok) {
                ++passing;
                EXPECT_EQ(W, weight_filtration(N));
            }
            return;
        }
        for (const auto& c : cands) {
            if (!cur.empty() && !cur.back().subset_of(c)) continue;
            cur.push_back(c);
            self(self);
            cur.pop_back();
        }
    };
    rec(rec);
    EXPECT_EQ(passing, 1);
}

TEST(WeightFiltration, SizeThreeBlock) {
    auto N = jordan_matrix({3});
    auto W = weight_filtration(N);
    EXPECT_EQ(W.jumps(), (std::vector<int>{-2, 0, 2}));
    auto V = RationalSubspace::full(3);
    EXPECT_EQ(W.at(-2), V.image(power(N, 2)));
    EXPECT_EQ(W.at(0), V.image(N));
    EXPECT_EQ(W.at(-2), span_of(3, {vec({1, 0, 0})}));
}

TEST(WeightFiltration, MixedBlocksMatchJordanOracle) {
    auto N = jordan_matrix({3, 2, 1, 1});
    auto W = weight_filtration(N);
    EXPECT_EQ(W, weight_filtration_jordan(N));
    EXPECT_EQ(W, weight_filtration_closed_form(N));
    // weights: block 3 -> 2,0,-2 ; block 2 -> 1,-1 ; singletons -> 0,0
    EXPECT_EQ(W.graded_dim(0), 3u);
    EXPECT_EQ(W.graded_dim(1), 1u);
    EXPECT_EQ(W.graded_dim(-1), 1u);
    EXPECT_EQ(W.graded_dim(2), 1u);
}

TEST(WeightFiltration, RejectsNonNilpotent) {
    Matrix<Rational> N{{1, 0}, {0, 0}};
    try {
        weight_filtration(N);
        FAIL() << "expected rejection";
    } catch (const InputError& e) {
        EXPECT_NE(std::string(e.what()).find("N^2"), std::string::npos);
    }
}

TEST(WeightFiltration, RandomNilpotentAgreementAndProperties) {
    std::mt19937 rng(2024);
    std::uniform_int_distribution<unsigned> dim(1, 12);
    for (int trial = 0; trial < 100; ++trial) {
        unsigned n = dim(rng);
        auto blocks = random_partition(rng, n, 1 + rng() % n);
        Matrix<Rational> ginv;
        auto g = random_unimodular(rng, n, ginv);
        auto N = g * jordan_matrix(blocks) * ginv;
        auto W = weight_filtration(N);
        ASSERT_EQ(W, weight_filtration_jordan(N)) << to_string(N);
        ASSERT_EQ(W, weight_filtration_closed_form(N)) << to_string(N);
        auto rep = verify_weight_properties(N, W);
        EXPECT_TRUE(rep.ok) << to_string(N);
        for (int k = 0; k <= static_cast<int>(n); ++k) EXPECT_EQ(W.graded_dim(k), W.graded_dim(-k));
        // conjugation: W(h N h^-1) = h W(N)
        Matrix<Rational> hinv;
        auto h = random_unimodular(rng, n, hinv);
        EXPECT_EQ(weight_filtration(h * N * hinv), W.transformed(h));
    }
}

TEST(Shift, Conventions) {
    auto N = jordan_matrix({2});
    auto W = weight_filtration(N);
    EXPECT_EQ(shift_filtration(W, 0), W);
    auto W1 = shift_filtration(W, 1);
    EXPECT_EQ(W1.jumps(), (std::vector<int>{0, 2}));
    EXPECT_EQ(shift_filtration(W1, -1), W);
    EXPECT_TRUE(verify_weight_properties(N, W1, 1).ok);
    EXPECT_FALSE(verify_weight_properties(N, W1, 0).ok);

    auto printed = shift_filtration(W, 1, ShiftConvention::printed);
    EXPECT_FALSE(printed.increasing());
    EXPECT_EQ(printed.at(0).dim(), 2u);  // W_1
    EXPECT_EQ(printed.at(1).dim(), 1u);  // W_0
    EXPECT_EQ(printed.at(2).dim(), 1u);  // W_-1
    EXPECT_EQ(printed.at(3).dim(), 0u);  // W_-2
}

TEST(Verify, PerturbedFiltrationFailsWithWitness) {
    std::mt19937 rng(99);
    int checked = 0;
    for (int trial = 0; trial < 20; ++trial) {
        unsigned n = 2 + rng() % 7;
        auto blocks = random_partition(rng, n, n);
        Matrix<Rational> ginv;
        auto g = random_unimodular(rng, n, ginv);
        auto N = g * jordan_matrix(blocks) * ginv;
        auto chains = jordan_chains(N);
        std::vector<std::pair<std::vector<Rational>, int>> graded;
        for (const auto& c : chains) {
            auto v = c.top;
            for (unsigned i = 0; i < c.length; ++i) {
                graded.push_back({v, static_cast<int>(c.length) - 1 - 2 * static_cast<int>(i)});
                v = periods::apply(N, v);
            }
        }
        ASSERT_EQ(from_weights(n, graded), weight_filtration(N));
        for (std::size_t pick = 0; pick < graded.size(); ++pick) {
            auto moved = graded;
            moved[pick].second += 1;
            auto rep = verify_weight_properties(N, from_weights(n, moved));
            EXPECT_FALSE(rep.ok);
            auto f = rep.failures();
            ASSERT_FALSE(f.empty());
            EXPECT_TRUE(f.front().witness.has_value());
            ++checked;
        }
    }
    EXPECT_GT(checked, 40);
}

TEST(PicardLefschetz, ZeroAndRankOne) {
    Matrix<Rational> Z(4, 4);
    auto W = picard_lefschetz_filtration(Z);
    EXPECT_EQ(W.at(0).dim(), 0u);
    EXPECT_EQ(W.at(1).dim(), 4u);
    EXPECT_EQ(W.at(2).dim(), 4u);

    // genus 3, one vanishing cycle: N e_{g+1} = e_1
    Matrix<Rational> N(6, 6);
    N(0, 3) = 1;
    auto P = picard_lefschetz_filtration(N);
    EXPECT_EQ(P.at(0).dim(), 1u);
    EXPECT_EQ(P.at(1).dim(), 5u);
    EXPECT_EQ(P.at(2).dim(), 6u);
    EXPECT_EQ(P.jumps(), (std::vector<int>{0, 1, 2}));

    EXPECT_THROW(picard_lefschetz_filtration(jordan_matrix({3})), InputError);
}

TEST(PicardLefschetz, RandomSquareZero) {
    std::mt19937 rng(17);
    for (int trial = 0; trial < 20; ++trial) {
        unsigned n = 2 + rng() % 9;
        auto blocks = random_partition(rng, n, 2);
        Matrix<Rational> ginv;
        auto g = random_unimodular(rng, n, ginv);
        auto N = g * jordan_matrix(blocks) * ginv;
        auto P = picard_lefschetz_filtration(N);
        EXPECT_EQ(P, shift_filtration(weight_filtration(N), 1));
        EXPECT_TRUE(verify_weight_properties(N, P, 1).ok);
    }
}

TEST(MatrixJson, RoundTrip) {
    Matrix<Rational> m{{Rational(1, 2), 0}, {-3, Rational(7, 5)}};
    auto j = to_json(m);
    EXPECT_EQ(j[0][0], "1/2");
    EXPECT_EQ(rational_matrix_from_json(j), m);
    EXPECT_EQ(rational_matrix_from_json(nlohmann::json::parse(R"([[1, "0.5"], [2, 3]])"))(0, 1), Rational(1, 2));
    EXPECT_THROW(rational_matrix_from_json(nlohmann::json::parse(R"([[1, 2], [3]])")), InputError);
}

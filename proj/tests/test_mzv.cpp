#include "periods/mzv.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace periods;

namespace {

// Brute-force shuffle: choose which positions of the merged word come from u.
WordSum shuffle_by_positions(const Word& u, const Word& v) {
    WordSum out;
    const unsigned n = u.size() + v.size();
    for (std::uint64_t mask = 0; mask < (1ull << n); ++mask) {
        if (static_cast<unsigned>(std::popcount(mask)) != u.size()) continue;
        std::string s;
        unsigned iu = 0, iv = 0;
        for (unsigned p = 0; p < n; ++p)
            s.push_back(((mask >> p) & 1) ? char('0' + u[iu++]) : char('0' + v[iv++]));
        out[Word::parse(s)] += 1;
    }
    return out;
}

// Exact nested sum with every summation variable bounded by K.
Rational truncated_mzv(const CompositionIndex& idx, unsigned K) {
    const auto& n = idx.parts();
    std::vector<Rational> s(n.size() + 1, Rational(0));
    s[0] = 1;
    for (unsigned k = 1; k <= K; ++k)
        for (std::size_t j = n.size(); j >= 1; --j) {
            Rational p = 1;
            for (unsigned e = 0; e < n[j - 1]; ++e) p *= k;
            s[j] += s[j - 1] / p;
        }
    return s.back();
}

std::vector<Word> convergent_words(unsigned max_len) {
    std::vector<Word> out;
    for (const auto& w : all_words(max_len))
        if (convergent_word(w)) out.push_back(w);
    return out;
}

const Real& tol40() {
    static const Real t = [] {
        WorkingPrecision wp(60);
        return Real("1e-40");
    }();
    return t;
}

}  // namespace

TEST(IndexWord, Examples) {
    EXPECT_EQ(word_of_index({2}).str(), "10");
    EXPECT_EQ(word_of_index({3}).str(), "100");
    EXPECT_EQ(word_of_index({1, 2}).str(), "110");
    EXPECT_EQ(word_of_index({2, 1, 3}).str(), "101100");
}

TEST(IndexWord, RoundTripAllWeightsUpToSix) {
    for (unsigned len = 1; len <= 6; ++len)
        for (std::uint64_t b = 0; b < (1ull << len); ++b) {
            Word w(len, b);
            if (w.front() != 1) {
                EXPECT_THROW(index_of_word(w), InputError);
                continue;
            }
            auto idx = index_of_word(w);
            EXPECT_EQ(idx.weight(), len);
            EXPECT_EQ(word_of_index(idx), w);
        }
}

TEST(IndexWord, Parse) {
    EXPECT_EQ(CompositionIndex::parse("zeta(1,2)"), CompositionIndex({1, 2}));
    EXPECT_EQ(CompositionIndex::parse("3"), CompositionIndex({3}));
    EXPECT_EQ(CompositionIndex({1, 2}).str(), "zeta(1,2)");
    EXPECT_THROW(CompositionIndex::parse("1,0"), InputError);
    EXPECT_THROW(CompositionIndex::parse("a"), InputError);
}

TEST(Shuffle, SmallCases) {
    WordSum expected{{Word::parse("01"), 1}, {Word::parse("10"), 1}};
    EXPECT_EQ(shuffle(Word::parse("0"), Word::parse("1")), expected);
    WordSum ten{{Word::parse("1010"), 2}, {Word::parse("1100"), 4}};
    EXPECT_EQ(shuffle(Word::parse("10"), Word::parse("10")), ten);
    EXPECT_EQ(shuffle(Word::parse("10"), Word::parse("10")),
              shuffle_by_positions(Word::parse("10"), Word::parse("10")));
}

TEST(Shuffle, MatchesBruteForceAndBinomialCount) {
    for (const auto& u : all_words(3))
        for (const auto& v : all_words(3)) {
            auto s = shuffle(u, v);
            EXPECT_EQ(s, shuffle_by_positions(u, v));
            long long total = 0;
            for (const auto& [w, m] : s) total += m;
            long long binom = 1;
            for (unsigned i = 0; i < u.size(); ++i) binom = binom * (u.size() + v.size() - i) / (i + 1);
            EXPECT_EQ(total, binom);
        }
    long long total = 0;
    for (const auto& [w, m] : shuffle(Word::parse("10"), Word::parse("110"))) total += m;
    EXPECT_EQ(total, 10);
}

TEST(Stuffle, DepthOneIdentity) {
    IndexSum expected{{{2, 3}, 1}, {{3, 2}, 1}, {{5}, 1}};
    EXPECT_EQ(stuffle({2}, {3}), expected);
    IndexSum same{{{4, 4}, 2}, {{8}, 1}};
    EXPECT_EQ(stuffle({4}, {4}), same);
    EXPECT_EQ(stuffle({}, {1, 2}), (IndexSum{{{1, 2}, 1}}));
}

TEST(Stuffle, ExactOnTruncatedSums) {
    // quasi-shuffle is exact for sums with all variables <= K
    std::vector<CompositionIndex> idxs{{1}, {2}, {1, 2}, {2, 1}, {3}, {1, 1}, {2, 2, 1}};
    for (const auto& a : idxs)
        for (const auto& b : idxs) {
            Rational lhs = truncated_mzv(a, 7) * truncated_mzv(b, 7);
            Rational rhs = 0;
            for (const auto& [c, m] : stuffle(a, b)) rhs += m * truncated_mzv(c, 7);
            EXPECT_EQ(lhs, rhs) << a.str() << " * " << b.str();
        }
}

TEST(Dual, Examples) {
    EXPECT_EQ(dual(Word::parse("10")).str(), "10");
    EXPECT_EQ(dual(Word::parse("100")).str(), "110");
    for (const auto& w : all_words(8)) EXPECT_EQ(dual(dual(w)), w);
}

TEST(Dual, ZetaThreeEqualsZetaOneTwo) {
    ZetaEvaluator ev(50);
    auto a = ev.word(Word::parse("100"));
    auto b = ev.word(dual(Word::parse("100")));
    WorkingPrecision wp(60);
    EXPECT_LT(abs(a.value - b.value), Real("1e-48"));
}

TEST(PartialSum, LogTwo) {
    WorkingPrecision wp(40);
    auto ps = partial_sum({1}, Real("0.5"), 200, 40);
    Real ln2 = boost::multiprecision::log(Real(2));
    EXPECT_LT(abs(ps.value - ln2), ps.tail_bound + Real("1e-38"));
    EXPECT_LT(ps.tail_bound, Real("1e-55"));
}

TEST(PartialSum, DivergentAtOne) {
    WorkingPrecision wp(30);
    EXPECT_THROW(partial_sum({1}, Real(1), 100, 30), DivergenceError);
    EXPECT_THROW(partial_sum({2, 1}, Real(1), 100, 30), DivergenceError);
    EXPECT_THROW(partial_sum({2}, Real(2), 100, 30), InputError);
}

TEST(PartialSum, ZetaTwoAtOneWithinTail) {
    WorkingPrecision wp(40);
    auto ps = partial_sum({2}, Real(1), 100000, 40);
    Real pi = real_pi(40);
    Real exact = pi * pi / 6;
    EXPECT_GE(exact - ps.value, 0);
    EXPECT_LE(exact - ps.value, ps.tail_bound);
    EXPECT_LT(ps.tail_bound, Real("1.1e-5"));
}

TEST(PartialSum, TailBoundHoldsAgainstFourK) {
    WorkingPrecision wp(40);
    std::vector<CompositionIndex> idxs{{2}, {3}, {1, 2}, {1, 1, 2}, {2, 3}, {1, 1, 1, 2}, {1}, {2, 1}};
    for (const auto& idx : idxs)
        for (const char* x : {"0.5", "0.9", "1"}) {
            Real xr(x);
            if (xr == 1 && !idx.admissible()) continue;
            for (unsigned long K : {20ul, 60ul, 200ul}) {
                auto a = partial_sum(idx, xr, K, 40);
                auto b = partial_sum(idx, xr, 4 * K, 40);
                EXPECT_LE(b.value - a.value, a.tail_bound) << idx.str() << " x=" << x << " K=" << K;
            }
        }
}

TEST(Zeta, ZetaTwoIsPiSquaredOverSix) {
    auto z = zeta({2}, 50);
    WorkingPrecision wp(60);
    Real pi = real_pi(60);
    EXPECT_LT(abs(z.value - pi * pi / 6), Real("1e-49"));
    EXPECT_LT(z.error_bound, Real("1e-55"));
}

TEST(Zeta, ZetaThreeAgainstDirectSeries) {
    auto z = zeta({3}, 30);
    WorkingPrecision wp(40);
    auto direct = partial_sum({3}, Real(1), 1000000, 40);
    Real gap = z.value - direct.value;
    EXPECT_GE(gap, -Real("1e-29"));
    EXPECT_LE(gap, direct.tail_bound + Real("1e-29"));
    // Apery's constant, first 30 digits
    EXPECT_LT(abs(z.value - Real("1.20205690315959428539973816151")), Real("1e-29"));
}

TEST(Zeta, DualityOneTwo) {
    ZetaEvaluator ev(50);
    auto a = ev({1, 2});
    auto b = ev({3});
    WorkingPrecision wp(60);
    EXPECT_LT(abs(a.value - b.value), Real("1e-49"));
}

TEST(Zeta, ClassicalEvenValues) {
    ZetaEvaluator ev(40);
    WorkingPrecision wp(50);
    Real pi = real_pi(50);
    EXPECT_LT(abs(ev({4}).value - pow(pi, 4) / 90), Real("1e-39"));
    EXPECT_LT(abs(ev({2, 2}).value - pow(pi, 4) / 120), Real("1e-39"));
    EXPECT_LT(abs(ev({1, 1, 2}).value - pow(pi, 4) / 90), Real("1e-39"));
}

TEST(Zeta, NonAdmissibleRejected) {
    EXPECT_THROW(zeta({2, 1}, 30), DivergenceError);
    EXPECT_THROW(zeta({1}, 30), DivergenceError);
    EXPECT_THROW(zeta_of_word(Word::parse("01"), 30), DivergenceError);
}

TEST(Zeta, ShuffleConsistencyUpToWeightSix) {
    ZetaEvaluator ev(50);
    auto words = convergent_words(4);
    for (const auto& u : words)
        for (const auto& v : words) {
            if (u.size() + v.size() > 6) continue;
            WorkingPrecision wp(60);
            Real lhs = ev.word(u).value * ev.word(v).value;
            Real rhs = 0;
            for (const auto& [w, m] : shuffle(u, v)) {
                ASSERT_TRUE(convergent_word(w)) << w.str();
                rhs += m * ev.word(w).value;
            }
            EXPECT_LT(abs(lhs - rhs), tol40()) << u.str() << " sh " << v.str();
        }
}

TEST(Zeta, StuffleConsistencyUpToWeightSix) {
    ZetaEvaluator ev(50);
    std::vector<CompositionIndex> idxs;
    for (unsigned m = 2; m <= 4; ++m)
        for (auto& i : enumerate_admissible(m)) idxs.push_back(i);
    for (const auto& a : idxs)
        for (const auto& b : idxs) {
            if (a.weight() + b.weight() > 6) continue;
            WorkingPrecision wp(60);
            Real lhs = ev(a).value * ev(b).value;
            Real rhs = 0;
            for (const auto& [c, m] : stuffle(a, b)) rhs += m * ev(c).value;
            EXPECT_LT(abs(lhs - rhs), tol40()) << a.str() << " * " << b.str();
        }
}

TEST(Zeta, DualityUpToWeightEight) {
    ZetaEvaluator ev(50);
    for (const auto& w : convergent_words(8)) {
        WorkingPrecision wp(60);
        EXPECT_LT(abs(ev.word(w).value - ev.word(dual(w)).value), tol40()) << w.str();
    }
}

TEST(Enumerate, Counts) {
    EXPECT_TRUE(enumerate_admissible(1).empty());
    EXPECT_EQ(enumerate_admissible(2), std::vector<CompositionIndex>{CompositionIndex{2}});
    EXPECT_EQ(enumerate_admissible(3), (std::vector<CompositionIndex>{{3}, {1, 2}}));
    for (unsigned m = 2; m <= 10; ++m) {
        auto all = enumerate_admissible(m);
        EXPECT_EQ(all.size(), 1u << (m - 2));
        std::set<CompositionIndex> uniq(all.begin(), all.end());
        EXPECT_EQ(uniq.size(), all.size());
        for (const auto& i : all) {
            EXPECT_TRUE(i.admissible());
            EXPECT_EQ(i.weight(), m);
        }
    }
}

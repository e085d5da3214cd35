#include "periods/freealg.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace periods;

namespace {

RationalSeries poly(unsigned cutoff, std::initializer_list<std::pair<const char*, long>> terms) {
    RationalSeries s(cutoff);
    for (auto [w, c] : terms) s.set(Word::parse(w), Rational(c));
    return s;
}

RationalSeries random_series(std::mt19937& rng, unsigned cutoff, bool zero_constant) {
    std::uniform_int_distribution<int> coef(-5, 5);
    std::uniform_int_distribution<int> den(1, 4);
    RationalSeries s(cutoff);
    for (const auto& w : all_words(cutoff)) {
        if (zero_constant && w.empty()) continue;
        if (rng() % 3 == 0) continue;
        s.set(w, Rational(coef(rng), den(rng)));
    }
    return s;
}

}  // namespace

TEST(Word, ParseAndPrint) {
    Word w = Word::parse("0110");
    EXPECT_EQ(w.size(), 4u);
    EXPECT_EQ(w.str(), "0110");
    EXPECT_EQ(w.front(), 0);
    EXPECT_EQ(w.back(), 0);
    EXPECT_EQ(w[1], 1);
    EXPECT_EQ((Word::parse("01") + Word::parse("1")).str(), "011");
    EXPECT_EQ(w.reversed().str(), "0110");
    EXPECT_EQ(Word::parse("001").reversed().str(), "100");
    EXPECT_EQ(Word::parse("001").flipped().str(), "110");
    EXPECT_THROW(Word::parse("012"), InputError);
}

TEST(Word, DenseIndexRoundTrip) {
    for (std::size_t i = 0; i < Word::dense_size(6); ++i)
        EXPECT_EQ(Word::from_dense_index(i).dense_index(), i);
}

TEST(Multiply, Distributivity) {
    auto a = poly(4, {{"", 1}, {"0", 1}});
    auto b = poly(4, {{"", 1}, {"1", 1}});
    EXPECT_EQ(a * b, poly(4, {{"", 1}, {"0", 1}, {"1", 1}, {"01", 1}}));
}

TEST(Multiply, Noncommutative) {
    auto x0 = RationalSeries::generator(0, 3);
    auto x1 = RationalSeries::generator(1, 3);
    EXPECT_NE(x0 * x1, x1 * x0);
    EXPECT_EQ((x0 * x1).coefficient(Word::parse("01")), 1);
    EXPECT_EQ((x1 * x0).coefficient(Word::parse("01")), 0);
}

TEST(Multiply, Truncation) {
    auto a = poly(1, {{"", 1}, {"0", 1}});
    auto b = poly(1, {{"", 1}, {"1", 1}});
    EXPECT_EQ(a * b, poly(1, {{"", 1}, {"0", 1}, {"1", 1}}));
}

TEST(Multiply, RejectsMismatchedCutoff) {
    EXPECT_THROW(RationalSeries::one(2) * RationalSeries::one(3), InputError);
    EXPECT_THROW(RationalSeries::one(2) + RationalSeries::one(3), InputError);
}

TEST(Multiply, AssociativeOnRandomTriples) {
    std::mt19937 rng(7);
    for (unsigned cutoff = 0; cutoff <= 6; ++cutoff)
        for (int trial = 0; trial < 5; ++trial) {
            auto a = random_series(rng, cutoff, false);
            auto b = random_series(rng, cutoff, false);
            auto c = random_series(rng, cutoff, false);
            EXPECT_EQ((a * b) * c, a * (b * c));
        }
}

TEST(Multiply, GradingIsMultiplicative) {
    // monomials: W_a x W_b -> W_{a+b}, F^a x F^b -> F^{a+b}
    for (const auto& u : all_words(3))
        for (const auto& v : all_words(3)) {
            RationalSeries su(6), sv(6);
            su.set(u, 1);
            sv.set(v, 1);
            auto prod = su * sv;
            int wu = -2 * static_cast<int>(u.size()), wv = -2 * static_cast<int>(v.size());
            int pu = -static_cast<int>(u.size()), pv = -static_cast<int>(v.size());
            EXPECT_EQ(grading_slice(prod, WeightAtMost{wu + wv}), prod);
            EXPECT_EQ(grading_slice(prod, HodgeAtLeast{pu + pv}), prod);
        }
}

TEST(ExpLog, ExpOfZeroIsOne) {
    EXPECT_EQ(exp(RationalSeries(5)), RationalSeries::one(5));
}

TEST(ExpLog, LogExpGenerator) {
    for (unsigned cutoff = 1; cutoff <= 8; ++cutoff) {
        auto x0 = RationalSeries::generator(0, cutoff);
        EXPECT_EQ(log(exp(x0)), x0);
    }
}

TEST(ExpLog, RejectsBadConstantTerm) {
    EXPECT_THROW(exp(RationalSeries::one(3)), InputError);
    EXPECT_THROW(log(RationalSeries(3)), InputError);
    EXPECT_THROW(inverse(RationalSeries(3)), InputError);
}

TEST(ExpLog, RoundTripRational) {
    std::mt19937 rng(11);
    for (unsigned cutoff = 1; cutoff <= 8; ++cutoff) {
        auto u = random_series(rng, cutoff, true);
        EXPECT_EQ(log(exp(u)), u);
        auto g = exp(u);
        EXPECT_EQ(exp(log(g)), g);
        EXPECT_EQ(g * inverse(g), RationalSeries::one(cutoff));
    }
}

TEST(ExpLog, RoundTripComplex) {
    std::mt19937 rng(13);
    WorkingPrecision wp(40);
    for (unsigned cutoff = 1; cutoff <= 8; ++cutoff) {
        auto u = to_complex(random_series(rng, cutoff, true), 40);
        u *= Complex(Real("0.3"), Real("-1.7"));
        auto back = log(exp(u));
        EXPECT_LT(max_abs_difference(back, u), Real("1e-34")) << "cutoff " << cutoff;
    }
}

TEST(ExpLog, ExpTwoPiIX0Coefficient) {
    const unsigned digits = 40;
    WorkingPrecision wp(digits);
    Complex two_pi_i(Real(0), 2 * real_pi(digits));
    auto e = exp(ComplexSeries::generator(0, 3, digits) * two_pi_i);
    Complex expected = two_pi_i * two_pi_i / Real(2);
    EXPECT_LT((e.coefficient(Word::parse("00")) - expected).abs(), Real("1e-35"));
    EXPECT_TRUE(e.coefficient(Word::parse("01")).is_zero());
}

TEST(ScalarPower, AtOneIsIdentity) {
    auto x = ComplexSeries::generator(0, 4, 30) + ComplexSeries::generator(1, 4, 30);
    auto p = scalar_power(Complex(1), x);
    EXPECT_LT(max_abs_difference(p, ComplexSeries::one(4, 30)), Real("1e-28"));
}

TEST(ScalarPower, RejectsZero) {
    EXPECT_THROW(scalar_power(Complex(0), ComplexSeries::generator(0, 2, 30)), InputError);
}

TEST(ScalarPower, LinearCoefficientIsLog) {
    WorkingPrecision wp(30);
    Complex t(Real("0.37"));
    auto p = scalar_power(t, ComplexSeries::generator(0, 3, 30));
    EXPECT_LT((p.coefficient(Word::parse("0")) - log(t)).abs(), Real("1e-28"));
}

TEST(ScalarPower, MultiplicativeInPositiveBase) {
    WorkingPrecision wp(30);
    auto x0 = ComplexSeries::generator(0, 5, 30);
    Complex t(Real("0.25")), s(Real("3.5"));
    auto lhs = scalar_power(t, x0) * scalar_power(s, x0);
    EXPECT_LT(max_abs_difference(lhs, scalar_power(t * s, x0)), Real("1e-26"));
    EXPECT_LT(max_abs_difference(scalar_power(t, x0) * scalar_power(t, x0), scalar_power(t * t, x0)),
              Real("1e-26"));
}

TEST(ScalarPower, BranchShiftsByTwoPiI) {
    WorkingPrecision wp(30);
    auto x0 = ComplexSeries::generator(0, 2, 30);
    auto p = scalar_power(Complex(Real(2)), x0, 1);
    Complex expected = log(Complex(Real(2))) + Complex(Real(0), 2 * real_pi(30));
    EXPECT_LT((p.coefficient(Word::parse("0")) - expected).abs(), Real("1e-28"));
}

TEST(GradingSlice, WeightAndHodge) {
    auto a = poly(3, {{"", 1}, {"0", 1}, {"01", 1}});
    EXPECT_EQ(grading_slice(a, WeightAtMost{-2}), poly(3, {{"0", 1}, {"01", 1}}));
    EXPECT_EQ(grading_slice(a, HodgeAtLeast{0}), poly(3, {{"", 1}}));
    EXPECT_EQ(grading_slice(grading_slice(a, HodgeAtLeast{-1}), WeightAtMost{-2}), poly(3, {{"0", 1}}));
}

TEST(GradingSlice, Monotone) {
    std::mt19937 rng(3);
    auto a = random_series(rng, 5, false);
    for (int m = -12; m < 2; ++m) {
        auto lo = grading_slice(a, WeightAtMost{m});
        auto hi = grading_slice(a, WeightAtMost{m + 1});
        EXPECT_EQ(grading_slice(hi, WeightAtMost{m}), lo);  // W_m inside W_{m+1}
    }
    for (int p = -6; p < 1; ++p) {
        auto big = grading_slice(a, HodgeAtLeast{p});
        auto small = grading_slice(a, HodgeAtLeast{p + 1});
        EXPECT_EQ(grading_slice(big, HodgeAtLeast{p + 1}), small);  // F^{p+1} inside F^p
    }
}

TEST(SeriesJson, RoundTripAndKindCheck) {
    auto a = poly(3, {{"", 1}, {"0", -2}, {"011", 3}});
    a.set(Word::parse("1"), Rational(1, 3));
    auto j = to_json(a);
    EXPECT_EQ(j["cutoff"], 3);
    EXPECT_EQ(series_from_json<Rational>(j), a);
    EXPECT_THROW(series_from_json<Complex>(j), InputError);

    auto c = to_complex(a, 30);
    auto back = series_from_json<Complex>(to_json(c));
    EXPECT_LT(max_abs_difference(back, c), Real("1e-28"));
}

#include "periods/hodge.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace periods;
using G = GaussianRational;

namespace {

G gi(long re, long im) { return {Rational(re), Rational(im)}; }

Matrix<G> col(std::initializer_list<G> xs) {
    Matrix<G> m(xs.size(), 1);
    std::size_t i = 0;
    for (const auto& x : xs) m(i++, 0) = x;
    return m;
}

HodgeData<G> weight_zero_point() {
    HodgeData<G> h{1, 0, {}};
    h.pieces[{0, 0}] = col({1});
    return h;
}

HodgeData<G> tate(int p) {
    HodgeData<G> h{1, 2 * p, {}};
    h.pieces[{p, p}] = col({1});
    return h;
}

void expect_rejected(const HodgeReport& r, const std::string& axiom) {
    EXPECT_FALSE(r.ok) << axiom;
    bool found = false;
    for (const auto& c : r.failures())
        if (c.axiom.find(axiom) != std::string::npos) {
            found = true;
            EXPECT_TRUE(!c.witness.empty() || !c.detail.empty()) << axiom;
        }
    EXPECT_TRUE(found) << "no failure for " << axiom << ": " << r.to_json().dump();
}

// Two-step split structure B (weight 0, rank 1) + A (elliptic, weight 1): coordinates (B | A).
MixedHodgeData<G> elliptic_extension_split() {
    auto A = elliptic_hodge<G>(gi(0, 1)).hodge;
    return direct_sum<G>({weight_zero_point(), A});
}

Matrix<G> twist3(const G& x1, const G& x2) {
    Matrix<G> g = Matrix<G>::identity(3);
    g(0, 1) = x1;
    g(0, 2) = x2;
    return g;
}

G random_gaussian(std::mt19937& rng) {
    std::uniform_int_distribution<int> p(-9, 9), q(1, 7);
    return {Rational(p(rng), q(rng)), Rational(p(rng), q(rng))};
}

}  // namespace

TEST(Hodge, EllipticCurvePasses) {
    auto e = elliptic_hodge<G>(gi(0, 1));
    auto rep = validate_polarized(e);
    EXPECT_TRUE(rep.ok) << rep.to_json().dump();
    // a non-Gaussian period in floating point
    auto hex = elliptic_hodge<cdouble>(cdouble(0.5, std::sqrt(3.0) / 2));
    EXPECT_TRUE(validate_polarized(hex).ok);
}

TEST(Hodge, WeightZeroRankOne) {
    EXPECT_TRUE(validate_hodge(weight_zero_point()).ok);
    PolarizedHodgeData<G> ph{weight_zero_point(), Matrix<Rational>{{1}}};
    EXPECT_TRUE(validate_polarized(ph).ok);
    ph.S = Matrix<Rational>{{-1}};
    expect_rejected(validate_polarized(ph), "positivity");
}

TEST(Hodge, ConjugateViolatingInputFails) {
    HodgeData<G> h{2, 1, {}};
    h.pieces[{1, 0}] = col({1, gi(0, 1)});
    h.pieces[{0, 1}] = col({1, gi(0, 1)});
    expect_rejected(validate_hodge(h), "conjugation symmetry");
}

TEST(Hodge, FiltrationRoundTrip) {
    auto e = elliptic_hodge<G>(gi(1, 2)).hodge;
    auto back = hodge_from_filtration(e.hodge_filtration(), 1);
    EXPECT_TRUE(validate_hodge(back).ok);
    EXPECT_EQ(back.piece(1), e.piece(1));
    EXPECT_EQ(back.piece(0), e.piece(0));
}

TEST(PeriodMatrix, Examples) {
    Matrix<G> iI{{gi(0, 1), 0}, {0, gi(0, 1)}};
    EXPECT_TRUE(validate_period_matrix(iI).ok);
    // Im of [[i, 2], [2, i]] is the identity, so positivity holds
    Matrix<G> real_off{{gi(0, 1), 2}, {2, gi(0, 1)}};
    EXPECT_TRUE(validate_period_matrix(real_off).ok);
    Matrix<G> indefinite{{gi(0, 1), gi(0, 2)}, {gi(0, 2), gi(0, 1)}};
    auto rep = validate_period_matrix(indefinite);
    expect_rejected(rep, "Im positive definite");
    EXPECT_FALSE(rep.failed("symmetric"));
    Matrix<G> nonsym{{gi(0, 1), 1}, {0, gi(0, 1)}};
    expect_rejected(validate_period_matrix(nonsym), "symmetric");
}

TEST(PeriodMatrix, AgreesWithRiemannRelations) {
    std::mt19937 rng(21);
    int pass = 0;
    for (int trial = 0; trial < 40; ++trial) {
        std::size_t g = 1 + rng() % 3;
        Matrix<G> om(g, g);
        for (std::size_t i = 0; i < g; ++i)
            for (std::size_t j = i; j < g; ++j) om(i, j) = om(j, i) = random_gaussian(rng);
        bool direct = validate_period_matrix(om).ok;
        EXPECT_EQ(direct, validate_polarized(hodge_from_period_matrix(om)).ok);
        pass += direct;
    }
    EXPECT_GT(pass, 0);
    EXPECT_LT(pass, 40);
}

TEST(Mutation, EverySingleAxiomViolationIsRejected) {
    // pure Hodge structure mutations
    {
        HodgeData<G> h = elliptic_hodge<G>(gi(0, 1)).hodge;
        ASSERT_TRUE(validate_hodge(h).ok);
        auto m = h;
        m.pieces[{0, 1}] = col({1, gi(1, -1)});  // no longer the conjugate
        expect_rejected(validate_hodge(m), "conjugation symmetry");
        m = h;
        m.pieces.erase({0, 1});
        m.pieces[{0, 2}] = col({1, gi(0, -1)});  // p + q != k
        expect_rejected(validate_hodge(m), "type p+q=k");
        m = h;
        m.pieces[{1, 0}] = hcat(col({1, gi(0, 1)}), col({2, gi(0, 2)}));
        expect_rejected(validate_hodge(m), "independent basis");
        HodgeData<G> real{2, 0, {}};
        real.pieces[{0, 0}] = col({1, 0});  // conjugation-stable but does not span
        auto r = validate_hodge(real);
        expect_rejected(r, "direct sum");
        EXPECT_FALSE(r.failed("conjugation"));
        HodgeData<G> overlap{2, 2, {}};
        overlap.pieces[{1, 1}] = Matrix<G>::identity(2);
        overlap.pieces[{2, 0}] = col({1, gi(0, 1)});
        overlap.pieces[{0, 2}] = col({1, gi(0, -1)});
        expect_rejected(validate_hodge(overlap), "direct sum");
    }
    // polarized mutations
    {
        auto ph = elliptic_hodge<G>(gi(0, 1));
        ASSERT_TRUE(validate_polarized(ph).ok);
        auto m = ph;
        m.S = Matrix<Rational>{{0, 1}, {1, 0}};
        expect_rejected(validate_polarized(m), "(-1)^k symmetry");
        m = ph;
        m.S = Matrix<Rational>{{0, Rational(1, 2)}, {Rational(-1, 2), 0}};
        expect_rejected(validate_polarized(m), "integral form");
        auto neg = elliptic_hodge<G>(gi(0, -1));
        auto r = validate_polarized(neg);
        expect_rejected(r, "positivity");
        EXPECT_FALSE(r.failed("conjugation"));
        // genus 2 with a non-symmetric period matrix: V^{1,0} is not isotropic
        Matrix<G> om{{gi(0, 1), 1}, {0, gi(0, 1)}};
        auto g2 = validate_polarized(hodge_from_period_matrix(om));
        expect_rejected(g2, "orthogonality");
        EXPECT_FALSE(g2.failed("positivity"));
    }
    // mixed Hodge structure mutations
    {
        auto m = elliptic_extension_split();
        ASSERT_TRUE(validate_mhs(m).ok);
        auto shifted = m;
        shifted.F.lo += 1;  // F moved by one step
        expect_rejected(validate_mhs(shifted), "Gr_");
        auto bad_w = m;
        bad_w.W.steps[0] = Subspace<G>::span(3, {{1, gi(0, 1), 0}});
        expect_rejected(validate_mhs(bad_w), "W defined over the lattice");
        auto bad_inc = m;
        bad_inc.W.steps[0] = Subspace<G>::span(3, {{0, 0, 1}});
        bad_inc.W.steps.push_back(Subspace<G>::span(3, {{1, 0, 0}, {0, 1, 0}}));
        expect_rejected(validate_mhs(bad_inc), "W increasing");
        auto bad_dec = m;
        bad_dec.F.steps[0] = Subspace<G>::span(3, {{1, 0, 0}});  // F^1 no longer inside F^0
        expect_rejected(validate_mhs(bad_dec), "F decreasing");
        auto bad_lat = m;
        bad_lat.lattice = Matrix<G>(3, 3);
        expect_rejected(validate_mhs(bad_lat), "lattice basis");
    }
}

TEST(MixedHodge, SplitSumsPass) {
    auto e = elliptic_hodge<G>(gi(0, 1)).hodge;
    EXPECT_TRUE(validate_mhs(direct_sum<G>({tate(-1), e, tate(1), weight_zero_point()})).ok);
    EXPECT_TRUE(validate_mhs(direct_sum<G>({e})).ok);
}

TEST(MixedHodge, HodgeTateWordsPass) {
    for (unsigned c = 0; c <= 4; ++c) {
        auto m = hodge_tate_words(c);
        auto rep = validate_mhs(m);
        EXPECT_TRUE(rep.ok) << c;
        // Gr_{-2l} has the 2^l words of length l
        if (c == 3) EXPECT_EQ(m.W.at(-6).dim() - m.W.at(-7).dim(), 8u);
    }
}

TEST(MixedHodge, TwistsPassAndAreChecked) {
    auto split = elliptic_extension_split();
    auto same = mhs_from_twist(split, Matrix<G>::identity(3));
    EXPECT_EQ(same.lattice, split.lattice);
    std::mt19937 rng(4);
    for (int trial = 0; trial < 10; ++trial) {
        auto m = mhs_from_twist(split, twist3(random_gaussian(rng), random_gaussian(rng)));
        EXPECT_TRUE(validate_mhs(m).ok);
    }
    Matrix<G> bad = Matrix<G>::identity(3);
    bad(1, 0) = 1;  // moves W_0 out of itself
    EXPECT_THROW(mhs_from_twist(split, bad), InputError);
    Matrix<G> scaled = Matrix<G>::identity(3);
    scaled(0, 0) = 2;  // not trivial on Gr
    EXPECT_THROW(mhs_from_twist(split, scaled), InputError);
}

TEST(ExtClass, SplitIsZeroAndIntegralShiftsVanish) {
    auto split = elliptic_extension_split();
    auto r0 = ext_class(split);
    EXPECT_TRUE(r0.space.discrete());
    EXPECT_EQ(r0.weight_a, 1);
    EXPECT_EQ(r0.weight_b, 0);
    EXPECT_TRUE(r0.space.is_zero(r0.cls));

    std::mt19937 rng(8);
    for (int trial = 0; trial < 10; ++trial) {
        G x1 = random_gaussian(rng), x2 = random_gaussian(rng);
        auto a = ext_class(mhs_from_twist(split, twist3(x1, x2)));
        auto b = ext_class(mhs_from_twist(split, twist3(x1 + G(3), x2 - G(2))));
        EXPECT_TRUE(a.space.equal(a.cls, b.cls));
        auto c = ext_class(mhs_from_twist(split, twist3(x1 + G(Rational(1, 2)), x2)));
        EXPECT_FALSE(a.space.equal(a.cls, c.cls));
    }
}

TEST(ExtClass, TateExtensionMatchesQuotientArithmetic) {
    // A = Z of weight 0, B = Z of weight -2: classes live in C / Z
    auto split = direct_sum<G>({tate(-1), weight_zero_point()});
    std::mt19937 rng(12);
    for (int trial = 0; trial < 10; ++trial) {
        G x = random_gaussian(rng), y = random_gaussian(rng);
        Matrix<G> gx = Matrix<G>::identity(2), gy = gx;
        gx(0, 1) = x;
        gy(0, 1) = y;
        auto cx = ext_class(mhs_from_twist(split, gx));
        auto cy = ext_class(mhs_from_twist(split, gy));
        EXPECT_EQ(cx.space.f0_dim(), 0u);
        double re = x.re.convert_to<double>();
        ASSERT_EQ(cx.cls.lattice_coords.size(), 1u);
        EXPECT_NEAR(cx.cls.lattice_coords[0], re - std::floor(re), 1e-12);
        // equal iff x - y is an integer
        G d = x - y;
        bool integral = d.im == 0 && denominator(d.re) == 1;
        EXPECT_EQ(cx.space.equal(cx.cls, cy.cls), integral);
        Matrix<G> gz = gx;
        gz(0, 1) = y + G(Rational(numerator(d.re) / denominator(d.re) + 5));
        gz(0, 1) = x + G(-4);
        EXPECT_TRUE(cx.space.equal(cx.cls, ext_class(mhs_from_twist(split, gz)).cls));
    }
}

TEST(ExtClass, AdditiveOnTwoStepTwists) {
    auto split = elliptic_extension_split();
    std::mt19937 rng(31);
    for (int trial = 0; trial < 20; ++trial) {
        auto g1 = twist3(random_gaussian(rng), random_gaussian(rng));
        auto g2 = twist3(random_gaussian(rng), random_gaussian(rng));
        auto c1 = ext_class(mhs_from_twist(split, g1));
        auto c2 = ext_class(mhs_from_twist(split, g2));
        auto c12 = ext_class(mhs_from_twist(split, g1 * g2));
        EXPECT_TRUE(c12.space.equal(c12.cls, c12.space.add(c1.cls, c2.cls))) << trial;
    }
}

TEST(ExtClass, RejectsWrongShape) {
    auto e = elliptic_hodge<G>(gi(0, 1)).hodge;
    EXPECT_THROW(ext_class(direct_sum<G>({e})), InputError);
    EXPECT_THROW(ext_class(direct_sum<G>({tate(-1), weight_zero_point(), tate(1)})), InputError);
}

TEST(NilpotentOrbit, TrivialMonodromyReducesToHodgeCheck) {
    NilpotentOrbitData d;
    d.rank = 2;
    d.weight = 1;
    d.N = Matrix<Rational>(2, 2);
    d.S = Matrix<Rational>{{0, 1}, {-1, 0}};
    d.F0 = {2, 1, {Subspace<cdouble>::span(2, {{cdouble(1), cdouble(0.3, 1.2)}})}};
    auto rep = nilpotent_orbit_check(d, cdouble(0.01, 0));
    EXPECT_TRUE(rep.ok);
    EXPECT_TRUE(rep.fiber.ok);
    d.F0 = {2, 1, {Subspace<cdouble>::span(2, {{cdouble(1), cdouble(0.3, -1.2)}})}};
    auto bad = nilpotent_orbit_check(d, cdouble(0.01, 0));
    EXPECT_TRUE(bad.ok);  // a pure weight-1 MHS; only the polarization sees the sign
    EXPECT_FALSE(bad.fiber.ok);
}

TEST(NilpotentOrbit, EllipticOrbitPassesAndMutationFails) {
    auto d = elliptic_orbit();
    for (double y : {1.0, 2.0, 5.0, 40.0}) {
        auto rep = nilpotent_orbit_check_log(d, detail::ray_log(2 * M_PI * y, 0));
        EXPECT_TRUE(rep.ok) << y << rep.to_json().dump();
        EXPECT_TRUE(rep.fiber.ok);
    }
    auto m = d;
    m.F0 = {2, 1, {Subspace<cdouble>::span(2, {{cdouble(0), cdouble(1)}})}};
    auto rep = nilpotent_orbit_check_log(m, detail::ray_log(2 * M_PI, 0));
    EXPECT_FALSE(rep.ok);
    ASSERT_FALSE(rep.mhs.failures().empty());
    EXPECT_FALSE(rep.mhs.failures().front().witness.empty());

    // F0 violating transversality in rank 3
    NilpotentOrbitData t3;
    t3.rank = 3;
    t3.weight = 2;
    t3.N = Matrix<Rational>{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
    t3.S = Matrix<Rational>{{0, 0, 1}, {0, -1, 0}, {1, 0, 0}};
    t3.F0 = {3, 1, {Subspace<cdouble>::span(3, {{1, 0, 0}, {0, 1, 0}}), Subspace<cdouble>::span(3, {{1, 0, 0}})}};
    EXPECT_TRUE(nilpotent_orbit_check(t3, cdouble(0.001, 0)).structure.ok);
    t3.F0 = {3, 1, {Subspace<cdouble>::span(3, {{1, 0, 0}, {0, 0, 1}}), Subspace<cdouble>::span(3, {{1, 0, 0}})}};
    auto tr = nilpotent_orbit_check(t3, cdouble(0.001, 0));
    EXPECT_TRUE(tr.structure.failed("N F^p in F^{p-1}"));
}

TEST(NilpotentOrbit, FullTurnGivesTheSameReport) {
    auto d = elliptic_orbit(cdouble(0.2, 0.4));
    for (double L : {3.0, 10.0, 50.0}) {
        auto a = nilpotent_orbit_check_log(d, detail::ray_log(L, 0.1));
        auto b = nilpotent_orbit_check_log(d, detail::ray_log(L, 1.1));
        ASSERT_EQ(a.mhs.checks.size(), b.mhs.checks.size());
        for (std::size_t i = 0; i < a.mhs.checks.size(); ++i) EXPECT_EQ(a.mhs.checks[i].pass, b.mhs.checks[i].pass);
        EXPECT_EQ(a.ok, b.ok);
        EXPECT_EQ(a.fiber.ok, b.fiber.ok);
    }
}

TEST(NilpotentOrbit, PrintedShiftIsNotAnIncreasingFiltration) {
    auto rep = nilpotent_orbit_check_log(elliptic_orbit(), detail::ray_log(10, 0), ShiftConvention::printed);
    EXPECT_FALSE(rep.ok);
}

TEST(NilpotentOrbit, FiberScanFindsTheValidityRegion) {
    // Im of the period is -2 + L / 2 pi, so the fiber is polarized for L > 4 pi
    auto d = elliptic_orbit(cdouble(0, -2));
    auto scan = orbit_fiber_scan(d, 0, {2, 6, 12, 13, 20, 100});
    std::vector<bool> got;
    for (auto [L, ok] : scan) got.push_back(ok);
    EXPECT_EQ(got, (std::vector<bool>{false, false, false, true, true, true}));
}

TEST(HodgeNorm, SlopesFollowTheWeight) {
    auto d = elliptic_orbit();
    std::vector<double> Ls;
    for (double L = 20; L < 1e6; L *= 2.5) Ls.push_back(L);
    auto low = hodge_norm_growth(d, {Rational(0), Rational(1)}, 0.125, Ls);
    EXPECT_EQ(low.expected, -1);
    EXPECT_TRUE(low.ok) << low.slope;
    auto high = hodge_norm_growth(d, {Rational(1), Rational(0)}, 0.125, Ls);
    EXPECT_EQ(high.expected, 1);
    EXPECT_TRUE(high.ok) << high.slope;
    auto shifted = hodge_norm_growth(elliptic_orbit(cdouble(0.3, 0.7)), {Rational(2), Rational(-1)}, 0.3, Ls);
    EXPECT_NEAR(shifted.slope, 1, 0.1);

    NilpotentOrbitData flat = d;
    flat.N = Matrix<Rational>(2, 2);
    flat.F0 = {2, 1, {Subspace<cdouble>::span(2, {{cdouble(1), cdouble(0, 1)}})}};
    auto zero = hodge_norm_growth(flat, {Rational(1), Rational(1)}, 0, Ls);
    EXPECT_EQ(zero.expected, 0);
    EXPECT_NEAR(zero.slope, 0, 1e-9);
    EXPECT_THROW(hodge_norm_growth(d, {Rational(1), Rational(0)}, 0, {10, 20}), InputError);
}

TEST(HodgeJson, Fixtures) {
    auto j = nlohmann::json::parse(R"({"rank": 2, "weight": 1,
        "pieces": [{"p": 1, "q": 0, "basis": [[1, [0, 1]]]}, {"p": 0, "q": 1, "basis": [[1, [0, -1]]]}],
        "S": [[0, 1], [-1, 0]]})");
    bool form = false;
    auto ph = hodge_from_json(j, &form);
    EXPECT_TRUE(form);
    EXPECT_TRUE(validate_polarized(ph).ok);

    auto mj = nlohmann::json::parse(R"({"rank": 2,
        "W": {"lo": -2, "steps": [[[1, 0]], [[1, 0]]]},
        "F": {"lo": -1, "steps": [[[1, 0], [0, 1]], [[0, 1]]]}})");
    EXPECT_TRUE(validate_mhs(mhs_from_json(mj)).ok);

    auto oj = nlohmann::json::parse(R"({"weight": 1, "N": [[0, 0], [-1, 0]], "S": [[0, 1], [-1, 0]],
        "F0": {"lo": 1, "steps": [[[1, 0]]]}})");
    EXPECT_TRUE(nilpotent_orbit_check(orbit_from_json(oj), cdouble(0.001, 0)).ok);
}

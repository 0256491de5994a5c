#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "qlat/genus.hpp"
#include "qlat/miranda_morrison.hpp"
#include "qlat/normal_form.hpp"

using namespace qlat;

namespace {

Configuration worked_k1() {
    auto s = parse_singularities("A15+A3");
    return make_configuration(s, parse_glue(s, "8,2,2"));
}

std::set<std::string> as_strings(const std::vector<GammaElement>& v) {
    std::set<std::string> out;
    for (const auto& g : v) out.insert(g.str());
    return out;
}

}  // namespace

TEST(GammaProduct, EncodeRoundTrip) {
    GammaProduct gp({2, 3, 5});
    EXPECT_EQ(gp.dim(), 7);
    for (int d : {1, -1})
        for (i64 s : {1, 3, 5, 7}) {
            GammaElement g{2, d, s};
            auto back = gp.component(gp.encode(g), 2);
            EXPECT_EQ(back.d, d);
            EXPECT_EQ(back.s, s);
        }
    GammaElement odd{3, -1, 2};
    EXPECT_EQ(gp.component(gp.encode(odd), 3).s, 2);
    EXPECT_EQ(gp.restrict(gp.encode(odd), 2), 0u);
}

TEST(GammaProduct, LocalMovesPrimePowerToOtherPrimes) {
    GammaProduct gp({2, 3});
    // 3 at p = 2 is the unit class 3; its valuation at 3 is odd, so the class of
    // 3 is pushed to the prime 2 as well
    auto v = gp.local(3, 1, Rational(3));
    EXPECT_EQ(gp.component(v, 3).s, 1);
    EXPECT_EQ(gp.component(v, 2).s, 3);
    EXPECT_EQ(gp.local(2, -1, Rational(4)), gp.encode({2, -1, 1}));
}

TEST(F2Span, RankAndMembership) {
    F2Span s;
    EXPECT_TRUE(s.add(0b101));
    EXPECT_TRUE(s.add(0b011));
    EXPECT_FALSE(s.add(0b110));
    EXPECT_EQ(s.rank(), 2);
    EXPECT_TRUE(s.contains(0b110));
    EXPECT_FALSE(s.contains(0b100));
}

TEST(MirandaMorrison, WorkedExampleSigmaSharp) {
    auto k1 = worked_k1();
    auto g = complement_genus(k1);
    auto sigma = as_strings(sigma_sharp_p(g, 2));
    EXPECT_EQ(sigma, (std::set<std::string>{"(1,1)", "(-1,7)", "(1,5)", "(-1,3)"}));
    MirandaMorrison mm(g);
    EXPECT_EQ(mm.e_order(), 1);
    EXPECT_EQ(mm.e_plus_order(), 2);
    EXPECT_EQ(mm.e_order(), mm.e_order_from_indices());
    EXPECT_EQ(mm.e_plus_order(), mm.e_plus_order_from_indices());
}

TEST(MirandaMorrison, WorkedExampleLift) {
    auto g = complement_genus(worked_k1());
    IntMatrix lift = lift_2adic(g);
    ASSERT_EQ(lift.rows(), 3);
    std::vector<i64> diag;
    for (int i = 0; i < 3; ++i) {
        diag.push_back(lift(i, i));
        for (int j = 0; j < 3; ++j)
            if (i != j) EXPECT_EQ(lift(i, j), 0);
    }
    std::sort(diag.begin(), diag.end());
    EXPECT_EQ(diag, (std::vector<i64>{-80, -10, -2}));
    // det = -|discr T| up to 2-adic unit squares
    const i64 det = diag[0] * diag[1] * diag[2];
    EXPECT_EQ(unit_square_class(Rational(-det) / Rational(g.disc.order()), 2), 1);
}

TEST(MirandaMorrison, WorkedExampleGenerators) {
    auto k1 = worked_k1();
    MirandaMorrison mm(complement_genus(k1));
    ASSERT_EQ(k1.aut_h.size(), 2u);
    std::multiset<bool> trivial;
    for (const auto& m : k1.aut_h) trivial.insert(mm.in_e_plus(mm.e(m)) == 0);
    EXPECT_EQ(trivial, (std::multiset<bool>{true, false}));
    auto counts = mm.component_counts(k1.aut_h);
    EXPECT_EQ(counts.real, 1);
    EXPECT_EQ(counts.pairs, 0);
}

// Exceptional reflections: a-bar^2 = -46 gives spin -23, a square class 1
// modulo (Z_2^*)^2, so the label is (-1, 1).
TEST(MirandaMorrison, ExceptionalSpin) {
    GammaProduct gp({2});
    EXPECT_EQ(gp.str(gp.local(2, -1, Rational(-46, 2))), "2:(-1,1)");
    auto g = complement_genus(worked_k1());
    NormalForm nf(g.disc, 2);
    IntMatrix lift = lift_2adic(g);
    int exceptional = 0;
    for (i64 i = 1; i < g.disc.order(); ++i) {
        auto r = disc_reflection(nf, nf.coords(g.disc.element(i)));
        if (!r || !r->exceptional) continue;
        ++exceptional;
        Rational spin = spin_via_lift(nf, lift, *r);
        EXPECT_TRUE(spin.is_integer() || spin.den() % 2 == 1);
    }
    EXPECT_GT(exceptional, 0);
}

// On non-exceptional reflections the lifted spin and the formula (-1, u p^k) agree.
TEST(MirandaMorrison, LiftAgreesWithFormula) {
    int checked = 0;
    for (const char* text : {"A15+A3", "2A7+A3+A1", "A11+2A3+A1", "D6+A7+A1", "A7+A5+A3+A1", "2D4+4A1"}) {
        auto s = parse_singularities(text);
        for (const auto& c : enumerate_configurations(s)) {
            if (!realizable(c)) continue;
            auto g = complement_genus(c);
            if (g.rank() < 3) continue;
            NormalForm nf(g.disc, 2);
            if (static_cast<int>(nf.length()) != g.rank()) continue;
            IntMatrix lift = lift_2adic(g);
            GammaProduct gp({2});
            for (i64 i = 1; i < g.disc.order(); ++i) {
                auto r = disc_reflection(nf, nf.coords(g.disc.element(i)));
                if (!r || r->exceptional) continue;
                i64 pk = i64(1) << r->k;
                EXPECT_EQ(gp.local(2, -1, Rational(r->u * pk)), gp.local(2, -1, spin_via_lift(nf, lift, *r)))
                    << text << " " << c.code() << " " << format_element(g.disc.element(i));
                ++checked;
            }
        }
    }
    EXPECT_GT(checked, 10);
}

TEST(MirandaMorrison, OddReflectionFormula) {
    // T with discr <2/3> (+ unimodular part): a of order 3 with a^2 = 2u/3
    auto s = parse_singularities("A2");
    auto c = make_configuration(s, {});
    auto g = complement_genus(c);
    MirandaMorrison mm(g);
    for (i64 i = 1; i < g.disc.order(); ++i) {
        IntVector a = g.disc.element(i);
        if (g.disc.element_order(a) != 3) continue;
        NormalForm nf(g.disc, 3);
        auto r = disc_reflection(nf, nf.coords(a));
        ASSERT_TRUE(r.has_value());
        auto img = mm.reflection_image(a);
        ASSERT_TRUE(img.has_value());
        EXPECT_EQ(mm.gamma().restrict(*img, 3), mm.gamma().restrict(mm.gamma().local(3, -1, Rational(r->u * 3)), 3));
    }
}

TEST(MirandaMorrison, RejectsSmallRank) {
    auto s = parse_singularities("A10+A9");
    auto cs = enumerate_configurations(s);
    ASSERT_FALSE(cs.empty());
    EXPECT_THROW(MirandaMorrison(complement_genus(cs[0])), FormError);
}

// e is a homomorphism modulo Sigma#.
TEST(MirandaMorrison, EIsHomomorphism) {
    std::mt19937 rng(17);
    int checked = 0;
    for (const char* text : {"A15+A3", "2A7+A3+A1", "A5+A4+A3+A2", "D5+A5+A3", "A7+2A3+A1"}) {
        auto s = parse_singularities(text);
        for (const auto& c : enumerate_configurations(s)) {
            if (!realizable(c)) continue;
            auto g = complement_genus(c);
            MirandaMorrison mm(g);
            auto aut = automorphisms(g.disc);
            std::vector<std::pair<IntMatrix, MirandaMorrison::Vec>> ok;
            for (const auto& m : aut) {
                try {
                    ok.emplace_back(m, mm.e(m));
                } catch (const FormError&) {
                }
            }
            ASSERT_FALSE(ok.empty());
            std::uniform_int_distribution<size_t> pick(0, ok.size() - 1);
            for (int t = 0; t < 40; ++t) {
                const auto& [a, ea] = ok[pick(rng)];
                const auto& [b, eb] = ok[pick(rng)];
                auto eab = mm.e(compose(g.disc, a, b));
                EXPECT_EQ(mm.sigma_sharp().reduce(eab), mm.sigma_sharp().reduce(ea ^ eb)) << text << " " << c.code();
                ++checked;
            }
        }
    }
    EXPECT_GT(checked, 100);
}

// |E| and |E+| computed from Sigma# agree with the local index formula, and
// every stratum up to mu = 10 is a single real component.
TEST(MirandaMorrison, SmallMilnorOrdersAndCounts) {
    const std::vector<int> cf{1, 2, 3, 6, 9, 17, 26, 46, 74, 130};
    for (int mu = 1; mu <= 10; ++mu) {
        int configs = 0, real = 0, pairs = 0;
        for (const auto& s : singularity_sets_of_rank(mu))
            for (const auto& c : enumerate_configurations(s)) {
                if (!realizable(c)) continue;
                ++configs;
                MirandaMorrison mm(complement_genus(c));
                EXPECT_EQ(mm.e_order(), mm.e_order_from_indices()) << s.str() << " " << c.code();
                EXPECT_EQ(mm.e_plus_order(), mm.e_plus_order_from_indices()) << s.str() << " " << c.code();
                auto k = mm.component_counts(c.aut_h);
                real += k.real;
                pairs += k.pairs;
            }
        EXPECT_EQ(configs, cf[mu - 1]) << mu;
        EXPECT_EQ(real, cf[mu - 1]) << mu;
        EXPECT_EQ(pairs, 0) << mu;
    }
}

TEST(MirandaMorrison, TwoA7A3A1) {
    auto s = parse_singularities("2A7+A3+A1");
    int real = 0, pairs = 0, configs = 0;
    for (const auto& c : enumerate_configurations(s)) {
        if (!realizable(c)) continue;
        ++configs;
        auto k = component_counts(c);
        real += k.real;
        pairs += k.pairs;
    }
    EXPECT_EQ(configs, 12);
    EXPECT_EQ(real, 11);
    EXPECT_EQ(pairs, 1);
}

// discr_2 = u(2) + u(4) with l_2 = rank: reflections alone reach half of Aut.
TEST(MirandaMorrison, EichlerGeneratorsReachAllOfAut) {
    auto s = parse_singularities("2D5+A3+4A1");
    auto c = make_configuration(s, parse_glue(s, "11111001; 13100113"));
    auto g = complement_genus(c);
    MirandaMorrison mm(g);
    for (const auto& m : automorphisms(g.disc)) EXPECT_NO_THROW(mm.e(m));
    auto k = mm.component_counts(c.aut_h);
    EXPECT_EQ(k.real, 1);
    EXPECT_EQ(k.pairs, 0);
}

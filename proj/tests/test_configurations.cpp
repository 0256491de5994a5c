#include <gtest/gtest.h>

#include <chrono>

#include "qlat/configurations.hpp"
#include "qlat/genus.hpp"

using namespace qlat;

namespace {

// symmetry_image(S) extended by the identity on the h coordinate
std::vector<IntMatrix> ambient_action(const SingularitySet& s) {
    std::vector<IntMatrix> out;
    for (const auto& m : symmetry_image(s)) {
        const Eigen::Index r = m.rows();
        IntMatrix g = IntMatrix::Identity(r + 1, r + 1);
        g.block(0, 0, r, r) = m;
        out.push_back(g);
    }
    return out;
}

std::vector<Configuration> realizable_configurations(const char* text) {
    std::vector<Configuration> out;
    for (auto& c : enumerate_configurations(parse_singularities(text)))
        if (realizable(c)) out.push_back(std::move(c));
    return out;
}

std::vector<i64> element_indices(const FiniteQuadraticForm& f, const std::vector<IntVector>& gens) {
    return subgroup_elements(f, gens);
}

}  // namespace

TEST(Configurations, PolarizedDiscriminant) {
    auto s = parse_singularities("A15+A3");
    auto pd = polarized_discr(s);
    EXPECT_EQ(pd.form.order(), 4 * discriminant_form(s).order());
    Glue h{0, 0, 1};
    EXPECT_EQ(pd.form.q(pd.from_digits(h)), Rational(1, 4));
    Glue a{1, 0, 0};
    EXPECT_EQ(pd.form.q(pd.from_digits(a)), Rational(-15, 16).reduce_mod(2));
    EXPECT_EQ(pd.digits(pd.from_digits({8, 2, 2})), (Glue{8, 2, 2}));
    EXPECT_EQ(polarized_discr(SingularitySet()).form.order(), 4);
}

TEST(Configurations, GlueCodes) {
    auto s = parse_singularities("2A7+4A1");
    auto g = parse_glue(s, "2600110; 0411110");
    ASSERT_EQ(g.size(), 2u);
    EXPECT_EQ(g[0], (Glue{2, 6, 0, 0, 1, 1, 0}));
    EXPECT_EQ(format_glue(g), "2600110; 0411110");
    auto t = parse_singularities("A15+A3");
    auto k = parse_glue(t, "12,2,0");
    EXPECT_EQ(k[0], (Glue{12, 2, 0}));
    EXPECT_EQ(format_glue(k), "12,2,0");
    EXPECT_THROW(parse_glue(t, "1,2"), FormError);
    EXPECT_THROW(parse_glue(t, "9,9,9"), FormError);
}

TEST(Configurations, ConditionsOnWorkedExample) {
    auto s = parse_singularities("A15+A3");
    for (const char* code : {"8,2,2", "4,0,2", "12,2,0"}) {
        auto k = parse_glue(s, code);
        EXPECT_TRUE(is_isotropic_kernel(s, k)) << code;
        EXPECT_TRUE(condition_roots(s, k)) << code;
        EXPECT_TRUE(condition_hyperplane(s, k)) << code;
    }
    EXPECT_TRUE(condition_roots(s, {}));
    EXPECT_TRUE(condition_hyperplane(s, {}));
    // q(0,2,0) = -1, not isotropic
    auto bad = parse_glue(s, "0,2,0");
    EXPECT_FALSE(is_isotropic_kernel(s, bad) && condition_roots(s, bad) && condition_hyperplane(s, bad));
}

TEST(Configurations, ConditionExamples) {
    // 2A1 with the sum of the two classes: isotropic only modulo 2 and carries no root
    auto s = parse_singularities("2A1");
    Glue x{1, 1, 0};
    EXPECT_FALSE(coset_has_norm(s, {1, 1}, Rational(2)));
    EXPECT_EQ(condition_roots(s, {x}), true);
    // 4A1 with h-digit 2: the coset has minimum norm 2, never 1
    auto t = parse_singularities("4A1");
    EXPECT_TRUE(condition_hyperplane(t, {Glue{1, 1, 1, 1, 2}}));
    // h-digit 0 and four ones: the coset contains a root
    EXPECT_FALSE(condition_roots(t, {Glue{1, 1, 1, 1, 0}}));
}

TEST(Configurations, WorkedExampleKernels) {
    auto start = std::chrono::steady_clock::now();
    auto s = parse_singularities("A15+A3");
    auto cfs = realizable_configurations("A15+A3");
    ASSERT_EQ(cfs.size(), 3u);
    std::vector<std::string> expected{"8,2,2", "4,0,2", "12,2,0"};
    for (const auto& code : expected) {
        int hits = 0;
        for (const auto& c : cfs)
            if (same_orbit(s, c.kernel, parse_glue(s, code))) ++hits;
        EXPECT_EQ(hits, 1) << code;
    }
    EXPECT_LT(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(), 10.0);
}

TEST(Configurations, TrivialCases) {
    auto cfs = enumerate_configurations(parse_singularities("A1"));
    ASSERT_EQ(cfs.size(), 1u);
    EXPECT_EQ(cfs[0].elements.size(), 1u);
    EXPECT_EQ(cfs[0].discr_tilde.order(), 8);
    auto none = enumerate_configurations(SingularitySet());
    ASSERT_EQ(none.size(), 1u);
}

TEST(Configurations, OrderIdentityAndStabilizers) {
    for (const char* text : {"A15+A3", "2A7+A3+A1", "D4+4A1", "E7+A7", "2D6+A4+A3", "3A3+A2"}) {
        auto s = parse_singularities(text);
        auto pd = polarized_discr(s);
        for (const auto& c : enumerate_configurations(s)) {
            EXPECT_TRUE(is_valid_kernel(s, c.kernel)) << text << " " << c.code();
            const i64 k = static_cast<i64>(c.elements.size());
            EXPECT_EQ(c.discr_tilde.order() * k * k, pd.form.order()) << text;
            std::vector<IntVector> kv;
            for (const auto& g : c.kernel) kv.push_back(pd.from_digits(g));
            auto kidx = element_indices(pd.form, kv);
            ASSERT_EQ(c.aut_ambient.size(), c.aut_h.size());
            for (size_t i = 0; i < c.aut_ambient.size(); ++i) {
                std::vector<IntVector> img;
                for (const auto& v : kv) img.push_back(pd.form.apply(c.aut_ambient[i], v));
                EXPECT_EQ(element_indices(pd.form, img), kidx) << text;
                EXPECT_TRUE(c.discr_tilde.preserves_form(c.aut_h[i])) << text;
                EXPECT_TRUE(c.discr_tilde.is_bijective(c.aut_h[i])) << text;
            }
        }
    }
}

TEST(Configurations, StabilizerMatchesBruteForce) {
    for (const char* text : {"D4+2A1", "3A2+A1", "2A3+2A1", "E6+2A2"}) {
        auto s = parse_singularities(text);
        auto pd = polarized_discr(s);
        auto group = generate_group(pd.form, ambient_action(s));
        for (const auto& c : enumerate_configurations(s)) {
            std::vector<IntVector> kv;
            for (const auto& g : c.kernel) kv.push_back(pd.form.reduce(pd.from_digits(g)));
            auto kidx = element_indices(pd.form, kv);
            size_t expected = 0;
            for (const auto& g : group) {
                std::vector<IntVector> img;
                for (const auto& v : kv) img.push_back(pd.form.apply(g, v));
                if (element_indices(pd.form, img) == kidx) ++expected;
            }
            size_t got = c.aut_ambient.empty() ? 1 : generate_group(pd.form, c.aut_ambient).size();
            EXPECT_EQ(got, expected) << text << " " << c.code();
        }
    }
}

// Orbits of admissible kernels against brute-force enumeration of all
// isotropic subgroups for |discr S_h| <= 256.
TEST(Configurations, BruteForceOracle) {
    auto start = std::chrono::steady_clock::now();
    int checked = 0;
    for (const auto& s : enumerate_singularity_sets(9)) {
        auto pd = polarized_discr(s);
        if (pd.form.order() > 256) continue;
        size_t brute = 0;
        for (const auto& k : isotropic_subgroups(pd.form, ambient_action(s))) {
            std::vector<Glue> g;
            for (const auto& v : k.generators) g.push_back(pd.digits(v));
            if (condition_roots(s, g) && condition_hyperplane(s, g)) ++brute;
        }
        EXPECT_EQ(enumerate_configurations(s).size(), brute) << s.str();
        ++checked;
    }
    EXPECT_GT(checked, 100);
    EXPECT_LT(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(), 60.0);
}

TEST(Configurations, PinnedKernels) {
    struct Case {
        const char* set;
        const char* code;
    };
    for (const Case& c : {Case{"2A7+4A1", "2600110; 0411110"}, Case{"4D4", "13320; 22110"},
                          Case{"16A1",
                               "00000111110010002; 01000011001101110; 00100101101111000; 00001101110001110; "
                               "00011111000110010; 11110010001110000"},
                          Case{"A11+2A3+A1", "31111"}}) {
        auto s = parse_singularities(c.set);
        auto k = parse_glue(s, c.code);
        EXPECT_TRUE(is_isotropic_kernel(s, k)) << c.set;
        EXPECT_TRUE(condition_roots(s, k)) << c.set;
        EXPECT_TRUE(condition_hyperplane(s, k)) << c.set;
    }
}

TEST(Configurations, ExampleCount) {
    EXPECT_EQ(realizable_configurations("2A7+A3+A1").size(), 12u);
}

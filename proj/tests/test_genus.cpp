#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>
#include <random>

#include "qlat/genus.hpp"
#include "qlat/normal_form.hpp"

using namespace qlat;

namespace {

// Random even Gram matrix with nonzero determinant.
IntMatrix random_even_gram(std::mt19937& rng, int n) {
    std::uniform_int_distribution<int> off(-2, 2), diag(-3, 3);
    for (;;) {
        IntMatrix g(n, n);
        for (int i = 0; i < n; ++i) {
            g(i, i) = 2 * diag(rng);
            for (int j = i + 1; j < n; ++j) g(i, j) = g(j, i) = off(rng);
        }
        Eigen::MatrixXd d = g.cast<double>();
        if (std::abs(d.determinant()) > 0.5) return g;
    }
}

std::pair<int, int> signature(const IntMatrix& g) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g.cast<double>());
    int plus = 0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
        if (es.eigenvalues()(i) > 0) ++plus;
    return {plus, static_cast<int>(g.rows()) - plus};
}

}  // namespace

TEST(Genus, SignatureOfRootDiscriminants) {
    for (const auto& s : enumerate_singularity_sets(8)) {
        EXPECT_EQ(signature_mod8(discriminant_form(s)), mod(-s.mu(), 8)) << s.str();
        EXPECT_EQ(signature_mod8(polarized_discr(s).form), mod(1 - s.mu(), 8)) << s.str();
    }
}

TEST(Genus, SignatureOfRandomLattices) {
    std::mt19937 rng(11);
    for (int trial = 0; trial < 300; ++trial) {
        IntMatrix g = random_even_gram(rng, 1 + trial % 5);
        auto [plus, minus] = signature(g);
        EXPECT_EQ(signature_mod8(lattice_discriminant(g).form), mod(plus - minus, 8)) << g;
    }
}

// An explicit lattice T of signature (2, r - 2) is itself a complement, so the
// form -discr T must pass for signature (1, 21 - r).
TEST(Genus, ExplicitComplementsExist) {
    std::mt19937 rng(5);
    int checked = 0;
    while (checked < 200) {
        IntMatrix g = random_even_gram(rng, 2 + checked % 7);
        auto [plus, minus] = signature(g);
        if (plus != 2) continue;
        auto q = lattice_discriminant(g).form;
        EXPECT_TRUE(nikulin_exists(1, 19 - minus, q.negated())) << g;
        ++checked;
    }
}

// Rank 20: the complement is a positive definite binary lattice.  Existence is
// compared against a listing of reduced binary forms.
TEST(Genus, BinaryComplementsAgainstReducedForms) {
    std::vector<FiniteQuadraticForm> positive, candidates;
    for (i64 a = 1; a <= 12; ++a)
        for (i64 c = a; c <= 40; ++c)
            for (i64 b = 0; b <= a; ++b) {
                const i64 det = 4 * a * c - b * b;
                if (det > 48) continue;
                IntMatrix g(2, 2);
                g << 2 * a, b, b, 2 * c;
                positive.push_back(lattice_discriminant(g).form);
                g << 2 * a, b, b, -2 * c;
                candidates.push_back(lattice_discriminant(g).form);
                candidates.push_back(positive.back());
                candidates.push_back(positive.back().negated());
            }
    int yes = 0, no = 0;
    for (const auto& q : candidates) {
        if (!q.is_nondegenerate() || q.order() == 1) continue;
        bool found = false;
        for (const auto& t : positive)
            if (t.order() == q.order() && isometric(t, q)) {
                found = true;
                break;
            }
        EXPECT_EQ(nikulin_exists(1, 19, q.negated()), found) << q.str();
        (found ? yes : no) += 1;
    }
    EXPECT_GT(yes, 20);
    EXPECT_GT(no, 20);
}

TEST(Genus, Rejections) {
    EXPECT_FALSE(nikulin_exists(1, 21, parse_form("1/2")));
    EXPECT_FALSE(nikulin_exists(0, 1, parse_form("1/2")));
    EXPECT_TRUE(nikulin_exists(0, 1, parse_form("-1/2")));
    // 21 copies of <1/2> need length 21 in a complement of rank 1
    std::vector<FiniteQuadraticForm> many(21, parse_form("-1/2"));
    EXPECT_FALSE(nikulin_exists(0, 21, direct_sum(many)));
    auto s = parse_singularities("A19+A1");
    EXPECT_THROW(complement_genus(make_configuration(s, {})), FormError);
}

TEST(Genus, WorkedExample) {
    auto s = parse_singularities("A15+A3");
    int real = 0;
    for (const auto& c : enumerate_configurations(s)) {
        if (c.elements.size() == 1) EXPECT_FALSE(realizable(c));
        if (!realizable(c)) continue;
        ++real;
        auto g = complement_genus(c);
        EXPECT_EQ(g.sig_plus, 2);
        EXPECT_EQ(g.sig_minus, 1);
        EXPECT_EQ(g.rank(), 3);
    }
    EXPECT_EQ(real, 3);
    auto k1 = make_configuration(s, parse_glue(s, "8,2,2"));
    EXPECT_TRUE(realizable(k1));
    EXPECT_EQ(k1.discr_tilde.order(), 16 * 4 * 4 / 4);
}

TEST(Genus, SmallMilnorCounts) {
    const std::vector<int> ss{1, 2, 3, 6, 9, 16}, cf{1, 2, 3, 6, 9, 17};
    for (int mu = 1; mu <= 6; ++mu) {
        int sets = 0, configs = 0;
        for (const auto& s : singularity_sets_of_rank(mu)) {
            int here = 0;
            for (const auto& c : enumerate_configurations(s)) here += realizable(c) ? 1 : 0;
            configs += here;
            sets += here > 0 ? 1 : 0;
        }
        EXPECT_EQ(sets, ss[mu - 1]) << mu;
        EXPECT_EQ(configs, cf[mu - 1]) << mu;
    }
}

// Realizability depends on K only, not on the generators used to present it.
TEST(Genus, GeneratorInvariance) {
    std::mt19937 rng(3);
    for (const char* text : {"A15+A3", "2A7+A3+A1", "D4+8A1", "2A3+6A1", "A11+2A3+A1"}) {
        auto s = parse_singularities(text);
        for (const auto& c : enumerate_configurations(s)) {
            if (c.elements.size() == 1) continue;
            std::uniform_int_distribution<size_t> pick(0, c.elements.size() - 1);
            std::vector<Glue> gens;
            while (glue_span(s, gens).size() < c.elements.size()) gens.push_back(c.elements[pick(rng)]);
            auto d = make_configuration(s, gens);
            EXPECT_EQ(realizable(d), realizable(c)) << text << " " << c.code();
            EXPECT_EQ(d.discr_tilde.order(), c.discr_tilde.order());
            EXPECT_EQ(signature_mod8(d.discr_tilde), signature_mod8(c.discr_tilde));
            EXPECT_TRUE(isometric(d.discr_tilde, c.discr_tilde)) << text << " " << c.code();
        }
    }
}

#include <gtest/gtest.h>

#include <random>
#include <set>

#include "qlat/definite_binary.hpp"
#include "qlat/genus.hpp"

using namespace qlat;

namespace {

// Brute force over small integer matrices.
int isometry_count_oracle(const BinaryForm& f) {
    const IntMatrix g = f.gram();
    int n = 0;
    for (i64 a = -6; a <= 6; ++a)
        for (i64 b = -6; b <= 6; ++b)
            for (i64 c = -6; c <= 6; ++c)
                for (i64 d = -6; d <= 6; ++d) {
                    IntMatrix m(2, 2);
                    m << a, b, c, d;
                    if ((m.transpose() * g * m) == g) ++n;
                }
    return n;
}

ComponentCounts total_counts(const char* text) {
    auto s = parse_singularities(text);
    ComponentCounts t;
    for (const auto& c : enumerate_configurations(s)) {
        if (!realizable(c)) continue;
        auto k = binary_counts(c);
        t.real += k.real;
        t.pairs += k.pairs;
    }
    return t;
}

}  // namespace

TEST(DefiniteBinary, ReduceExamples) {
    EXPECT_EQ(reduce({4, 1, 2}), (BinaryForm{2, 1, 4}));
    EXPECT_EQ(reduce({2, 0, 2}), (BinaryForm{2, 0, 2}));
    EXPECT_EQ(reduce({2, 1, 2}), (BinaryForm{2, 1, 2}));
    EXPECT_EQ(reduce({10, 7, 6}).str(), "[2,1,6]");
    EXPECT_THROW(reduce({2, 3, 2}), FormError);
    EXPECT_THROW(reduce({3, 0, 2}), FormError);
}

// Reduction is idempotent and constant on proper classes.
TEST(DefiniteBinary, ReduceIsClassInvariant) {
    std::mt19937 rng(9);
    std::uniform_int_distribution<int> e(-3, 3);
    int checked = 0;
    for (i64 a = 2; a <= 20; a += 2)
        for (i64 c = a; c <= 30; c += 2)
            for (i64 b = 0; 2 * b <= a; ++b) {
                BinaryForm f{a, b, c};
                if (f.det() <= 0) continue;
                BinaryForm r = reduce(f);
                EXPECT_EQ(reduce(r), r);
                EXPECT_EQ(r.det(), f.det());
                for (int t = 0; t < 3; ++t) {
                    IntMatrix m(2, 2);
                    do m << e(rng), e(rng), e(rng), e(rng);
                    while (m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0) != 1);
                    IntMatrix h = m.transpose() * f.gram() * m;
                    EXPECT_EQ(reduce({h(0, 0), h(0, 1), h(1, 1)}), r) << f.str();
                    ++checked;
                }
            }
    EXPECT_GT(checked, 300);
}

TEST(DefiniteBinary, IsometryGroupOrders) {
    EXPECT_EQ(isometries({2, 0, 2}).size(), 8u);
    EXPECT_EQ(isometries({2, 1, 2}).size(), 12u);
    EXPECT_EQ(isometries({4, 0, 110}).size(), 4u);
    EXPECT_EQ(isometries({14, 6, 34}).size(), 2u);
    for (i64 a = 2; a <= 12; a += 2)
        for (i64 c = a; c <= 16; c += 2)
            for (i64 b = 0; 2 * b <= a; ++b) {
                BinaryForm f{a, b, c};
                if (f.det() <= 0) continue;
                EXPECT_EQ(static_cast<int>(isometries(f).size()), isometry_count_oracle(f)) << f.str();
            }
}

// Classes of a genus against a direct listing of all reduced forms of the determinant.
TEST(DefiniteBinary, GenusClassesAgainstListing) {
    for (i64 d : {3, 4, 7, 8, 15, 20, 23, 39, 47, 56, 84, 440}) {
        std::vector<BinaryForm> all;
        for (i64 a = 2; a * a <= 2 * d; a += 2)
            for (i64 b = 0; 2 * b <= a; ++b)
                if ((d + b * b) % a == 0) {
                    i64 c = (d + b * b) / a;
                    if (c >= a && c % 2 == 0) all.push_back({a, b, c});
                }
        std::set<std::string> seen;
        for (const auto& f : all) {
            GenusSymbol g{2, 0, lattice_discriminant(f.gram()).form};
            auto classes = genus_classes(g);
            bool found = false;
            for (const auto& h : classes) found = found || reduce(h) == reduce(f);
            EXPECT_TRUE(found) << f.str();
            for (const auto& h : classes) EXPECT_EQ(h.det(), d);
        }
    }
}

TEST(DefiniteBinary, KnownExamples) {
    auto a = total_counts("A10+A9");
    EXPECT_EQ(a.real, 1);
    EXPECT_EQ(a.pairs, 1);
    auto b = total_counts("2D6+A4+A3");
    EXPECT_EQ(b.real, 2);
    EXPECT_EQ(b.pairs, 0);
    auto c = total_counts("D6+A9+A4");
    EXPECT_EQ(c.real, 1);
    EXPECT_EQ(c.pairs, 1);
    auto d = total_counts("A8+A6+A3+A2");
    EXPECT_EQ(d.real, 0);
    EXPECT_EQ(d.pairs, 3);
    auto s = parse_singularities("A9+A6+A3+A1");
    int configs = 0;
    for (const auto& cfg : enumerate_configurations(s)) {
        if (!realizable(cfg)) continue;
        ++configs;
        auto k = binary_counts(cfg);
        EXPECT_EQ(k.real, 1);
        EXPECT_EQ(k.pairs, 1);
    }
    EXPECT_EQ(configs, 2);
}

// Per class: oriented count is between the unoriented count and twice it.
TEST(DefiniteBinary, OrientedBounds) {
    for (const char* text : {"A10+A9", "A8+A6+A3+A2", "D6+A9+A4", "A19", "E8+A11"}) {
        auto s = parse_singularities(text);
        for (const auto& cfg : enumerate_configurations(s)) {
            if (!realizable(cfg)) continue;
            for (const auto& k : binary_class_counts(cfg)) {
                EXPECT_GE(k.oriented, k.unoriented) << text;
                EXPECT_LE(k.oriented, 2 * k.unoriented) << text;
                bool improper = false;
                for (const auto& m : isometries(k.form)) improper = improper || m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0) == -1;
                if (!improper) EXPECT_EQ(k.oriented, 2 * k.unoriented) << text << " " << k.form.str();
            }
        }
    }
}

#include <gtest/gtest.h>

#include "qlat/arith.hpp"
#include "qlat/matrix.hpp"

using namespace qlat;

TEST(Rational, NormalizesAndCompares) {
    Rational a(6, -8);
    EXPECT_EQ(a.num(), -3);
    EXPECT_EQ(a.den(), 4);
    EXPECT_EQ(a + Rational(3, 4), Rational(0));
    EXPECT_LT(Rational(-1, 2), Rational(1, 3));
    EXPECT_EQ(Rational(-5, 2).reduce_mod(2), Rational(3, 2));
    EXPECT_EQ(Rational(-80).valuation(2), 4);
    EXPECT_EQ(Rational(-80).unit_part(2), Rational(-5));
}

TEST(Rational, SquareClasses) {
    EXPECT_EQ(unit_square_class(Rational(-23), 2), 1);
    EXPECT_EQ(unit_square_class(Rational(7, 9), 2), 7);
    EXPECT_EQ(unit_square_class(Rational(-2), 3), 1);
    EXPECT_EQ(unit_square_class(Rational(2), 3), 2);
    EXPECT_EQ(unit_square_class(Rational(2), 7), 1);
}

TEST(Matrix, DeterminantMatchesRationalElimination) {
    IntMatrix a(3, 3);
    a << -2, 1, 0, 1, -2, 1, 0, 1, -2;
    EXPECT_EQ(determinant(a), -4);
    RatMatrix inv = inverse(to_rational(a));
    RatMatrix prod = to_rational(a) * inv;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) EXPECT_EQ(prod(i, j), Rational(i == j ? 1 : 0));
}

TEST(Matrix, SubgroupBasisOrders) {
    IntVector orders(2);
    orders << 4, 6;
    IntVector g(2);
    g << 2, 3;
    AbelianBasis b = subgroup_basis(orders, {g});
    i64 total = 1;
    for (i64 o : b.orders) total *= o;
    EXPECT_EQ(total, 2);
    AbelianBasis all = subgroup_basis(orders, {IntVector::Unit(2, 0), IntVector::Unit(2, 1)});
    total = 1;
    for (i64 o : all.orders) total *= o;
    EXPECT_EQ(total, 24);
}

TEST(Matrix, KernelOfPairing) {
    // x -> 2*x0 + x1 mod 4 on Z/4 x Z/4 has a kernel of order 4
    IntVector orders(2);
    orders << 4, 4;
    IntMatrix phi(1, 2);
    phi << 2, 1;
    AbelianBasis k = kernel_basis(orders, phi, 4);
    i64 total = 1;
    for (i64 o : k.orders) total *= o;
    EXPECT_EQ(total, 4);
    for (const auto& g : k.gens) EXPECT_EQ(mod(2 * g(0) + g(1), 4), 0);
}

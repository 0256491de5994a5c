#pragma once

#include <Eigen/Core>
#include <vector>

#include "qlat/arith.hpp"

namespace Eigen {
template <>
struct NumTraits<qlat::Rational> : GenericNumTraits<qlat::Rational> {
    typedef qlat::Rational Real;
    typedef qlat::Rational NonInteger;
    typedef qlat::Rational Nested;
    typedef qlat::Rational Literal;
    enum {
        IsComplex = 0,
        IsInteger = 0,
        IsSigned = 1,
        RequireInitialization = 1,
        ReadCost = 1,
        AddCost = 4,
        MulCost = 4
    };
    static inline Real epsilon() { return Real(0); }
    static inline Real dummy_precision() { return Real(0); }
    static inline int digits10() { return 0; }
};
}  // namespace Eigen

namespace qlat {

using IntMatrix = Eigen::Matrix<i64, Eigen::Dynamic, Eigen::Dynamic>;
using IntVector = Eigen::Matrix<i64, Eigen::Dynamic, 1>;
using RatMatrix = Eigen::Matrix<Rational, Eigen::Dynamic, Eigen::Dynamic>;
using RatVector = Eigen::Matrix<Rational, Eigen::Dynamic, 1>;

template <typename Derived>
RatMatrix to_rational(const Eigen::MatrixBase<Derived>& m) {
    return m.template cast<Rational>();
}

// x^T G y for any scalar type.
template <typename Scalar>
Scalar bilinear(const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& gram,
                const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& x,
                const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& y) {
    Scalar s(0);
    for (Eigen::Index i = 0; i < gram.rows(); ++i) {
        if (x(i) == Scalar(0)) continue;
        for (Eigen::Index j = 0; j < gram.cols(); ++j) s += x(i) * gram(i, j) * y(j);
    }
    return s;
}

// Fraction-free determinant (Bareiss) of a square integer matrix.
i64 determinant(const IntMatrix& m);

// Exact inverse over Q; throws on singular input.
RatMatrix inverse(const RatMatrix& m);

// Smith reduction over the local ring Z/p^e.  On return W = U*M*V is diagonal
// (W(i,i) = p^{val[i]} for i < val.size(), zero elsewhere) and V is the
// accumulated column transform.
struct LocalSmith {
    IntMatrix W;
    IntMatrix V;
    std::vector<int> val;
};
LocalSmith local_smith(const IntMatrix& m, i64 p, int e);

// A basis of a finite abelian group written as a direct sum of cyclic groups
// of prime power order, each given as an element of an ambient group.
struct AbelianBasis {
    std::vector<IntVector> gens;
    std::vector<i64> orders;
};

// Basis of the subgroup generated by `generators` inside the ambient group
// Z/orders[0] x ... x Z/orders[n-1].  Primes ascending, then descending order.
AbelianBasis subgroup_basis(const IntVector& orders, const std::vector<IntVector>& generators);

// Kernel of x -> (sum_i x_i * phi(j,i)) mod modulus, j = 0..rows-1, on the
// ambient group above.  phi(j,i) * orders[i] must be 0 mod modulus.
AbelianBasis kernel_basis(const IntVector& orders, const IntMatrix& phi, i64 modulus);

}  // namespace qlat

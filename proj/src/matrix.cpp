#include "qlat/matrix.hpp"

#include <algorithm>

namespace qlat {

i64 determinant(const IntMatrix& m) {
    const Eigen::Index n = m.rows();
    if (n != m.cols()) throw ArithmeticError("determinant: non-square matrix");
    if (n == 0) return 1;
    std::vector<std::vector<i128>> a(n, std::vector<i128>(n));
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) a[i][j] = m(i, j);
    i128 prev = 1;
    int sign = 1;
    for (Eigen::Index k = 0; k + 1 < n; ++k) {
        if (a[k][k] == 0) {
            Eigen::Index r = k + 1;
            while (r < n && a[r][k] == 0) ++r;
            if (r == n) return 0;
            std::swap(a[k], a[r]);
            sign = -sign;
        }
        for (Eigen::Index i = k + 1; i < n; ++i)
            for (Eigen::Index j = k + 1; j < n; ++j) {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
                if (a[i][j] > INT64_MAX || a[i][j] < -INT64_MAX)
                    throw ArithmeticError("determinant overflow");
            }
        prev = a[k][k];
    }
    return static_cast<i64>(sign * a[n - 1][n - 1]);
}

RatMatrix inverse(const RatMatrix& m) {
    const Eigen::Index n = m.rows();
    RatMatrix a = m;
    RatMatrix inv = RatMatrix::Identity(n, n);
    for (Eigen::Index c = 0; c < n; ++c) {
        Eigen::Index piv = c;
        while (piv < n && a(piv, c).is_zero()) ++piv;
        if (piv == n) throw ArithmeticError("inverse: singular matrix");
        a.row(c).swap(a.row(piv));
        inv.row(c).swap(inv.row(piv));
        Rational s = Rational(1) / a(c, c);
        a.row(c) *= s;
        inv.row(c) *= s;
        for (Eigen::Index r = 0; r < n; ++r) {
            if (r == c || a(r, c).is_zero()) continue;
            Rational f = a(r, c);
            a.row(r) -= f * a.row(c);
            inv.row(r) -= f * inv.row(c);
        }
    }
    return inv;
}

LocalSmith local_smith(const IntMatrix& m, i64 p, int e) {
    const i64 pe = pow_int(p, static_cast<unsigned>(e));
    const Eigen::Index rows = m.rows(), cols = m.cols();
    LocalSmith s;
    s.W = m.unaryExpr([pe](i64 x) { return mod(x, pe); });
    s.V = IntMatrix::Identity(cols, cols);
    auto val_of = [&](i64 x) { return x == 0 ? e : valuation(x, p); };
    auto col_axpy = [&](Eigen::Index dst, Eigen::Index src, i64 f) {
        // column dst += f * column src, on W and V
        for (Eigen::Index i = 0; i < rows; ++i) s.W(i, dst) = mod(s.W(i, dst) + mul_mod(f, s.W(i, src), pe), pe);
        for (Eigen::Index i = 0; i < cols; ++i) s.V(i, dst) = mod(s.V(i, dst) + mul_mod(f, s.V(i, src), pe), pe);
    };
    for (Eigen::Index t = 0; t < std::min(rows, cols); ++t) {
        int best = e;
        Eigen::Index bi = -1, bj = -1;
        for (Eigen::Index i = t; i < rows; ++i)
            for (Eigen::Index j = t; j < cols; ++j) {
                int v = val_of(s.W(i, j));
                if (v < best) {
                    best = v;
                    bi = i;
                    bj = j;
                }
            }
        if (bi < 0) break;
        s.W.row(t).swap(s.W.row(bi));
        s.W.col(t).swap(s.W.col(bj));
        s.V.col(t).swap(s.V.col(bj));
        const i64 pv = pow_int(p, static_cast<unsigned>(best));
        // normalize the pivot to p^best
        i64 unit = s.W(t, t) / pv;
        i64 uinv = inv_mod(unit, pe);
        for (Eigen::Index i = 0; i < rows; ++i) s.W(i, t) = mul_mod(s.W(i, t), uinv, pe);
        for (Eigen::Index i = 0; i < cols; ++i) s.V(i, t) = mul_mod(s.V(i, t), uinv, pe);
        for (Eigen::Index j = t + 1; j < cols; ++j) {
            if (s.W(t, j) == 0) continue;
            col_axpy(j, t, mod(-(s.W(t, j) / pv), pe));
        }
        for (Eigen::Index i = t + 1; i < rows; ++i) {
            if (s.W(i, t) == 0) continue;
            i64 f = s.W(i, t) / pv;
            for (Eigen::Index j = t; j < cols; ++j) s.W(i, j) = mod(s.W(i, j) - mul_mod(f, s.W(t, j), pe), pe);
        }
        s.val.push_back(best);
    }
    return s;
}

namespace {

i64 exponent_of(const IntVector& orders) {
    i64 e = 1;
    for (Eigen::Index i = 0; i < orders.size(); ++i) e = lcm(e, orders(i));
    return e;
}

struct PrimeLayout {
    i64 p;
    int A;                  // valuation of the exponent
    std::vector<int> a;     // valuation of each ambient order
    std::vector<i64> cof;   // orders[i] / p^a[i]
};

PrimeLayout layout(const IntVector& orders, i64 p) {
    PrimeLayout l{p, 0, {}, {}};
    for (Eigen::Index i = 0; i < orders.size(); ++i) {
        int ai = orders(i) % p == 0 ? valuation(orders(i), p) : 0;
        l.a.push_back(ai);
        l.cof.push_back(orders(i) / pow_int(p, static_cast<unsigned>(ai)));
        l.A = std::max(l.A, ai);
    }
    return l;
}

// p-local coordinates (in Z/p^a_i) of an element of the p-Sylow subgroup -> ambient coordinates.
IntVector from_local(const PrimeLayout& l, const IntVector& y, const IntVector& orders) {
    IntVector x(orders.size());
    for (Eigen::Index i = 0; i < orders.size(); ++i) x(i) = mod(mul_mod(y(i), l.cof[i], orders(i)), orders(i));
    return x;
}

}  // namespace

AbelianBasis subgroup_basis(const IntVector& orders, const std::vector<IntVector>& generators) {
    AbelianBasis out;
    const i64 E = exponent_of(orders);
    const Eigen::Index n = orders.size();
    for (i64 p : prime_factors(E)) {
        PrimeLayout l = layout(orders, p);
        const i64 pA = pow_int(p, static_cast<unsigned>(l.A));
        const i64 mp = E / pow_int(p, static_cast<unsigned>(valuation(E, p)));
        if (generators.empty()) continue;
        IntMatrix M(n, static_cast<Eigen::Index>(generators.size()));
        for (size_t j = 0; j < generators.size(); ++j) {
            for (Eigen::Index i = 0; i < n; ++i) {
                i64 xi = mul_mod(generators[j](i), mp, orders(i));  // lies in the p-Sylow part
                // xi = cof * y with y mod p^a; embed y into Z/p^A by scaling
                i64 y = l.a[i] == 0 ? 0 : (xi / l.cof[i]) % pow_int(p, static_cast<unsigned>(l.a[i]));
                M(i, static_cast<Eigen::Index>(j)) = mul_mod(y, pow_int(p, static_cast<unsigned>(l.A - l.a[i])), pA);
            }
        }
        LocalSmith s = local_smith(M, p, l.A);
        IntMatrix C(n, M.cols());
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < M.cols(); ++j) {
                i64 acc = 0;
                for (Eigen::Index k = 0; k < M.cols(); ++k) acc = mod(acc + mul_mod(M(i, k), s.V(k, j), pA), pA);
                C(i, j) = acc;
            }
        std::vector<std::pair<i64, IntVector>> found;
        for (size_t t = 0; t < s.val.size(); ++t) {
            IntVector y(n);
            for (Eigen::Index i = 0; i < n; ++i) {
                i64 scale = pow_int(p, static_cast<unsigned>(l.A - l.a[i]));
                y(i) = l.a[i] == 0 ? 0 : C(i, static_cast<Eigen::Index>(t)) / scale;
            }
            found.emplace_back(pow_int(p, static_cast<unsigned>(l.A - s.val[t])), from_local(l, y, orders));
        }
        std::stable_sort(found.begin(), found.end(),
                         [](const auto& a, const auto& b) { return a.first > b.first; });
        for (auto& [ord, g] : found) {
            out.orders.push_back(ord);
            out.gens.push_back(g);
        }
    }
    return out;
}

AbelianBasis kernel_basis(const IntVector& orders, const IntMatrix& phi, i64 modulus) {
    const i64 E = exponent_of(orders);
    const Eigen::Index n = orders.size();
    std::vector<IntVector> gens;
    for (i64 p : prime_factors(E)) {
        PrimeLayout l = layout(orders, p);
        const int c = modulus % p == 0 ? valuation(modulus, p) : 0;
        if (c == 0) {
            for (Eigen::Index i = 0; i < n; ++i) {
                if (l.a[i] == 0) continue;
                IntVector y = IntVector::Zero(n);
                y(i) = 1;
                gens.push_back(from_local(l, y, orders));
            }
            continue;
        }
        const i64 pc = pow_int(p, static_cast<unsigned>(c));
        const i64 step = modulus / pc;
        IntMatrix psi(phi.rows(), n);
        for (Eigen::Index j = 0; j < phi.rows(); ++j)
            for (Eigen::Index i = 0; i < n; ++i) {
                i64 v = mod(static_cast<i64>((static_cast<i128>(l.cof[i]) * mod(phi(j, i), modulus)) % modulus), modulus);
                if (v % step != 0) throw ArithmeticError("kernel_basis: ill-defined functional");
                psi(j, i) = (v / step) % pc;
            }
        LocalSmith s = local_smith(psi, p, c);
        for (Eigen::Index t = 0; t < n; ++t) {
            i64 scale = 1;
            if (static_cast<size_t>(t) < s.val.size()) scale = pow_int(p, static_cast<unsigned>(c - s.val[t]));
            IntVector y(n);
            for (Eigen::Index i = 0; i < n; ++i) {
                i64 pa = pow_int(p, static_cast<unsigned>(l.a[i]));
                y(i) = l.a[i] == 0 ? 0 : mod(mul_mod(s.V(i, t), scale, pa), pa);
            }
            gens.push_back(from_local(l, y, orders));
        }
    }
    return subgroup_basis(orders, gens);
}

}  // namespace qlat

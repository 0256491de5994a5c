#include "qlat/normal_form.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>

namespace qlat {

namespace {

// p^k * v for a rational v with denominator dividing p^k, as an integer.
i64 scaled(const Rational& v, i64 pk) {
    Rational s = v * Rational(pk);
    if (!s.is_integer()) throw FormError("normal form: unexpected denominator");
    return s.num();
}

// Hensel lift of a root of g modulo 2^k, starting from t0 with g(t0) even and g' odd.
template <typename G, typename DG>
i64 hensel2(G g, DG dg, i64 t0, int k) {
    const i64 n = pow_int(2, static_cast<unsigned>(k));
    i64 t = mod(t0, n);
    for (int it = 0; it <= k + 1; ++it) t = mod(t - mul_mod(g(t), inv_mod(dg(t), n), n), n);
    if (mod(g(t), n) != 0) throw FormError("normal form: Hensel lifting failed");
    return t;
}

}  // namespace

NormalForm::NormalForm(const FiniteQuadraticForm& f, i64 p) : f_(f), p_(p) {
    PrimaryPart part = p_primary_part(f, p);
    std::vector<IntVector> work = part.embedding;
    std::vector<int> exps;
    for (i64 o : part.form.orders()) exps.push_back(valuation(o, p));

    auto bnum = [&](const IntVector& x, const IntVector& y, i64 pk) { return mod(scaled(f.b(x, y), pk), pk); };
    auto qnum = [&](const IntVector& x, i64 pk) {  // p^k q(x) modulo 2 p^k
        return mod(scaled(f.q(x), pk), 2 * pk);
    };

    while (!work.empty()) {
        int k = *std::max_element(exps.begin(), exps.end());
        const i64 pk = pow_int(p, static_cast<unsigned>(k));
        std::vector<size_t> top;
        for (size_t i = 0; i < work.size(); ++i)
            if (exps[i] == k) top.push_back(i);

        JordanBlock blk;
        blk.k = k;
        std::vector<size_t> used;
        // cyclic generator: p^k q(x) a unit (odd p) or odd (p = 2)
        auto unit_diag = [&](size_t i) { return qnum(work[i], pk) % p != 0; };
        size_t pick = work.size();
        for (size_t i : top)
            if (unit_diag(i)) {
                pick = i;
                break;
            }
        if (pick == work.size() && p != 2) {
            for (size_t a = 0; a < top.size() && pick == work.size(); ++a)
                for (size_t b = a + 1; b < top.size(); ++b)
                    if (bnum(work[top[a]], work[top[b]], pk) % p != 0) {
                        work[top[a]] = f.add(work[top[a]], work[top[b]]);
                        pick = top[a];
                        break;
                    }
        }
        if (pick != work.size()) {
            blk.kind = BlockKind::Cyclic;
            blk.basis = {work[pick]};
            i64 m = qnum(work[pick], pk);  // in [0, 2p^k)
            if (m > pk) m -= 2 * pk;
            // rescale the generator by a unit: least |m| of the same sign
            i64 best_x = 1, best = m;
            for (i64 x = 2; x < pk; ++x) {
                if (x % p == 0) continue;
                i64 v = mod(mul_mod(mul_mod(x, x, 2 * pk), m, 2 * pk), 2 * pk);
                if (v > pk) v -= 2 * pk;
                if ((v < 0) == (m < 0) && std::abs(v) < std::abs(best)) {
                    best = v;
                    best_x = x;
                }
            }
            blk.basis = {f.scale(work[pick], best_x)};
            blk.m = best;
            used = {pick};
        } else {
            if (p != 2) throw FormError("normal form: degenerate form");
            size_t ia = work.size(), ib = work.size();
            for (size_t a = 0; a < top.size() && ia == work.size(); ++a)
                for (size_t b = a + 1; b < top.size(); ++b)
                    if (bnum(work[top[a]], work[top[b]], pk) % 2 != 0) {
                        ia = top[a];
                        ib = top[b];
                        break;
                    }
            if (ia == work.size()) throw FormError("normal form: degenerate form");
            IntVector x = work[ia];
            IntVector y = f.scale(work[ib], inv_mod(bnum(x, work[ib], pk), pk));
            const i64 a = qnum(x, pk) / 2 % pk, c = qnum(y, pk) / 2 % pk;
            IntVector e, g;
            if ((a * c) % 2 == 0) {
                i64 t0 = a % 2 == 0 ? 0 : 1;
                i64 t = hensel2([&](i64 t) { return mod(mul_mod(mul_mod(c, t, pk), t, pk) + t + a, pk); },
                                [&](i64 t) { return mod(2 * c * t + 1, pk); }, t0, k);
                e = f.add(x, f.scale(y, t));
                i64 beta = bnum(e, y, pk);
                i64 s = mod(-mul_mod(c, inv_mod(beta, pk), pk), pk);
                g = f.scale(f.add(y, f.scale(e, s)), inv_mod(beta, pk));
                blk.kind = BlockKind::U;
            } else {
                i64 t = hensel2([&](i64 t) { return mod(mul_mod(mul_mod(c, t, pk), t, pk) + t + a - 1, pk); },
                                [&](i64 t) { return mod(2 * c * t + 1, pk); }, 0, k);
                e = f.add(x, f.scale(y, t));
                IntVector f1 = f.scale(y, inv_mod(bnum(e, y, pk), pk));
                const i64 c1 = qnum(f1, pk) / 2 % pk;
                auto h = [&](i64 mu) {
                    i64 nu = mod(1 - 2 * mu, pk);
                    return mod(mul_mod(mul_mod(c1, nu, pk), nu, pk) + mul_mod(nu, mu, pk) + mul_mod(mu, mu, pk) - 1, pk);
                };
                auto dh = [&](i64 mu) { return mod((1 - 4 * c1) + mul_mod(2 * mu, 4 * c1 - 1, pk), pk); };
                i64 mu = hensel2(h, dh, 0, k);
                g = f.add(f.scale(f1, mod(1 - 2 * mu, pk)), f.scale(e, mu));
                blk.kind = BlockKind::V;
            }
            const Rational qe = blk.kind == BlockKind::U ? Rational(0) : Rational(2, pk);
            if (f.q(e) != qe.reduce_mod(2) || f.q(g) != qe.reduce_mod(2) || f.b(e, g) != Rational(1, pk).reduce_mod(1))
                throw FormError("normal form: 2-adic block standardization failed");
            blk.basis = {e, g};
            used = {ia, ib};
        }

        // project the remaining generators onto the orthogonal complement of the block
        std::vector<IntVector> rest;
        std::vector<int> rest_exps;
        for (size_t i = 0; i < work.size(); ++i) {
            if (std::find(used.begin(), used.end(), i) != used.end()) continue;
            IntVector z = work[i];
            if (blk.kind == BlockKind::Cyclic) {
                const IntVector& x = blk.basis[0];
                i64 cf = mul_mod(bnum(z, x, pk), inv_mod(bnum(x, x, pk), pk), pk);
                z = f.add(z, f.scale(x, -cf));
            } else {
                const IntVector &e = blk.basis[0], &g = blk.basis[1];
                i64 be = bnum(z, e, pk), bg = bnum(z, g, pk);
                i64 ce, cg;
                if (blk.kind == BlockKind::U) {
                    ce = bg;
                    cg = be;
                } else {
                    i64 i3 = inv_mod(3, pk);
                    ce = mul_mod(i3, mod(2 * be - bg, pk), pk);
                    cg = mul_mod(i3, mod(2 * bg - be, pk), pk);
                }
                z = f.add(z, f.add(f.scale(e, -ce), f.scale(g, -cg)));
            }
            rest.push_back(z);
            rest_exps.push_back(exps[i]);
        }
        work.swap(rest);
        exps.swap(rest_exps);
        blocks_.push_back(std::move(blk));
    }
    std::stable_sort(blocks_.begin(), blocks_.end(), [](const JordanBlock& a, const JordanBlock& b) {
        if (a.k != b.k) return a.k < b.k;
        return static_cast<int>(a.kind) < static_cast<int>(b.kind);
    });
}

size_t NormalForm::length() const {
    size_t l = 0;
    for (const auto& b : blocks_) l += b.rank();
    return l;
}

i64 NormalForm::order() const {
    i64 o = 1;
    for (const auto& b : blocks_) o *= pow_int(pow_int(p_, static_cast<unsigned>(b.k)), static_cast<unsigned>(b.rank()));
    return o;
}

std::vector<IntVector> NormalForm::basis() const {
    std::vector<IntVector> out;
    for (const auto& b : blocks_) out.insert(out.end(), b.basis.begin(), b.basis.end());
    return out;
}

std::vector<i64> NormalForm::orders() const {
    std::vector<i64> out;
    for (const auto& b : blocks_)
        for (size_t i = 0; i < b.rank(); ++i) out.push_back(pow_int(p_, static_cast<unsigned>(b.k)));
    return out;
}

RatMatrix NormalForm::gram() const {
    const Eigen::Index n = static_cast<Eigen::Index>(length());
    RatMatrix g = RatMatrix::Constant(n, n, Rational(0));
    Eigen::Index off = 0;
    for (const auto& b : blocks_) {
        const i64 pk = pow_int(p_, static_cast<unsigned>(b.k));
        if (b.kind == BlockKind::Cyclic) {
            g(off, off) = Rational(b.m, pk);
        } else {
            Rational d = b.kind == BlockKind::U ? Rational(0) : Rational(2, pk);
            g(off, off) = d;
            g(off + 1, off + 1) = d;
            g(off, off + 1) = g(off + 1, off) = Rational(1, pk);
        }
        off += static_cast<Eigen::Index>(b.rank());
    }
    return g;
}

IntVector NormalForm::coords(const IntVector& x) const {
    IntVector c(static_cast<Eigen::Index>(length()));
    Eigen::Index off = 0;
    for (const auto& b : blocks_) {
        const i64 pk = pow_int(p_, static_cast<unsigned>(b.k));
        auto bn = [&](const IntVector& y) { return mod(scaled(f_.b(x, y), pk), pk); };
        if (b.kind == BlockKind::Cyclic) {
            c(off) = mul_mod(bn(b.basis[0]), inv_mod(mod(b.m, pk), pk), pk);
        } else if (b.kind == BlockKind::U) {
            c(off) = bn(b.basis[1]);
            c(off + 1) = bn(b.basis[0]);
        } else {
            i64 be = bn(b.basis[0]), bg = bn(b.basis[1]), i3 = inv_mod(3, pk);
            c(off) = mul_mod(i3, mod(2 * be - bg, pk), pk);
            c(off + 1) = mul_mod(i3, mod(2 * bg - be, pk), pk);
        }
        off += static_cast<Eigen::Index>(b.rank());
    }
    return c;
}

bool NormalForm::even() const {
    if (p_ != 2) return true;
    for (const auto& b : blocks_)
        if (b.kind == BlockKind::Cyclic) return false;
    return true;
}

Rational NormalForm::det_unit() const {
    Rational u(1);
    for (const auto& b : blocks_) {
        if (b.kind == BlockKind::Cyclic) u *= Rational(b.m);
        else if (b.kind == BlockKind::U) u *= Rational(-1);
        else u *= Rational(3);
    }
    return u;
}

std::string NormalForm::str() const {
    std::ostringstream os;
    bool first = true;
    for (const auto& b : blocks_) {
        if (!first) os << " + ";
        first = false;
        const i64 pk = pow_int(p_, static_cast<unsigned>(b.k));
        if (b.kind == BlockKind::Cyclic) os << b.m << "/" << pk;
        else os << (b.kind == BlockKind::U ? "U" : "V") << "(2^" << b.k << ")";
    }
    return first ? "0" : os.str();
}

bool is_even_2part(const FiniteQuadraticForm& f) { return NormalForm(f, 2).even(); }

PDet det_p(const FiniteQuadraticForm& f, i64 p) {
    NormalForm nf(f, p);
    PDet d;
    d.p = p;
    d.order_p = nf.order();
    if (nf.blocks().empty()) return d;
    d.unit_class = unit_square_class(nf.det_unit(), p);
    if (p == 2 && !nf.even()) {
        d.coarse = true;
        d.unit_class = (d.unit_class == 1 || d.unit_class == 5) ? 1 : 3;
    }
    return d;
}

int signature_mod8(const FiniteQuadraticForm& f) {
    double turns = 0.0;  // in units of 2 pi
    for (i64 p : primes_of(f)) {
        NormalForm nf(f, p);
        for (const auto& b : nf.blocks()) {
            if (b.kind == BlockKind::V && b.k % 2 == 1) turns += 0.5;
            if (b.kind != BlockKind::Cyclic) continue;
            i64 n = 1;
            for (int i = 0; i < b.k; ++i) n *= p;
            std::complex<double> g = 0.0;
            for (i64 x = 0; x < n; ++x) {
                // exp(pi i m x^2 / n), exponent reduced modulo 2n
                const i64 e = mod(mod(b.m, 2 * n) * mod(x * x, 2 * n), 2 * n);
                g += std::polar(1.0, std::numbers::pi * static_cast<double>(e) / static_cast<double>(n));
            }
            turns += std::arg(g) / (2 * std::numbers::pi);
        }
    }
    const long eighths = std::lround(turns * 8.0);
    return static_cast<int>(((eighths % 8) + 8) % 8);
}

}  // namespace qlat

#include "qlat/miranda_morrison.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace qlat {

namespace {

using Vec = GammaProduct::Vec;

// Residue of a p-integral rational modulo m = p^k.
i64 residue(const Rational& r, i64 m) {
    return mul_mod(mod(r.num(), m), inv_mod(mod(r.den(), m), m), m);
}

i64 power(i64 p, int k) { return pow_int(p, static_cast<unsigned>(k)); }

int exponent_of(i64 order, i64 p) { return order == 1 ? 0 : valuation(order, p); }

IntMatrix reduce_rows(IntMatrix m, const std::vector<i64>& orders) {
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = mod(m(i, j), orders[static_cast<size_t>(i)]);
    return m;
}

int pow2(int e) { return 1 << e; }

}  // namespace

std::string GammaElement::str() const {
    std::ostringstream os;
    os << "(" << d << "," << s << ")";
    return os.str();
}

GammaProduct::GammaProduct(std::vector<i64> primes) : primes_(std::move(primes)) {
    for (i64 p : primes_) {
        offsets_.push_back(dim_);
        dim_ += p == 2 ? 3 : 2;
    }
    if (dim_ > 64) throw FormError("GammaProduct: too many irregular primes");
}

int GammaProduct::offset(i64 p) const {
    for (size_t i = 0; i < primes_.size(); ++i)
        if (primes_[i] == p) return offsets_[i];
    throw FormError("GammaProduct: prime " + std::to_string(p) + " is not irregular");
}

Vec GammaProduct::encode(const GammaElement& g) const {
    const int o = offset(g.p);
    Vec v = g.d == -1 ? Vec(1) << o : 0;
    if (g.p != 2) {
        if (g.s != 1) v |= Vec(1) << (o + 1);
        return v;
    }
    const i64 s = mod(g.s, 8);
    if (s == 3 || s == 7) v |= Vec(1) << (o + 1);
    if (s == 3 || s == 5) v |= Vec(1) << (o + 2);
    return v;
}

GammaElement GammaProduct::component(Vec v, i64 p) const {
    const int o = offset(p);
    GammaElement g{p, (v >> o) & 1 ? -1 : 1, 1};
    if (p != 2) {
        g.s = (v >> (o + 1)) & 1 ? least_nonresidue(p) : 1;
        return g;
    }
    const bool a = (v >> (o + 1)) & 1, b = (v >> (o + 2)) & 1;
    g.s = a ? (b ? 3 : 7) : (b ? 5 : 1);
    return g;
}

Vec GammaProduct::restrict(Vec v, i64 p) const {
    const int o = offset(p);
    const int w = p == 2 ? 3 : 2;
    return v & (((Vec(1) << w) - 1) << o);
}

Vec GammaProduct::local(i64 p, int d, const Rational& x) const {
    if (x.is_zero()) throw FormError("GammaProduct::local: zero spinor norm");
    Vec v = encode({p, d, unit_square_class(x.unit_part(p), p)});
    if (x.valuation(p) % 2 != 0)
        for (i64 q : primes_)
            if (q != p) v ^= encode({q, 1, unit_square_class(Rational(p), q)});
    return v;
}

Vec GammaProduct::global(int d, int s) const {
    Vec v = 0;
    for (i64 p : primes_) v ^= encode({p, d, unit_square_class(Rational(s), p)});
    return v;
}

std::string GammaProduct::str(Vec v) const {
    std::ostringstream os;
    for (size_t i = 0; i < primes_.size(); ++i) {
        if (i) os << " ";
        os << primes_[i] << ":" << component(v, primes_[i]).str();
    }
    return os.str();
}

bool F2Span::add(Vec v) {
    v = reduce(v);
    if (v == 0) return false;
    const Vec lead = Vec(1) << (63 - __builtin_clzll(v));
    for (auto& r : rows_)
        if (r & lead) r ^= v;
    rows_.push_back(v);
    std::sort(rows_.begin(), rows_.end(), std::greater<>());
    return true;
}

F2Span::Vec F2Span::reduce(Vec v) const {
    for (Vec r : rows_) {
        const Vec lead = Vec(1) << (63 - __builtin_clzll(r));
        if (v & lead) v ^= r;
    }
    return v;
}

// ---------------------------------------------------------------------------

LabelledChain::LabelledChain(std::vector<i64> orders) : orders_(std::move(orders)) {
    const size_t n = orders_.size();
    levels_.resize(n);
    i64 radix = 1;
    for (size_t i = 0; i < n; ++i) {
        auto& l = levels_[i];
        l.base = radix;
        radix *= orders_[i];
        const auto id = IntMatrix::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
        l.trans.emplace(l.base, Elt{id, id, 0});
        l.points.push_back(l.base);
        l.done_gens.push_back(0);
    }
}

LabelledChain::Elt LabelledChain::mul(const Elt& a, const Elt& b) const {
    return Elt{reduce_rows(a.m * b.m, orders_), reduce_rows(b.inv * a.inv, orders_), a.label ^ b.label};
}

i64 LabelledChain::image(const IntMatrix& m, i64 point) const {
    const size_t n = orders_.size();
    IntVector x(static_cast<Eigen::Index>(n));
    for (size_t i = 0; i < n; ++i) {
        x(static_cast<Eigen::Index>(i)) = point % orders_[i];
        point /= orders_[i];
    }
    IntVector y = m * x;
    i64 out = 0;
    for (size_t i = n; i-- > 0;) out = out * orders_[i] + mod(y(static_cast<Eigen::Index>(i)), orders_[i]);
    return out;
}

std::pair<LabelledChain::Elt, size_t> LabelledChain::strip(Elt g, size_t start) const {
    for (size_t l = start; l < levels_.size(); ++l) {
        const auto& lev = levels_[l];
        auto it = lev.trans.find(image(g.m, lev.base));
        if (it == lev.trans.end()) return {g, l};
        g = mul(Elt{it->second.inv, it->second.m, it->second.label}, g);
    }
    return {g, levels_.size()};
}

void LabelledChain::insert(const Elt& g, size_t upto) {
    for (size_t l = 0; l <= upto; ++l) levels_[l].gens.push_back(g);
}

void LabelledChain::complete(size_t l) {
    auto& lev = levels_[l];
    for (size_t i = 0; i < lev.points.size(); ++i) {
        for (const auto& s : lev.gens) {
            const i64 y = image(s.m, lev.points[i]);
            if (lev.trans.count(y)) continue;
            lev.trans.emplace(y, mul(s, lev.trans.at(lev.points[i])));
            lev.points.push_back(y);
            lev.done_gens.push_back(0);
        }
    }
    for (size_t i = 0; i < lev.points.size(); ++i) {
        while (lev.done_gens[i] < lev.gens.size()) {
            const Elt s = lev.gens[lev.done_gens[i]++];
            const Elt& ux = lev.trans.at(lev.points[i]);
            const Elt& uy = lev.trans.at(image(s.m, lev.points[i]));
            Elt h = mul(Elt{uy.inv, uy.m, uy.label}, mul(s, ux));
            auto [r, j] = strip(std::move(h), l + 1);
            if (j == levels_.size()) {
                if (r.label) kernel_.push_back(r.label);
                continue;
            }
            for (size_t m = l + 1; m <= j; ++m) levels_[m].gens.push_back(r);
            for (size_t m = j; m > l; --m) complete(m);
        }
    }
}

void LabelledChain::add(const IntMatrix& m, const IntMatrix& inv, Vec label) {
    if (levels_.empty()) {
        if (label) kernel_.push_back(label);
        return;
    }
    auto [r, j] = strip(Elt{reduce_rows(m, orders_), reduce_rows(inv, orders_), label}, 0);
    if (j == levels_.size()) {
        if (r.label) kernel_.push_back(r.label);
        return;
    }
    insert(r, j);
    for (size_t l = j + 1; l-- > 0;) complete(l);
}

std::optional<LabelledChain::Vec> LabelledChain::sift(const IntMatrix& g) const {
    const auto n = static_cast<Eigen::Index>(orders_.size());
    auto [r, j] = strip(Elt{reduce_rows(g, orders_), IntMatrix::Identity(n, n), 0}, 0);
    if (j != levels_.size()) return std::nullopt;
    return r.label;
}

double LabelledChain::order() const {
    double o = 1;
    for (const auto& l : levels_) o *= static_cast<double>(l.points.size());
    return o;
}

// ---------------------------------------------------------------------------

std::optional<DiscReflection> disc_reflection(const NormalForm& nf, const IntVector& a) {
    const i64 p = nf.p();
    const RatMatrix& q = nf.gram();
    const auto orders = nf.orders();
    const RatVector ar = a.cast<Rational>();
    Rational qa = bilinear(q, ar, ar).reduce_mod(2);
    if (qa.is_zero()) return std::nullopt;
    const int j = -qa.valuation(p);
    DiscReflection r;
    r.a = a;
    if (p == 2) {
        if (j < 0) return std::nullopt;
        r.k = j + 1;
    } else {
        if (j <= 0) return std::nullopt;
        r.k = j;
    }
    const i64 pk = power(p, r.k);
    for (Eigen::Index i = 0; i < a.size(); ++i)
        if (mod(a(i) * pk, orders[static_cast<size_t>(i)]) != 0) return std::nullopt;
    // a^2 = 2u/p^k
    r.u = residue(qa * Rational(pk) / Rational(2), pk);
    r.exceptional = p == 2 && r.k <= 2;
    return r;
}

IntMatrix reflection_matrix(const NormalForm& nf, const DiscReflection& r) {
    const i64 pk = power(nf.p(), r.k);
    const auto orders = nf.orders();
    const auto n = static_cast<Eigen::Index>(orders.size());
    const RatVector qa = nf.gram() * RatVector(r.a.cast<Rational>());
    const i64 uinv = inv_mod(r.u, pk);
    IntMatrix m = IntMatrix::Identity(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        const i64 coef = mul_mod(residue(qa(j) * Rational(pk), pk), uinv, pk);
        for (Eigen::Index i = 0; i < n; ++i) m(i, j) = mod(m(i, j) - coef * r.a(i), orders[static_cast<size_t>(i)]);
    }
    return m;
}

namespace {

std::vector<int> scale_exponents(const NormalForm& nf) {
    std::vector<int> k;
    for (i64 o : nf.orders()) k.push_back(exponent_of(o, nf.p()));
    return k;
}

Rational target_unit(const GenusSymbol& g, i64 p) {
    const i64 order = g.disc.order();
    const i64 order_p = NormalForm(g.disc, p).order();
    return Rational(g.sig_minus % 2 ? -1 : 1) * Rational(order / order_p);
}

}  // namespace

IntMatrix lift_2adic(const GenusSymbol& g) {
    NormalForm nf(g.disc, 2);
    const auto k = scale_exponents(nf);
    const auto n = static_cast<Eigen::Index>(k.size());
    IntMatrix lift(n, n);
    const RatMatrix& q = nf.gram();
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
            Rational v = q(i, j) * Rational(pow2(k[static_cast<size_t>(i)])) * Rational(pow2(k[static_cast<size_t>(j)]));
            if (!v.is_integer()) throw FormError("lift_2adic: non-integral lift");
            lift(i, j) = v.num();
        }
    if (n == 0) return lift;
    const i64 want = unit_square_class(target_unit(g, 2), 2);
    Rational u = nf.det_unit();
    if (unit_square_class(u, 2) != want) {
        Eigen::Index pos = 0;
        bool found = false;
        for (const auto& b : nf.blocks()) {
            if (b.kind == BlockKind::Cyclic && b.k == 1) {
                found = true;
                break;
            }
            pos += static_cast<Eigen::Index>(b.rank());
        }
        if (!found || unit_square_class(u * Rational(5), 2) != want)
            throw FormError("lift_2adic: no lift with determinant (-1)^sigma_- |discr T|");
        lift(pos, pos) *= 5;
    }
    return lift;
}

namespace {

IntVector lifted_vector(const NormalForm& nf, const DiscReflection& r) {
    const auto k = scale_exponents(nf);
    IntVector v(r.a.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        // 2^k a_i / 2^{k_i}
        const int e = r.k - k[static_cast<size_t>(i)];
        v(i) = e >= 0 ? r.a(i) * pow2(e) : r.a(i) / pow2(-e);
    }
    return v;
}

Rational lattice_square(const IntMatrix& lift, const IntVector& v) {
    return Rational(bilinear(lift, v, v));
}

// Action on disc coordinates of the reflection of the lift in v, or nullopt
// when the reflection is not integral.
std::optional<IntMatrix> lattice_reflection_on_disc(const NormalForm& nf, const IntMatrix& lift, const IntVector& v) {
    const Rational vv = lattice_square(lift, v);
    if (vv.is_zero()) return std::nullopt;
    const IntVector gv = lift * v;
    for (Eigen::Index i = 0; i < gv.size(); ++i)
        if (gv(i) != 0 && (Rational(2 * gv(i)) / vv).valuation(2) < 0) return std::nullopt;
    const auto k = scale_exponents(nf);
    const auto orders = nf.orders();
    const auto n = static_cast<Eigen::Index>(k.size());
    // disc coordinate c <-> lattice vector D^{-1} c
    IntMatrix m = IntMatrix::Identity(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        const Rational s = Rational(2 * gv(j)) / (vv * Rational(pow2(k[static_cast<size_t>(j)])));
        for (Eigen::Index i = 0; i < n; ++i) {
            const Rational c = s * Rational(v(i) * pow2(k[static_cast<size_t>(i)]));
            if (c.is_zero()) continue;
            if (c.valuation(2) < 0) throw FormError("lattice reflection does not preserve the dual lattice");
            const i64 o = orders[static_cast<size_t>(i)];
            m(i, j) = mod(m(i, j) - residue(c, o), o);
        }
    }
    return m;
}

// Action on disc coordinates of an isometry M of the lift.
IntMatrix lattice_isometry_on_disc(const NormalForm& nf, const IntMatrix& mat) {
    const auto k = scale_exponents(nf);
    const auto orders = nf.orders();
    const auto n = static_cast<Eigen::Index>(k.size());
    IntMatrix m(n, n);
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = 0; i < n; ++i) {
            const Rational c = Rational(mat(i, j) * pow2(k[static_cast<size_t>(i)])) /
                               Rational(pow2(k[static_cast<size_t>(j)]));
            if (!c.is_zero() && c.valuation(2) < 0) throw FormError("lattice isometry does not preserve the dual lattice");
            m(i, j) = residue(c, orders[static_cast<size_t>(i)]);
        }
    return m;
}

// Eichler transformation x -> x + (x.e) a - (x.a) e - a^2/2 (x.e) e for e
// isotropic and a orthogonal to e, products taken in `gram`; nullopt when not integral.
std::optional<IntMatrix> eichler(const IntMatrix& gram, const IntVector& e, const IntVector& a) {
    const IntVector ge = gram * e, ga = gram * a;
    const i64 aa = bilinear(gram, a, a);
    IntMatrix m = IntMatrix::Identity(gram.rows(), gram.cols());
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
        if (aa % 2 != 0 && ge(j) % 2 != 0) return std::nullopt;
        m.col(j) += ge(j) * a - ga(j) * e - (aa * ge(j) / 2) * e;
    }
    return m;
}

// Vectors with at most two nonzero coordinates, each +-1.
std::vector<IntVector> short_combinations(Eigen::Index n) {
    std::vector<IntVector> out;
    for (Eigen::Index i = 0; i < n; ++i) {
        IntVector v = IntVector::Zero(n);
        v(i) = 1;
        out.push_back(v);
        for (Eigen::Index j = i + 1; j < n; ++j)
            for (int s : {1, -1}) {
                IntVector w = v;
                w(j) = s;
                out.push_back(w);
            }
    }
    return out;
}

}  // namespace

Rational spin_via_lift(const NormalForm& nf, const IntMatrix& lift, const DiscReflection& r) {
    const Rational sq = lattice_square(lift, lifted_vector(nf, r));
    if (sq.is_zero()) throw FormError("spin_via_lift: isotropic lift");
    return sq / Rational(2);
}

// ---------------------------------------------------------------------------

MirandaMorrison::MirandaMorrison(const GenusSymbol& g) : genus_(g), gamma_(primes_of(g.disc)) {
    if (g.rank() < 3 || g.sig_plus == 0 || g.sig_minus == 0)
        throw FormError("MirandaMorrison: genus must be indefinite of rank >= 3");
    for (i64 p : gamma_.primes()) {
        NormalForm nf(g.disc, p);
        auto orders = nf.orders();
        locals_.push_back(Local{p, nf, false, IntMatrix(), F2Span(), LabelledChain(orders)});
        build_local(locals_.back());
        for (Vec v : locals_.back().sigma.basis()) sigma_.add(v);
    }
    quotient_ = sigma_;
    quotient_.add(gamma_.global(-1, 1));
    quotient_.add(gamma_.global(1, -1));
    quotient_plus_ = sigma_;
    quotient_plus_.add(gamma_.global(-1, -1));
}

MirandaMorrison::Vec MirandaMorrison::reflection_label(const Local& loc, const DiscReflection& r) const {
    if (loc.lifted) return gamma_.local(2, -1, spin_via_lift(loc.nf, loc.lift, r));
    return gamma_.local(loc.p, -1, Rational(r.u) * Rational(power(loc.p, r.k)));
}

void MirandaMorrison::build_local(Local& loc) {
    const i64 p = loc.p;
    const int r0 = genus_.rank() - static_cast<int>(loc.nf.length());
    if (p != 2) {
        if (r0 >= 2) {
            loc.sigma.add(gamma_.encode({p, -1, 1}));
            loc.sigma.add(gamma_.encode({p, 1, least_nonresidue(p)}));
        } else if (r0 == 1) {
            // unimodular constituent <eps0>; its reflection has spinor norm eps0/2
            Rational eps0 = target_unit(genus_, p);
            for (const auto& b : loc.nf.blocks()) eps0 /= Rational(b.m);
            loc.sigma.add(gamma_.encode({p, -1, unit_square_class(eps0 * Rational(2), p)}));
        }
    } else if (r0 >= 1) {
        loc.sigma.add(gamma_.encode({2, -1, 1}));
        loc.sigma.add(gamma_.encode({2, 1, 3}));
        loc.sigma.add(gamma_.encode({2, 1, 5}));
    } else {
        loc.lifted = true;
        loc.lift = lift_2adic(genus_);
    }

    const auto orders = loc.nf.orders();
    const auto n = static_cast<Eigen::Index>(orders.size());
    i64 total = 1;
    for (i64 o : orders) total *= o;
    for (i64 idx = 0; idx < total; ++idx) {
        IntVector a(n);
        i64 t = idx;
        for (Eigen::Index i = 0; i < n; ++i) {
            a(i) = t % orders[static_cast<size_t>(i)];
            t /= orders[static_cast<size_t>(i)];
        }
        auto r = disc_reflection(loc.nf, a);
        if (!r) continue;
        const IntMatrix m = reflection_matrix(loc.nf, *r);
        loc.chain.add(m, m, reflection_label(loc, *r));
        if (!loc.lifted) continue;
        // other lifts of a: abar + 2^k e_i
        const IntVector abar = lifted_vector(loc.nf, *r);
        for (Eigen::Index i = 0; i < n; ++i) {
            IntVector v = abar;
            v(i) += pow2(r->k);
            auto mv = lattice_reflection_on_disc(loc.nf, loc.lift, v);
            if (!mv) continue;
            loc.chain.add(*mv, *mv, gamma_.local(2, -1, lattice_square(loc.lift, v) / Rational(2)));
        }
    }
    if (loc.lifted) {
        // reflections in vectors of square 2 * unit act trivially on the discriminant
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = i; j < n; ++j)
                for (int ci = 1; ci <= 2; ++ci)
                    for (int cj = -2; cj <= 2; ++cj) {
                        IntVector v = IntVector::Zero(n);
                        v(i) += ci;
                        v(j) += cj;
                        const Rational sq = lattice_square(loc.lift, v);
                        if (sq.is_zero()) continue;
                        auto mv = lattice_reflection_on_disc(loc.nf, loc.lift, v);
                        if (!mv) continue;
                        loc.chain.add(*mv, *mv, gamma_.local(2, -1, sq / Rational(2)));
                    }
        // reflections need not generate O(T_2); Eichler transformations have trivial label
        // (built on the lift divided by its 2-power content, where more of them are integral)
        i64 content = 0;
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j) content = std::gcd(content, loc.lift(i, j));
        const IntMatrix primitive = loc.lift / pow2(exponent_of(content, 2));
        const auto combos = short_combinations(n);
        for (const auto& e : combos) {
            if (bilinear(primitive, e, e) != 0) continue;
            for (const auto& a : combos) {
                if (bilinear(primitive, e, a) != 0 || a == e) continue;
                auto fwd = eichler(primitive, e, a);
                auto back = eichler(primitive, e, (-a).eval());
                if (!fwd || !back) continue;
                loc.chain.add(lattice_isometry_on_disc(loc.nf, *fwd), lattice_isometry_on_disc(loc.nf, *back), 0);
            }
        }
        for (Vec v : loc.chain.kernel_labels()) {
            if (v != gamma_.restrict(v, 2)) throw FormError("MirandaMorrison: odd 2-adic valuation in a relation");
            loc.sigma.add(v);
        }
        return;
    }
    for (Vec v : loc.chain.kernel_labels()) {
        if (v != gamma_.restrict(v, p) || !loc.sigma.contains(v))
            throw FormError("MirandaMorrison: reflection relation outside Sigma# at p = " + std::to_string(p));
    }
}

std::vector<GammaElement> MirandaMorrison::sigma_sharp_elements(i64 p) const {
    for (const auto& loc : locals_) {
        if (loc.p != p) continue;
        const auto& b = loc.sigma.basis();
        std::vector<GammaElement> out;
        for (size_t mask = 0; mask < (size_t(1) << b.size()); ++mask) {
            Vec v = 0;
            for (size_t i = 0; i < b.size(); ++i)
                if (mask >> i & 1) v ^= b[i];
            out.push_back(gamma_.component(v, p));
        }
        std::sort(out.begin(), out.end(), [](const GammaElement& x, const GammaElement& y) {
            return std::pair(-x.d, x.s) < std::pair(-y.d, y.s);
        });
        return out;
    }
    // regular prime: all of Gamma_{p,0}
    std::vector<GammaElement> out;
    const std::vector<i64> units = p == 2 ? std::vector<i64>{1, 3, 5, 7} : std::vector<i64>{1, least_nonresidue(p)};
    for (int d : {1, -1})
        for (i64 s : units) out.push_back({p, d, s});
    return out;
}

std::vector<GammaElement> sigma_sharp_p(const GenusSymbol& g, i64 p) { return MirandaMorrison(g).sigma_sharp_elements(p); }

int MirandaMorrison::e_order() const { return pow2(gamma_.dim() - quotient_.rank()); }
int MirandaMorrison::e_plus_order() const { return pow2(gamma_.dim() - quotient_plus_.rank()); }

namespace {

bool in_all_local(const GammaProduct& gamma, const std::vector<F2Span>& spans, Vec v) {
    for (size_t i = 0; i < spans.size(); ++i)
        if (!spans[i].contains(gamma.restrict(v, gamma.primes()[i]))) return false;
    return true;
}

}  // namespace

int MirandaMorrison::e_order_from_indices() const {
    int log_e = 0;
    std::vector<F2Span> spans;
    for (const auto& loc : locals_) {
        log_e += (loc.p == 2 ? 3 : 2) - loc.sigma.rank();
        spans.push_back(loc.sigma);
    }
    int tilde = 0;
    for (int d : {1, -1})
        for (int s : {1, -1}) tilde += in_all_local(gamma_, spans, gamma_.global(d, s)) ? 1 : 0;
    return pow2(log_e) * tilde / 4;
}

int MirandaMorrison::e_plus_order_from_indices() const {
    int log_e = 0;
    std::vector<F2Span> spans;
    for (const auto& loc : locals_) {
        log_e += (loc.p == 2 ? 3 : 2) - loc.sigma.rank();
        spans.push_back(loc.sigma);
    }
    int tilde = 1 + (in_all_local(gamma_, spans, gamma_.global(-1, -1)) ? 1 : 0);
    return pow2(log_e) * tilde / 2;
}

IntMatrix MirandaMorrison::local_matrix(const Local& loc, const IntMatrix& g) const {
    const auto basis = loc.nf.basis();
    const auto n = static_cast<Eigen::Index>(basis.size());
    IntMatrix m(n, n);
    for (Eigen::Index j = 0; j < n; ++j) m.col(j) = loc.nf.coords(genus_.disc.apply(g, basis[static_cast<size_t>(j)]));
    return m;
}

MirandaMorrison::Vec MirandaMorrison::e(const IntMatrix& g) const {
    Vec v = 0;
    for (const auto& loc : locals_) {
        auto label = loc.chain.sift(local_matrix(loc, g));
        if (!label)
            throw FormError("MirandaMorrison: automorphism of discr_" + std::to_string(loc.p) +
                            " is not a product of reflections");
        v ^= *label;
    }
    return v;
}

std::optional<MirandaMorrison::Vec> MirandaMorrison::reflection_image(const IntVector& a) const {
    std::optional<Vec> out;
    for (const auto& loc : locals_) {
        IntVector c = loc.nf.coords(a);
        if (c.isZero()) continue;
        if (out) return std::nullopt;  // not primary
        auto r = disc_reflection(loc.nf, c);
        if (!r) return std::nullopt;
        out = reflection_label(loc, *r);
    }
    return out;
}

ComponentCounts MirandaMorrison::component_counts(const std::vector<IntMatrix>& aut) const {
    F2Span e = quotient_, ep = quotient_plus_;
    for (const auto& g : aut) {
        const Vec v = this->e(g);
        e.add(v);
        ep.add(v);
    }
    const int rc = pow2(gamma_.dim() - e.rank());
    const int rc2 = pow2(gamma_.dim() - ep.rank());
    ComponentCounts out{2 * rc - rc2, rc2 - rc};
    if (out.real < 0 || out.pairs < 0) throw FormError("MirandaMorrison: negative component count");
    return out;
}

MMDiagnostics MirandaMorrison::diagnostics(const std::vector<IntMatrix>& aut) const {
    MMDiagnostics d;
    d.primes = gamma_.primes();
    for (i64 p : d.primes) {
        std::vector<std::string> s;
        for (const auto& g : sigma_sharp_elements(p)) s.push_back(g.str());
        d.sigma_sharp.push_back(std::move(s));
    }
    d.e_order = e_order();
    d.e_plus_order = e_plus_order();
    for (const auto& g : aut) d.images.push_back(gamma_.str(e(g)));
    d.counts = component_counts(aut);
    return d;
}

ComponentCounts component_counts(const Configuration& c) {
    return MirandaMorrison(complement_genus(c)).component_counts(c.aut_h);
}

}  // namespace qlat

#include "qlat/configurations.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <unordered_map>

namespace qlat {

namespace {

// Digit arithmetic on discr S_h, column by column.
struct Arith {
    SingularitySet set;
    size_t n = 0;             // summand columns; column n is h
    std::vector<int> radix;   // classes per column
    std::vector<char> xor_add;
    std::vector<i64> place;
    i64 size = 1;
    i64 den = 4;
    std::vector<std::vector<i64>> qtab;               // numerators mod 2*den
    std::vector<std::vector<std::vector<i64>>> btab;  // numerators mod den

    explicit Arith(const SingularitySet& s) : set(s), n(s.summands.size()) {
        std::vector<FiniteQuadraticForm> forms;
        for (const auto& r : s.summands) {
            forms.push_back(root_discriminant(r).form);
            den = lcm(den, forms.back().den());
        }
        for (size_t c = 0; c <= n; ++c) {
            const bool is_h = c == n;
            const int k = is_h ? 4 : class_count(s.summands[c]);
            radix.push_back(k);
            xor_add.push_back(!is_h && s.summands[c].kind == RootKind::D && s.summands[c].rank % 2 == 0);
            place.push_back(size);
            size *= k;
            std::vector<i64> qt(k);
            std::vector<std::vector<i64>> bt(k, std::vector<i64>(k));
            for (int a = 0; a < k; ++a) {
                Rational qa = is_h ? Rational(a * a, 4) : forms[c].q(class_coords(s.summands[c], a));
                qt[a] = mod((qa * Rational(den)).num(), 2 * den);
                for (int b = 0; b < k; ++b) {
                    Rational bab = is_h ? Rational(a * b, 4)
                                        : forms[c].b(class_coords(s.summands[c], a), class_coords(s.summands[c], b));
                    bt[a][b] = mod((bab * Rational(den)).num(), den);
                }
            }
            qtab.push_back(std::move(qt));
            btab.push_back(std::move(bt));
        }
    }

    int add1(size_t c, int a, int b) const { return xor_add[c] ? (a ^ b) : (a + b) % radix[c]; }
    Glue add(const Glue& a, const Glue& b) const {
        Glue r(n + 1);
        for (size_t c = 0; c <= n; ++c) r[c] = add1(c, a[c], b[c]);
        return r;
    }
    Glue zero() const { return Glue(n + 1, 0); }
    i64 q(const Glue& x) const {
        i64 s = 0;
        for (size_t c = 0; c <= n; ++c) s += qtab[c][x[c]];
        return mod(s, 2 * den);
    }
    i64 b(const Glue& x, const Glue& y) const {
        i64 s = 0;
        for (size_t c = 0; c <= n; ++c) s += btab[c][x[c]][y[c]];
        return mod(s, den);
    }
    i64 encode(const Glue& x) const {
        i64 i = 0;
        for (size_t c = 0; c <= n; ++c) i += place[c] * x[c];
        return i;
    }
    Glue decode(i64 i) const {
        Glue x(n + 1);
        for (size_t c = 0; c <= n; ++c) {
            x[c] = static_cast<int>(i % radix[c]);
            i /= radix[c];
        }
        return x;
    }
    void check(const Glue& x) const {
        if (x.size() != n + 1) throw FormError("glue code has wrong length for " + set.str());
        for (size_t c = 0; c <= n; ++c)
            if (x[c] < 0 || x[c] >= radix[c]) throw FormError("glue digit out of range for " + set.str());
    }
    std::vector<i64> span(const std::vector<i64>& start, const Glue& x) const {
        // closure of a subgroup (sorted indices) under adding x
        std::vector<i64> out = start;
        std::vector<Glue> layer;
        for (i64 i : start) layer.push_back(decode(i));
        Glue m = x;
        while (!std::binary_search(start.begin(), start.end(), encode(m))) {
            for (const auto& k : layer) out.push_back(encode(add(k, m)));
            m = add(m, x);
        }
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }
};

bool good_element(const Arith& ar, const Glue& x) {
    if (ar.q(x) != 0) return false;
    const int h = x[ar.n];
    std::vector<int> d(x.begin(), x.end() - 1);
    if (h == 0) {
        if (std::all_of(d.begin(), d.end(), [](int v) { return v == 0; })) return true;
        return !coset_has_norm(ar.set, d, Rational(2));
    }
    if (h == 2) return !coset_has_norm(ar.set, d, Rational(1));
    return true;
}

std::vector<i64> span_indices(const Arith& ar, const std::vector<Glue>& gens) {
    std::vector<i64> k{0};
    for (const auto& g : gens) k = ar.span(k, g);
    return k;
}

// A deterministic generating set: greedily take elements of largest order,
// lexicographically first, until they span K.
std::vector<Glue> nice_generators(const Arith& ar, const std::vector<i64>& elems) {
    std::vector<Glue> all;
    for (i64 i : elems)
        if (i != 0) all.push_back(ar.decode(i));
    auto order = [&](const Glue& x) {
        int o = 1;
        for (Glue m = x; m != ar.zero(); m = ar.add(m, x)) ++o;
        return o;
    };
    std::vector<int> ord;
    for (const auto& x : all) ord.push_back(order(x));
    std::vector<size_t> idx(all.size());
    std::iota(idx.begin(), idx.end(), size_t{0});
    std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) {
        if (ord[a] != ord[b]) return ord[a] > ord[b];
        return all[a] < all[b];
    });
    std::vector<Glue> gens;
    std::vector<i64> cur{0};
    for (size_t i : idx) {
        if (cur.size() == elems.size()) break;
        if (std::binary_search(cur.begin(), cur.end(), ar.encode(all[i]))) continue;
        gens.push_back(all[i]);
        cur = ar.span(cur, all[i]);
    }
    return gens;
}

}  // namespace

Glue PolarizedDisc::digits(const IntVector& x) const {
    const Eigen::Index r = static_cast<Eigen::Index>(form.rank());
    IntVector y = form.reduce(x);
    Glue g = layout.digits(y.head(r - 1));
    g.push_back(static_cast<int>(y(r - 1)));
    return g;
}

IntVector PolarizedDisc::from_digits(const Glue& g) const {
    const Eigen::Index r = static_cast<Eigen::Index>(form.rank());
    IntVector x(r);
    x.head(r - 1) = layout.from_digits(Glue(g.begin(), g.end() - 1));
    x(r - 1) = g.back();
    return form.reduce(x);
}

PolarizedDisc polarized_discr(const SingularitySet& s) {
    PolarizedDisc pd;
    pd.layout = disc_layout(s);
    pd.form = direct_sum({pd.layout.form, cyclic_form(1, 4)});
    return pd;
}

std::vector<Glue> glue_span(const SingularitySet& s, const std::vector<Glue>& gens) {
    Arith ar(s);
    for (const auto& g : gens) ar.check(g);
    std::vector<Glue> out;
    for (i64 i : span_indices(ar, gens)) out.push_back(ar.decode(i));
    std::sort(out.begin(), out.end());
    return out;
}

bool admissible_element(const SingularitySet& s, const Glue& x) {
    Arith ar(s);
    ar.check(x);
    return good_element(ar, x);
}

bool is_isotropic_kernel(const SingularitySet& s, const std::vector<Glue>& gens) {
    Arith ar(s);
    for (i64 i : span_indices(ar, gens))
        if (ar.q(ar.decode(i)) != 0) return false;
    return true;
}

bool condition_roots(const SingularitySet& s, const std::vector<Glue>& gens) {
    for (const auto& x : glue_span(s, gens)) {
        if (x.back() != 0) continue;
        std::vector<int> d(x.begin(), x.end() - 1);
        if (std::all_of(d.begin(), d.end(), [](int v) { return v == 0; })) continue;
        if (coset_has_norm(s, d, Rational(2))) return false;
    }
    return true;
}

bool condition_hyperplane(const SingularitySet& s, const std::vector<Glue>& gens) {
    for (const auto& x : glue_span(s, gens)) {
        if (x.back() != 2) continue;
        if (coset_has_norm(s, std::vector<int>(x.begin(), x.end() - 1), Rational(1))) return false;
    }
    return true;
}

bool is_valid_kernel(const SingularitySet& s, const std::vector<Glue>& gens) {
    return is_isotropic_kernel(s, gens) && condition_roots(s, gens) && condition_hyperplane(s, gens);
}

std::string format_glue(const Glue& g) {
    const bool wide = std::any_of(g.begin(), g.end(), [](int d) { return d > 9; });
    std::ostringstream os;
    for (size_t i = 0; i < g.size(); ++i) {
        if (wide && i > 0) os << ',';
        os << g[i];
    }
    return os.str();
}

std::string format_glue(const std::vector<Glue>& gens) {
    std::string out;
    for (size_t i = 0; i < gens.size(); ++i) {
        if (i > 0) out += "; ";
        out += format_glue(gens[i]);
    }
    return out;
}

std::vector<Glue> parse_glue(const SingularitySet& s, const std::string& text) {
    Arith ar(s);
    std::vector<Glue> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ';')) {
        item.erase(std::remove_if(item.begin(), item.end(), [](unsigned char c) { return std::isspace(c); }), item.end());
        if (item.empty()) continue;
        Glue g;
        if (item.find(',') != std::string::npos) {
            std::stringstream is(item);
            std::string tok;
            while (std::getline(is, tok, ',')) {
                if (tok.empty() || !std::all_of(tok.begin(), tok.end(), ::isdigit))
                    throw FormError("bad glue code: " + item);
                g.push_back(std::stoi(tok));
            }
        } else {
            for (char c : item) {
                if (!std::isdigit(static_cast<unsigned char>(c))) throw FormError("bad glue code: " + item);
                g.push_back(c - '0');
            }
        }
        ar.check(g);
        out.push_back(std::move(g));
    }
    return out;
}

// ---------------------------------------------------------------------------

SymmetryGroup::SymmetryGroup(const SingularitySet& s) {
    std::vector<IrreducibleRoot> types;
    for (const auto& r : s.summands) {
        auto it = std::find(types.begin(), types.end(), r);
        int t = static_cast<int>(it - types.begin());
        if (it == types.end()) {
            types.push_back(r);
            perms_.push_back(summand_symmetries(r));
            cols_of_type_.emplace_back();
        }
        type_.push_back(t);
        cols_of_type_[t].push_back(static_cast<int>(type_.size()) - 1);
    }
    for (const auto& ps : perms_) {
        const size_t m = ps.size();
        std::vector<std::vector<int>> c(m, std::vector<int>(m));
        for (size_t a = 0; a < m; ++a)
            for (size_t b = 0; b < m; ++b) {
                std::vector<int> p(ps[a].size());
                for (size_t x = 0; x < p.size(); ++x) p[x] = ps[a][ps[b][x]];
                c[a][b] = static_cast<int>(std::find(ps.begin(), ps.end(), p) - ps.begin());
                if (c[a][b] == static_cast<int>(m)) throw FormError("summand symmetries are not a group");
            }
        comp_.push_back(std::move(c));
    }
}

SymmetryGroup::Element SymmetryGroup::identity() const {
    Element e;
    e.col.resize(columns());
    std::iota(e.col.begin(), e.col.end(), 0);
    e.sym.assign(columns(), 0);
    return e;
}

std::vector<SymmetryGroup::Element> SymmetryGroup::generators() const {
    std::vector<Element> gens;
    for (size_t i = 0; i < columns(); ++i) {
        const auto& ps = perms_[type_[i]];
        // the generating symmetries of one summand; all of them is a small set
        for (size_t s = 1; s < ps.size(); ++s) {
            Element e = identity();
            e.sym[i] = static_cast<int>(s);
            gens.push_back(e);
        }
    }
    for (size_t i = 0; i + 1 < columns(); ++i) {
        if (type_[i] != type_[i + 1]) continue;
        Element e = identity();
        std::swap(e.col[i], e.col[i + 1]);
        gens.push_back(e);
    }
    return gens;
}

SymmetryGroup::Element SymmetryGroup::compose(const Element& a, const Element& b) const {
    Element r;
    r.col.resize(columns());
    r.sym.resize(columns());
    for (size_t i = 0; i < columns(); ++i) {
        r.col[i] = a.col[b.col[i]];
        r.sym[i] = comp_[type_[i]][a.sym[b.col[i]]][b.sym[i]];
    }
    return r;
}

Glue SymmetryGroup::apply(const Element& g, const Glue& x) const {
    Glue y(x.size());
    for (size_t i = 0; i < columns(); ++i) y[g.col[i]] = perms_[type_[i]][g.sym[i]][x[i]];
    y.back() = x.back();
    return y;
}

IntMatrix SymmetryGroup::matrix(const Element& g, const PolarizedDisc& pd) const {
    const Eigen::Index r = static_cast<Eigen::Index>(pd.form.rank());
    IntMatrix m(r, r);
    for (Eigen::Index j = 0; j < r; ++j) m.col(j) = pd.from_digits(apply(g, pd.digits(pd.form.basis(j))));
    return m;
}

std::optional<SymmetryGroup::Element> SymmetryGroup::search(const std::vector<Glue>& a, const std::vector<Glue>& b,
                                                             const std::vector<Forced>& prefix) const {
    if (a.size() != b.size()) return std::nullopt;
    const size_t n = columns(), m = a.size();
    int maxd = 1;
    for (const auto& x : a)
        for (int d : x) maxd = std::max(maxd, d + 1);
    for (const auto& x : b)
        for (int d : x) maxd = std::max(maxd, d + 1);
    std::mt19937_64 rng(0x5eed);
    std::vector<std::vector<std::uint64_t>> z(n + 1, std::vector<std::uint64_t>(static_cast<size_t>(maxd)));
    for (auto& row : z)
        for (auto& v : row) v = rng();

    std::vector<std::uint64_t> ha(m), hb(m);
    for (size_t k = 0; k < m; ++k) {
        ha[k] = z[n][a[k].back()];
        hb[k] = z[n][b[k].back()];
    }
    auto same_multiset = [](std::vector<std::uint64_t> x, std::vector<std::uint64_t> y) {
        std::sort(x.begin(), x.end());
        std::sort(y.begin(), y.end());
        return x == y;
    };
    if (!same_multiset(ha, hb)) return std::nullopt;

    auto zero_in = [&](const std::vector<Glue>& s, size_t c) {
        return std::all_of(s.begin(), s.end(), [&](const Glue& x) { return x[c] == 0; });
    };
    // free source columns: those carrying digits first, identically zero ones last
    std::vector<int> order;
    for (size_t i = 0; i < prefix.size(); ++i) order.push_back(static_cast<int>(i));
    std::vector<int> tail;
    for (size_t i = prefix.size(); i < n; ++i) (zero_in(a, i) ? tail : order).push_back(static_cast<int>(i));
    const size_t nonzero_end = order.size();
    order.insert(order.end(), tail.begin(), tail.end());

    Element g = identity();
    std::vector<char> used(n, 0);
    const std::vector<Glue> bsorted = [&] {
        auto t = b;
        std::sort(t.begin(), t.end());
        return t;
    }();

    std::function<bool(size_t, const std::vector<std::uint64_t>&, const std::vector<std::uint64_t>&)> rec =
        [&](size_t pos, const std::vector<std::uint64_t>& ca, const std::vector<std::uint64_t>& cb) -> bool {
        if (pos == nonzero_end) {
            // remaining sources are zero on A: they can go to any remaining target that is zero on B
            std::vector<int> free_t;
            for (size_t c = 0; c < n; ++c)
                if (!used[c]) {
                    if (!zero_in(b, c)) return false;
                    free_t.push_back(static_cast<int>(c));
                }
            std::vector<char> taken(free_t.size(), 0);
            for (size_t p = pos; p < n; ++p) {
                const int i = order[p];
                size_t k = 0;
                while (k < free_t.size() && (taken[k] || type_[free_t[k]] != type_[i])) ++k;
                if (k == free_t.size()) return false;
                taken[k] = 1;
                g.col[i] = free_t[k];
                g.sym[i] = 0;
            }
            for (const auto& x : a)
                if (!std::binary_search(bsorted.begin(), bsorted.end(), apply(g, x))) return false;
            return true;
        }
        const int i = order[pos];
        const int t = type_[i];
        std::vector<std::pair<int, int>> cand;
        if (pos < prefix.size()) cand.push_back({prefix[pos].col, prefix[pos].sym});
        else
            for (int c : cols_of_type_[t])
                if (!used[c])
                    for (size_t s = 0; s < perms_[t].size(); ++s) cand.push_back({c, static_cast<int>(s)});
        for (auto [c, s] : cand) {
            if (used[c] || type_[c] != t) continue;
            std::vector<std::uint64_t> na(ca), nb(cb);
            const auto& p = perms_[t][s];
            for (size_t k = 0; k < m; ++k) {
                na[k] += z[c][p[a[k][i]]];
                nb[k] += z[c][b[k][c]];
            }
            if (!same_multiset(na, nb)) continue;
            used[c] = 1;
            g.col[i] = c;
            g.sym[i] = s;
            if (rec(pos + 1, na, nb)) return true;
            used[c] = 0;
        }
        return false;
    };
    if (rec(0, ha, hb)) return g;
    return std::nullopt;
}

std::optional<SymmetryGroup::Element> SymmetryGroup::find_mapping(const std::vector<Glue>& a,
                                                                  const std::vector<Glue>& b) const {
    return search(a, b, {});
}

std::vector<SymmetryGroup::Element> SymmetryGroup::stabilizer(const std::vector<Glue>& elems) const {
    const size_t n = columns();
    bool trivial = std::all_of(elems.begin(), elems.end(), [&](const Glue& x) {
        return std::all_of(x.begin(), x.end() - 1, [](int d) { return d == 0; });
    });
    if (trivial) return generators();

    int maxsym = 1;
    for (const auto& ps : perms_) maxsym = std::max(maxsym, static_cast<int>(ps.size()));
    auto point = [&](int c, int s) { return c * maxsym + s; };
    std::vector<Element> gens;
    auto orbit_of = [&](int c0, int s0) {
        std::vector<char> seen(n * static_cast<size_t>(maxsym), 0);
        std::vector<std::pair<int, int>> queue{{c0, s0}};
        seen[point(c0, s0)] = 1;
        for (size_t q = 0; q < queue.size(); ++q) {
            auto [c, s] = queue[q];
            for (const auto& g : gens) {
                int c2 = g.col[c], s2 = comp_[type_[c]][g.sym[c]][s];
                if (!seen[point(c2, s2)]) {
                    seen[point(c2, s2)] = 1;
                    queue.push_back({c2, s2});
                }
            }
        }
        return seen;
    };
    for (int i = static_cast<int>(n) - 1; i >= 0; --i) {
        const int t = type_[i];
        std::vector<char> orbit = orbit_of(i, 0);
        std::vector<char> failed(orbit.size(), 0);
        std::vector<Forced> prefix;
        for (int j = 0; j < i; ++j) prefix.push_back({j, 0});
        for (int c : cols_of_type_[t]) {
            if (c < i) continue;
            for (size_t s = 0; s < perms_[t].size(); ++s) {
                const int pt = point(c, static_cast<int>(s));
                if (orbit[pt] || failed[pt]) continue;
                prefix.push_back({c, static_cast<int>(s)});
                auto g = search(elems, elems, prefix);
                prefix.pop_back();
                if (g) {
                    gens.push_back(*g);
                    orbit = orbit_of(i, 0);
                } else {
                    auto o = orbit_of(c, static_cast<int>(s));
                    for (size_t k = 0; k < o.size(); ++k)
                        if (o[k]) failed[k] = 1;
                }
            }
        }
    }
    return gens;
}

// ---------------------------------------------------------------------------

Configuration make_configuration(const SingularitySet& s, const std::vector<Glue>& gens) {
    if (!is_valid_kernel(s, gens)) throw FormError("invalid kernel " + format_glue(gens) + " for " + s.str());
    Arith ar(s);
    SymmetryGroup grp(s);
    PolarizedDisc pd = polarized_discr(s);
    Configuration cf;
    cf.set = s;
    std::vector<i64> idx = span_indices(ar, gens);
    cf.kernel = nice_generators(ar, idx);
    for (i64 i : idx) cf.elements.push_back(ar.decode(i));
    std::sort(cf.elements.begin(), cf.elements.end());

    std::vector<IntVector> kv;
    for (const auto& g : cf.kernel) kv.push_back(pd.from_digits(g));
    Subquotient sq(pd.form, kv);
    cf.discr_tilde = sq.form();
    cf.section = sq.section();
    for (const auto& g : grp.stabilizer(cf.elements)) {
        IntMatrix m = grp.matrix(g, pd);
        cf.aut_ambient.push_back(m);
        cf.aut_h.push_back(sq.induced(m));
    }
    return cf;
}

namespace {

struct Rep {
    std::vector<i64> elems;  // sorted indices
    std::vector<Glue> glue;  // decoded elements
};

// Invariant of a subgroup under the symmetry group: per-element signatures and
// per-column profiles, both as sorted lists.
std::vector<std::int64_t> subgroup_invariant(const Arith& ar,
                                             const std::vector<std::vector<int>>& digit_orbit,
                                             const std::vector<int>& type_of, const std::vector<Glue>& elems) {
    std::vector<std::int64_t> sig;
    std::vector<std::int64_t> esig(elems.size());
    for (size_t k = 0; k < elems.size(); ++k) {
        std::vector<std::int64_t> parts;
        for (size_t c = 0; c < ar.n; ++c)
            if (elems[k][c] != 0) parts.push_back(type_of[c] * 64 + digit_orbit[c][elems[k][c]]);
        std::sort(parts.begin(), parts.end());
        std::uint64_t h = 1469598103934665603ULL ^ static_cast<std::uint64_t>(elems[k].back());
        for (auto p : parts) h = (h ^ static_cast<std::uint64_t>(p + 1)) * 1099511628211ULL;
        esig[k] = static_cast<std::int64_t>(h);
    }
    std::vector<std::int64_t> cols;
    for (size_t c = 0; c < ar.n; ++c) {
        std::vector<std::int64_t> col;
        for (size_t k = 0; k < elems.size(); ++k)
            col.push_back(esig[k] * 31 + digit_orbit[c][elems[k][c]]);
        std::sort(col.begin(), col.end());
        std::uint64_t h = static_cast<std::uint64_t>(type_of[c]) + 7;
        for (auto v : col) h = (h ^ static_cast<std::uint64_t>(v)) * 1099511628211ULL;
        cols.push_back(static_cast<std::int64_t>(h));
    }
    std::sort(cols.begin(), cols.end());
    sig = esig;
    std::sort(sig.begin(), sig.end());
    sig.insert(sig.end(), cols.begin(), cols.end());
    return sig;
}

struct UnionFind {
    std::unordered_map<i64, i64> parent;
    i64 find(i64 x) {
        auto it = parent.find(x);
        if (it == parent.end() || it->second == x) return x;
        i64 r = find(it->second);
        parent[x] = r;
        return r;
    }
    void unite(i64 a, i64 b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
};

}  // namespace

std::vector<Configuration> enumerate_configurations(const SingularitySet& s) {
    Arith ar(s);
    SymmetryGroup grp(s);

    // orbit id of each digit under the symmetries of its summand
    std::vector<int> type_of;
    std::vector<std::vector<int>> digit_orbit;
    {
        std::vector<IrreducibleRoot> types;
        for (const auto& r : s.summands) {
            auto it = std::find(types.begin(), types.end(), r);
            type_of.push_back(static_cast<int>(it - types.begin()));
            if (it == types.end()) types.push_back(r);
            auto syms = summand_symmetries(r);
            std::vector<int> o(static_cast<size_t>(class_count(r)));
            for (size_t d = 0; d < o.size(); ++d) {
                int m = static_cast<int>(d);
                for (const auto& p : syms) m = std::min(m, p[d]);
                o[d] = m;
            }
            digit_orbit.push_back(o);
        }
    }

    std::vector<i64> good;
    for (i64 i = 0; i < ar.size; ++i)
        if (i != 0 && good_element(ar, ar.decode(i))) good.push_back(i);
    std::vector<char> is_good(static_cast<size_t>(ar.size), 0);
    is_good[0] = 1;
    for (i64 i : good) is_good[static_cast<size_t>(i)] = 1;

    std::map<size_t, std::vector<Rep>> levels;
    std::map<size_t, std::unordered_map<std::uint64_t, std::vector<size_t>>> buckets;
    levels[1].push_back(Rep{{0}, {ar.zero()}});
    std::vector<Rep> found;

    for (auto lv = levels.begin(); lv != levels.end(); ++lv) {
        for (size_t ri = 0; ri < lv->second.size(); ++ri) {
            const Rep rep = lv->second[ri];
            found.push_back(rep);
            std::vector<Glue> kgens = rep.glue;
            auto in_k = [&](i64 i) { return std::binary_search(rep.elems.begin(), rep.elems.end(), i); };

            std::vector<i64> cand;
            for (i64 x : good) {
                if (in_k(x)) continue;
                Glue gx = ar.decode(x);
                bool perp = true;
                for (const auto& k : rep.glue)
                    if (ar.b(gx, k) != 0) {
                        perp = false;
                        break;
                    }
                if (!perp) continue;
                int m = 1;
                Glue y = gx;
                while (!in_k(ar.encode(y))) {
                    y = ar.add(y, gx);
                    ++m;
                }
                if (is_prime(m)) cand.push_back(x);
            }
            if (cand.empty()) continue;
            UnionFind uf;
            for (const auto& g : grp.stabilizer(rep.glue))
                for (i64 x : cand) uf.unite(x, ar.encode(grp.apply(g, ar.decode(x))));
            std::vector<i64> reps;
            for (i64 x : cand)
                if (uf.find(x) == x) reps.push_back(x);

            for (i64 x : reps) {
                std::vector<i64> ne = ar.span(rep.elems, ar.decode(x));
                if (!std::all_of(ne.begin(), ne.end(), [&](i64 e) { return is_good[static_cast<size_t>(e)] != 0; }))
                    continue;
                Rep nr;
                nr.elems = ne;
                for (i64 e : ne) nr.glue.push_back(ar.decode(e));
                auto inv = subgroup_invariant(ar, digit_orbit, type_of, nr.glue);
                std::uint64_t key = 0;
                for (auto v : inv) key = (key ^ static_cast<std::uint64_t>(v)) * 1099511628211ULL + 0x9e3779b97f4a7c15ULL;
                auto& bucket = buckets[ne.size()][key];
                auto& target = levels[ne.size()];
                bool dup = false;
                for (size_t j : bucket)
                    if (grp.find_mapping(nr.glue, target[j].glue)) {
                        dup = true;
                        break;
                    }
                if (dup) continue;
                bucket.push_back(target.size());
                target.push_back(std::move(nr));
            }
        }
    }

    std::vector<Configuration> out;
    for (const auto& r : found) {
        std::vector<Glue> gens = nice_generators(ar, r.elems);
        out.push_back(make_configuration(s, gens));
    }
    std::sort(out.begin(), out.end(), [](const Configuration& a, const Configuration& b) {
        if (a.elements.size() != b.elements.size()) return a.elements.size() < b.elements.size();
        return a.code() < b.code();
    });
    return out;
}

bool same_orbit(const SingularitySet& s, const std::vector<Glue>& a, const std::vector<Glue>& b) {
    SymmetryGroup grp(s);
    return grp.find_mapping(glue_span(s, a), glue_span(s, b)).has_value();
}

}  // namespace qlat

#include "qlat/root_lattice.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <regex>
#include <set>
#include <sstream>

namespace qlat {

IrreducibleRoot::IrreducibleRoot(RootKind k, int r) : kind(k), rank(r) {
    bool ok = (k == RootKind::A && r >= 1) || (k == RootKind::D && r >= 4) || (k == RootKind::E && r >= 6 && r <= 8);
    if (!ok) throw FormError("invalid root lattice type");
}

std::string IrreducibleRoot::str() const {
    const char c = kind == RootKind::A ? 'A' : kind == RootKind::D ? 'D' : 'E';
    return std::string(1, c) + std::to_string(rank);
}

bool operator<(const IrreducibleRoot& a, const IrreducibleRoot& b) {
    auto key = [](const IrreducibleRoot& r) {
        int k = r.kind == RootKind::E ? 0 : r.kind == RootKind::D ? 1 : 2;
        return std::make_pair(k, -r.rank);
    };
    return key(a) < key(b);
}

SingularitySet::SingularitySet(std::vector<IrreducibleRoot> s) : summands(std::move(s)) {
    std::stable_sort(summands.begin(), summands.end());
}

int SingularitySet::mu() const {
    int m = 0;
    for (const auto& r : summands) m += r.rank;
    return m;
}

std::string SingularitySet::str() const {
    if (summands.empty()) return "0";
    std::ostringstream os;
    for (size_t i = 0; i < summands.size();) {
        size_t j = i;
        while (j < summands.size() && summands[j] == summands[i]) ++j;
        if (i) os << "+";
        if (j - i > 1) os << (j - i);
        os << summands[i].str();
        i = j;
    }
    return os.str();
}

bool operator<(const SingularitySet& a, const SingularitySet& b) {
    if (a.mu() != b.mu()) return a.mu() < b.mu();
    return a.str() < b.str();
}

SingularitySet parse_singularities(const std::string& text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    std::vector<IrreducibleRoot> out;
    if (s.empty() || s == "0") return SingularitySet();
    static const std::regex term(R"((\d*)([ADE])(\d+))");
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, '+')) {
        std::smatch m;
        if (!std::regex_match(tok, m, term)) throw FormError("cannot parse singularity term '" + tok + "'");
        int mult = m[1].length() ? std::stoi(m[1]) : 1;
        RootKind k = m[2] == "A" ? RootKind::A : m[2] == "D" ? RootKind::D : RootKind::E;
        IrreducibleRoot r(k, std::stoi(m[3]));
        for (int i = 0; i < mult; ++i) out.push_back(r);
    }
    return SingularitySet(out);
}

std::vector<std::pair<int, int>> dynkin_edges(const IrreducibleRoot& r) {
    std::vector<std::pair<int, int>> e;
    const int n = r.rank;
    switch (r.kind) {
        case RootKind::A:
            for (int i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
            break;
        case RootKind::D:
            for (int i = 0; i + 1 < n - 1; ++i) e.emplace_back(i, i + 1);
            e.emplace_back(n - 3, n - 1);
            break;
        case RootKind::E:
            for (int i = 0; i + 1 < n - 1; ++i) e.emplace_back(i, i + 1);
            e.emplace_back(2, n - 1);
            break;
    }
    return e;
}

IntMatrix gram_matrix(const IrreducibleRoot& r) {
    IntMatrix g = IntMatrix::Zero(r.rank, r.rank);
    for (int i = 0; i < r.rank; ++i) g(i, i) = -2;
    for (auto [a, b] : dynkin_edges(r)) g(a, b) = g(b, a) = 1;
    return g;
}

IntMatrix gram_matrix(const SingularitySet& s) {
    IntMatrix g = IntMatrix::Zero(s.mu(), s.mu());
    int off = 0;
    for (const auto& r : s.summands) {
        g.block(off, off, r.rank, r.rank) = gram_matrix(r);
        off += r.rank;
    }
    return g;
}

namespace {

FiniteQuadraticForm form_from_reps(const IntMatrix& gram, const std::vector<RatVector>& reps, const std::vector<i64>& orders) {
    RatMatrix g = to_rational(gram);
    const Eigen::Index n = static_cast<Eigen::Index>(reps.size());
    RatMatrix m(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) m(i, j) = bilinear(g, reps[i], reps[j]);
    return FiniteQuadraticForm(orders, m);
}

i64 rep_order(const RatVector& v) {
    i64 o = 1;
    for (Eigen::Index i = 0; i < v.size(); ++i) o = lcm(o, v(i).den());
    return o;
}

}  // namespace

LatticeDiscriminant lattice_discriminant(const IntMatrix& gram) {
    const i64 det = std::abs(determinant(gram));
    if (det == 0) throw FormError("lattice_discriminant: degenerate lattice");
    const Eigen::Index n = gram.rows();
    RatMatrix inv = inverse(to_rational(gram));
    IntVector ambient = IntVector::Constant(n, det);
    std::vector<IntVector> gens;
    for (Eigen::Index j = 0; j < n; ++j) {
        IntVector c(n);
        for (Eigen::Index i = 0; i < n; ++i) c(i) = mod((inv(i, j) * Rational(det)).num(), det);
        gens.push_back(c);
    }
    AbelianBasis b = det == 1 ? AbelianBasis{} : subgroup_basis(ambient, gens);
    LatticeDiscriminant out;
    for (const auto& c : b.gens) {
        RatVector v(n);
        for (Eigen::Index i = 0; i < n; ++i) v(i) = Rational(c(i), det);
        out.reps.push_back(v);
    }
    out.form = form_from_reps(gram, out.reps, b.orders);
    return out;
}

LatticeDiscriminant root_discriminant(const IrreducibleRoot& r) {
    IntMatrix g = gram_matrix(r);
    RatMatrix inv = inverse(to_rational(g));
    auto weight = [&](int node) -> RatVector { return inv.col(node); };
    std::vector<RatVector> reps;
    const int n = r.rank;
    switch (r.kind) {
        case RootKind::A:
            reps = {weight(0)};
            break;
        case RootKind::D:
            if (n % 2 == 1) reps = {weight(n - 2)};
            else reps = {weight(n - 2), weight(0)};
            break;
        case RootKind::E:
            if (n == 6) reps = {weight(0)};
            else if (n == 7) reps = {weight(n - 2)};
            break;
    }
    std::vector<i64> orders;
    for (const auto& v : reps) orders.push_back(rep_order(v));
    LatticeDiscriminant out{form_from_reps(g, reps, orders), reps};
    // the chosen weights must generate the whole discriminant group
    if (out.form.order() != std::abs(determinant(g))) throw FormError("root_discriminant: weights do not generate");
    return out;
}

int class_count(const IrreducibleRoot& r) {
    switch (r.kind) {
        case RootKind::A: return r.rank + 1;
        case RootKind::D: return 4;
        case RootKind::E: return r.rank == 6 ? 3 : r.rank == 7 ? 2 : 1;
    }
    return 1;
}

int coordinate_count(const IrreducibleRoot& r) {
    if (r.kind == RootKind::D) return r.rank % 2 == 0 ? 2 : 1;
    if (r.kind == RootKind::E && r.rank == 8) return 0;
    return 1;
}

IntVector class_coords(const IrreducibleRoot& r, int digit) {
    if (digit < 0 || digit >= class_count(r)) throw FormError("glue digit out of range for " + r.str());
    IntVector c(coordinate_count(r));
    if (r.kind == RootKind::D && r.rank % 2 == 0) {
        c(0) = (digit == 1 || digit == 3) ? 1 : 0;
        c(1) = (digit == 2 || digit == 3) ? 1 : 0;
    } else if (c.size() == 1) {
        c(0) = digit;
    }
    return c;
}

int class_digit(const IrreducibleRoot& r, const IntVector& coords) {
    if (coords.size() == 0) return 0;
    if (r.kind == RootKind::D && r.rank % 2 == 0) {
        int a = static_cast<int>(coords(0) % 2), b = static_cast<int>(coords(1) % 2);
        return a == 0 ? (b == 0 ? 0 : 2) : (b == 0 ? 1 : 3);
    }
    return static_cast<int>(coords(0));
}

RatVector class_representative(const IrreducibleRoot& r, int digit) {
    LatticeDiscriminant d = root_discriminant(r);
    IntVector c = class_coords(r, digit);
    RatVector v = RatVector::Constant(r.rank, Rational(0));
    for (Eigen::Index i = 0; i < c.size(); ++i) v += Rational(c(i)) * d.reps[static_cast<size_t>(i)];
    return v;
}

std::vector<int> DiscLayout::digits(const IntVector& x) const {
    std::vector<int> d;
    for (size_t i = 0; i < set.summands.size(); ++i) d.push_back(class_digit(set.summands[i], summand_coords(x, i)));
    return d;
}

IntVector DiscLayout::from_digits(const std::vector<int>& digits) const {
    IntVector x = IntVector::Zero(form.rank());
    for (size_t i = 0; i < set.summands.size(); ++i) x.segment(offset[i], width[i]) = class_coords(set.summands[i], digits[i]);
    return x;
}

DiscLayout disc_layout(const SingularitySet& s) {
    DiscLayout l;
    l.set = s;
    std::vector<FiniteQuadraticForm> parts;
    int off = 0;
    for (const auto& r : s.summands) {
        l.offset.push_back(off);
        l.width.push_back(coordinate_count(r));
        off += coordinate_count(r);
        parts.push_back(root_discriminant(r).form);
    }
    l.form = direct_sum(parts);
    return l;
}

FiniteQuadraticForm discriminant_form(const SingularitySet& s) { return disc_layout(s).form; }

std::vector<CosetVector> coset_short_vectors(const IrreducibleRoot& r, int digit, const Rational& bound) {
    const int n = r.rank;
    RatMatrix p = -to_rational(gram_matrix(r));
    // Fincke-Pohst decomposition: Q(z) = sum_i q_ii (z_i + sum_{j>i} q_ij z_j)^2
    RatMatrix q = p;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            q(j, i) = q(i, j);
            q(i, j) = q(i, j) / q(i, i);
        }
        for (int k = i + 1; k < n; ++k)
            for (int l = k; l < n; ++l) q(k, l) -= q(k, i) * q(i, l);
    }
    RatVector w = class_representative(r, digit);
    std::vector<CosetVector> out;
    RatVector z(n);
    std::function<void(int, Rational)> rec = [&](int i, Rational rem) {
        if (i < 0) {
            out.push_back({z, bound - rem});
            return;
        }
        Rational s = w(i);
        for (int j = i + 1; j < n; ++j) s += q(i, j) * z(j);
        // z_i = w_i + y contributes q_ii (y + s)^2
        double center = -static_cast<double>(s.num()) / static_cast<double>(s.den());
        double radius = std::sqrt(std::max(0.0, static_cast<double>(rem.num()) / rem.den() / (static_cast<double>(q(i, i).num()) / q(i, i).den())));
        i64 lo = static_cast<i64>(std::floor(center - radius)) - 1, hi = static_cast<i64>(std::ceil(center + radius)) + 1;
        for (i64 y = lo; y <= hi; ++y) {
            Rational t = Rational(y) + s;
            Rational used = q(i, i) * t * t;
            if (used > rem) continue;
            z(i) = w(i) + Rational(y);
            rec(i - 1, rem - used);
        }
    };
    rec(n - 1, bound);
    std::sort(out.begin(), out.end(), [](const CosetVector& a, const CosetVector& b) {
        if (a.norm != b.norm) return a.norm < b.norm;
        for (Eigen::Index i = 0; i < a.v.size(); ++i)
            if (a.v(i) != b.v(i)) return a.v(i) < b.v(i);
        return false;
    });
    return out;
}

const std::vector<Rational>& coset_spectrum(const IrreducibleRoot& r, int digit) {
    static std::mutex mu;
    static std::map<std::tuple<int, int, int>, std::vector<Rational>> cache;
    auto key = std::make_tuple(static_cast<int>(r.kind), r.rank, digit);
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    std::vector<Rational> vals;
    for (const auto& cv : coset_short_vectors(r, digit, Rational(2)))
        if (vals.empty() || vals.back() != cv.norm) vals.push_back(cv.norm);
    std::lock_guard<std::mutex> lock(mu);
    return cache.emplace(key, std::move(vals)).first->second;
}

bool coset_has_norm(const SingularitySet& s, const std::vector<int>& digits, const Rational& norm) {
    std::vector<Rational> reach{Rational(0)};
    for (size_t i = 0; i < s.summands.size(); ++i) {
        const auto& spec = coset_spectrum(s.summands[i], digits[i]);
        std::vector<Rational> next;
        for (const auto& a : reach)
            for (const auto& b : spec) {
                Rational c = a + b;
                if (c <= norm) next.push_back(c);
            }
        std::sort(next.begin(), next.end());
        next.erase(std::unique(next.begin(), next.end()), next.end());
        reach.swap(next);
        if (reach.empty()) return false;
    }
    return std::binary_search(reach.begin(), reach.end(), norm);
}

std::vector<RatVector> coset_vectors_of_square(const SingularitySet& s, const IntVector& coset, const Rational& target) {
    if (target > Rational(0)) throw FormError("coset_vectors_of_square: target must be <= 0");
    DiscLayout l = disc_layout(s);
    std::vector<int> digits = l.digits(l.form.reduce(coset));
    const Rational bound = -target;
    std::vector<std::vector<CosetVector>> per;
    for (size_t i = 0; i < s.summands.size(); ++i) per.push_back(coset_short_vectors(s.summands[i], digits[i], bound));
    std::vector<RatVector> out;
    RatVector v = RatVector::Constant(s.mu(), Rational(0));
    std::function<void(size_t, int, Rational)> rec = [&](size_t i, int off, Rational rem) {
        if (i == per.size()) {
            if (rem.is_zero()) out.push_back(v);
            return;
        }
        for (const auto& cv : per[i]) {
            if (cv.norm > rem) break;
            v.segment(off, s.summands[i].rank) = cv.v;
            rec(i + 1, off + s.summands[i].rank, rem - cv.norm);
        }
    };
    rec(0, 0, bound);
    return out;
}

std::vector<std::vector<int>> summand_symmetries(const IrreducibleRoot& r) {
    const int c = class_count(r);
    std::vector<int> id(c);
    for (int i = 0; i < c; ++i) id[i] = i;
    std::vector<int> neg(c);
    for (int i = 0; i < c; ++i) neg[i] = (c - i) % c;
    switch (r.kind) {
        case RootKind::A:
            return r.rank == 1 ? std::vector<std::vector<int>>{id} : std::vector<std::vector<int>>{id, neg};
        case RootKind::D:
            if (r.rank == 4) {
                std::vector<std::vector<int>> s3;
                std::vector<int> p{1, 2, 3};
                do s3.push_back({0, p[0], p[1], p[2]});
                while (std::next_permutation(p.begin(), p.end()));
                return s3;
            }
            return {id, {0, 3, 2, 1}};
        case RootKind::E:
            return r.rank == 6 ? std::vector<std::vector<int>>{id, neg} : std::vector<std::vector<int>>{id};
    }
    return {id};
}

namespace {

// Matrix on a summand's coordinates realizing a digit permutation.
IntMatrix permutation_matrix(const IrreducibleRoot& r, const std::vector<int>& perm) {
    const int w = coordinate_count(r);
    IntMatrix m(w, w);
    for (int j = 0; j < w; ++j) {
        IntVector e = IntVector::Zero(w);
        e(j) = 1;
        m.col(j) = class_coords(r, perm[static_cast<size_t>(class_digit(r, e))]);
    }
    return m;
}

}  // namespace

std::vector<IntMatrix> symmetry_image(const SingularitySet& s) {
    DiscLayout l = disc_layout(s);
    const int n = l.rank();
    std::vector<IntMatrix> gens;
    for (size_t i = 0; i < s.summands.size(); ++i) {
        const auto& r = s.summands[i];
        auto syms = summand_symmetries(r);
        // generators: for D4 two transpositions suffice; otherwise the single nontrivial element
        std::vector<std::vector<int>> use;
        if (r.kind == RootKind::D && r.rank == 4) use = {{0, 2, 1, 3}, {0, 1, 3, 2}};
        else if (syms.size() > 1) use = {syms[1]};
        for (const auto& p : use) {
            IntMatrix m = IntMatrix::Identity(n, n);
            m.block(l.offset[i], l.offset[i], l.width[i], l.width[i]) = permutation_matrix(r, p);
            gens.push_back(m);
        }
    }
    for (size_t i = 0; i + 1 < s.summands.size(); ++i) {
        if (s.summands[i] != s.summands[i + 1] || l.width[i] == 0) continue;
        IntMatrix m = IntMatrix::Zero(n, n);
        for (int c = 0; c < n; ++c) m(c, c) = 1;
        const int a = l.offset[i], b = l.offset[i + 1], w = l.width[i];
        for (int k = 0; k < w; ++k) {
            m(a + k, a + k) = 0;
            m(b + k, b + k) = 0;
            m(a + k, b + k) = 1;
            m(b + k, a + k) = 1;
        }
        gens.push_back(m);
    }
    return gens;
}

std::vector<SingularitySet> enumerate_singularity_sets(int mu_max) {
    std::vector<IrreducibleRoot> types;
    for (int r = 8; r >= 6; --r)
        if (r <= mu_max) types.emplace_back(RootKind::E, r);
    for (int r = mu_max; r >= 4; --r) types.emplace_back(RootKind::D, r);
    for (int r = mu_max; r >= 1; --r) types.emplace_back(RootKind::A, r);
    std::vector<SingularitySet> out;
    std::vector<IrreducibleRoot> cur;
    std::function<void(size_t, int)> rec = [&](size_t start, int left) {
        if (!cur.empty()) out.emplace_back(cur);
        for (size_t t = start; t < types.size(); ++t) {
            if (types[t].rank > left) continue;
            cur.push_back(types[t]);
            rec(t, left - types[t].rank);
            cur.pop_back();
        }
    };
    rec(0, mu_max);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<SingularitySet> singularity_sets_of_rank(int mu) {
    std::vector<SingularitySet> out;
    for (auto& s : enumerate_singularity_sets(mu))
        if (s.mu() == mu) out.push_back(s);
    return out;
}

std::vector<ComponentMatch> identify_components(int n, const std::vector<std::pair<int, int>>& edges,
                                                const std::vector<int>& subset) {
    std::vector<char> in(static_cast<size_t>(n), 0);
    for (int v : subset) in[static_cast<size_t>(v)] = 1;
    std::vector<std::vector<int>> adj(static_cast<size_t>(n));
    for (auto [a, b] : edges)
        if (in[a] && in[b]) {
            adj[a].push_back(b);
            adj[b].push_back(a);
        }
    std::vector<char> seen(static_cast<size_t>(n), 0);
    std::vector<ComponentMatch> out;
    std::vector<int> sorted = subset;
    std::sort(sorted.begin(), sorted.end());
    for (int start : sorted) {
        if (seen[start]) continue;
        std::vector<int> comp{start};
        seen[start] = 1;
        for (size_t i = 0; i < comp.size(); ++i)
            for (int w : adj[comp[i]])
                if (!seen[w]) {
                    seen[w] = 1;
                    comp.push_back(w);
                }
        std::sort(comp.begin(), comp.end());
        int branch = -1;
        for (int v : comp) {
            if (adj[v].size() > 3) throw FormError("identify_components: not an ADE diagram");
            if (adj[v].size() == 3) {
                if (branch >= 0) throw FormError("identify_components: not an ADE diagram");
                branch = v;
            }
        }
        // walk from `from` through `next` away from `from`
        auto walk = [&](int from, int next) {
            std::vector<int> arm;
            int prev = from, cur = next;
            while (true) {
                arm.push_back(cur);
                int nxt = -1;
                for (int w : adj[cur])
                    if (w != prev) nxt = w;
                if (nxt < 0) break;
                prev = cur;
                cur = nxt;
            }
            return arm;
        };
        ComponentMatch m;
        const int sz = static_cast<int>(comp.size());
        if (branch < 0) {
            int end = comp[0];
            for (int v : comp)
                if (adj[v].size() <= 1) {
                    end = v;
                    break;
                }
            m.type = IrreducibleRoot(RootKind::A, sz);
            m.vertices = {end};
            if (sz > 1) {
                auto rest = walk(end, adj[end][0]);
                m.vertices.insert(m.vertices.end(), rest.begin(), rest.end());
            }
        } else {
            std::vector<std::vector<int>> arms;
            for (int w : adj[branch]) arms.push_back(walk(branch, w));
            std::stable_sort(arms.begin(), arms.end(), [](const auto& a, const auto& b) { return a.size() < b.size(); });
            size_t a1 = arms[0].size(), a2 = arms[1].size(), a3 = arms[2].size();
            if (a1 == 1 && a2 == 1) {
                m.type = IrreducibleRoot(RootKind::D, sz);
                std::vector<int> longarm(arms[2].rbegin(), arms[2].rend());
                m.vertices = longarm;
                m.vertices.push_back(branch);
                m.vertices.push_back(arms[0][0]);
                m.vertices.push_back(arms[1][0]);
            } else if (a1 == 1 && a2 == 2 && a3 >= 2 && a3 <= 4) {
                m.type = IrreducibleRoot(RootKind::E, sz);
                m.vertices = {arms[1][1], arms[1][0], branch};
                m.vertices.insert(m.vertices.end(), arms[2].begin(), arms[2].end());
                m.vertices.push_back(arms[0][0]);
            } else {
                throw FormError("identify_components: not an ADE diagram");
            }
        }
        out.push_back(std::move(m));
    }
    return out;
}

namespace {

// All multisets of irreducible types occurring as induced subgraphs of r (empty included).
const std::set<std::vector<IrreducibleRoot>>& induced_types(const IrreducibleRoot& r) {
    static std::mutex mu;
    static std::map<std::pair<int, int>, std::set<std::vector<IrreducibleRoot>>> cache;
    auto key = std::make_pair(static_cast<int>(r.kind), r.rank);
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    std::set<std::vector<IrreducibleRoot>> out;
    auto edges = dynkin_edges(r);
    for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << r.rank); ++mask) {
        std::vector<int> subset;
        for (int v = 0; v < r.rank; ++v)
            if (mask >> v & 1) subset.push_back(v);
        std::vector<IrreducibleRoot> types;
        for (const auto& c : identify_components(r.rank, edges, subset)) types.push_back(c.type);
        std::sort(types.begin(), types.end());
        out.insert(types);
    }
    return cache.emplace(key, std::move(out)).first->second;
}

}  // namespace

bool is_perturbation(const SingularitySet& sub, const SingularitySet& s) {
    std::map<IrreducibleRoot, int> need;
    for (const auto& r : sub.summands) need[r]++;
    std::function<bool(size_t)> rec = [&](size_t i) {
        bool done = true;
        for (auto& [t, c] : need)
            if (c > 0) done = false;
        if (done) return true;
        if (i == s.summands.size()) return false;
        for (const auto& option : induced_types(s.summands[i])) {
            std::map<IrreducibleRoot, int> take;
            for (const auto& t : option) take[t]++;
            bool fits = true;
            for (auto& [t, c] : take)
                if (need[t] < c) fits = false;
            if (!fits) continue;
            for (auto& [t, c] : take) need[t] -= c;
            bool ok = rec(i + 1);
            for (auto& [t, c] : take) need[t] += c;
            if (ok) return true;
        }
        return false;
    };
    return rec(0);
}

}  // namespace qlat

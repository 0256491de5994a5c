#include "qlat/finite_form.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <regex>
#include <set>
#include <sstream>
#include <unordered_map>

namespace qlat {

namespace {

Rational reduce_q(const Rational& r) { return r.reduce_mod(2); }
Rational reduce_b(const Rational& r) { return r.reduce_mod(1); }

}  // namespace

FiniteQuadraticForm::FiniteQuadraticForm(std::vector<i64> orders, const RatMatrix& gram)
    : orders_(std::move(orders)), gram_(gram) {
    const Eigen::Index n = static_cast<Eigen::Index>(orders_.size());
    if (gram_.rows() != n || gram_.cols() != n) throw FormError("gram matrix size does not match generator count");
    for (Eigen::Index i = 0; i < n; ++i) {
        if (orders_[i] < 1) throw FormError("generator order must be positive");
        order_ *= orders_[i];
        for (Eigen::Index j = 0; j < i; ++j)
            if (gram_(i, j) != gram_(j, i)) throw FormError("gram matrix not symmetric");
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            gram_(i, j) = i == j ? reduce_q(gram_(i, j)) : reduce_b(gram_(i, j));
            den_ = lcm(den_, gram_(i, j).den());
        }
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        Rational sq = gram_(i, i) * Rational(orders_[i] * orders_[i]);
        if (!sq.is_integer() || sq.num() % 2 != 0) throw FormError("order^2 * q(g) must lie in 2Z");
        for (Eigen::Index j = 0; j < n; ++j)
            if (!(gram_(i, j) * Rational(orders_[i])).is_integer()) throw FormError("order * b(g_i, g_j) must be integral");
    }
    num_ = IntMatrix(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) num_(i, j) = (gram_(i, j) * Rational(den_)).num();
}

IntVector FiniteQuadraticForm::order_vector() const {
    IntVector v(static_cast<Eigen::Index>(rank()));
    for (size_t i = 0; i < rank(); ++i) v(static_cast<Eigen::Index>(i)) = orders_[i];
    return v;
}

i64 FiniteQuadraticForm::q_num(const IntVector& x) const {
    const i64 m = 2 * den_;
    i128 s = 0;
    const Eigen::Index n = num_.rows();
    for (Eigen::Index i = 0; i < n; ++i) {
        if (x(i) == 0) continue;
        s += static_cast<i128>(x(i)) * x(i) % m * num_(i, i);
        for (Eigen::Index j = i + 1; j < n; ++j)
            if (x(j) != 0) s += 2 * (static_cast<i128>(x(i)) * x(j) % m) * num_(i, j);
        s %= m;
    }
    return mod(static_cast<i64>(s % m), m);
}

i64 FiniteQuadraticForm::b_num(const IntVector& x, const IntVector& y) const {
    i128 s = 0;
    const Eigen::Index n = num_.rows();
    for (Eigen::Index i = 0; i < n; ++i) {
        if (x(i) == 0) continue;
        for (Eigen::Index j = 0; j < n; ++j)
            if (y(j) != 0) s = (s + static_cast<i128>(x(i)) * y(j) % den_ * num_(i, j)) % den_;
    }
    return mod(static_cast<i64>(s), den_);
}

IntVector FiniteQuadraticForm::basis(size_t i) const {
    IntVector e = zero();
    e(static_cast<Eigen::Index>(i)) = 1 % orders_[i];
    return e;
}

IntVector FiniteQuadraticForm::reduce(const IntVector& x) const {
    IntVector r(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) r(i) = mod(x(i), orders_[i]);
    return r;
}

IntVector FiniteQuadraticForm::scale(const IntVector& x, i64 k) const {
    IntVector r(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) r(i) = mul_mod(mod(x(i), orders_[i]), mod(k, orders_[i]), orders_[i]);
    return r;
}

i64 FiniteQuadraticForm::element_order(const IntVector& x) const {
    i64 o = 1;
    for (Eigen::Index i = 0; i < x.size(); ++i) o = lcm(o, orders_[i] / gcd(mod(x(i), orders_[i]), orders_[i]));
    return o;
}

i64 FiniteQuadraticForm::index_of(const IntVector& x) const {
    i64 idx = 0;
    for (Eigen::Index i = x.size() - 1; i >= 0; --i) idx = idx * orders_[i] + mod(x(i), orders_[i]);
    return idx;
}

IntVector FiniteQuadraticForm::element(i64 index) const {
    IntVector x(static_cast<Eigen::Index>(rank()));
    for (size_t i = 0; i < rank(); ++i) {
        x(static_cast<Eigen::Index>(i)) = index % orders_[i];
        index /= orders_[i];
    }
    return x;
}

bool FiniteQuadraticForm::is_nondegenerate() const {
    const Eigen::Index n = static_cast<Eigen::Index>(rank());
    IntMatrix phi(n, n);
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = 0; i < n; ++i) phi(j, i) = mod(num_(i, j), den_);
    AbelianBasis radical = kernel_basis(order_vector(), phi, den_);
    return radical.gens.empty();
}

FiniteQuadraticForm FiniteQuadraticForm::negated() const { return FiniteQuadraticForm(orders_, -gram_); }

bool FiniteQuadraticForm::preserves_form(const IntMatrix& m) const {
    for (size_t i = 0; i < rank(); ++i) {
        IntVector gi = apply(m, basis(i));
        if (element_order(gi) > orders_[i] || orders_[i] % element_order(gi) != 0) return false;
        if (q_num(gi) != q_num(basis(i))) return false;
        for (size_t j = i + 1; j < rank(); ++j)
            if (b_num(gi, apply(m, basis(j))) != b_num(basis(i), basis(j))) return false;
    }
    return true;
}

bool FiniteQuadraticForm::is_bijective(const IntMatrix& m) const {
    std::vector<IntVector> imgs;
    for (size_t i = 0; i < rank(); ++i) imgs.push_back(apply(m, basis(i)));
    return static_cast<i64>(subgroup_elements(*this, imgs).size()) == order_;
}

std::string FiniteQuadraticForm::str() const {
    if (rank() == 0) return "0";
    bool diagonal = true;
    for (Eigen::Index i = 0; i < gram_.rows(); ++i)
        for (Eigen::Index j = 0; j < gram_.cols(); ++j)
            if (i != j && !gram_(i, j).is_zero()) diagonal = false;
    std::ostringstream os;
    if (diagonal) {
        for (size_t i = 0; i < rank(); ++i) {
            if (i) os << " + ";
            Rational v = gram_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i));
            // print m/n with n the generator order
            Rational m = v * Rational(orders_[i]);
            if (m > Rational(orders_[i])) m -= Rational(2 * orders_[i]);
            os << m.num() << "/" << orders_[i];
        }
        return os.str();
    }
    os << "orders [";
    for (size_t i = 0; i < rank(); ++i) os << (i ? "," : "") << orders_[i];
    os << "] gram [";
    for (Eigen::Index i = 0; i < gram_.rows(); ++i) {
        os << (i ? "; " : "");
        for (Eigen::Index j = 0; j < gram_.cols(); ++j) os << (j ? " " : "") << gram_(i, j);
    }
    os << "]";
    return os.str();
}

std::string format_element(const IntVector& x) {
    std::ostringstream os;
    os << "[";
    for (Eigen::Index i = 0; i < x.size(); ++i) os << (i ? "," : "") << x(i);
    os << "]";
    return os.str();
}

IntVector parse_element(const std::string& s) {
    std::vector<i64> v;
    std::string tok;
    for (char c : s) {
        if (c == '[' || c == ']' || c == ' ') continue;
        if (c == ',') {
            v.push_back(std::stoll(tok));
            tok.clear();
        } else {
            tok += c;
        }
    }
    if (!tok.empty()) v.push_back(std::stoll(tok));
    IntVector x(static_cast<Eigen::Index>(v.size()));
    for (size_t i = 0; i < v.size(); ++i) x(static_cast<Eigen::Index>(i)) = v[i];
    return x;
}

FiniteQuadraticForm cyclic_form(i64 m, i64 n) {
    if (n < 1) throw FormError("cyclic_form: n must be positive");
    if (n == 1) return FiniteQuadraticForm();
    if (gcd(m, n) != 1 || (m * n) % 2 != 0)
        throw FormError("cyclic_form: need gcd(m,n)=1 and mn even, got " + std::to_string(m) + "/" + std::to_string(n));
    RatMatrix g(1, 1);
    g(0, 0) = Rational(m, n);
    return FiniteQuadraticForm({n}, g);
}

FiniteQuadraticForm u_block(int k) {
    if (k < 1) throw FormError("u_block: k must be >= 1");
    i64 n = pow_int(2, static_cast<unsigned>(k));
    RatMatrix g(2, 2);
    g << Rational(0), Rational(1, n), Rational(1, n), Rational(0);
    return FiniteQuadraticForm({n, n}, g);
}

FiniteQuadraticForm v_block(int k) {
    if (k < 1) throw FormError("v_block: k must be >= 1");
    i64 n = pow_int(2, static_cast<unsigned>(k));
    RatMatrix g(2, 2);
    g << Rational(2, n), Rational(1, n), Rational(1, n), Rational(2, n);
    return FiniteQuadraticForm({n, n}, g);
}

FiniteQuadraticForm direct_sum(const std::vector<FiniteQuadraticForm>& forms) {
    std::vector<i64> orders;
    for (const auto& f : forms) orders.insert(orders.end(), f.orders().begin(), f.orders().end());
    const Eigen::Index n = static_cast<Eigen::Index>(orders.size());
    RatMatrix g = RatMatrix::Constant(n, n, Rational(0));
    Eigen::Index off = 0;
    for (const auto& f : forms) {
        const Eigen::Index r = static_cast<Eigen::Index>(f.rank());
        g.block(off, off, r, r) = f.gram();
        off += r;
    }
    return FiniteQuadraticForm(orders, g);
}

FiniteQuadraticForm parse_form(const std::string& text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    std::vector<FiniteQuadraticForm> parts;
    if (s.empty() || s == "0") return FiniteQuadraticForm();
    // split on '+' that is not a sign (a sign follows another '+' or starts the string)
    std::vector<std::string> tokens;
    std::string cur;
    for (size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '+' && !cur.empty()) {
            tokens.push_back(cur);
            cur.clear();
        } else {
            cur += s[i];
        }
    }
    if (!cur.empty()) tokens.push_back(cur);
    static const std::regex block(R"(([UV])\((?:2\^(\d+)|(\d+))\))");
    for (const auto& t : tokens) {
        std::smatch m;
        if (std::regex_match(t, m, block)) {
            int k;
            if (m[2].matched) {
                k = std::stoi(m[2]);
            } else {
                i64 n = std::stoll(m[3]);
                k = valuation(n, 2);
                if (pow_int(2, static_cast<unsigned>(k)) != n) throw FormError("U/V block order must be a power of 2");
            }
            parts.push_back(m[1] == "U" ? u_block(k) : v_block(k));
        } else {
            auto slash = t.find('/');
            if (slash == std::string::npos) throw FormError("cannot parse form token '" + t + "'");
            i64 num, den;
            try {
                num = std::stoll(t.substr(0, slash));
                den = std::stoll(t.substr(slash + 1));
            } catch (const std::logic_error&) {
                throw FormError("cannot parse form token '" + t + "'");
            }
            parts.push_back(cyclic_form(num, den));
        }
    }
    return direct_sum(parts);
}

PrimaryPart p_primary_part(const FiniteQuadraticForm& f, i64 p) {
    std::vector<i64> orders;
    std::vector<IntVector> emb;
    for (size_t i = 0; i < f.rank(); ++i) {
        i64 n = f.orders()[i];
        if (n % p != 0) continue;
        i64 pa = pow_int(p, static_cast<unsigned>(valuation(n, p)));
        orders.push_back(pa);
        emb.push_back(f.scale(f.basis(i), n / pa));
    }
    const Eigen::Index r = static_cast<Eigen::Index>(orders.size());
    RatMatrix g(r, r);
    for (Eigen::Index i = 0; i < r; ++i)
        for (Eigen::Index j = 0; j < r; ++j) g(i, j) = i == j ? f.q(emb[i]) : f.b(emb[i], emb[j]);
    return {FiniteQuadraticForm(orders, g), emb};
}

int length_p(const FiniteQuadraticForm& f, i64 p) {
    int l = 0;
    for (i64 n : f.orders())
        if (n % p == 0) ++l;
    return l;
}

std::vector<i64> primes_of(const FiniteQuadraticForm& f) {
    std::set<i64> ps;
    for (i64 n : f.orders())
        for (i64 p : prime_factors(n)) ps.insert(p);
    return {ps.begin(), ps.end()};
}

int length(const FiniteQuadraticForm& f) {
    int l = 0;
    for (i64 p : primes_of(f)) l = std::max(l, length_p(f, p));
    return l;
}

std::vector<i64> subgroup_elements(const FiniteQuadraticForm& f, const std::vector<IntVector>& gens) {
    std::vector<i64> elems{f.index_of(f.zero())};
    std::unordered_map<i64, bool> seen{{elems[0], true}};
    for (const auto& g : gens) {
        IntVector gr = f.reduce(g);
        if (seen.count(f.index_of(gr))) continue;
        // extend by multiples of g
        std::vector<i64> base = elems;
        IntVector step = gr;
        while (!seen.count(f.index_of(step))) {
            for (i64 e : base) {
                IntVector y = f.add(f.element(e), step);
                i64 idx = f.index_of(y);
                if (!seen.count(idx)) {
                    seen[idx] = true;
                    elems.push_back(idx);
                }
            }
            step = f.add(step, gr);
        }
    }
    std::sort(elems.begin(), elems.end());
    return elems;
}

bool is_isotropic(const FiniteQuadraticForm& f, const std::vector<IntVector>& gens) {
    for (size_t i = 0; i < gens.size(); ++i) {
        if (f.q_num(gens[i]) != 0) return false;
        for (size_t j = i + 1; j < gens.size(); ++j)
            if (f.b_num(gens[i], gens[j]) != 0) return false;
    }
    return true;
}

std::vector<IsotropicSubgroup> isotropic_subgroups(const FiniteQuadraticForm& f,
                                                   const std::vector<IntMatrix>& action) {
    std::vector<i64> iso;
    for (i64 i = 1; i < f.order(); ++i)
        if (f.q_num(f.element(i)) == 0) iso.push_back(i);
    std::map<std::vector<i64>, size_t> id;
    std::vector<std::vector<i64>> subs;
    std::vector<std::vector<IntVector>> gens;
    subs.push_back({0});
    gens.push_back({});
    id[subs[0]] = 0;
    for (size_t cur = 0; cur < subs.size(); ++cur) {
        for (i64 xi : iso) {
            if (std::binary_search(subs[cur].begin(), subs[cur].end(), xi)) continue;
            IntVector x = f.element(xi);
            bool ok = true;
            for (const auto& g : gens[cur])
                if (f.b_num(x, g) != 0) ok = false;
            if (!ok) continue;
            std::vector<IntVector> ng = gens[cur];
            ng.push_back(x);
            auto elems = subgroup_elements(f, ng);
            if (id.count(elems)) continue;
            id[elems] = subs.size();
            subs.push_back(elems);
            gens.push_back(ng);
        }
    }
    std::vector<size_t> parent(subs.size());
    std::iota(parent.begin(), parent.end(), 0);
    std::function<size_t(size_t)> find = [&](size_t a) { return parent[a] == a ? a : parent[a] = find(parent[a]); };
    for (const auto& g : action) {
        for (size_t s = 0; s < subs.size(); ++s) {
            std::vector<i64> img;
            for (i64 e : subs[s]) img.push_back(f.index_of(f.apply(g, f.element(e))));
            std::sort(img.begin(), img.end());
            auto it = id.find(img);
            if (it == id.end()) throw FormError("isotropic_subgroups: action does not preserve the form");
            size_t a = find(s), b = find(it->second);
            if (a != b) parent[std::max(a, b)] = std::min(a, b);
        }
    }
    std::vector<size_t> reps;
    for (size_t s = 0; s < subs.size(); ++s)
        if (find(s) == s) reps.push_back(s);
    std::sort(reps.begin(), reps.end(), [&](size_t a, size_t b) {
        if (subs[a].size() != subs[b].size()) return subs[a].size() < subs[b].size();
        return subs[a] < subs[b];
    });
    std::vector<IsotropicSubgroup> out;
    for (size_t s : reps) out.push_back({subgroup_basis(f.order_vector(), gens[s]).gens});
    return out;
}

Subquotient::Subquotient(const FiniteQuadraticForm& ambient, const std::vector<IntVector>& kernel)
    : ambient_(ambient) {
    const auto& f = ambient_;
    if (!is_isotropic(f, kernel)) throw FormError("subquotient: kernel is not isotropic");
    kernel_ = subgroup_elements(f, kernel);
    const Eigen::Index n = static_cast<Eigen::Index>(f.rank());
    std::vector<IntVector> kgens = subgroup_basis(f.order_vector(), kernel).gens;
    IntMatrix phi(static_cast<Eigen::Index>(kgens.size()), n);
    for (size_t j = 0; j < kgens.size(); ++j)
        for (Eigen::Index i = 0; i < n; ++i)
            phi(static_cast<Eigen::Index>(j), i) = f.b_num(f.basis(static_cast<size_t>(i)), kgens[j]);
    AbelianBasis perp = kgens.empty() ? subgroup_basis(f.order_vector(), [&] {
        std::vector<IntVector> all;
        for (size_t i = 0; i < f.rank(); ++i) all.push_back(f.basis(i));
        return all;
    }())
                                      : kernel_basis(f.order_vector(), phi, f.den());

    // canonical coset representative for every element of K-perp
    std::vector<i64> canon(static_cast<size_t>(f.order()), -1);
    {
        std::vector<i64> counter(perp.gens.size(), 0);
        IntVector x = f.zero();
        while (true) {
            i64 xi = f.index_of(x);
            if (canon[xi] < 0)
                for (i64 k : kernel_) canon[f.index_of(f.add(x, f.element(k)))] = xi;
            size_t i = 0;
            for (; i < counter.size(); ++i) {
                x = f.add(x, perp.gens[i]);
                if (++counter[i] < perp.orders[i]) break;
                counter[i] = 0;
            }
            if (i == counter.size()) break;
        }
    }
    std::vector<i64> qelems;
    for (i64 i = 0; i < f.order(); ++i)
        if (canon[i] == i) qelems.push_back(i);
    auto cadd = [&](i64 a, i64 b) { return canon[f.index_of(f.add(f.element(a), f.element(b)))]; };
    auto cmul = [&](i64 a, i64 k) { return canon[f.index_of(f.scale(f.element(a), k))]; };
    const i64 zero = canon[f.index_of(f.zero())];

    i64 qorder = static_cast<i64>(qelems.size());
    std::vector<i64> orders;
    for (i64 p : prime_factors(qorder)) {
        std::vector<i64> part;
        i64 pmax = pow_int(p, static_cast<unsigned>(valuation(qorder, p)));
        for (i64 e : qelems)
            if (cmul(e, pmax) == zero) part.push_back(e);
        std::set<i64> span{zero};
        while (static_cast<i64>(span.size()) < static_cast<i64>(part.size())) {
            i64 best = -1, bestpt = 1;
            for (i64 e : part) {
                i64 pt = 1;
                while (!span.count(cmul(e, pt))) pt *= p;
                if (pt > bestpt) {
                    bestpt = pt;
                    best = e;
                }
            }
            i64 target = cmul(best, bestpt);
            i64 shift = -1;
            for (i64 s : span)
                if (cmul(s, bestpt) == target) {
                    shift = s;
                    break;
                }
            if (shift < 0) throw FormError("subquotient: basis construction failed");
            i64 g = cadd(best, cmul(shift, -1));
            std::set<i64> next;
            for (i64 s : span) {
                i64 y = s;
                for (i64 j = 0; j < bestpt; ++j) {
                    next.insert(y);
                    y = cadd(y, g);
                }
            }
            span.swap(next);
            section_.push_back(f.element(g));
            orders.push_back(bestpt);
        }
    }
    const Eigen::Index r = static_cast<Eigen::Index>(section_.size());
    RatMatrix gram(r, r);
    for (Eigen::Index i = 0; i < r; ++i)
        for (Eigen::Index j = 0; j < r; ++j) gram(i, j) = i == j ? f.q(section_[i]) : f.b(section_[i], section_[j]);
    form_ = FiniteQuadraticForm(orders, gram);

    coset_id_.assign(static_cast<size_t>(f.order()), -1);
    for (i64 idx = 0; idx < form_.order(); ++idx) {
        IntVector c = form_.element(idx);
        IntVector x = f.zero();
        for (Eigen::Index i = 0; i < r; ++i) x = f.add(x, f.scale(section_[i], c(i)));
        for (i64 k : kernel_) coset_id_[f.index_of(f.add(x, f.element(k)))] = idx;
    }
}

bool Subquotient::in_perp(const IntVector& x) const { return coset_id_[ambient_.index_of(ambient_.reduce(x))] >= 0; }

IntVector Subquotient::coords(const IntVector& x) const {
    i64 id = coset_id_[ambient_.index_of(ambient_.reduce(x))];
    if (id < 0) throw FormError("subquotient: element not in K-perp");
    return form_.element(id);
}

IntMatrix Subquotient::induced(const IntMatrix& g) const {
    const Eigen::Index r = static_cast<Eigen::Index>(section_.size());
    IntMatrix m(r, r);
    for (Eigen::Index i = 0; i < r; ++i) m.col(i) = coords(ambient_.apply(g, section_[i]));
    return m;
}

FiniteQuadraticForm subquotient(const FiniteQuadraticForm& f, const std::vector<IntVector>& kernel) {
    return Subquotient(f, kernel).form();
}

void for_each_isometry(const FiniteQuadraticForm& f1, const FiniteQuadraticForm& f2, int sign,
                       const std::function<bool(const IntMatrix&)>& visit, i64 cap) {
    if (f1.order() != f2.order()) return;
    const size_t n = f1.rank();
    const i64 m2 = 2 * f2.den();
    // q and b of f1 rescaled to f2's denominator (values must match exactly)
    auto q1 = [&](const IntVector& x) { return f1.q(x) * Rational(sign); };
    std::vector<std::vector<IntVector>> cand(n);
    {
        std::vector<std::vector<i64>> by_order;
        for (i64 idx = 0; idx < f2.order(); ++idx) {
            IntVector y = f2.element(idx);
            i64 o = f2.element_order(y);
            for (size_t i = 0; i < n; ++i) {
                if (o != f1.orders()[i]) continue;
                Rational want = q1(f1.basis(i)).reduce_mod(2);
                if (Rational(f2.q_num(y), f2.den()) == want) cand[i].push_back(y);
            }
        }
    }
    (void)m2;
    const bool nondeg = f1.is_nondegenerate();
    i64 visited = 0;
    IntMatrix m(static_cast<Eigen::Index>(f2.rank()), static_cast<Eigen::Index>(n));
    bool stop = false;
    std::function<void(size_t)> rec = [&](size_t i) {
        if (stop) return;
        if (i == n) {
            if (!nondeg && !f2.is_bijective(m)) return;
            if (!visit(m)) stop = true;
            return;
        }
        for (const auto& y : cand[i]) {
            if (++visited > cap) throw FormError("isometry search exceeded the candidate cap");
            bool ok = true;
            for (size_t j = 0; j < i && ok; ++j) {
                Rational want = (f1.b(f1.basis(j), f1.basis(i)) * Rational(sign)).reduce_mod(1);
                if (f2.b(m.col(static_cast<Eigen::Index>(j)), y) != want) ok = false;
            }
            if (!ok) continue;
            m.col(static_cast<Eigen::Index>(i)) = y;
            rec(i + 1);
            if (stop) return;
        }
    };
    rec(0);
}

std::optional<IntMatrix> find_isometry(const FiniteQuadraticForm& f1, const FiniteQuadraticForm& f2, int sign,
                                       i64 cap) {
    std::optional<IntMatrix> out;
    for_each_isometry(
        f1, f2, sign,
        [&](const IntMatrix& m) {
            out = m;
            return false;
        },
        cap);
    return out;
}

bool anti_isometric(const FiniteQuadraticForm& f1, const FiniteQuadraticForm& f2, i64 cap) {
    return find_isometry(f1, f2, -1, cap).has_value();
}

bool isometric(const FiniteQuadraticForm& f1, const FiniteQuadraticForm& f2, i64 cap) {
    return find_isometry(f1, f2, 1, cap).has_value();
}

std::vector<IntMatrix> automorphisms(const FiniteQuadraticForm& f, i64 cap) {
    std::vector<IntMatrix> out;
    for_each_isometry(
        f, f, 1,
        [&](const IntMatrix& m) {
            out.push_back(m);
            return true;
        },
        cap);
    return out;
}

IntMatrix compose(const FiniteQuadraticForm& f, const IntMatrix& a, const IntMatrix& b) {
    IntMatrix c(a.rows(), b.cols());
    for (Eigen::Index j = 0; j < b.cols(); ++j) c.col(j) = f.apply(a, b.col(j));
    return c;
}

namespace {
std::vector<i64> key_of(const IntMatrix& m) { return {m.data(), m.data() + m.size()}; }
}  // namespace

std::vector<IntMatrix> generate_group(const FiniteQuadraticForm& f, const std::vector<IntMatrix>& gens, size_t cap) {
    const Eigen::Index n = static_cast<Eigen::Index>(f.rank());
    IntMatrix id = IntMatrix::Identity(n, n);
    for (Eigen::Index i = 0; i < n; ++i) id(i, i) = 1 % f.orders()[i];
    std::vector<IntMatrix> elems{id};
    std::set<std::vector<i64>> seen{key_of(id)};
    for (size_t cur = 0; cur < elems.size(); ++cur) {
        for (const auto& g : gens) {
            IntMatrix h = compose(f, g, elems[cur]);
            if (seen.insert(key_of(h)).second) {
                elems.push_back(h);
                if (elems.size() > cap) throw FormError("generate_group: group larger than cap");
            }
        }
    }
    return elems;
}

std::vector<IntMatrix> automorphism_group(const FiniteQuadraticForm& f, i64 cap) {
    std::vector<IntMatrix> all = automorphisms(f, cap);
    std::vector<IntMatrix> gens;
    std::set<std::vector<i64>> generated;
    const Eigen::Index n = static_cast<Eigen::Index>(f.rank());
    IntMatrix id = IntMatrix::Identity(n, n);
    for (Eigen::Index i = 0; i < n; ++i) id(i, i) = 1 % f.orders()[i];
    generated.insert(key_of(id));
    for (const auto& m : all) {
        if (generated.count(key_of(m))) continue;
        gens.push_back(m);
        generated.clear();
        for (const auto& e : generate_group(f, gens)) generated.insert(key_of(e));
        if (generated.size() == all.size()) break;
    }
    return gens;
}

}  // namespace qlat

#include "qlat/definite_binary.hpp"

#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

namespace qlat {

IntMatrix BinaryForm::gram() const {
    IntMatrix g(2, 2);
    g << a, b, b, c;
    return g;
}

std::string BinaryForm::str() const {
    std::ostringstream os;
    os << "[" << a << "," << b << "," << c << "]";
    return os.str();
}

BinaryForm reduce(const BinaryForm& f) {
    if (f.a <= 0 || f.det() <= 0) throw FormError("reduce: form is not positive definite");
    if (f.a % 2 != 0 || f.c % 2 != 0) throw FormError("reduce: form is not even");
    const i64 d = f.det();
    BinaryForm g = f;
    for (;;) {
        // translate b into (-a/2, a/2]
        g.b = mod(g.b, g.a);
        if (2 * g.b > g.a) g.b -= g.a;
        g.c = (d + g.b * g.b) / g.a;
        if (g.a > g.c) {
            g = BinaryForm{g.c, -g.b, g.a};
            continue;
        }
        break;
    }
    if (g.a == g.c && g.b < 0) g.b = -g.b;
    return g;
}

std::vector<IntMatrix> isometries(const BinaryForm& f) {
    const IntMatrix g = f.gram();
    const i64 d = f.det();
    if (f.a <= 0 || d <= 0) throw FormError("isometries: form is not positive definite");
    // x^T g x >= (d / tr) |x|^2
    const i64 bound = static_cast<i64>(std::sqrt(static_cast<double>(std::max(f.a, f.c)) * static_cast<double>(f.a + f.c) /
                                                 static_cast<double>(d))) + 1;
    auto norm = [&](i64 x, i64 y) { return f.a * x * x + 2 * f.b * x * y + f.c * y * y; };
    std::vector<std::pair<i64, i64>> first, second;
    for (i64 x = -bound; x <= bound; ++x)
        for (i64 y = -bound; y <= bound; ++y) {
            const i64 n = norm(x, y);
            if (n == f.a) first.emplace_back(x, y);
            if (n == f.c) second.emplace_back(x, y);
        }
    std::vector<IntMatrix> out;
    for (auto [x1, y1] : first)
        for (auto [x2, y2] : second) {
            IntMatrix m(2, 2);
            m << x1, x2, y1, y2;
            if ((m.transpose() * g * m) == g) out.push_back(m);
        }
    return out;
}

std::vector<BinaryForm> genus_classes(const GenusSymbol& g) {
    if (g.sig_plus != 2 || g.sig_minus != 0) throw FormError("genus_classes: signature must be (2,0)");
    const i64 d = g.disc.order();
    std::vector<BinaryForm> out;
    for (i64 a = 2; 3 * a * a <= 4 * d; a += 2)
        for (i64 b = 0; 2 * b <= a; ++b) {
            if ((d + b * b) % a != 0) continue;
            const i64 c = (d + b * b) / a;
            if (c < a || c % 2 != 0) continue;
            BinaryForm f{a, b, c};
            if (isometric(lattice_discriminant(f.gram()).form, g.disc)) out.push_back(f);
        }
    return out;
}

namespace {

// Element coordinates of a discriminant, keyed by representative vectors mod Z^2.
class DiscCoords {
  public:
    explicit DiscCoords(const LatticeDiscriminant& ld) : ld_(ld) {
        const auto& f = ld.form;
        for (i64 i = 0; i < f.order(); ++i) {
            IntVector x = f.element(i);
            RatVector v = RatVector::Zero(2);
            for (Eigen::Index j = 0; j < x.size(); ++j) v += Rational(x(j)) * ld.reps[static_cast<size_t>(j)];
            table_.emplace(key(v), x);
        }
    }
    IntVector coords(const RatVector& v) const { return table_.at(key(v)); }

  private:
    static std::pair<Rational, Rational> key(const RatVector& v) { return {v(0).reduce_mod(1), v(1).reduce_mod(1)}; }
    const LatticeDiscriminant& ld_;
    std::map<std::pair<Rational, Rational>, IntVector> table_;
};

// Orbits of <left> x <right> on group x {+1,-1}: g.(x, e) = (g x, e) and
// (x, e).h = (x h, e det h).  With signs ignored this counts double cosets.
int double_cosets(const FiniteQuadraticForm& f, const std::vector<IntMatrix>& group,
                  const std::vector<IntMatrix>& left, const std::vector<std::pair<IntMatrix, int>>& right,
                  bool oriented) {
    std::map<std::vector<i64>, size_t> index;
    auto key = [&](const IntMatrix& m) {
        IntMatrix r = m;
        for (Eigen::Index i = 0; i < r.rows(); ++i)
            for (Eigen::Index j = 0; j < r.cols(); ++j) r(i, j) = mod(r(i, j), f.orders()[static_cast<size_t>(i)]);
        return std::vector<i64>(r.data(), r.data() + r.size());
    };
    for (size_t i = 0; i < group.size(); ++i) index.emplace(key(group[i]), i);
    const size_t sheets = oriented ? 2 : 1;
    std::vector<size_t> parent(group.size() * sheets);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    int classes = static_cast<int>(parent.size());
    auto unite = [&](size_t a, size_t b) {
        const size_t ra = find(a), rb = find(b);
        if (ra != rb) {
            parent[ra] = rb;
            --classes;
        }
    };
    for (size_t i = 0; i < group.size(); ++i)
        for (size_t e = 0; e < sheets; ++e) {
            const size_t here = e * group.size() + i;
            for (const auto& g : left) unite(here, e * group.size() + index.at(key(compose(f, g, group[i]))));
            for (const auto& [h, det] : right) {
                const size_t e2 = oriented && det == -1 ? 1 - e : e;
                unite(here, e2 * group.size() + index.at(key(compose(f, group[i], h))));
            }
        }
    return classes;
}

}  // namespace

std::vector<BinaryClassCount> binary_class_counts(const Configuration& cfg) {
    const GenusSymbol g = complement_genus(cfg);
    const FiniteQuadraticForm& ds = cfg.discr_tilde;
    const auto aut = automorphisms(ds);
    std::vector<BinaryClassCount> out;
    for (const auto& t : genus_classes(g)) {
        const auto ld = lattice_discriminant(t.gram());
        const DiscCoords dc(ld);
        auto psi = find_isometry(ds, ld.form, -1);
        if (!psi) throw FormError("binary_class_counts: no anti-isometry onto discr T");
        // psi^{-1} on the generators of discr T
        const auto n = static_cast<Eigen::Index>(ld.form.rank());
        IntMatrix psi_inv(static_cast<Eigen::Index>(ds.rank()), n);
        for (i64 i = 0; i < ds.order(); ++i) {
            const IntVector x = ds.element(i);
            const IntVector y = ld.form.apply(*psi, x);
            for (Eigen::Index j = 0; j < n; ++j)
                if (y == ld.form.basis(static_cast<size_t>(j))) psi_inv.col(j) = x;
        }
        std::vector<std::pair<IntMatrix, int>> action;
        for (const auto& m : isometries(t)) {
            // action of m on discr T, pulled back to discr S~_h
            IntMatrix on_t(n, n);
            for (Eigen::Index j = 0; j < n; ++j)
                on_t.col(j) = dc.coords(m.cast<Rational>() * ld.reps[static_cast<size_t>(j)]);
            const IntMatrix pulled = compose(ds, psi_inv, compose(ld.form, on_t, *psi));
            action.emplace_back(pulled, static_cast<int>(m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0)));
        }
        BinaryClassCount c{t, double_cosets(ds, aut, cfg.aut_h, action, false),
                           double_cosets(ds, aut, cfg.aut_h, action, true)};
        out.push_back(c);
    }
    return out;
}

ComponentCounts binary_counts(const Configuration& cfg) {
    ComponentCounts total;
    for (const auto& c : binary_class_counts(cfg)) {
        const int r = 2 * c.unoriented - c.oriented;
        const int pairs = c.oriented - c.unoriented;
        if (r < 0 || pairs < 0) throw FormError("binary_counts: inconsistent bi-coset counts");
        total.real += r;
        total.pairs += pairs;
    }
    return total;
}

}  // namespace qlat

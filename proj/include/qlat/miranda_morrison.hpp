#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "qlat/genus.hpp"
#include "qlat/normal_form.hpp"

namespace qlat {

// (d, s) in Gamma_{p,0}: d = +-1, s a unit class (odd p: 1 or the least
// non-residue; p = 2: 1, 3, 5, 7).
struct GammaElement {
    i64 p = 2;
    int d = 1;
    i64 s = 1;

    std::string str() const;  // "(-1,7)"
};

// Product of Gamma_{p,0} over the irregular primes, written additively as an
// F_2-vector space.  Coordinates per prime: odd p -> [d, s]; p = 2 -> [d, a, b]
// with unit (-1)^a 5^b.
class GammaProduct {
  public:
    using Vec = std::uint64_t;

    explicit GammaProduct(std::vector<i64> primes);

    const std::vector<i64>& primes() const { return primes_; }
    int dim() const { return dim_; }
    Vec encode(const GammaElement& g) const;
    GammaElement component(Vec v, i64 p) const;
    Vec restrict(Vec v, i64 p) const;  // keep the coordinates of p only
    // (d, x) at p for a nonzero p-adic number x, moved into Gamma_{A,0} by the
    // global class of p^{v_p(x)}.
    Vec local(i64 p, int d, const Rational& x) const;
    // Diagonal image of (d, s) in Gamma_0.
    Vec global(int d, int s) const;
    std::string str(Vec v) const;  // "2:(-1,7) 3:(1,1)"

  private:
    int offset(i64 p) const;
    std::vector<i64> primes_;
    std::vector<int> offsets_;
    int dim_ = 0;
};

// Subspace of F_2^n spanned incrementally, in echelon form.
class F2Span {
  public:
    using Vec = std::uint64_t;
    bool add(Vec v);  // true if the span grew
    Vec reduce(Vec v) const;
    bool contains(Vec v) const { return reduce(v) == 0; }
    int rank() const { return static_cast<int>(rows_.size()); }
    const std::vector<Vec>& basis() const { return rows_; }

  private:
    std::vector<Vec> rows_;  // distinct leading bits, kept sorted by leading bit
};

// Group of automorphisms of a finite abelian group given by matrices in a
// direct-sum basis (x -> M x, row i modulo orders[i]), carrying labels in an
// elementary abelian 2-group.  Stabilizer chain with base the basis vectors;
// labels of trivial-acting products are collected as kernel labels.
class LabelledChain {
  public:
    using Vec = std::uint64_t;

    explicit LabelledChain(std::vector<i64> orders);

    void add(const IntMatrix& m, const IntMatrix& inv, Vec label);
    // Label of a product of generators equal to g, or nullopt if g is outside the group.
    std::optional<Vec> sift(const IntMatrix& g) const;
    const std::vector<Vec>& kernel_labels() const { return kernel_; }
    double order() const;

  private:
    struct Elt {
        IntMatrix m, inv;
        Vec label = 0;
    };
    struct Level {
        i64 base = 0;
        std::vector<Elt> gens;
        std::unordered_map<i64, Elt> trans;
        std::vector<i64> points;  // orbit in discovery order
        std::vector<size_t> done_gens;  // per point: number of generators processed
    };

    Elt mul(const Elt& a, const Elt& b) const;  // a after b
    i64 image(const IntMatrix& m, i64 point) const;
    // Strips through levels >= start; returns the residue and the first level it moves.
    std::pair<Elt, size_t> strip(Elt g, size_t start) const;
    void insert(const Elt& g, size_t upto);
    void complete(size_t l);

    std::vector<i64> orders_;
    std::vector<Level> levels_;
    std::vector<Vec> kernel_;
};

// Element a of discr_p in normal-form coordinates with p^k a = 0 and
// a^2 = 2u/p^k, gcd(u, p) = 1.
struct DiscReflection {
    IntVector a;
    int k = 0;
    i64 u = 1;
    bool exceptional = false;  // p = 2 and k <= 2: u is not determined modulo squares
};
std::optional<DiscReflection> disc_reflection(const NormalForm& nf, const IntVector& a);
// Matrix of t_a on normal-form coordinates.
IntMatrix reflection_matrix(const NormalForm& nf, const DiscReflection& r);

// 2-adic lattice with discriminant form discr_2 T in the normal-form basis,
// scaled block by block; the first block <m/2> is replaced by <5m/2> when
// needed to reach det = (-1)^{sigma_-} |discr T| modulo squares.
IntMatrix lift_2adic(const GenusSymbol& g);
// 1/2 a-bar^2 for the lift a-bar = 2^k a of a reflection vector.
Rational spin_via_lift(const NormalForm& nf, const IntMatrix& lift, const DiscReflection& r);

std::vector<GammaElement> sigma_sharp_p(const GenusSymbol& g, i64 p);

struct ComponentCounts {
    int real = 0;
    int pairs = 0;
};

struct MMDiagnostics {
    std::vector<i64> primes;
    std::vector<std::vector<std::string>> sigma_sharp;  // per prime, all elements
    int e_order = 1;
    int e_plus_order = 1;
    std::vector<std::string> images;  // e of each generator, before the quotient
    ComponentCounts counts;
};

// Miranda-Morrison data of an indefinite genus of rank >= 3.
class MirandaMorrison {
  public:
    using Vec = GammaProduct::Vec;

    explicit MirandaMorrison(const GenusSymbol& g);

    const GenusSymbol& genus() const { return genus_; }
    const GammaProduct& gamma() const { return gamma_; }
    const F2Span& sigma_sharp() const { return sigma_; }  // sum of the local groups
    std::vector<GammaElement> sigma_sharp_elements(i64 p) const;
    int e_order() const;
    int e_plus_order() const;
    // e(T)/[Gamma_0 : Sigma~(T)] from the local indices.
    int e_order_from_indices() const;
    int e_plus_order_from_indices() const;

    // Image of an automorphism of discr T (matrix in the coordinates of
    // genus().disc) in Gamma_{A,0}; project with in_e / in_e_plus.
    Vec e(const IntMatrix& g) const;
    Vec in_e(Vec v) const { return quotient_.reduce(v); }
    Vec in_e_plus(Vec v) const { return quotient_plus_.reduce(v); }
    // Local label of the reflection t_a, a given in the coordinates of genus().disc.
    std::optional<Vec> reflection_image(const IntVector& a) const;

    ComponentCounts component_counts(const std::vector<IntMatrix>& aut) const;
    MMDiagnostics diagnostics(const std::vector<IntMatrix>& aut) const;

  private:
    struct Local {
        i64 p = 2;
        NormalForm nf;
        bool lifted = false;  // Sigma#_2 and labels from the 2-adic lift
        IntMatrix lift;
        F2Span sigma;  // Sigma#_p
        LabelledChain chain;
    };
    Vec reflection_label(const Local& loc, const DiscReflection& r) const;
    void build_local(Local& loc);
    IntMatrix local_matrix(const Local& loc, const IntMatrix& g) const;

    GenusSymbol genus_;
    GammaProduct gamma_;
    std::vector<Local> locals_;
    F2Span sigma_;
    F2Span quotient_, quotient_plus_;
};

// Counts for a configuration of total Milnor number <= 18.
ComponentCounts component_counts(const Configuration& c);

}  // namespace qlat

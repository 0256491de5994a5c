#pragma once

#include <string>
#include <vector>

#include "qlat/finite_form.hpp"

namespace qlat {

enum class RootKind { A, D, E };

struct IrreducibleRoot {
    RootKind kind = RootKind::A;
    int rank = 1;

    IrreducibleRoot() = default;
    IrreducibleRoot(RootKind k, int r);
    std::string str() const;
    // canonical order: E before D before A, larger rank first
    friend bool operator<(const IrreducibleRoot& a, const IrreducibleRoot& b);
    friend bool operator==(const IrreducibleRoot& a, const IrreducibleRoot& b) {
        return a.kind == b.kind && a.rank == b.rank;
    }
    friend bool operator!=(const IrreducibleRoot& a, const IrreducibleRoot& b) { return !(a == b); }
};

// Multiset of irreducible summands kept in canonical order.
struct SingularitySet {
    std::vector<IrreducibleRoot> summands;

    SingularitySet() = default;
    explicit SingularitySet(std::vector<IrreducibleRoot> s);
    int mu() const;
    std::string str() const;  // "2A7+4A1"; the empty set prints as "0"
    friend bool operator==(const SingularitySet& a, const SingularitySet& b) { return a.summands == b.summands; }
    friend bool operator<(const SingularitySet& a, const SingularitySet& b);
};

// Parses "2A7 + 4A1", whitespace-insensitive; canonicalizes the order.
SingularitySet parse_singularities(const std::string& text);

// Dynkin labeling: A_n path 0..n-1; D_n path 0..n-2 plus node n-1 on node n-3;
// E_n path 0..n-2 plus node n-1 on node 2.  Diagonal -2, adjacency +1.
IntMatrix gram_matrix(const IrreducibleRoot& r);
IntMatrix gram_matrix(const SingularitySet& s);
std::vector<std::pair<int, int>> dynkin_edges(const IrreducibleRoot& r);

// Discriminant form of an arbitrary nondegenerate even lattice, with rational
// representatives (in lattice coordinates) of the generators.
struct LatticeDiscriminant {
    FiniteQuadraticForm form;
    std::vector<RatVector> reps;
};
LatticeDiscriminant lattice_discriminant(const IntMatrix& gram);

// Discriminant of an irreducible root lattice with the Conway-Sloane generators:
// A_n: first fundamental weight; D_n: spinor class [1] (and vector class [2] for even n);
// E6: a weight of order 3; E7: the weight of order 2; E8: none.
LatticeDiscriminant root_discriminant(const IrreducibleRoot& r);

// Number of glue classes of a summand and the digit <-> coordinate encoding.
int class_count(const IrreducibleRoot& r);
int coordinate_count(const IrreducibleRoot& r);
IntVector class_coords(const IrreducibleRoot& r, int digit);
int class_digit(const IrreducibleRoot& r, const IntVector& coords);

// Layout of discr S as the direct sum of the summand discriminants.
struct DiscLayout {
    SingularitySet set;
    std::vector<int> offset;  // first coordinate of each summand
    std::vector<int> width;   // coordinates per summand
    FiniteQuadraticForm form;
    int rank() const { return static_cast<int>(form.rank()); }
    IntVector summand_coords(const IntVector& x, size_t i) const { return x.segment(offset[i], width[i]); }
    std::vector<int> digits(const IntVector& x) const;
    IntVector from_digits(const std::vector<int>& digits) const;
};
DiscLayout disc_layout(const SingularitySet& s);
FiniteQuadraticForm discriminant_form(const SingularitySet& s);

// Rational representative (root coordinates) of a glue class of a summand.
RatVector class_representative(const IrreducibleRoot& r, int digit);

// Vectors v in the coset of `digit` with -v^2 <= bound, in root coordinates.
struct CosetVector {
    RatVector v;
    Rational norm;  // -v^2 (positive)
};
std::vector<CosetVector> coset_short_vectors(const IrreducibleRoot& r, int digit, const Rational& bound);

// Distinct values of -v^2 <= 2 over the coset (includes 0 for the zero class).
const std::vector<Rational>& coset_spectrum(const IrreducibleRoot& r, int digit);

// All v in S (x) Q with v mod S = coset and v^2 = target (target <= 0).
std::vector<RatVector> coset_vectors_of_square(const SingularitySet& s, const IntVector& coset, const Rational& target);

// True iff the coset (given per summand as digits) contains a vector with -v^2 == norm exactly.
bool coset_has_norm(const SingularitySet& s, const std::vector<int>& digits, const Rational& norm);

// Generators of the image of O(S) in Aut(discr S): diagram symmetries of each
// summand and transpositions of neighbouring identical summands.
std::vector<IntMatrix> symmetry_image(const SingularitySet& s);

// Permutation group of each summand on its glue classes (full group, identity first).
std::vector<std::vector<int>> summand_symmetries(const IrreducibleRoot& r);

std::vector<SingularitySet> enumerate_singularity_sets(int mu_max);
std::vector<SingularitySet> singularity_sets_of_rank(int mu);

// Connected induced subgraphs: type recognition with a labeling matching gram_matrix.
struct ComponentMatch {
    IrreducibleRoot type;
    std::vector<int> vertices;  // vertices[i] = graph vertex playing standard node i
};
std::vector<ComponentMatch> identify_components(int n, const std::vector<std::pair<int, int>>& edges,
                                                const std::vector<int>& subset);

bool is_perturbation(const SingularitySet& sub, const SingularitySet& s);

}  // namespace qlat

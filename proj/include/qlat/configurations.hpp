#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qlat/finite_form.hpp"
#include "qlat/root_lattice.hpp"

namespace qlat {

// Glue digits of an element of discr S_h: one class index per summand of S
// (canonical order) followed by the h-digit in Z/4.
using Glue = std::vector<int>;

// discr S_h = discr S + <1/4>; the h generator is the last coordinate of `form`.
struct PolarizedDisc {
    DiscLayout layout;
    FiniteQuadraticForm form;

    size_t columns() const { return layout.set.summands.size() + 1; }
    Glue digits(const IntVector& x) const;
    IntVector from_digits(const Glue& g) const;
};
PolarizedDisc polarized_discr(const SingularitySet& s);

// Elements of the subgroup generated by `gens`, sorted lexicographically.
std::vector<Glue> glue_span(const SingularitySet& s, const std::vector<Glue>& gens);

// Membership test for a single element x of an isotropic kernel: q(x) = 0, and
// the S-part of x carries no root (h-digit 0, x != 0) and no vector of square -1
// (h-digit 2).
bool admissible_element(const SingularitySet& s, const Glue& x);
bool is_isotropic_kernel(const SingularitySet& s, const std::vector<Glue>& gens);
bool condition_roots(const SingularitySet& s, const std::vector<Glue>& gens);
bool condition_hyperplane(const SingularitySet& s, const std::vector<Glue>& gens);
bool is_valid_kernel(const SingularitySet& s, const std::vector<Glue>& gens);

// "2600110; 0411110"; digits are comma separated when some digit exceeds 9.
std::string format_glue(const std::vector<Glue>& gens);
std::string format_glue(const Glue& g);
std::vector<Glue> parse_glue(const SingularitySet& s, const std::string& text);

// Image of O(S) acting on glue digits: products of the diagram symmetry groups
// of the summands and permutations of identical summands.  h is fixed.
class SymmetryGroup {
  public:
    struct Element {
        std::vector<int> col;  // summand i goes to summand col[i]
        std::vector<int> sym;  // with its digits permuted by symmetry sym[i] of its type
    };

    explicit SymmetryGroup(const SingularitySet& s);

    size_t columns() const { return type_.size(); }
    Element identity() const;
    std::vector<Element> generators() const;
    Element compose(const Element& a, const Element& b) const;  // a after b
    Glue apply(const Element& g, const Glue& x) const;
    IntMatrix matrix(const Element& g, const PolarizedDisc& pd) const;

    // Some g with g(A) = B for subgroups given by their element lists.
    std::optional<Element> find_mapping(const std::vector<Glue>& a, const std::vector<Glue>& b) const;
    // Generators of the setwise stabilizer of a subgroup.
    std::vector<Element> stabilizer(const std::vector<Glue>& elems) const;

  private:
    struct Forced {
        int col;
        int sym;
    };
    std::optional<Element> search(const std::vector<Glue>& a, const std::vector<Glue>& b,
                                  const std::vector<Forced>& prefix) const;

    std::vector<int> type_;                           // type id per column
    std::vector<std::vector<std::vector<int>>> perms_;  // per type: digit permutations
    std::vector<std::vector<std::vector<int>>> comp_;   // per type: index of perms[a] o perms[b]
    std::vector<std::vector<int>> cols_of_type_;
};

struct Configuration {
    SingularitySet set;
    std::vector<Glue> kernel;    // generators
    std::vector<Glue> elements;  // all elements of K
    FiniteQuadraticForm discr_tilde;          // K-perp / K
    std::vector<IntVector> section;           // lifts of the generators of discr_tilde to discr S_h
    std::vector<IntMatrix> aut_ambient;       // stabilizer generators on discr S_h
    std::vector<IntMatrix> aut_h;             // their action on discr_tilde

    std::string code() const { return format_glue(kernel); }
};

// Builds the configuration of a valid kernel, including its stabilizer.
Configuration make_configuration(const SingularitySet& s, const std::vector<Glue>& gens);

// One configuration per orbit of valid kernels, ordered by |K| and then code.
std::vector<Configuration> enumerate_configurations(const SingularitySet& s);

bool same_orbit(const SingularitySet& s, const std::vector<Glue>& a, const std::vector<Glue>& b);

}  // namespace qlat

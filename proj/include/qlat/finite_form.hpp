#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qlat/matrix.hpp"

namespace qlat {

class FormError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Finite abelian group Z/n_1 + ... + Z/n_r (the generators form a direct-sum
// basis) with a Q/2Z-valued quadratic form.  The rational Gram matrix holds
// q(g_i) on the diagonal (mod 2) and b(g_i, g_j) off the diagonal (mod 1).
class FiniteQuadraticForm {
  public:
    FiniteQuadraticForm() = default;
    FiniteQuadraticForm(std::vector<i64> orders, const RatMatrix& gram);

    size_t rank() const { return orders_.size(); }
    i64 order() const { return order_; }
    const std::vector<i64>& orders() const { return orders_; }
    IntVector order_vector() const;
    const RatMatrix& gram() const { return gram_; }

    // Integer encoding: q(x) = q_num(x)/den (mod 2), b(x,y) = b_num(x,y)/den (mod 1).
    i64 den() const { return den_; }
    i64 q_num(const IntVector& x) const;
    i64 b_num(const IntVector& x, const IntVector& y) const;
    Rational q(const IntVector& x) const { return Rational(q_num(x), den_); }
    Rational b(const IntVector& x, const IntVector& y) const { return Rational(b_num(x, y), den_); }

    IntVector zero() const { return IntVector::Zero(static_cast<Eigen::Index>(rank())); }
    IntVector basis(size_t i) const;
    IntVector reduce(const IntVector& x) const;
    IntVector add(const IntVector& x, const IntVector& y) const { return reduce(x + y); }
    IntVector scale(const IntVector& x, i64 k) const;
    i64 element_order(const IntVector& x) const;

    // Mixed-radix enumeration, first coordinate fastest.
    i64 index_of(const IntVector& x) const;
    IntVector element(i64 index) const;

    bool is_nondegenerate() const;
    FiniteQuadraticForm negated() const;
    // Image of x under an automorphism given by its matrix (column j = image of generator j).
    IntVector apply(const IntMatrix& m, const IntVector& x) const { return reduce(m * x); }
    bool preserves_form(const IntMatrix& m) const;
    bool is_bijective(const IntMatrix& m) const;

    // Diagonal forms print in the form syntax; others print their Gram matrix.
    std::string str() const;

  private:
    std::vector<i64> orders_;
    RatMatrix gram_;
    i64 order_ = 1;
    i64 den_ = 1;
    IntMatrix num_;  // gram * den, diagonal mod 2*den, off-diagonal mod den
};

// Elements serialize as "[x,y,z]".
std::string format_element(const IntVector& x);
IntVector parse_element(const std::string& s);

FiniteQuadraticForm cyclic_form(i64 m, i64 n);
FiniteQuadraticForm u_block(int k);
FiniteQuadraticForm v_block(int k);
FiniteQuadraticForm direct_sum(const std::vector<FiniteQuadraticForm>& forms);

// Parses "-15/16 + -3/4 + 1/4", "U(2^k)", "V(2^k)"; the empty string is the trivial form.
FiniteQuadraticForm parse_form(const std::string& text);

struct PrimaryPart {
    FiniteQuadraticForm form;
    std::vector<IntVector> embedding;  // images of the generators of `form` in the ambient form
};
PrimaryPart p_primary_part(const FiniteQuadraticForm& f, i64 p);
int length_p(const FiniteQuadraticForm& f, i64 p);
int length(const FiniteQuadraticForm& f);
std::vector<i64> primes_of(const FiniteQuadraticForm& f);
bool is_even_2part(const FiniteQuadraticForm& f);

// Elements of the subgroup generated by `gens`, as sorted element indices.
std::vector<i64> subgroup_elements(const FiniteQuadraticForm& f, const std::vector<IntVector>& gens);
bool is_isotropic(const FiniteQuadraticForm& f, const std::vector<IntVector>& gens);

struct IsotropicSubgroup {
    std::vector<IntVector> generators;
};

// One representative per orbit of isotropic subgroups under the group generated
// by `action` (automorphism matrices).  Brute force; intended for small forms.
std::vector<IsotropicSubgroup> isotropic_subgroups(const FiniteQuadraticForm& f,
                                                   const std::vector<IntMatrix>& action);

// K-perp / K with a section and a coordinate map from K-perp.
class Subquotient {
  public:
    Subquotient(const FiniteQuadraticForm& ambient, const std::vector<IntVector>& kernel);
    const FiniteQuadraticForm& form() const { return form_; }
    const std::vector<IntVector>& section() const { return section_; }
    const std::vector<i64>& kernel_elements() const { return kernel_; }
    bool in_perp(const IntVector& x) const;
    // Coordinates of x + K in the basis of form(); x must lie in K-perp.
    IntVector coords(const IntVector& x) const;
    // Induced automorphism of K-perp/K of an ambient automorphism stabilizing K.
    IntMatrix induced(const IntMatrix& g) const;

  private:
    FiniteQuadraticForm ambient_;
    FiniteQuadraticForm form_;
    std::vector<IntVector> section_;
    std::vector<i64> kernel_;
    std::vector<i64> coset_id_;       // ambient index -> quotient index, -1 outside K-perp
};

FiniteQuadraticForm subquotient(const FiniteQuadraticForm& f, const std::vector<IntVector>& kernel);

inline constexpr i64 kDefaultSearchCap = 10'000'000;

// Calls visit(m) for every isomorphism m: f1 -> f2 with q2(m x) = sign*q1(x).
// Stops early when visit returns false.  Throws when the candidate count exceeds cap.
void for_each_isometry(const FiniteQuadraticForm& f1, const FiniteQuadraticForm& f2, int sign,
                       const std::function<bool(const IntMatrix&)>& visit, i64 cap = kDefaultSearchCap);
std::optional<IntMatrix> find_isometry(const FiniteQuadraticForm& f1, const FiniteQuadraticForm& f2,
                                       int sign = 1, i64 cap = kDefaultSearchCap);
bool anti_isometric(const FiniteQuadraticForm& f1, const FiniteQuadraticForm& f2, i64 cap = kDefaultSearchCap);
bool isometric(const FiniteQuadraticForm& f1, const FiniteQuadraticForm& f2, i64 cap = kDefaultSearchCap);

// All automorphisms, and a generating set of the same group.
std::vector<IntMatrix> automorphisms(const FiniteQuadraticForm& f, i64 cap = kDefaultSearchCap);
std::vector<IntMatrix> automorphism_group(const FiniteQuadraticForm& f, i64 cap = kDefaultSearchCap);

// All elements of the group generated by `gens` (automorphism matrices of f).
std::vector<IntMatrix> generate_group(const FiniteQuadraticForm& f, const std::vector<IntMatrix>& gens,
                                      size_t cap = 1'000'000);
IntMatrix compose(const FiniteQuadraticForm& f, const IntMatrix& a, const IntMatrix& b);  // a after b

}  // namespace qlat

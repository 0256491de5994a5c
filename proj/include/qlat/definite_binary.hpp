#pragma once

#include <string>
#include <vector>

#include "qlat/genus.hpp"
#include "qlat/miranda_morrison.hpp"

namespace qlat {

// Positive definite even binary lattice with Gram [[a,b],[b,c]].
struct BinaryForm {
    i64 a = 2;
    i64 b = 0;
    i64 c = 2;

    i64 det() const { return a * c - b * b; }
    IntMatrix gram() const;
    std::string str() const;  // "[a,b,c]"
    friend bool operator==(const BinaryForm&, const BinaryForm&) = default;
};

// Reduced representative of the proper class: |2b| <= a <= c, b >= 0 when
// 2|b| = a or a = c.
BinaryForm reduce(const BinaryForm& f);

// Integral isometries of the form (finite group).
std::vector<IntMatrix> isometries(const BinaryForm& f);

// Lattices (up to isometry) in a positive definite genus of rank 2.
std::vector<BinaryForm> genus_classes(const GenusSymbol& g);

struct BinaryClassCount {
    BinaryForm form;
    int unoriented = 0;  // double cosets G \ Aut(discr) / O(T)
    int oriented = 0;    // orbits on Aut(discr) x {orientations of T}
};

// Per class bi-coset counts for the configuration's complement (mu = 19).
std::vector<BinaryClassCount> binary_class_counts(const Configuration& c);
ComponentCounts binary_counts(const Configuration& c);

}  // namespace qlat

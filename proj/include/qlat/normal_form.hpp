#pragma once

#include <vector>

#include "qlat/finite_form.hpp"

namespace qlat {

enum class BlockKind { Cyclic, U, V };

// One orthogonal block of the p-part: <m/p^k>, U_{2^k} or V_{2^k}.
struct JordanBlock {
    BlockKind kind = BlockKind::Cyclic;
    int k = 0;
    i64 m = 0;                     // cyclic only: q(generator) = m/p^k exactly, |m| minimal
    std::vector<IntVector> basis;  // elements of the decomposed form

    size_t rank() const { return kind == BlockKind::Cyclic ? 1 : 2; }
};

// Orthogonal splitting of the p-part of a nondegenerate form.  Blocks are
// ordered by ascending k; within equal k cyclic blocks come first, then U, then V.
class NormalForm {
  public:
    NormalForm(const FiniteQuadraticForm& f, i64 p);

    i64 p() const { return p_; }
    const std::vector<JordanBlock>& blocks() const { return blocks_; }
    const FiniteQuadraticForm& source() const { return f_; }
    size_t length() const;
    i64 order() const;  // |F_p|

    // Normalized basis, flattened in block order, and exact rational Gram
    // (block values m/p^k, U and V with their standard entries).
    std::vector<IntVector> basis() const;
    std::vector<i64> orders() const;
    RatMatrix gram() const;
    // Coordinates of the p-component of x in the normalized basis.
    IntVector coords(const IntVector& x) const;

    bool even() const;  // no cyclic block (p = 2), always true for odd p
    // Unit u with det(gram) = u / |F_p|, as an exact rational prime to p.
    Rational det_unit() const;

    std::string str() const;  // e.g. "-1/2 + -1/2 + -5/16" or "U(2^1) + 3/4"

  private:
    FiniteQuadraticForm f_;
    i64 p_;
    std::vector<JordanBlock> blocks_;
};

// Signature modulo 8 of any even lattice with discriminant form f (Gauss sum,
// evaluated block by block).
int signature_mod8(const FiniteQuadraticForm& f);

// det_p: u / |F_p| with u taken modulo
// squares of p-adic units; for p = 2 and an odd 2-part, also modulo 5.
struct PDet {
    i64 p = 2;
    i64 order_p = 1;
    i64 unit_class = 1;  // odd p: 1 or the least non-residue; p = 2: 1,3,5,7 (1 or 3 when coarse)
    bool coarse = false;
};
PDet det_p(const FiniteQuadraticForm& f, i64 p);

}  // namespace qlat

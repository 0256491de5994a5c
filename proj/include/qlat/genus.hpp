#pragma once

#include <string>

#include "qlat/configurations.hpp"

namespace qlat {

struct GenusSymbol {
    int sig_plus = 0;
    int sig_minus = 0;
    FiniteQuadraticForm disc;

    int rank() const { return sig_plus + sig_minus; }
    std::string str() const;  // "(2,1) : -1/2 + ..."
};

// Genus of the orthogonal complement T of S~_h in the K3 lattice:
// signature (2, 19 - mu), discriminant -discr S~_h on the same group.
GenusSymbol complement_genus(const Configuration& c);

// Existence of a primitive embedding into the even unimodular lattice of
// signature (3,19) of an even lattice with the given signature and discriminant.
bool nikulin_exists(int sig_plus, int sig_minus, const FiniteQuadraticForm& disc);
bool realizable(const Configuration& c);

}  // namespace qlat

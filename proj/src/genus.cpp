#include "qlat/genus.hpp"

#include <sstream>

#include "qlat/normal_form.hpp"

namespace qlat {

namespace {

// The 2-part contains an orthogonal summand <u/2> of order 2.
bool splits_half_block(const FiniteQuadraticForm& f) {
    NormalForm nf(f, 2);
    for (const auto& b : nf.blocks())
        if (b.kind == BlockKind::Cyclic && b.k == 1) return true;
    return false;
}

}  // namespace

std::string GenusSymbol::str() const {
    std::ostringstream os;
    os << "(" << sig_plus << "," << sig_minus << ") : " << disc.str();
    return os.str();
}

GenusSymbol complement_genus(const Configuration& c) {
    const int mu = c.set.mu();
    if (mu > 19) throw FormError("complement_genus: total Milnor number exceeds 19");
    return GenusSymbol{2, 19 - mu, c.discr_tilde.negated()};
}

bool nikulin_exists(int sig_plus, int sig_minus, const FiniteQuadraticForm& disc) {
    if (!disc.is_nondegenerate()) throw FormError("nikulin_exists: degenerate discriminant form");
    const int rk = sig_plus + sig_minus;
    const int room = 22 - rk;
    if (sig_plus > 3 || sig_minus > 19 || length(disc) > room) return false;
    if (mod(sig_plus - sig_minus - signature_mod8(disc), 8) != 0) return false;
    const i64 order = disc.order();
    const Rational sign(sig_plus % 2 == 1 ? 1 : -1);  // (-1)^(sig_plus - 1)
    for (i64 p : primes_of(disc)) {
        if (length_p(disc, p) != room) continue;
        PDet d = det_p(disc, p);
        Rational u = Rational(order / d.order_p) * Rational(d.unit_class);
        if (p != 2) {
            if (unit_square_class(u, p) != unit_square_class(sign, p)) return false;
        } else if (!splits_half_block(disc)) {
            // without a block <u/2> the unit is determined modulo 8
            i64 cls = unit_square_class(Rational(order / d.order_p) * NormalForm(disc, 2).det_unit(), 2);
            if (cls != unit_square_class(sign, 2) && cls != unit_square_class(-sign, 2)) return false;
        }
    }
    return true;
}

bool realizable(const Configuration& c) {
    return nikulin_exists(1, c.set.mu(), c.discr_tilde);
}

}  // namespace qlat

#pragma once

#include <cstdint>
#include <iosfwd>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace qlat {

using i64 = std::int64_t;
using i128 = __int128;

class ArithmeticError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Non-negative residue of a modulo m (m > 0).
inline i64 mod(i64 a, i64 m) {
    i64 r = a % m;
    return r < 0 ? r + m : r;
}

inline i64 gcd(i64 a, i64 b) { return std::gcd(a, b); }
inline i64 lcm(i64 a, i64 b) { return (a == 0 || b == 0) ? 0 : std::lcm(a, b); }

// Returns g = gcd(a,b) >= 0 and sets x,y with a*x + b*y = g.
i64 xgcd(i64 a, i64 b, i64& x, i64& y);

// Inverse of a modulo m; throws if not invertible.
i64 inv_mod(i64 a, i64 m);

i64 mul_mod(i64 a, i64 b, i64 m);
i64 pow_int(i64 base, unsigned e);

bool is_prime(i64 n);
std::vector<i64> prime_factors(i64 n);  // distinct, ascending

// Exponent of p in n (n != 0).
int valuation(i64 n, i64 p);

// Legendre symbol (a/p) for odd prime p, a not divisible by p: returns +1 or -1.
int legendre(i64 a, i64 p);

// Exact rational number in lowest terms with positive denominator.
class Rational {
  public:
    Rational() = default;
    Rational(i64 n) : num_(n), den_(1) {}  // NOLINT(implicit)
    Rational(i64 n, i64 d);

    i64 num() const { return num_; }
    i64 den() const { return den_; }
    bool is_zero() const { return num_ == 0; }
    bool is_integer() const { return den_ == 1; }

    Rational operator-() const;
    Rational& operator+=(const Rational& o);
    Rational& operator-=(const Rational& o);
    Rational& operator*=(const Rational& o);
    Rational& operator/=(const Rational& o);

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b);
    friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
    friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

    // Representative of this value modulo m (an integer > 0) in [0, m).
    Rational reduce_mod(i64 m) const;
    // p-adic valuation (value must be nonzero).
    int valuation(i64 p) const;
    // p-adic unit part: this / p^valuation, as a rational with numerator and denominator prime to p.
    Rational unit_part(i64 p) const;

    std::string str() const;

  private:
    static Rational from_wide(i128 n, i128 d);
    i64 num_ = 0;
    i64 den_ = 1;
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

// Parses "m/n" or "m".
Rational parse_rational(const std::string& s);

// Class of a p-adic unit u (given as a rational prime to p) modulo squares.
// Odd p: returns 1 or the least quadratic non-residue mod p. p = 2: returns 1,3,5,7.
i64 unit_square_class(const Rational& u, i64 p);

// Least quadratic non-residue modulo an odd prime.
i64 least_nonresidue(i64 p);

}  // namespace qlat

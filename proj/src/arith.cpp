#include "qlat/arith.hpp"

#include <ostream>

namespace qlat {

i64 xgcd(i64 a, i64 b, i64& x, i64& y) {
    i64 x0 = 1, y0 = 0, x1 = 0, y1 = 1;
    while (b != 0) {
        i64 q = a / b;
        i64 t = a - q * b;
        a = b;
        b = t;
        t = x0 - q * x1;
        x0 = x1;
        x1 = t;
        t = y0 - q * y1;
        y0 = y1;
        y1 = t;
    }
    if (a < 0) {
        a = -a;
        x0 = -x0;
        y0 = -y0;
    }
    x = x0;
    y = y0;
    return a;
}

i64 inv_mod(i64 a, i64 m) {
    if (m == 1) return 0;
    i64 x, y;
    if (xgcd(mod(a, m), m, x, y) != 1) throw ArithmeticError("inv_mod: not invertible");
    return mod(x, m);
}

i64 mul_mod(i64 a, i64 b, i64 m) {
    return static_cast<i64>(mod(static_cast<i64>((static_cast<i128>(a) * b) % m), m));
}

i64 pow_int(i64 base, unsigned e) {
    i128 r = 1;
    for (unsigned i = 0; i < e; ++i) {
        r *= base;
        if (r > INT64_MAX || r < INT64_MIN) throw ArithmeticError("pow_int overflow");
    }
    return static_cast<i64>(r);
}

bool is_prime(i64 n) {
    if (n < 2) return false;
    for (i64 d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

std::vector<i64> prime_factors(i64 n) {
    std::vector<i64> out;
    if (n < 0) n = -n;
    for (i64 d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            out.push_back(d);
            while (n % d == 0) n /= d;
        }
    }
    if (n > 1) out.push_back(n);
    return out;
}

int valuation(i64 n, i64 p) {
    if (n == 0) throw ArithmeticError("valuation of zero");
    int v = 0;
    while (n % p == 0) {
        n /= p;
        ++v;
    }
    return v;
}

static i64 pow_mod(i64 b, i64 e, i64 m) {
    i64 r = 1 % m;
    b = mod(b, m);
    while (e > 0) {
        if (e & 1) r = mul_mod(r, b, m);
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    return r;
}

int legendre(i64 a, i64 p) {
    a = mod(a, p);
    if (a == 0) throw ArithmeticError("legendre: a divisible by p");
    return pow_mod(a, (p - 1) / 2, p) == 1 ? 1 : -1;
}

i64 least_nonresidue(i64 p) {
    for (i64 a = 2; a < p; ++a)
        if (legendre(a, p) == -1) return a;
    throw ArithmeticError("least_nonresidue: no non-residue");
}

Rational::Rational(i64 n, i64 d) {
    if (d == 0) throw ArithmeticError("zero denominator");
    *this = from_wide(n, d);
}

Rational Rational::from_wide(i128 n, i128 d) {
    if (d < 0) {
        n = -n;
        d = -d;
    }
    i128 a = n < 0 ? -n : n, b = d;
    while (b != 0) {
        i128 t = a % b;
        a = b;
        b = t;
    }
    if (a > 1) {
        n /= a;
        d /= a;
    }
    if (n > INT64_MAX || n < -INT64_MAX || d > INT64_MAX)
        throw ArithmeticError("rational overflow");
    Rational r;
    r.num_ = static_cast<i64>(n);
    r.den_ = static_cast<i64>(d);
    return r;
}

Rational Rational::operator-() const {
    Rational r = *this;
    r.num_ = -r.num_;
    return r;
}

Rational& Rational::operator+=(const Rational& o) {
    *this = from_wide(static_cast<i128>(num_) * o.den_ + static_cast<i128>(o.num_) * den_,
                      static_cast<i128>(den_) * o.den_);
    return *this;
}

Rational& Rational::operator-=(const Rational& o) { return *this += -o; }

Rational& Rational::operator*=(const Rational& o) {
    *this = from_wide(static_cast<i128>(num_) * o.num_, static_cast<i128>(den_) * o.den_);
    return *this;
}

Rational& Rational::operator/=(const Rational& o) {
    if (o.num_ == 0) throw ArithmeticError("division by zero");
    *this = from_wide(static_cast<i128>(num_) * o.den_, static_cast<i128>(den_) * o.num_);
    return *this;
}

bool operator<(const Rational& a, const Rational& b) {
    return static_cast<i128>(a.num_) * b.den_ < static_cast<i128>(b.num_) * a.den_;
}

Rational Rational::reduce_mod(i64 m) const {
    i128 M = static_cast<i128>(m) * den_;
    i128 r = num_ % M;
    if (r < 0) r += M;
    return from_wide(r, den_);
}

int Rational::valuation(i64 p) const {
    if (num_ == 0) throw ArithmeticError("valuation of zero");
    return qlat::valuation(num_, p) - qlat::valuation(den_, p);
}

Rational Rational::unit_part(i64 p) const {
    i64 n = num_, d = den_;
    while (n % p == 0) n /= p;
    while (d % p == 0) d /= p;
    return Rational(n, d);
}

std::string Rational::str() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

Rational parse_rational(const std::string& s) {
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rational(std::stoll(s));
        return Rational(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
    } catch (const std::logic_error&) {
        throw ArithmeticError("cannot parse rational '" + s + "'");
    }
}

i64 unit_square_class(const Rational& u, i64 p) {
    if (u.num() % p == 0 || u.den() % p == 0) throw ArithmeticError("not a p-adic unit");
    if (p == 2) {
        // num * den^{-1} mod 8; den odd so den^2 = 1 mod 8 and den^{-1} = den.
        return mod(mod(u.num(), 8) * mod(u.den(), 8), 8);
    }
    return legendre(u.num(), p) * legendre(u.den(), p) == 1 ? 1 : least_nonresidue(p);
}

}  // namespace qlat

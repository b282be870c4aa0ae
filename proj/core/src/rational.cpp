#include "segcoal/rational.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace segcoal {
namespace {

using Int = Rational::Int;

constexpr Int kMax = std::numeric_limits<Int>::max();

Int abs128(Int v) { return v < 0 ? -v : v; }

Int gcd128(Int a, Int b) {
    a = abs128(a);
    b = abs128(b);
    while (b != 0) {
        Int r = a % b;
        a = b;
        b = r;
    }
    return a;
}

Int mul_checked(Int a, Int b) {
    Int r;
    if (__builtin_mul_overflow(a, b, &r)) {
        throw std::overflow_error("rational arithmetic overflow");
    }
    return r;
}

Int add_checked(Int a, Int b) {
    Int r;
    if (__builtin_add_overflow(a, b, &r)) {
        throw std::overflow_error("rational arithmetic overflow");
    }
    return r;
}

}  // namespace

Rational::Rational(Int num, Int den) {
    if (den == 0) {
        throw std::domain_error("rational with zero denominator");
    }
    if (den < 0) {
        num = -num;
        den = -den;
    }
    Int g = gcd128(num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
    num_ = num;
    den_ = den;
}

double Rational::to_double() const {
    return static_cast<double>(static_cast<long double>(num_) / static_cast<long double>(den_));
}

std::string Rational::to_string() const {
    if (den_ == 1) return int128_to_string(num_);
    return int128_to_string(num_) + "/" + int128_to_string(den_);
}

Rational operator+(const Rational& a, const Rational& b) {
    // Reduce through the gcd of denominators so dyadic-style sums stay small.
    Int g = gcd128(a.den_, b.den_);
    Int da = a.den_ / g;
    Int db = b.den_ / g;
    Int num = add_checked(mul_checked(a.num_, db), mul_checked(b.num_, da));
    Int den = mul_checked(a.den_, db);
    return Rational(num, den);
}

Rational operator-(const Rational& a, const Rational& b) {
    return a + Rational(-b.num_, b.den_);
}

Rational operator*(const Rational& a, const Rational& b) {
    Int g1 = gcd128(a.num_, b.den_);
    Int g2 = gcd128(b.num_, a.den_);
    if (g1 == 0) g1 = 1;
    if (g2 == 0) g2 = 1;
    return Rational(mul_checked(a.num_ / g1, b.num_ / g2), mul_checked(a.den_ / g2, b.den_ / g1));
}

Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw std::domain_error("rational division by zero");
    return a * Rational(b.den_, b.num_);
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    Int lhs = mul_checked(a.num_, b.den_);
    Int rhs = mul_checked(b.num_, a.den_);
    return lhs <=> rhs;
}

Int checked_pow(Int base, int exp) {
    if (exp < 0) throw std::domain_error("negative exponent");
    Int r = 1;
    for (int i = 0; i < exp; ++i) {
        if (base != 0 && abs128(r) > kMax / abs128(base)) {
            throw std::overflow_error("integer power overflows 128 bits");
        }
        r *= base;
    }
    return r;
}

std::string int128_to_string(Int v) {
    if (v == 0) return "0";
    bool neg = v < 0;
    // Work in unsigned space so the minimum value does not overflow on negation.
    unsigned __int128 u = neg ? static_cast<unsigned __int128>(-(v + 1)) + 1 : static_cast<unsigned __int128>(v);
    std::string s;
    while (u > 0) {
        s.push_back(static_cast<char>('0' + static_cast<int>(u % 10)));
        u /= 10;
    }
    if (neg) s.push_back('-');
    std::reverse(s.begin(), s.end());
    return s;
}

}  // namespace segcoal

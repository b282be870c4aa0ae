#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace segcoal {

// Exact rational with 128-bit numerator/denominator, kept in lowest terms
// with a positive denominator. Arithmetic throws std::overflow_error rather
// than wrapping.
class Rational {
public:
    __extension__ typedef __int128 Int;

    constexpr Rational() = default;
    Rational(Int num, Int den = 1);

    Int num() const { return num_; }
    Int den() const { return den_; }

    double to_double() const;
    std::string to_string() const;  // "p/q", or "p" when q == 1

    friend Rational operator+(const Rational& a, const Rational& b);
    friend Rational operator-(const Rational& a, const Rational& b);
    friend Rational operator*(const Rational& a, const Rational& b);
    friend Rational operator/(const Rational& a, const Rational& b);
    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator-=(const Rational& o) { return *this = *this - o; }
    Rational& operator*=(const Rational& o) { return *this = *this * o; }

    friend bool operator==(const Rational& a, const Rational& b) = default;
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

private:
    Int num_ = 0;
    Int den_ = 1;
};

// base^exp, throwing std::overflow_error if the result leaves the 128-bit range.
Rational::Int checked_pow(Rational::Int base, int exp);

std::string int128_to_string(Rational::Int v);

}  // namespace segcoal

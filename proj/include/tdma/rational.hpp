#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace tdma {

/// Exact rational number. Values whose reduced numerator and denominator
/// fit in 64 bits are stored inline; anything larger falls back to an
/// arbitrary-precision representation, so arithmetic never overflows.
class Rational {
public:
    using Big = boost::multiprecision::cpp_rational;
    using BigInt = boost::multiprecision::cpp_int;

    Rational() = default;
    Rational(long long n) : n_(n) {}  // NOLINT(google-explicit-constructor)
    Rational(long n) : n_(n) {}       // NOLINT(google-explicit-constructor)
    Rational(int n) : n_(n) {}        // NOLINT(google-explicit-constructor)
    /// Throws std::domain_error for a zero denominator.
    Rational(long long n, long long d);
    Rational(const BigInt& n, const BigInt& d);
    explicit Rational(const Big& v);

    BigInt numerator() const;
    BigInt denominator() const;
    Big to_big() const;
    bool is_small() const { return !big_; }
    /// "n" or "n/d".
    std::string str() const;
    int sign() const;

    friend Rational operator+(const Rational& a, const Rational& b);
    friend Rational operator-(const Rational& a, const Rational& b);
    friend Rational operator*(const Rational& a, const Rational& b);
    friend Rational operator/(const Rational& a, const Rational& b);
    Rational operator-() const;
    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator-=(const Rational& o) { return *this = *this - o; }
    Rational& operator*=(const Rational& o) { return *this = *this * o; }

    friend bool operator==(const Rational& a, const Rational& b);
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

private:
    static Rational from_wide(__int128 n, __int128 d);

    std::int64_t n_ = 0;
    std::int64_t d_ = 1;
    std::shared_ptr<const Big> big_;
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

}  // namespace tdma

#include "tdma/rational.hpp"

#include <limits>
#include <ostream>
#include <stdexcept>

namespace tdma {

namespace {

using u128 = unsigned __int128;

u128 abs128(__int128 v) { return v < 0 ? static_cast<u128>(-(v + 1)) + 1 : static_cast<u128>(v); }

u128 gcd128(u128 a, u128 b) {
    while (b != 0) {
        const u128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

bool fits64(__int128 v) {
    return v >= std::numeric_limits<std::int64_t>::min() && v <= std::numeric_limits<std::int64_t>::max();
}

Rational::BigInt to_big_int(__int128 v) {
    const bool neg = v < 0;
    u128 m = abs128(v);
    Rational::BigInt out = static_cast<std::uint64_t>(m >> 64);
    out <<= 64;
    out += static_cast<std::uint64_t>(m);
    return neg ? Rational::BigInt(-out) : out;
}

}  // namespace

Rational Rational::from_wide(__int128 n, __int128 d) {
    if (d == 0) throw std::domain_error("rational with zero denominator");
    if (d < 0) {
        n = -n;
        d = -d;
    }
    const u128 g = gcd128(abs128(n), static_cast<u128>(d));
    if (g > 1) {
        n /= static_cast<__int128>(g);
        d /= static_cast<__int128>(g);
    }
    Rational r;
    if (fits64(n) && fits64(d)) {
        r.n_ = static_cast<std::int64_t>(n);
        r.d_ = static_cast<std::int64_t>(d);
    } else {
        r.big_ = std::make_shared<const Big>(to_big_int(n), to_big_int(d));
    }
    return r;
}

Rational::Rational(long long n, long long d) { *this = from_wide(n, d); }

Rational::Rational(const BigInt& n, const BigInt& d) {
    if (d == 0) throw std::domain_error("rational with zero denominator");
    *this = Rational(Big(n, d));
}

Rational::Rational(const Big& v) {
    const BigInt& n = boost::multiprecision::numerator(v);
    const BigInt& d = boost::multiprecision::denominator(v);
    const BigInt lo = std::numeric_limits<std::int64_t>::min();
    const BigInt hi = std::numeric_limits<std::int64_t>::max();
    if (n >= lo && n <= hi && d <= hi) {
        n_ = static_cast<std::int64_t>(n);
        d_ = static_cast<std::int64_t>(d);
    } else {
        big_ = std::make_shared<const Big>(v);
    }
}

Rational::BigInt Rational::numerator() const { return big_ ? BigInt(boost::multiprecision::numerator(*big_)) : BigInt(n_); }
Rational::BigInt Rational::denominator() const {
    return big_ ? BigInt(boost::multiprecision::denominator(*big_)) : BigInt(d_);
}
Rational::Big Rational::to_big() const { return big_ ? *big_ : Big(BigInt(n_), BigInt(d_)); }

std::string Rational::str() const {
    if (!big_) return d_ == 1 ? std::to_string(n_) : std::to_string(n_) + "/" + std::to_string(d_);
    const auto d = denominator();
    return d == 1 ? numerator().str() : numerator().str() + "/" + d.str();
}

int Rational::sign() const {
    if (big_) return big_->sign();
    return (n_ > 0) - (n_ < 0);
}

Rational operator+(const Rational& a, const Rational& b) {
    if (a.big_ || b.big_) return Rational(a.to_big() + b.to_big());
    if (a.d_ == b.d_) return Rational::from_wide(static_cast<__int128>(a.n_) + b.n_, a.d_);
    return Rational::from_wide(static_cast<__int128>(a.n_) * b.d_ + static_cast<__int128>(b.n_) * a.d_,
                               static_cast<__int128>(a.d_) * b.d_);
}

Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }

Rational Rational::operator-() const {
    if (big_) return Rational(Big(-*big_));
    return from_wide(-static_cast<__int128>(n_), d_);
}

Rational operator*(const Rational& a, const Rational& b) {
    if (a.big_ || b.big_) return Rational(a.to_big() * b.to_big());
    return Rational::from_wide(static_cast<__int128>(a.n_) * b.n_, static_cast<__int128>(a.d_) * b.d_);
}

Rational operator/(const Rational& a, const Rational& b) {
    if (b.sign() == 0) throw std::domain_error("division by zero");
    if (a.big_ || b.big_) return Rational(a.to_big() / b.to_big());
    return Rational::from_wide(static_cast<__int128>(a.n_) * b.d_, static_cast<__int128>(a.d_) * b.n_);
}

bool operator==(const Rational& a, const Rational& b) {
    if (!a.big_ && !b.big_) return a.n_ == b.n_ && a.d_ == b.d_;
    if (a.big_ && b.big_) return *a.big_ == *b.big_;
    return false;  // reduced forms: a big value never equals a small one
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    if (!a.big_ && !b.big_) {
        if (a.d_ == b.d_) return a.n_ <=> b.n_;
        return static_cast<__int128>(a.n_) * b.d_ <=> static_cast<__int128>(b.n_) * a.d_;
    }
    const auto x = a.to_big();
    const auto y = b.to_big();
    if (x < y) return std::strong_ordering::less;
    if (y < x) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

}  // namespace tdma

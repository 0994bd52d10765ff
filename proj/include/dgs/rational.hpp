#pragma once

#include <cstdint>
#include <string>

#include "dgs/errors.hpp"

namespace dgs {

using int128 = __int128;

namespace detail {

inline unsigned __int128 uabs128(int128 v) {
    return v < 0 ? static_cast<unsigned __int128>(-(v + 1)) + 1
                 : static_cast<unsigned __int128>(v);
}

// std::gcd is unavailable for __int128 under -std=c++20 (not an integral
// type in strict mode), so spell out Euclid.
inline unsigned __int128 gcd128(unsigned __int128 a, unsigned __int128 b) {
    while (b != 0) {
        const unsigned __int128 r = a % b;
        a = b;
        b = r;
    }
    return a;
}

inline int128 checked_mul(int128 a, int128 b) {
    if (a == 0 || b == 0) return 0;
    const unsigned __int128 ua = uabs128(a), ub = uabs128(b);
    constexpr unsigned __int128 kMax =
        (~static_cast<unsigned __int128>(0)) >> 1; // INT128_MAX
    if (ua > kMax / ub) throw Overflow("rational multiplication overflow");
    return a * b;
}

} // namespace detail

// Exact rational on 128-bit integers, always kept normalized
// (den > 0, gcd(|num|, den) == 1). Wide enough for every oracle quantity:
// the worst denominator in play is M^p * M! * prod(d+) <= ~1e19 at the
// M <= 8 enumeration cap.
struct Rational {
    int128 num = 0;
    int128 den = 1;

    Rational() = default;
    Rational(long long n) : num(n), den(1) {}
    Rational(int128 n, int128 d) : num(n), den(d) { normalize(); }

    void normalize() {
        if (den == 0) throw Singular("rational with zero denominator");
        if (den < 0) {
            num = -num;
            den = -den;
        }
        if (num == 0) {
            den = 1;
            return;
        }
        const auto g = detail::gcd128(detail::uabs128(num), detail::uabs128(den));
        num /= static_cast<int128>(g);
        den /= static_cast<int128>(g);
    }

    friend Rational operator+(const Rational& a, const Rational& b) {
        using detail::checked_mul;
        const auto g = detail::gcd128(detail::uabs128(a.den), detail::uabs128(b.den));
        const int128 bg = b.den / static_cast<int128>(g);
        const int128 ag = a.den / static_cast<int128>(g);
        const int128 n = checked_mul(a.num, bg) + checked_mul(b.num, ag);
        const int128 d = checked_mul(a.den, bg);
        return Rational(n, d);
    }
    friend Rational operator-(const Rational& a, const Rational& b) {
        return a + Rational(-b.num, b.den);
    }
    friend Rational operator*(const Rational& a, const Rational& b) {
        // Cross-reduce before multiplying to keep intermediates small.
        const auto g1 = detail::gcd128(detail::uabs128(a.num), detail::uabs128(b.den));
        const auto g2 = detail::gcd128(detail::uabs128(b.num), detail::uabs128(a.den));
        const int128 n = detail::checked_mul(a.num / static_cast<int128>(g1),
                                             b.num / static_cast<int128>(g2));
        const int128 d = detail::checked_mul(a.den / static_cast<int128>(g2),
                                             b.den / static_cast<int128>(g1));
        return Rational(n, d);
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.num == 0) throw Singular("rational division by zero");
        return a * Rational(b.den, b.num);
    }
    Rational operator-() const { return Rational(-num, den); }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num == b.num && a.den == b.den;
    }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }

    double to_double() const {
        return static_cast<double>(static_cast<long double>(num) /
                                   static_cast<long double>(den));
    }

    std::string to_string() const {
        auto digits = [](int128 v) {
            if (v == 0) return std::string("0");
            std::string s;
            unsigned __int128 u = detail::uabs128(v);
            while (u != 0) {
                s.push_back(static_cast<char>('0' + static_cast<int>(u % 10)));
                u /= 10;
            }
            if (v < 0) s.push_back('-');
            return std::string(s.rbegin(), s.rend());
        };
        if (den == 1) return digits(num);
        return digits(num) + "/" + digits(den);
    }
};

} // namespace dgs

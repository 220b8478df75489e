#pragma once

#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>

#include "favi/errors.hpp"

namespace favi {

/// Exact fraction over 128-bit integers, kept normalized (gcd 1,
/// positive denominator). Values in this library come from test-set
/// counts, so normalized intermediates stay far below the 128-bit
/// range; overflow raises instead of wrapping.
class Rational {
public:
    using Int = __int128;

    constexpr Rational() = default;
    Rational(long long value) : num_(value), den_(1) {}  // NOLINT: implicit by design
    Rational(long long num, long long den) : num_(num), den_(den) { normalize(); }

    static Rational from_raw(Int num, Int den) {
        Rational r;
        r.num_ = num;
        r.den_ = den;
        r.normalize();
        return r;
    }

    Int numerator() const noexcept { return num_; }
    Int denominator() const noexcept { return den_; }

    bool is_zero() const noexcept { return num_ == 0; }

    Rational abs() const { return num_ < 0 ? from_raw(-num_, den_) : *this; }

    double to_double() const {
        return static_cast<double>(static_cast<long double>(num_) /
                                   static_cast<long double>(den_));
    }

    std::string str() const {
        std::string s = int_to_string(num_);
        if (den_ != 1) {
            s += "/";
            s += int_to_string(den_);
        }
        return s;
    }

    friend Rational operator+(const Rational& a, const Rational& b) {
        return from_raw(checked_add(checked_mul(a.num_, b.den_), checked_mul(b.num_, a.den_)),
                        checked_mul(a.den_, b.den_));
    }
    friend Rational operator-(const Rational& a, const Rational& b) {
        return from_raw(checked_add(checked_mul(a.num_, b.den_), -checked_mul(b.num_, a.den_)),
                        checked_mul(a.den_, b.den_));
    }
    friend Rational operator*(const Rational& a, const Rational& b) {
        return from_raw(checked_mul(a.num_, b.num_), checked_mul(a.den_, b.den_));
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.num_ == 0) {
            throw InvalidInput("rational division by zero");
        }
        return from_raw(checked_mul(a.num_, b.den_), checked_mul(a.den_, b.num_));
    }
    Rational operator-() const { return from_raw(-num_, den_); }

    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator-=(const Rational& o) { return *this = *this - o; }
    Rational& operator*=(const Rational& o) { return *this = *this * o; }
    Rational& operator/=(const Rational& o) { return *this = *this / o; }

    friend bool operator==(const Rational& a, const Rational& b) noexcept {
        return a.num_ == b.num_ && a.den_ == b.den_;  // both normalized
    }
    friend bool operator!=(const Rational& a, const Rational& b) noexcept { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b) {
        return checked_mul(a.num_, b.den_) < checked_mul(b.num_, a.den_);
    }
    friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
    friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

    friend std::ostream& operator<<(std::ostream& out, const Rational& r) {
        return out << r.str();
    }

private:
    void normalize() {
        if (den_ == 0) {
            throw InvalidInput("rational with zero denominator");
        }
        if (den_ < 0) {
            num_ = -num_;
            den_ = -den_;
        }
        Int g = gcd128(num_ < 0 ? -num_ : num_, den_);
        if (g > 1) {
            num_ /= g;
            den_ /= g;
        }
    }

    static Int gcd128(Int a, Int b) noexcept {
        while (b != 0) {
            Int t = a % b;
            a = b;
            b = t;
        }
        return a == 0 ? 1 : a;
    }

    static Int checked_mul(Int a, Int b) {
        Int out = 0;
        if (__builtin_mul_overflow(a, b, &out)) {
            throw std::overflow_error("rational arithmetic overflow");
        }
        return out;
    }

    static Int checked_add(Int a, Int b) {
        Int out = 0;
        if (__builtin_add_overflow(a, b, &out)) {
            throw std::overflow_error("rational arithmetic overflow");
        }
        return out;
    }

    static std::string int_to_string(Int v) {
        if (v == 0) {
            return "0";
        }
        bool neg = v < 0;
        unsigned __int128 u = neg ? -static_cast<unsigned __int128>(v) : v;
        std::string digits;
        while (u != 0) {
            digits.push_back(static_cast<char>('0' + static_cast<int>(u % 10)));
            u /= 10;
        }
        if (neg) {
            digits.push_back('-');
        }
        return {digits.rbegin(), digits.rend()};
    }

    Int num_ = 0;
    Int den_ = 1;
};

}  // namespace favi

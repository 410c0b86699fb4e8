// Minimal exact rational on 128-bit integers, enough for the recurrence
// closed forms run at equality (dyadic inputs, j <= 5, t <= 40).
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace hdla {

using int128 = __int128;

class Rational {
public:
    Rational() = default;
    Rational(std::int64_t v) : num_(v) {}
    Rational(std::int64_t num, std::int64_t den) : num_(num), den_(den) { normalize(); }

    static Rational from_raw(int128 num, int128 den) {
        Rational r;
        r.num_ = num;
        r.den_ = den;
        r.normalize();
        return r;
    }

    int128 num() const { return num_; }
    int128 den() const { return den_; }

    bool negative() const { return num_ < 0; }
    double to_double() const {
        return static_cast<double>(num_) / static_cast<double>(den_);
    }

    friend Rational operator+(const Rational& a, const Rational& b) {
        return from_raw(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend Rational operator*(const Rational& a, const Rational& b) {
        return from_raw(a.num_ * b.num_, a.den_ * b.den_);
    }
    friend Rational operator*(const Rational& a, std::int64_t b) {
        return from_raw(a.num_ * b, a.den_);
    }
    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator<=(const Rational& a, const Rational& b) {
        return a.num_ * b.den_ <= b.num_ * a.den_;
    }

    std::string str() const {
        auto digits = [](int128 v) {
            if (v == 0) return std::string("0");
            const bool neg = v < 0;
            if (neg) v = -v;
            std::string s;
            while (v > 0) {
                s.insert(s.begin(), static_cast<char>('0' + static_cast<int>(v % 10)));
                v /= 10;
            }
            return neg ? "-" + s : s;
        };
        return den_ == 1 ? digits(num_) : digits(num_) + "/" + digits(den_);
    }

private:
    static int128 gcd(int128 a, int128 b) {
        if (a < 0) a = -a;
        if (b < 0) b = -b;
        while (b != 0) {
            const int128 r = a % b;
            a = b;
            b = r;
        }
        return a;
    }

    void normalize() {
        if (den_ == 0) throw std::domain_error("rational with zero denominator");
        if (den_ < 0) {
            den_ = -den_;
            num_ = -num_;
        }
        const int128 g = gcd(num_, den_);
        if (g > 1) {
            num_ /= g;
            den_ /= g;
        }
    }

    int128 num_ = 0;
    int128 den_ = 1;
};

} // namespace hdla

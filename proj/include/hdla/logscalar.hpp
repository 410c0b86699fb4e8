// Carrier for astronomically large nonnegative quantities: a value is held
// as the natural log of its magnitude plus a zero flag.
#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

namespace hdla {

class LogScalar {
public:
    constexpr LogScalar() = default;

    static LogScalar zero() { return LogScalar{}; }

    static LogScalar from_log(double log_value) {
        LogScalar s;
        s.zero_ = false;
        s.log_ = log_value;
        return s;
    }

    static LogScalar from_value(double v) {
        if (v < 0.0) throw std::domain_error("LogScalar holds nonnegative values");
        if (v == 0.0) return zero();
        return from_log(std::log(v));
    }

    bool is_zero() const { return zero_; }

    double log_value() const {
        if (zero_) throw std::domain_error("log of zero");
        return log_;
    }

    // Linear value; overflows to +inf past ~e^709.
    double value() const { return zero_ ? 0.0 : std::exp(log_); }

    friend LogScalar operator*(LogScalar a, LogScalar b) {
        if (a.zero_ || b.zero_) return zero();
        return from_log(a.log_ + b.log_);
    }

    friend LogScalar operator/(LogScalar a, LogScalar b) {
        if (b.zero_) throw std::domain_error("LogScalar division by zero");
        if (a.zero_) return zero();
        return from_log(a.log_ - b.log_);
    }

    LogScalar pow(double e) const {
        if (zero_) {
            if (e <= 0.0) throw std::domain_error("0 to a nonpositive power");
            return zero();
        }
        return from_log(log_ * e);
    }

    friend LogScalar operator+(LogScalar a, LogScalar b) {
        if (a.zero_) return b;
        if (b.zero_) return a;
        const double hi = a.log_ > b.log_ ? a.log_ : b.log_;
        const double lo = a.log_ > b.log_ ? b.log_ : a.log_;
        return from_log(hi + std::log1p(std::exp(lo - hi)));
    }

    // a - b for a > b; exact zero allowed, negative result throws.
    friend LogScalar sub_positive(LogScalar a, LogScalar b) {
        if (b.zero_) return a;
        if (a.zero_ || a.log_ < b.log_)
            throw std::domain_error("LogScalar subtraction would be negative");
        if (a.log_ == b.log_) return zero();
        const double d = -std::expm1(b.log_ - a.log_); // 1 - e^{log b - log a}
        return from_log(a.log_ + std::log(d));
    }

    friend bool operator<(LogScalar a, LogScalar b) {
        if (a.zero_) return !b.zero_;
        if (b.zero_) return false;
        return a.log_ < b.log_;
    }
    friend bool operator>(LogScalar a, LogScalar b) { return b < a; }

private:
    bool zero_ = true;
    double log_ = -std::numeric_limits<double>::infinity();
};

} // namespace hdla

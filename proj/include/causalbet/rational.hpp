#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace causalbet {

using BigInt = boost::multiprecision::cpp_int;

// Exact rational: arbitrary-precision numerator over a positive denominator,
// always in lowest terms. Every comparison (including equality) is exact, so
// equality-based tests such as screening-off are decidable.
class Rational {
public:
    Rational() : num_(0), den_(1) {}
    Rational(long long n) : num_(n), den_(1) {}  // NOLINT: implicit by design
    Rational(BigInt n) : num_(std::move(n)), den_(1) {}
    Rational(BigInt num, BigInt den) : num_(std::move(num)), den_(std::move(den)) {
        if (den_ == 0) {
            throw std::invalid_argument("Rational: zero denominator");
        }
        normalize();
    }

    const BigInt& num() const { return num_; }
    const BigInt& den() const { return den_; }

    bool is_zero() const { return num_ == 0; }
    int sign() const { return num_ == 0 ? 0 : (num_ > 0 ? 1 : -1); }

    // 2^e for any integer e, including negative exponents.
    static Rational pow2(int e) {
        BigInt p = BigInt(1) << (e >= 0 ? e : -e);
        return e >= 0 ? Rational(std::move(p)) : Rational(1, std::move(p));
    }

    // Uniform exact text form "num/den" (integers included, e.g. "3/1").
    std::string str() const { return num_.str() + "/" + den_.str(); }

    // Accepts "123", "-4" and "num/den" with optional leading '-' on either
    // part. Anything else (notably decimal or exponent notation) is rejected.
    static Rational parse(std::string_view s) {
        const auto slash = s.find('/');
        if (slash == std::string_view::npos) {
            return Rational(parse_integer(s));
        }
        BigInt num = parse_integer(s.substr(0, slash));
        BigInt den = parse_integer(s.substr(slash + 1));
        if (den == 0) {
            throw std::invalid_argument("Rational: zero denominator in '" + std::string(s) + "'");
        }
        return Rational(std::move(num), std::move(den));
    }

    friend Rational operator-(const Rational& x) {
        Rational r;
        r.num_ = -x.num_;
        r.den_ = x.den_;
        return r;
    }
    friend Rational operator+(const Rational& x, const Rational& y) {
        return Rational(x.num_ * y.den_ + y.num_ * x.den_, x.den_ * y.den_);
    }
    friend Rational operator-(const Rational& x, const Rational& y) {
        return Rational(x.num_ * y.den_ - y.num_ * x.den_, x.den_ * y.den_);
    }
    friend Rational operator*(const Rational& x, const Rational& y) {
        return Rational(x.num_ * y.num_, x.den_ * y.den_);
    }
    friend Rational operator/(const Rational& x, const Rational& y) {
        if (y.num_ == 0) {
            throw std::domain_error("Rational: division by zero");
        }
        return Rational(x.num_ * y.den_, x.den_ * y.num_);
    }

    Rational& operator+=(const Rational& x) { return *this = *this + x; }
    Rational& operator-=(const Rational& x) { return *this = *this - x; }
    Rational& operator*=(const Rational& x) { return *this = *this * x; }
    Rational& operator/=(const Rational& x) { return *this = *this / x; }

    // Normalized form makes member-wise equality exact.
    friend bool operator==(const Rational& x, const Rational& y) {
        return x.num_ == y.num_ && x.den_ == y.den_;
    }
    friend bool operator!=(const Rational& x, const Rational& y) { return !(x == y); }
    friend bool operator<(const Rational& x, const Rational& y) {
        return x.num_ * y.den_ < y.num_ * x.den_;
    }
    friend bool operator>(const Rational& x, const Rational& y) { return y < x; }
    friend bool operator<=(const Rational& x, const Rational& y) { return !(y < x); }
    friend bool operator>=(const Rational& x, const Rational& y) { return !(x < y); }

    friend std::ostream& operator<<(std::ostream& os, const Rational& x) {
        return os << x.str();
    }

private:
    void normalize() {
        if (den_ < 0) {
            num_ = -num_;
            den_ = -den_;
        }
        BigInt g = boost::multiprecision::gcd(num_, den_);
        if (g > 1) {
            num_ /= g;
            den_ /= g;
        }
        if (num_ == 0) {
            den_ = 1;
        }
    }

    static BigInt parse_integer(std::string_view s) {
        bool neg = false;
        if (!s.empty() && s.front() == '-') {
            neg = true;
            s.remove_prefix(1);
        }
        if (s.empty()) {
            throw std::invalid_argument("Rational: empty integer");
        }
        BigInt v = 0;
        for (char ch : s) {
            if (ch < '0' || ch > '9') {
                throw std::invalid_argument(std::string("Rational: invalid character '") + ch +
                                            "' in number");
            }
            v = v * 10 + (ch - '0');
        }
        return neg ? BigInt(-v) : v;
    }

    BigInt num_, den_;
};

}  // namespace causalbet

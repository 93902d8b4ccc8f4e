#ifndef HARMONIC_RATIONAL_HPP
#define HARMONIC_RATIONAL_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace harmonic {

using BigInt = boost::multiprecision::cpp_int;

namespace detail {

// C(n, k) as an exact integer; 0 outside the triangle.
inline BigInt binomial(std::int64_t n, std::int64_t k) {
    if (k < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    BigInt c = 1;
    for (std::int64_t j = 1; j <= k; ++j) {
        c *= n - k + j;
        c /= j;  // exact at every step
    }
    return c;
}

}  // namespace detail

/// Exact rational number.
///
/// Invariants: stored in lowest terms, denominator > 0 (sign lives in the
/// numerator), zero is 0/1. Normalization happens in the constructor, never
/// lazily, so the invariants hold on every live value.
class BigRational {
public:
    BigRational() : num_(0), den_(1) {}
    BigRational(long long n) : num_(n), den_(1) {}  // NOLINT: implicit by design
    explicit BigRational(BigInt n) : num_(std::move(n)), den_(1) {}

    BigRational(BigInt num, BigInt den) : num_(std::move(num)), den_(std::move(den)) {
        if (den_ == 0) throw std::domain_error("BigRational: zero denominator");
        normalize();
    }

    const BigInt& numerator() const { return num_; }
    const BigInt& denominator() const { return den_; }

    bool is_zero() const { return num_ == 0; }
    bool is_integer() const { return den_ == 1; }
    int sign() const { return num_ == 0 ? 0 : (num_ < 0 ? -1 : 1); }

    BigRational operator-() const {
        BigRational r;
        r.num_ = -num_;
        r.den_ = den_;
        return r;
    }

    friend BigRational operator+(const BigRational& a, const BigRational& b) {
        return BigRational(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend BigRational operator-(const BigRational& a, const BigRational& b) {
        return BigRational(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
    }
    friend BigRational operator*(const BigRational& a, const BigRational& b) {
        return BigRational(a.num_ * b.num_, a.den_ * b.den_);
    }
    friend BigRational operator/(const BigRational& a, const BigRational& b) {
        if (b.num_ == 0) throw std::domain_error("BigRational: division by zero");
        return BigRational(a.num_ * b.den_, a.den_ * b.num_);
    }

    BigRational& operator+=(const BigRational& o) { return *this = *this + o; }
    BigRational& operator-=(const BigRational& o) { return *this = *this - o; }
    BigRational& operator*=(const BigRational& o) { return *this = *this * o; }
    BigRational& operator/=(const BigRational& o) { return *this = *this / o; }

    // Denominators are positive, so cross multiplication preserves order.
    friend bool operator==(const BigRational& a, const BigRational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const BigRational& a, const BigRational& b) { return !(a == b); }
    friend bool operator<(const BigRational& a, const BigRational& b) {
        return a.num_ * b.den_ < b.num_ * a.den_;
    }
    friend bool operator>(const BigRational& a, const BigRational& b) { return b < a; }
    friend bool operator<=(const BigRational& a, const BigRational& b) { return !(b < a); }
    friend bool operator>=(const BigRational& a, const BigRational& b) { return !(a < b); }

    BigRational abs() const { return num_ < 0 ? -*this : *this; }

    BigRational reciprocal() const {
        if (num_ == 0) throw std::domain_error("BigRational: reciprocal of zero");
        return BigRational(den_, num_);
    }

    /// x^k for any integer k (k < 0 inverts; 0^k with k < 0 throws).
    BigRational pow(std::int64_t k) const {
        if (k < 0) return reciprocal().pow(-k);
        BigRational r;
        r.num_ = boost::multiprecision::pow(num_, static_cast<unsigned>(k));
        r.den_ = boost::multiprecision::pow(den_, static_cast<unsigned>(k));
        return r;  // lowest terms are preserved by powering
    }

    /// Text form: "p/q" in lowest terms, "p" for integers, "0" for zero.
    std::string str() const {
        if (den_ == 1) return num_.str();
        return num_.str() + "/" + den_.str();
    }

    /// Parses the str() format. Throws std::invalid_argument on anything else.
    static BigRational parse(std::string_view s) {
        auto bad = [&] { throw std::invalid_argument("BigRational: cannot parse '" + std::string(s) + "'"); };
        if (s.empty()) bad();
        std::size_t i = 0;
        bool neg = false;
        if (s[i] == '-') {
            neg = true;
            ++i;
        }
        auto digits = [&](BigInt& out) {
            std::size_t start = i;
            out = 0;
            while (i < s.size() && s[i] >= '0' && s[i] <= '9') {
                out = out * 10 + (s[i] - '0');
                ++i;
            }
            if (i == start) bad();
        };
        BigInt num, den = 1;
        digits(num);
        if (i < s.size()) {
            if (s[i] != '/') bad();
            ++i;
            digits(den);
            if (i != s.size()) bad();
        }
        if (neg) num = -num;
        return BigRational(std::move(num), std::move(den));
    }

    friend std::ostream& operator<<(std::ostream& os, const BigRational& q) { return os << q.str(); }

private:
    void normalize() {
        if (den_ < 0) {
            num_ = -num_;
            den_ = -den_;
        }
        if (num_ == 0) {
            den_ = 1;
            return;
        }
        BigInt g = boost::multiprecision::gcd(num_, den_);
        if (g > 1) {
            num_ /= g;
            den_ /= g;
        }
    }

    BigInt num_;
    BigInt den_;  // > 0 always
};

}  // namespace harmonic

#endif  // HARMONIC_RATIONAL_HPP

#ifndef HARMONIC_FIXED_REAL_HPP
#define HARMONIC_FIXED_REAL_HPP

#include "harmonic/rational.hpp"

#include <cstdint>
#include <map>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace harmonic {

/// Fixed-point real: value = mantissa * 2^(-precision_bits).
///
/// Rounding contract, per operation (ulp = 2^(-P) of the result):
///   - add/sub: exact after alignment (result precision = max of the inputs)
///   - mul/div: one round-half-even step, error <= 0.5 ulp
///   - from_rational: one round-half-even step, error <= 0.5 ulp
/// Fixed scale keeps every error bound absolute and additive, which is what
/// the theta/enclosure budgets downstream are accounted in.
class FixedReal {
public:
    static constexpr std::int64_t kMinPrecision = 64;
    static constexpr std::int64_t kDefaultPrecision = 256;

    FixedReal() : mant_(0), prec_(kDefaultPrecision) {}

    static FixedReal from_mantissa(BigInt mantissa, std::int64_t precision_bits) {
        check_precision(precision_bits);
        FixedReal x;
        x.mant_ = std::move(mantissa);
        x.prec_ = precision_bits;
        return x;
    }

    static FixedReal from_integer(std::int64_t v, std::int64_t precision_bits) {
        check_precision(precision_bits);
        return from_mantissa(BigInt(v) << precision_bits, precision_bits);
    }

    /// Nearest representable value; error <= 0.5 ulp (round half even).
    static FixedReal from_rational(const BigRational& q, std::int64_t precision_bits) {
        check_precision(precision_bits);
        return from_mantissa(div_round_half_even(q.numerator() << precision_bits, q.denominator()),
                             precision_bits);
    }

    const BigInt& mantissa() const { return mant_; }
    std::int64_t precision_bits() const { return prec_; }

    /// Exact value as a rational (mantissa / 2^P).
    BigRational to_rational() const { return BigRational(mant_, BigInt(1) << prec_); }

    bool is_zero() const { return mant_ == 0; }
    bool is_negative() const { return mant_ < 0; }
    bool is_positive() const { return mant_ > 0; }
    int sign() const { return mant_ == 0 ? 0 : (mant_ < 0 ? -1 : 1); }

    /// One ulp (2^-P) at this value's precision.
    FixedReal ulp() const { return from_mantissa(1, prec_); }

    /// Re-scale: extension is exact, reduction rounds half-even (<= 0.5 ulp).
    FixedReal with_precision(std::int64_t precision_bits) const {
        check_precision(precision_bits);
        if (precision_bits == prec_) return *this;
        return from_mantissa(shift_round_half_even(mant_, prec_ - precision_bits), precision_bits);
    }

    FixedReal operator-() const { return from_mantissa(-mant_, prec_); }
    FixedReal abs() const { return mant_ < 0 ? -*this : *this; }

    friend FixedReal operator+(const FixedReal& a, const FixedReal& b) {
        auto [ma, mb, p] = aligned(a, b);
        return from_mantissa(ma + mb, p);
    }
    friend FixedReal operator-(const FixedReal& a, const FixedReal& b) {
        auto [ma, mb, p] = aligned(a, b);
        return from_mantissa(ma - mb, p);
    }
    friend FixedReal operator*(const FixedReal& a, const FixedReal& b) {
        // product mantissa carries scale 2^-(pa+pb); one rounding to max(pa,pb)
        std::int64_t p = a.prec_ > b.prec_ ? a.prec_ : b.prec_;
        return from_mantissa(shift_round_half_even(a.mant_ * b.mant_, a.prec_ + b.prec_ - p), p);
    }
    friend FixedReal operator/(const FixedReal& a, const FixedReal& b) {
        if (b.mant_ == 0) throw std::domain_error("FixedReal: division by zero");
        std::int64_t p = a.prec_ > b.prec_ ? a.prec_ : b.prec_;
        // a/b = ma * 2^(p - pa + pb) / mb at scale 2^-p; the shift is >= min precision
        return from_mantissa(div_round_half_even(a.mant_ << (p - a.prec_ + b.prec_), b.mant_), p);
    }

    FixedReal& operator+=(const FixedReal& o) { return *this = *this + o; }
    FixedReal& operator-=(const FixedReal& o) { return *this = *this - o; }
    FixedReal& operator*=(const FixedReal& o) { return *this = *this * o; }
    FixedReal& operator/=(const FixedReal& o) { return *this = *this / o; }

    friend bool operator==(const FixedReal& a, const FixedReal& b) { return cmp(a, b) == 0; }
    friend bool operator!=(const FixedReal& a, const FixedReal& b) { return cmp(a, b) != 0; }
    friend bool operator<(const FixedReal& a, const FixedReal& b) { return cmp(a, b) < 0; }
    friend bool operator>(const FixedReal& a, const FixedReal& b) { return cmp(a, b) > 0; }
    friend bool operator<=(const FixedReal& a, const FixedReal& b) { return cmp(a, b) <= 0; }
    friend bool operator>=(const FixedReal& a, const FixedReal& b) { return cmp(a, b) >= 0; }

    /// Scientific decimal, `significant` digits, round half even: "d.dd...e±XX".
    std::string to_sci_string(int significant) const;

    /// Fixed-point decimal with `frac_digits` digits after the point.
    std::string to_fixed_string(int frac_digits) const;

    /// Parses plain or scientific decimals ("0.25", "-1.5e-3", "7e2") exactly
    /// through a rational, then rounds once (<= 0.5 ulp).
    static FixedReal parse_decimal(std::string_view s, std::int64_t precision_bits);

    friend std::ostream& operator<<(std::ostream& os, const FixedReal& x) {
        return os << x.to_sci_string(20);
    }

    // Round-half-even shift right by s (exact left shift for s <= 0).
    static BigInt shift_round_half_even(const BigInt& v, std::int64_t s) {
        if (s <= 0) return v << (-s);
        bool neg = v < 0;
        BigInt a = neg ? BigInt(-v) : v;
        BigInt q = a >> s;
        BigInt rem = a - (q << s);
        if (rem != 0) {
            BigInt half = BigInt(1) << (s - 1);
            if (rem > half || (rem == half && boost::multiprecision::bit_test(q, 0))) ++q;
        }
        return neg ? BigInt(-q) : q;
    }

    // Round-half-even quotient of a/b, b != 0.
    static BigInt div_round_half_even(const BigInt& a, const BigInt& b) {
        bool neg = (a < 0) != (b < 0);
        BigInt aa = a < 0 ? BigInt(-a) : a;
        BigInt bb = b < 0 ? BigInt(-b) : b;
        BigInt q = aa / bb;
        BigInt rem = aa - q * bb;
        if (rem != 0) {
            BigInt twice = rem << 1;
            if (twice > bb || (twice == bb && boost::multiprecision::bit_test(q, 0))) ++q;
        }
        return neg ? BigInt(-q) : q;
    }

private:
    static void check_precision(std::int64_t p) {
        if (p < kMinPrecision) throw std::invalid_argument("FixedReal: precision below 64 bits");
    }

    struct Aligned {
        BigInt a;
        BigInt b;
        std::int64_t p;
    };
    static Aligned aligned(const FixedReal& x, const FixedReal& y) {
        std::int64_t p = x.prec_ > y.prec_ ? x.prec_ : y.prec_;
        return {x.mant_ << (p - x.prec_), y.mant_ << (p - y.prec_), p};
    }
    static int cmp(const FixedReal& x, const FixedReal& y) {
        auto [a, b, p] = aligned(x, y);
        (void)p;
        return a < b ? -1 : (a == b ? 0 : 1);
    }

    BigInt mant_;
    std::int64_t prec_;
};

namespace detail {

// Smallest e with value < 10^(e+1), i.e. e = floor(log10 |value|), value != 0.
// Bit-length estimate narrowed by exact comparison against powers of ten.
inline std::int64_t decimal_exponent(const BigInt& mant, std::int64_t prec) {
    BigInt a = mant < 0 ? BigInt(-mant) : mant;
    std::int64_t bits = static_cast<std::int64_t>(boost::multiprecision::msb(a)) + 1 - prec;
    auto ge_pow10 = [&](std::int64_t e) {
        // |value| >= 10^e  <=>  a >= 10^e * 2^prec (e >= 0), a * 10^-e >= 2^prec (e < 0)
        if (e >= 0) return a >= boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(e)) << prec;
        return a * boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(-e)) >= BigInt(1) << prec;
    };
    auto e = static_cast<std::int64_t>(static_cast<double>(bits) * 0.30102999566398119);
    while (ge_pow10(e + 1)) ++e;
    while (!ge_pow10(e)) --e;
    return e;
}

}  // namespace detail

inline std::string FixedReal::to_sci_string(int significant) const {
    if (significant < 1) throw std::invalid_argument("to_sci_string: need >= 1 digit");
    if (mant_ == 0) return "0";
    std::int64_t e10 = detail::decimal_exponent(mant_, prec_);
    // digits = round(|value| * 10^(significant-1-e10)), round half even
    std::int64_t k = significant - 1 - e10;
    BigInt a = mant_ < 0 ? BigInt(-mant_) : mant_;
    BigInt num = a, den = BigInt(1) << prec_;
    if (k >= 0)
        num *= boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(k));
    else
        den *= boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(-k));
    BigInt digits = div_round_half_even(num, den);
    std::string ds = digits.str();
    if (static_cast<int>(ds.size()) > significant) {  // rounded up to the next decade
        ds.pop_back();
        ++e10;
    }
    std::string out;
    if (mant_ < 0) out += '-';
    out += ds[0];
    if (significant > 1) {
        out += '.';
        out += ds.substr(1);
    }
    out += 'e';
    out += e10 < 0 ? '-' : '+';
    std::string es = std::to_string(e10 < 0 ? -e10 : e10);
    if (es.size() < 2) es.insert(es.begin(), '0');
    out += es;
    return out;
}

inline std::string FixedReal::to_fixed_string(int frac_digits) const {
    if (frac_digits < 0) throw std::invalid_argument("to_fixed_string: negative digit count");
    BigInt a = mant_ < 0 ? BigInt(-mant_) : mant_;
    BigInt scaled = div_round_half_even(a * boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(frac_digits)),
                                        BigInt(1) << prec_);
    std::string ds = scaled.str();
    if (static_cast<int>(ds.size()) <= frac_digits) ds.insert(0, frac_digits + 1 - ds.size(), '0');
    std::string out;
    if (mant_ < 0 && scaled != 0) out += '-';
    out += ds.substr(0, ds.size() - frac_digits);
    if (frac_digits > 0) {
        out += '.';
        out += ds.substr(ds.size() - frac_digits);
    }
    return out;
}

inline FixedReal FixedReal::parse_decimal(std::string_view s, std::int64_t precision_bits) {
    auto bad = [&] { throw std::invalid_argument("FixedReal: cannot parse '" + std::string(s) + "'"); };
    if (s.empty()) bad();
    std::size_t i = 0;
    bool neg = false;
    if (s[i] == '+' || s[i] == '-') {
        neg = s[i] == '-';
        ++i;
    }
    BigInt digits = 0;
    std::int64_t frac = 0;
    bool any = false, dot = false;
    for (; i < s.size() && (s[i] == '.' || (s[i] >= '0' && s[i] <= '9')); ++i) {
        if (s[i] == '.') {
            if (dot) bad();
            dot = true;
        } else {
            digits = digits * 10 + (s[i] - '0');
            if (dot) ++frac;
            any = true;
        }
    }
    if (!any) bad();
    std::int64_t exp10 = 0;
    if (i < s.size()) {
        if (s[i] != 'e' && s[i] != 'E') bad();
        ++i;
        bool eneg = false;
        if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
            eneg = s[i] == '-';
            ++i;
        }
        if (i == s.size()) bad();
        for (; i < s.size(); ++i) {
            if (s[i] < '0' || s[i] > '9') bad();
            exp10 = exp10 * 10 + (s[i] - '0');
        }
        if (eneg) exp10 = -exp10;
    }
    if (neg) digits = -digits;
    std::int64_t e = exp10 - frac;
    BigRational q = e >= 0
        ? BigRational(digits * boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(e)))
        : BigRational(digits, boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(-e)));
    return from_rational(q, precision_bits);
}

namespace detail {

// atanh power series sum_{k>=0} t^(2k+1)/(2k+1), |t| <= 1/3. Terms shrink by
// at least 3 bits per step, so the loop is bounded by P/3 iterations; each
// iteration contributes <= 1 ulp of rounding (one mul + one div).
inline FixedReal atanh_series(const FixedReal& t) {
    FixedReal sum = t;
    FixedReal power = t;
    FixedReal tsq = t * t;
    for (std::int64_t k = 3; !power.is_zero(); k += 2) {
        power *= tsq;
        if (power.is_zero()) break;
        sum += power / FixedReal::from_integer(k, t.precision_bits());
    }
    return sum;
}

inline FixedReal ln2_constant(std::int64_t precision_bits);

}  // namespace detail

/// Natural logarithm, error <= 4 ulp at the argument's precision (in practice
/// ~1 ulp: the computation runs with 64 guard bits and rounds once).
///
/// Method: write x = m * 2^e with m in [1,2), then
/// ln x = 2*atanh((m-1)/(m+1)) + e*ln 2, with t = (m-1)/(m+1) in [0, 1/3).
/// Error account at working precision Pw = P + 64: m rounding <= 0.5 ulp_w
/// amplified by d(ln m)/dm <= 1; series rounding <= Pw/3 ulp_w; truncation
/// below 1 ulp_w; e*ln2 <= (|e|+1) ulp_w; all << 2^-(P+8) for |e| < 2^48,
/// then one final rounding <= 0.5 ulp at P.
inline FixedReal hp_ln(const FixedReal& x) {
    if (!x.is_positive()) throw std::domain_error("hp_ln: argument must be positive");
    std::int64_t P = x.precision_bits();
    std::int64_t Pw = P + 64;
    std::int64_t e = static_cast<std::int64_t>(boost::multiprecision::msb(x.mantissa())) - P;
    // mantissa of m = x * 2^-e at scale 2^-Pw
    BigInt mm = FixedReal::shift_round_half_even(x.mantissa(), e - (Pw - P));
    FixedReal m = FixedReal::from_mantissa(std::move(mm), Pw);
    FixedReal one = FixedReal::from_integer(1, Pw);
    FixedReal s = detail::atanh_series((m - one) / (m + one));
    FixedReal r = s + s;
    if (e != 0) r += FixedReal::from_integer(e, Pw) * detail::ln2_constant(Pw);
    return r.with_precision(P);
}

/// x^k by exact mantissa exponentiation plus one final rounding, so the error
/// is <= 0.5 ulp for k >= 0 and <= 1 ulp for k < 0 (well inside the 2|k| ulp
/// budget). k = 0 gives exactly 1; x = 0 with k < 0 is a domain error.
inline FixedReal hp_pow_int(const FixedReal& x, std::int64_t k) {
    std::int64_t P = x.precision_bits();
    if (k == 0) return FixedReal::from_integer(1, P);
    if (x.is_zero() && k < 0) throw std::domain_error("hp_pow_int: zero base, negative exponent");
    // x = mant * 2^-P exactly, so x^|k| = mant^|k| * 2^(-P*|k|) exactly.
    std::int64_t a = k < 0 ? -k : k;
    BigRational exact = x.to_rational().pow(a);
    if (k < 0) exact = exact.reciprocal();
    return FixedReal::from_rational(exact, P);
}

namespace detail {

// ln 2 = 2*atanh(1/3), memoized per precision. Cached value error <= 2 ulp.
inline FixedReal ln2_constant(std::int64_t precision_bits) {
    static std::mutex mu;
    static std::map<std::int64_t, BigInt> cache;
    {
        std::scoped_lock lock(mu);
        auto it = cache.find(precision_bits);
        if (it != cache.end()) return FixedReal::from_mantissa(it->second, precision_bits);
    }
    FixedReal t = FixedReal::from_rational(BigRational(1, 3), precision_bits + 32);
    FixedReal s = atanh_series(t);
    FixedReal r = (s + s).with_precision(precision_bits);
    std::scoped_lock lock(mu);
    cache.emplace(precision_bits, r.mantissa());
    return r;
}

}  // namespace detail

}  // namespace harmonic

#endif  // HARMONIC_FIXED_REAL_HPP

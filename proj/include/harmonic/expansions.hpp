#ifndef HARMONIC_EXPANSIONS_HPP
#define HARMONIC_EXPANSIONS_HPP

#include "harmonic/coefficients.hpp"
#include "harmonic/fixed_real.hpp"
#include "harmonic/interval.hpp"
#include "harmonic/rational.hpp"

#include <cmath>
#include <cstdint>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace harmonic {

/// Exact H_n beyond this refuses: the reduced numerator/denominator carry
/// roughly 1.4 n bits, so unbounded n is a memory hazard, not a math one.
inline constexpr std::int64_t kHarmonicGuard = 1'000'000;

enum class Family { Euler, DeTempleWang, Ramanujan };

inline std::string_view family_name(Family f) {
    switch (f) {
        case Family::Euler: return "euler";
        case Family::DeTempleWang: return "dtw";
        case Family::Ramanujan: return "ramanujan";
    }
    throw std::logic_error("family_name: bad enum");
}

inline Family family_from_name(std::string_view s) {
    if (s == "euler") return Family::Euler;
    if (s == "dtw") return Family::DeTempleWang;
    if (s == "ramanujan") return Family::Ramanujan;
    throw std::invalid_argument("unknown family '" + std::string(s) + "' (euler|dtw|ramanujan)");
}

/// Raised when a requested computation cannot be trusted at the given
/// precision; required_bits is the smallest precision worth retrying with.
class PrecisionError : public std::runtime_error {
public:
    PrecisionError(const std::string& what, std::int64_t required_bits)
        : std::runtime_error(what + " (need >= " + std::to_string(required_bits) + " bits)"),
          required_bits_(required_bits) {}
    std::int64_t required_bits() const { return required_bits_; }

private:
    std::int64_t required_bits_;
};

/// n together with its triangular index m = n(n+1)/2. The defining identity
/// (n + 1/2)^2 = 2m + 1/4 is what lets the half-integer series be rewritten
/// in powers of 1/m.
struct HarmonicIndex {
    explicit HarmonicIndex(std::int64_t n_) : n(n_), m(BigInt(n_) * (n_ + 1) / 2) {
        if (n_ < 1) throw std::invalid_argument("HarmonicIndex: n must be >= 1");
    }
    std::int64_t n;
    BigInt m;
};

namespace detail {

struct RawFraction {
    BigInt num;
    BigInt den;
};

// Unreduced binary splitting of sum 1/k over [a, b]; one gcd at the very end
// (in the BigRational constructor) instead of one per term.
inline RawFraction harmonic_range(std::int64_t a, std::int64_t b) {
    if (b - a < 8) {
        RawFraction f{0, 1};
        for (std::int64_t k = a; k <= b; ++k) {
            f.num = f.num * k + f.den;
            f.den *= k;
        }
        return f;
    }
    std::int64_t mid = a + (b - a) / 2;
    RawFraction left = harmonic_range(a, mid);
    RawFraction right = harmonic_range(mid + 1, b);
    return {left.num * right.den + right.num * left.den, left.den * right.den};
}

}  // namespace detail

/// H_n = sum_{k=1..n} 1/k, exact and in lowest terms.
inline BigRational exact_harmonic(std::int64_t n) {
    if (n < 1) throw std::invalid_argument("exact_harmonic: n must be >= 1");
    if (n > kHarmonicGuard)
        throw std::domain_error("exact_harmonic: n exceeds the 10^6 size guard");
    auto f = detail::harmonic_range(1, n);
    return BigRational(std::move(f.num), std::move(f.den));
}

/// A truncated expansion value plus the magnitude of the first omitted term.
///
/// value is assembled as ln-term + gamma + per-term conversions of the exact
/// rational coefficients (ascending order, additions exact in fixed point),
/// so the computation error is <= (r + 8) ulp at precision P for every r >= 0
/// (ln <= 4 ulp, each conversion <= 0.5 ulp), on top of whatever error the
/// supplied gamma carries.
struct ApproxResult {
    Family family;
    std::int64_t n;
    std::int64_t r;
    FixedReal value;
    FixedReal next_term_bound;
};

/// (1/2) ln(2m) + gamma + sum_{p=1..r} R_p / m^p.
/// Pre: gamma accurate to <= 2^(-P+4).
inline ApproxResult eval_ramanujan(const HarmonicIndex& idx, std::int64_t r, const FixedReal& gamma,
                                   std::int64_t precision_bits = FixedReal::kDefaultPrecision) {
    if (r < 0) throw std::invalid_argument("eval_ramanujan: r must be >= 0");
    const std::int64_t P = precision_bits;
    BigRational m(idx.m);
    FixedReal value = hp_ln(FixedReal::from_rational(m + m, P)) *
                      FixedReal::from_rational(BigRational(1, 2), P);
    value += gamma.with_precision(P);
    for (std::int64_t p = 1; p <= r; ++p)
        value += FixedReal::from_rational(r_closed(p) / m.pow(p), P);
    FixedReal bound = FixedReal::from_rational(r_closed(r + 1).abs() / m.pow(r + 1), P);
    return {Family::Ramanujan, idx.n, r, std::move(value), std::move(bound)};
}

/// ln(n + 1/2) + gamma + sum_{p=1..r} D_p / (n+1/2)^(2p).
inline ApproxResult eval_dtw(const HarmonicIndex& idx, std::int64_t r, const FixedReal& gamma,
                             std::int64_t precision_bits = FixedReal::kDefaultPrecision) {
    if (r < 0) throw std::invalid_argument("eval_dtw: r must be >= 0");
    const std::int64_t P = precision_bits;
    BigRational half_shift(2 * idx.n + 1, 2);  // n + 1/2
    FixedReal value = hp_ln(FixedReal::from_rational(half_shift, P));
    value += gamma.with_precision(P);
    for (std::int64_t p = 1; p <= r; ++p)
        value += FixedReal::from_rational(d_coefficient(p) / half_shift.pow(2 * p), P);
    FixedReal bound =
        FixedReal::from_rational(d_coefficient(r + 1).abs() / half_shift.pow(2 * r + 2), P);
    return {Family::DeTempleWang, idx.n, r, std::move(value), std::move(bound)};
}

/// ln n + gamma + 1/(2n) - sum_{k=1..K} B_{2k} / (2k n^(2k)).
inline ApproxResult eval_euler(std::int64_t n, std::int64_t terms, const FixedReal& gamma,
                               std::int64_t precision_bits = FixedReal::kDefaultPrecision) {
    if (n < 1) throw std::invalid_argument("eval_euler: n must be >= 1");
    if (terms < 0) throw std::invalid_argument("eval_euler: K must be >= 0");
    const std::int64_t P = precision_bits;
    BigRational nn(n);
    FixedReal value = hp_ln(FixedReal::from_rational(nn, P));
    value += gamma.with_precision(P);
    value += FixedReal::from_rational(BigRational(1, 2 * n), P);
    for (std::int64_t k = 1; k <= terms; ++k)
        value += FixedReal::from_rational(euler_coefficient(k) / nn.pow(2 * k), P);
    FixedReal bound =
        FixedReal::from_rational(euler_coefficient(terms + 1).abs() / nn.pow(2 * terms + 2), P);
    return {Family::Euler, n, terms, std::move(value), std::move(bound)};
}

/// A rigorous two-sided bracket of Euler's constant.
struct GammaEnclosure {
    Interval interval;
    std::int64_t n_used;
    std::int64_t r_used;
};

/// Brackets gamma between the r-term and (r+1)-term rearrangements of the
/// half-integer expansion: a_q = H_n - ln(n+1/2) - sum_{p<=q} D_p/(n+1/2)^(2p)
/// equals gamma + theta_q * (next term) with theta_q in (0,1), so gamma lies
/// strictly between a_r and a_{r+1}. Endpoints are widened outward by the
/// full rounding budget, making the interval an enclosure, not an estimate.
///
/// Refuses (PrecisionError) when rounding slack at precision P would dominate
/// the theoretical width |D_{r+1}|/(n+1/2)^(2r+2).
inline GammaEnclosure gamma_enclosure(std::int64_t n, std::int64_t r,
                                      std::int64_t precision_bits = FixedReal::kDefaultPrecision) {
    if (r < 0) throw std::invalid_argument("gamma_enclosure: r must be >= 0");
    const std::int64_t P = precision_bits;
    BigRational half_shift(2 * n + 1, 2);
    BigRational theoretical_width = d_coefficient(r + 1).abs() / half_shift.pow(2 * r + 2);
    BigRational slack(32, BigInt(1) << P);
    if (slack >= theoretical_width) {
        std::int64_t num_bits = static_cast<std::int64_t>(boost::multiprecision::msb(theoretical_width.numerator()));
        std::int64_t den_bits = static_cast<std::int64_t>(boost::multiprecision::msb(theoretical_width.denominator()));
        std::int64_t hint = std::max<std::int64_t>(FixedReal::kMinPrecision, den_bits - num_bits + 16);
        throw PrecisionError("gamma_enclosure: rounding would dominate the interval width", hint);
    }
    BigRational h = exact_harmonic(n);
    BigRational partial;  // sum_{p<=r} D_p/(n+1/2)^(2p), exact
    for (std::int64_t p = 1; p <= r; ++p) partial += d_coefficient(p) / half_shift.pow(2 * p);
    BigRational partial_next = partial + d_coefficient(r + 1) / half_shift.pow(2 * r + 2);
    FixedReal log_term = hp_ln(FixedReal::from_rational(half_shift, P));
    FixedReal a = FixedReal::from_rational(h - partial, P) - log_term;
    FixedReal b = FixedReal::from_rational(h - partial_next, P) - log_term;
    // each endpoint: one conversion (0.5 ulp) + shared ln (4 ulp); 8 ulp covers it
    Interval bracket = (a <= b ? Interval(a, b) : Interval(b, a)).widened(8);
    return {std::move(bracket), n, r};
}

namespace detail {

// log2 |D_q| overestimate from |B_{2q}| ~ 2 (2q)! / (2 pi)^(2q).
inline std::int64_t log2_d_magnitude(std::int64_t q) {
    double two_q = 2.0 * static_cast<double>(q);
    double l = 1.0 + std::lgamma(two_q + 1.0) / std::numbers::ln2 -
               two_q * std::log2(2.0 * std::numbers::pi) - std::log2(two_q);
    return static_cast<std::int64_t>(std::ceil(l)) + 2;
}

// Picks (n, r) so the enclosure width estimate clears 2^-(P+10). Larger q
// costs quadratically (Bernoulli recurrence), larger n roughly linearly
// (exact H_n), hence modest q first, n as the workhorse.
inline std::pair<std::int64_t, std::int64_t> gamma_parameters(std::int64_t P) {
    for (std::int64_t q = std::max<std::int64_t>(12, P / 10);; q += q / 2 + 8) {
        if (q > 768)
            throw PrecisionError("euler_gamma: precision beyond the supported parameter range", P);
        double need_log2_n =
            static_cast<double>(P + 10 + log2_d_magnitude(q)) / (2.0 * static_cast<double>(q));
        // past ~1.3e5 the exact H_n gcd dominates everything; raise q instead
        if (need_log2_n >= 17.0) continue;
        auto n = static_cast<std::int64_t>(std::ceil(std::exp2(need_log2_n))) + 1;
        return {std::max<std::int64_t>(n, 32), q - 1};
    }
}

}  // namespace detail

/// Euler's constant to <= 2^-(P+3) absolute error, derived from its own
/// enclosure (never a hard-coded literal) and memoized per precision.
inline FixedReal euler_gamma(std::int64_t precision_bits = FixedReal::kDefaultPrecision) {
    static std::mutex mu;
    static std::map<std::int64_t, BigInt> cache;
    const std::int64_t P = precision_bits;
    {
        std::scoped_lock lock(mu);
        auto it = cache.find(P);
        if (it != cache.end()) return FixedReal::from_mantissa(it->second, P);
    }
    // Work 32 guard bits above P, but aim the theoretical width at 2^-(P+10):
    // it must clear the target 2^-(P+2) yet stay above the rounding slack at
    // Pw (~2^-(P+27)), which the enclosure refuses to sink under.
    const std::int64_t Pw = P + 32;
    auto [n, r] = detail::gamma_parameters(P + 10);
    BigRational target(1, BigInt(1) << (P + 2));
    for (int attempt = 0; attempt < 4; ++attempt) {
        GammaEnclosure g = gamma_enclosure(n, r, Pw);
        if (g.interval.width().to_rational() <= target) {
            FixedReal mid = g.interval.midpoint().with_precision(P);
            std::scoped_lock lock(mu);
            cache.emplace(P, mid.mantissa());
            return mid;
        }
        r += 8;  // estimate fell short; tighten and retry
        n = std::min<std::int64_t>(2 * n, kHarmonicGuard);
    }
    throw std::logic_error("euler_gamma: enclosure failed to reach the target width");
}

}  // namespace harmonic

#endif  // HARMONIC_EXPANSIONS_HPP

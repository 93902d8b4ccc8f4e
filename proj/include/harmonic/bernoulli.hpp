#ifndef HARMONIC_BERNOULLI_HPP
#define HARMONIC_BERNOULLI_HPP

#include "harmonic/rational.hpp"

#include <cstddef>
#include <mutex>
#include <vector>

namespace harmonic {

/// Memoized Bernoulli numbers B_k and half-argument values B_{2k}(1/2).
///
/// B_k comes from the defining recurrence sum_{j=0..m} C(m+1,j) B_j = 0 with
/// B_0 = 1, evaluated in exact rationals and always filled in index order
/// (each B_m needs all earlier ones). B_{2k}(1/2) uses the closed identity
/// (2^(1-2k) - 1) B_{2k}.
///
/// This cache is the artifact's only mutable state: queries lock a mutex,
/// growth is idempotent, values never change once published.
class BernoulliCache {
public:
    BigRational number(std::size_t k) {
        std::scoped_lock lock(mu_);
        grow(k);
        return numbers_[k];
    }

    BigRational half_value(std::size_t k) {
        std::scoped_lock lock(mu_);
        if (k < half_.size()) return half_[k];
        grow(2 * k);
        while (half_.size() <= k) {
            std::size_t j = half_.size();
            // B_{2j}(1/2) = (2^(1-2j) - 1) * B_{2j}
            BigRational factor = j == 0 ? BigRational(1)
                                        : BigRational(1, BigInt(1) << (2 * j - 1)) - BigRational(1);
            half_.push_back(factor * numbers_[2 * j]);
        }
        return half_[k];
    }

    std::size_t cached_count() {
        std::scoped_lock lock(mu_);
        return numbers_.size();
    }

    static BernoulliCache& global() {
        static BernoulliCache cache;
        return cache;
    }

private:
    void grow(std::size_t k) {
        if (numbers_.empty()) numbers_.emplace_back(1);  // B_0
        for (std::size_t m = numbers_.size(); m <= k; ++m) {
            // sum_{j<m} C(m+1, j) B_j, accumulated as num/den over a running
            // common denominator. Bernoulli denominators are products of
            // small primes, so den stays near the primorial of m and the
            // whole step needs a single normalization at the end.
            BigInt num = 0, den = 1;
            BigInt binom = 1;  // C(m+1, j), updated incrementally
            for (std::size_t j = 0; j < m; ++j) {
                const BigRational& b = numbers_[j];
                if (!b.is_zero()) {
                    BigInt g = boost::multiprecision::gcd(den, b.denominator());
                    BigInt scale = b.denominator() / g;
                    num = num * scale + binom * b.numerator() * (den / g);
                    den *= scale;
                }
                binom = binom * static_cast<long long>(m + 1 - j) / static_cast<long long>(j + 1);
            }
            numbers_.push_back(BigRational(-num, den * static_cast<long long>(m + 1)));
        }
    }

    std::mutex mu_;
    std::vector<BigRational> numbers_;
    std::vector<BigRational> half_;
};

/// B_k, exact.
inline BigRational bernoulli_number(std::size_t k) { return BernoulliCache::global().number(k); }

/// B_{2k}(1/2), exact.
inline BigRational bernoulli_half(std::size_t k) { return BernoulliCache::global().half_value(k); }

namespace detail {

// Full Bernoulli polynomial B_n(x) = sum C(n,k) B_k x^(n-k). Kept as the
// independent cross-check route for the half-argument identity; not part of
// the public surface.
inline BigRational bernoulli_polynomial(std::size_t n, const BigRational& x) {
    BigRational sum;
    for (std::size_t k = 0; k <= n; ++k) {
        sum += BigRational(binomial(static_cast<std::int64_t>(n), static_cast<std::int64_t>(k))) *
               bernoulli_number(k) * x.pow(static_cast<std::int64_t>(n - k));
    }
    return sum;
}

}  // namespace detail

}  // namespace harmonic

#endif  // HARMONIC_BERNOULLI_HPP

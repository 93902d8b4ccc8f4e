#ifndef HARMONIC_INTERVAL_HPP
#define HARMONIC_INTERVAL_HPP

#include "harmonic/fixed_real.hpp"
#include "harmonic/rational.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

namespace harmonic {

/// Closed interval [lo, hi] of FixedReal endpoints, lo <= hi.
///
/// Arithmetic is outward-rounded: endpoint additions are exact in fixed
/// point, multiplications round at most 0.5 ulp, and every inexact operation
/// widens the result by one ulp on each side. A true value contained in the
/// inputs is therefore contained in the output.
class Interval {
public:
    Interval(FixedReal lo, FixedReal hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
        if (hi_ < lo_) throw std::invalid_argument("Interval: lo > hi");
    }

    static Interval point(const FixedReal& x) { return Interval(x, x); }

    const FixedReal& lo() const { return lo_; }
    const FixedReal& hi() const { return hi_; }

    FixedReal width() const { return hi_ - lo_; }
    FixedReal midpoint() const {
        return (lo_ + hi_) * FixedReal::from_rational(BigRational(1, 2), lo_.precision_bits());
    }

    bool contains(const FixedReal& x) const { return lo_ <= x && x <= hi_; }
    bool contains(const BigRational& q) const {
        // endpoints are dyadic rationals, so this comparison is exact
        return lo_.to_rational() <= q && q <= hi_.to_rational();
    }
    bool contains(const Interval& other) const { return lo_ <= other.lo_ && other.hi_ <= hi_; }

    /// Pushes both endpoints outward by k ulp.
    Interval widened(std::int64_t k) const {
        FixedReal lo_slack = FixedReal::from_mantissa(k, lo_.precision_bits());
        FixedReal hi_slack = FixedReal::from_mantissa(k, hi_.precision_bits());
        return Interval(lo_ - lo_slack, hi_ + hi_slack);
    }

    friend Interval operator+(const Interval& a, const Interval& b) {
        return Interval(a.lo_ + b.lo_, a.hi_ + b.hi_);  // exact
    }
    friend Interval operator-(const Interval& a, const Interval& b) {
        return Interval(a.lo_ - b.hi_, a.hi_ - b.lo_);  // exact
    }
    friend Interval operator*(const Interval& a, const Interval& b) {
        FixedReal p1 = a.lo_ * b.lo_;
        FixedReal p2 = a.lo_ * b.hi_;
        FixedReal p3 = a.hi_ * b.lo_;
        FixedReal p4 = a.hi_ * b.hi_;
        const FixedReal& lo = std::min(std::min(p1, p2), std::min(p3, p4));
        const FixedReal& hi = std::max(std::max(p1, p2), std::max(p3, p4));
        return Interval(lo, hi).widened(1);  // absorbs the 0.5 ulp product roundings
    }
    Interval operator-() const { return Interval(-hi_, -lo_); }

private:
    FixedReal lo_;
    FixedReal hi_;
};

}  // namespace harmonic

#endif  // HARMONIC_INTERVAL_HPP

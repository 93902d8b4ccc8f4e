#ifndef HARMONIC_VERIFICATION_HPP
#define HARMONIC_VERIFICATION_HPP

#include "harmonic/coefficients.hpp"
#include "harmonic/expansions.hpp"
#include "harmonic/fixed_real.hpp"
#include "harmonic/rational.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <vector>

namespace harmonic {

/// Measured error fraction theta for one (family, n, r) cell:
/// theta = (H_n - partial_sum_r) / (first omitted term, with sign).
///
/// Classification protocol: the cell is decided only when the margin (the
/// distance of theta from the nearer of {0, 1}) exceeds 2^-32 AND the
/// propagated rounding budget is below 2^-40 of theta; otherwise the whole
/// computation re-runs at 2P and 4P. A cell still undecided after that is
/// reported indeterminate, never silently classified.
struct ThetaReport {
    Family family;
    std::int64_t n;
    std::int64_t r;
    FixedReal theta;
    bool in_open_unit_interval;  // meaningful only when !indeterminate
    bool indeterminate;
    FixedReal margin;
    std::int64_t precision_used;
};

namespace detail {

// Signed first omitted term of the family's expansion, exact.
inline BigRational next_term_exact(Family family, const HarmonicIndex& idx, std::int64_t r) {
    switch (family) {
        case Family::Ramanujan:
            return r_closed(r + 1) / BigRational(idx.m).pow(r + 1);
        case Family::DeTempleWang:
            return d_coefficient(r + 1) / BigRational(2 * idx.n + 1, 2).pow(2 * r + 2);
        case Family::Euler:
            return euler_coefficient(r + 1) / BigRational(idx.n).pow(2 * r + 2);
    }
    throw std::logic_error("next_term_exact: bad enum");
}

inline FixedReal eval_family(Family family, const HarmonicIndex& idx, std::int64_t r,
                             const FixedReal& gamma, std::int64_t P) {
    switch (family) {
        case Family::Ramanujan: return eval_ramanujan(idx, r, gamma, P).value;
        case Family::DeTempleWang: return eval_dtw(idx, r, gamma, P).value;
        case Family::Euler: return eval_euler(idx.n, r, gamma, P).value;
    }
    throw std::logic_error("eval_family: bad enum");
}

}  // namespace detail

inline ThetaReport theta(Family family, std::int64_t n, std::int64_t r,
                         std::int64_t precision_bits = FixedReal::kDefaultPrecision) {
    if (r < 0) throw std::invalid_argument("theta: r must be >= 0");
    HarmonicIndex idx(n);
    const BigRational h = exact_harmonic(n);
    const BigRational term = detail::next_term_exact(family, idx, r);
    const BigRational term_abs = term.abs();
    const BigRational decision_threshold(1, BigInt(1) << 32);

    ThetaReport report{family, n, r, FixedReal(), false, true, FixedReal(), precision_bits};
    std::int64_t P = precision_bits;
    for (int attempt = 0; attempt < 3; ++attempt, P *= 2) {
        // theta absolute error <= budget ulps / |term|; all exact rationals,
        // so precision starvation is detected, not guessed.
        BigRational theta_error_bound =
            BigRational(r + 12, BigInt(1) << P) / term_abs;
        if (theta_error_bound >= BigRational(1, BigInt(1) << 40)) continue;
        FixedReal gamma = euler_gamma(P);
        FixedReal value = detail::eval_family(family, idx, r, gamma, P);
        FixedReal th = (FixedReal::from_rational(h, P) - value) / FixedReal::from_rational(term, P);
        BigRational th_q = th.to_rational();
        BigRational margin_q = std::min(th_q.abs(), (BigRational(1) - th_q).abs());
        report.theta = th;
        report.margin = FixedReal::from_rational(margin_q, P);
        report.precision_used = P;
        if (margin_q > decision_threshold) {
            report.indeterminate = false;
            report.in_open_unit_interval = th_q > BigRational(0) && th_q < BigRational(1);
            return report;
        }
    }
    return report;  // flagged indeterminate
}

namespace detail {

// epsilon_r = (1/2) ln(1 + 1/(8m)) - sum_{l=1..r} (-1)^(l-1) / (2 l 8^l m^l).
inline FixedReal epsilon_tail(const BigRational& m, std::int64_t r, std::int64_t P) {
    BigRational partial;
    for (std::int64_t l = 1; l <= r; ++l) {
        BigRational coeff(l % 2 == 1 ? 1 : -1, BigInt(2 * l) << (3 * l));
        partial += coeff / m.pow(l);
    }
    BigRational log_arg = BigRational(1) + BigRational(1) / (BigRational(8) * m);
    FixedReal half = FixedReal::from_rational(BigRational(1, 2), P);
    return hp_ln(FixedReal::from_rational(log_arg, P)) * half -
           FixedReal::from_rational(partial, P);
}

}  // namespace detail

/// The error of the 1/m series split into its three sources: the log-split
/// tail epsilon_r, the re-expansion tail E_r (computed as the exact
/// difference between the half-integer partial sum and its 1/m re-expansion),
/// and the residual of the half-integer series itself. Their sum reconciles
/// with the directly measured residual H_n - (Ramanujan partial sum).
struct ErrorDecomposition {
    std::int64_t n;
    std::int64_t r;
    FixedReal epsilon_r;
    FixedReal e_r;
    FixedReal dtw_tail;
    FixedReal total;
    FixedReal theta_implied;
};

inline ErrorDecomposition decompose_error(std::int64_t n, std::int64_t r,
                                          std::int64_t precision_bits = FixedReal::kDefaultPrecision) {
    if (r < 0) throw std::invalid_argument("decompose_error: r must be >= 0");
    const std::int64_t P = precision_bits;
    HarmonicIndex idx(n);
    BigRational m(idx.m);
    BigRational half_shift(2 * n + 1, 2);

    FixedReal epsilon = detail::epsilon_tail(m, r, P);

    BigRational dtw_partial, conv_partial;  // both exact
    for (std::int64_t p = 1; p <= r; ++p) {
        dtw_partial += d_coefficient(p) / half_shift.pow(2 * p);
        conv_partial += CoefficientTable::global().convolution_coefficient(p) / m.pow(p);
    }
    FixedReal e_r = FixedReal::from_rational(dtw_partial - conv_partial, P);

    FixedReal gamma = euler_gamma(P);
    FixedReal dtw_tail =
        FixedReal::from_rational(exact_harmonic(n), P) - eval_dtw(idx, r, gamma, P).value;

    FixedReal total = epsilon + e_r + dtw_tail;
    FixedReal theta_implied =
        total / FixedReal::from_rational(r_closed(r + 1) / m.pow(r + 1), P);
    return {n, r, std::move(epsilon), std::move(e_r), std::move(dtw_tail), std::move(total),
            std::move(theta_implied)};
}

/// alpha_r = epsilon_r / [(-1)^r / (2 (r+1) 8^(r+1) m^(r+1))]: the tail of the
/// alternating log series as a fraction of its first neglected term. Lies in
/// (0,1) by the alternating-series remainder theorem; anything else is an
/// implementation bug, which is exactly why it is measured.
inline FixedReal alternating_tail_fraction(std::int64_t n, std::int64_t r,
                                           std::int64_t precision_bits = FixedReal::kDefaultPrecision) {
    if (r < 0) throw std::invalid_argument("alternating_tail_fraction: r must be >= 0");
    const std::int64_t P = precision_bits;
    HarmonicIndex idx(n);
    BigRational m(idx.m);
    FixedReal epsilon = detail::epsilon_tail(m, r, P);
    BigRational first_neglected =
        BigRational(r % 2 == 0 ? 1 : -1, BigInt(2 * (r + 1)) << (3 * (r + 1))) / m.pow(r + 1);
    return epsilon / FixedReal::from_rational(first_neglected, P);
}

/// Inclusive integer range; hi < lo means empty.
struct IndexRange {
    std::int64_t lo;
    std::int64_t hi;
    bool empty() const { return hi < lo; }
    std::int64_t size() const { return empty() ? 0 : hi - lo + 1; }
};

/// Grid outcome. Built by a commutative merge of per-cell reports, so cell
/// evaluation order (or parallelism) cannot change the result; the lists are
/// kept sorted by (n, r).
struct SweepSummary {
    struct Cell {
        std::int64_t n;
        std::int64_t r;
        FixedReal theta;
    };

    IndexRange n_range{1, 0};
    IndexRange r_range{1, 0};
    std::vector<Cell> violations;
    std::vector<Cell> indeterminates;
    std::int64_t decided_cells = 0;
    std::optional<FixedReal> min_margin;
    std::optional<FixedReal> min_theta;
    std::optional<FixedReal> max_theta;

    void merge(const ThetaReport& report) {
        if (report.indeterminate) {
            insert_sorted(indeterminates, {report.n, report.r, report.theta});
            return;
        }
        ++decided_cells;
        if (!report.in_open_unit_interval)
            insert_sorted(violations, {report.n, report.r, report.theta});
        if (!min_margin || report.margin < *min_margin) min_margin = report.margin;
        if (!min_theta || report.theta < *min_theta) min_theta = report.theta;
        if (!max_theta || report.theta > *max_theta) max_theta = report.theta;
    }

private:
    static void insert_sorted(std::vector<Cell>& cells, Cell cell) {
        auto pos = std::lower_bound(cells.begin(), cells.end(), cell,
                                    [](const Cell& a, const Cell& b) {
                                        return a.n != b.n ? a.n < b.n : a.r < b.r;
                                    });
        cells.insert(pos, std::move(cell));
    }
};

/// Runs theta() over the full grid. Empty ranges yield an empty summary.
/// on_cell, when given, sees every report in (n asc, r asc) order.
inline SweepSummary sweep(Family family, IndexRange n_range, IndexRange r_range,
                          std::int64_t precision_bits = FixedReal::kDefaultPrecision,
                          const std::function<void(const ThetaReport&)>& on_cell = {}) {
    SweepSummary summary;
    summary.n_range = n_range;
    summary.r_range = r_range;
    if (n_range.empty() || r_range.empty()) return summary;
    for (std::int64_t n = n_range.lo; n <= n_range.hi; ++n) {
        for (std::int64_t r = r_range.lo; r <= r_range.hi; ++r) {
            ThetaReport report = theta(family, n, r, precision_bits);
            summary.merge(report);
            if (on_cell) on_cell(report);
        }
    }
    return summary;
}

inline const char* classification_name(const ThetaReport& report) {
    if (report.indeterminate) return "indeterminate";
    return report.in_open_unit_interval ? "pass" : "violation";
}

/// CSV row format shared by the CLI and the tests; reals at 30 significant
/// digits, ASCII, LF endings.
inline constexpr const char* kSweepCsvHeader = "family,n,r,theta,margin,classification";

inline void write_sweep_csv_row(std::ostream& os, const ThetaReport& report) {
    os << family_name(report.family) << ',' << report.n << ',' << report.r << ','
       << report.theta.to_sci_string(30) << ',' << report.margin.to_sci_string(30) << ','
       << classification_name(report) << '\n';
}

}  // namespace harmonic

#endif  // HARMONIC_VERIFICATION_HPP

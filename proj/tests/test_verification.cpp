#include "harmonic/verification.hpp"

#include "test_util.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>
#include <sstream>
#include <vector>

using harmonic::BigInt;
using harmonic::BigRational;
using harmonic::ErrorDecomposition;
using harmonic::Family;
using harmonic::FixedReal;
using harmonic::IndexRange;
using harmonic::SweepSummary;
using harmonic::ThetaReport;
using harmonic::alternating_tail_fraction;
using harmonic::decompose_error;
using harmonic::sweep;
using harmonic::theta;
using harmonic::test::ulps;

namespace {

constexpr std::int64_t kP = 277;

BigRational pow10_recip(int k) { return BigRational(1, boost::multiprecision::pow(BigInt(10), k)); }

BigRational frozen(const char* text) {
    return FixedReal::parse_decimal(text, kP).to_rational();
}

}  // namespace

TEST_CASE("theta hand values", "[verification]") {
    ThetaReport r11 = theta(Family::Ramanujan, 1, 1, kP);
    CHECK(!r11.indeterminate);
    CHECK(r11.in_open_unit_interval);
    CHECK((r11.theta.to_rational() - frozen("0.8547106217806618378153781")).abs() < pow10_recip(24));

    ThetaReport r10 = theta(Family::Ramanujan, 1, 0, kP);
    CHECK(r10.in_open_unit_interval);
    CHECK((r10.theta.to_rational() - frozen("0.9145289378219338162184622")).abs() < pow10_recip(24));

    ThetaReport d10 = theta(Family::DeTempleWang, 1, 0, kP);
    CHECK(d10.in_open_unit_interval);
    CHECK((d10.theta.to_rational() - frozen("0.9352382574763489004356389")).abs() < pow10_recip(24));

    // margin is the distance from the nearer endpoint of {0,1}
    CHECK((r11.margin.to_rational() - (BigRational(1) - r11.theta.to_rational())).abs() <=
          ulps(2, kP));
    CHECK(r11.precision_used == kP);
    CHECK_THROWS_AS(theta(Family::Ramanujan, 0, 1, kP), std::invalid_argument);
    CHECK_THROWS_AS(theta(Family::Ramanujan, 1, -1, kP), std::invalid_argument);
}

TEST_CASE("error decomposition at n = 1, r = 1", "[verification]") {
    ErrorDecomposition d = decompose_error(1, 1, kP);
    // epsilon_1 = (1/2) ln(9/8) - 1/16
    CHECK((d.epsilon_r.to_rational() - frozen("-0.003608482171808272730602945")).abs() <
          pow10_recip(25));
    // E_1 as a difference: D_1/(3/2)^2 - D_1/2 = 1/54 - 1/48 = -1/432
    CHECK((d.e_r.to_rational() - BigRational(-1, 432)).abs() <= ulps(1, kP));
    // dtw tail: H_1 - (ln(3/2) + gamma + 1/54)
    CHECK((d.dtw_tail.to_rational() - frozen("-0.0011992915282157611030437241")).abs() <
          pow10_recip(25));
    CHECK((d.total.to_rational() - frozen("-0.007122588514838848648461484")).abs() <
          pow10_recip(25));
}

TEST_CASE("decomposition reconciles with the direct residual", "[verification]") {
    FixedReal gamma = harmonic::euler_gamma(kP);
    for (std::int64_t n : {1, 2, 7, 25, 50}) {
        BigRational h = harmonic::exact_harmonic(n);
        for (std::int64_t r : {0, 1, 3, 6}) {
            CAPTURE(n, r);
            ErrorDecomposition d = decompose_error(n, r, kP);
            FixedReal direct = FixedReal::from_rational(h, kP) -
                               harmonic::eval_ramanujan(harmonic::HarmonicIndex(n), r, gamma, kP).value;
            CHECK((d.total.to_rational() - direct.to_rational()).abs() <=
                  BigRational(1, BigInt(1) << (kP - 40)));
        }
    }
}

TEST_CASE("theta_implied matches theta to 20 digits", "[verification]") {
    ThetaReport direct = theta(Family::Ramanujan, 10, 2, kP);
    ErrorDecomposition d = decompose_error(10, 2, kP);
    CHECK((direct.theta.to_rational() - frozen("0.9932700325662109319549266")).abs() <
          pow10_recip(24));
    CHECK((d.theta_implied.to_rational() - direct.theta.to_rational()).abs() < pow10_recip(20));
}

TEST_CASE("alternating tail fraction", "[verification]") {
    FixedReal a11 = alternating_tail_fraction(1, 1, kP);
    CHECK((a11.to_rational() - frozen("0.923771435982917819034354")).abs() < pow10_recip(23));

    FixedReal a100 = alternating_tail_fraction(100, 1, kP);
    CHECK(a100.to_rational() > BigRational(0));
    CHECK(a100.to_rational() < BigRational(1));

    // large r with 8m > 1 stays strictly inside (0,1)
    for (std::int64_t r : {10, 20, 40}) {
        FixedReal a = alternating_tail_fraction(2, r, kP);
        CAPTURE(r);
        CHECK(a.to_rational() > BigRational(0));
        CHECK(a.to_rational() < BigRational(1));
    }
}

TEST_CASE("sweep collects a clean small grid", "[verification]") {
    std::vector<ThetaReport> rows;
    SweepSummary s = sweep(Family::Ramanujan, {1, 12}, {1, 4}, kP,
                           [&](const ThetaReport& r) { rows.push_back(r); });
    CHECK(s.violations.empty());
    CHECK(s.indeterminates.empty());
    CHECK(s.decided_cells == 48);
    CHECK(rows.size() == 48);
    REQUIRE(s.min_margin.has_value());
    CHECK(s.min_margin->to_rational() > BigRational(1, 1'000'000));
    CHECK(s.min_theta->to_rational() > BigRational(0));
    CHECK(s.max_theta->to_rational() < BigRational(1));
}

TEST_CASE("empty ranges give an empty summary", "[verification]") {
    SweepSummary s = sweep(Family::DeTempleWang, {5, 4}, {1, 8}, kP);
    CHECK(s.decided_cells == 0);
    CHECK(s.violations.empty());
    CHECK(s.indeterminates.empty());
    CHECK(!s.min_margin.has_value());
}

TEST_CASE("summary merge is order independent", "[verification]") {
    std::vector<ThetaReport> rows;
    SweepSummary ordered = sweep(Family::DeTempleWang, {1, 6}, {0, 3}, kP,
                                 [&](const ThetaReport& r) { rows.push_back(r); });
    std::mt19937_64 rng(99);
    std::shuffle(rows.begin(), rows.end(), rng);
    SweepSummary shuffled;
    for (const ThetaReport& r : rows) shuffled.merge(r);
    CHECK(shuffled.decided_cells == ordered.decided_cells);
    CHECK(shuffled.violations.size() == ordered.violations.size());
    CHECK(*shuffled.min_margin == *ordered.min_margin);
    CHECK(*shuffled.min_theta == *ordered.min_theta);
    CHECK(*shuffled.max_theta == *ordered.max_theta);
}

TEST_CASE("residual carries the sign of the first omitted coefficient", "[verification]") {
    // equivalent restatement of theta > 0
    FixedReal gamma = harmonic::euler_gamma(kP);
    for (std::int64_t n : {1, 7, 50, 200}) {
        BigRational h = harmonic::exact_harmonic(n);
        harmonic::HarmonicIndex idx(n);
        for (std::int64_t r = 1; r <= 6; ++r) {
            CAPTURE(n, r);
            BigRational residual =
                h - harmonic::eval_ramanujan(idx, r, gamma, kP).value.to_rational();
            BigRational next = harmonic::r_closed(r + 1) / BigRational(idx.m).pow(r + 1);
            CHECK(residual.sign() == next.sign());
        }
    }
}

TEST_CASE("euler family theta stays in the unit interval", "[verification]") {
    for (std::int64_t n : {1, 5, 40}) {
        for (std::int64_t r : {0, 1, 3}) {
            ThetaReport t = theta(Family::Euler, n, r, kP);
            CAPTURE(n, r);
            CHECK(!t.indeterminate);
            CHECK(t.in_open_unit_interval);
        }
    }
}

TEST_CASE("a decided out-of-range theta registers as a violation", "[verification]") {
    // no genuine (n, r) produces one; fabricate a report to pin the contract
    ThetaReport fake{Family::Ramanujan, 3, 2,
                     FixedReal::from_rational(BigRational(3, 2), 128),
                     false, false,
                     FixedReal::from_rational(BigRational(1, 2), 128), 128};
    SweepSummary s;
    s.merge(fake);
    CHECK(s.violations.size() == 1);
    CHECK(s.violations[0].n == 3);
    CHECK(s.indeterminates.empty());
}

TEST_CASE("doubling precision flips no classification", "[verification]") {
    for (std::int64_t n : {1, 3, 17, 50}) {
        for (std::int64_t r : {1, 4, 6}) {
            ThetaReport base = theta(Family::Ramanujan, n, r, kP);
            ThetaReport doubled = theta(Family::Ramanujan, n, r, 2 * kP);
            CAPTURE(n, r);
            CHECK(base.in_open_unit_interval == doubled.in_open_unit_interval);
            CHECK(base.indeterminate == doubled.indeterminate);
        }
    }
}

TEST_CASE("true margin below 2^-32 is reported indeterminate", "[verification]") {
    // at n = 50000, r = 1 theta sits ~1.5e-10 below 1, inside the 2^-32
    // decision band: no precision can decide it under the protocol, and it
    // must not be classified
    ThetaReport r = theta(Family::Ramanujan, 50'000, 1, 160);
    CHECK(r.indeterminate);
}

TEST_CASE("csv rows are machine readable", "[verification]") {
    std::ostringstream os;
    os << harmonic::kSweepCsvHeader << '\n';
    sweep(Family::Ramanujan, {1, 5}, {1, 3}, kP,
          [&](const ThetaReport& r) { harmonic::write_sweep_csv_row(os, r); });
    std::istringstream is(os.str());
    std::string line;
    REQUIRE(std::getline(is, line));
    CHECK(line == "family,n,r,theta,margin,classification");
    int rows = 0;
    while (std::getline(is, line)) {
        ++rows;
        // family,n,r,theta,margin,classification
        std::vector<std::string> fields;
        std::size_t start = 0;
        for (std::size_t pos; (pos = line.find(',', start)) != std::string::npos; start = pos + 1)
            fields.push_back(line.substr(start, pos - start));
        fields.push_back(line.substr(start));
        REQUIRE(fields.size() == 6);
        CHECK(fields[0] == "ramanujan");
        FixedReal th = FixedReal::parse_decimal(fields[3], kP);
        FixedReal margin = FixedReal::parse_decimal(fields[4], kP);
        // re-derive the verdict from the printed columns
        bool in_open = th.is_positive() && th.to_rational() < BigRational(1);
        bool decided = margin.to_rational() > BigRational(1, BigInt(1) << 32);
        std::string expect = !decided ? "indeterminate" : (in_open ? "pass" : "violation");
        CHECK(fields[5] == expect);
    }
    CHECK(rows == 15);
}

#ifndef HARMONIC_CLI_HPP
#define HARMONIC_CLI_HPP

#include "harmonic/coefficients.hpp"
#include "harmonic/expansions.hpp"
#include "harmonic/verification.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>

namespace harmonic {
namespace cli {

// Exit codes are a contract consumed by scripts: keep them exhaustive.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;          // bad flags or guard violations
inline constexpr int kExitIndeterminate = 2;  // cells undecидable at final precision
inline constexpr int kExitViolation = 3;      // a theta outside (0,1)

enum class Command { Coeffs, Eval, Verify, Gamma, Decompose };
enum class OutputFormat { Table, Csv };

struct CliConfig {
    Command command = Command::Coeffs;
    std::int64_t precision_digits = 64;  // decimal; in [16, 10000]
    OutputFormat format = OutputFormat::Table;
    std::int64_t p_max = 0;
    std::int64_t n = 0;
    std::int64_t r = 0;
    Family family = Family::Ramanujan;
    IndexRange n_range{1, 0};
    IndexRange r_range{1, 0};

    std::int64_t precision_bits() const {
        // ceil(digits * 3.322) plus a 64-bit guard
        return (precision_digits * 3322 + 999) / 1000 + 64;
    }
};

namespace detail {

inline IndexRange parse_range(const std::string& text) {
    auto pos = text.find("..");
    if (pos == std::string::npos)
        throw CLI::ValidationError("range", "expected 'a..b', got '" + text + "'");
    try {
        std::int64_t lo = std::stoll(text.substr(0, pos));
        std::int64_t hi = std::stoll(text.substr(pos + 2));
        return {lo, hi};
    } catch (const std::exception&) {
        throw CLI::ValidationError("range", "expected 'a..b', got '" + text + "'");
    }
}

inline void require(bool ok, const std::string& message) {
    if (!ok) throw CLI::ValidationError("", message);
}

inline int residual_digits(const FixedReal& width) {
    if (width.is_zero()) return 20;
    std::int64_t e10 = harmonic::detail::decimal_exponent(width.mantissa(), width.precision_bits());
    return static_cast<int>(std::max<std::int64_t>(1, -e10 - 2));
}

inline void run_coeffs(const CliConfig& cfg, std::ostream& out) {
    if (cfg.format == OutputFormat::Csv) out << "p,d,r\n";
    for (std::int64_t p = 1; p <= cfg.p_max; ++p) {
        if (cfg.format == OutputFormat::Csv)
            out << p << ',' << d_coefficient(p).str() << ',' << r_closed(p).str() << '\n';
        else
            out << coefficient_dump_line(p) << '\n';
    }
}

inline int run_eval(const CliConfig& cfg, std::ostream& out) {
    const std::int64_t P = cfg.precision_bits();
    const FixedReal gamma = euler_gamma(P);
    ApproxResult result = [&] {
        switch (cfg.family) {
            case Family::Ramanujan: return eval_ramanujan(HarmonicIndex(cfg.n), cfg.r, gamma, P);
            case Family::DeTempleWang: return eval_dtw(HarmonicIndex(cfg.n), cfg.r, gamma, P);
            case Family::Euler: return eval_euler(cfg.n, cfg.r, gamma, P);
        }
        throw std::logic_error("run_eval: bad family");
    }();
    auto digits = static_cast<int>(cfg.precision_digits);
    out << "family=" << family_name(cfg.family) << " n=" << cfg.n << " r=" << cfg.r
        << " precision_digits=" << cfg.precision_digits << '\n';
    out << "approx=" << result.value.to_sci_string(digits) << '\n';
    out << "bound=" << result.next_term_bound.to_sci_string(15) << '\n';
    if (cfg.n > kHarmonicGuard) {
        out << "exact=unavailable (n beyond the 10^6 guard)\n";
        return kExitOk;
    }
    BigRational h = exact_harmonic(cfg.n);
    FixedReal residual = FixedReal::from_rational(h, P) - result.value;
    bool pass = residual.abs() < result.next_term_bound;
    out << "exact=" << h.str() << '\n';
    out << "residual=" << residual.to_sci_string(15) << '\n';
    out << "verdict=" << (pass ? "PASS" : "FAIL") << '\n';
    return pass ? kExitOk : kExitViolation;
}

inline int run_verify(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
    out << kSweepCsvHeader << '\n';
    SweepSummary summary = sweep(cfg.family, cfg.n_range, cfg.r_range, cfg.precision_bits(),
                                 [&](const ThetaReport& report) { write_sweep_csv_row(out, report); });
    if (!summary.violations.empty()) {
        err << "violations: " << summary.violations.size() << '\n';
        return kExitViolation;
    }
    if (!summary.indeterminates.empty()) {
        err << "indeterminate cells: " << summary.indeterminates.size() << '\n';
        return kExitIndeterminate;
    }
    return kExitOk;
}

inline void run_gamma(const CliConfig& cfg, std::ostream& out) {
    GammaEnclosure enclosure = gamma_enclosure(cfg.n, cfg.r, cfg.precision_bits());
    FixedReal width = enclosure.interval.width();
    int digits = residual_digits(width);
    out << "n=" << cfg.n << " r=" << cfg.r << " precision_digits=" << cfg.precision_digits << '\n';
    out << "lo=" << enclosure.interval.lo().to_fixed_string(digits + 6) << '\n';
    out << "hi=" << enclosure.interval.hi().to_fixed_string(digits + 6) << '\n';
    out << "width=" << width.to_sci_string(6) << '\n';
    out << "midpoint=" << enclosure.interval.midpoint().to_fixed_string(digits) << '\n';
}

inline void run_decompose(const CliConfig& cfg, std::ostream& out) {
    const std::int64_t P = cfg.precision_bits();
    ErrorDecomposition d = decompose_error(cfg.n, cfg.r, P);
    FixedReal direct = FixedReal::from_rational(exact_harmonic(cfg.n), P) -
                       eval_ramanujan(HarmonicIndex(cfg.n), cfg.r, euler_gamma(P), P).value;
    FixedReal alpha = alternating_tail_fraction(cfg.n, cfg.r, P);
    out << "n=" << cfg.n << " r=" << cfg.r << " precision_digits=" << cfg.precision_digits << '\n';
    out << "epsilon_r=" << d.epsilon_r.to_sci_string(30) << '\n';
    out << "e_r=" << d.e_r.to_sci_string(30) << '\n';
    out << "dtw_tail=" << d.dtw_tail.to_sci_string(30) << '\n';
    out << "total=" << d.total.to_sci_string(30) << '\n';
    out << "direct_residual=" << direct.to_sci_string(30) << '\n';
    out << "reconciliation=" << (d.total - direct).to_sci_string(6) << '\n';
    out << "theta_implied=" << d.theta_implied.to_sci_string(30) << '\n';
    out << "alpha_r=" << alpha.to_sci_string(30) << '\n';
}

}  // namespace detail

/// Parses and runs one invocation. All output goes to the given streams, so
/// the whole CLI is drivable in-process by the tests.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CliConfig cfg;
    std::string family_text = "ramanujan";
    std::string n_range_text, r_range_text, format_text = "table";

    CLI::App app{"Exact coefficients, evaluators and error verification for the Euler, "
                 "DeTemple-Wang and Ramanujan harmonic-number expansions"};
    app.require_subcommand(1);

    auto add_precision = [&](CLI::App* cmd) {
        cmd->add_option("--precision", cfg.precision_digits, "working precision, decimal digits")
            ->check(CLI::Range(static_cast<std::int64_t>(16), static_cast<std::int64_t>(10000)));
    };
    auto add_family = [&](CLI::App* cmd) {
        cmd->add_option("--family", family_text, "expansion family")
            ->check(CLI::IsMember({"euler", "dtw", "ramanujan"}));
    };

    CLI::App* coeffs = app.add_subcommand("coeffs", "print p, D_p, R_p as exact rationals");
    coeffs->add_option("--p-max", cfg.p_max, "largest coefficient index")->required();
    coeffs->add_option("--format", format_text, "table (tab separated) or csv")
        ->check(CLI::IsMember({"table", "csv"}));

    CLI::App* eval = app.add_subcommand("eval", "evaluate one expansion against exact H_n");
    add_family(eval);
    eval->add_option("--n", cfg.n, "harmonic index")->required();
    eval->add_option("--r", cfg.r, "number of correction terms")->required();
    add_precision(eval);

    CLI::App* verify = app.add_subcommand("verify", "sweep theta over a grid, CSV report");
    add_family(verify);
    verify->add_option("--n-range", n_range_text, "inclusive n range 'a..b'")->required();
    verify->add_option("--r-range", r_range_text, "inclusive r range 'a..b'")->required();
    add_precision(verify);

    CLI::App* gamma = app.add_subcommand("gamma", "rigorous enclosure of Euler's constant");
    gamma->add_option("--n", cfg.n, "harmonic index")->required();
    gamma->add_option("--r", cfg.r, "terms in the bracket")->required();
    add_precision(gamma);

    CLI::App* decompose = app.add_subcommand("decompose", "epsilon/E/tail error breakdown");
    decompose->add_option("--n", cfg.n, "harmonic index")->required();
    decompose->add_option("--r", cfg.r, "number of correction terms")->required();
    add_precision(decompose);

    try {
        app.parse(argc, argv);

        cfg.family = family_from_name(family_text);
        cfg.format = format_text == "csv" ? OutputFormat::Csv : OutputFormat::Table;

        if (coeffs->parsed()) {
            detail::require(cfg.p_max >= 1 && cfg.p_max <= 200, "--p-max must be in [1, 200]");
            cfg.command = Command::Coeffs;
            detail::run_coeffs(cfg, out);
            return kExitOk;
        }
        if (eval->parsed()) {
            detail::require(cfg.n >= 1, "--n must be >= 1");
            detail::require(cfg.r >= 0, "--r must be >= 0");
            cfg.command = Command::Eval;
            return detail::run_eval(cfg, out);
        }
        if (verify->parsed()) {
            cfg.command = Command::Verify;
            cfg.n_range = detail::parse_range(n_range_text);
            cfg.r_range = detail::parse_range(r_range_text);
            detail::require(!cfg.n_range.empty(), "--n-range is empty");
            detail::require(!cfg.r_range.empty(), "--r-range is empty");
            detail::require(cfg.n_range.lo >= 1 && cfg.n_range.hi <= kHarmonicGuard,
                            "--n-range must lie in [1, 10^6]");
            detail::require(cfg.r_range.lo >= 0, "--r-range must start at >= 0");
            return detail::run_verify(cfg, out, err);
        }
        if (gamma->parsed()) {
            detail::require(cfg.n >= 1 && cfg.n <= kHarmonicGuard, "--n must be in [1, 10^6]");
            detail::require(cfg.r >= 0, "--r must be >= 0");
            cfg.command = Command::Gamma;
            detail::run_gamma(cfg, out);
            return kExitOk;
        }
        detail::require(cfg.n >= 1 && cfg.n <= kHarmonicGuard, "--n must be in [1, 10^6]");
        detail::require(cfg.r >= 0, "--r must be >= 0");
        cfg.command = Command::Decompose;
        detail::run_decompose(cfg, out);
        return kExitOk;
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const PrecisionError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
}

}  // namespace cli
}  // namespace harmonic

#endif  // HARMONIC_CLI_HPP

#include "harmonic/cli.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

namespace {

struct CliResult {
    int code;
    std::string out;
    std::string err;
};

CliResult run_cli(std::initializer_list<const char*> args) {
    std::vector<const char*> argv{"harmonic"};
    argv.insert(argv.end(), args.begin(), args.end());
    std::ostringstream out, err;
    int code = harmonic::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

bool contains(const std::string& haystack, const std::string& needle) {
    return haystack.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("coeffs table output is exact", "[cli]") {
    CliResult r = run_cli({"coeffs", "--p-max", "2"});
    CHECK(r.code == 0);
    CHECK(r.out == "1\t1/24\t1/12\n2\t-7/960\t-1/120\n");

    CliResult nine = run_cli({"coeffs", "--p-max", "9"});
    CHECK(nine.code == 0);
    CHECK(contains(nine.out, "9\t5749691557/1882718208\t140051/17459442\n"));
}

TEST_CASE("coeffs csv output", "[cli]") {
    CliResult r = run_cli({"coeffs", "--p-max", "2", "--format", "csv"});
    CHECK(r.code == 0);
    CHECK(r.out == "p,d,r\n1,1/24,1/12\n2,-7/960,-1/120\n");
}

TEST_CASE("coeffs guard errors", "[cli]") {
    CHECK(run_cli({"coeffs", "--p-max", "0"}).code == 1);
    CHECK(run_cli({"coeffs", "--p-max", "201"}).code == 1);
    CHECK(run_cli({"coeffs"}).code == 1);  // missing required flag
}

TEST_CASE("eval prints a verdict", "[cli]") {
    CliResult r = run_cli({"eval", "--family", "ramanujan", "--n", "1", "--r", "1"});
    CHECK(r.code == 0);
    CHECK(contains(r.out, "residual=-7.12258851483885e-03"));
    CHECK(contains(r.out, "bound=8.33333333333333e-03"));
    CHECK(contains(r.out, "verdict=PASS"));

    CliResult dtw = run_cli({"eval", "--family", "dtw", "--n", "1", "--r", "0"});
    CHECK(dtw.code == 0);
    CHECK(contains(dtw.out, "residual=1.73192269903028e-02"));
    CHECK(contains(dtw.out, "verdict=PASS"));

    CliResult euler = run_cli({"eval", "--family", "euler", "--n", "10", "--r", "1"});
    CHECK(euler.code == 0);
    CHECK(contains(euler.out, "exact=7381/2520"));
    CHECK(contains(euler.out, "verdict=PASS"));
}

TEST_CASE("eval beyond the exact-harmonic guard still reports the bound", "[cli]") {
    CliResult r = run_cli({"eval", "--family", "ramanujan", "--n", "2000000", "--r", "1"});
    CHECK(r.code == 0);
    CHECK(contains(r.out, "approx="));
    CHECK(contains(r.out, "bound="));
    CHECK(contains(r.out, "exact=unavailable"));
    CHECK(!contains(r.out, "verdict="));
}

TEST_CASE("eval guard errors", "[cli]") {
    CHECK(run_cli({"eval", "--family", "ramanujan", "--n", "0", "--r", "1"}).code == 1);
    CHECK(run_cli({"eval", "--family", "nope", "--n", "1", "--r", "1"}).code == 1);
    CHECK(run_cli({"eval", "--family", "euler", "--n", "1", "--r", "1", "--precision", "8"}).code == 1);
    CHECK(run_cli({"eval", "--family", "euler", "--n", "1", "--r", "1", "--precision", "20000"}).code == 1);
}

TEST_CASE("verify emits csv and exit code 0 on a clean grid", "[cli]") {
    CliResult r = run_cli({"verify", "--family", "ramanujan", "--n-range", "1..10",
                           "--r-range", "1..3"});
    CHECK(r.code == 0);
    CHECK(r.out.rfind("family,n,r,theta,margin,classification\n", 0) == 0);
    CHECK(contains(r.out, "ramanujan,1,1,8.54710621780661837815378"));
    CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 31);  // header + 30 rows

    // byte-identical on repeat
    CliResult again = run_cli({"verify", "--family", "ramanujan", "--n-range", "1..10",
                               "--r-range", "1..3"});
    CHECK(again.out == r.out);
    CHECK(again.err == r.err);
}

TEST_CASE("verify range validation", "[cli]") {
    CHECK(run_cli({"verify", "--family", "dtw", "--n-range", "5..4", "--r-range", "1..2"}).code == 1);
    CHECK(run_cli({"verify", "--family", "dtw", "--n-range", "1..x", "--r-range", "1..2"}).code == 1);
    CHECK(run_cli({"verify", "--family", "dtw", "--n-range", "0..4", "--r-range", "1..2"}).code == 1);
    CHECK(run_cli({"verify", "--family", "dtw", "--n-range", "4", "--r-range", "1..2"}).code == 1);
}

TEST_CASE("verify reports indeterminate cells with exit 2", "[cli]") {
    // theta(50000, 1) pins ~1.5e-10 below 1: undecidable by protocol
    CliResult r = run_cli({"verify", "--family", "ramanujan", "--n-range", "50000..50000",
                           "--r-range", "1..1", "--precision", "16"});
    CHECK(r.code == 2);
    CHECK(contains(r.out, "indeterminate"));
    CHECK(contains(r.err, "indeterminate cells: 1"));
}

TEST_CASE("gamma enclosure command", "[cli]") {
    CliResult r = run_cli({"gamma", "--n", "100", "--r", "3"});
    CHECK(r.code == 0);
    CHECK(contains(r.out, "midpoint=0.57721566490"));
    CHECK(contains(r.out, "width="));

    // coarse run still brackets the fine midpoint
    CliResult coarse = run_cli({"gamma", "--n", "10", "--r", "0"});
    CHECK(coarse.code == 0);
    CHECK(contains(coarse.out, "lo=0.57"));

    // insufficient precision for the requested bracket is a guard error
    CliResult refuse = run_cli({"gamma", "--n", "2000", "--r", "6", "--precision", "16"});
    CHECK(refuse.code == 1);
    CHECK(contains(refuse.err, "bits"));
}

TEST_CASE("decompose command", "[cli]") {
    CliResult r = run_cli({"decompose", "--n", "1", "--r", "1"});
    CHECK(r.code == 0);
    CHECK(contains(r.out, "epsilon_r=-3.6084821718082727306029452"));
    CHECK(contains(r.out, "e_r=-2.3148148148148148148148148"));
    CHECK(contains(r.out, "theta_implied=8.54710621780661837815378"));
    CHECK(contains(r.out, "alpha_r=9.23771435982917819034353"));
    CHECK(contains(r.out, "reconciliation="));
}

TEST_CASE("help exits zero", "[cli]") {
    CliResult r = run_cli({"--help"});
    CHECK(r.code == 0);
    CHECK(contains(r.out, "coeffs"));
    CHECK(run_cli({}).code == 1);  // a subcommand is required
}

TEST_CASE("exit code constants are the documented contract", "[cli]") {
    CHECK(harmonic::cli::kExitOk == 0);
    CHECK(harmonic::cli::kExitUsage == 1);
    CHECK(harmonic::cli::kExitIndeterminate == 2);
    CHECK(harmonic::cli::kExitViolation == 3);
}

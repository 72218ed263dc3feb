#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "mertens_lab/cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args)
{
    std::ostringstream out, err;
    const int code = mlab::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p)
{
    std::ifstream f(p);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name)
{
    auto dir = fs::temp_directory_path() / "mertens_lab_cli_test";
    fs::create_directories(dir);
    return dir / name;
}

} // namespace

TEST_CASE("mertens subcommand")
{
    const auto r = run({"mertens", "--x", "1"});
    CHECK(r.code == 0);
    CHECK(r.out.rfind("M(1) = 1\n", 0) == 0);
    const auto j = run({"mertens", "--x", "1000", "--json"});
    CHECK(j.code == 0);
    const auto parsed = nlohmann::json::parse(j.out);
    CHECK(parsed["x"] == 1000);
    CHECK(parsed["M"] == 2);
    CHECK(parsed.contains("seconds"));
}

TEST_CASE("redheffer subcommand")
{
    const auto r = run({"redheffer", "--x", "12", "--check-det"});
    CHECK(r.code == 0);
    CHECK(r.out == "det = -2, M(12) = -2, match\n");
    const auto d = run({"redheffer", "--x", "2", "--dump", "csv"});
    CHECK(d.out == "1,1\n1,1\n");
}

TEST_CASE("verify identities writes a JSON report")
{
    const auto path = scratch("ident.json");
    const auto r = run({"verify", "identities", "--xmax", "2000", "--json", path.string()});
    CHECK(r.code == 0);
    const auto reports = nlohmann::json::parse(slurp(path));
    REQUIRE(reports.is_array());
    CHECK(reports.size() == 2000 * 17 + 300 * 2);
    for (const auto& rep : reports)
        REQUIRE(rep["pass"] == true);
}

TEST_CASE("verify conjecture report and series")
{
    const auto report = scratch("conj.json");
    const auto series = scratch("fig1.csv");
    const auto r = run({"verify", "conjecture", "--from", "2", "--to", "2000", "--report", report.string(),
                        "--keep-series", series.string()});
    CHECK(r.code == 0);
    const auto j = nlohmann::json::parse(slurp(report));
    for (const char* key : {"range", "checked", "violations", "min_margin_upper", "min_margin_lower",
                            "min_margin_sqrt_bound"})
        CHECK(j.contains(key));
    CHECK(j["checked"] == 1999);
    CHECK(j["violations"].empty());
    CHECK(slurp(series).rfind("x,log_factorial,q_sum,psi\n2,", 0) == 0);
}

TEST_CASE("out-of-claim points do not fail the run but violations do")
{
    CHECK(run({"verify", "conjecture", "--from", "2", "--to", "7"}).code == 0);
}

TEST_CASE("sieve CSV")
{
    const auto path = scratch("sieve.csv");
    CHECK(run({"sieve", "--limit", "6", "--out", path.string()}).code == 0);
    CHECK(slurp(path) == "n,mu,phi,lambda,omega,sigma0\n"
                         "1,1,1,1,0,1\n2,-1,1,-1,1,2\n3,-1,2,-1,1,2\n4,0,2,1,1,3\n5,-1,4,-1,1,2\n6,1,2,1,2,4\n");
}

TEST_CASE("record scans")
{
    const auto r = run({"scan", "hcn", "--limit", "130", "--generate"});
    CHECK(r.code == 0);
    CHECK(r.out.rfind("i,l,sigma0,M,j,q\n1,1,1,1,1,1\n", 0) == 0);
    const auto path = scratch("j.csv");
    CHECK(run({"scan", "j-records", "--limit", "100", "--out", path.string()}).code == 0);
    CHECK(slurp(path).rfind("i,l,j,M,sigma0,q\n", 0) == 0);
}

TEST_CASE("figures are byte-identical across thread counts")
{
    const auto a = scratch("figs_a"), b = scratch("figs_b");
    const std::vector<std::string> common{"figures", "--fig1-to", "3000", "--fig3-limit", "500",
                                          "--j-limit", "100000", "--hcn-limit", "100000000"};
    auto args_a = common, args_b = common;
    args_a.insert(args_a.end(), {"--outdir", a.string(), "--threads", "1"});
    args_b.insert(args_b.end(), {"--outdir", b.string(), "--threads", "3"});
    REQUIRE(run(args_a).code == 0);
    REQUIRE(run(args_b).code == 0);
    for (int i = 1; i <= 10; ++i) {
        const auto name = "fig" + std::to_string(i) + ".csv";
        CAPTURE(name);
        REQUIRE(fs::exists(a / name));
        CHECK(slurp(a / name) == slurp(b / name));
    }
}

TEST_CASE("bench cross-check is seeded")
{
    const auto r = run({"bench", "--limit", "100000", "--points", "8", "--seed", "7"});
    CHECK(r.code == 0);
    CHECK(r.out.find("(seed 7)") != std::string::npos);
}

TEST_CASE("usage and capacity errors exit with 2")
{
    CHECK(run({}).code == 2);
    CHECK(run({"mertens"}).code == 2);
    CHECK(run({"mertens", "--x", "5", "--bogus"}).code == 2);
    CHECK(run({"verify", "identities", "--xmax", "10", "--k", "4"}).code == 2);
    CHECK(run({"redheffer", "--x", "500"}).code == 2);
    CHECK(run({"verify", "conjecture", "--to", "6000000"}).code == 2);
    CHECK(run({"--help"}).code == 0);
}

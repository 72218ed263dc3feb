#include "mertens_lab/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

#include "mertens_lab/conjecture.hpp"
#include "mertens_lab/identities.hpp"
#include "mertens_lab/matrices.hpp"
#include "mertens_lab/mertens.hpp"
#include "mertens_lab/records.hpp"
#include "mertens_lab/sieve.hpp"

namespace mlab::cli {

namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

struct Global {
    unsigned threads = std::max(1u, std::thread::hardware_concurrency());
    uint64_t seed = 0;
    double mem_gb = 0;
};

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

double seconds_since(Clock::time_point start)
{
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::ofstream open_out(const std::string& path)
{
    std::ofstream f(path);
    if (!f)
        throw UsageError("cannot write " + path);
    return f;
}

std::vector<unsigned> parse_ks(const std::string& text)
{
    std::vector<unsigned> ks;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        unsigned long k = 0;
        try {
            k = std::stoul(item);
        } catch (const std::exception&) {
            throw UsageError("bad --k entry '" + item + "'");
        }
        if (k < 1 || k > 3)
            throw UsageError("--k entries must be in 1..3");
        ks.push_back(static_cast<unsigned>(k));
    }
    if (ks.empty())
        throw UsageError("--k is empty");
    return ks;
}

void write_records_csv(const RecordSeries& s, std::ostream& out)
{
    Table t;
    if (s.kind == RecordKind::JRecords)
        t.header = {"i", "l", "j", "M", "sigma0", "q"};
    else
        t.header = {"i", "l", "sigma0", "M", "j", "q"};
    for (const auto& p : s.points) {
        std::vector<std::string> row{std::to_string(p.index), std::to_string(p.l)};
        if (s.kind == RecordKind::JRecords) {
            row.push_back(to_string(p.m));
            row.push_back(std::to_string(p.mertens));
            row.push_back(std::to_string(p.sigma0));
        } else {
            row.push_back(std::to_string(p.sigma0));
            row.push_back(std::to_string(p.mertens));
            row.push_back(to_string(p.j.value_or(0)));
        }
        row.push_back(p.q ? to_string(*p.q) : "");
        t.rows.push_back(std::move(row));
    }
    t.write_csv(out);
}

json conjecture_json(const ConjectureReport& r)
{
    auto margin = [](double v) -> json { return std::isinf(v) ? json(nullptr) : json(v); };
    json violations = json::array();
    for (const auto& v : r.violations)
        violations.push_back({{"x", v.x}, {"side", v.side}, {"lhs", v.lhs}, {"rhs", v.rhs}});
    json out_of_claim = json::array();
    for (const auto& o : r.out_of_claim)
        out_of_claim.push_back({{"x", o.x}, {"side", o.side}, {"lhs", o.lhs}, {"rhs", o.rhs}, {"holds", o.holds}});
    return {{"range", {r.from, r.to}},
            {"checked", r.checked},
            {"violations", violations},
            {"min_margin_upper", margin(r.min_margin_upper)},
            {"argmin_upper", r.argmin_upper},
            {"min_margin_lower", margin(r.min_margin_lower)},
            {"argmin_lower", r.argmin_lower},
            {"min_margin_sqrt_bound", margin(r.min_margin_sqrt_bound)},
            {"argmin_sqrt_bound", r.argmin_sqrt_bound},
            {"exact_rechecks", r.exact_rechecks},
            {"implication_failures", r.implication_failures},
            {"out_of_claim", out_of_claim}};
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Mertens function tables, divisor-sum identities and record scans"};
    app.require_subcommand(1);
    app.fallthrough();
    Global g;
    app.add_option("--threads", g.threads, "worker threads")->check(CLI::PositiveNumber);
    app.add_option("--seed", g.seed, "seed for random cross-check points");
    app.add_option("--mem-gb", g.mem_gb, "memory ceiling in GiB (overrides MERTENS_LAB_MEM_GB)")
        ->check(CLI::PositiveNumber);

    // sieve
    auto* sieve_cmd = app.add_subcommand("sieve", "sieve mu, phi, lambda, omega, sigma0 on [1, limit]");
    uint64_t sieve_limit = 0;
    std::string sieve_out;
    sieve_cmd->add_option("--limit", sieve_limit)->required()->check(CLI::PositiveNumber);
    sieve_cmd->add_option("--out", sieve_out, "CSV path");

    // mertens
    auto* mertens_cmd = app.add_subcommand("mertens", "M(x) by the sublinear method");
    uint64_t mx = 0, threshold = 0;
    bool mjson = false;
    mertens_cmd->add_option("--x", mx)->required()->check(CLI::PositiveNumber);
    mertens_cmd->add_option("--threshold", threshold, "sieve threshold (default ceil(x^(2/3)))");
    mertens_cmd->add_flag("--json", mjson);

    // verify
    auto* verify_cmd = app.add_subcommand("verify", "identity and conjecture checks");
    verify_cmd->require_subcommand(1);
    auto* ident_cmd = verify_cmd->add_subcommand("identities", "run the identity suite");
    SuiteConfig suite;
    std::string ks_text = "1,2,3", ident_json;
    ident_cmd->add_option("--xmax", suite.xmax)->required()->check(CLI::PositiveNumber);
    ident_cmd->add_option("--exact-cap", suite.exact_cap);
    ident_cmd->add_option("--k", ks_text, "comma separated, each in 1..3");
    ident_cmd->add_option("--json", ident_json, "write reports as JSON");

    auto* conj_cmd = verify_cmd->add_subcommand("conjecture", "scan log(x!) > Q(x) > psi(x)");
    uint64_t conj_from = 2, conj_to = 0, conj_ceiling = ScanOptions{}.ceiling;
    std::string conj_report, conj_series;
    conj_cmd->add_option("--from", conj_from)->check(CLI::PositiveNumber);
    conj_cmd->add_option("--to", conj_to)->required()->check(CLI::PositiveNumber);
    conj_cmd->add_option("--report", conj_report, "JSON report path");
    conj_cmd->add_option("--keep-series", conj_series, "write x,log_factorial,q_sum,psi CSV");
    conj_cmd->add_option("--ceiling", conj_ceiling, "largest x accepted");

    // scan
    auto* scan_cmd = app.add_subcommand("scan", "record scans");
    scan_cmd->require_subcommand(1);
    auto* jrec_cmd = scan_cmd->add_subcommand("j-records", "champions of j(x)");
    uint64_t jrec_limit = 0;
    std::string jrec_out;
    jrec_cmd->add_option("--limit", jrec_limit)->required()->check(CLI::PositiveNumber);
    jrec_cmd->add_option("--out", jrec_out);
    auto* hcn_cmd = scan_cmd->add_subcommand("hcn", "highly composite numbers with M, j and Q");
    uint64_t hcn_limit = 0;
    bool hcn_generate = false;
    std::string hcn_out;
    hcn_cmd->add_option("--limit", hcn_limit)->required()->check(CLI::PositiveNumber);
    hcn_cmd->add_flag("--generate", hcn_generate, "enumerate exponent patterns instead of scanning");
    hcn_cmd->add_option("--out", hcn_out);

    // redheffer
    auto* red_cmd = app.add_subcommand("redheffer", "divisibility matrices");
    uint64_t red_x = 0;
    bool red_det = false;
    std::string red_dump, red_kind = "REDHEFFER";
    red_cmd->add_option("--x", red_x)->required()->check(CLI::PositiveNumber);
    red_cmd->add_flag("--check-det", red_det, "compare det with M(x)");
    red_cmd->add_option("--dump", red_dump, "dump format")->check(CLI::IsMember({"csv"}));
    red_cmd->add_option("--kind", red_kind, "REDHEFFER, R_PRIME, T or U")
        ->check(CLI::IsMember({"REDHEFFER", "R_PRIME", "T", "U"}));

    // figures
    auto* fig_cmd = app.add_subcommand("figures", "write fig1.csv .. fig10.csv");
    std::string fig_dir;
    uint64_t fig1_to = 10'000, fig3_limit = 10'000, fig_j_limit = 10'000'000, fig_hcn_limit = 1'000'000'000'000ull;
    fig_cmd->add_option("--outdir", fig_dir)->required();
    fig_cmd->add_option("--fig1-to", fig1_to)->check(CLI::PositiveNumber);
    fig_cmd->add_option("--fig3-limit", fig3_limit)->check(CLI::PositiveNumber);
    fig_cmd->add_option("--j-limit", fig_j_limit)->check(CLI::PositiveNumber);
    fig_cmd->add_option("--hcn-limit", fig_hcn_limit)->check(CLI::PositiveNumber);

    // bench
    auto* bench_cmd = app.add_subcommand("bench", "time M(x) and cross-check it against a sieve at random points");
    uint64_t bench_limit = 10'000'000, bench_points = 64;
    bench_cmd->add_option("--limit", bench_limit)->check(CLI::PositiveNumber);
    bench_cmd->add_option("--points", bench_points)->check(CLI::PositiveNumber);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return exit_usage;
    }

    try {
        if (g.mem_gb > 0)
            MemoryBudget::set_ceiling_bytes(static_cast<uint64_t>(g.mem_gb * (1ull << 30)));

        if (*sieve_cmd) {
            MemoryBudget::require(SieveTable::footprint_bytes(sieve_limit), "sieve");
            const auto t = SieveTable::build(sieve_limit);
            if (sieve_out.empty()) {
                out << "sieved [1, " << sieve_limit << "]\n";
                return exit_ok;
            }
            auto f = open_out(sieve_out);
            f << "n,mu,phi,lambda,omega,sigma0\n";
            for (uint64_t n = 1; n <= sieve_limit; ++n)
                f << n << ',' << t.mu(n) << ',' << t.phi(n) << ',' << t.liouville(n) << ',' << t.omega(n) << ','
                  << t.sigma0(n) << '\n';
            return exit_ok;
        }

        if (*mertens_cmd) {
            const auto start = Clock::now();
            QuotientOptions opts;
            opts.threshold = threshold;
            const int64_t m = mertens_at(mx, opts);
            const double secs = seconds_since(start);
            if (mjson)
                out << json{{"x", mx}, {"M", m}, {"seconds", secs}}.dump() << '\n';
            else
                out << "M(" << mx << ") = " << m << "\n" << "elapsed " << secs << " s\n";
            return exit_ok;
        }

        if (*ident_cmd) {
            suite.ks = parse_ks(ks_text);
            suite.threads = g.threads;
            const auto reports = run_identity_suite(suite);
            uint64_t failed = 0;
            json arr = json::array();
            for (const auto& r : reports) {
                if (!r.pass) {
                    ++failed;
                    err << "FAIL " << r.id << " x=" << r.x << " lhs=" << format_value(r.lhs)
                        << " rhs=" << format_value(r.rhs) << '\n';
                }
                if (!ident_json.empty())
                    arr.push_back(to_json(r));
            }
            if (!ident_json.empty())
                open_out(ident_json) << arr.dump(1) << '\n';
            out << reports.size() << " checks, " << failed << " failures\n";
            return failed ? exit_violation : exit_ok;
        }

        if (*conj_cmd) {
            ScanOptions opts;
            opts.threads = g.threads;
            opts.keep_series = !conj_series.empty();
            opts.ceiling = conj_ceiling;
            const auto report = scan(conj_from, conj_to, opts);
            if (!conj_report.empty())
                open_out(conj_report) << conjecture_json(report).dump(1) << '\n';
            if (!conj_series.empty()) {
                auto f = open_out(conj_series);
                figure1_table(report).write_csv(f);
            }
            for (const auto& v : report.violations)
                err << "VIOLATION x=" << v.x << " side=" << v.side << " lhs=" << format_float(v.lhs)
                    << " rhs=" << format_float(v.rhs) << '\n';
            out << "checked " << report.checked << " values in [" << conj_from << ", " << conj_to << "], "
                << report.violations.size() << " violations\n";
            return report.passed() ? exit_ok : exit_violation;
        }

        if (*jrec_cmd || *hcn_cmd) {
            const bool j = jrec_cmd->parsed();
            RecordOptions opts;
            opts.threads = g.threads;
            opts.generate = hcn_generate;
            const auto series = scan_records(j ? RecordKind::JRecords : RecordKind::Hcn, j ? jrec_limit : hcn_limit,
                                             opts);
            const std::string& path = j ? jrec_out : hcn_out;
            if (path.empty()) {
                write_records_csv(series, out);
            } else {
                auto f = open_out(path);
                write_records_csv(series, f);
                out << series.points.size() << " records up to " << series.limit << '\n';
            }
            return exit_ok;
        }

        if (*red_cmd) {
            const auto kind = parse_matrix_kind(red_kind);
            const auto m = build_matrix(kind, red_x);
            if (red_dump == "csv")
                out << m.to_csv();
            if (red_det) {
                const mpq_class det = m.integral() ? mpq_class(determinant_exact(m)) : determinant_rational(m);
                const int64_t mxv = mertens_at(red_x);
                if (kind != MatrixKind::Redheffer) {
                    out << "det = " << det.get_str() << ", M(" << red_x << ") = " << mxv << '\n';
                    return exit_ok;
                }
                const bool match = det == mxv;
                out << "det = " << det.get_str() << ", M(" << red_x << ") = " << mxv << ", "
                    << (match ? "match" : "MISMATCH") << '\n';
                return match ? exit_ok : exit_violation;
            }
            return exit_ok;
        }

        if (*fig_cmd) {
            namespace fs = std::filesystem;
            fs::create_directories(fig_dir);
            auto write = [&](const std::string& name, const Table& t) {
                auto f = open_out((fs::path(fig_dir) / name).string());
                t.write_csv(f);
            };
            ScanOptions opts;
            opts.threads = g.threads;
            opts.keep_series = true;
            opts.sqrt_bound = false;
            opts.ceiling = std::max(opts.ceiling, fig1_to);
            write("fig1.csv", figure1_table(scan(1, fig1_to, opts)));
            write("fig3.csv", figure3_table(fig3_limit));
            RecordOptions ropts;
            ropts.threads = g.threads;
            const auto jrec = scan_records(RecordKind::JRecords, fig_j_limit, ropts);
            for (int fig : {2, 4, 5})
                write("fig" + std::to_string(fig) + ".csv", figure_series(jrec, fig));
            ropts.generate = true;
            const auto hcn = scan_records(RecordKind::Hcn, fig_hcn_limit, ropts);
            for (int fig : {6, 7, 8, 9, 10})
                write("fig" + std::to_string(fig) + ".csv", figure_series(hcn, fig));
            out << "wrote fig1.csv .. fig10.csv to " << fig_dir << " (j records to " << fig_j_limit
                << ", hcn to " << fig_hcn_limit << ")\n";
            return exit_ok;
        }

        if (*bench_cmd) {
            auto start = Clock::now();
            const auto prefix = MertensPrefix::build(bench_limit);
            out << "sieve M(1.." << bench_limit << "): " << seconds_since(start) << " s\n";
            std::mt19937_64 rng(g.seed);
            std::uniform_int_distribution<uint64_t> pick(1, bench_limit);
            uint64_t mismatches = 0;
            start = Clock::now();
            for (uint64_t i = 0; i < bench_points; ++i) {
                const uint64_t x = pick(rng);
                const int64_t m = mertens_at(x);
                if (m != prefix.at(x)) {
                    ++mismatches;
                    err << "MISMATCH x=" << x << " sublinear=" << m << " sieve=" << prefix.at(x) << '\n';
                }
            }
            out << bench_points << " random points (seed " << g.seed << "): " << seconds_since(start) << " s, "
                << mismatches << " mismatches\n";
            for (uint64_t x = 1'000'000; x <= 1'000'000'000'000ull; x *= 100) {
                start = Clock::now();
                const int64_t m = mertens_at(x);
                out << "M(" << x << ") = " << m << "  " << seconds_since(start) << " s\n";
            }
            return mismatches ? exit_violation : exit_ok;
        }
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const CapacityError& e) {
        err << "capacity: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    }
    return exit_usage;
}

} // namespace mlab::cli

// One PASS/FAIL line per acceptance criterion. With no arguments every
// criterion runs; otherwise only the named ones. Exit status is 0 iff every
// criterion that ran passed.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "mertens_lab/conjecture.hpp"
#include "mertens_lab/identities.hpp"
#include "mertens_lab/matrices.hpp"
#include "mertens_lab/mertens.hpp"
#include "mertens_lab/records.hpp"
#include "oracles.hpp"

using namespace mlab;

namespace tol {
constexpr double identity_float_rel = 1e-9; // T2, T6 and PSI
constexpr double checkpoint_ratio = 5e-7;
constexpr double ratio_band = 0.01;
constexpr double identity_seconds = 120;
constexpr double redheffer_seconds = 60;
constexpr double conjecture_seconds = 15 * 60;
constexpr double checkpoint_seconds = 15 * 60;
constexpr uint64_t checkpoint_bytes = 4ull << 30;
} // namespace tol

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
    bool pass;
    std::string detail;
};

double seconds_since(Clock::time_point t)
{
    return std::chrono::duration<double>(Clock::now() - t).count();
}

std::string fmt(const char* f, double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

unsigned worker_count()
{
    return std::min(4u, std::max(1u, std::thread::hardware_concurrency()));
}

Outcome identity_suite()
{
    static_assert(tol::identity_float_rel == float_tolerance);
    const auto start = Clock::now();
    const auto reports = run_identity_suite({.xmax = 2000, .ks = {1, 2, 3}, .exact_cap = 300, .threads = 1});
    const double secs = seconds_since(start);
    uint64_t failures = 0, exact = 0, products = 0, t6_exact = 0;
    std::string first;
    for (const auto& r : reports) {
        // T6 is reported both ways; its exact form is T6_EXACT
        const bool float_id = r.id == "T2" || r.id == "PSI" || r.id == "T6";
        if (float_id != (r.mode == CheckMode::Float)) {
            ++failures;
            first = first.empty() ? r.id + " in wrong mode" : first;
        }
        if (!r.pass) {
            ++failures;
            if (first.empty())
                first = r.id + " x=" + std::to_string(r.x);
        }
        exact += r.mode != CheckMode::Float;
        products += r.id == "PSI_EXACT" || r.id == "T2_EXACT";
        t6_exact += r.id == "T6_EXACT";
    }
    // x <= 2000: LEHMAN, T1, T2, T3 x3, T4 x3, T5..T10, T6_EXACT, PSI; x <= 300: two product forms
    const bool complete = reports.size() == 2000 * 17 + 300 * 2 && products == 600 && t6_exact == 2000;
    std::ostringstream d;
    d << reports.size() << " reports (" << exact << " exact), " << failures << " failures, " << fmt("%.2f", secs)
      << " s single-threaded (limit " << tol::identity_seconds << " s)";
    if (!first.empty())
        d << ", first failure " << first;
    return {complete && failures == 0 && secs < tol::identity_seconds, d.str()};
}

Outcome lehman()
{
    const auto m = MertensPrefix::build(3000);
    const auto s = scan_lehman(3000, m);
    return {s.failures.empty() && s.checked == 3000ull * 3001 / 2,
            std::to_string(s.checked) + " (x, n) pairs, " + std::to_string(s.failures.size()) + " failures"};
}

Outcome redheffer()
{
    const auto start = Clock::now();
    const auto mert = oracle::mertens_table(50);
    uint64_t bad = 0;
    for (uint64_t x = 1; x <= 50; ++x)
        bad += determinant_exact(build_matrix(MatrixKind::Redheffer, x)) != mert[x];

    const long displayed[12][12] = {
        {-2, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0},  {-1, -1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0},
        {-1, 0, -1, 0, 0, 0, 0, 0, 0, 0, 0, 0}, {-1, -1, 0, -1, 0, 0, 0, 0, 0, 0, 0, 0},
        {0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0},   {0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0},
        {1, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0},   {1, 1, 0, 1, 0, 0, 0, 1, 0, 0, 0, 0},
        {1, 0, 1, 0, 0, 0, 0, 0, 1, 0, 0, 0},   {1, 1, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0},
        {1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0},   {1, 1, 1, 1, 0, 1, 0, 0, 0, 0, 0, 1},
    };
    const auto t = build_matrix(MatrixKind::T, 12);
    uint64_t mismatched = 0;
    for (uint64_t i = 1; i <= 12; ++i)
        for (uint64_t j = 1; j <= 12; ++j)
            mismatched += t.at(i, j) != displayed[i - 1][j - 1];
    const double secs = seconds_since(start);
    return {bad == 0 && mismatched == 0 && secs < tol::redheffer_seconds,
            "det = M(x) fails for " + std::to_string(bad) + " of x = 1..50; T(12) differs in " +
                std::to_string(mismatched) + " of 144 entries; " + fmt("%.2f", secs) + " s"};
}

Outcome conjecture()
{
    const auto start = Clock::now();
    ScanOptions opts;
    opts.threads = worker_count();
    const auto c1 = scan_conjecture1(7, 500'000, opts);
    const auto mb = scan_m_bound(2, 500'000, opts);
    const double secs = seconds_since(start);

    bool boundary = false;
    for (const auto& o : c1.out_of_claim)
        if (o.x == 7 && o.side == "upper" && !o.holds && o.rhs == 9 && std::abs(o.lhs - 8.525) < 1e-3)
            boundary = true;
    const bool pass = c1.violations.empty() && c1.checked == 500'000 - 6 && boundary && mb.violations.empty() &&
                      mb.checked == 500'000 - 1 && c1.implication_failures == 0 && secs < tol::conjecture_seconds;
    std::ostringstream d;
    d << "8..500000: " << c1.violations.size() << " violations (min upper margin "
      << fmt("%.4f", c1.min_margin_upper) << " at x=" << c1.argmin_upper << ", min lower margin "
      << fmt("%.4f", c1.min_margin_lower) << " at x=" << c1.argmin_lower << "); x=7 "
      << (boundary ? "reported out of claim (8.525 < 9)" : "boundary NOT reported") << "; sqrt bound 2..500000: "
      << mb.violations.size() << " violations; " << fmt("%.1f", secs) << " s on " << opts.threads << " threads";
    return {pass, d.str()};
}

Outcome schwarz()
{
    const IdentityContext ctx(10'000);
    uint64_t failures = 0;
    for (uint64_t x = 1; x <= 10'000; ++x)
        failures += !verify_schwarz(x, ctx).pass;
    return {failures == 0, "x = 1..10000, " + std::to_string(failures) + " failures"};
}

Outcome checkpoint()
{
    const uint64_t old_ceiling = MemoryBudget::ceiling_bytes();
    MemoryBudget::set_ceiling_bytes(tol::checkpoint_bytes);
    const auto start = Clock::now();
    const uint64_t x = 7'766'842'813ull;
    int64_t m = 0;
    try {
        m = mertens_at(x);
    } catch (const CapacityError& e) {
        MemoryBudget::set_ceiling_bytes(old_ceiling);
        return {false, e.what()};
    }
    MemoryBudget::set_ceiling_bytes(old_ceiling);
    const double secs = seconds_since(start);
    const double ratio = std::abs(static_cast<double>(m)) / std::sqrt(static_cast<double>(x));
    const bool pass = m == 50'286 && std::abs(ratio - 0.570591) <= tol::checkpoint_ratio &&
                      secs < tol::checkpoint_seconds;
    return {pass, "M(7766842813) = " + std::to_string(m) + ", |M|/sqrt(x) = " + fmt("%.7f", ratio) + ", " +
                      fmt("%.2f", secs) + " s under a 4 GiB ceiling"};
}

Outcome ratios()
{
    const IdentityContext ctx(1'000'000, {2});
    std::map<std::string, IdentityReport> by_id;
    for (const auto& r : asymptotic_ratios(1'000'000, ctx, tol::ratio_band))
        by_id[r.id] = r;
    const auto& walfisz = by_id.at("WALFISZ_RATIO");
    const auto& squarefree = by_id.at("SQUAREFREE_RATIO");
    const auto& jordan2 = by_id.at("JORDAN_RATIO(k=2)");
    const auto& literal = by_id.at("SQRT_Q_OVER_X_BOUND");
    const auto& corrected = by_id.at("SQRT_Q_OVER_SQRT_X_BOUND");
    auto part = [](const char* name, const IdentityReport& r) {
        return std::string(name) + " " + fmt("%.6f", to_double(r.lhs)) + " vs " + fmt("%.6f", to_double(r.rhs)) +
               (r.pass ? " ok" : " FAILS");
    };
    std::ostringstream d;
    d << part("A/x^2", walfisz) << "; " << part("squarefree/x", squarefree) << "; " << part("B2/x^3", jordan2)
      << "; " << part("sqrt(Q)/x", literal) << " (exact: Q pi^2 (x+1)(2x+1) > 54 x^4); "
      << part("sqrt(Q)/sqrt(x)", corrected) << " (Schwarz route, informational)";
    return {walfisz.pass && squarefree.pass && jordan2.pass && literal.pass, d.str()};
}

Outcome champions()
{
    const uint64_t limit = 10'000;
    const auto m = oracle::mertens_table(limit);
    const auto j_oracle = oracle::champions(limit, [&](uint64_t x) { return oracle::j_value(x, m); });
    const auto h_oracle = oracle::champions(limit, [](uint64_t x) { return oracle::divisor_count(x); });
    auto ls = [](const RecordSeries& s) {
        std::vector<uint64_t> out;
        for (const auto& p : s.points)
            out.push_back(p.l);
        return out;
    };
    const bool j_ok = ls(scan_records(RecordKind::JRecords, limit)) == j_oracle;
    const bool h_ok = ls(scan_records(RecordKind::Hcn, limit)) == h_oracle &&
                      ls(scan_records(RecordKind::Hcn, limit, {.generate = true})) == h_oracle;
    const bool prefix_ok =
        ls(scan_records(RecordKind::Hcn, 130)) == std::vector<uint64_t>{1, 2, 4, 6, 12, 24, 36, 48, 60, 120};

    const uint64_t desk = 1'000'000'000'000ull;
    const auto hcn = scan_records(RecordKind::Hcn, desk, {.generate = true, .threads = worker_count()});
    const auto chain = fig9_chain_failures(hcn);
    std::ostringstream d;
    d << "J records to 1e4: " << j_oracle.size() << " champions " << (j_ok ? "match" : "DIFFER")
      << "; HCN to 1e4: " << h_oracle.size() << (h_ok ? " match" : " DIFFER") << "; HCN to 130 "
      << (prefix_ok ? "match" : "DIFFER") << "; Fig 9 chain on " << hcn.points.size() - 4
      << " HCN with i > 4 up to 1e12: " << chain.size() << " failures";
    return {j_ok && h_ok && prefix_ok && chain.empty(), d.str()};
}

Outcome not_reproducible()
{
    return {true, "declared, not run: the 772-champion j list to 1.5e10, the HCN series to 2.24e18 and "
                  "M(1.16e19) are outside desk scale; `mlab scan j-records --limit 15000000000` and "
                  "`mlab scan hcn --generate --limit 2240000000000000000` are the long-run profile, "
                  "with no runtime guarantee"};
}

} // namespace

int main(int argc, char** argv)
{
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"identity_suite", identity_suite},
        {"lehman_generalization", lehman},
        {"redheffer_determinant", redheffer},
        {"conjecture_range", conjecture},
        {"schwarz_inequality", schwarz},
        {"checkpoint", checkpoint},
        {"asymptotic_ratios", ratios},
        {"champion_scans", champions},
        {"not_reproducible_declared", not_reproducible},
    };

    std::vector<std::string> wanted(argv + 1, argv + argc);
    for (const auto& w : wanted) {
        bool known = false;
        for (const auto& c : criteria)
            known = known || c.first == w;
        if (!known) {
            std::fprintf(stderr, "unknown criterion '%s'\n", w.c_str());
            return 2;
        }
    }

    int failed = 0;
    for (const auto& [name, check] : criteria) {
        if (!wanted.empty() && std::find(wanted.begin(), wanted.end(), name) == wanted.end())
            continue;
        Outcome o;
        try {
            o = check();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
        std::fflush(stdout);
        failed += !o.pass;
    }
    return failed ? 1 : 0;
}

#include "mertens_lab/records.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <thread>

#include "mertens_lab/floorsum.hpp"

namespace mlab {

std::string to_string(RecordKind kind)
{
    return kind == RecordKind::JRecords ? "j-records" : "hcn";
}

i128 j_of(uint64_t x)
{
    const auto table = MertensQuotientTable::build(x);
    const auto f = trial_factorize(x);
    return j_of(x, f, table);
}

namespace {

struct Candidate {
    uint64_t x;
    i128 value;
};

uint32_t divisor_count(std::span<const std::pair<uint64_t, unsigned>> f)
{
    uint32_t d = 1;
    for (auto [p, e] : f)
        d *= e + 1;
    return d;
}

// Runs eval(x) over [1, limit] in chunks and keeps chunk-local champions; the
// ordered merge below turns them into the global champion list.
template <class Eval>
std::vector<Candidate> champions(uint64_t limit, unsigned threads, Eval eval)
{
    const uint64_t chunk_count = std::min<uint64_t>(limit, 256);
    const uint64_t chunk_size = (limit + chunk_count - 1) / chunk_count;
    std::vector<std::vector<Candidate>> chunks(chunk_count);
    auto run_chunk = [&](uint64_t c) {
        const uint64_t lo = 1 + c * chunk_size;
        const uint64_t hi = std::min(limit, lo + chunk_size - 1);
        i128 best = -1;
        for (uint64_t x = lo; x <= hi; ++x) {
            const i128 v = eval(x);
            if (v > best) {
                best = v;
                chunks[c].push_back({x, v});
            }
        }
    };
    if (threads <= 1) {
        for (uint64_t c = 0; c < chunk_count; ++c)
            run_chunk(c);
    } else {
        std::atomic<uint64_t> next{0};
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t)
            pool.emplace_back([&] {
                for (uint64_t c = next++; c < chunk_count; c = next++)
                    run_chunk(c);
            });
        for (auto& th : pool)
            th.join();
    }
    std::vector<Candidate> out;
    i128 best = -1;
    for (const auto& chunk : chunks)
        for (const auto& cand : chunk)
            if (cand.value > best) {
                best = cand.value;
                out.push_back(cand);
            }
    return out;
}

constexpr std::array<uint64_t, 15> first_primes{2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47};

void pattern_dfs(size_t idx, uint64_t value, unsigned max_exp, uint64_t divisors, uint64_t limit,
                 std::vector<std::pair<uint64_t, uint64_t>>& out)
{
    out.emplace_back(value, divisors);
    if (idx == first_primes.size())
        return;
    const uint64_t p = first_primes[idx];
    uint64_t v = value;
    for (unsigned e = 1; e <= max_exp; ++e) {
        if (v > limit / p)
            break;
        v *= p;
        pattern_dfs(idx + 1, v, e, divisors * (e + 1), limit, out);
    }
}

} // namespace

std::vector<std::pair<uint64_t, uint64_t>> exponent_pattern_candidates(uint64_t limit)
{
    std::vector<std::pair<uint64_t, uint64_t>> out;
    if (limit >= 1)
        pattern_dfs(0, 1, 64, 1, limit, out);
    std::sort(out.begin(), out.end());
    return out;
}

RecordSeries scan_records(RecordKind kind, uint64_t limit, RecordOptions options)
{
    if (limit < 1)
        throw std::invalid_argument("record scan limit must be >= 1");
    RecordSeries series;
    series.kind = kind;
    series.limit = limit;

    if (kind == RecordKind::JRecords) {
        if (options.generate)
            throw std::invalid_argument("j-records have no candidate generator; scan exhaustively");
        MemoryBudget::require(MertensPrefix::footprint_bytes(limit) + (limit + 1) * 4, "j-record scan");
        const auto mertens = MertensPrefix::build(limit);
        const auto spf = smallest_prime_factors(limit);
        auto found = champions(limit, options.threads, [&](uint64_t x) {
            const auto f = factorize_with(spf, x);
            return j_of(x, f, mertens);
        });
        for (const auto& c : found) {
            RecordPoint p;
            p.index = series.points.size() + 1;
            p.l = c.x;
            p.m = c.value;
            p.mertens = mertens.at(c.x);
            p.sigma0 = divisor_count(factorize_with(spf, c.x));
            p.q = q_sum(c.x, mertens);
            series.points.push_back(p);
        }
        return series;
    }

    std::vector<Candidate> found;
    if (options.generate) {
        i128 best = -1;
        for (auto [n, d] : exponent_pattern_candidates(limit))
            if (static_cast<i128>(d) > best) {
                best = d;
                found.push_back({n, d});
            }
    } else {
        const auto spf = smallest_prime_factors(limit);
        found = champions(limit, options.threads,
                          [&](uint64_t x) { return static_cast<i128>(divisor_count(factorize_with(spf, x))); });
    }

    const uint64_t l_max = found.back().x;
    const uint64_t shared_limit = std::min(l_max, std::max<uint64_t>(default_threshold(l_max), 1u << 20));
    const auto shared = MertensPrefix::build(shared_limit);
    for (const auto& c : found) {
        RecordPoint p;
        p.index = series.points.size() + 1;
        p.l = c.x;
        p.m = c.value;
        p.sigma0 = static_cast<uint32_t>(c.value);
        const auto table = MertensQuotientTable::build(c.x, {}, &shared);
        p.mertens = table.value();
        p.j = j_of(c.x, trial_factorize(c.x), table);
        p.q = q_sum(c.x, table);
        series.points.push_back(p);
    }
    return series;
}

std::vector<uint64_t> fig9_chain_failures(const RecordSeries& hcn)
{
    std::vector<uint64_t> failures;
    for (const auto& p : hcn.points) {
        if (p.index <= 4)
            continue;
        if (!p.q)
            throw std::invalid_argument("series lacks Q(l) values");
        const double ll = std::log(static_cast<double>(p.l));
        const double upper = ll + 0.5 * std::log(ll);
        const double lq = std::log(static_cast<double>(*p.q));
        const bool lower_ok = *p.q > static_cast<i128>(p.l);
        if (!(upper > lq && lower_ok))
            failures.push_back(p.index);
    }
    return failures;
}

// ---------------------------------------------------------------------------

std::string format_float(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

void Table::write_csv(std::ostream& out) const
{
    for (size_t i = 0; i < header.size(); ++i)
        out << (i ? "," : "") << header[i];
    out << '\n';
    for (const auto& row : rows) {
        for (size_t i = 0; i < row.size(); ++i)
            out << (i ? "," : "") << row[i];
        out << '\n';
    }
}

namespace {

double as_double(i128 v)
{
    return static_cast<double>(static_cast<long double>(v));
}

double log_m_squared(int64_t m)
{
    return m == 0 ? -1.0 : std::log(static_cast<double>(m) * static_cast<double>(m));
}

} // namespace

Table figure_series(const RecordSeries& series, int figure)
{
    const bool wants_j = figure == 2 || figure == 4 || figure == 5;
    const bool wants_hcn = figure >= 6 && figure <= 10;
    if (!wants_j && !wants_hcn)
        throw std::invalid_argument("figure " + std::to_string(figure) + " has no record dataset");
    if (wants_j != (series.kind == RecordKind::JRecords))
        throw std::invalid_argument("figure " + std::to_string(figure) + " needs a " +
                                    (wants_j ? "j-records" : "hcn") + " series");

    Table t;
    switch (figure) {
    case 2:
        t.header = {"i", "l", "l_over_logl_m", "m_over_l", "inv_logl"};
        break;
    case 4:
        t.header = {"i", "l", "log_l", "log_m", "log_M2", "log_m_over_sigma0"};
        break;
    case 5:
        t.header = {"i", "l", "abs_M_over_sqrt_l"};
        break;
    case 6:
        t.header = {"i", "l", "l_over_logl_mprime", "mprime_over_l", "inv_logl"};
        break;
    case 7:
        t.header = {"i", "l", "log_l_plus_loglog_l", "log_l", "log_mprime", "log_M2"};
        break;
    case 8:
        t.header = {"i", "l", "log_l_plus_loglog_l_minus_log_mprime"};
        break;
    case 9:
        t.header = {"i", "l", "log_l_plus_half_loglog_l", "log_q", "log_l"};
        break;
    case 10:
        t.header = {"i", "l", "log_l_plus_half_loglog_l_minus_log_q"};
        break;
    }

    for (const auto& p : series.points) {
        if (wants_hcn && p.l < 2)
            continue;
        const double l = static_cast<double>(p.l);
        const double ll = std::log(l);
        std::vector<std::string> row{std::to_string(p.index), std::to_string(p.l)};
        auto put = [&](double v) { row.push_back(format_float(v)); };
        switch (figure) {
        case 2: {
            if (p.l < 2)
                continue;
            const double m = as_double(p.m);
            put(l / (ll * m));
            put(m / l);
            put(1.0 / ll);
            break;
        }
        case 4:
            put(ll);
            put(std::log(as_double(p.m)));
            put(log_m_squared(p.mertens));
            put(std::log(as_double(p.m) / p.sigma0));
            break;
        case 5:
            put(std::abs(static_cast<double>(p.mertens)) / std::sqrt(l));
            break;
        case 6: {
            const double mp = as_double(p.j.value());
            put(l / (ll * mp));
            put(mp / l);
            put(1.0 / ll);
            break;
        }
        case 7:
            put(ll + std::log(ll));
            put(ll);
            put(std::log(as_double(p.j.value())));
            put(log_m_squared(p.mertens));
            break;
        case 8:
            put(ll + std::log(ll) - std::log(as_double(p.j.value())));
            break;
        case 9:
            put(ll + 0.5 * std::log(ll));
            put(std::log(as_double(p.q.value())));
            put(ll);
            break;
        case 10:
            put(ll + 0.5 * std::log(ll) - std::log(as_double(p.q.value())));
            break;
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

Table figure1_table(const ConjectureReport& report)
{
    if (report.series.empty() && report.checked > 0)
        throw std::invalid_argument("conjecture report was scanned without keep_series");
    Table t;
    t.header = {"x", "log_factorial", "q_sum", "psi"};
    for (const auto& s : report.series)
        t.rows.push_back({std::to_string(s.x), format_float(s.log_factorial), to_string(s.q), format_float(s.psi)});
    return t;
}

Table figure3_table(uint64_t limit)
{
    const auto mertens = MertensPrefix::build(limit);
    const auto spf = smallest_prime_factors(limit);
    Table t;
    t.header = {"x", "j", "q"};
    for (uint64_t x = 1; x <= limit; ++x)
        t.rows.push_back({std::to_string(x), to_string(j_of(x, factorize_with(spf, x), mertens)),
                          to_string(q_sum(x, mertens))});
    return t;
}

} // namespace mlab

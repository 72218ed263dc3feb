#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "mertens_lab/conjecture.hpp"
#include "mertens_lab/mertens.hpp"
#include "mertens_lab/numeric.hpp"
#include "mertens_lab/sieve.hpp"

namespace mlab {

// j(x) = sum_{d | x} M(x/d)^2. Every x/d is a quotient floor(x/d), so a
// MertensQuotientTable for x is a sufficient source.
template <MertensSource S>
i128 j_of(uint64_t x, std::span<const std::pair<uint64_t, unsigned>> factorization, const S& mertens)
{
    i128 acc = 0;
    for (uint64_t d : divisors_of(factorization)) {
        const i128 m = mertens.at(x / d);
        acc += m * m;
    }
    return acc;
}

// Factors by trial division and builds its own quotient table.
i128 j_of(uint64_t x);

enum class RecordKind { JRecords, Hcn };

std::string to_string(RecordKind kind);

struct RecordPoint {
    uint64_t index = 0; // 1-based, l_1 = 1
    uint64_t l = 0;
    i128 m = 0;         // j(l) for J records, sigma0(l) for HCN
    int64_t mertens = 0;
    uint32_t sigma0 = 0;
    std::optional<i128> j; // m'_i = j(l_i), HCN only
    std::optional<i128> q; // Q(l_i)
};

struct RecordSeries {
    RecordKind kind = RecordKind::JRecords;
    uint64_t limit = 0;
    std::vector<RecordPoint> points;
};

struct RecordOptions {
    // HCN: enumerate nonincreasing exponent patterns over the first 15 primes
    // instead of scanning every n
    bool generate = false;
    unsigned threads = 1;
};

// Champions (strictly greater than every earlier value) up to `limit`. J
// records always come from an exhaustive scan. HCN points get M(l), j(l) and
// Q(l) filled in from quotient tables, so generated lists may run past any
// sieve range.
RecordSeries scan_records(RecordKind kind, uint64_t limit, RecordOptions options = {});

// (n, sigma0(n)) for every n <= limit whose prime exponents are nonincreasing
// over consecutive primes starting at 2; sorted by n.
std::vector<std::pair<uint64_t, uint64_t>> exponent_pattern_candidates(uint64_t limit);

// Indices i > 4 where log l + log(log l)/2 > log Q(l) > log l fails.
std::vector<uint64_t> fig9_chain_failures(const RecordSeries& hcn);

// ---------------------------------------------------------------------------
// Figure datasets
// ---------------------------------------------------------------------------

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    void write_csv(std::ostream& out) const;
};

// 9 significant digits
std::string format_float(double v);

// Figures 2, 4, 5 take J records; 6..10 take HCN (from i = 2, l = 2). Rows
// where a plotted column is undefined (log l = 0 in a denominator) are left
// out; log(M(l)^2) is written as -1 when M(l) = 0.
Table figure_series(const RecordSeries& series, int figure);

// Figure 1: x, ln x!, Q(x), psi(x)
Table figure1_table(const ConjectureReport& report);
// Figure 3: x, j(x), Q(x) for x = 1..limit
Table figure3_table(uint64_t limit);

} // namespace mlab

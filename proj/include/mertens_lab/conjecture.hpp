#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "mertens_lab/floorsum.hpp"
#include "mertens_lab/mertens.hpp"
#include "mertens_lab/numeric.hpp"

namespace mlab {

// Q(x) = sum_i M(floor(x/i))^2 = sum over quotient blocks of width * M(v)^2.
template <MertensSource S>
i128 q_sum(uint64_t x, const S& mertens)
{
    i128 acc = 0;
    for_each_block(x, [&](uint64_t v, uint64_t lo, uint64_t hi) {
        const i128 m = mertens.at(v);
        acc += static_cast<i128>(hi - lo + 1) * m * m;
    });
    return acc;
}

// sum_{i<=x} ln i, compensated
double log_factorial(uint64_t x);
// x ln x - x + ln(2 pi x)/2
double stirling_log_factorial(uint64_t x);
// psi(x) = sum_{n<=x} Lambda(n), compensated
double chebyshev_psi(uint64_t x);

// Sign of ln(x!) - q and of psi(x) - q decided with directed-rounding
// multiprecision bounds; used when the double margin is inside the guard band.
int compare_log_factorial(uint64_t x, const mpz_class& q);
int compare_psi(uint64_t x, const mpz_class& q);

enum class Claim {
    Conjecture1, // ln(x!) > Q(x) > psi(x), claimed for x > 7
    SqrtBound,   // sqrt(ln(x!)) > |M(x)|, claimed for x > 1
};

struct ScanOptions {
    bool conjecture1 = true;
    bool sqrt_bound = true;
    bool keep_series = false;
    unsigned threads = 1;
    uint64_t ceiling = 5'000'000;
    // relative width of the float guard band
    double guard = 1e-7;
};

struct Violation {
    uint64_t x;
    std::string side; // "upper": ln x! > Q, "lower": Q > psi, "sqrt_bound": sqrt(ln x!) > |M|
    double lhs;
    double rhs;
};

// A point at or below a claim's lower limit, with whether the inequality held there.
struct OutOfClaim {
    uint64_t x;
    std::string side;
    double lhs;
    double rhs;
    bool holds;
};

struct SeriesPoint {
    uint64_t x;
    double log_factorial;
    i128 q;
    double psi;
    int64_t m;
};

struct ConjectureReport {
    uint64_t from = 0;
    uint64_t to = 0;
    uint64_t checked = 0;
    std::vector<Violation> violations;
    std::vector<OutOfClaim> out_of_claim;
    // minima over in-claim x; +inf when the range has none
    double min_margin_upper = std::numeric_limits<double>::infinity();
    uint64_t argmin_upper = 0;
    double min_margin_lower = std::numeric_limits<double>::infinity();
    uint64_t argmin_lower = 0;
    double min_margin_sqrt_bound = std::numeric_limits<double>::infinity();
    uint64_t argmin_sqrt_bound = 0;
    // points whose margin fell in the guard band and were decided exactly
    uint64_t exact_rechecks = 0;
    // Q(x) < M(x)^2 (impossible) or conjecture upper side held while the sqrt bound failed
    uint64_t implication_failures = 0;
    std::vector<SeriesPoint> series;

    bool passed() const { return violations.empty() && implication_failures == 0; }
};

ConjectureReport scan(uint64_t from, uint64_t to, ScanOptions options = {});
ConjectureReport scan_conjecture1(uint64_t from, uint64_t to, ScanOptions options = {});
ConjectureReport scan_m_bound(uint64_t from, uint64_t to, ScanOptions options = {});

} // namespace mlab

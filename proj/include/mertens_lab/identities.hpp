#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "json.hpp"

#include "mertens_lab/floorsum.hpp"
#include "mertens_lab/mertens.hpp"
#include "mertens_lab/sieve.hpp"

namespace mlab {

enum class CheckMode {
    ExactInteger,
    ExactRational,
    ExactInequality, // lhs >= rhs (or > for strict checks), exact arithmetic
    Float,           // |lhs - rhs| <= tol * max(1, |rhs|)
    Ratio,           // |lhs - rhs| <= band * rhs, lhs the observed ratio, rhs the target
};

std::string to_string(CheckMode mode);

struct IdentityReport {
    std::string id; // LEHMAN, LEHMAN_GEN(n=3), T1..T10, T3(k=2), T6_EXACT, PSI, PSI_EXACT, SCHWARZ, ...
    uint64_t x = 0;
    CheckMode mode = CheckMode::ExactInteger;
    Value lhs;
    Value rhs;
    // exact equality: |lhs - rhs|; inequality: lhs - rhs; float: relative error; ratio: relative deviation
    double margin = 0.0;
    bool pass = false;
};

nlohmann::json to_json(const IdentityReport& report);

enum class Theorem { T1 = 1, T2, T3, T4, T5, T6, T7, T8, T9, T10 };

Theorem parse_theorem(const std::string& text);

inline constexpr double float_tolerance = 1e-9;
inline constexpr uint64_t default_exact_cap = 300;

// zeta(2), zeta(3), zeta(4)
inline constexpr double zeta_values[] = {1.64493406684823, 1.20205690315959, 1.08232323371114};

// Sieve, Mertens prefix and summatory functions on [1, limit]. Prefix tables
// are built on first request; concurrent callers share one build.
class IdentityContext {
public:
    explicit IdentityContext(uint64_t limit, std::vector<unsigned> ks = {1, 2, 3});

    uint64_t limit() const { return limit_; }
    const SieveTable& sieve() const { return sieve_; }
    const MertensPrefix& mertens() const { return mertens_; }
    const PrefixSums& prefix(FunctionId f) const;
    const std::vector<unsigned>& ks() const { return ks_; }

private:
    uint64_t limit_;
    std::vector<unsigned> ks_;
    SieveTable sieve_;
    MertensPrefix mertens_;
    mutable std::mutex mutex_;
    mutable std::map<std::string, std::unique_ptr<PrefixSums>> prefixes_;
};

// sum_{i>=1} M(floor(x/(i n))) == 1, summed term by term
template <MertensSource S>
IdentityReport verify_lehman(uint64_t x, uint64_t n, const S& mertens)
{
    if (n < 1 || n > x)
        throw std::invalid_argument("verify_lehman needs 1 <= n <= x");
    int64_t acc = 0;
    for (uint64_t i = 1; i * n <= x; ++i)
        acc += mertens.at(x / (i * n));
    IdentityReport r;
    r.id = n == 1 ? "LEHMAN" : "LEHMAN_GEN(n=" + std::to_string(n) + ")";
    r.x = x;
    r.mode = CheckMode::ExactInteger;
    r.lhs = mpz_class(static_cast<long>(acc));
    r.rhs = mpz_class(1);
    r.margin = std::abs(static_cast<double>(acc - 1));
    r.pass = acc == 1;
    return r;
}

IdentityReport verify_lehman(uint64_t x, uint64_t n);

struct LehmanScan {
    uint64_t checked = 0;
    std::vector<std::pair<uint64_t, uint64_t>> failures; // (x, n)
};

// Every (x, n) with 1 <= n <= x <= xmax.
LehmanScan scan_lehman(uint64_t xmax, const MertensPrefix& mertens);

// k is required (1..3) for T3 and T4 and ignored otherwise.
IdentityReport verify_theorem(Theorem id, uint64_t x, unsigned k, const IdentityContext& ctx);
IdentityReport verify_theorem(Theorem id, uint64_t x, unsigned k = 0);

// sum M(floor(x/i)) log i == psi(x), float mode
IdentityReport verify_psi(uint64_t x, const IdentityContext& ctx);

// prod i^M(floor(x/i)) == lcm(1..x), exact
IdentityReport verify_psi_exact(uint64_t x, const IdentityContext& ctx, uint64_t cap = default_exact_cap);
IdentityReport verify_psi_exact(uint64_t x, uint64_t cap = default_exact_cap);

// prod i^(M(floor(x/i)) d(i)) == (x!)^2, exact
IdentityReport verify_t2_exact(uint64_t x, const IdentityContext& ctx, uint64_t cap = default_exact_cap);
IdentityReport verify_t2_exact(uint64_t x, uint64_t cap = default_exact_cap);

// T6 exponentiated: prod_{p^a<=x} p^M(floor(x/p^a)) == prod_{n<=x} n^(-mu(n)),
// both sides exact rationals
IdentityReport verify_t6_exact(uint64_t x, const IdentityContext& ctx);
IdentityReport verify_t6_exact(uint64_t x);

// Q(x) * x(x+1)(2x+1) >= 6 A(x)^2
IdentityReport verify_schwarz(uint64_t x, const IdentityContext& ctx);
IdentityReport verify_schwarz(uint64_t x);

// Ratio reports at x: WALFISZ_RATIO, JORDAN_RATIO(k), SQUAREFREE_RATIO, plus the
// two growth bounds on Q(x) (SQRT_Q_OVER_X_BOUND and SQRT_Q_OVER_SQRT_X_BOUND).
std::vector<IdentityReport> asymptotic_ratios(uint64_t x, const IdentityContext& ctx, double band = 0.01);

struct SuiteConfig {
    uint64_t xmax = 2000;
    std::vector<unsigned> ks{1, 2, 3};
    uint64_t exact_cap = default_exact_cap;
    unsigned threads = 1;
};

// T1..T10 (T3/T4 for each k), T6_EXACT, PSI and LEHMAN for every x <= xmax;
// PSI_EXACT and T2_EXACT for x <= exact_cap. Sorted by (id, x).
std::vector<IdentityReport> run_identity_suite(const SuiteConfig& config);

} // namespace mlab

#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mertens_lab/numeric.hpp"

namespace mlab {

struct SieveOptions {
    bool sigma_k = false; // also fill sigma_1..sigma_3
};

// Per-n arithmetic functions on [1, N], filled by one linear (smallest prime
// factor driven) pass. Arrays are indexed by n directly; slot 0 is unused.
//
// Footprint per entry: mu 1, liouville 1, omega 1, phi 4, spf 4, sigma0 4,
// mangoldt_base 4 bytes (19 total), plus 48 bytes when sigma_k is requested.
class SieveTable {
public:
    static constexpr uint64_t max_limit = 0xFFFFFFFFull;

    static SieveTable build(uint64_t limit, SieveOptions options = {});
    static uint64_t footprint_bytes(uint64_t limit, SieveOptions options = {});

    uint64_t limit() const { return limit_; }
    bool has_sigma_k() const { return !sigma_k_[0].empty(); }

    int mu(uint64_t n) const { return mu_[n]; }
    uint32_t phi(uint64_t n) const { return phi_[n]; }
    uint32_t spf(uint64_t n) const { return spf_[n]; }
    int liouville(uint64_t n) const { return liouville_[n]; }
    unsigned omega(uint64_t n) const { return omega_[n]; }
    uint32_t sigma0(uint64_t n) const { return sigma0_[n]; }
    // n = p^m -> p, otherwise 0
    uint32_t mangoldt_base(uint64_t n) const { return mangoldt_base_[n]; }
    i128 sigma_k(unsigned k, uint64_t n) const;

    std::span<const int8_t> mu_view() const { return mu_; }

    // (prime, exponent) pairs in increasing prime order
    std::vector<std::pair<uint64_t, unsigned>> factorize(uint64_t n) const;

private:
    uint64_t limit_ = 0;
    std::vector<int8_t> mu_;
    std::vector<int8_t> liouville_;
    std::vector<uint8_t> omega_;
    std::vector<uint32_t> phi_;
    std::vector<uint32_t> spf_;
    std::vector<uint32_t> sigma0_;
    std::vector<uint32_t> mangoldt_base_;
    std::vector<i128> sigma_k_[3];
};

// J_k(n) for n in [0, table.limit()], k in 1..3; entry 0 is 0.
std::vector<i128> jordan_table(const SieveTable& table, unsigned k);

// spf[n] for n in [0, limit]; spf[0] = spf[1] = 0.
std::vector<uint32_t> smallest_prime_factors(uint64_t limit);
std::vector<std::pair<uint64_t, unsigned>> factorize_with(std::span<const uint32_t> spf, uint64_t n);
// Trial division, for n beyond any table.
std::vector<std::pair<uint64_t, unsigned>> trial_factorize(uint64_t n);
// All divisors of a factored number, unordered.
std::vector<uint64_t> divisors_of(std::span<const std::pair<uint64_t, unsigned>> factorization);

// Plain Eratosthenes, primes <= limit.
std::vector<uint32_t> primes_upto(uint64_t limit);

// mu on [1, N] by a linear sieve keeping only mu and a composite bitmap.
std::vector<int8_t> mobius_linear(uint64_t limit);

// mu(lo..hi), inclusive, using primes up to sqrt(hi).
std::vector<int8_t> mobius_segment(uint64_t lo, uint64_t hi, std::span<const uint32_t> primes);

// Visits mu over [1, limit] in ascending blocks of `block` entries.
void for_each_mobius_block(uint64_t limit, uint64_t block,
                           const std::function<void(uint64_t lo, std::span<const int8_t>)>& visit);

// lcm(1..x) and its factorization: each prime p <= x with exponent floor(log_p x).
std::vector<std::pair<uint64_t, unsigned>> lcm_factorization(uint64_t x);
mpz_class lcm_upto(uint64_t x);

// ---------------------------------------------------------------------------
// Summatory functions
// ---------------------------------------------------------------------------

enum class Arith {
    One,             // 1
    Identity,        // n
    PowerK,          // n^k
    Mu,              // mu(n)
    AbsMu,           // mu(n)^2
    Phi,             // phi(n)
    Jordan,          // J_k(n)
    Liouville,       // lambda(n)
    SquareIndicator, // [n is a perfect square]
    TwoPowOmega,     // 2^omega(n)
    Sigma0,          // d(n)
    Sigma0Squared,   // d(n)^2
    Sigma0OfSquare,  // d(n^2)
    SigmaK,          // sigma_k(n)
    NOverPhi,        // n / phi(n)
    AbsMuOverPhi,    // mu(n)^2 / phi(n)
    Log,             // log n
    HalfSigma0Log,   // d(n) log(n) / 2
    Mangoldt,        // Lambda(n)
    MuLog,           // mu(n) log n
};

enum class ValueKind { Integer, Rational, Real };

struct FunctionId {
    Arith fn = Arith::One;
    unsigned k = 0;

    ValueKind kind() const;
    std::string name() const;
    // Accepts the names produced by name(), e.g. "phi", "sigma:2", "jordan:3".
    static FunctionId parse(const std::string& text);

    friend bool operator==(const FunctionId&, const FunctionId&) = default;
};

// Pointwise values. exact_value throws std::invalid_argument for Real kinds.
mpq_class exact_value(const SieveTable& table, FunctionId f, uint64_t n);
double real_value(const SieveTable& table, FunctionId f, uint64_t n);

// F(n) = sum_{i<=n} f(i) for n in [0, N]. Integer sums are kept in 128 bits and
// move to GMP integers if any running sum overflows; log-valued sums use
// compensated double accumulation.
class PrefixSums {
public:
    static PrefixSums build(const SieveTable& table, FunctionId f, uint64_t limit);

    FunctionId id() const { return id_; }
    ValueKind kind() const { return id_.kind(); }
    uint64_t limit() const { return limit_; }
    bool is_big() const { return !big_.empty(); }

    // Integer kind only; throws OverflowError when the table fell back to GMP.
    i128 integer(uint64_t n) const;
    mpz_class integer_big(uint64_t n) const;
    const mpq_class& rational(uint64_t n) const;
    double real(uint64_t n) const;

private:
    FunctionId id_;
    uint64_t limit_ = 0;
    std::vector<i128> ints_;
    std::vector<mpz_class> big_;
    std::vector<mpq_class> rationals_;
    std::vector<double> reals_;

    void check(uint64_t n) const;
};

} // namespace mlab

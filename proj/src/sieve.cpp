#include "mertens_lab/sieve.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace mlab {

uint64_t SieveTable::footprint_bytes(uint64_t limit, SieveOptions options)
{
    // 19 bytes of tables, 4 bytes of prime-power scratch during the build
    uint64_t per_entry = 23 + (options.sigma_k ? 48 : 0);
    return (limit + 1) * per_entry;
}

SieveTable SieveTable::build(uint64_t limit, SieveOptions options)
{
    if (limit < 1)
        throw std::invalid_argument("sieve limit must be >= 1");
    if (limit > max_limit)
        throw CapacityError("sieve limit exceeds 32-bit table range");
    MemoryBudget::require(footprint_bytes(limit, options), "sieve table");

    SieveTable t;
    t.limit_ = limit;
    const size_t size = limit + 1;
    t.mu_.assign(size, 0);
    t.liouville_.assign(size, 0);
    t.omega_.assign(size, 0);
    t.phi_.assign(size, 0);
    t.spf_.assign(size, 0);
    t.sigma0_.assign(size, 0);
    t.mangoldt_base_.assign(size, 0);
    if (options.sigma_k)
        for (auto& s : t.sigma_k_)
            s.assign(size, 0);

    // prime_power[n] = p^e, the full power of spf(n) dividing n
    std::vector<uint32_t> prime_power(size, 0);
    std::vector<uint32_t> primes;
    for (uint64_t i = 2; i <= limit; ++i) {
        if (t.spf_[i] == 0) {
            t.spf_[i] = static_cast<uint32_t>(i);
            prime_power[i] = static_cast<uint32_t>(i);
            primes.push_back(static_cast<uint32_t>(i));
        }
        const uint32_t si = t.spf_[i];
        for (uint32_t p : primes) {
            uint64_t ip = i * p;
            if (p > si || ip > limit)
                break;
            t.spf_[ip] = p;
            prime_power[ip] = (p == si) ? prime_power[i] * p : p;
        }
    }

    t.mu_[1] = 1;
    t.liouville_[1] = 1;
    t.phi_[1] = 1;
    t.sigma0_[1] = 1;
    if (options.sigma_k)
        for (auto& s : t.sigma_k_)
            s[1] = 1;

    for (uint64_t n = 2; n <= limit; ++n) {
        const uint64_t p = t.spf_[n];
        const uint64_t q = prime_power[n];
        const uint64_t m = n / q;
        if (m == 1) {
            const uint64_t prev = n / p;
            t.omega_[n] = 1;
            t.mangoldt_base_[n] = static_cast<uint32_t>(p);
            t.liouville_[n] = static_cast<int8_t>(-t.liouville_[prev]);
            if (prev == 1) {
                t.mu_[n] = -1;
                t.phi_[n] = static_cast<uint32_t>(p - 1);
                t.sigma0_[n] = 2;
            } else {
                t.mu_[n] = 0;
                t.phi_[n] = static_cast<uint32_t>(t.phi_[prev] * p);
                t.sigma0_[n] = t.sigma0_[prev] + 1;
            }
            if (options.sigma_k) {
                // sigma_k(p^e) = sigma_k(p^(e-1)) + p^(ek)
                i128 nk = 1;
                for (unsigned k = 1; k <= 3; ++k) {
                    nk *= static_cast<i128>(n);
                    t.sigma_k_[k - 1][n] = t.sigma_k_[k - 1][prev] + nk;
                }
            }
        } else {
            t.omega_[n] = static_cast<uint8_t>(t.omega_[m] + 1);
            t.mu_[n] = static_cast<int8_t>(t.mu_[q] * t.mu_[m]);
            t.liouville_[n] = static_cast<int8_t>(t.liouville_[q] * t.liouville_[m]);
            t.phi_[n] = t.phi_[q] * t.phi_[m];
            t.sigma0_[n] = t.sigma0_[q] * t.sigma0_[m];
            if (options.sigma_k)
                for (auto& s : t.sigma_k_)
                    s[n] = s[q] * s[m];
        }
    }
    return t;
}

i128 SieveTable::sigma_k(unsigned k, uint64_t n) const
{
    if (k < 1 || k > 3 || !has_sigma_k())
        throw std::invalid_argument("sigma_k table not built for k=" + std::to_string(k));
    return sigma_k_[k - 1][n];
}

std::vector<std::pair<uint64_t, unsigned>> SieveTable::factorize(uint64_t n) const
{
    std::vector<std::pair<uint64_t, unsigned>> out;
    while (n > 1) {
        uint64_t p = spf_[n];
        unsigned e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        out.emplace_back(p, e);
    }
    return out;
}

std::vector<i128> jordan_table(const SieveTable& table, unsigned k)
{
    if (k < 1 || k > 3)
        throw std::invalid_argument("jordan_table supports k in 1..3");
    std::vector<i128> out(table.limit() + 1, 0);
    for (uint64_t n = 1; n <= table.limit(); ++n) {
        i128 j = 1;
        for (auto [p, e] : table.factorize(n)) {
            i128 pk = checked_pow(static_cast<i128>(p), k);
            i128 lower = checked_pow(pk, e - 1);
            j = checked_mul(j, checked_mul(lower, pk) - lower);
        }
        out[n] = j;
    }
    return out;
}

std::vector<uint32_t> smallest_prime_factors(uint64_t limit)
{
    if (limit > SieveTable::max_limit)
        throw CapacityError("spf table limit exceeds 32-bit range");
    MemoryBudget::require((limit + 1) * sizeof(uint32_t), "spf table");
    std::vector<uint32_t> spf(limit + 1, 0);
    std::vector<uint32_t> primes;
    for (uint64_t i = 2; i <= limit; ++i) {
        if (spf[i] == 0) {
            spf[i] = static_cast<uint32_t>(i);
            primes.push_back(static_cast<uint32_t>(i));
        }
        for (uint32_t p : primes) {
            uint64_t ip = i * p;
            if (p > spf[i] || ip > limit)
                break;
            spf[ip] = p;
        }
    }
    return spf;
}

std::vector<std::pair<uint64_t, unsigned>> factorize_with(std::span<const uint32_t> spf, uint64_t n)
{
    std::vector<std::pair<uint64_t, unsigned>> out;
    while (n > 1) {
        uint64_t p = spf[n];
        unsigned e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        out.emplace_back(p, e);
    }
    return out;
}

std::vector<std::pair<uint64_t, unsigned>> trial_factorize(uint64_t n)
{
    std::vector<std::pair<uint64_t, unsigned>> out;
    for (uint64_t p = 2; p <= n / p; p += (p == 2 ? 1 : 2)) {
        if (n % p != 0)
            continue;
        unsigned e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        out.emplace_back(p, e);
    }
    if (n > 1)
        out.emplace_back(n, 1);
    return out;
}

std::vector<uint64_t> divisors_of(std::span<const std::pair<uint64_t, unsigned>> factorization)
{
    std::vector<uint64_t> divs{1};
    for (auto [p, e] : factorization) {
        const size_t base = divs.size();
        uint64_t pk = 1;
        for (unsigned i = 1; i <= e; ++i) {
            pk *= p;
            for (size_t j = 0; j < base; ++j)
                divs.push_back(divs[j] * pk);
        }
    }
    return divs;
}

std::vector<uint32_t> primes_upto(uint64_t limit)
{
    std::vector<uint32_t> primes;
    if (limit < 2)
        return primes;
    std::vector<bool> composite(limit + 1, false);
    for (uint64_t i = 2; i <= limit; ++i) {
        if (composite[i])
            continue;
        primes.push_back(static_cast<uint32_t>(i));
        for (uint64_t j = i * i; j <= limit; j += i)
            composite[j] = true;
    }
    return primes;
}

std::vector<int8_t> mobius_linear(uint64_t limit)
{
    MemoryBudget::require((limit + 1) * 2, "mobius sieve");
    std::vector<int8_t> mu(limit + 1, 0);
    std::vector<bool> composite(limit + 1, false);
    std::vector<uint32_t> primes;
    if (limit >= 1)
        mu[1] = 1;
    for (uint64_t i = 2; i <= limit; ++i) {
        if (!composite[i]) {
            primes.push_back(static_cast<uint32_t>(i));
            mu[i] = -1;
        }
        for (uint32_t p : primes) {
            uint64_t ip = i * p;
            if (ip > limit)
                break;
            composite[ip] = true;
            if (i % p == 0) {
                mu[ip] = 0;
                break;
            }
            mu[ip] = static_cast<int8_t>(-mu[i]);
        }
    }
    return mu;
}

std::vector<int8_t> mobius_segment(uint64_t lo, uint64_t hi, std::span<const uint32_t> primes)
{
    if (lo < 1 || hi < lo)
        throw std::invalid_argument("mobius_segment needs 1 <= lo <= hi");
    const uint64_t len = hi - lo + 1;
    std::vector<int8_t> mu(len, 1);
    // product of the distinct primes found so far; any leftover factor is one prime > sqrt(hi)
    std::vector<uint64_t> radical(len, 1);
    for (uint64_t p : primes) {
        if (p * p > hi)
            break;
        uint64_t first = (lo + p - 1) / p * p;
        for (uint64_t m = first; m <= hi; m += p) {
            mu[m - lo] = static_cast<int8_t>(-mu[m - lo]);
            radical[m - lo] *= p;
        }
        uint64_t p2 = p * p;
        for (uint64_t m = (lo + p2 - 1) / p2 * p2; m <= hi; m += p2)
            mu[m - lo] = 0;
    }
    for (uint64_t i = 0; i < len; ++i) {
        if (mu[i] == 0)
            continue;
        uint64_t n = lo + i;
        if (radical[i] != n)
            mu[i] = static_cast<int8_t>(-mu[i]);
    }
    return mu;
}

void for_each_mobius_block(uint64_t limit, uint64_t block,
                           const std::function<void(uint64_t lo, std::span<const int8_t>)>& visit)
{
    if (block == 0)
        throw std::invalid_argument("block size must be positive");
    auto primes = primes_upto(isqrt(limit));
    for (uint64_t lo = 1; lo <= limit; lo += block) {
        uint64_t hi = std::min(limit, lo + block - 1);
        auto mu = mobius_segment(lo, hi, primes);
        visit(lo, mu);
    }
}

std::vector<std::pair<uint64_t, unsigned>> lcm_factorization(uint64_t x)
{
    std::vector<std::pair<uint64_t, unsigned>> out;
    for (uint64_t p : primes_upto(x)) {
        unsigned e = 0;
        for (uint64_t q = p; q <= x; q *= p) {
            ++e;
            if (q > x / p)
                break;
        }
        out.emplace_back(p, e);
    }
    return out;
}

mpz_class lcm_upto(uint64_t x)
{
    mpz_class r = 1;
    for (auto [p, e] : lcm_factorization(x)) {
        mpz_class pe;
        mpz_ui_pow_ui(pe.get_mpz_t(), p, e);
        r *= pe;
    }
    return r;
}

// ---------------------------------------------------------------------------

namespace {

struct ArithName {
    Arith fn;
    const char* name;
    bool takes_k;
};

constexpr std::array<ArithName, 20> arith_names{{
    {Arith::One, "one", false},
    {Arith::Identity, "identity", false},
    {Arith::PowerK, "power", true},
    {Arith::Mu, "mu", false},
    {Arith::AbsMu, "abs_mu", false},
    {Arith::Phi, "phi", false},
    {Arith::Jordan, "jordan", true},
    {Arith::Liouville, "liouville", false},
    {Arith::SquareIndicator, "square_indicator", false},
    {Arith::TwoPowOmega, "two_pow_omega", false},
    {Arith::Sigma0, "sigma0", false},
    {Arith::Sigma0Squared, "sigma0_squared", false},
    {Arith::Sigma0OfSquare, "sigma0_of_square", false},
    {Arith::SigmaK, "sigma", true},
    {Arith::NOverPhi, "n_over_phi", false},
    {Arith::AbsMuOverPhi, "abs_mu_over_phi", false},
    {Arith::Log, "log", false},
    {Arith::HalfSigma0Log, "half_sigma0_log", false},
    {Arith::Mangoldt, "mangoldt", false},
    {Arith::MuLog, "mu_log", false},
}};

const ArithName& lookup(Arith fn)
{
    for (const auto& a : arith_names)
        if (a.fn == fn)
            return a;
    throw std::invalid_argument("unknown arithmetic function");
}

i128 integer_value(const SieveTable& t, FunctionId f, uint64_t n)
{
    switch (f.fn) {
    case Arith::One:
        return 1;
    case Arith::Identity:
        return static_cast<i128>(n);
    case Arith::PowerK:
        return checked_pow(static_cast<i128>(n), f.k);
    case Arith::Mu:
        return t.mu(n);
    case Arith::AbsMu:
        return t.mu(n) != 0 ? 1 : 0;
    case Arith::Phi:
        return t.phi(n);
    case Arith::Liouville:
        return t.liouville(n);
    case Arith::SquareIndicator: {
        uint64_t r = isqrt(n);
        return r * r == n ? 1 : 0;
    }
    case Arith::TwoPowOmega:
        return static_cast<i128>(1) << t.omega(n);
    case Arith::Sigma0:
        return t.sigma0(n);
    case Arith::Sigma0Squared:
        return static_cast<i128>(t.sigma0(n)) * t.sigma0(n);
    case Arith::Sigma0OfSquare: {
        i128 d = 1;
        for (auto [p, e] : t.factorize(n))
            d *= 2 * e + 1;
        return d;
    }
    case Arith::Jordan: {
        i128 j = 1;
        for (auto [p, e] : t.factorize(n)) {
            i128 pk = checked_pow(static_cast<i128>(p), f.k);
            i128 lower = checked_pow(pk, e - 1);
            j = checked_mul(j, checked_mul(lower, pk) - lower);
        }
        return j;
    }
    case Arith::SigmaK: {
        if (t.has_sigma_k())
            return t.sigma_k(f.k, n);
        i128 s = 1;
        for (auto [p, e] : t.factorize(n)) {
            i128 pk = checked_pow(static_cast<i128>(p), f.k);
            i128 term = 1, acc = 1;
            for (unsigned i = 0; i < e; ++i) {
                term = checked_mul(term, pk);
                acc = checked_add(acc, term);
            }
            s = checked_mul(s, acc);
        }
        return s;
    }
    default:
        throw std::invalid_argument(f.name() + " is not integer valued");
    }
}

} // namespace

ValueKind FunctionId::kind() const
{
    switch (fn) {
    case Arith::NOverPhi:
    case Arith::AbsMuOverPhi:
        return ValueKind::Rational;
    case Arith::Log:
    case Arith::HalfSigma0Log:
    case Arith::Mangoldt:
    case Arith::MuLog:
        return ValueKind::Real;
    default:
        return ValueKind::Integer;
    }
}

std::string FunctionId::name() const
{
    const auto& a = lookup(fn);
    std::string s = a.name;
    if (a.takes_k)
        s += ":" + std::to_string(k);
    return s;
}

FunctionId FunctionId::parse(const std::string& text)
{
    std::string base = text;
    unsigned k = 0;
    if (auto colon = text.find(':'); colon != std::string::npos) {
        base = text.substr(0, colon);
        try {
            k = static_cast<unsigned>(std::stoul(text.substr(colon + 1)));
        } catch (const std::exception&) {
            throw std::invalid_argument("bad function parameter in '" + text + "'");
        }
    }
    for (const auto& a : arith_names) {
        if (base != a.name)
            continue;
        if (a.takes_k && (k < 1 || k > 3))
            throw std::invalid_argument("function '" + base + "' needs k in 1..3");
        if (!a.takes_k && k != 0)
            throw std::invalid_argument("function '" + base + "' takes no parameter");
        return FunctionId{a.fn, k};
    }
    throw std::invalid_argument("unknown function id '" + text + "'");
}

mpq_class exact_value(const SieveTable& t, FunctionId f, uint64_t n)
{
    switch (f.fn) {
    case Arith::NOverPhi: {
        mpq_class r(mpz_class(static_cast<unsigned long>(n)), mpz_class(static_cast<unsigned long>(t.phi(n))));
        r.canonicalize();
        return r;
    }
    case Arith::AbsMuOverPhi: {
        mpq_class r(t.mu(n) != 0 ? 1 : 0, static_cast<unsigned long>(t.phi(n)));
        r.canonicalize();
        return r;
    }
    default:
        return mpq_class(to_mpz(integer_value(t, f, n)));
    }
}

double real_value(const SieveTable& t, FunctionId f, uint64_t n)
{
    switch (f.fn) {
    case Arith::Log:
        return std::log(static_cast<double>(n));
    case Arith::HalfSigma0Log:
        return 0.5 * t.sigma0(n) * std::log(static_cast<double>(n));
    case Arith::Mangoldt:
        return t.mangoldt_base(n) ? std::log(static_cast<double>(t.mangoldt_base(n))) : 0.0;
    case Arith::MuLog:
        return t.mu(n) * std::log(static_cast<double>(n));
    case Arith::NOverPhi:
    case Arith::AbsMuOverPhi:
        return exact_value(t, f, n).get_d();
    default:
        return static_cast<double>(integer_value(t, f, n));
    }
}

PrefixSums PrefixSums::build(const SieveTable& table, FunctionId f, uint64_t limit)
{
    if (limit > table.limit())
        throw std::invalid_argument("prefix limit " + std::to_string(limit) + " exceeds sieve limit " +
                                    std::to_string(table.limit()));
    PrefixSums out;
    out.id_ = f;
    out.limit_ = limit;
    switch (f.kind()) {
    case ValueKind::Integer: {
        MemoryBudget::require((limit + 1) * sizeof(i128), "prefix sums");
        out.ints_.assign(limit + 1, 0);
        for (uint64_t n = 1; n <= limit; ++n) {
            i128 v = integer_value(table, f, n);
            i128 s;
            if (__builtin_add_overflow(out.ints_[n - 1], v, &s)) {
                out.big_.reserve(limit + 1);
                for (uint64_t i = 0; i < n; ++i)
                    out.big_.push_back(to_mpz(out.ints_[i]));
                for (uint64_t i = n; i <= limit; ++i)
                    out.big_.push_back(out.big_.back() + to_mpz(integer_value(table, f, i)));
                out.ints_.clear();
                break;
            }
            out.ints_[n] = s;
        }
        break;
    }
    case ValueKind::Rational: {
        out.rationals_.assign(limit + 1, mpq_class(0));
        for (uint64_t n = 1; n <= limit; ++n)
            out.rationals_[n] = out.rationals_[n - 1] + exact_value(table, f, n);
        break;
    }
    case ValueKind::Real: {
        out.reals_.assign(limit + 1, 0.0);
        CompensatedSum acc;
        for (uint64_t n = 1; n <= limit; ++n) {
            acc.add(real_value(table, f, n));
            out.reals_[n] = acc.value();
        }
        break;
    }
    }
    return out;
}

void PrefixSums::check(uint64_t n) const
{
    if (n > limit_)
        throw std::out_of_range("prefix sum index " + std::to_string(n) + " beyond limit " +
                                std::to_string(limit_));
}

i128 PrefixSums::integer(uint64_t n) const
{
    check(n);
    if (kind() != ValueKind::Integer)
        throw std::logic_error(id_.name() + " is not integer valued");
    if (is_big())
        throw OverflowError(id_.name() + " prefix exceeds 128 bits");
    return ints_[n];
}

mpz_class PrefixSums::integer_big(uint64_t n) const
{
    check(n);
    if (kind() != ValueKind::Integer)
        throw std::logic_error(id_.name() + " is not integer valued");
    return is_big() ? big_[n] : to_mpz(ints_[n]);
}

const mpq_class& PrefixSums::rational(uint64_t n) const
{
    check(n);
    if (kind() != ValueKind::Rational)
        throw std::logic_error(id_.name() + " is not rational valued");
    return rationals_[n];
}

double PrefixSums::real(uint64_t n) const
{
    check(n);
    switch (kind()) {
    case ValueKind::Real:
        return reals_[n];
    case ValueKind::Rational:
        return rationals_[n].get_d();
    case ValueKind::Integer:
        return is_big() ? big_[n].get_d() : static_cast<double>(ints_[n]);
    }
    return 0.0;
}

} // namespace mlab

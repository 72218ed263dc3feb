#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace mlab {

using i128 = __int128;
using u128 = unsigned __int128;

struct OverflowError : std::overflow_error {
    using std::overflow_error::overflow_error;
};

struct CapacityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string to_string(i128 v);
mpz_class to_mpz(i128 v);

// Throws OverflowError when the result does not fit.
inline i128 checked_add(i128 a, i128 b)
{
    i128 r;
    if (__builtin_add_overflow(a, b, &r))
        throw OverflowError("128-bit addition overflow");
    return r;
}

inline i128 checked_mul(i128 a, i128 b)
{
    i128 r;
    if (__builtin_mul_overflow(a, b, &r))
        throw OverflowError("128-bit multiplication overflow");
    return r;
}

inline i128 checked_pow(i128 base, unsigned exp)
{
    i128 r = 1;
    for (unsigned e = 0; e < exp; ++e)
        r = checked_mul(r, base);
    return r;
}

// floor(sqrt(n)) exactly
inline uint64_t isqrt(uint64_t n)
{
    uint64_t r = static_cast<uint64_t>(__builtin_sqrtl(static_cast<long double>(n)));
    while (r > 0 && r * r > n)
        --r;
    while ((r + 1) * (r + 1) <= n)
        ++r;
    return r;
}

// Neumaier compensated summation.
class CompensatedSum {
public:
    void add(double v)
    {
        double t = sum_ + v;
        if (__builtin_fabs(sum_) >= __builtin_fabs(v))
            comp_ += (sum_ - t) + v;
        else
            comp_ += (v - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

// Byte ceiling applied to every large table allocation. Defaults to 8 GiB;
// MERTENS_LAB_MEM_GB overrides it at first use.
class MemoryBudget {
public:
    static uint64_t ceiling_bytes();
    static void set_ceiling_bytes(uint64_t bytes);
    // Throws CapacityError when `bytes` exceeds the ceiling.
    static void require(uint64_t bytes, const std::string& what);
};

} // namespace mlab

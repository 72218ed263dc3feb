#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "mertens_lab/mertens.hpp"
#include "mertens_lab/numeric.hpp"
#include "mertens_lab/sieve.hpp"

namespace mlab {

// floor(x/i) == value for every i in [lo, hi]
struct QuotientBlock {
    uint64_t value;
    uint64_t lo;
    uint64_t hi;

    uint64_t width() const { return hi - lo + 1; }
    friend bool operator==(const QuotientBlock&, const QuotientBlock&) = default;
};

// Calls visit(value, lo, hi) for the maximal constant-quotient blocks of [1, x],
// in ascending i (so descending value). At most 2*floor(sqrt(x)) calls.
template <class Visit>
void for_each_block(uint64_t x, Visit&& visit)
{
    for (uint64_t lo = 1; lo <= x;) {
        const uint64_t v = x / lo;
        const uint64_t hi = x / v;
        visit(v, lo, hi);
        lo = hi + 1;
    }
}

std::vector<QuotientBlock> blocks(uint64_t x);

// Exact integer, exact rational, or float.
using Value = std::variant<mpz_class, mpq_class, double>;

std::string format_value(const Value& v);
double to_double(const Value& v);

// sum_{i=1..x} M(floor(x/i)) f(i), evaluated one block at a time as
// M(v) * (F(hi) - F(lo-1)). Integer sums run in checked 128-bit arithmetic and
// are redone with GMP on overflow.
template <MertensSource S>
Value weighted_msum(uint64_t x, const PrefixSums& prefix, const S& mertens)
{
    if (prefix.limit() < x)
        throw std::out_of_range("prefix sums cover [1," + std::to_string(prefix.limit()) + "], need [1," +
                                std::to_string(x) + "]");
    switch (prefix.kind()) {
    case ValueKind::Integer: {
        if (!prefix.is_big()) {
            try {
                i128 acc = 0;
                for_each_block(x, [&](uint64_t v, uint64_t lo, uint64_t hi) {
                    const i128 m = mertens.at(v);
                    if (m != 0)
                        acc = checked_add(acc, checked_mul(m, prefix.integer(hi) - prefix.integer(lo - 1)));
                });
                return to_mpz(acc);
            } catch (const OverflowError&) {
            }
        }
        mpz_class acc = 0;
        for_each_block(x, [&](uint64_t v, uint64_t lo, uint64_t hi) {
            const auto m = static_cast<long>(mertens.at(v));
            if (m != 0)
                acc += m * (prefix.integer_big(hi) - prefix.integer_big(lo - 1));
        });
        return acc;
    }
    case ValueKind::Rational: {
        mpq_class acc = 0;
        for_each_block(x, [&](uint64_t v, uint64_t lo, uint64_t hi) {
            const auto m = static_cast<long>(mertens.at(v));
            if (m != 0)
                acc += m * (prefix.rational(hi) - prefix.rational(lo - 1));
        });
        return acc;
    }
    case ValueKind::Real: {
        CompensatedSum acc;
        for_each_block(x, [&](uint64_t v, uint64_t lo, uint64_t hi) {
            const auto m = mertens.at(v);
            if (m != 0)
                acc.add(static_cast<double>(m) * (prefix.real(hi) - prefix.real(lo - 1)));
        });
        return acc.value();
    }
    }
    throw std::logic_error("unreachable");
}

} // namespace mlab

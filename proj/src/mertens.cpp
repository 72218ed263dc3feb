#include "mertens_lab/mertens.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "mertens_lab/numeric.hpp"
#include "mertens_lab/sieve.hpp"

namespace mlab {

uint64_t MertensPrefix::footprint_bytes(uint64_t limit)
{
    return (limit + 1) * sizeof(int32_t);
}

MertensPrefix MertensPrefix::build(uint64_t limit, SieveSchedule schedule)
{
    if (limit < 1)
        throw std::invalid_argument("Mertens prefix limit must be >= 1");
    const bool segmented = limit > schedule.segment_threshold;
    MemoryBudget::require(footprint_bytes(limit) + (segmented ? schedule.block * 9 : 2 * (limit + 1)),
                          "Mertens prefix");

    auto values = std::make_shared<std::vector<int32_t>>(limit + 1, 0);
    auto& m = *values;
    if (segmented) {
        int64_t running = 0;
        for_each_mobius_block(limit, schedule.block, [&](uint64_t lo, std::span<const int8_t> mu) {
            for (size_t i = 0; i < mu.size(); ++i) {
                running += mu[i];
                m[lo + i] = static_cast<int32_t>(running);
            }
        });
    } else {
        auto mu = mobius_linear(limit);
        for (uint64_t n = 1; n <= limit; ++n)
            m[n] = m[n - 1] + mu[n];
    }

    MertensPrefix out;
    out.values_ = std::move(values);
    return out;
}

MertensPrefix mertens_sieved(uint64_t limit, SieveSchedule schedule)
{
    return MertensPrefix::build(limit, schedule);
}

uint64_t default_threshold(uint64_t x)
{
    auto b = static_cast<uint64_t>(std::ceil(std::pow(static_cast<long double>(x), 2.0L / 3.0L)));
    return std::max<uint64_t>(b, 1);
}

MertensQuotientTable MertensQuotientTable::build(uint64_t x, QuotientOptions options, const MertensPrefix* shared)
{
    if (x < 1)
        throw std::invalid_argument("mertens_quotients needs x >= 1");

    MertensQuotientTable t;
    t.x_ = x;
    uint64_t b = options.threshold ? options.threshold : default_threshold(x);
    b = std::min(b, x);
    if (shared && shared->limit() >= b) {
        b = std::min(shared->limit(), x);
        t.small_ = *shared;
    } else {
        t.small_ = MertensPrefix::build(b, options.schedule);
    }
    t.threshold_ = b;

    const uint64_t k_max = x / (b + 1);
    MemoryBudget::require((k_max + 1) * sizeof(int64_t), "Mertens quotient memo");
    t.large_.assign(k_max + 1, 0);
    const auto small = t.small_.values();

    for (uint64_t k = k_max; k >= 1; --k) {
        const uint64_t v = x / k;
        int64_t acc = 1;
        for (uint64_t d = 2; d <= v;) {
            const uint64_t q = v / d;
            const uint64_t hi = v / q;
            const int64_t m = q <= b ? small[q] : t.large_[x / q];
            acc -= static_cast<int64_t>(hi - d + 1) * m;
            d = hi + 1;
        }
        t.large_[k] = acc;
    }
    return t;
}

int64_t MertensQuotientTable::at(uint64_t v) const
{
    if (v == 0)
        return 0;
    if (v <= threshold_)
        return small_.at(v);
    const uint64_t k = x_ / v;
    if (v > x_ || x_ / k != v)
        throw std::invalid_argument(std::to_string(v) + " is not a quotient of " + std::to_string(x_));
    return large_[k];
}

int64_t MertensQuotientTable::at_index(uint64_t k) const
{
    if (k == 0)
        throw std::invalid_argument("quotient index must be >= 1");
    const uint64_t v = x_ / k;
    if (v <= threshold_)
        return small_.at(v);
    return large_[k];
}

int64_t mertens_at(uint64_t x, QuotientOptions options)
{
    return MertensQuotientTable::build(x, options).value();
}

} // namespace mlab

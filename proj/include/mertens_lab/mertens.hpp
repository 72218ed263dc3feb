#pragma once

#include <concepts>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace mlab {

// Anything that can report M(v) for the arguments a computation will ask for.
template <class S>
concept MertensSource = requires(const S& s, uint64_t v) {
    { s.at(v) } -> std::convertible_to<int64_t>;
};

struct SieveSchedule {
    // mu is sieved in segments above this limit
    uint64_t segment_threshold = 100'000'000;
    uint64_t block = uint64_t(1) << 22;
};

// M(0..N) from a mu sieve, M(0) = 0. Copies share storage.
class MertensPrefix {
public:
    MertensPrefix() = default;
    static MertensPrefix build(uint64_t limit, SieveSchedule schedule = {});
    static uint64_t footprint_bytes(uint64_t limit);

    uint64_t limit() const { return values_ ? values_->size() - 1 : 0; }
    int64_t at(uint64_t v) const { return (*values_)[v]; }
    std::span<const int32_t> values() const { return *values_; }

private:
    std::shared_ptr<const std::vector<int32_t>> values_;
};

// M(1..N) by sieving.
MertensPrefix mertens_sieved(uint64_t limit, SieveSchedule schedule = {});

struct QuotientOptions {
    // 0 picks ceil(x^(2/3))
    uint64_t threshold = 0;
    SieveSchedule schedule{};
};

uint64_t default_threshold(uint64_t x);

// M at every distinct floor(x/k). Values up to the threshold B come from a
// sieved prefix; M(floor(x/k)) > B is filled for k = K..1 (K = floor(x/(B+1)))
// from M(v) = 1 - sum_{d=2..v} M(floor(v/d)), grouping d by equal quotient.
// Every inner quotient floor(v/d) is itself floor(x/(kd)), so the memo is keyed
// by the index floor(x/q) rather than by q.
class MertensQuotientTable {
public:
    // `shared` may supply a prefix reaching at least the threshold; it is then
    // used as-is (its whole length becomes the threshold, capped at x).
    static MertensQuotientTable build(uint64_t x, QuotientOptions options = {},
                                      const MertensPrefix* shared = nullptr);

    uint64_t x() const { return x_; }
    uint64_t threshold() const { return threshold_; }
    // Number of memoized large quotients.
    uint64_t large_count() const { return large_.size() - 1; }

    // v must be 0, at most the threshold, or some floor(x/k); throws
    // std::invalid_argument otherwise.
    int64_t at(uint64_t v) const;
    // M(floor(x/k))
    int64_t at_index(uint64_t k) const;
    int64_t value() const { return at_index(1); }

private:
    uint64_t x_ = 0;
    uint64_t threshold_ = 0;
    MertensPrefix small_;
    std::vector<int64_t> large_;
};

int64_t mertens_at(uint64_t x, QuotientOptions options = {});

} // namespace mlab

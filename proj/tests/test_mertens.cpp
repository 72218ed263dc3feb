#include "doctest.h"

#include <random>

#include "mertens_lab/mertens.hpp"
#include "mertens_lab/numeric.hpp"
#include "oracles.hpp"

using namespace mlab;

TEST_CASE("sieved prefix on [1,12]")
{
    const auto m = mertens_sieved(12);
    const int64_t expected[] = {1, 0, -1, -1, -2, -1, -2, -2, -2, -1, -2, -2};
    for (uint64_t x = 1; x <= 12; ++x)
        CHECK(m.at(x) == expected[x - 1]);
    CHECK(mertens_sieved(1).at(1) == 1);
}

TEST_CASE("sieved prefix matches the mu oracle")
{
    const auto m = MertensPrefix::build(20'000);
    const auto o = oracle::mertens_table(20'000);
    for (uint64_t x = 0; x <= 20'000; ++x)
        REQUIRE(m.at(x) == o[x]);
}

TEST_CASE("segmented schedule gives the same prefix")
{
    const uint64_t n = 3'000'000;
    const auto plain = MertensPrefix::build(n);
    const auto segmented = MertensPrefix::build(n, {.segment_threshold = 1, .block = 100'003});
    for (uint64_t x = 0; x <= n; ++x)
        REQUIRE(plain.at(x) == segmented.at(x));
}

TEST_CASE("quotient table at 12")
{
    const auto t = MertensQuotientTable::build(12);
    const int64_t expected[] = {-2, -1, -1, -1, 0, 0, 1, 1, 1, 1, 1, 1};
    int64_t sum = 0;
    for (uint64_t j = 1; j <= 12; ++j) {
        CHECK(t.at_index(j) == expected[j - 1]);
        CHECK(t.at(12 / j) == expected[j - 1]);
        sum += t.at_index(j);
    }
    CHECK(sum == 1);
    const auto sparse = MertensQuotientTable::build(1000, {.threshold = 10});
    CHECK(sparse.at(500) == mertens_at(500));
    CHECK_THROWS_AS(sparse.at(501), std::invalid_argument);
}

TEST_CASE("mertens_at small values")
{
    CHECK(mertens_at(1) == 1);
    CHECK(mertens_at(5) == -2);
}

TEST_CASE("mertens_at at powers of ten")
{
    // published values of M(10^k)
    const int64_t expected[] = {1, -1, 1, 2, -23, -48, 212, 1037, 1928, -222, -33722};
    uint64_t x = 1;
    for (int64_t v : expected) {
        CAPTURE(x);
        CHECK(mertens_at(x) == v);
        x *= 10;
    }
    CHECK(mertens_at(1'000'000) == MertensPrefix::build(1'000'000).at(1'000'000));
}

TEST_CASE("mertens_at against the sieve at seeded random points")
{
    const uint64_t n = 5'000'000;
    const auto prefix = MertensPrefix::build(n);
    std::mt19937_64 rng(0);
    std::uniform_int_distribution<uint64_t> pick(1, n);
    for (int i = 0; i < 200; ++i) {
        const uint64_t x = pick(rng);
        CAPTURE(x);
        REQUIRE(mertens_at(x) == prefix.at(x));
    }
}

TEST_CASE("threshold choice does not change the value")
{
    const uint64_t x = 123'456'789;
    const int64_t reference = mertens_at(x);
    for (uint64_t b : {1000ull, 50'000ull, 400'000ull, 10'000'000ull})
        CHECK(mertens_at(x, {.threshold = b}) == reference);
}

TEST_CASE("every stored quotient satisfies Lehman's identity")
{
    const uint64_t x = 10'000'000;
    const auto t = MertensQuotientTable::build(x, {.threshold = 20'000});
    for (uint64_t k = 1; k <= 60; ++k) {
        const uint64_t v = x / k;
        int64_t s = 0;
        for (uint64_t lo = 1; lo <= v;) {
            const uint64_t q = v / lo, hi = v / q;
            s += static_cast<int64_t>(hi - lo + 1) * t.at(q);
            lo = hi + 1;
        }
        REQUIRE(s == 1);
    }
}

TEST_CASE("shared prefix is reused")
{
    const auto shared = MertensPrefix::build(100'000);
    for (uint64_t x : {1ull, 12ull, 99'999ull, 1'000'000ull, 27'000'000ull}) {
        const auto t = MertensQuotientTable::build(x, {}, &shared);
        CHECK(t.value() == mertens_at(x));
    }
}

TEST_CASE("memory ceiling is enforced")
{
    const uint64_t old = MemoryBudget::ceiling_bytes();
    MemoryBudget::set_ceiling_bytes(1 << 20);
    CHECK_THROWS_AS(MertensPrefix::build(10'000'000), CapacityError);
    MemoryBudget::set_ceiling_bytes(old);
}

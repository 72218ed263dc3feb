#include "doctest.h"

#include <cmath>

#include "mertens_lab/sieve.hpp"
#include "oracles.hpp"

using namespace mlab;

TEST_CASE("mu on [1,10]")
{
    const auto t = SieveTable::build(10);
    const int expected[] = {1, -1, -1, 0, -1, 1, -1, 0, 0, 1};
    for (uint64_t n = 1; n <= 10; ++n)
        CHECK(t.mu(n) == expected[n - 1]);
    CHECK(SieveTable::build(4).mu(4) == 0);
}

TEST_CASE("phi at 12 and its prefix")
{
    const auto t = SieveTable::build(12);
    CHECK(t.phi(12) == 4);
    const auto a = PrefixSums::build(t, {Arith::Phi}, 12);
    CHECK(a.integer(12) == 46);
}

TEST_CASE("sieve agrees with per-n oracles up to 3000")
{
    const uint64_t n_max = 3000;
    const auto t = SieveTable::build(n_max, {.sigma_k = true});
    for (uint64_t n = 1; n <= n_max; ++n) {
        CAPTURE(n);
        REQUIRE(t.mu(n) == oracle::mu(n));
        REQUIRE(t.liouville(n) == oracle::liouville(n));
        REQUIRE(t.omega(n) == oracle::omega(n));
        REQUIRE(t.phi(n) == oracle::phi(n));
        REQUIRE(t.sigma0(n) == oracle::divisor_count(n));
        for (unsigned k = 1; k <= 3; ++k)
            REQUIRE(t.sigma_k(k, n) == static_cast<i128>(oracle::sigma(k, n)));
        const double lam = t.mangoldt_base(n) ? std::log(static_cast<double>(t.mangoldt_base(n))) : 0.0;
        REQUIRE(lam == doctest::Approx(oracle::mangoldt(n)));
    }
}

TEST_CASE("divisor sum of phi is the identity")
{
    const auto t = SieveTable::build(10'000);
    for (uint64_t n = 1; n <= 10'000; ++n) {
        uint64_t s = 0;
        for (uint64_t d : divisors_of(t.factorize(n)))
            s += t.phi(d);
        REQUIRE(s == n);
    }
}

TEST_CASE("Jordan totients")
{
    const auto t = SieveTable::build(30);
    SUBCASE("J1 is phi")
    {
        const auto j1 = jordan_table(SieveTable::build(6), 1);
        const i128 expected[] = {1, 1, 2, 2, 4, 2};
        for (int n = 1; n <= 6; ++n)
            CHECK(j1[n] == expected[n - 1]);
    }
    SUBCASE("J2 on [1,4]")
    {
        const auto j2 = jordan_table(SieveTable::build(4), 2);
        CHECK(j2[1] == 1);
        CHECK(j2[2] == 3);
        CHECK(j2[3] == 8);
        CHECK(j2[4] == 12);
        CHECK(j2[1] + j2[2] == 4);
    }
    SUBCASE("against tuple counting")
    {
        const auto j2 = jordan_table(t, 2);
        const auto j3 = jordan_table(t, 3);
        for (uint64_t n = 1; n <= 30; ++n)
            CHECK(j2[n] == static_cast<i128>(oracle::jordan(2, n)));
        for (uint64_t n = 1; n <= 12; ++n)
            CHECK(j3[n] == static_cast<i128>(oracle::jordan(3, n)));
    }
}

TEST_CASE("summatory examples")
{
    const auto t = SieveTable::build(12);
    CHECK(PrefixSums::build(t, {Arith::Mangoldt}, 8).real(8) == doctest::Approx(std::log(840.0)).epsilon(1e-14));
    CHECK(PrefixSums::build(t, {Arith::Liouville}, 9).integer(9) == -1);
    const auto r = PrefixSums::build(t, {Arith::NOverPhi}, 4);
    CHECK(r.rational(4) == mpq_class(1) + 2 + mpq_class(3, 2) + 2);
}

TEST_CASE("function ids round-trip through their names")
{
    for (FunctionId f : {FunctionId{Arith::Phi}, FunctionId{Arith::SigmaK, 2}, FunctionId{Arith::Jordan, 3},
                         FunctionId{Arith::PowerK, 1}, FunctionId{Arith::MuLog}, FunctionId{Arith::AbsMuOverPhi}})
        CHECK(FunctionId::parse(f.name()) == f);
    CHECK_THROWS_AS(FunctionId::parse("nonsense"), std::invalid_argument);
}

TEST_CASE("integer prefix sums fall back to GMP past 128 bits")
{
    // n^3 summed to 3e6 stays in range; compare the exact closed form
    const uint64_t n = 200'000;
    const auto t = SieveTable::build(n);
    const auto p = PrefixSums::build(t, {Arith::PowerK, 3}, n);
    mpz_class closed = mpz_class(n) * (n + 1) / 2;
    closed *= closed;
    CHECK(p.integer_big(n) == closed);
}

TEST_CASE("segmented and linear mu sieves agree")
{
    const uint64_t n = 1'000'000;
    const auto whole = mobius_linear(n);
    const auto table = SieveTable::build(n);
    uint64_t seen = 0;
    for_each_mobius_block(n, 65'536, [&](uint64_t lo, std::span<const int8_t> mu) {
        for (size_t i = 0; i < mu.size(); ++i) {
            REQUIRE(mu[i] == whole[lo + i]);
            REQUIRE(mu[i] == table.mu(lo + i));
        }
        seen += mu.size();
    });
    CHECK(seen == n);

    const auto primes = primes_upto(100'000);
    const uint64_t lo = 9'999'000'000ull, hi = lo + 2000;
    const auto seg = mobius_segment(lo, hi, primes);
    for (uint64_t v = lo; v <= hi; v += 37)
        CHECK(seg[v - lo] == oracle::mu(v));
}

TEST_CASE("factorization helpers")
{
    const auto spf = smallest_prime_factors(1000);
    for (uint64_t n = 2; n <= 1000; ++n)
        REQUIRE(factorize_with(spf, n) == oracle::factor(n));
    for (uint64_t n : {1ull, 97ull, 1'000'000'007ull, 600851475143ull, 7'766'892'000ull})
        CHECK(trial_factorize(n) == oracle::factor(n));
}

TEST_CASE("lcm of 1..x")
{
    CHECK(lcm_upto(1) == 1);
    CHECK(lcm_upto(8) == 840);
    mpz_class l = 1;
    for (unsigned long i = 1; i <= 60; ++i)
        mpz_lcm_ui(l.get_mpz_t(), l.get_mpz_t(), i);
    CHECK(lcm_upto(60) == l);
}

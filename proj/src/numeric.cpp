#include "mertens_lab/numeric.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>

namespace mlab {

std::string to_string(i128 v)
{
    if (v == 0)
        return "0";
    bool neg = v < 0;
    u128 u = neg ? -static_cast<u128>(v) : static_cast<u128>(v);
    std::string s;
    while (u > 0) {
        s.push_back(static_cast<char>('0' + static_cast<int>(u % 10)));
        u /= 10;
    }
    if (neg)
        s.push_back('-');
    std::reverse(s.begin(), s.end());
    return s;
}

mpz_class to_mpz(i128 v)
{
    return mpz_class(to_string(v));
}

namespace {

uint64_t initial_ceiling()
{
    uint64_t gb = 8;
    if (const char* env = std::getenv("MERTENS_LAB_MEM_GB")) {
        char* end = nullptr;
        double parsed = std::strtod(env, &end);
        if (end != env && parsed > 0)
            return static_cast<uint64_t>(parsed * (1ull << 30));
    }
    return gb << 30;
}

std::atomic<uint64_t>& ceiling()
{
    static std::atomic<uint64_t> value{initial_ceiling()};
    return value;
}

} // namespace

uint64_t MemoryBudget::ceiling_bytes()
{
    return ceiling().load();
}

void MemoryBudget::set_ceiling_bytes(uint64_t bytes)
{
    ceiling().store(bytes);
}

void MemoryBudget::require(uint64_t bytes, const std::string& what)
{
    if (bytes > ceiling_bytes())
        throw CapacityError(what + " needs " + std::to_string(bytes >> 20) + " MiB, ceiling is " +
                            std::to_string(ceiling_bytes() >> 20) + " MiB");
}

} // namespace mlab

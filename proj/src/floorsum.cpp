#include "mertens_lab/floorsum.hpp"

#include <cstdio>

namespace mlab {

std::vector<QuotientBlock> blocks(uint64_t x)
{
    std::vector<QuotientBlock> out;
    out.reserve(2 * isqrt(x) + 1);
    for_each_block(x, [&](uint64_t v, uint64_t lo, uint64_t hi) { out.push_back({v, lo, hi}); });
    return out;
}

std::string format_value(const Value& v)
{
    if (auto z = std::get_if<mpz_class>(&v))
        return z->get_str();
    if (auto q = std::get_if<mpq_class>(&v))
        return q->get_str();
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", std::get<double>(v));
    return buf;
}

double to_double(const Value& v)
{
    if (auto z = std::get_if<mpz_class>(&v))
        return z->get_d();
    if (auto q = std::get_if<mpq_class>(&v))
        return q->get_d();
    return std::get<double>(v);
}

} // namespace mlab

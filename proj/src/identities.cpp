#include "mertens_lab/identities.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <thread>

#include "mertens_lab/conjecture.hpp"

namespace mlab {

std::string to_string(CheckMode mode)
{
    switch (mode) {
    case CheckMode::ExactInteger:
        return "exact_integer";
    case CheckMode::ExactRational:
        return "exact_rational";
    case CheckMode::ExactInequality:
        return "exact_inequality";
    case CheckMode::Float:
        return "float";
    case CheckMode::Ratio:
        return "ratio";
    }
    return "unknown";
}

namespace {

nlohmann::json value_json(const Value& v)
{
    if (auto z = std::get_if<mpz_class>(&v)) {
        if (z->fits_slong_p())
            return z->get_si();
        return z->get_str();
    }
    if (auto q = std::get_if<mpq_class>(&v)) {
        if (q->get_den() == 1 && q->get_num().fits_slong_p())
            return q->get_num().get_si();
        return q->get_str();
    }
    return std::get<double>(v);
}

mpq_class to_rational(const Value& v)
{
    if (auto z = std::get_if<mpz_class>(&v))
        return mpq_class(*z);
    if (auto q = std::get_if<mpq_class>(&v))
        return *q;
    throw std::logic_error("float value in exact comparison");
}

// Fills margin and pass for equality modes.
void settle(IdentityReport& r)
{
    switch (r.mode) {
    case CheckMode::ExactInteger:
    case CheckMode::ExactRational: {
        mpq_class diff = to_rational(r.lhs) - to_rational(r.rhs);
        r.margin = std::abs(diff.get_d());
        r.pass = diff == 0;
        break;
    }
    case CheckMode::Float: {
        const double lhs = to_double(r.lhs), rhs = to_double(r.rhs);
        r.margin = std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs));
        r.pass = r.margin <= float_tolerance;
        break;
    }
    default:
        throw std::logic_error("settle: mode needs an explicit decision");
    }
}

Value prefix_value(const PrefixSums& p, uint64_t x)
{
    switch (p.kind()) {
    case ValueKind::Integer:
        return p.integer_big(x);
    case ValueKind::Rational:
        return p.rational(x);
    case ValueKind::Real:
        return p.real(x);
    }
    throw std::logic_error("unreachable");
}

struct TheoremShape {
    FunctionId weight;  // f in sum M(floor(x/i)) f(i)
    FunctionId summand; // g with f = g * 1
    bool negate = false;
};

TheoremShape shape(Theorem t, unsigned k)
{
    if ((t == Theorem::T3 || t == Theorem::T4) && (k < 1 || k > 3))
        throw std::invalid_argument("unsupported k=" + std::to_string(k) + " (T3/T4 take k in 1..3)");
    switch (t) {
    case Theorem::T1:
        return {{Arith::Identity}, {Arith::Phi}};
    case Theorem::T2:
        return {{Arith::HalfSigma0Log}, {Arith::Log}};
    case Theorem::T3:
        return {{Arith::PowerK, k}, {Arith::Jordan, k}};
    case Theorem::T4:
        return {{Arith::SigmaK, k}, {Arith::PowerK, k}};
    case Theorem::T5:
        return {{Arith::SquareIndicator}, {Arith::Liouville}};
    case Theorem::T6:
        return {{Arith::Mangoldt}, {Arith::MuLog}, true};
    case Theorem::T7:
        return {{Arith::TwoPowOmega}, {Arith::AbsMu}};
    case Theorem::T8:
        return {{Arith::Sigma0OfSquare}, {Arith::TwoPowOmega}};
    case Theorem::T9:
        return {{Arith::Sigma0Squared}, {Arith::Sigma0OfSquare}};
    case Theorem::T10:
        return {{Arith::NOverPhi}, {Arith::AbsMuOverPhi}};
    }
    throw std::invalid_argument("unknown theorem");
}

std::string theorem_id(Theorem t, unsigned k)
{
    std::string id = "T" + std::to_string(static_cast<int>(t));
    if (t == Theorem::T3 || t == Theorem::T4)
        id += "(k=" + std::to_string(k) + ")";
    return id;
}

void require_limit(const IdentityContext& ctx, uint64_t x)
{
    if (x < 1 || x > ctx.limit())
        throw std::out_of_range("x=" + std::to_string(x) + " outside identity context [1," +
                                std::to_string(ctx.limit()) + "]");
}

mpz_class pow_ui(uint64_t base, unsigned long exp)
{
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), base, exp);
    return r;
}

// prod_{i<=x} i^(M(floor(x/i)) * w(i)) as an exact rational
template <class Weight>
mpq_class signed_power_product(uint64_t x, const MertensPrefix& mertens, Weight weight)
{
    mpz_class num = 1, den = 1;
    for (uint64_t i = 2; i <= x; ++i) {
        const int64_t e = mertens.at(x / i) * weight(i);
        if (e > 0)
            num *= pow_ui(i, static_cast<unsigned long>(e));
        else if (e < 0)
            den *= pow_ui(i, static_cast<unsigned long>(-e));
    }
    mpq_class r(num, den);
    r.canonicalize();
    return r;
}

} // namespace

nlohmann::json to_json(const IdentityReport& r)
{
    return {{"id", r.id},
            {"x", r.x},
            {"mode", to_string(r.mode)},
            {"lhs", value_json(r.lhs)},
            {"rhs", value_json(r.rhs)},
            {"margin", r.margin},
            {"pass", r.pass}};
}

Theorem parse_theorem(const std::string& text)
{
    if (text.size() >= 2 && (text[0] == 'T' || text[0] == 't')) {
        try {
            int n = std::stoi(text.substr(1));
            if (n >= 1 && n <= 10)
                return static_cast<Theorem>(n);
        } catch (const std::exception&) {
        }
    }
    throw std::invalid_argument("unknown theorem '" + text + "'");
}

IdentityContext::IdentityContext(uint64_t limit, std::vector<unsigned> ks)
    : limit_(limit),
      ks_(std::move(ks)),
      sieve_(SieveTable::build(limit, {.sigma_k = true})),
      mertens_(MertensPrefix::build(limit))
{
}

const PrefixSums& IdentityContext::prefix(FunctionId f) const
{
    std::lock_guard lock(mutex_);
    auto& slot = prefixes_[f.name()];
    if (!slot)
        slot = std::make_unique<PrefixSums>(PrefixSums::build(sieve_, f, limit_));
    return *slot;
}

IdentityReport verify_lehman(uint64_t x, uint64_t n)
{
    return verify_lehman(x, n, MertensQuotientTable::build(x));
}

LehmanScan scan_lehman(uint64_t xmax, const MertensPrefix& mertens)
{
    if (mertens.limit() < xmax)
        throw std::out_of_range("Mertens prefix shorter than xmax");
    LehmanScan out;
    for (uint64_t x = 1; x <= xmax; ++x)
        for (uint64_t n = 1; n <= x; ++n) {
            int64_t acc = 0;
            for (uint64_t i = 1; i * n <= x; ++i)
                acc += mertens.at(x / (i * n));
            ++out.checked;
            if (acc != 1)
                out.failures.emplace_back(x, n);
        }
    return out;
}

IdentityReport verify_theorem(Theorem t, uint64_t x, unsigned k, const IdentityContext& ctx)
{
    require_limit(ctx, x);
    const TheoremShape s = shape(t, k);
    IdentityReport r;
    r.id = theorem_id(t, k);
    r.x = x;
    r.lhs = weighted_msum(x, ctx.prefix(s.weight), ctx.mertens());
    r.rhs = prefix_value(ctx.prefix(s.summand), x);
    if (s.negate)
        std::visit([](auto& v) { v = -v; }, r.rhs);

    const bool real = s.weight.kind() == ValueKind::Real || s.summand.kind() == ValueKind::Real;
    const bool rational = s.weight.kind() == ValueKind::Rational || s.summand.kind() == ValueKind::Rational;
    r.mode = real ? CheckMode::Float : rational ? CheckMode::ExactRational : CheckMode::ExactInteger;
    settle(r);
    return r;
}

IdentityReport verify_theorem(Theorem t, uint64_t x, unsigned k)
{
    IdentityContext ctx(x, {k});
    return verify_theorem(t, x, k, ctx);
}

IdentityReport verify_psi(uint64_t x, const IdentityContext& ctx)
{
    require_limit(ctx, x);
    IdentityReport r;
    r.id = "PSI";
    r.x = x;
    r.mode = CheckMode::Float;
    r.lhs = weighted_msum(x, ctx.prefix({Arith::Log}), ctx.mertens());
    r.rhs = ctx.prefix({Arith::Mangoldt}).real(x);
    settle(r);
    return r;
}

IdentityReport verify_psi_exact(uint64_t x, const IdentityContext& ctx, uint64_t cap)
{
    if (x > cap)
        throw CapacityError("exact psi check capped at x=" + std::to_string(cap));
    require_limit(ctx, x);
    IdentityReport r;
    r.id = "PSI_EXACT";
    r.x = x;
    r.mode = CheckMode::ExactRational;
    r.lhs = signed_power_product(x, ctx.mertens(), [](uint64_t) { return int64_t{1}; });
    r.rhs = lcm_upto(x);
    settle(r);
    return r;
}

IdentityReport verify_psi_exact(uint64_t x, uint64_t cap)
{
    if (x > cap)
        throw CapacityError("exact psi check capped at x=" + std::to_string(cap));
    return verify_psi_exact(x, IdentityContext(x), cap);
}

IdentityReport verify_t2_exact(uint64_t x, const IdentityContext& ctx, uint64_t cap)
{
    if (x > cap)
        throw CapacityError("exact T2 check capped at x=" + std::to_string(cap));
    require_limit(ctx, x);
    IdentityReport r;
    r.id = "T2_EXACT";
    r.x = x;
    r.mode = CheckMode::ExactRational;
    const auto& sieve = ctx.sieve();
    r.lhs = signed_power_product(x, ctx.mertens(), [&](uint64_t i) { return int64_t{sieve.sigma0(i)}; });
    mpz_class f;
    mpz_fac_ui(f.get_mpz_t(), x);
    r.rhs = mpz_class(f * f);
    settle(r);
    return r;
}

IdentityReport verify_t2_exact(uint64_t x, uint64_t cap)
{
    if (x > cap)
        throw CapacityError("exact T2 check capped at x=" + std::to_string(cap));
    return verify_t2_exact(x, IdentityContext(x), cap);
}

IdentityReport verify_t6_exact(uint64_t x, const IdentityContext& ctx)
{
    require_limit(ctx, x);
    const auto& sieve = ctx.sieve();
    mpz_class lnum = 1, lden = 1, rnum = 1, rden = 1;
    for (uint64_t i = 2; i <= x; ++i) {
        if (const uint64_t p = sieve.mangoldt_base(i)) {
            const int64_t e = ctx.mertens().at(x / i);
            if (e > 0)
                lnum *= pow_ui(p, static_cast<unsigned long>(e));
            else if (e < 0)
                lden *= pow_ui(p, static_cast<unsigned long>(-e));
        }
        if (sieve.mu(i) < 0)
            rnum *= i;
        else if (sieve.mu(i) > 0)
            rden *= i;
    }
    mpq_class lhs(lnum, lden), rhs(rnum, rden);
    lhs.canonicalize();
    rhs.canonicalize();
    IdentityReport r;
    r.id = "T6_EXACT";
    r.x = x;
    r.mode = CheckMode::ExactRational;
    r.lhs = lhs;
    r.rhs = rhs;
    settle(r);
    return r;
}

IdentityReport verify_t6_exact(uint64_t x)
{
    return verify_t6_exact(x, IdentityContext(x));
}

IdentityReport verify_schwarz(uint64_t x, const IdentityContext& ctx)
{
    require_limit(ctx, x);
    const mpz_class q = to_mpz(q_sum(x, ctx.mertens()));
    const mpz_class a = ctx.prefix({Arith::Phi}).integer_big(x);
    const mpz_class xz(static_cast<unsigned long>(x));
    IdentityReport r;
    r.id = "SCHWARZ";
    r.x = x;
    r.mode = CheckMode::ExactInequality;
    mpz_class lhs = q * xz * (xz + 1) * (2 * xz + 1);
    mpz_class rhs = 6 * a * a;
    r.margin = mpz_class(lhs - rhs).get_d();
    r.pass = lhs >= rhs;
    r.lhs = lhs;
    r.rhs = rhs;
    return r;
}

IdentityReport verify_schwarz(uint64_t x)
{
    return verify_schwarz(x, IdentityContext(x));
}

namespace {

// pi^2 > 9.869604401
const mpq_class pi_sq_lo(9869604401, 1000000000);

IdentityReport ratio_report(std::string id, uint64_t x, const mpq_class& observed, double target, double band)
{
    IdentityReport r;
    r.id = std::move(id);
    r.x = x;
    r.mode = CheckMode::Ratio;
    r.lhs = observed.get_d();
    r.rhs = target;
    r.margin = std::abs(observed.get_d() - target) / target;
    r.pass = r.margin <= band;
    return r;
}

} // namespace

std::vector<IdentityReport> asymptotic_ratios(uint64_t x, const IdentityContext& ctx, double band)
{
    require_limit(ctx, x);
    constexpr double pi = std::numbers::pi;
    const mpz_class xz(static_cast<unsigned long>(x));
    std::vector<IdentityReport> out;

    const mpz_class a = ctx.prefix({Arith::Phi}).integer_big(x);
    out.push_back(ratio_report("WALFISZ_RATIO", x, mpq_class(a, xz * xz), 3.0 / (pi * pi), band));

    for (unsigned k : ctx.ks()) {
        if (k < 1 || k > 3)
            throw std::invalid_argument("unsupported k=" + std::to_string(k));
        const mpz_class b = ctx.prefix({Arith::Jordan, k}).integer_big(x);
        mpz_class scale;
        mpz_pow_ui(scale.get_mpz_t(), xz.get_mpz_t(), k + 1);
        out.push_back(ratio_report("JORDAN_RATIO(k=" + std::to_string(k) + ")", x, mpq_class(b, scale),
                                   1.0 / ((k + 1) * zeta_values[k - 1]), band));
    }

    const mpz_class squarefree = ctx.prefix({Arith::AbsMu}).integer_big(x);
    out.push_back(ratio_report("SQUAREFREE_RATIO", x, mpq_class(squarefree, xz), 6.0 / (pi * pi), band));

    const mpz_class q = to_mpz(q_sum(x, ctx.mertens()));
    const double shrink = 1.0 / std::sqrt((1.0 + 1.0 / x) * (1.0 + 0.5 / x));

    // sqrt(Q)/x > 3 sqrt(3)/pi / sqrt((1+1/x)(1+1/(2x)))  <=>  Q pi^2 (x+1)(2x+1) > 54 x^4
    {
        IdentityReport r;
        r.id = "SQRT_Q_OVER_X_BOUND";
        r.x = x;
        r.mode = CheckMode::ExactInequality;
        r.lhs = std::sqrt(q.get_d()) / x;
        r.rhs = 3.0 * std::sqrt(3.0) / pi * shrink;
        r.margin = to_double(r.lhs) - to_double(r.rhs);
        const mpq_class lhs = mpq_class(q * (xz + 1) * (2 * xz + 1)) * pi_sq_lo;
        r.pass = lhs > mpq_class(54 * xz * xz * xz * xz);
        out.push_back(r);
    }

    // Schwarz route: Q x(x+1)(2x+1) >= 6 A^2 together with A > 3x^2/pi^2 gives
    // sqrt(Q)/sqrt(x) > 3 sqrt(3)/pi^2 / sqrt((1+1/x)(1+1/(2x))).
    {
        IdentityReport r;
        r.id = "SQRT_Q_OVER_SQRT_X_BOUND";
        r.x = x;
        r.mode = CheckMode::ExactInequality;
        r.lhs = std::sqrt(q.get_d() / x);
        r.rhs = 3.0 * std::sqrt(3.0) / (pi * pi) * shrink;
        r.margin = to_double(r.lhs) - to_double(r.rhs);
        const bool schwarz = verify_schwarz(x, ctx).pass;
        const bool walfisz_lower = mpq_class(a) * pi_sq_lo > mpq_class(3 * xz * xz);
        r.pass = schwarz && walfisz_lower;
        out.push_back(r);
    }
    return out;
}

std::vector<IdentityReport> run_identity_suite(const SuiteConfig& config)
{
    if (config.xmax < 1)
        throw std::invalid_argument("xmax must be >= 1");
    for (unsigned k : config.ks)
        if (k < 1 || k > 3)
            throw std::invalid_argument("unsupported k=" + std::to_string(k));

    const IdentityContext ctx(config.xmax, config.ks);
    // warm every table before workers start
    for (int t = 1; t <= 10; ++t) {
        auto th = static_cast<Theorem>(t);
        if (th == Theorem::T3 || th == Theorem::T4) {
            for (unsigned k : config.ks) {
                auto s = shape(th, k);
                ctx.prefix(s.weight), ctx.prefix(s.summand);
            }
        } else {
            auto s = shape(th, 0);
            ctx.prefix(s.weight), ctx.prefix(s.summand);
        }
    }
    ctx.prefix({Arith::Log}), ctx.prefix({Arith::Mangoldt});

    const uint64_t chunk_count = std::min<uint64_t>(config.xmax, 64);
    const uint64_t chunk_size = (config.xmax + chunk_count - 1) / chunk_count;
    std::vector<std::vector<IdentityReport>> chunks(chunk_count);

    auto run_chunk = [&](uint64_t c) {
        auto& out = chunks[c];
        const uint64_t lo = 1 + c * chunk_size;
        const uint64_t hi = std::min(config.xmax, lo + chunk_size - 1);
        for (uint64_t x = lo; x <= hi; ++x) {
            out.push_back(verify_lehman(x, 1, ctx.mertens()));
            for (int t = 1; t <= 10; ++t) {
                auto th = static_cast<Theorem>(t);
                if (th == Theorem::T3 || th == Theorem::T4)
                    for (unsigned k : config.ks)
                        out.push_back(verify_theorem(th, x, k, ctx));
                else
                    out.push_back(verify_theorem(th, x, 0, ctx));
            }
            out.push_back(verify_t6_exact(x, ctx));
            out.push_back(verify_psi(x, ctx));
            if (x <= config.exact_cap) {
                out.push_back(verify_psi_exact(x, ctx, config.exact_cap));
                out.push_back(verify_t2_exact(x, ctx, config.exact_cap));
            }
        }
    };

    const unsigned threads = std::max(1u, config.threads);
    if (threads == 1) {
        for (uint64_t c = 0; c < chunk_count; ++c)
            run_chunk(c);
    } else {
        std::atomic<uint64_t> next{0};
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t)
            pool.emplace_back([&] {
                for (uint64_t c = next++; c < chunk_count; c = next++)
                    run_chunk(c);
            });
        for (auto& th : pool)
            th.join();
    }

    std::vector<IdentityReport> all;
    for (auto& c : chunks)
        for (auto& r : c)
            all.push_back(std::move(r));
    std::stable_sort(all.begin(), all.end(),
                     [](const IdentityReport& a, const IdentityReport& b) {
                         return a.id != b.id ? a.id < b.id : a.x < b.x;
                     });
    return all;
}

} // namespace mlab

#include "mertens_lab/conjecture.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <thread>

#include <mpfr.h>

#include "mertens_lab/sieve.hpp"

namespace mlab {

double log_factorial(uint64_t x)
{
    CompensatedSum acc;
    for (uint64_t i = 2; i <= x; ++i)
        acc.add(std::log(static_cast<double>(i)));
    return acc.value();
}

double stirling_log_factorial(uint64_t x)
{
    const double xd = static_cast<double>(x);
    return xd * std::log(xd) - xd + 0.5 * std::log(2.0 * std::numbers::pi * xd);
}

double chebyshev_psi(uint64_t x)
{
    CompensatedSum acc;
    for (auto [p, e] : lcm_factorization(x))
        acc.add(e * std::log(static_cast<double>(p)));
    return acc.value();
}

namespace {

class Mpfr {
public:
    explicit Mpfr(mpfr_prec_t prec) { mpfr_init2(v_, prec); }
    ~Mpfr() { mpfr_clear(v_); }
    Mpfr(const Mpfr&) = delete;
    Mpfr& operator=(const Mpfr&) = delete;
    mpfr_ptr get() { return v_; }

private:
    mpfr_t v_;
};

// sign of (value - q) given value in [lo, hi]; 0 when undecided at this precision
int interval_sign(mpfr_ptr lo, mpfr_ptr hi, const mpz_class& q, mpfr_prec_t prec)
{
    Mpfr q_lo(prec), q_hi(prec);
    mpfr_set_z(q_lo.get(), q.get_mpz_t(), MPFR_RNDD);
    mpfr_set_z(q_hi.get(), q.get_mpz_t(), MPFR_RNDU);
    if (mpfr_greater_p(lo, q_hi.get()))
        return 1;
    if (mpfr_less_p(hi, q_lo.get()))
        return -1;
    return 0;
}

constexpr mpfr_prec_t precisions[] = {128, 256, 1024};

} // namespace

int compare_log_factorial(uint64_t x, const mpz_class& q)
{
    if (x <= 1)
        return q < 0 ? 1 : (q == 0 ? 0 : -1);
    for (mpfr_prec_t prec : precisions) {
        Mpfr arg(prec), lo(prec), hi(prec);
        mpfr_set_ui(arg.get(), x + 1, MPFR_RNDN); // exact at prec >= 128
        mpfr_lngamma(lo.get(), arg.get(), MPFR_RNDD);
        mpfr_lngamma(hi.get(), arg.get(), MPFR_RNDU);
        if (int s = interval_sign(lo.get(), hi.get(), q, prec))
            return s;
    }
    return 0;
}

int compare_psi(uint64_t x, const mpz_class& q)
{
    if (x <= 1)
        return q < 0 ? 1 : (q == 0 ? 0 : -1);
    const auto powers = lcm_factorization(x);
    for (mpfr_prec_t prec : precisions) {
        Mpfr lo(prec), hi(prec), term(prec);
        mpfr_set_ui(lo.get(), 0, MPFR_RNDN);
        mpfr_set_ui(hi.get(), 0, MPFR_RNDN);
        for (auto [p, e] : powers) {
            mpfr_set_ui(term.get(), p, MPFR_RNDN);
            mpfr_log(term.get(), term.get(), MPFR_RNDD);
            mpfr_mul_ui(term.get(), term.get(), e, MPFR_RNDD);
            mpfr_add(lo.get(), lo.get(), term.get(), MPFR_RNDD);
            mpfr_set_ui(term.get(), p, MPFR_RNDN);
            mpfr_log(term.get(), term.get(), MPFR_RNDU);
            mpfr_mul_ui(term.get(), term.get(), e, MPFR_RNDU);
            mpfr_add(hi.get(), hi.get(), term.get(), MPFR_RNDU);
        }
        if (int s = interval_sign(lo.get(), hi.get(), q, prec))
            return s;
    }
    return 0;
}

namespace {

struct ChunkResult {
    uint64_t checked = 0;
    std::vector<Violation> violations;
    std::vector<OutOfClaim> out_of_claim;
    double min_upper = std::numeric_limits<double>::infinity();
    uint64_t arg_upper = 0;
    double min_lower = std::numeric_limits<double>::infinity();
    uint64_t arg_lower = 0;
    double min_sqrt = std::numeric_limits<double>::infinity();
    uint64_t arg_sqrt = 0;
    uint64_t exact_rechecks = 0;
    uint64_t implication_failures = 0;
    std::vector<SeriesPoint> series;
};

void take_min(double value, uint64_t x, double& best, uint64_t& arg)
{
    if (value < best) {
        best = value;
        arg = x;
    }
}

} // namespace

ConjectureReport scan(uint64_t from, uint64_t to, ScanOptions options)
{
    if (from < 1 || to < from)
        throw std::invalid_argument("scan range must satisfy 1 <= from <= to");
    if (to > options.ceiling)
        throw CapacityError("scan upper bound " + std::to_string(to) + " exceeds scan ceiling " +
                            std::to_string(options.ceiling));
    const unsigned threads = std::max(1u, options.threads);

    const auto mertens = MertensPrefix::build(to);

    // ln x! and psi(x) accumulated in ascending x; only [from, to] is kept
    const uint64_t count = to - from + 1;
    MemoryBudget::require(count * 16 + (to + 1) * 4, "conjecture scan tables");
    std::vector<double> lf(count), psi(count);
    {
        std::vector<uint32_t> lambda_base(to + 1, 0);
        for (uint64_t p : primes_upto(to))
            for (uint64_t q = p; q <= to; q *= p) {
                lambda_base[q] = static_cast<uint32_t>(p);
                if (q > to / p)
                    break;
            }
        CompensatedSum lf_acc, psi_acc;
        for (uint64_t x = 1; x <= to; ++x) {
            if (x > 1)
                lf_acc.add(std::log(static_cast<double>(x)));
            if (lambda_base[x])
                psi_acc.add(std::log(static_cast<double>(lambda_base[x])));
            if (x >= from) {
                lf[x - from] = lf_acc.value();
                psi[x - from] = psi_acc.value();
            }
        }
    }

    const uint64_t chunk_count = std::min<uint64_t>(count, 256);
    const uint64_t chunk_size = (count + chunk_count - 1) / chunk_count;
    std::vector<ChunkResult> chunks(chunk_count);

    auto run_chunk = [&](uint64_t c) {
        ChunkResult& r = chunks[c];
        const uint64_t lo = from + c * chunk_size;
        const uint64_t hi = std::min(to, lo + chunk_size - 1);
        for (uint64_t x = lo; x <= hi; ++x) {
            const double lfx = lf[x - from];
            const double psix = psi[x - from];
            const i128 q = q_sum(x, mertens);
            const int64_t m = mertens.at(x);
            const i128 m2 = static_cast<i128>(m) * m;
            const auto qd = static_cast<double>(q);
            ++r.checked;

            auto decide = [&](double margin, double scale, auto exact) {
                if (std::abs(margin) > options.guard * std::max(1.0, scale))
                    return margin > 0;
                ++r.exact_rechecks;
                return exact() > 0;
            };

            if (q < m2)
                ++r.implication_failures;

            bool upper_holds = true;
            if (options.conjecture1) {
                const double upper = lfx - qd;
                const double lower = qd - psix;
                upper_holds = decide(upper, lfx, [&] { return compare_log_factorial(x, to_mpz(q)); });
                const bool lower_holds = decide(lower, qd, [&] { return -compare_psi(x, to_mpz(q)); });
                if (x <= 7) {
                    r.out_of_claim.push_back({x, "upper", lfx, qd, upper_holds});
                    r.out_of_claim.push_back({x, "lower", qd, psix, lower_holds});
                } else {
                    take_min(upper, x, r.min_upper, r.arg_upper);
                    take_min(lower, x, r.min_lower, r.arg_lower);
                    if (!upper_holds)
                        r.violations.push_back({x, "upper", lfx, qd});
                    if (!lower_holds)
                        r.violations.push_back({x, "lower", qd, psix});
                }
            }
            if (options.sqrt_bound) {
                const double root = std::sqrt(lfx);
                const double am = std::abs(static_cast<double>(m));
                const bool holds = decide(lfx - static_cast<double>(m2), lfx,
                                          [&] { return compare_log_factorial(x, to_mpz(m2)); });
                if (x <= 1) {
                    r.out_of_claim.push_back({x, "sqrt_bound", root, am, holds});
                } else {
                    take_min(root - am, x, r.min_sqrt, r.arg_sqrt);
                    if (!holds)
                        r.violations.push_back({x, "sqrt_bound", root, am});
                    if (options.conjecture1 && x > 7 && upper_holds && !holds)
                        ++r.implication_failures;
                }
            }
            if (options.keep_series)
                r.series.push_back({x, lfx, q, psix, m});
        }
    };

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

    ConjectureReport report;
    report.from = from;
    report.to = to;
    for (auto& r : chunks) {
        report.checked += r.checked;
        report.exact_rechecks += r.exact_rechecks;
        report.implication_failures += r.implication_failures;
        take_min(r.min_upper, r.arg_upper, report.min_margin_upper, report.argmin_upper);
        take_min(r.min_lower, r.arg_lower, report.min_margin_lower, report.argmin_lower);
        take_min(r.min_sqrt, r.arg_sqrt, report.min_margin_sqrt_bound, report.argmin_sqrt_bound);
        report.violations.insert(report.violations.end(), r.violations.begin(), r.violations.end());
        report.out_of_claim.insert(report.out_of_claim.end(), r.out_of_claim.begin(), r.out_of_claim.end());
        report.series.insert(report.series.end(), r.series.begin(), r.series.end());
    }
    return report;
}

ConjectureReport scan_conjecture1(uint64_t from, uint64_t to, ScanOptions options)
{
    options.conjecture1 = true;
    options.sqrt_bound = false;
    return scan(from, to, options);
}

ConjectureReport scan_m_bound(uint64_t from, uint64_t to, ScanOptions options)
{
    options.conjecture1 = false;
    options.sqrt_bound = true;
    return scan(from, to, options);
}

} // namespace mlab

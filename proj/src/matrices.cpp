#include "mertens_lab/matrices.hpp"

#include <sstream>
#include <stdexcept>

#include "mertens_lab/mertens.hpp"

namespace mlab {

std::string to_string(MatrixKind kind)
{
    switch (kind) {
    case MatrixKind::RPrime:
        return "R_PRIME";
    case MatrixKind::Redheffer:
        return "REDHEFFER";
    case MatrixKind::T:
        return "T";
    case MatrixKind::U:
        return "U";
    }
    return "?";
}

MatrixKind parse_matrix_kind(const std::string& text)
{
    for (auto k : {MatrixKind::RPrime, MatrixKind::Redheffer, MatrixKind::T, MatrixKind::U})
        if (text == to_string(k))
            return k;
    throw std::invalid_argument("unknown matrix kind '" + text + "'");
}

DivisibilityMatrix::DivisibilityMatrix(MatrixKind kind, uint64_t x, FunctionId weight)
    : kind_(kind), x_(x), weight_(weight), entries_(x * x, mpq_class(0))
{
}

bool DivisibilityMatrix::integral() const
{
    for (const auto& e : entries_)
        if (e.get_den() != 1)
            return false;
    return true;
}

std::string DivisibilityMatrix::to_csv() const
{
    std::ostringstream out;
    for (uint64_t i = 1; i <= x_; ++i) {
        for (uint64_t j = 1; j <= x_; ++j) {
            if (j > 1)
                out << ',';
            out << at(i, j).get_str();
        }
        out << '\n';
    }
    return out.str();
}

DivisibilityMatrix build_matrix(MatrixKind kind, uint64_t x, FunctionId weight)
{
    if (x < 1)
        throw std::invalid_argument("matrix dimension must be >= 1");
    if (x > dense_matrix_cap)
        throw CapacityError("dense matrices are capped at x=" + std::to_string(dense_matrix_cap));

    DivisibilityMatrix m(kind, x, weight);
    if (kind == MatrixKind::Redheffer) {
        for (uint64_t i = 1; i <= x; ++i)
            for (uint64_t j = 1; j <= x; ++j)
                if (j == 1 || j % i == 0)
                    m.at(i, j) = 1;
        return m;
    }

    const auto mertens = MertensPrefix::build(x);
    const auto sieve = SieveTable::build(x);
    for (uint64_t i = 1; i <= x; ++i) {
        const long row_scale = kind == MatrixKind::RPrime ? 1 : static_cast<long>(mertens.at(x / i));
        for (uint64_t j = 1; j <= i; ++j) {
            if (i % j != 0)
                continue;
            mpq_class e(row_scale);
            if (kind == MatrixKind::U)
                e *= exact_value(sieve, weight, j);
            m.at(i, j) = e;
        }
    }
    return m;
}

mpz_class determinant_exact(const DivisibilityMatrix& m)
{
    if (!m.integral())
        throw std::invalid_argument("determinant_exact needs an integer matrix");
    const uint64_t n = m.size();
    std::vector<mpz_class> a(n * n);
    for (uint64_t i = 0; i < n; ++i)
        for (uint64_t j = 0; j < n; ++j)
            a[i * n + j] = m.at(i + 1, j + 1).get_num();
    auto e = [&](uint64_t i, uint64_t j) -> mpz_class& { return a[i * n + j]; };

    int sign = 1;
    mpz_class prev = 1;
    for (uint64_t k = 0; k + 1 < n; ++k) {
        if (e(k, k) == 0) {
            uint64_t swap_row = k + 1;
            while (swap_row < n && e(swap_row, k) == 0)
                ++swap_row;
            if (swap_row == n)
                return 0;
            for (uint64_t j = 0; j < n; ++j)
                std::swap(e(k, j), e(swap_row, j));
            sign = -sign;
        }
        for (uint64_t i = k + 1; i < n; ++i) {
            for (uint64_t j = k + 1; j < n; ++j) {
                e(i, j) = e(i, j) * e(k, k) - e(i, k) * e(k, j);
                mpz_divexact(e(i, j).get_mpz_t(), e(i, j).get_mpz_t(), prev.get_mpz_t());
            }
            e(i, k) = 0;
        }
        prev = e(k, k);
    }
    return sign * e(n - 1, n - 1);
}

mpq_class determinant_rational(const DivisibilityMatrix& m)
{
    const uint64_t n = m.size();
    std::vector<mpq_class> a(n * n);
    for (uint64_t i = 0; i < n; ++i)
        for (uint64_t j = 0; j < n; ++j)
            a[i * n + j] = m.at(i + 1, j + 1);
    auto e = [&](uint64_t i, uint64_t j) -> mpq_class& { return a[i * n + j]; };

    mpq_class det = 1;
    for (uint64_t k = 0; k < n; ++k) {
        uint64_t pivot = k;
        while (pivot < n && e(pivot, k) == 0)
            ++pivot;
        if (pivot == n)
            return 0;
        if (pivot != k) {
            for (uint64_t j = 0; j < n; ++j)
                std::swap(e(k, j), e(pivot, j));
            det = -det;
        }
        det *= e(k, k);
        for (uint64_t i = k + 1; i < n; ++i) {
            if (e(i, k) == 0)
                continue;
            mpq_class factor = e(i, k) / e(k, k);
            for (uint64_t j = k; j < n; ++j)
                e(i, j) -= factor * e(k, j);
        }
    }
    return det;
}

IdentityReport sum_identity_check(const DivisibilityMatrix& m)
{
    if (m.kind() != MatrixKind::T && m.kind() != MatrixKind::U)
        throw std::invalid_argument("sum_identity_check applies to T and U matrices");
    const uint64_t n = m.size();
    mpq_class row_total = 0, column_total = 0;
    for (uint64_t i = 1; i <= n; ++i) {
        mpq_class row = 0;
        for (uint64_t j = 1; j <= n; ++j)
            row += m.at(i, j);
        row_total += row;
    }
    for (uint64_t j = 1; j <= n; ++j) {
        mpq_class column = 0;
        for (uint64_t i = 1; i <= n; ++i)
            column += m.at(i, j);
        column_total += column;
    }

    mpq_class expected(static_cast<unsigned long>(n));
    if (m.kind() == MatrixKind::U) {
        const auto sieve = SieveTable::build(n);
        expected = 0;
        for (uint64_t j = 1; j <= n; ++j)
            expected += exact_value(sieve, m.weight(), j);
    }

    IdentityReport r;
    r.id = m.kind() == MatrixKind::T ? "T_MATRIX_SUMS" : "U_MATRIX_SUMS(" + m.weight().name() + ")";
    r.x = n;
    r.mode = m.integral() ? CheckMode::ExactInteger : CheckMode::ExactRational;
    r.lhs = row_total;
    r.rhs = column_total;
    r.margin = std::abs(mpq_class(row_total - column_total).get_d());
    r.pass = row_total == column_total && column_total == expected;
    return r;
}

} // namespace mlab

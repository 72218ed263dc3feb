#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mertens_lab/identities.hpp"
#include "mertens_lab/sieve.hpp"

namespace mlab {

// R_PRIME: (i,j) = [j | i]
// REDHEFFER: (i,j) = [i | j or j = 1]
// T: R_PRIME with row i scaled by M(floor(x/i)); column 1 reads M(x), M(x/2), ...
// U: T with column j scaled by f(j), f = phi unless another weight is given
enum class MatrixKind { RPrime, Redheffer, T, U };

std::string to_string(MatrixKind kind);
MatrixKind parse_matrix_kind(const std::string& text);

inline constexpr uint64_t dense_matrix_cap = 200;

class DivisibilityMatrix {
public:
    DivisibilityMatrix(MatrixKind kind, uint64_t x, FunctionId weight);

    MatrixKind kind() const { return kind_; }
    uint64_t size() const { return x_; }
    FunctionId weight() const { return weight_; }

    // 1-based
    const mpq_class& at(uint64_t i, uint64_t j) const { return entries_[(i - 1) * x_ + (j - 1)]; }
    mpq_class& at(uint64_t i, uint64_t j) { return entries_[(i - 1) * x_ + (j - 1)]; }

    bool integral() const;
    std::string to_csv() const;

private:
    MatrixKind kind_;
    uint64_t x_;
    FunctionId weight_;
    std::vector<mpq_class> entries_;
};

// Throws CapacityError above dense_matrix_cap. The weight only affects U.
DivisibilityMatrix build_matrix(MatrixKind kind, uint64_t x, FunctionId weight = {Arith::Phi});

// Fraction-free (Bareiss) elimination; throws std::invalid_argument on non-integral entries.
mpz_class determinant_exact(const DivisibilityMatrix& m);
// Gaussian elimination over the rationals, for U with rational weights.
mpq_class determinant_rational(const DivisibilityMatrix& m);

// Row-sum total against column-sum total. For T both equal x (every column
// sums to 1 by the generalized Lehman identity); for U(f) both equal
// sum_{j<=x} f(j), which is A(x) for f = phi.
IdentityReport sum_identity_check(const DivisibilityMatrix& m);

} // namespace mlab

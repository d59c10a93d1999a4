#pragma once

#include <cstdint>
#include <vector>

#include "mlab/errors.hpp"

namespace mlab {

/// Dense matrix over the prime field F_p. Entries are stored row-major and
/// always reduced into [0, p). Linear maps F_p^a -> F_p^b are b x a matrices
/// acting on column vectors; bases of subspaces are stored as matrices whose
/// rows are the basis vectors.
class FpMatrix {
  public:
    FpMatrix() = default;
    FpMatrix(std::uint32_t p, std::size_t rows, std::size_t cols);

    static FpMatrix identity(std::uint32_t p, std::size_t n);
    static FpMatrix zero(std::uint32_t p, std::size_t rows, std::size_t cols);
    static FpMatrix from_rows(std::uint32_t p,
                              const std::vector<std::vector<std::uint32_t>>& rows);

    std::uint32_t p() const { return p_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    std::uint32_t at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
    void set(std::size_t r, std::size_t c, std::uint32_t v) { data_[r * cols_ + c] = v % p_; }

    std::vector<std::uint32_t> row(std::size_t r) const;

    bool operator==(const FpMatrix& o) const = default;

    FpMatrix transpose() const;
    bool is_zero() const;
    bool is_identity() const;

  private:
    std::uint32_t p_ = 2;
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<std::uint32_t> data_;
};

using FpVector = std::vector<std::uint32_t>;

bool is_prime(std::uint32_t n);

FpMatrix mat_add(const FpMatrix& a, const FpMatrix& b);
FpMatrix mat_sub(const FpMatrix& a, const FpMatrix& b);
FpMatrix mat_mul(const FpMatrix& a, const FpMatrix& b);
FpMatrix mat_scale(const FpMatrix& a, std::uint32_t s);

/// Stack the rows of b under the rows of a.
FpMatrix vstack(const FpMatrix& a, const FpMatrix& b);

FpVector mat_apply(const FpMatrix& m, const FpVector& v);  // column convention: m * v

struct RrefResult {
    FpMatrix reduced;
    std::vector<std::size_t> pivots;
    std::size_t rank = 0;
};

/// Unique reduced row echelon form.
RrefResult rref(const FpMatrix& m);

std::size_t rank(const FpMatrix& m);

/// Basis of { x : m * x^T = 0 }, one basis vector per row, in RREF.
/// Row count is cols(m) - rank(m).
FpMatrix kernel_basis(const FpMatrix& m);

/// RREF basis of the row space.
FpMatrix row_space_basis(const FpMatrix& m);

/// RREF basis of the column space of a linear map (its image).
FpMatrix image_basis(const FpMatrix& m);

bool in_row_space(const FpMatrix& basis, const FpVector& v);
bool row_space_contains(const FpMatrix& big, const FpMatrix& small);

/// Canonical solution x of basis^T x = v, i.e. coordinates of the row vector v
/// in the given independent rows. Throws ContainmentError if v is outside.
FpVector solve_in_rows(const FpMatrix& basis, const FpVector& v);

/// Canonical solution of a * x = b (free variables zero); throws
/// ContainmentError when the system is inconsistent.
FpVector solve_columns(const FpMatrix& a, const FpVector& b);

/// A subquotient S/T of F_p^ambient with a canonical basis of coset
/// representatives. sub_basis and quot_basis are kept in RREF; the coset
/// representatives are the rows of sub_basis that add pivots over quot_basis.
class FpSubquotient {
  public:
    FpSubquotient() = default;
    FpSubquotient(std::size_t ambient_dim, FpMatrix sub, FpMatrix quot);

    std::uint32_t p() const { return sub_.p(); }
    std::size_t ambient_dim() const { return ambient_; }
    const FpMatrix& sub_basis() const { return sub_; }
    const FpMatrix& quot_basis() const { return quot_; }
    /// Canonical coset representatives, one row per dimension of S/T.
    const FpMatrix& reps() const { return reps_; }
    std::size_t dim() const { return reps_.rows(); }

    bool contains(const FpVector& v) const;  // v in S?
    /// Coordinates of v (a vector of S) in the coset basis.
    FpVector reduce(const FpVector& v) const;
    /// The ambient representative of coordinate vector c.
    FpVector lift(const FpVector& c) const;

  private:
    std::size_t ambient_ = 0;
    FpMatrix sub_;
    FpMatrix quot_;
    FpMatrix reps_;
    FpMatrix solve_rows_;  // [reps; quot], independent rows
};

/// Full space F_p^n as a subquotient (T = 0).
FpSubquotient full_space(std::uint32_t p, std::size_t n);

/// S/T inside F_p^ambient. Throws ContainmentError unless T <= S.
FpSubquotient subquotient(std::size_t ambient_dim, const FpMatrix& s, const FpMatrix& t);

/// Matrix of the map S/T -> S'/T' induced by the ambient linear map m.
/// Checks m(S) <= S' and m(T) <= T'.
FpMatrix induced_map(const FpMatrix& m, const FpSubquotient& src, const FpSubquotient& dst);

struct ExactnessVerdict {
    bool exact = false;
    std::size_t dim_image = 0;
    std::size_t dim_kernel = 0;
};

/// For composable maps f : A -> B, g : B -> C decide whether im(f) = ker(g).
ExactnessVerdict check_exact(const FpMatrix& f, const FpMatrix& g);

}  // namespace mlab

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "mlab/fp_matrix.hpp"

using namespace mlab;

namespace {

FpMatrix random_matrix(std::mt19937& rng, std::uint32_t p, std::size_t r, std::size_t c) {
    FpMatrix m(p, r, c);
    std::uniform_int_distribution<std::uint32_t> d(0, p - 1);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) m.set(i, j, d(rng));
    return m;
}

// Independent rank oracle: the largest k with a non-vanishing k x k minor.
std::uint32_t det_mod(const FpMatrix& m, const std::vector<std::size_t>& rows,
                      const std::vector<std::size_t>& cols) {
    const std::uint32_t p = m.p();
    if (rows.empty()) return 1 % p;
    std::uint64_t det = 0;
    // Laplace expansion along the first listed row.
    for (std::size_t j = 0; j < cols.size(); ++j) {
        std::uint32_t a = m.at(rows[0], cols[j]);
        if (!a) continue;
        std::vector<std::size_t> sub_rows(rows.begin() + 1, rows.end());
        std::vector<std::size_t> sub_cols;
        for (std::size_t k = 0; k < cols.size(); ++k)
            if (k != j) sub_cols.push_back(cols[k]);
        std::uint64_t cof = static_cast<std::uint64_t>(a) * det_mod(m, sub_rows, sub_cols) % p;
        det = (j % 2 == 0) ? (det + cof) % p : (det + p - cof % p) % p;
    }
    return static_cast<std::uint32_t>(det);
}

std::size_t minor_rank_oracle(const FpMatrix& m) {
    std::size_t best = 0;
    std::size_t nmax = std::min(m.rows(), m.cols());
    for (std::size_t k = nmax; k >= 1; --k) {
        // all k-subsets of rows and columns
        std::vector<std::size_t> ridx(k), cidx(k);
        std::vector<bool> rsel(m.rows(), false), csel(m.cols(), false);
        std::fill(rsel.begin(), rsel.begin() + static_cast<std::ptrdiff_t>(k), true);
        do {
            std::size_t ri = 0;
            for (std::size_t i = 0; i < m.rows(); ++i)
                if (rsel[i]) ridx[ri++] = i;
            std::vector<bool> cs(m.cols(), false);
            std::fill(cs.begin(), cs.begin() + static_cast<std::ptrdiff_t>(k), true);
            do {
                std::size_t ci = 0;
                for (std::size_t j = 0; j < m.cols(); ++j)
                    if (cs[j]) cidx[ci++] = j;
                if (det_mod(m, ridx, cidx) != 0) {
                    best = k;
                    return best;
                }
            } while (std::prev_permutation(cs.begin(), cs.end()));
        } while (std::prev_permutation(rsel.begin(), rsel.end()));
    }
    return best;
}

}  // namespace

TEST_CASE("rref identity and duplicate rows") {
    FpMatrix id = FpMatrix::identity(2, 2);
    RrefResult r = rref(id);
    CHECK(r.reduced == id);
    CHECK(r.pivots == std::vector<std::size_t>{0, 1});
    CHECK(r.rank == 2);

    FpMatrix dup = FpMatrix::from_rows(2, {{1, 1}, {1, 1}});
    RrefResult r2 = rref(dup);
    CHECK(r2.rank == 1);
    CHECK(r2.reduced == FpMatrix::from_rows(2, {{1, 1}, {0, 0}}));
}

TEST_CASE("rref rank agrees with the determinant-of-minors oracle") {
    std::mt19937 rng(7);
    for (int iter = 0; iter < 6; ++iter) {
        FpMatrix m = random_matrix(rng, 3, 8, 8);
        CHECK(rank(m) == minor_rank_oracle(m));
    }
}

TEST_CASE("rref is idempotent") {
    std::mt19937 rng(11);
    for (int iter = 0; iter < 40; ++iter) {
        std::uint32_t p = (iter % 3 == 0) ? 2 : (iter % 3 == 1) ? 3 : 5;
        FpMatrix m = random_matrix(rng, p, 1 + iter % 6, 1 + (iter * 7) % 6);
        FpMatrix once = rref(m).reduced;
        CHECK(rref(once).reduced == once);
    }
}

TEST_CASE("kernel basis basics") {
    CHECK(kernel_basis(FpMatrix::identity(2, 3)).rows() == 0);
    CHECK(kernel_basis(FpMatrix(2, 3, 3)).rows() == 3);

    FpMatrix m = FpMatrix::from_rows(2, {{1, 1}});
    FpMatrix k = kernel_basis(m);
    REQUIRE(k.rows() == 1);
    // Oracle: enumerate all four vectors of F_2^2.
    int solutions = 0;
    for (std::uint32_t a = 0; a < 2; ++a)
        for (std::uint32_t b = 0; b < 2; ++b)
            if ((a + b) % 2 == 0 && (a | b)) ++solutions;
    CHECK(solutions == 1);
    CHECK(k.row(0) == FpVector{1, 1});
}

TEST_CASE("rank-nullity on random matrices") {
    std::mt19937 rng(23);
    for (int iter = 0; iter < 60; ++iter) {
        std::uint32_t p = (iter & 1) ? 2 : 3;
        FpMatrix m = random_matrix(rng, p, 1 + iter % 7, 1 + (iter * 3) % 7);
        CHECK(rank(m) + kernel_basis(m).rows() == m.cols());
    }
}

TEST_CASE("subquotient dimensions") {
    FpSubquotient whole = full_space(2, 2);
    CHECK(whole.dim() == 2);

    FpMatrix s = FpMatrix::identity(2, 2);
    CHECK(subquotient(2, s, s).dim() == 0);

    FpMatrix t = FpMatrix::from_rows(2, {{1, 1}});
    FpSubquotient q = subquotient(2, s, t);
    CHECK(q.dim() == 1);  // two cosets of span{(1,1)} in F_2^2

    CHECK_THROWS_AS(subquotient(2, t, s), ContainmentError);
}

TEST_CASE("subquotient reduce and lift round-trip") {
    FpMatrix s = FpMatrix::identity(3, 3);
    FpMatrix t = FpMatrix::from_rows(3, {{1, 2, 0}});
    FpSubquotient q = subquotient(3, s, t);
    CHECK(q.dim() == 2);
    FpVector v{2, 1, 1};
    FpVector c = q.reduce(v);
    FpVector w = q.lift(c);
    // v and w must differ by an element of span{(1,2,0)}.
    FpVector diff(3);
    for (int i = 0; i < 3; ++i) diff[i] = (v[i] + 3 - w[i]) % 3;
    CHECK(in_row_space(t, diff));
}

TEST_CASE("check_exact on the spec examples") {
    FpMatrix zero_1x1(2, 1, 1);
    FpMatrix id1 = FpMatrix::identity(2, 1);
    CHECK(check_exact(zero_1x1, id1).exact);
    CHECK(check_exact(id1, zero_1x1).exact);

    // f = [[1,0]]^T : F_2 -> F_2^2, g = [[0,1]] : F_2^2 -> F_2.
    FpMatrix f = FpMatrix::from_rows(2, {{1}, {0}});
    FpMatrix g = FpMatrix::from_rows(2, {{0, 1}});
    ExactnessVerdict v = check_exact(f, g);
    CHECK(v.exact);
    CHECK(v.dim_image == 1);
    CHECK(v.dim_kernel == 1);

    CHECK_THROWS_AS(check_exact(f, FpMatrix::from_rows(2, {{1, 0, 0}})), ShapeError);
}

TEST_CASE("exactness inequality for random complexes") {
    std::mt19937 rng(71);
    for (int iter = 0; iter < 30; ++iter) {
        std::uint32_t p = (iter & 1) ? 2 : 5;
        // Build g f = 0 by choosing g, then f with columns in ker g.
        FpMatrix g = random_matrix(rng, p, 2 + iter % 3, 4 + iter % 3);
        FpMatrix kb = kernel_basis(g);
        if (kb.rows() == 0) continue;
        std::uniform_int_distribution<std::uint32_t> d(0, p - 1);
        FpMatrix f(p, g.cols(), 3);
        for (std::size_t c = 0; c < 3; ++c) {
            FpVector col(g.cols(), 0);
            for (std::size_t t = 0; t < kb.rows(); ++t) {
                std::uint32_t coeff = d(rng);
                for (std::size_t i = 0; i < col.size(); ++i)
                    col[i] = (col[i] + coeff * kb.at(t, i)) % p;
            }
            for (std::size_t i = 0; i < col.size(); ++i) f.set(i, c, col[i]);
        }
        ExactnessVerdict v = check_exact(f, g);
        CHECK(v.dim_image <= v.dim_kernel);
        CHECK(v.exact == (v.dim_image == v.dim_kernel));
    }
}

TEST_CASE("mixed moduli are rejected") {
    FpMatrix a = FpMatrix::identity(2, 2);
    FpMatrix b = FpMatrix::identity(3, 2);
    CHECK_THROWS_AS(mat_mul(a, b), ShapeError);
    CHECK_THROWS_AS(mat_add(a, b), ShapeError);
}

TEST_CASE("non-prime modulus is rejected") {
    CHECK_THROWS_AS(FpMatrix(4, 1, 1), InvariantError);
    CHECK_THROWS_AS(FpMatrix(1, 1, 1), InvariantError);
}

TEST_CASE("induced_map checks stability") {
    // quotient map F_2^2 -> F_2^2/span{(1,1)} induced by identity
    FpSubquotient src = full_space(2, 2);
    FpSubquotient dst = subquotient(2, FpMatrix::identity(2, 2), FpMatrix::from_rows(2, {{1, 1}}));
    FpMatrix id = FpMatrix::identity(2, 2);
    FpMatrix m = induced_map(id, src, dst);
    CHECK(m.rows() == 1);
    CHECK(m.cols() == 2);

    // A map that does not preserve the quotient part must be refused.
    FpSubquotient src2 = subquotient(2, FpMatrix::identity(2, 2), FpMatrix::from_rows(2, {{0, 1}}));
    FpMatrix swap = FpMatrix::from_rows(2, {{0, 1}, {1, 0}});
    CHECK_THROWS_AS(induced_map(swap, src2, src2), InternalCheckError);
}

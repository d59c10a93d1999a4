#include "mlab/fp_matrix.hpp"

#include <algorithm>
#include <string>

namespace mlab {

namespace {

std::uint32_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t p) {
    std::uint64_t acc = 1;
    base %= p;
    while (exp) {
        if (exp & 1) acc = acc * base % p;
        base = base * base % p;
        exp >>= 1;
    }
    return static_cast<std::uint32_t>(acc);
}

std::uint32_t inv_mod(std::uint32_t a, std::uint32_t p) {
    // p prime, a != 0 mod p
    return pow_mod(a, p - 2, p);
}

}  // namespace

bool is_prime(std::uint32_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

FpMatrix::FpMatrix(std::uint32_t p, std::size_t rows, std::size_t cols)
    : p_(p), rows_(rows), cols_(cols), data_(rows * cols, 0) {
    if (!is_prime(p)) throw InvariantError("FpMatrix: modulus " + std::to_string(p) + " is not prime");
}

FpMatrix FpMatrix::identity(std::uint32_t p, std::size_t n) {
    FpMatrix m(p, n, n);
    for (std::size_t i = 0; i < n; ++i) m.set(i, i, 1);
    return m;
}

FpMatrix FpMatrix::zero(std::uint32_t p, std::size_t rows, std::size_t cols) {
    return FpMatrix(p, rows, cols);
}

FpMatrix FpMatrix::from_rows(std::uint32_t p, const std::vector<std::vector<std::uint32_t>>& rows) {
    std::size_t nc = rows.empty() ? 0 : rows.front().size();
    FpMatrix m(p, rows.size(), nc);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != nc) throw ShapeError("from_rows: ragged rows");
        for (std::size_t c = 0; c < nc; ++c) m.set(r, c, rows[r][c]);
    }
    return m;
}

std::vector<std::uint32_t> FpMatrix::row(std::size_t r) const {
    return {data_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
            data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_)};
}

FpMatrix FpMatrix::transpose() const {
    FpMatrix t(p_, cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) t.set(c, r, at(r, c));
    return t;
}

bool FpMatrix::is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](std::uint32_t v) { return v == 0; });
}

bool FpMatrix::is_identity() const {
    if (rows_ != cols_) return false;
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c)
            if (at(r, c) != (r == c ? 1u : 0u)) return false;
    return true;
}

static void require_same_p(const FpMatrix& a, const FpMatrix& b, const char* what) {
    if (a.p() != b.p())
        throw ShapeError(std::string(what) + ": mixed moduli " + std::to_string(a.p()) + " and " +
                         std::to_string(b.p()));
}

FpMatrix mat_add(const FpMatrix& a, const FpMatrix& b) {
    require_same_p(a, b, "mat_add");
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw ShapeError("mat_add: shape mismatch");
    FpMatrix r(a.p(), a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) r.set(i, j, a.at(i, j) + b.at(i, j));
    return r;
}

FpMatrix mat_sub(const FpMatrix& a, const FpMatrix& b) {
    require_same_p(a, b, "mat_sub");
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw ShapeError("mat_sub: shape mismatch");
    FpMatrix r(a.p(), a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) r.set(i, j, a.at(i, j) + a.p() - b.at(i, j));
    return r;
}

FpMatrix mat_mul(const FpMatrix& a, const FpMatrix& b) {
    require_same_p(a, b, "mat_mul");
    if (a.cols() != b.rows())
        throw ShapeError("mat_mul: " + std::to_string(a.cols()) + " != " + std::to_string(b.rows()));
    FpMatrix r(a.p(), a.rows(), b.cols());
    const std::uint64_t p = a.p();
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            std::uint64_t aik = a.at(i, k);
            if (!aik) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) {
                std::uint64_t v = r.at(i, j) + aik * b.at(k, j) % p;
                r.set(i, j, static_cast<std::uint32_t>(v % p));
            }
        }
    }
    return r;
}

FpMatrix mat_scale(const FpMatrix& a, std::uint32_t s) {
    FpMatrix r(a.p(), a.rows(), a.cols());
    std::uint64_t ss = s % a.p();
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            r.set(i, j, static_cast<std::uint32_t>(ss * a.at(i, j) % a.p()));
    return r;
}

FpMatrix vstack(const FpMatrix& a, const FpMatrix& b) {
    require_same_p(a, b, "vstack");
    if (a.cols() != b.cols() && a.rows() != 0 && b.rows() != 0)
        throw ShapeError("vstack: column mismatch");
    std::size_t nc = a.rows() ? a.cols() : b.cols();
    FpMatrix r(a.p(), a.rows() + b.rows(), nc);
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < nc; ++j) r.set(i, j, a.at(i, j));
    for (std::size_t i = 0; i < b.rows(); ++i)
        for (std::size_t j = 0; j < nc; ++j) r.set(a.rows() + i, j, b.at(i, j));
    return r;
}

FpVector mat_apply(const FpMatrix& m, const FpVector& v) {
    if (v.size() != m.cols()) throw ShapeError("apply: dimension mismatch");
    FpVector out(m.rows(), 0);
    const std::uint64_t p = m.p();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        std::uint64_t acc = 0;
        for (std::size_t j = 0; j < m.cols(); ++j) acc += static_cast<std::uint64_t>(m.at(i, j)) * v[j] % p;
        out[i] = static_cast<std::uint32_t>(acc % p);
    }
    return out;
}

RrefResult rref(const FpMatrix& m) {
    RrefResult res;
    res.reduced = m;
    FpMatrix& a = res.reduced;
    const std::uint32_t p = a.p();
    std::size_t lead = 0;
    for (std::size_t c = 0; c < a.cols() && lead < a.rows(); ++c) {
        std::size_t piv = lead;
        while (piv < a.rows() && a.at(piv, c) == 0) ++piv;
        if (piv == a.rows()) continue;
        if (piv != lead)
            for (std::size_t j = 0; j < a.cols(); ++j) {
                std::uint32_t t = a.at(lead, j);
                a.set(lead, j, a.at(piv, j));
                a.set(piv, j, t);
            }
        std::uint64_t inv = inv_mod(a.at(lead, c), p);
        for (std::size_t j = c; j < a.cols(); ++j)
            a.set(lead, j, static_cast<std::uint32_t>(inv * a.at(lead, j) % p));
        for (std::size_t r = 0; r < a.rows(); ++r) {
            if (r == lead) continue;
            std::uint64_t f = a.at(r, c);
            if (!f) continue;
            for (std::size_t j = c; j < a.cols(); ++j) {
                std::uint64_t v = a.at(r, j) + (p - static_cast<std::uint32_t>(f * a.at(lead, j) % p));
                a.set(r, j, static_cast<std::uint32_t>(v % p));
            }
        }
        res.pivots.push_back(c);
        ++lead;
    }
    res.rank = res.pivots.size();
    return res;
}

std::size_t rank(const FpMatrix& m) { return rref(m).rank; }

FpMatrix kernel_basis(const FpMatrix& m) {
    RrefResult r = rref(m);
    const std::size_t n = m.cols();
    std::vector<bool> is_pivot(n, false);
    for (std::size_t c : r.pivots) is_pivot[c] = true;
    std::vector<std::size_t> free_cols;
    for (std::size_t c = 0; c < n; ++c)
        if (!is_pivot[c]) free_cols.push_back(c);

    FpMatrix basis(m.p(), free_cols.size(), n);
    const std::uint32_t p = m.p();
    for (std::size_t k = 0; k < free_cols.size(); ++k) {
        std::size_t fc = free_cols[k];
        basis.set(k, fc, 1);
        for (std::size_t i = 0; i < r.rank; ++i) {
            std::uint32_t v = r.reduced.at(i, fc);
            if (v) basis.set(k, r.pivots[i], p - v);
        }
    }
    return row_space_basis(basis);  // canonical form
}

FpMatrix row_space_basis(const FpMatrix& m) {
    RrefResult r = rref(m);
    FpMatrix b(m.p(), r.rank, m.cols());
    for (std::size_t i = 0; i < r.rank; ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) b.set(i, j, r.reduced.at(i, j));
    return b;
}

FpMatrix image_basis(const FpMatrix& m) { return row_space_basis(m.transpose()); }

bool in_row_space(const FpMatrix& basis, const FpVector& v) {
    if (basis.rows() == 0) return std::all_of(v.begin(), v.end(), [](std::uint32_t x) { return x == 0; });
    FpMatrix stacked = vstack(basis, FpMatrix::from_rows(basis.p(), {v}));
    return rank(stacked) == rank(basis);
}

bool row_space_contains(const FpMatrix& big, const FpMatrix& small) {
    if (small.rows() == 0) return true;
    if (big.rows() == 0) return small.is_zero();
    return rank(vstack(big, small)) == rank(big);
}

FpVector solve_in_rows(const FpMatrix& basis, const FpVector& v) {
    // Solve a * basis = v for the row vector a; basis rows are independent.
    const std::size_t k = basis.rows();
    if (v.size() != basis.cols()) throw ShapeError("solve_in_rows: dimension mismatch");
    // Augmented system on the transpose: basis^T (k columns) | v^T.
    FpMatrix aug(basis.p(), basis.cols(), k + 1);
    for (std::size_t i = 0; i < basis.cols(); ++i) {
        for (std::size_t j = 0; j < k; ++j) aug.set(i, j, basis.at(j, i));
        aug.set(i, k, v[i]);
    }
    RrefResult r = rref(aug);
    FpVector x(k, 0);
    for (std::size_t i = 0; i < r.rank; ++i) {
        std::size_t c = r.pivots[i];
        if (c == k) throw ContainmentError("solve_in_rows: vector outside row space");
        x[c] = r.reduced.at(i, k);
    }
    return x;
}

FpVector solve_columns(const FpMatrix& a, const FpVector& b) {
    if (b.size() != a.rows()) throw ShapeError("solve_columns: dimension mismatch");
    FpMatrix aug(a.p(), a.rows(), a.cols() + 1);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) aug.set(i, j, a.at(i, j));
        aug.set(i, a.cols(), b[i]);
    }
    RrefResult r = rref(aug);
    FpVector x(a.cols(), 0);
    for (std::size_t i = 0; i < r.rank; ++i) {
        std::size_t c = r.pivots[i];
        if (c == a.cols()) throw ContainmentError("solve_columns: inconsistent system");
        x[c] = r.reduced.at(i, a.cols());
    }
    return x;
}

FpSubquotient::FpSubquotient(std::size_t ambient_dim, FpMatrix sub, FpMatrix quot)
    : ambient_(ambient_dim), sub_(std::move(sub)), quot_(std::move(quot)) {
    if (sub_.p() != quot_.p()) throw ShapeError("FpSubquotient: mixed moduli");
    if ((sub_.rows() && sub_.cols() != ambient_) || (quot_.rows() && quot_.cols() != ambient_))
        throw ShapeError("FpSubquotient: basis width != ambient dim");
    sub_ = row_space_basis(sub_.rows() ? sub_ : FpMatrix(sub_.p(), 0, ambient_));
    quot_ = row_space_basis(quot_.rows() ? quot_ : FpMatrix(quot_.p(), 0, ambient_));
    if (!row_space_contains(sub_, quot_))
        throw ContainmentError("FpSubquotient: quotient space not contained in subspace");

    // Coset representatives: rows of sub_ that are independent over quot_.
    std::vector<std::vector<std::uint32_t>> reps;
    FpMatrix acc = quot_;
    for (std::size_t i = 0; i < sub_.rows(); ++i) {
        FpVector r = sub_.row(i);
        if (!in_row_space(acc, r)) {
            reps.push_back(r);
            acc = row_space_basis(vstack(acc, FpMatrix::from_rows(sub_.p(), {r})));
        }
    }
    reps_ = reps.empty() ? FpMatrix(sub_.p(), 0, ambient_) : FpMatrix::from_rows(sub_.p(), reps);
    solve_rows_ = vstack(reps_, quot_);
}

bool FpSubquotient::contains(const FpVector& v) const { return in_row_space(sub_, v); }

FpVector FpSubquotient::reduce(const FpVector& v) const {
    if (solve_rows_.rows() == 0) {
        for (std::uint32_t x : v)
            if (x) throw ContainmentError("reduce: vector outside subspace");
        return {};
    }
    FpVector all = solve_in_rows(solve_rows_, v);
    return FpVector(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(dim()));
}

FpVector FpSubquotient::lift(const FpVector& c) const {
    if (c.size() != dim()) throw ShapeError("lift: wrong coordinate length");
    FpVector v(ambient_, 0);
    const std::uint64_t p = reps_.p();
    for (std::size_t i = 0; i < dim(); ++i)
        for (std::size_t j = 0; j < ambient_; ++j)
            v[j] = static_cast<std::uint32_t>((v[j] + static_cast<std::uint64_t>(c[i]) * reps_.at(i, j)) % p);
    return v;
}

FpSubquotient full_space(std::uint32_t p, std::size_t n) {
    return FpSubquotient(n, FpMatrix::identity(p, n), FpMatrix(p, 0, n));
}

FpSubquotient subquotient(std::size_t ambient_dim, const FpMatrix& s, const FpMatrix& t) {
    return FpSubquotient(ambient_dim, s, t);
}

FpMatrix induced_map(const FpMatrix& m, const FpSubquotient& src, const FpSubquotient& dst) {
    if (m.cols() != src.ambient_dim() || m.rows() != dst.ambient_dim())
        throw ShapeError("induced_map: ambient dimensions do not match the map");
    for (std::size_t i = 0; i < src.quot_basis().rows(); ++i) {
        FpVector w = mat_apply(m, src.quot_basis().row(i));
        if (!in_row_space(dst.quot_basis(), w))
            throw InternalCheckError("induced_map: map does not preserve the quotient subspace");
    }
    FpMatrix out(m.p(), dst.dim(), src.dim());
    for (std::size_t j = 0; j < src.dim(); ++j) {
        FpVector w = mat_apply(m, src.reps().row(j));
        if (!dst.contains(w)) throw InternalCheckError("induced_map: image leaves the target subspace");
        FpVector c = dst.reduce(w);
        for (std::size_t i = 0; i < dst.dim(); ++i) out.set(i, j, c[i]);
    }
    return out;
}

ExactnessVerdict check_exact(const FpMatrix& f, const FpMatrix& g) {
    require_same_p(f, g, "check_exact");
    if (g.cols() != f.rows()) throw ShapeError("check_exact: maps are not composable");
    ExactnessVerdict v;
    v.dim_image = rank(f);
    v.dim_kernel = g.cols() - rank(g);
    v.exact = mat_mul(g, f).is_zero() && v.dim_image == v.dim_kernel;
    return v;
}

}  // namespace mlab

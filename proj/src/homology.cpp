#include "mlab/homology.hpp"

#include <string>

#include "mlab/errors.hpp"

namespace mlab {

FpVector FreeCoinv::reduce(const FpVector& full) const {
    const std::size_t n = group->order();
    if (full.size() != rank * n) throw ShapeError("FreeCoinv::reduce: wrong length");
    FpVector out(dim(), 0);
    const std::uint32_t p = group->p();
    for (std::size_t i = 0; i < rank; ++i)
        for (unsigned g = 0; g < n; ++g)
            if (full[i * n + g]) {
                std::size_t c = static_cast<std::size_t>(coset_of[g]);
                out[i * cosets() + c] = (out[i * cosets() + c] + full[i * n + g]) % p;
            }
    return out;
}

FpVector FreeCoinv::lift(const FpVector& reduced) const {
    const std::size_t n = group->order();
    if (reduced.size() != dim()) throw ShapeError("FreeCoinv::lift: wrong length");
    FpVector out(rank * n, 0);
    for (std::size_t i = 0; i < rank; ++i)
        for (std::size_t c = 0; c < cosets(); ++c) out[i * n + coset_rep[c]] = reduced[i * cosets() + c];
    return out;
}

FreeCoinv free_coinvariants(const PGroupPtr& g, std::size_t rank, const Subgroup& u) {
    FreeCoinv fc{g, rank, u, {}, std::vector<int>(g->order(), -1)};
    for (unsigned e = 0; e < g->order(); ++e) {
        if (fc.coset_of[e] >= 0) continue;
        int id = static_cast<int>(fc.coset_rep.size());
        fc.coset_rep.push_back(e);
        for (unsigned x : u.elements()) fc.coset_of[g->mul(x, e)] = id;  // right coset U e
    }
    return fc;
}

FpMatrix reduced_boundary(const Resolution& r, const Subgroup& u, std::size_t k) {
    const std::uint32_t p = r.target.p();
    const std::size_t n = r.group->order();
    FreeCoinv src = free_coinvariants(r.group, r.rank_at(k), u);
    FreeCoinv dst = free_coinvariants(r.group, r.rank_at(k == 0 ? 0 : k - 1), u);
    if (k == 0 || k > r.length()) return FpMatrix(p, k == 0 ? 0 : dst.dim(), src.dim());
    FpMatrix out(p, dst.dim(), src.dim());
    const FpMatrix& d = r.d(k);
    for (std::size_t i = 0; i < src.rank; ++i)
        for (std::size_t c = 0; c < src.cosets(); ++c) {
            std::size_t full_col = i * n + src.coset_rep[c];
            FpVector col(d.rows());
            for (std::size_t row = 0; row < d.rows(); ++row) col[row] = d.at(row, full_col);
            FpVector red = dst.reduce(col);
            for (std::size_t row = 0; row < red.size(); ++row) out.set(row, i * src.cosets() + c, red[row]);
        }
    return out;
}

FpSubquotient restricted_homology(const Resolution& r, const Subgroup& u, std::size_t k) {
    const std::uint32_t p = r.target.p();
    if (k + 1 > r.length() && r.truncated)
        throw DegreeOverCap("restricted homology at degree " + std::to_string(k) +
                            " needs the resolution to reach degree " + std::to_string(k + 1));
    FreeCoinv here = free_coinvariants(r.group, r.rank_at(k), u);
    if (r.rank_at(k) == 0) return FpSubquotient(0, FpMatrix(p, 0, 0), FpMatrix(p, 0, 0));

    FpMatrix cycles = k == 0 ? FpMatrix::identity(p, here.dim()) : kernel_basis(reduced_boundary(r, u, k));
    FpMatrix boundaries = k + 1 <= r.length()
                              ? image_basis(reduced_boundary(r, u, k + 1))
                              : FpMatrix(p, 0, here.dim());
    return FpSubquotient(here.dim(), cycles, boundaries);
}

FpMatrix coinv_transfer(const FreeCoinv& cu, const FreeCoinv& cv) {
    const PGroupPtr& g = cu.group;
    const std::uint32_t p = g->p();
    if (cu.rank != cv.rank) throw ShapeError("coinv_transfer: rank mismatch");
    if (!cv.sub.subset_of(cu.sub)) throw NotSubgroup("coinv_transfer: V must sit inside U");
    std::vector<unsigned> reps = left_transversal(cv.sub, cu.sub);
    std::vector<unsigned> ugens = generating_set(cu.sub);

    FpMatrix out(p, cv.dim(), cu.dim());
    for (std::size_t i = 0; i < cu.rank; ++i)
        for (std::size_t c = 0; c < cu.cosets(); ++c) {
            unsigned e = cu.coset_rep[c];
            FpVector acc(cv.cosets(), 0);
            for (unsigned r : reps) {
                std::size_t cc = static_cast<std::size_t>(cv.coset_of[g->mul(g->inv(r), e)]);
                acc[cc] = (acc[cc] + 1) % p;
            }
            for (std::size_t row = 0; row < acc.size(); ++row)
                out.set(i * cv.cosets() + row, i * cu.cosets() + c, acc[row]);

            // Independence of the lift: u * e must transfer identically for
            // every generator u of U.
            for (unsigned ugen : ugens) {
                unsigned e2 = g->mul(ugen, e);
                FpVector acc2(cv.cosets(), 0);
                for (unsigned r : reps) {
                    std::size_t cc = static_cast<std::size_t>(cv.coset_of[g->mul(g->inv(r), e2)]);
                    acc2[cc] = (acc2[cc] + 1) % p;
                }
                if (acc2 != acc) throw InternalCheckError("chain transfer is not well defined");
            }
        }
    return out;
}

FpMatrix coinv_projection(const FreeCoinv& cv, const FreeCoinv& cu) {
    if (cv.rank != cu.rank) throw ShapeError("coinv_projection: rank mismatch");
    if (!cv.sub.subset_of(cu.sub)) throw NotSubgroup("coinv_projection: V must sit inside U");
    FpMatrix out(cu.group->p(), cu.dim(), cv.dim());
    for (std::size_t i = 0; i < cv.rank; ++i)
        for (std::size_t c = 0; c < cv.cosets(); ++c) {
            std::size_t cc = static_cast<std::size_t>(cu.coset_of[cv.coset_rep[c]]);
            out.set(i * cu.cosets() + cc, i * cv.cosets() + c, 1);
        }
    return out;
}

FpMatrix coinv_conjugation(const FreeCoinv& cu, unsigned g, const FreeCoinv& cgu) {
    const PGroupPtr& gr = cu.group;
    if (cu.rank != cgu.rank) throw ShapeError("coinv_conjugation: rank mismatch");
    FpMatrix out(gr->p(), cgu.dim(), cu.dim());
    for (std::size_t i = 0; i < cu.rank; ++i)
        for (std::size_t c = 0; c < cu.cosets(); ++c) {
            unsigned moved = gr->mul(g, cu.coset_rep[c]);
            std::size_t cc = static_cast<std::size_t>(cgu.coset_of[moved]);
            out.set(i * cgu.cosets() + cc, i * cu.cosets() + c, 1);
        }
    return out;
}

HomologyResult homology(const FpGModule& m, std::size_t k, std::size_t cap) {
    if (m.dim() == 0) throw ZeroModule("homology of the zero module");
    if (k > cap) throw DegreeOverCap("homology degree above the cap");
    Resolution r = minimal_resolution(m, cap);
    Subgroup whole = Subgroup::whole(m.group());

    // Minimality: every reduced boundary at full level must vanish.
    for (std::size_t j = 1; j <= r.length(); ++j)
        if (!reduced_boundary(r, whole, j).is_zero())
            throw InternalCheckError("minimal resolution has a nonzero coinvariant differential");

    HomologyResult res;
    res.k = k;
    res.via_minimal = true;
    res.dims = r.rank_at(k);
    res.space = FpSubquotient(res.dims, FpMatrix::identity(m.p(), res.dims), FpMatrix(m.p(), 0, res.dims));
    return res;
}

FpMatrix cores_on_resolution(const Resolution& r, const Subgroup& big, const Subgroup& small,
                             std::size_t d) {
    if (!small.subset_of(big)) throw NotSubgroup("cores_on_resolution: subgroup pair mismatch");
    const std::uint32_t p = r.target.p();

    FpSubquotient hu = restricted_homology(r, big, d);
    FpSubquotient hv = restricted_homology(r, small, d);
    if (r.rank_at(d) == 0) return FpMatrix(p, hv.dim(), hu.dim());

    FreeCoinv cu = free_coinvariants(r.group, r.rank_at(d), big);
    FreeCoinv cv = free_coinvariants(r.group, r.rank_at(d), small);
    FpMatrix tr = coinv_transfer(cu, cv);

    // Chain-map property: d-bar^V o tr = tr o d-bar^U at the degrees touching d.
    if (d >= 1) {
        FreeCoinv cu1 = free_coinvariants(r.group, r.rank_at(d - 1), big);
        FreeCoinv cv1 = free_coinvariants(r.group, r.rank_at(d - 1), small);
        FpMatrix lhs = mat_mul(reduced_boundary(r, small, d), tr);
        FpMatrix rhs = mat_mul(coinv_transfer(cu1, cv1), reduced_boundary(r, big, d));
        if (lhs != rhs) throw InternalCheckError("chain transfer does not commute with the boundary");
    }
    if (d + 1 <= r.length()) {
        FreeCoinv cu1 = free_coinvariants(r.group, r.rank_at(d + 1), big);
        FreeCoinv cv1 = free_coinvariants(r.group, r.rank_at(d + 1), small);
        FpMatrix lhs = mat_mul(tr, reduced_boundary(r, big, d + 1));
        FpMatrix rhs = mat_mul(reduced_boundary(r, small, d + 1), coinv_transfer(cu1, cv1));
        if (lhs != rhs) throw InternalCheckError("chain transfer does not commute with the boundary");
    }

    return induced_map(tr, hu, hv);
}

FpMatrix corestriction(const FpGModule& m, const Subgroup& u, std::size_t d, std::size_t cap) {
    if (m.dim() == 0) throw ZeroModule("corestriction of the zero module");
    if (u.parent() != m.group()) throw NotSubgroup("corestriction: subgroup of a different group");
    if (d > cap) throw DegreeOverCap("corestriction degree above the cap");
    Resolution r = minimal_resolution(m, cap);
    return cores_on_resolution(r, Subgroup::whole(m.group()), u, d);
}

TatePair tate(const FpGModule& a) {
    const PGroupPtr& g = a.group();
    const std::uint32_t p = a.p();
    FpMatrix norm(p, a.dim(), a.dim());
    for (unsigned e = 0; e < g->order(); ++e) norm = mat_add(norm, a.act(e));

    Subgroup whole = Subgroup::whole(g);
    FpMatrix omega = omega_submodule(a, whole);
    FpSubquotient inv = invariants(a);

    // N maps A into A^G and kills omega A.
    for (std::size_t c = 0; c < a.dim(); ++c) {
        FpVector e(a.dim(), 0);
        e[c] = 1;
        if (!inv.contains(mat_apply(norm, e))) throw InternalCheckError("norm image is not invariant");
    }
    for (std::size_t rrow = 0; rrow < omega.rows(); ++rrow) {
        FpVector w = mat_apply(norm, omega.row(rrow));
        for (std::uint32_t x : w)
            if (x) throw InternalCheckError("norm does not kill the augmentation submodule");
    }

    TatePair t{FpSubquotient(a.dim(), kernel_basis(norm), omega),
               FpSubquotient(a.dim(), inv.sub_basis(), image_basis(norm)), norm};
    return t;
}

std::size_t h1_cohomology(const FpGModule& a) {
    if (a.dim() == 0) return 0;
    return homology(contragredient(a), 1, 2).dims;
}

namespace {

FpVector free_translate(const PGroupPtr& g, std::size_t rank, unsigned h, const FpVector& v) {
    const std::size_t n = g->order();
    FpVector out(v.size(), 0);
    for (std::size_t i = 0; i < rank; ++i)
        for (unsigned x = 0; x < n; ++x) out[i * n + g->mul(h, x)] = v[i * n + x];
    return out;
}

}  // namespace

Resolution padded_resolution(const FpGModule& m, std::size_t cap) {
    if (m.dim() == 0) throw ZeroModule("padded_resolution of the zero module");
    const PGroupPtr& g = m.group();
    const std::size_t n = g->order();
    const std::uint32_t p = m.p();

    Resolution res{m, g, {}, {}, FpMatrix(), false};

    FpGModule cur = m;
    FpMatrix embed;  // syzygy basis rows inside the previous free module
    for (std::size_t k = 0; k <= cap; ++k) {
        if (cur.dim() == 0) {
            res.truncated = false;
            return res;
        }
        // One spare free summand mapping to zero keeps the resolution free
        // and exact but destroys minimality.
        FpSubquotient head = coinvariants(cur);
        std::size_t r = head.dim() + 1;
        FpMatrix cover(p, cur.dim(), r * n);
        for (std::size_t i = 0; i + 1 < r; ++i) {
            FpVector lift = head.reps().row(i);
            for (unsigned x = 0; x < n; ++x) {
                FpVector col = cur.act_on(x, lift);
                for (std::size_t row = 0; row < cur.dim(); ++row) cover.set(row, i * n + x, col[row]);
            }
        }
        if (rank(cover) != cur.dim()) throw InternalCheckError("padded cover is not surjective");

        FpMatrix kb = kernel_basis(cover);
        std::vector<FpMatrix> action;
        for (unsigned gen : g->generators()) {
            FpMatrix a(p, kb.rows(), kb.rows());
            for (std::size_t t = 0; t < kb.rows(); ++t) {
                FpVector w = free_translate(g, r, gen, kb.row(t));
                FpVector coords = solve_in_rows(kb, w);
                for (std::size_t i2 = 0; i2 < kb.rows(); ++i2) a.set(i2, t, coords[i2]);
            }
            action.push_back(std::move(a));
        }
        FpGModule syz(g, kb.rows(), std::move(action));

        if (k == 0) {
            res.ranks.push_back(r);
            res.augmentation = cover;
        } else {
            res.ranks.push_back(r);
            res.boundaries.push_back(mat_mul(embed.transpose(), cover));
        }
        embed = kb;
        cur = syz;
    }
    res.truncated = cur.dim() != 0;
    return res;
}

FpMatrix h1_elab_alignment(const Resolution& r, const Subgroup& u, const ElAbQuotient& elab_u) {
    const PGroupPtr& g = r.group;
    const std::uint32_t p = g->p();
    const std::size_t n = g->order();
    if (r.target.dim() != 1) throw PreconditionFailed("alignment needs the trivial module");
    if (r.rank_at(0) != 1) throw InternalCheckError("minimal resolution of F_p must start with one copy");

    FpSubquotient h1 = restricted_homology(r, u, 1);

    SubgroupAsGroup sg = subgroup_as_group(u);
    FreeCoinv c0 = free_coinvariants(g, 1, u);
    FreeCoinv c1 = free_coinvariants(g, r.rank_at(1), u);

    // omega_U and omega_U^2 inside F_p[U] (subgroup coordinates).
    const std::size_t un = u.order();
    std::vector<std::vector<std::uint32_t>> omega_rows;
    for (unsigned e = 1; e < un; ++e) {
        std::vector<std::uint32_t> row(un, 0);
        row[e] = 1;
        row[0] = p - 1;
        omega_rows.push_back(std::move(row));
    }
    FpMatrix omega = omega_rows.empty() ? FpMatrix(p, 0, un) : FpMatrix::from_rows(p, omega_rows);
    std::vector<std::vector<std::uint32_t>> omega2_rows;
    for (std::size_t i = 0; i < omega.rows(); ++i)
        for (unsigned b : sg.group->generators()) {
            std::vector<std::uint32_t> row(un, 0);
            for (unsigned e = 0; e < un; ++e)
                if (omega.at(i, e)) {
                    unsigned eb = sg.group->mul(e, b);
                    row[eb] = (row[eb] + omega.at(i, e)) % p;
                    row[e] = (row[e] + p - omega.at(i, e)) % p;
                }
            omega2_rows.push_back(std::move(row));
        }
    FpMatrix omega2 = omega2_rows.empty() ? FpMatrix(p, 0, un) : FpMatrix::from_rows(p, omega2_rows);
    FpSubquotient w(un, omega, omega2);
    if (w.dim() != elab_u.rank) throw InternalCheckError("dim omega/omega^2 != ElAb rank");

    // Classes [(b_i - 1)] of the ElAb basis, as columns.
    FpMatrix basis_cols(p, w.dim(), elab_u.rank);
    for (std::size_t i = 0; i < elab_u.rank; ++i) {
        FpVector row(un, 0);
        row[sg.restrict_idx[elab_u.basis[i]]] = 1;
        row[0] = (row[0] + p - 1) % p;
        FpVector c = w.reduce(row);
        for (std::size_t rr = 0; rr < w.dim(); ++rr) basis_cols.set(rr, i, c[rr]);
    }

    FpMatrix out(p, elab_u.rank, h1.dim());
    for (std::size_t col = 0; col < h1.dim(); ++col) {
        FpVector x = h1.reps().row(col);  // cycle in (P_1)_U coordinates
        FpVector xhat = c1.lift(x);
        FpVector v(n, 0);  // d_1(xhat) in P_0 = F_p[G]
        if (r.length() >= 1) {
            const FpMatrix& d1 = r.d(1);
            for (std::size_t row = 0; row < n; ++row) {
                std::uint64_t acc = 0;
                for (std::size_t cc = 0; cc < d1.cols(); ++cc)
                    acc += static_cast<std::uint64_t>(d1.at(row, cc)) * xhat[cc] % p;
                v[row] = static_cast<std::uint32_t>(acc % p);
            }
        }
        // phi_0(v): g -> g * rep(Ug)^{-1}
        FpVector fv(un, 0);
        for (unsigned e = 0; e < n; ++e)
            if (v[e]) {
                unsigned rep = c0.coset_rep[static_cast<std::size_t>(c0.coset_of[e])];
                unsigned uelem = g->mul(e, g->inv(rep));
                fv[sg.restrict_idx[uelem]] = (fv[sg.restrict_idx[uelem]] + v[e]) % p;
            }
        FpVector cw = w.reduce(fv);
        FpVector alpha = solve_in_rows(basis_cols.transpose(), cw);
        for (std::size_t i = 0; i < elab_u.rank; ++i) out.set(i, col, alpha[i]);
    }
    return out;
}

}  // namespace mlab

#include "mlab/fpg_module.hpp"

#include <algorithm>
#include <string>

#include "mlab/errors.hpp"

namespace mlab {

FpGModule::FpGModule(PGroupPtr group, std::size_t dim, std::vector<FpMatrix> gen_action,
                     std::size_t cache_budget)
    : group_(std::move(group)), dim_(dim), gen_action_(std::move(gen_action)) {
    if (gen_action_.size() != group_->generators().size())
        throw InvariantError("module needs one action matrix per group generator");
    for (std::size_t j = 0; j < gen_action_.size(); ++j) {
        const FpMatrix& a = gen_action_[j];
        if (a.p() != group_->p()) throw InvariantError("module action has wrong modulus");
        if (a.rows() != dim_ || a.cols() != dim_) throw InvariantError("module action has wrong shape");
        if (rank(a) != dim_)
            throw InvariantError("action of generator g" + std::to_string(j) + " is not invertible");
    }

    const std::size_t n = group_->order();
    if (n * dim_ * dim_ <= cache_budget) {
        element_cache_.resize(n);
        element_cache_[0] = FpMatrix::identity(group_->p(), dim_);
        for (unsigned e = 1; e < n; ++e) {
            std::vector<unsigned> w = group_->word_of(e);
            FpMatrix acc = element_cache_[0];
            unsigned cur = 0;
            for (unsigned letter : w) {
                acc = mat_mul(acc, gen_action_[letter]);
                cur = group_->mul(cur, group_->generators()[letter]);
            }
            if (cur != e) throw InternalCheckError("word decomposition mismatch");
            element_cache_[e] = std::move(acc);
        }
        // Full relation check: rho(e) rho(g_j) = rho(e g_j) for every entry.
        for (unsigned e = 0; e < n; ++e)
            for (std::size_t j = 0; j < gen_action_.size(); ++j) {
                unsigned t = group_->mul(e, group_->generators()[j]);
                if (mat_mul(element_cache_[e], gen_action_[j]) != element_cache_[t])
                    throw InvariantError("action does not respect the Cayley table at generator g" +
                                         std::to_string(j));
            }
    } else {
        for (std::size_t j = 0; j < gen_action_.size(); ++j) {
            unsigned ord = group_->element_order(group_->generators()[j]);
            FpMatrix acc = FpMatrix::identity(group_->p(), dim_);
            for (unsigned i = 0; i < ord; ++i) acc = mat_mul(acc, gen_action_[j]);
            if (!acc.is_identity())
                throw InvariantError("generator action order mismatch for g" + std::to_string(j));
        }
    }
}

FpMatrix FpGModule::act(unsigned element) const {
    if (!element_cache_.empty()) return element_cache_[element];
    FpMatrix acc = FpMatrix::identity(group_->p(), dim_);
    for (unsigned letter : group_->word_of(element)) acc = mat_mul(acc, gen_action_[letter]);
    return acc;
}

FpVector FpGModule::act_on(unsigned element, const FpVector& v) const {
    if (!element_cache_.empty()) return mat_apply(element_cache_[element], v);
    FpVector out = v;
    std::vector<unsigned> w = group_->word_of(element);
    for (auto it = w.rbegin(); it != w.rend(); ++it) out = mat_apply(gen_action_[*it], out);
    return out;
}

FpGModule trivial_module(const PGroupPtr& g) {
    std::vector<FpMatrix> act(g->generators().size(), FpMatrix::identity(g->p(), 1));
    return FpGModule(g, 1, std::move(act));
}

FpGModule zero_module(const PGroupPtr& g) {
    std::vector<FpMatrix> act(g->generators().size(), FpMatrix(g->p(), 0, 0));
    return FpGModule(g, 0, std::move(act));
}

FpGModule regular_module(const PGroupPtr& g) {
    return permutation_module(g, Subgroup::trivial(g));
}

FpGModule permutation_module(const PGroupPtr& g, const Subgroup& u) {
    if (u.parent() != g) throw NotSubgroup("permutation_module: subgroup of a different group");
    Subgroup whole = Subgroup::whole(g);
    std::vector<unsigned> reps = left_transversal(u, whole);
    std::vector<int> coset_of(g->order(), -1);
    for (std::size_t j = 0; j < reps.size(); ++j)
        for (unsigned e : u.elements()) coset_of[g->mul(reps[j], e)] = static_cast<int>(j);

    std::vector<FpMatrix> act;
    for (unsigned gen : g->generators()) {
        FpMatrix m(g->p(), reps.size(), reps.size());
        for (std::size_t c = 0; c < reps.size(); ++c)
            m.set(static_cast<std::size_t>(coset_of[g->mul(gen, reps[c])]), c, 1);
        act.push_back(std::move(m));
    }
    return FpGModule(g, reps.size(), std::move(act));
}

FpSubquotient invariants_under(const FpGModule& m, const Subgroup& u) {
    const std::uint32_t p = m.p();
    FpMatrix constraints(p, 0, m.dim());
    for (unsigned gen : generating_set(u))
        constraints = vstack(constraints, mat_sub(m.act(gen), FpMatrix::identity(p, m.dim())));
    FpMatrix fixed = constraints.rows() ? kernel_basis(constraints) : FpMatrix::identity(p, m.dim());
    return FpSubquotient(m.dim(), fixed, FpMatrix(p, 0, m.dim()));
}

FpSubquotient invariants(const FpGModule& m) {
    return invariants_under(m, Subgroup::whole(m.group()));
}

FpMatrix omega_submodule(const FpGModule& m, const Subgroup& u) {
    const std::uint32_t p = m.p();
    FpMatrix span(p, 0, m.dim());
    for (unsigned gen : generating_set(u))
        span = vstack(span, mat_sub(m.act(gen), FpMatrix::identity(p, m.dim())).transpose());
    return row_space_basis(span);
}

FpSubquotient coinvariants_under(const FpGModule& m, const Subgroup& u) {
    return FpSubquotient(m.dim(), FpMatrix::identity(m.p(), m.dim()), omega_submodule(m, u));
}

FpSubquotient coinvariants(const FpGModule& m) {
    return coinvariants_under(m, Subgroup::whole(m.group()));
}

bool is_projective(const FpGModule& m) {
    return m.dim() == m.group()->order() * coinvariants(m).dim();
}

namespace {

// Basis index (i, g) -> i*|G| + g of the free module F_p[G]^rank; the left
// action of h permutes it to (i, h*g).
FpVector free_act(const PGroupPtr& g, std::size_t rank, unsigned h, const FpVector& v) {
    const std::size_t n = g->order();
    FpVector out(v.size(), 0);
    for (std::size_t i = 0; i < rank; ++i)
        for (unsigned x = 0; x < n; ++x) out[i * n + g->mul(h, x)] = v[i * n + x];
    return out;
}

}  // namespace

ProjectiveCover projective_cover(const FpGModule& m) {
    if (m.dim() == 0) throw ZeroModule("projective_cover of the zero module");
    const PGroupPtr& g = m.group();
    const std::size_t n = g->order();
    FpSubquotient head = coinvariants(m);
    const std::size_t r = head.dim();

    FpMatrix cover(m.p(), m.dim(), r * n);
    for (std::size_t i = 0; i < r; ++i) {
        FpVector lift = head.reps().row(i);
        for (unsigned x = 0; x < n; ++x) {
            FpVector col = m.act_on(x, lift);
            for (std::size_t rr = 0; rr < m.dim(); ++rr) cover.set(rr, i * n + x, col[rr]);
        }
    }
    if (rank(cover) != m.dim()) throw InternalCheckError("projective cover is not surjective");

    FpMatrix kbasis = kernel_basis(cover);
    const std::size_t s = kbasis.rows();
    std::vector<FpMatrix> action;
    for (unsigned gen : g->generators()) {
        FpMatrix a(m.p(), s, s);
        for (std::size_t t = 0; t < s; ++t) {
            FpVector w = free_act(g, r, gen, kbasis.row(t));
            FpVector coords = solve_in_rows(kbasis, w);  // throws if the kernel is not stable
            for (std::size_t i = 0; i < s; ++i) a.set(i, t, coords[i]);
        }
        action.push_back(std::move(a));
    }

    ProjectiveCover out{r, std::move(cover), FpGModule(g, s, std::move(action)), std::move(kbasis)};
    return out;
}

Resolution minimal_resolution(const FpGModule& m, std::size_t cap) {
    if (m.dim() == 0) throw ZeroModule("minimal_resolution of the zero module");
    Resolution res{m, m.group(), {}, {}, FpMatrix(), false};

    ProjectiveCover c = projective_cover(m);
    res.ranks.push_back(c.rank);
    res.augmentation = c.cover;
    res.truncated = false;

    FpGModule syz = c.syzygy;
    FpMatrix embed = c.syzygy_basis;  // rows: syzygy basis inside P_{k-1}
    for (std::size_t k = 1; k <= cap; ++k) {
        if (syz.dim() == 0) return res;
        ProjectiveCover ck = projective_cover(syz);
        // d_k = (embedding of the syzygy) o (cover in syzygy coordinates).
        FpMatrix dk = mat_mul(embed.transpose(), ck.cover);
        res.ranks.push_back(ck.rank);
        res.boundaries.push_back(std::move(dk));
        syz = ck.syzygy;
        embed = ck.syzygy_basis;
    }
    res.truncated = syz.dim() != 0;
    return res;
}

FpGModule restrict_module(const FpGModule& m, const Subgroup& u) {
    if (u.parent() != m.group()) throw NotSubgroup("restrict_module: subgroup of a different group");
    SubgroupAsGroup sub = subgroup_as_group(u);
    std::vector<FpMatrix> act;
    for (unsigned gen : sub.group->generators()) act.push_back(m.act(sub.embed[gen]));
    return FpGModule(sub.group, m.dim(), std::move(act));
}

FpGModule induce_module(const Subgroup& h, const FpGModule& n) {
    const PGroupPtr& g = h.parent();
    SubgroupAsGroup sub = subgroup_as_group(h);
    // The module must live over a structural copy of the subgroup-as-group.
    if (n.group()->order() != sub.group->order() || n.group()->p() != sub.group->p())
        throw NotSubgroup("induce_module: module is not over the subgroup");
    for (unsigned a = 0; a < sub.group->order(); ++a)
        for (unsigned b = 0; b < sub.group->order(); ++b)
            if (n.group()->mul(a, b) != sub.group->mul(a, b))
                throw NotSubgroup("induce_module: module group does not match the subgroup");

    std::vector<unsigned> reps = left_transversal(h, Subgroup::whole(g));
    std::vector<int> coset_of(g->order(), -1);
    for (std::size_t j = 0; j < reps.size(); ++j)
        for (unsigned e : h.elements()) coset_of[g->mul(reps[j], e)] = static_cast<int>(j);

    const std::size_t dn = n.dim();
    const std::size_t dim = reps.size() * dn;
    std::vector<FpMatrix> act;
    for (unsigned gen : g->generators()) {
        FpMatrix a(g->p(), dim, dim);
        for (std::size_t c = 0; c < reps.size(); ++c) {
            unsigned gr = g->mul(gen, reps[c]);
            std::size_t c2 = static_cast<std::size_t>(coset_of[gr]);
            unsigned hh = g->mul(g->inv(reps[c2]), gr);
            FpMatrix rho = n.act(sub.restrict_idx[hh]);
            for (std::size_t col = 0; col < dn; ++col)
                for (std::size_t row = 0; row < dn; ++row)
                    a.set(c2 * dn + row, c * dn + col, rho.at(row, col));
        }
        act.push_back(std::move(a));
    }
    return FpGModule(g, dim, std::move(act));
}

FpGModule coinduce_module(const Subgroup& h, const FpGModule& n) {
    // Canonically isomorphic to induction at finite index; same construction.
    return induce_module(h, n);
}

namespace {

bool same_group_structure(const PGroupPtr& a, const PGroupPtr& b) {
    if (a == b) return true;
    if (a->p() != b->p() || a->order() != b->order()) return false;
    for (unsigned x = 0; x < a->order(); ++x)
        for (unsigned y = 0; y < a->order(); ++y)
            if (a->mul(x, y) != b->mul(x, y)) return false;
    return true;
}

}  // namespace

std::size_t hom_dim(const FpGModule& m, const FpGModule& n) {
    if (!same_group_structure(m.group(), n.group()))
        throw NotSubgroup("hom_dim: modules over different groups");
    const std::size_t dm = m.dim(), dn = n.dim();
    const std::uint32_t p = m.p();
    if (dm == 0 || dn == 0) return 0;
    const std::size_t vars = dn * dm;  // F(i,j), i < dn, j < dm
    std::size_t ngens = m.group()->generators().size();
    FpMatrix sys(p, ngens * vars, vars);
    std::size_t row = 0;
    for (std::size_t gidx = 0; gidx < ngens; ++gidx) {
        // Element indexing is shared, so act() is valid on both sides even
        // when the two group objects carry different generator lists.
        const FpMatrix a = n.act(m.group()->generators()[gidx]);
        const FpMatrix& b = m.gen_action(gidx);
        for (std::size_t i = 0; i < dn; ++i)
            for (std::size_t j = 0; j < dm; ++j) {
                // sum_k a(i,k) F(k,j) - sum_k F(i,k) b(k,j) = 0
                for (std::size_t k = 0; k < dn; ++k)
                    sys.set(row, k * dm + j, (sys.at(row, k * dm + j) + a.at(i, k)) % p);
                for (std::size_t k = 0; k < dm; ++k)
                    sys.set(row, i * dm + k, (sys.at(row, i * dm + k) + p - b.at(k, j) % p) % p);
                ++row;
            }
    }
    return vars - rank(sys);
}

FpGModule contragredient(const FpGModule& m) {
    std::vector<FpMatrix> act;
    const auto& g = m.group();
    for (unsigned gen : g->generators()) act.push_back(m.act(g->inv(gen)).transpose());
    return FpGModule(g, m.dim(), std::move(act));
}

Submodule submodule_generated(const FpGModule& m, const FpMatrix& spanning_rows) {
    FpMatrix basis = row_space_basis(spanning_rows);
    for (;;) {
        FpMatrix grown = basis;
        for (std::size_t j = 0; j < m.group()->generators().size(); ++j) {
            for (std::size_t r = 0; r < basis.rows(); ++r) {
                FpVector w = mat_apply(m.gen_action(j), basis.row(r));
                grown = vstack(grown, FpMatrix::from_rows(m.p(), {w}));
            }
        }
        grown = row_space_basis(grown);
        if (grown.rows() == basis.rows()) break;
        basis = std::move(grown);
    }
    const std::size_t s = basis.rows();
    std::vector<FpMatrix> act;
    for (std::size_t j = 0; j < m.group()->generators().size(); ++j) {
        FpMatrix a(m.p(), s, s);
        for (std::size_t t = 0; t < s; ++t) {
            FpVector coords = solve_in_rows(basis, mat_apply(m.gen_action(j), basis.row(t)));
            for (std::size_t i = 0; i < s; ++i) a.set(i, t, coords[i]);
        }
        act.push_back(std::move(a));
    }
    return Submodule{std::move(basis), FpGModule(m.group(), s, std::move(act))};
}

FpGModule quotient_module(const FpGModule& m, const FpMatrix& sub_basis) {
    FpSubquotient q(m.dim(), FpMatrix::identity(m.p(), m.dim()), sub_basis);
    std::vector<FpMatrix> act;
    for (std::size_t j = 0; j < m.group()->generators().size(); ++j)
        act.push_back(induced_map(m.gen_action(j), q, q));
    return FpGModule(m.group(), q.dim(), std::move(act));
}

FpGModule direct_sum(const FpGModule& a, const FpGModule& b) {
    if (a.group() != b.group()) throw NotSubgroup("direct_sum: modules over different groups");
    const std::size_t da = a.dim(), db = b.dim();
    std::vector<FpMatrix> act;
    for (std::size_t j = 0; j < a.group()->generators().size(); ++j) {
        FpMatrix m(a.p(), da + db, da + db);
        for (std::size_t i = 0; i < da; ++i)
            for (std::size_t k = 0; k < da; ++k) m.set(i, k, a.gen_action(j).at(i, k));
        for (std::size_t i = 0; i < db; ++i)
            for (std::size_t k = 0; k < db; ++k) m.set(da + i, da + k, b.gen_action(j).at(i, k));
        act.push_back(std::move(m));
    }
    return FpGModule(a.group(), da + db, std::move(act));
}

}  // namespace mlab

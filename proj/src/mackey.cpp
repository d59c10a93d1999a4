#include "mlab/mackey.hpp"

#include <algorithm>
#include <string>

#include "mlab/errors.hpp"

namespace mlab {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::string member_name(const MackeySystem& sys, std::size_t idx) {
    return "#" + std::to_string(idx) + "(|U|=" + std::to_string(sys.members[idx].order()) + ")";
}

}  // namespace

bool MackeySystem::leq(std::size_t v, std::size_t u) const {
    return members[v].subset_of(members[u]);
}

std::size_t MackeySystem::index_of(const Subgroup& s) const {
    for (std::size_t i = 0; i < members.size(); ++i)
        if (members[i].members() == s.members()) return i;
    throw NotSubgroup("subgroup is not a member of the Mackey system");
}

std::size_t MackeySystem::conj_member(unsigned g, std::size_t u) const {
    int v = conj_cache[g * size() + u];
    if (v < 0) throw InternalCheckError("conjugation cache incomplete");
    return static_cast<std::size_t>(v);
}

std::size_t MackeySystem::intersect_member(std::size_t a, std::size_t b) const {
    Subgroup s = members[a].intersect(members[b]);
    for (std::size_t i = 0; i < members.size(); ++i)
        if (members[i].members() == s.members()) return i;
    throw InternalCheckError("Mackey system is not intersection closed");
}

std::size_t MackeySystem::group_index() const {
    if (!contains_group) throw PreconditionFailed("the Mackey system does not contain G");
    return members.size() - 1;
}

std::size_t MackeySystem::minimal_index() const { return 0; }

namespace {

MackeySystemPtr finalize_system(const PGroupPtr& g, std::vector<Subgroup> members) {
    std::sort(members.begin(), members.end(), [](const Subgroup& a, const Subgroup& b) {
        if (a.order() != b.order()) return a.order() < b.order();
        return a.elements() < b.elements();
    });
    members.erase(std::unique(members.begin(), members.end()), members.end());
    if (members.empty()) throw InvariantError("a Mackey system cannot be empty");

    auto sys = std::make_shared<MackeySystem>();
    sys->group = g;
    sys->members = std::move(members);

    const std::size_t m = sys->members.size();
    sys->conj_cache.assign(g->order() * m, -1);
    auto find_idx = [&](const Subgroup& s) -> int {
        for (std::size_t i = 0; i < m; ++i)
            if (sys->members[i].members() == s.members()) return static_cast<int>(i);
        return -1;
    };
    for (std::size_t u = 0; u < m; ++u)
        for (unsigned c = 0; c < g->order(); ++c) {
            int idx = find_idx(sys->members[u].conjugate(c));
            if (idx < 0) throw InvariantError("set of subgroups is not conjugation closed (MS1)");
            sys->conj_cache[c * m + u] = idx;
        }
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = a + 1; b < m; ++b)
            if (find_idx(sys->members[a].intersect(sys->members[b])) < 0)
                throw InvariantError("set of subgroups is not intersection closed (MS2)");

    sys->contains_group = sys->members.back().order() == g->order();
    sys->contains_trivial = sys->members.front().order() == 1;
    Subgroup whole = Subgroup::whole(g);
    sys->normal_only = true;
    for (const Subgroup& s : sys->members)
        if (!s.normal_in(whole)) sys->normal_only = false;

    // Intersection closure forces a unique least member, which the sort
    // placed first.
    Subgroup bottom = sys->members.front();
    for (const Subgroup& s : sys->members) bottom = bottom.intersect(s);
    if (!(bottom == sys->members.front()))
        throw InternalCheckError("Mackey system has no least member");

    sys->below.assign(m, {});
    for (std::size_t u = 0; u < m; ++u)
        for (std::size_t v = 0; v < m; ++v)
            if (sys->leq(v, u)) sys->below[u].push_back(v);

    for (std::size_t u = 0; u < m; ++u)
        for (std::size_t w : sys->below[u]) {
            if (w == u) continue;
            bool covered = true;
            for (std::size_t x : sys->below[u]) {
                if (x == u || x == w) continue;
                if (sys->leq(w, x)) {
                    covered = false;
                    break;
                }
            }
            if (covered) sys->cover_edges.emplace_back(u, w);
        }
    return sys;
}

}  // namespace

MackeySystemPtr mackey_system(const PGroupPtr& g, SystemKind kind, const std::vector<Subgroup>& seeds,
                              std::size_t budget) {
    switch (kind) {
        case SystemKind::All:
            return finalize_system(g, subgroups(g, SubgroupKind::All, budget));
        case SystemKind::Normal:
            return finalize_system(g, subgroups(g, SubgroupKind::Normal, budget));
        case SystemKind::Closure: {
            if (seeds.empty()) throw InvariantError("closure system needs at least one seed");
            std::vector<Subgroup> members;
            auto known = [&](const Subgroup& s) {
                return std::find(members.begin(), members.end(), s) != members.end();
            };
            for (const Subgroup& s : seeds) {
                if (s.parent() != g) throw NotSubgroup("closure seed subgroup of a different group");
                if (!known(s)) members.push_back(s);
            }
            bool grew = true;
            while (grew) {
                grew = false;
                std::vector<Subgroup> fresh;
                auto in_fresh = [&](const Subgroup& s) {
                    return std::find(fresh.begin(), fresh.end(), s) != fresh.end();
                };
                for (const Subgroup& s : members) {
                    for (unsigned c = 0; c < g->order(); ++c) {
                        Subgroup t = s.conjugate(c);
                        if (!known(t) && !in_fresh(t)) fresh.push_back(t);
                    }
                    for (const Subgroup& s2 : members) {
                        Subgroup t = s.intersect(s2);
                        if (!known(t) && !in_fresh(t)) fresh.push_back(t);
                    }
                }
                for (Subgroup& t : fresh) {
                    if (members.size() + 1 > budget) throw CapExceeded("Mackey closure exceeds budget");
                    members.push_back(std::move(t));
                    grew = true;
                }
            }
            return finalize_system(g, std::move(members));
        }
    }
    throw InvariantError("unknown system kind");
}

FpMatrix Cmf::i(std::size_t u, std::size_t v) const {
    if (!system->leq(v, u)) throw NotSubgroup("i map needs v <= u");
    if (u == v) return FpMatrix::identity(p, dims[u]);
    auto key = std::make_pair(u, v);
    auto it = i_cache_.find(key);
    if (it != i_cache_.end()) return it->second;

    // canonical chain: descend to the largest member strictly below u that
    // still contains v (ties resolved by the member order)
    std::size_t best = v;
    for (std::size_t w : system->below[u])
        if (w != u && system->leq(v, w) && system->members[w].order() > system->members[best].order())
            best = w;
    FpMatrix out = mat_mul(i(best, v), i_edge.at({u, best}));
    i_cache_.emplace(key, out);
    return out;
}

FpMatrix Cmf::t(std::size_t v, std::size_t u) const {
    if (!system->leq(v, u)) throw NotSubgroup("t map needs v <= u");
    if (u == v) return FpMatrix::identity(p, dims[u]);
    auto key = std::make_pair(u, v);
    auto it = t_cache_.find(key);
    if (it != t_cache_.end()) return it->second;

    std::size_t best = v;
    for (std::size_t w : system->below[u])
        if (w != u && system->leq(v, w) && system->members[w].order() > system->members[best].order())
            best = w;
    FpMatrix out = mat_mul(t_edge.at({u, best}), t(v, best));
    t_cache_.emplace(key, out);
    return out;
}

FpMatrix Cmf::c(unsigned g, std::size_t u) const {
    auto key = std::make_pair(g, u);
    auto it = c_cache_.find(key);
    if (it != c_cache_.end()) return it->second;
    std::vector<unsigned> word = system->group->word_of(g);
    FpMatrix out = FpMatrix::identity(p, dims[u]);
    std::size_t cur = u;
    for (auto itw = word.rbegin(); itw != word.rend(); ++itw) {
        out = mat_mul(c_gen.at({static_cast<std::size_t>(*itw), cur}), out);
        cur = system->conj_member(system->group->generators()[*itw], cur);
    }
    c_cache_.emplace(key, out);
    return out;
}

Cmf constant_functor(const MackeySystemPtr& sys, std::size_t n, ConstantKind kind) {
    Cmf x;
    x.system = sys;
    x.p = sys->group->p();
    x.dims.assign(sys->size(), n);
    FpMatrix id = FpMatrix::identity(x.p, n);
    for (auto [u, w] : sys->cover_edges) {
        std::uint32_t index =
            static_cast<std::uint32_t>((sys->members[u].order() / sys->members[w].order()) % x.p);
        FpMatrix scaled = mat_scale(id, index);
        if (kind == ConstantKind::T) {
            x.i_edge[{u, w}] = id;
            x.t_edge[{u, w}] = scaled;
        } else {
            x.i_edge[{u, w}] = scaled;
            x.t_edge[{u, w}] = id;
        }
    }
    for (std::size_t j = 0; j < sys->group->generators().size(); ++j)
        for (std::size_t u = 0; u < sys->size(); ++u) x.c_gen[{j, u}] = id;
    return x;
}

Cmf h0_functor(const FpGModule& m, const MackeySystemPtr& sys) {
    const PGroupPtr& g = sys->group;
    Cmf x;
    x.system = sys;
    x.p = m.p();

    std::vector<FpMatrix> bases;
    for (const Subgroup& u : sys->members) bases.push_back(invariants_under(m, u).sub_basis());
    for (const FpMatrix& b : bases) x.dims.push_back(b.rows());

    auto solve_cols = [&](const FpMatrix& target_basis, const std::vector<FpVector>& cols) {
        FpMatrix out(x.p, target_basis.rows(), cols.size());
        for (std::size_t c = 0; c < cols.size(); ++c) {
            FpVector coords = solve_in_rows(target_basis, cols[c]);
            for (std::size_t r = 0; r < coords.size(); ++r) out.set(r, c, coords[r]);
        }
        return out;
    };

    for (auto [u, w] : sys->cover_edges) {
        // i: inclusion M^U -> M^W
        std::vector<FpVector> icols;
        for (std::size_t r = 0; r < bases[u].rows(); ++r) icols.push_back(bases[u].row(r));
        x.i_edge[{u, w}] = solve_cols(bases[w], icols);

        // t: sum over a transversal of U/W acting on M^W
        std::vector<unsigned> reps = left_transversal(sys->members[w], sys->members[u]);
        std::vector<FpVector> tcols;
        for (std::size_t r = 0; r < bases[w].rows(); ++r) {
            FpVector acc(m.dim(), 0);
            for (unsigned rep : reps) {
                FpVector img = m.act_on(rep, bases[w].row(r));
                for (std::size_t ii = 0; ii < acc.size(); ++ii) acc[ii] = (acc[ii] + img[ii]) % x.p;
            }
            tcols.push_back(std::move(acc));
        }
        x.t_edge[{u, w}] = solve_cols(bases[u], tcols);
    }

    for (std::size_t j = 0; j < g->generators().size(); ++j) {
        unsigned gen = g->generators()[j];
        for (std::size_t u = 0; u < sys->size(); ++u) {
            std::size_t cu = sys->conj_member(gen, u);
            std::vector<FpVector> cols;
            for (std::size_t r = 0; r < bases[u].rows(); ++r)
                cols.push_back(m.act_on(gen, bases[u].row(r)));
            x.c_gen[{j, u}] = solve_cols(bases[cu], cols);
        }
    }
    return x;
}

namespace {

Cmf h_lower_zero(const FpGModule& m, const MackeySystemPtr& sys) {
    const PGroupPtr& g = sys->group;
    Cmf x;
    x.system = sys;
    x.p = m.p();

    std::vector<FpSubquotient> coinv;
    for (const Subgroup& u : sys->members) coinv.push_back(coinvariants_under(m, u));
    for (const FpSubquotient& q : coinv) x.dims.push_back(q.dim());

    FpMatrix id = FpMatrix::identity(x.p, m.dim());
    for (auto [u, w] : sys->cover_edges) {
        x.t_edge[{u, w}] = induced_map(id, coinv[w], coinv[u]);  // canonical projection

        std::vector<unsigned> reps = left_transversal(sys->members[w], sys->members[u]);
        FpMatrix transfer(x.p, m.dim(), m.dim());
        for (unsigned rep : reps) transfer = mat_add(transfer, m.act(g->inv(rep)));
        x.i_edge[{u, w}] = induced_map(transfer, coinv[u], coinv[w]);
    }
    for (std::size_t j = 0; j < g->generators().size(); ++j)
        for (std::size_t u = 0; u < sys->size(); ++u)
            x.c_gen[{j, u}] = induced_map(m.act(g->generators()[j]), coinv[u],
                                          coinv[sys->conj_member(g->generators()[j], u)]);
    return x;
}

}  // namespace

Cmf h_lower_functor(const FpGModule& m, std::size_t k, const MackeySystemPtr& sys, std::size_t cap) {
    if (m.dim() == 0) throw ZeroModule("h_lower of the zero module");
    if (k > cap) throw DegreeOverCap("h_lower degree above the cap");
    if (k == 0) return h_lower_zero(m, sys);

    Resolution r = minimal_resolution(m, cap);
    Cmf x;
    x.system = sys;
    x.p = m.p();

    std::vector<FpSubquotient> hom;
    std::vector<FreeCoinv> fc;
    for (const Subgroup& u : sys->members) {
        hom.push_back(restricted_homology(r, u, k));
        fc.push_back(free_coinvariants(r.group, r.rank_at(k), u));
    }
    for (const FpSubquotient& q : hom) x.dims.push_back(q.dim());

    for (auto [u, w] : sys->cover_edges) {
        x.i_edge[{u, w}] = induced_map(coinv_transfer(fc[u], fc[w]), hom[u], hom[w]);
        x.t_edge[{u, w}] = induced_map(coinv_projection(fc[w], fc[u]), hom[w], hom[u]);
    }
    for (std::size_t j = 0; j < sys->group->generators().size(); ++j) {
        unsigned gen = sys->group->generators()[j];
        for (std::size_t u = 0; u < sys->size(); ++u) {
            std::size_t cu = sys->conj_member(gen, u);
            x.c_gen[{j, u}] = induced_map(coinv_conjugation(fc[u], gen, fc[cu]), hom[u], hom[cu]);
        }
    }
    return x;
}

Cmf el_functor(const MackeySystemPtr& sys, std::size_t cap) {
    return h_lower_functor(trivial_module(sys->group), 1, sys, cap);
}

Cmf induced_functor(const Subgroup& h, ConstantKind kind, const MackeySystemPtr& sys) {
    const PGroupPtr& g = sys->group;
    if (h.parent() != g) throw NotSubgroup("induced_functor: subgroup of a different group");
    Cmf x;
    x.system = sys;
    x.p = g->p();

    Subgroup whole = Subgroup::whole(g);
    std::vector<std::vector<unsigned>> reps(sys->size());
    std::vector<std::vector<int>> dc_of(sys->size());
    for (std::size_t u = 0; u < sys->size(); ++u) {
        reps[u] = double_cosets(h, whole, sys->members[u]);
        dc_of[u].assign(g->order(), -1);
        for (std::size_t j = 0; j < reps[u].size(); ++j)
            for (unsigned a : h.elements()) {
                unsigned ar = g->mul(a, reps[u][j]);
                for (unsigned b : sys->members[u].elements()) dc_of[u][g->mul(ar, b)] = static_cast<int>(j);
            }
        x.dims.push_back(reps[u].size());
    }

    auto conj_order = [&](unsigned s, const Subgroup& k) {
        // |H ∩ sKs^{-1}| = #{e in H : s^-1 e s in K}
        std::size_t count = 0;
        for (unsigned e : h.elements())
            if (k.contains(g->mul(g->mul(g->inv(s), e), s))) ++count;
        return count;
    };

    for (auto [u, w] : sys->cover_edges) {
        const Subgroup& us = sys->members[u];
        const Subgroup& ws = sys->members[w];
        FpMatrix imat(x.p, reps[w].size(), reps[u].size());
        FpMatrix tmat(x.p, reps[u].size(), reps[w].size());
        for (std::size_t jw = 0; jw < reps[w].size(); ++jw) {
            unsigned s = reps[w][jw];
            std::size_t ju = static_cast<std::size_t>(dc_of[u][s]);
            std::size_t factor = conj_order(s, us) / conj_order(s, ws);
            if (kind == ConstantKind::T) {
                imat.set(jw, ju, (imat.at(jw, ju) + 1) % x.p);
                tmat.set(ju, jw, (tmat.at(ju, jw) + factor) % x.p);
            } else {
                imat.set(jw, ju, (imat.at(jw, ju) + factor) % x.p);
                tmat.set(ju, jw, (tmat.at(ju, jw) + 1) % x.p);
            }
        }
        x.i_edge[{u, w}] = imat;
        x.t_edge[{u, w}] = tmat;
    }

    for (std::size_t j = 0; j < g->generators().size(); ++j) {
        unsigned gen = g->generators()[j];
        for (std::size_t u = 0; u < sys->size(); ++u) {
            std::size_t cu = sys->conj_member(gen, u);
            FpMatrix cmat(x.p, reps[cu].size(), reps[u].size());
            for (std::size_t col = 0; col < reps[u].size(); ++col) {
                unsigned r = reps[u][col];
                std::size_t row = static_cast<std::size_t>(dc_of[cu][g->mul(r, g->inv(gen))]);
                cmat.set(row, col, 1);
            }
            x.c_gen[{j, u}] = cmat;
        }
    }
    return x;
}

Cmf dual_functor(const Cmf& x) {
    const MackeySystemPtr& sys = x.system;
    Cmf y;
    y.system = sys;
    y.p = x.p;
    y.dims = x.dims;
    for (auto [u, w] : sys->cover_edges) {
        y.i_edge[{u, w}] = x.t_edge.at({u, w}).transpose();
        y.t_edge[{u, w}] = x.i_edge.at({u, w}).transpose();
    }
    const PGroupPtr& g = sys->group;
    for (std::size_t j = 0; j < g->generators().size(); ++j) {
        unsigned gen = g->generators()[j];
        for (std::size_t u = 0; u < sys->size(); ++u) {
            std::size_t cu = sys->conj_member(gen, u);
            // c^dual_{g,U} = (c_{g^-1, gUg^-1})^T : X_U^v -> X_{gUg^-1}^v
            y.c_gen[{j, u}] = x.c(g->inv(gen), cu).transpose();
        }
    }
    return y;
}

FpGModule ires(const Cmf& x) {
    const MackeySystemPtr& sys = x.system;
    const PGroupPtr& g = sys->group;
    std::size_t b = sys->minimal_index();
    std::vector<FpMatrix> action;
    for (std::size_t j = 0; j < g->generators().size(); ++j) {
        if (sys->conj_member(g->generators()[j], b) != b)
            throw InternalCheckError("minimal member is not normal");
        action.push_back(x.c_gen.at({j, b}));
    }
    return FpGModule(g, x.dims[b], std::move(action));
}

FpMatrix j_map(const Cmf& x) { return x.i(x.system->group_index(), x.system->minimal_index()); }

FpGModule prorst_finite(const Cmf& x) { return ires(x); }

Cmf deflate_cmf(const Cmf& x, const Subgroup& n) {
    const MackeySystemPtr& sys = x.system;
    const PGroupPtr& g = sys->group;
    QuotientGroup q = quotient_group(g, n);

    std::vector<std::size_t> keep;
    for (std::size_t u = 0; u < sys->size(); ++u)
        if (n.subset_of(sys->members[u])) keep.push_back(u);
    if (keep.empty()) throw NotSubgroup("deflate: no members contain N");

    auto image_subgroup = [&](std::size_t u) {
        std::vector<bool> bits(q.group->order(), false);
        for (unsigned e : sys->members[u].elements()) bits[q.proj[e]] = true;
        return Subgroup(q.group, std::move(bits));
    };

    std::vector<Subgroup> qmembers;
    for (std::size_t u : keep) qmembers.push_back(image_subgroup(u));
    MackeySystemPtr qsys = finalize_system(q.group, qmembers);

    std::vector<std::size_t> old_of_new(qsys->size());
    for (std::size_t i = 0; i < keep.size(); ++i) old_of_new[qsys->index_of(image_subgroup(keep[i]))] = keep[i];

    Cmf y;
    y.system = qsys;
    y.p = x.p;
    y.dims.assign(qsys->size(), 0);
    for (std::size_t nu = 0; nu < qsys->size(); ++nu) y.dims[nu] = x.dims[old_of_new[nu]];

    for (auto [nu, nw] : qsys->cover_edges) {
        y.i_edge[{nu, nw}] = x.i(old_of_new[nu], old_of_new[nw]);
        y.t_edge[{nu, nw}] = x.t(old_of_new[nw], old_of_new[nu]);
    }

    for (std::size_t j = 0; j < q.group->generators().size(); ++j) {
        unsigned qgen = q.group->generators()[j];
        unsigned pre = 0;
        bool found = false;
        for (unsigned ge : g->generators())
            if (q.proj[ge] == qgen) {
                pre = ge;
                found = true;
                break;
            }
        if (!found) throw InternalCheckError("deflate: quotient generator has no generator preimage");
        for (std::size_t nu = 0; nu < qsys->size(); ++nu) y.c_gen[{j, nu}] = x.c(pre, old_of_new[nu]);
    }
    return y;
}

CmfCheckReport cmf_check(const Cmf& x, std::size_t budget, std::uint64_t seed) {
    const MackeySystem& sys = *x.system;
    const PGroupPtr& g = sys.group;
    const std::size_t m = sys.size();
    CmfCheckReport rep;

    std::size_t n1 = 0;
    for (std::size_t u = 0; u < m; ++u) n1 += sys.members[u].order();
    std::size_t n2 = 0;
    for (std::size_t u = 0; u < m; ++u)
        for (std::size_t v : sys.below[u]) n2 += sys.below[v].size();
    std::size_t n3 = static_cast<std::size_t>(g->order()) * g->order() * m;
    std::size_t n45 = 0;
    for (std::size_t u = 0; u < m; ++u) n45 += sys.below[u].size() * g->order();
    std::size_t n6 = 0;
    for (std::size_t u = 0; u < m; ++u) n6 += sys.below[u].size() * sys.below[u].size();
    std::size_t n7 = 0;
    for (std::size_t u = 0; u < m; ++u) n7 += sys.below[u].size();

    rep.instances_total = n1 + n2 + n3 + 2 * n45 + n6 + n7;
    rep.exhaustive = rep.instances_total <= budget;
    auto stride_for = [&](std::size_t count) -> std::size_t {
        if (rep.exhaustive || count == 0) return 1;
        double share = static_cast<double>(count) / static_cast<double>(rep.instances_total);
        std::size_t alloc = std::max<std::size_t>(1, static_cast<std::size_t>(share * budget));
        return std::max<std::size_t>(1, (count + alloc - 1) / alloc);
    };
    auto selected = [&](std::uint64_t axiom, std::uint64_t idx, std::size_t stride) {
        if (stride <= 1) return true;
        return splitmix64(seed ^ (axiom * 0x51ed2701ULL) ^ (idx << 8)) % stride == 0;
    };
    auto note = [&](const std::string& axiom, const std::string& inst) {
        if (rep.violations.size() < 200) rep.violations.push_back({axiom, inst});
    };

    {  // (cMF1) c_{u,U} = id
        std::size_t stride = stride_for(n1), idx = 0;
        for (std::size_t u = 0; u < m; ++u)
            for (unsigned e : sys.members[u].elements())
                if (selected(1, idx++, stride)) {
                    ++rep.instances_checked;
                    if (!x.c(e, u).is_identity())
                        note("cMF1", "c_{u,U} != id at U=" + member_name(sys, u) + ", u=" + std::to_string(e));
                }
    }
    {  // (cMF2) transitivity of composed i and t
        std::size_t stride = stride_for(n2), idx = 0;
        for (std::size_t u = 0; u < m; ++u)
            for (std::size_t v : sys.below[u])
                for (std::size_t w : sys.below[v])
                    if (selected(2, idx++, stride)) {
                        ++rep.instances_checked;
                        if (mat_mul(x.i(v, w), x.i(u, v)) != x.i(u, w))
                            note("cMF2", "i chain " + member_name(sys, u) + " > " + member_name(sys, v) +
                                             " > " + member_name(sys, w));
                        if (mat_mul(x.t(v, u), x.t(w, v)) != x.t(w, u))
                            note("cMF2", "t chain " + member_name(sys, u) + " > " + member_name(sys, v) +
                                             " > " + member_name(sys, w));
                    }
    }
    {  // (cMF3) c_h c_g = c_{hg}
        std::size_t stride = stride_for(n3), idx = 0;
        for (unsigned h = 0; h < g->order(); ++h)
            for (unsigned gg = 0; gg < g->order(); ++gg)
                for (std::size_t u = 0; u < m; ++u)
                    if (selected(3, idx++, stride)) {
                        ++rep.instances_checked;
                        std::size_t gu = sys.conj_member(gg, u);
                        if (mat_mul(x.c(h, gu), x.c(gg, u)) != x.c(g->mul(h, gg), u))
                            note("cMF3", "g=" + std::to_string(gg) + ", h=" + std::to_string(h) +
                                             ", U=" + member_name(sys, u));
                    }
    }
    {  // (cMF4) and (cMF5)
        std::size_t stride = stride_for(n45), idx = 0;
        for (unsigned gg = 0; gg < g->order(); ++gg)
            for (std::size_t u = 0; u < m; ++u)
                for (std::size_t v : sys.below[u])
                    if (selected(4, idx++, stride)) {
                        rep.instances_checked += 2;
                        std::size_t gu = sys.conj_member(gg, u), gv = sys.conj_member(gg, v);
                        if (mat_mul(x.i(gu, gv), x.c(gg, u)) != mat_mul(x.c(gg, v), x.i(u, v)))
                            note("cMF4", "g=" + std::to_string(gg) + ", U=" + member_name(sys, u) +
                                             ", V=" + member_name(sys, v));
                        if (mat_mul(x.t(gv, gu), x.c(gg, v)) != mat_mul(x.c(gg, u), x.t(v, u)))
                            note("cMF5", "g=" + std::to_string(gg) + ", U=" + member_name(sys, u) +
                                             ", V=" + member_name(sys, v));
                    }
    }
    {  // (cMF6) double coset formula, evaluated literally
        std::size_t stride = stride_for(n6), idx = 0;
        for (std::size_t u = 0; u < m; ++u)
            for (std::size_t v : sys.below[u])
                for (std::size_t w : sys.below[u])
                    if (selected(6, idx++, stride)) {
                        ++rep.instances_checked;
                        FpMatrix lhs = mat_mul(x.i(u, w), x.t(v, u));
                        FpMatrix rhs(x.p, x.dims[w], x.dims[v]);
                        for (unsigned rg : double_cosets(sys.members[w], sys.members[u], sys.members[v])) {
                            std::size_t wg = sys.conj_member(g->inv(rg), w);  // W^g = g^-1 W g
                            std::size_t vw = sys.intersect_member(v, wg);
                            std::size_t gvw = sys.conj_member(rg, vw);  // gVg^-1 ∩ W
                            rhs = mat_add(rhs, mat_mul(x.t(gvw, w), mat_mul(x.c(rg, vw), x.i(v, vw))));
                        }
                        if (lhs != rhs)
                            note("cMF6", "U=" + member_name(sys, u) + ", V=" + member_name(sys, v) +
                                             ", W=" + member_name(sys, w));
                    }
    }
    {  // (cMF7) t o i = |U:V| id
        std::size_t stride = stride_for(n7), idx = 0;
        for (std::size_t u = 0; u < m; ++u)
            for (std::size_t v : sys.below[u])
                if (selected(7, idx++, stride)) {
                    ++rep.instances_checked;
                    std::uint32_t index = static_cast<std::uint32_t>(
                        (sys.members[u].order() / sys.members[v].order()) % x.p);
                    FpMatrix expect = mat_scale(FpMatrix::identity(x.p, x.dims[u]), index);
                    if (mat_mul(x.t(v, u), x.i(u, v)) != expect)
                        note("cMF7", "U=" + member_name(sys, u) + ", V=" + member_name(sys, v));
                }
    }
    return rep;
}

bool is_morphism(const CmfMorphism& phi) {
    const Cmf& xs = phi.source;
    const Cmf& ys = phi.target;
    if (xs.system != ys.system) return false;
    const MackeySystem& sys = *xs.system;
    if (phi.components.size() != sys.size()) return false;
    for (std::size_t u = 0; u < sys.size(); ++u)
        if (phi.components[u].rows() != ys.dims[u] || phi.components[u].cols() != xs.dims[u])
            return false;

    for (auto [u, w] : sys.cover_edges) {
        if (mat_mul(phi.components[w], xs.i_edge.at({u, w})) !=
            mat_mul(ys.i_edge.at({u, w}), phi.components[u]))
            return false;
        if (mat_mul(phi.components[u], xs.t_edge.at({u, w})) !=
            mat_mul(ys.t_edge.at({u, w}), phi.components[w]))
            return false;
    }
    const PGroupPtr& g = sys.group;
    for (std::size_t j = 0; j < g->generators().size(); ++j)
        for (std::size_t u = 0; u < sys.size(); ++u) {
            std::size_t cu = sys.conj_member(g->generators()[j], u);
            if (mat_mul(phi.components[cu], xs.c_gen.at({j, u})) !=
                mat_mul(ys.c_gen.at({j, u}), phi.components[u]))
                return false;
        }
    return true;
}

CmfMorphism identity_morphism(const Cmf& x) {
    CmfMorphism phi{x, x, {}};
    for (std::size_t d : x.dims) phi.components.push_back(FpMatrix::identity(x.p, d));
    return phi;
}

CmfMorphism zero_morphism(const Cmf& x, const Cmf& y) {
    CmfMorphism phi{x, y, {}};
    for (std::size_t u = 0; u < x.dims.size(); ++u)
        phi.components.push_back(FpMatrix(x.p, y.dims[u], x.dims[u]));
    return phi;
}

namespace {

// New functor carried by the row spaces basis[u] inside the carrier functor.
Cmf functor_on_subspaces(const Cmf& carrier, const std::vector<FpMatrix>& basis) {
    const MackeySystem& sys = *carrier.system;
    Cmf y;
    y.system = carrier.system;
    y.p = carrier.p;
    for (const FpMatrix& b : basis) y.dims.push_back(b.rows());

    auto restrict_map = [&](const FpMatrix& map, const FpMatrix& src, const FpMatrix& dst) {
        FpMatrix out(carrier.p, dst.rows(), src.rows());
        for (std::size_t c = 0; c < src.rows(); ++c) {
            FpVector w = mat_apply(map, src.row(c));
            FpVector coords = solve_in_rows(dst, w);  // throws if not stable
            for (std::size_t r = 0; r < coords.size(); ++r) out.set(r, c, coords[r]);
        }
        return out;
    };

    for (auto [u, w] : sys.cover_edges) {
        y.i_edge[{u, w}] = restrict_map(carrier.i_edge.at({u, w}), basis[u], basis[w]);
        y.t_edge[{u, w}] = restrict_map(carrier.t_edge.at({u, w}), basis[w], basis[u]);
    }
    const PGroupPtr& g = sys.group;
    for (std::size_t j = 0; j < g->generators().size(); ++j)
        for (std::size_t u = 0; u < sys.size(); ++u) {
            std::size_t cu = sys.conj_member(g->generators()[j], u);
            y.c_gen[{j, u}] = restrict_map(carrier.c_gen.at({j, u}), basis[u], basis[cu]);
        }
    return y;
}

}  // namespace

Cmf kernel_cmf(const CmfMorphism& phi) {
    if (!is_morphism(phi)) throw NotAMorphism("kernel of a non-morphism");
    std::vector<FpMatrix> basis;
    for (const FpMatrix& comp : phi.components) basis.push_back(kernel_basis(comp));
    return functor_on_subspaces(phi.source, basis);
}

Cmf image_cmf(const CmfMorphism& phi) {
    if (!is_morphism(phi)) throw NotAMorphism("image of a non-morphism");
    std::vector<FpMatrix> basis;
    for (const FpMatrix& comp : phi.components) basis.push_back(image_basis(comp));
    return functor_on_subspaces(phi.target, basis);
}

CmfMorphism kernel_inclusion(const CmfMorphism& phi) {
    Cmf k = kernel_cmf(phi);
    CmfMorphism inc{k, phi.source, {}};
    for (std::size_t u = 0; u < k.dims.size(); ++u)
        inc.components.push_back(kernel_basis(phi.components[u]).transpose());
    return inc;
}

CmfMorphism image_inclusion(const CmfMorphism& phi) {
    Cmf im = image_cmf(phi);
    CmfMorphism inc{im, phi.target, {}};
    for (std::size_t u = 0; u < im.dims.size(); ++u)
        inc.components.push_back(image_basis(phi.components[u]).transpose());
    return inc;
}

Ses make_ses(CmfMorphism inj, CmfMorphism surj) {
    if (!is_morphism(inj) || !is_morphism(surj)) throw NotSES("the maps are not morphisms");
    if (inj.target.system != surj.source.system || inj.target.dims != surj.source.dims)
        throw NotSES("the middle functors do not match");
    for (std::size_t u = 0; u < inj.components.size(); ++u) {
        if (kernel_basis(inj.components[u]).rows() != 0) throw NotSES("left map is not injective");
        if (rank(surj.components[u]) != surj.target.dims[u]) throw NotSES("right map is not surjective");
        if (!check_exact(inj.components[u], surj.components[u]).exact)
            throw NotSES("sequence is not exact in the middle");
    }
    return Ses{std::move(inj), std::move(surj)};
}

std::vector<std::vector<FpMatrix>> cmf_hom_basis(const Cmf& x, const Cmf& y) {
    if (x.system != y.system) throw NotAMorphism("hom basis needs a shared system");
    const MackeySystem& sys = *x.system;
    const std::uint32_t p = x.p;
    const std::size_t m = sys.size();

    std::vector<std::size_t> off(m + 1, 0);
    for (std::size_t u = 0; u < m; ++u) off[u + 1] = off[u] + y.dims[u] * x.dims[u];
    const std::size_t vars = off[m];
    if (vars == 0) return {};

    std::vector<std::vector<std::uint32_t>> rows;
    // Constraint: phi_a o pre = post o phi_b, unknowns phi_* flattened row-major.
    auto add_constraint = [&](std::size_t a, const FpMatrix& pre, std::size_t b, const FpMatrix& post) {
        const std::size_t out_rows = y.dims[a];
        const std::size_t out_cols = pre.cols();
        for (std::size_t rr = 0; rr < out_rows; ++rr)
            for (std::size_t cc = 0; cc < out_cols; ++cc) {
                std::vector<std::uint32_t> row(vars, 0);
                // + sum_l phi_a(rr, l) pre(l, cc)
                for (std::size_t l = 0; l < x.dims[a]; ++l)
                    if (pre.at(l, cc))
                        row[off[a] + rr * x.dims[a] + l] =
                            (row[off[a] + rr * x.dims[a] + l] + pre.at(l, cc)) % p;
                // - sum_k post(rr, k) phi_b(k, cc)
                for (std::size_t k = 0; k < y.dims[b]; ++k)
                    if (post.at(rr, k))
                        row[off[b] + k * x.dims[b] + cc] =
                            (row[off[b] + k * x.dims[b] + cc] + p - post.at(rr, k)) % p;
                rows.push_back(std::move(row));
            }
    };

    for (auto [u, w] : sys.cover_edges) {
        add_constraint(w, x.i_edge.at({u, w}), u, y.i_edge.at({u, w}));
        add_constraint(u, x.t_edge.at({u, w}), w, y.t_edge.at({u, w}));
    }
    const PGroupPtr& g = sys.group;
    for (std::size_t j = 0; j < g->generators().size(); ++j)
        for (std::size_t u = 0; u < m; ++u) {
            std::size_t cu = sys.conj_member(g->generators()[j], u);
            add_constraint(cu, x.c_gen.at({j, u}), u, y.c_gen.at({j, u}));
        }

    FpMatrix sys_mat = rows.empty() ? FpMatrix(p, 0, vars) : FpMatrix::from_rows(p, rows);
    FpMatrix null = kernel_basis(sys_mat);

    std::vector<std::vector<FpMatrix>> out;
    for (std::size_t r = 0; r < null.rows(); ++r) {
        std::vector<FpMatrix> comps;
        for (std::size_t u = 0; u < m; ++u) {
            FpMatrix c(p, y.dims[u], x.dims[u]);
            for (std::size_t i2 = 0; i2 < y.dims[u]; ++i2)
                for (std::size_t j2 = 0; j2 < x.dims[u]; ++j2)
                    c.set(i2, j2, null.at(r, off[u] + i2 * x.dims[u] + j2));
            comps.push_back(std::move(c));
        }
        out.push_back(std::move(comps));
    }
    return out;
}

std::optional<CmfMorphism> find_isomorphism(const Cmf& x, const Cmf& y) {
    if (x.system != y.system || x.dims != y.dims) return std::nullopt;
    bool all_zero = true;
    for (std::size_t d : x.dims) all_zero = all_zero && d == 0;
    if (all_zero) {
        CmfMorphism phi = zero_morphism(x, y);
        return phi;
    }

    std::vector<std::vector<FpMatrix>> basis = cmf_hom_basis(x, y);
    if (basis.empty()) return std::nullopt;
    const std::size_t h = basis.size();
    const std::uint32_t p = x.p;
    const std::size_t m = x.dims.size();

    auto try_combo = [&](const std::vector<std::uint32_t>& coeffs) -> std::optional<CmfMorphism> {
        CmfMorphism phi{x, y, {}};
        for (std::size_t u = 0; u < m; ++u) {
            FpMatrix c(p, y.dims[u], x.dims[u]);
            for (std::size_t b = 0; b < h; ++b)
                if (coeffs[b]) c = mat_add(c, mat_scale(basis[b][u], coeffs[b]));
            if (rank(c) != x.dims[u]) return std::nullopt;
            phi.components.push_back(std::move(c));
        }
        return phi;
    };

    double total = 1;
    for (std::size_t b = 0; b < h; ++b) total *= p;
    if (total <= 4096.0) {
        std::vector<std::uint32_t> coeffs(h, 0);
        for (std::size_t iter = 1; iter < static_cast<std::size_t>(total); ++iter) {
            std::size_t carry = iter;
            for (std::size_t b = 0; b < h; ++b) {
                coeffs[b] = static_cast<std::uint32_t>(carry % p);
                carry /= p;
            }
            if (auto phi = try_combo(coeffs)) return phi;
        }
        return std::nullopt;
    }
    std::vector<std::uint32_t> coeffs(h, 0);
    for (std::size_t b = 0; b < h; ++b) {
        std::fill(coeffs.begin(), coeffs.end(), 0);
        coeffs[b] = 1;
        if (auto phi = try_combo(coeffs)) return phi;
    }
    std::uint64_t state = 0x5eed;
    for (int iter = 0; iter < 512; ++iter) {
        for (std::size_t b = 0; b < h; ++b) {
            state = splitmix64(state);
            coeffs[b] = static_cast<std::uint32_t>(state % p);
        }
        if (auto phi = try_combo(coeffs)) return phi;
    }
    return std::nullopt;
}

}  // namespace mlab

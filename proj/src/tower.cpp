#include "mlab/tower.hpp"

#include <algorithm>
#include <string>

#include "mlab/errors.hpp"
#include "mlab/fpg_module.hpp"

namespace mlab {

std::vector<unsigned> Tower::proj(std::size_t from, std::size_t to) const {
    if (from < to || from > depth() || to < 1) throw StageOutOfRange("projection stages out of range");
    std::vector<unsigned> map(stages[from - 1]->order());
    for (unsigned e = 0; e < map.size(); ++e) map[e] = e;
    for (std::size_t k = from; k > to; --k) {
        const std::vector<unsigned>& step = projections[k - 2];  // stages[k-1] -> stages[k-2]
        for (unsigned e = 0; e < map.size(); ++e) map[e] = step[map[e]];
    }
    return map;
}

namespace {

void verify_projection(const PGroupPtr& from, const PGroupPtr& to, const std::vector<unsigned>& pi,
                       std::size_t step) {
    if (pi.size() != from->order())
        throw NotHomomorphism("projection " + std::to_string(step) + " has the wrong domain size");
    for (unsigned e : pi)
        if (e >= to->order())
            throw NotHomomorphism("projection " + std::to_string(step) + " leaves the codomain");
    for (unsigned a = 0; a < from->order(); ++a)
        for (unsigned b = 0; b < from->order(); ++b)
            if (pi[from->mul(a, b)] != to->mul(pi[a], pi[b]))
                throw NotHomomorphism("projection " + std::to_string(step) +
                                      " is not a homomorphism");
    std::vector<bool> hit(to->order(), false);
    std::size_t count = 0;
    for (unsigned e : pi)
        if (!hit[e]) {
            hit[e] = true;
            ++count;
        }
    if (count != to->order())
        throw NotSurjective("projection " + std::to_string(step) + " is not surjective");
}

}  // namespace

Tower make_tower(std::vector<PGroupPtr> stages, std::vector<std::vector<unsigned>> projections,
                 std::string name) {
    if (stages.empty()) throw InvariantError("a tower needs at least one stage");
    if (projections.size() + 1 != stages.size())
        throw InvariantError("a tower of m stages needs m-1 projections");
    for (std::size_t k = 0; k + 1 < stages.size(); ++k) {
        if (stages[k]->p() != stages[k + 1]->p()) throw InvariantError("tower mixes primes");
        verify_projection(stages[k + 1], stages[k], projections[k], k + 1);
    }
    return Tower{std::move(stages), std::move(projections), std::move(name)};
}

Tower constant_tower(const PGroupPtr& g, std::size_t depth) {
    std::vector<PGroupPtr> stages(depth, g);
    std::vector<std::vector<unsigned>> projections;
    std::vector<unsigned> id(g->order());
    for (unsigned e = 0; e < g->order(); ++e) id[e] = e;
    for (std::size_t k = 0; k + 1 < depth; ++k) projections.push_back(id);
    return make_tower(std::move(stages), std::move(projections), "constant");
}

Tower cyclic_tower(std::uint32_t p, std::size_t depth, std::size_t order_cap) {
    std::vector<PGroupPtr> stages;
    std::vector<std::vector<unsigned>> projections;
    for (std::size_t k = 1; k <= depth; ++k)
        stages.push_back(cyclic_group(p, static_cast<unsigned>(k), order_cap));
    for (std::size_t k = 0; k + 1 < depth; ++k) {
        // C_{p^{k+2}} -> C_{p^{k+1}}: generator goes to generator. With the BFS
        // element order of a single cycle, element i is the i-th power.
        std::size_t small = stages[k]->order();
        std::vector<unsigned> pi(stages[k + 1]->order());
        for (unsigned e = 0; e < pi.size(); ++e) pi[e] = static_cast<unsigned>(e % small);
        projections.push_back(std::move(pi));
    }
    return make_tower(std::move(stages), std::move(projections), "cyclic");
}

Tower product_tower(const Tower& a, const Tower& b, std::size_t order_cap) {
    if (a.depth() != b.depth()) throw InvariantError("product of towers of different depth");
    std::vector<PGroupPtr> stages;
    std::vector<std::vector<unsigned>> projections;
    std::vector<std::vector<unsigned>> embed_a, embed_b;  // factor elements -> product elements

    for (std::size_t k = 0; k < a.depth(); ++k) {
        PGroupPtr prod = product_group(a.stages[k], b.stages[k], order_cap);
        // locate factor images inside the product by generator words
        std::size_t na = a.stages[k]->generators().size();
        std::vector<unsigned> ea(a.stages[k]->order()), eb(b.stages[k]->order());
        for (unsigned e = 0; e < ea.size(); ++e) {
            unsigned img = 0;
            for (unsigned letter : a.stages[k]->word_of(e)) img = prod->mul(img, prod->generators()[letter]);
            ea[e] = img;
        }
        for (unsigned e = 0; e < eb.size(); ++e) {
            unsigned img = 0;
            for (unsigned letter : b.stages[k]->word_of(e))
                img = prod->mul(img, prod->generators()[na + letter]);
            eb[e] = img;
        }
        stages.push_back(prod);
        embed_a.push_back(std::move(ea));
        embed_b.push_back(std::move(eb));
    }
    for (std::size_t k = 0; k + 1 < a.depth(); ++k) {
        const PGroupPtr& big = stages[k + 1];
        std::vector<unsigned> pi(big->order());
        // every element is (x, y) = embed_a(x) * embed_b(y); decompose by scanning
        std::vector<int> seen(big->order(), -1);
        for (unsigned x = 0; x < a.stages[k + 1]->order(); ++x)
            for (unsigned y = 0; y < b.stages[k + 1]->order(); ++y) {
                unsigned e = big->mul(embed_a[k + 1][x], embed_b[k + 1][y]);
                if (seen[e] >= 0) throw InternalCheckError("product tower decomposition clash");
                seen[e] = 1;
                unsigned px = a.projections[k][x], py = b.projections[k][y];
                pi[e] = stages[k]->mul(embed_a[k][px], embed_b[k][py]);
            }
        projections.push_back(std::move(pi));
    }
    return make_tower(std::move(stages), std::move(projections), a.name + "x" + b.name);
}

Subgroup tower_kernel(const Tower& t, std::size_t m, std::size_t j) {
    if (m < 1 || m > t.depth() || j < 1 || j >= m) throw StageOutOfRange("tower_kernel stages");
    std::vector<unsigned> pi = t.proj(m, j);
    std::vector<bool> bits(t.stages[m - 1]->order(), false);
    for (unsigned e = 0; e < bits.size(); ++e) bits[e] = pi[e] == 0;
    return Subgroup(t.stages[m - 1], std::move(bits));
}

TowerValidation tower_validate(const Tower& t) {
    for (std::size_t k = 0; k + 1 < t.depth(); ++k)
        verify_projection(t.stages[k + 1], t.stages[k], t.projections[k], k + 1);
    TowerValidation v;
    for (const PGroupPtr& g : t.stages) {
        v.orders.push_back(g->order());
        v.elab_dims.push_back(frattini_and_elab(Subgroup::whole(g)).rank);
    }
    for (std::size_t k = 1; k < v.elab_dims.size(); ++k)
        if (v.elab_dims[k - 1] == v.elab_dims[k]) {
            v.elab_stable_at = k;  // 1-based first stage of a stable pair
            break;
        }
    return v;
}

FreeTestReport free_test(const Tower& t, std::size_t m) {
    if (m < 1 || m > t.depth()) throw StageOutOfRange("free_test stage");
    FreeTestReport rep;
    rep.stage = m;

    ElAbQuotient top = frattini_and_elab(Subgroup::whole(t.stages[m - 1]));
    if (m >= 2) {
        ElAbQuotient prev = frattini_and_elab(Subgroup::whole(t.stages[m - 2]));
        rep.abelianization_stable = prev.rank == top.rank;
    }

    for (std::size_t j = 1; j < m; ++j) {
        Subgroup u = tower_kernel(t, m, j);
        FpMatrix ver = verlagerung(Subgroup::whole(t.stages[m - 1]), u);
        FreeTestEntry e;
        e.j = j;
        e.kernel_dim = kernel_basis(ver).rows();
        e.verdict = (e.kernel_dim == 0 && rep.abelianization_stable) ? Verdict::SoundPositive
                                                                     : Verdict::Inconclusive;
        rep.entries.push_back(e);
    }
    return rep;
}

D1Report d1_report(const Tower& t, std::size_t m) {
    if (m < 2 || m > t.depth()) throw StageOutOfRange("d1_report needs stage >= 2");
    D1Report rep;
    rep.stage = m;

    const PGroupPtr& g = t.stages[m - 1];
    std::vector<Subgroup> chain{Subgroup::whole(g)};
    for (std::size_t j = 1; j < m; ++j) chain.push_back(tower_kernel(t, m, j));

    std::vector<ElAbQuotient> elabs;
    for (const Subgroup& s : chain) elabs.push_back(frattini_and_elab(s));
    for (const ElAbQuotient& e : elabs) rep.chain_dims.push_back(e.rank);

    FpMatrix composite = FpMatrix::identity(g->p(), elabs[0].rank);
    for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
        FpMatrix step = verlagerung_with_transversal(
            chain[i], chain[i + 1], left_transversal(chain[i + 1], chain[i]), elabs[i], elabs[i + 1]);
        rep.step_ranks.push_back(rank(step));
        composite = mat_mul(step, composite);
        rep.composite_ranks.push_back(rank(composite));
    }
    rep.certificate = rep.composite_ranks.empty() ? elabs[0].rank : rep.composite_ranks.back();
    return rep;
}

EndsReport ends_classify(const Tower& t, std::size_t m) {
    if (m < 1 || m > t.depth()) throw StageOutOfRange("ends_classify stage");
    EndsReport rep;

    if (m == 1) {
        rep.kind = EndsReport::Kind::LowerBound;
        rep.value = 1;
        rep.detail = "single stage: no growth information";
        return rep;
    }

    bool stabilizes = t.stages[m - 1]->order() == t.stages[m - 2]->order();
    if (stabilizes) {
        rep.kind = EndsReport::Kind::Finite;
        rep.value = 0;
        rep.detail = "connecting map at the deepest step is an isomorphism";
        return rep;
    }

    bool strict_growth = true;
    for (std::size_t k = 0; k + 1 < m; ++k)
        if (t.stages[k + 1]->order() <= t.stages[k]->order()) strict_growth = false;

    D1Report d1 = d1_report(t, m);
    bool injective_chain = true;
    for (std::size_t i = 0; i < d1.step_ranks.size(); ++i)
        if (d1.step_ranks[i] != d1.chain_dims[i]) injective_chain = false;
    bool locked_at_one = d1.certificate == 1 &&
                         (d1.composite_ranks.size() < 2 ||
                          d1.composite_ranks[d1.composite_ranks.size() - 2] == 1);

    if (strict_growth && injective_chain && locked_at_one) {
        rep.kind = EndsReport::Kind::TwoEnds;
        rep.value = 2;
        rep.detail = "consistent with virtually-Z_p: D_1 certificate locked at 1";
        return rep;
    }
    rep.kind = EndsReport::Kind::LowerBound;
    rep.value = 1 + d1.certificate;
    rep.detail = "evidence only: E >= 1 + D_1 lower bound";
    return rep;
}

DirectionReport direction_check(const Tower& t, const DirectionWitnessData& w, std::size_t m) {
    if (m < 1 || m > t.depth()) throw StageOutOfRange("direction_check stage");
    if (w.tau.size() != t.depth() || w.sigma.size() != t.depth())
        throw IncompatibleWitness("witness does not cover every stage");

    // modulus p^k per stage
    std::vector<std::size_t> mod(t.depth(), 1);
    for (std::size_t k = 0; k < t.depth(); ++k) {
        mod[k] = 1;
        for (std::size_t i = 0; i <= k; ++i) mod[k] *= t.stages[0]->p();
    }

    for (std::size_t k = 0; k < t.depth(); ++k) {
        const PGroupPtr& g = t.stages[k];
        const std::vector<unsigned>& tau = w.tau[k];
        if (tau.size() != g->order()) throw IncompatibleWitness("tau table has the wrong size");
        for (unsigned e : tau)
            if (e >= mod[k]) throw IncompatibleWitness("tau value out of range");
        for (unsigned a = 0; a < g->order(); ++a)
            for (unsigned b = 0; b < g->order(); ++b)
                if (tau[g->mul(a, b)] != (tau[a] + tau[b]) % mod[k])
                    throw IncompatibleWitness("tau is not a homomorphism at stage " +
                                              std::to_string(k + 1));
        bool onto = false;
        for (unsigned e = 0; e < g->order(); ++e)
            if (tau[e] % t.stages[0]->p() != 0) onto = true;
        if (!onto) throw IncompatibleWitness("tau is not surjective at stage " + std::to_string(k + 1));

        unsigned s = w.sigma[k];
        if (s >= g->order()) throw IncompatibleWitness("sigma element out of range");
        if (tau[s] != 1 % mod[k])
            throw IncompatibleWitness("tau(sigma) is not the fixed generator at stage " +
                                      std::to_string(k + 1));
        if (g->element_order(s) != mod[k])
            throw IncompatibleWitness("sigma does not have order p^k at stage " + std::to_string(k + 1));
    }
    // compatibility under the projections
    for (std::size_t k = 0; k + 1 < t.depth(); ++k) {
        const std::vector<unsigned>& pi = t.projections[k];
        for (unsigned e = 0; e < t.stages[k + 1]->order(); ++e)
            if (w.tau[k][pi[e]] != w.tau[k + 1][e] % mod[k])
                throw IncompatibleWitness("tau towers do not commute with the projections");
        if (pi[w.sigma[k + 1]] != w.sigma[k])
            throw IncompatibleWitness("sigma elements do not commute with the projections");
    }

    DirectionReport rep;
    rep.stage = m;
    rep.splitting_verified = true;

    const PGroupPtr& g = t.stages[m - 1];
    Subgroup whole = Subgroup::whole(g);
    ElAbQuotient top = frattini_and_elab(whole);
    FpVector logs = top.log(w.sigma[m - 1]);

    rep.j_el_nonzero = true;
    for (std::size_t j = 1; j < m; ++j) {
        Subgroup u = tower_kernel(t, m, j);
        FpMatrix ver = verlagerung(whole, u);
        FpVector img = mat_apply(ver, logs);
        bool nonzero = false;
        for (std::uint32_t v : img) nonzero = nonzero || v != 0;
        if (!nonzero) rep.j_el_nonzero = false;
    }

    // Theorem-C shaped evidence: N = normal closure of sigma, N^{ab,el} as a
    // G/N-module should look like the regular module of the quotient.
    Subgroup n = normal_closure(g, {w.sigma[m - 1]});
    ElAbQuotient nel = frattini_and_elab(n);
    QuotientGroup q = quotient_group(g, n);
    rep.n_dim = nel.rank;
    rep.quotient_order = q.group->order();

    // conjugation action of the quotient on N^{ab,el}
    std::vector<FpMatrix> action;
    for (unsigned qgen : q.group->generators()) {
        unsigned pre = 0;
        bool found = false;
        for (unsigned e = 0; e < g->order(); ++e)
            if (q.proj[e] == qgen) {
                pre = e;
                found = true;
                break;
            }
        if (!found) throw InternalCheckError("direction_check: missing quotient preimage");
        FpMatrix a(g->p(), nel.rank, nel.rank);
        for (std::size_t col = 0; col < nel.rank; ++col) {
            FpVector img = nel.log(g->conj(pre, nel.basis[col]));
            for (std::size_t r = 0; r < img.size(); ++r) a.set(r, col, img[r]);
        }
        action.push_back(std::move(a));
    }
    FpGModule nmod(q.group, nel.rank, std::move(action));
    rep.head_dim = coinvariants(nmod).dim();
    rep.n_evidence = rep.n_dim == rep.quotient_order && rep.head_dim == 1;
    return rep;
}

}  // namespace mlab

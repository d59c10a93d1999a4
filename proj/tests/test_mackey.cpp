#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "mlab/mackey.hpp"

using namespace mlab;

namespace {

void expect_clean(const Cmf& x, const char* what) {
    CmfCheckReport rep = cmf_check(x);
    if (!rep.ok()) {
        for (const auto& v : rep.violations) MESSAGE(what, ": ", v.axiom, " at ", v.instance);
    }
    CHECK(rep.ok());
    CHECK(rep.exhaustive);
}

}  // namespace

TEST_CASE("mackey systems") {
    auto c2 = cyclic_group(2, 1);
    MackeySystemPtr all = mackey_system(c2, SystemKind::All);
    CHECK(all->size() == 2);
    CHECK(all->contains_group);
    CHECK(all->contains_trivial);

    auto d8 = dihedral_group(3);
    MackeySystemPtr nrm = mackey_system(d8, SystemKind::Normal);
    CHECK(nrm->size() == 6);
    CHECK(nrm->normal_only);

    // closure of one reflection contains its conjugate and the intersection
    unsigned s = d8->generators()[1];
    MackeySystemPtr cl = mackey_system(d8, SystemKind::Closure, {Subgroup::generated(d8, {s})});
    CHECK(cl->size() == 3);  // two conjugate reflections + trivial
    CHECK(cl->contains_trivial);
    CHECK_FALSE(cl->contains_group);
}

TEST_CASE("constant functor formulas") {
    auto c2 = cyclic_group(2, 1);
    MackeySystemPtr sys = mackey_system(c2, SystemKind::All);
    std::size_t g = sys->group_index(), tr = sys->minimal_index();

    Cmf t = constant_functor(sys, 1, ConstantKind::T);
    CHECK(t.i(g, tr).is_identity());
    CHECK(t.t(tr, g).is_zero());  // index 2 = 0 mod 2

    Cmf y = constant_functor(sys, 1, ConstantKind::Upsilon);
    CHECK(y.t(tr, g).is_identity());
    CHECK(y.i(g, tr).is_zero());

    Cmf z = constant_functor(sys, 0, ConstantKind::T);
    expect_clean(z, "zero constant functor");
}

TEST_CASE("constructors satisfy the axioms") {
    auto c4 = cyclic_group(2, 2);
    MackeySystemPtr sys4 = mackey_system(c4, SystemKind::All);
    expect_clean(constant_functor(sys4, 1, ConstantKind::T), "T(C4)");
    expect_clean(constant_functor(sys4, 1, ConstantKind::Upsilon), "Y(C4)");
    expect_clean(h0_functor(trivial_module(c4), sys4), "h^0(F2) over C4");
    expect_clean(h0_functor(regular_module(c4), sys4), "h^0(reg) over C4");
    expect_clean(h_lower_functor(trivial_module(c4), 0, sys4, 2), "h_0(F2) over C4");
    expect_clean(h_lower_functor(regular_module(c4), 0, sys4, 2), "h_0(reg) over C4");
    expect_clean(el_functor(sys4), "El(C4)");

    auto d8 = dihedral_group(3);
    MackeySystemPtr sys8 = mackey_system(d8, SystemKind::All);
    expect_clean(h_lower_functor(regular_module(d8), 0, sys8, 2), "h_0(reg) over D8");
    expect_clean(h0_functor(permutation_module(d8, sys8->members[1]), sys8), "h^0(perm) over D8");
    expect_clean(el_functor(sys8), "El(D8)");

    unsigned s = d8->generators()[1];
    expect_clean(induced_functor(Subgroup::generated(d8, {s}), ConstantKind::T, sys8), "ind_T over D8");
    expect_clean(induced_functor(Subgroup::generated(d8, {s}), ConstantKind::Upsilon, sys8),
                 "ind_Y over D8");
    expect_clean(dual_functor(el_functor(sys8)), "dual El over D8");

    auto c9 = cyclic_group(3, 2);
    MackeySystemPtr sys9 = mackey_system(c9, SystemKind::All);
    expect_clean(constant_functor(sys9, 2, ConstantKind::T), "T(C9, n=2)");
    expect_clean(h_lower_functor(trivial_module(c9), 1, sys9, 2), "h_1(F3) over C9");
}

TEST_CASE("planted defect is caught") {
    auto c4 = cyclic_group(2, 2);
    MackeySystemPtr sys = mackey_system(c4, SystemKind::All);
    Cmf t = constant_functor(sys, 1, ConstantKind::T);
    // t edge that should be index * id = 0 replaced by the identity
    t.t_edge[{1, 0}] = FpMatrix::identity(2, 1);
    CmfCheckReport rep = cmf_check(t);
    CHECK_FALSE(rep.ok());
}

TEST_CASE("h^0 and h_0 spec examples over C_2") {
    auto c2 = cyclic_group(2, 1);
    MackeySystemPtr sys = mackey_system(c2, SystemKind::All);
    std::size_t g = sys->group_index(), tr = sys->minimal_index();

    Cmf h0up = h0_functor(trivial_module(c2), sys);
    CHECK(h0up.dims == std::vector<std::size_t>{1, 1});
    CHECK(h0up.i(g, tr).is_identity());
    CHECK(h0up.t(tr, g).is_zero());  // 1 + g acts as 2 = 0

    Cmf h0dn = h_lower_functor(trivial_module(c2), 0, sys, 2);
    CHECK(h0dn.t(tr, g).is_identity());
    CHECK(h0dn.i(g, tr).is_zero());

    Cmf el = el_functor(sys);
    CHECK(el.dims[g] == 1);
    CHECK(el.dims[tr] == 0);
}

TEST_CASE("induced functor examples") {
    auto c4 = cyclic_group(2, 2);
    MackeySystemPtr sys = mackey_system(c4, SystemKind::All);

    // H = G: isomorphic to T(G, F_p) (one double coset everywhere)
    Cmf indg = induced_functor(Subgroup::whole(c4), ConstantKind::T, sys);
    Cmf tg = constant_functor(sys, 1, ConstantKind::T);
    CHECK(indg.dims == tg.dims);
    CHECK(find_isomorphism(indg, tg).has_value());

    // H = C_2 < C_4, kind T: one double coset at U = C_4, nonzero t edge
    unsigned a = c4->generators()[0];
    Subgroup h = Subgroup::generated(c4, {c4->mul(a, a)});
    Cmf ind = induced_functor(h, ConstantKind::T, sys);
    std::size_t u_c4 = sys->group_index();
    CHECK(ind.dims[u_c4] == 1);
    std::size_t u_c2 = sys->index_of(h);
    CHECK_FALSE(ind.t(u_c2, u_c4).is_zero());  // factor |H : H ∩ C_2| = 1

    // H = 1, kind Upsilon over C_2: isomorphic to h_0(regular module)
    auto c2 = cyclic_group(2, 1);
    MackeySystemPtr sys2 = mackey_system(c2, SystemKind::All);
    Cmf ind1 = induced_functor(Subgroup::trivial(c2), ConstantKind::Upsilon, sys2);
    Cmf h0reg = h_lower_functor(regular_module(c2), 0, sys2, 2);
    CHECK(ind1.dims == h0reg.dims);
    CHECK(find_isomorphism(ind1, h0reg).has_value());
}

TEST_CASE("duality") {
    auto c4 = cyclic_group(2, 2);
    MackeySystemPtr sys = mackey_system(c4, SystemKind::All);

    Cmf t = constant_functor(sys, 1, ConstantKind::T);
    Cmf y = constant_functor(sys, 1, ConstantKind::Upsilon);
    Cmf td = dual_functor(t);
    CHECK(find_isomorphism(td, y).has_value());

    Cmf h0reg = h_lower_functor(regular_module(c4), 0, sys, 2);
    Cmf dd = dual_functor(dual_functor(h0reg));
    CHECK(find_isomorphism(dd, h0reg).has_value());
    expect_clean(dual_functor(h0reg), "dual h_0(reg)");

    // dual of the zero functor is the zero functor
    Cmf z = constant_functor(sys, 0, ConstantKind::T);
    Cmf zd = dual_functor(z);
    for (std::size_t d : zd.dims) CHECK(d == 0);
}

TEST_CASE("ires and j_map") {
    auto c2 = cyclic_group(2, 1);
    MackeySystemPtr sys = mackey_system(c2, SystemKind::All);

    FpGModule reg = regular_module(c2);
    Cmf h0reg = h0_functor(reg, sys);
    FpGModule back = ires(h0reg);
    CHECK(back.dim() == reg.dim());
    for (unsigned e = 0; e < c2->order(); ++e) CHECK(back.act(e) == reg.act(e));

    Cmf el = el_functor(sys);
    FpMatrix j = j_map(el);
    CHECK(j.rows() == 0);  // H_1(1, F_2) = 0
    CHECK(j.cols() == 1);

    Cmf z = constant_functor(sys, 0, ConstantKind::T);
    CHECK(ires(z).dim() == 0);
}

TEST_CASE("morphism operations") {
    auto c2 = cyclic_group(2, 1);
    MackeySystemPtr sys = mackey_system(c2, SystemKind::All);
    Cmf h0reg = h_lower_functor(regular_module(c2), 0, sys, 2);

    CmfMorphism id = identity_morphism(h0reg);
    CHECK(is_morphism(id));
    CHECK(kernel_cmf(id).dims == std::vector<std::size_t>{0, 0});
    Cmf img = image_cmf(id);
    CHECK(img.dims == h0reg.dims);

    Cmf h0triv = h_lower_functor(trivial_module(c2), 0, sys, 2);
    CmfMorphism zero = zero_morphism(h0reg, h0triv);
    CHECK(is_morphism(zero));
    CHECK(kernel_cmf(zero).dims == h0reg.dims);

    // h_0 of the cover F_2[C_2] -> F_2: componentwise surjective, kernel dims {1: 1, G: 0}
    // Components: at U the induced map (reg)_U -> (triv)_U.
    std::size_t g = sys->group_index(), tr = sys->minimal_index();
    FpSubquotient reg_g = coinvariants_under(regular_module(c2), sys->members[g]);
    FpSubquotient reg_1 = coinvariants_under(regular_module(c2), sys->members[tr]);
    FpSubquotient tv_g = coinvariants_under(trivial_module(c2), sys->members[g]);
    FpSubquotient tv_1 = coinvariants_under(trivial_module(c2), sys->members[tr]);
    FpMatrix cover(2, 1, 2);  // augmentation F_2[C_2] -> F_2
    cover.set(0, 0, 1);
    cover.set(0, 1, 1);
    CmfMorphism phi{h0reg, h0triv, {}};
    phi.components.resize(2, FpMatrix());
    phi.components[tr] = induced_map(cover, reg_1, tv_1);
    phi.components[g] = induced_map(cover, reg_g, tv_g);
    REQUIRE(is_morphism(phi));
    Cmf ker = kernel_cmf(phi);
    CHECK(ker.dims[g] == 0);
    CHECK(ker.dims[tr] == 1);

    // verified SES: ker -> h_0(reg) -> h_0(triv)
    Ses ses = make_ses(kernel_inclusion(phi), phi);
    CHECK(is_morphism(ses.inj));

    // a non-exact pair must be rejected
    CHECK_THROWS_AS(make_ses(phi, phi), NotSES);
}

TEST_CASE("induction adjunction identity at the finite level") {
    // ind(T(H)) = h^0(coind_H^G(F_p)) as functors
    auto c4 = cyclic_group(2, 2);
    MackeySystemPtr sys = mackey_system(c4, SystemKind::All);
    unsigned a = c4->generators()[0];
    Subgroup h = Subgroup::generated(c4, {c4->mul(a, a)});

    Cmf ind = induced_functor(h, ConstantKind::T, sys);
    SubgroupAsGroup sg = subgroup_as_group(h);
    FpGModule coind = coinduce_module(h, trivial_module(sg.group));
    Cmf h0c = h0_functor(coind, sys);
    CHECK(ind.dims == h0c.dims);
    CHECK(find_isomorphism(ind, h0c).has_value());

    auto d8 = dihedral_group(3);
    MackeySystemPtr sys8 = mackey_system(d8, SystemKind::All);
    Subgroup refl = Subgroup::generated(d8, {d8->generators()[1]});
    Cmf ind8 = induced_functor(refl, ConstantKind::T, sys8);
    SubgroupAsGroup sg8 = subgroup_as_group(refl);
    Cmf h0c8 = h0_functor(coinduce_module(refl, trivial_module(sg8.group)), sys8);
    CHECK(ind8.dims == h0c8.dims);
    CHECK(find_isomorphism(ind8, h0c8).has_value());
}

TEST_CASE("deflation of an induced functor is h_0 of the quotient algebra") {
    // H <= N normal in G: the restriction of ind_H(T) to subgroups containing N
    // is isomorphic to h_0(F_p[G/N]) over G/N.
    auto d8 = dihedral_group(3);
    MackeySystemPtr sys = mackey_system(d8, SystemKind::All);
    ElAbQuotient el = frattini_and_elab(Subgroup::whole(d8));
    Subgroup n = el.frattini;  // center, order 2
    Subgroup h = n;            // H = N

    Cmf ind = induced_functor(h, ConstantKind::T, sys);
    Cmf defl = deflate_cmf(ind, n);

    QuotientGroup q = quotient_group(d8, n);
    MackeySystemPtr qsys = defl.system;
    Cmf h0reg = h_lower_functor(regular_module(q.group), 0, qsys, 2);
    CHECK(defl.dims == h0reg.dims);
    CHECK(find_isomorphism(defl, h0reg).has_value());
}

TEST_CASE("double coset formula is representative independent") {
    // Evaluating the (cMF6) sum with randomized double-coset representatives
    // must give the same matrix as the canonical minimal representatives.
    auto d8 = dihedral_group(3);
    MackeySystemPtr sys = mackey_system(d8, SystemKind::All);
    Cmf x = h0_functor(permutation_module(d8, sys->members[1]), sys);
    std::mt19937 rng(99);

    auto rhs_with = [&](std::size_t u, std::size_t v, std::size_t w,
                        const std::vector<unsigned>& reps) {
        FpMatrix acc(x.p, x.dims[w], x.dims[v]);
        for (unsigned g : reps) {
            std::size_t wg = sys->conj_member(d8->inv(g), w);
            std::size_t vw = sys->intersect_member(v, wg);
            std::size_t gvw = sys->conj_member(g, vw);
            acc = mat_add(acc, mat_mul(x.t(gvw, w), mat_mul(x.c(g, vw), x.i(v, vw))));
        }
        return acc;
    };

    for (std::size_t u = 0; u < sys->size(); ++u)
        for (std::size_t v : sys->below[u])
            for (std::size_t w : sys->below[u]) {
                std::vector<unsigned> reps =
                    double_cosets(sys->members[w], sys->members[u], sys->members[v]);
                FpMatrix canonical = rhs_with(u, v, w, reps);
                // shift every representative inside its double coset
                std::vector<unsigned> shifted;
                for (unsigned r : reps) {
                    const auto& welems = sys->members[w].elements();
                    const auto& velems = sys->members[v].elements();
                    std::uniform_int_distribution<std::size_t> pw(0, welems.size() - 1);
                    std::uniform_int_distribution<std::size_t> pv(0, velems.size() - 1);
                    shifted.push_back(d8->mul(d8->mul(welems[pw(rng)], r), velems[pv(rng)]));
                }
                CHECK(rhs_with(u, v, w, shifted) == canonical);
            }
}

TEST_CASE("hom basis finds all endomorphisms of a constant functor") {
    auto c2 = cyclic_group(2, 1);
    MackeySystemPtr sys = mackey_system(c2, SystemKind::All);
    Cmf t = constant_functor(sys, 1, ConstantKind::T);
    std::vector<std::vector<FpMatrix>> hom = cmf_hom_basis(t, t);
    CHECK(hom.size() >= 1);  // contains the identity
    bool has_identity = false;
    for (const auto& comps : hom) {
        bool all_id = true;
        for (const FpMatrix& c : comps) all_id = all_id && c.is_identity();
        if (all_id) has_identity = true;
    }
    CHECK(has_identity);
}

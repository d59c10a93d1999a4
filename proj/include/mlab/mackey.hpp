#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mlab/fp_matrix.hpp"
#include "mlab/fpg_module.hpp"
#include "mlab/homology.hpp"
#include "mlab/pgroup.hpp"

namespace mlab {

inline constexpr std::size_t kDefaultAxiomBudget = 1000000;

/// A set of subgroups closed under conjugation (MS1) and pairwise
/// intersection (MS2), with the poset structure cached: member order is
/// deterministic (by order, then element list), cover edges are the Hasse
/// diagram, and conj_member resolves g U g^-1 to a member index.
struct MackeySystem {
    PGroupPtr group;
    std::vector<Subgroup> members;
    bool contains_group = false;
    bool contains_trivial = false;
    bool normal_only = false;

    std::vector<std::pair<std::size_t, std::size_t>> cover_edges;  // (upper, lower)
    std::vector<std::vector<std::size_t>> below;  // below[u] = indices of members <= u

    std::size_t size() const { return members.size(); }
    bool leq(std::size_t v, std::size_t u) const;
    std::size_t index_of(const Subgroup& s) const;
    std::size_t conj_member(unsigned g, std::size_t u) const;
    std::size_t intersect_member(std::size_t a, std::size_t b) const;
    std::size_t group_index() const;    // throws unless contains_group
    std::size_t minimal_index() const;  // intersection of all members

    std::vector<int> conj_cache;  // [g * size + u] -> member index
};

using MackeySystemPtr = std::shared_ptr<const MackeySystem>;

enum class SystemKind { All, Normal, Closure };

MackeySystemPtr mackey_system(const PGroupPtr& g, SystemKind kind,
                              const std::vector<Subgroup>& seeds = {},
                              std::size_t budget = kDefaultSubgroupBudget);

/// Cohomological Mackey functor with F_p coefficients. Maps are stored on
/// Hasse cover edges (i downward, t upward) and on (generator, member) pairs
/// for conjugation; everything else is composed along canonical chains, so
/// path independence is a checked property rather than a storage redundancy.
struct Cmf {
    MackeySystemPtr system;
    std::uint32_t p = 2;
    std::vector<std::size_t> dims;
    std::map<std::pair<std::size_t, std::size_t>, FpMatrix> i_edge;  // (upper, lower)
    std::map<std::pair<std::size_t, std::size_t>, FpMatrix> t_edge;  // (upper, lower): X_lower -> X_upper
    std::map<std::pair<std::size_t, std::size_t>, FpMatrix> c_gen;   // (gen index, member)

    FpMatrix i(std::size_t u, std::size_t v) const;  // X_u -> X_v for v <= u
    FpMatrix t(std::size_t v, std::size_t u) const;  // X_v -> X_u for v <= u
    FpMatrix c(unsigned g, std::size_t u) const;     // X_u -> X_{gug^-1}

    std::size_t dim_at(const Subgroup& s) const { return dims[system->index_of(s)]; }

  private:
    mutable std::map<std::pair<std::size_t, std::size_t>, FpMatrix> i_cache_, t_cache_;
    mutable std::map<std::pair<unsigned, std::size_t>, FpMatrix> c_cache_;
};

enum class ConstantKind { T, Upsilon };

/// Example functors T (i = id, t = index; "fixed points of nothing") and
/// Upsilon (t = id, i = index) with fiber F_p^n.
Cmf constant_functor(const MackeySystemPtr& sys, std::size_t n, ConstantKind kind);

/// h^0(M): U -> M^U with inclusion as i and the trace sum as t.
Cmf h0_functor(const FpGModule& m, const MackeySystemPtr& sys);

/// h_k(M): U -> H_k(U, res M); for k = 0 the coinvariants U -> M_U with the
/// canonical projection as t and the transfer sum as i.
Cmf h_lower_functor(const FpGModule& m, std::size_t k, const MackeySystemPtr& sys, std::size_t cap);

/// El = h_1(F_p): U -> U^{ab,el}.
Cmf el_functor(const MackeySystemPtr& sys, std::size_t cap = 2);

/// Induction of T(H, F_p) resp. Upsilon(H, F_p) to G: spaces F_p[H\G/U].
Cmf induced_functor(const Subgroup& h, ConstantKind kind, const MackeySystemPtr& sys);

/// Pontryagin dual: i <-> t transposed, c_g -> c_{g^-1} transposed.
Cmf dual_functor(const Cmf& x);

/// inrst(X): the value at the minimal member with the conjugation action.
FpGModule ires(const Cmf& x);
/// j_X : X_G -> ires(X), the composed i map. Needs G in the system.
FpMatrix j_map(const Cmf& x);
/// prorst(X) for a finite group collapses to the same minimal member value.
FpGModule prorst_finite(const Cmf& x);

/// Restriction to the quotient system {U/N : N <= U} as a functor of G/N.
Cmf deflate_cmf(const Cmf& x, const Subgroup& n);

struct CmfViolation {
    std::string axiom;
    std::string instance;
};

struct CmfCheckReport {
    std::vector<CmfViolation> violations;
    std::size_t instances_total = 0;
    std::size_t instances_checked = 0;
    bool exhaustive = true;
    bool ok() const { return violations.empty(); }
};

/// Verify the seven axioms. Exhaustive when the instance count fits the
/// budget, deterministic seeded sampling above it.
CmfCheckReport cmf_check(const Cmf& x, std::size_t budget = kDefaultAxiomBudget,
                         std::uint64_t seed = 0);

struct CmfMorphism {
    Cmf source;
    Cmf target;
    std::vector<FpMatrix> components;  // per member
};

bool is_morphism(const CmfMorphism& phi);
CmfMorphism identity_morphism(const Cmf& x);
CmfMorphism zero_morphism(const Cmf& x, const Cmf& y);

Cmf kernel_cmf(const CmfMorphism& phi);
Cmf image_cmf(const CmfMorphism& phi);

/// Inclusion of kernel_cmf(phi) into the source / of image_cmf(phi) into the
/// target, as morphisms.
CmfMorphism kernel_inclusion(const CmfMorphism& phi);
CmfMorphism image_inclusion(const CmfMorphism& phi);

struct Ses {
    CmfMorphism inj;   // X -> Y
    CmfMorphism surj;  // Y -> Z
};

/// Verify componentwise exactness 0 -> X -> Y -> Z -> 0; throws NotSES.
Ses make_ses(CmfMorphism inj, CmfMorphism surj);

/// Basis of Hom(X, Y) in the category of cohomological Mackey functors.
std::vector<std::vector<FpMatrix>> cmf_hom_basis(const Cmf& x, const Cmf& y);

/// Search for an isomorphism X -> Y inside the hom space.
std::optional<CmfMorphism> find_isomorphism(const Cmf& x, const Cmf& y);

}  // namespace mlab

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "mlab/fp_matrix.hpp"
#include "mlab/pgroup.hpp"

namespace mlab {

inline constexpr std::size_t kDefaultActionCacheBudget = std::size_t(1) << 26;

/// Finite-dimensional left F_p[G]-module given by invertible generator
/// actions. Matrices act on column vectors, so rho(g)*rho(h) = rho(gh).
/// When |G|*dim^2 fits the cache budget every element action is materialized
/// at construction and the full multiplication table is verified against the
/// Cayley table; otherwise element actions are composed from generator words
/// on demand and only the generator orders are verified.
class FpGModule {
  public:
    FpGModule(PGroupPtr group, std::size_t dim, std::vector<FpMatrix> gen_action,
              std::size_t cache_budget = kDefaultActionCacheBudget);

    const PGroupPtr& group() const { return group_; }
    std::size_t dim() const { return dim_; }
    std::uint32_t p() const { return group_->p(); }
    const FpMatrix& gen_action(std::size_t j) const { return gen_action_[j]; }

    /// Action matrix of an arbitrary element.
    FpMatrix act(unsigned element) const;
    FpVector act_on(unsigned element, const FpVector& v) const;

  private:
    PGroupPtr group_;
    std::size_t dim_ = 0;
    std::vector<FpMatrix> gen_action_;
    std::vector<FpMatrix> element_cache_;  // empty when over budget
};

FpGModule trivial_module(const PGroupPtr& g);
FpGModule zero_module(const PGroupPtr& g);
FpGModule regular_module(const PGroupPtr& g);

/// F_p[G/U] with the left translation action; basis = left cosets ordered by
/// minimal element index.
FpGModule permutation_module(const PGroupPtr& g, const Subgroup& u);

/// Fixed points M^G (the socle for a p-group).
FpSubquotient invariants(const FpGModule& m);
/// Fixed points under a subgroup, M^U.
FpSubquotient invariants_under(const FpGModule& m, const Subgroup& u);

/// omega_U * M = span of (rho(u) - 1)M over a generating set of U.
FpMatrix omega_submodule(const FpGModule& m, const Subgroup& u);

/// Coinvariants M_G = M / omega_G M (the head for a p-group).
FpSubquotient coinvariants(const FpGModule& m);
FpSubquotient coinvariants_under(const FpGModule& m, const Subgroup& u);

/// F_p[G] is local, so M is projective iff the cover by dim(M_G) free copies
/// is an isomorphism, i.e. dim M = |G| * dim M_G.
bool is_projective(const FpGModule& m);

struct ProjectiveCover {
    std::size_t rank = 0;      // number of free summands
    FpMatrix cover;            // dim(M) x rank*|G|
    FpGModule syzygy;          // kernel with inherited action
    FpMatrix syzygy_basis;     // rows: basis of the kernel inside F_p[G]^rank
};

/// Minimal projective cover F_p[G]^r -> M, r = dim(M_G). Head lifts are the
/// RREF coset representatives, so the construction is deterministic.
ProjectiveCover projective_cover(const FpGModule& m);

/// A finite truncation of the minimal projective resolution
///   P_L -> ... -> P_1 -> P_0 -> M -> 0.
struct Resolution {
    FpGModule target;
    PGroupPtr group;
    std::vector<std::size_t> ranks;       // r_0 .. r_len
    std::vector<FpMatrix> boundaries;     // boundaries[k-1] = d_k : P_k -> P_{k-1}
    FpMatrix augmentation;                // P_0 -> M
    bool truncated = false;               // true when stopped at the cap with syzygy != 0

    std::size_t length() const { return ranks.size() - 1; }
    const FpMatrix& d(std::size_t k) const { return boundaries.at(k - 1); }
    /// Free rank of P_k; zero beyond the computed length (resolution ended).
    std::size_t rank_at(std::size_t k) const { return k < ranks.size() ? ranks[k] : 0; }
};

Resolution minimal_resolution(const FpGModule& m, std::size_t cap);

/// The same module with the action re-indexed by the generators of U.
FpGModule restrict_module(const FpGModule& m, const Subgroup& u);

/// Induced module F_p[G] (x)_H N of dimension |G:H| * dim N. For finite groups
/// coinduction is canonically isomorphic to induction; coinduce_module is that
/// same construction under its adjoint name.
FpGModule induce_module(const Subgroup& h, const FpGModule& n);
FpGModule coinduce_module(const Subgroup& h, const FpGModule& n);

/// dim Hom_G(M, N), computed as the solution space of rho_N(g) F = F rho_M(g).
std::size_t hom_dim(const FpGModule& m, const FpGModule& n);

/// Contragredient module, rho*(g) = rho(g^{-1})^T.
FpGModule contragredient(const FpGModule& m);

/// Smallest submodule containing the given spanning vectors.
struct Submodule {
    FpMatrix basis;     // rows, RREF
    FpGModule module;   // abstract module on that basis
};
Submodule submodule_generated(const FpGModule& m, const FpMatrix& spanning_rows);

/// M / S for a G-stable subspace S (rows of sub_basis).
FpGModule quotient_module(const FpGModule& m, const FpMatrix& sub_basis);

/// Direct sum.
FpGModule direct_sum(const FpGModule& a, const FpGModule& b);

}  // namespace mlab

#pragma once

#include <cstdint>
#include <vector>

#include "mlab/fp_matrix.hpp"
#include "mlab/fpg_module.hpp"
#include "mlab/pgroup.hpp"

namespace mlab {

/// Coinvariants (F_p[G]^rank)_U of a free module with respect to a subgroup.
/// The free basis (i, g) reduces to (i, Ug); the reduced basis is indexed by
/// right cosets U\g with minimal-index representatives.
struct FreeCoinv {
    PGroupPtr group;
    std::size_t rank = 0;
    Subgroup sub;
    std::vector<unsigned> coset_rep;  // minimal representative per right coset
    std::vector<int> coset_of;        // group element -> coset index

    std::size_t cosets() const { return coset_rep.size(); }
    std::size_t dim() const { return rank * coset_rep.size(); }
    FpVector reduce(const FpVector& full) const;
    FpVector lift(const FpVector& reduced) const;
};

FreeCoinv free_coinvariants(const PGroupPtr& g, std::size_t rank, const Subgroup& u);

/// Reduced boundary d-bar_k : (P_k)_U -> (P_{k-1})_U of a free resolution.
FpMatrix reduced_boundary(const Resolution& r, const Subgroup& u, std::size_t k);

/// Reduced augmentation (P_0)_U -> M_U is not needed; homology only uses the
/// boundaries. H_k as a subquotient of (P_k)_U. For a minimal resolution and
/// U = G the boundaries vanish and the subquotient is the whole space.
FpSubquotient restricted_homology(const Resolution& r, const Subgroup& u, std::size_t k);

/// Chain-level transfer sum_{r in R(U/V)} r^{-1) on coinvariants,
/// (P_rank)_U -> (P_rank)_V for V <= U. Well-definedness (independence of the
/// lift) is verified on every basis vector.
FpMatrix coinv_transfer(const FreeCoinv& cu, const FreeCoinv& cv);

/// Canonical projection (P_rank)_V -> (P_rank)_U for V <= U.
FpMatrix coinv_projection(const FreeCoinv& cv, const FreeCoinv& cu);

/// Conjugation (P_rank)_U -> (P_rank)_{gUg^-1} induced by left multiplication.
FpMatrix coinv_conjugation(const FreeCoinv& cu, unsigned g, const FreeCoinv& cgu);

struct HomologyResult {
    std::size_t k = 0;
    FpSubquotient space;  // subquotient of the coinvariant complex at degree k
    bool via_minimal = true;
    std::size_t dims = 0;
};

/// H_k(G, M) over F_p from the minimal resolution. By minimality the
/// coinvariant differentials vanish, so dims equals the free rank r_k.
HomologyResult homology(const FpGModule& m, std::size_t k, std::size_t cap);

/// The corestriction H_d(G, M) -> H_d(U, res M) of the chain transfer.
/// Needs the resolution to reach degree d+1 (or terminate): cap >= d.
FpMatrix corestriction(const FpGModule& m, const Subgroup& u, std::size_t d, std::size_t cap);

/// Same map between two nested subgroups on a fixed resolution; the U = G,
/// V = U case is corestriction. Asserts the chain-map property at degree d.
FpMatrix cores_on_resolution(const Resolution& r, const Subgroup& big, const Subgroup& small,
                             std::size_t d);

struct TatePair {
    FpSubquotient hm1;  // ker N / omega A
    FpSubquotient h0;   // A^G / N A
    FpMatrix norm;
};

/// Tate cohomology in degrees -1 and 0 for a module over its (finite) group.
TatePair tate(const FpGModule& a);

/// dim H^1(Q, A) computed as dim H_1(Q, A*) via finite duality.
std::size_t h1_cohomology(const FpGModule& a);

/// A deliberately non-minimal free resolution (each cover padded with one
/// spare free summand): an independent route for homology cross-checks.
Resolution padded_resolution(const FpGModule& m, std::size_t cap);

/// Canonical isomorphism H_1(U, F_p) -> U^{ab,el} evaluated on the restricted
/// complex of a minimal resolution of the trivial module. Columns are indexed
/// by the coset basis of restricted_homology(r, u, 1).
FpMatrix h1_elab_alignment(const Resolution& r, const Subgroup& u, const ElAbQuotient& elab_u);

}  // namespace mlab

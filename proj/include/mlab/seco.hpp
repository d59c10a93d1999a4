#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "mlab/fp_matrix.hpp"
#include "mlab/mackey.hpp"

namespace mlab {

/// The four section cohomology groups of a normal section (U, V):
///   k0 = ker i_{U,V}                k1 = (X_V)^{U/V} / im i_{U,V}
///   c0 = coker t_{V,U}              c1 = ker t_{V,U} / omega_{U/V} X_V
struct SectionCohomology {
    std::size_t upper = 0, lower = 0;  // member indices
    FpSubquotient k0, k1, c0, c1;
};

/// Throws NotNormalSection unless V is normal in U and both are members.
SectionCohomology section_cohomology(const Cmf& x, std::size_t upper, std::size_t lower);
SectionCohomology section_cohomology(const Cmf& x, const Subgroup& upper, const Subgroup& lower);

/// All normal sections (upper, lower) of the system, upper != lower included
/// only when normality holds; (u, u) pairs are skipped.
std::vector<std::pair<std::size_t, std::size_t>> normal_sections(const MackeySystem& sys);

/// The six-term sequence of Prop-style section cohomology:
///   0 -> c1 -> H^{-1}(U/V, X_V) -> k0 -> c0 -> H^0(U/V, X_V) -> k1 -> 0
/// built from the canonical maps and verified exact.
struct SixTermReport {
    bool exact = false;
    std::array<std::size_t, 6> dims{};  // c1, Tate^-1, k0, c0, Tate^0, k1
};

SixTermReport six_term_check(const Cmf& x, std::size_t upper, std::size_t lower);

/// Long sequences induced by a short exact sequence of functors on a normal
/// section: the k-sequence 0 -> k0(X) -> k0(Y) -> k0(Z) -> k1(X) -> k1(Y) -> k1(Z)
/// and the c-sequence c1(X) -> c1(Y) -> c1(Z) -> c0(X) -> c0(Y) -> c0(Z) -> 0.
struct LongSeqReport {
    bool k_exact = false;
    bool c_exact = false;
    bool c1_injective = false;  // recorded, never asserted
};

LongSeqReport long_sequences_check(const Ses& s, std::size_t upper, std::size_t lower);

struct CmfPredicates {
    bool i_injective = false;
    bool t_surjective = false;
    bool type_h0 = false;
    bool type_h_0 = false;
    bool terminally_i_injective = false;
    bool terminally_type_h0 = false;
    bool hilbert90 = false;
};

/// Each predicate is evaluated both from its map-level definition and from
/// its section-cohomology characterization; disagreement is an internal error.
/// The terminal predicates require G in the system. The Hilbert '90 scan can
/// be skipped when only the structural verdicts are needed.
CmfPredicates predicates(const Cmf& x, bool with_hilbert90 = true);

/// For X terminally of type H^0: im(i_{G,U}) must equal the G/U-socle of X_U
/// for every normal member U. Throws PreconditionFailed otherwise.
bool terminal_socle_check(const Cmf& x);

/// X_V as a module over the quotient group U/V (action through the c maps).
FpGModule section_module(const Cmf& x, std::size_t upper, std::size_t lower);

}  // namespace mlab

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mlab/fp_matrix.hpp"
#include "mlab/pgroup.hpp"

namespace mlab {

/// A finite inverse system G_1 <- G_2 <- ... <- G_m of p-groups with
/// surjective connecting maps, read as a finite-stage approximation of the
/// pro-p group lim G_k. projections[k] maps elements of stages[k+1] onto
/// stages[k]. Stage indices in the API are 1-based like the mathematics.
struct Tower {
    std::vector<PGroupPtr> stages;
    std::vector<std::vector<unsigned>> projections;
    std::string name;

    std::size_t depth() const { return stages.size(); }
    /// Composite projection stage from -> stage to (1-based, to <= from).
    std::vector<unsigned> proj(std::size_t from, std::size_t to) const;
};

/// Checks the shape and that every connecting map is a surjective
/// homomorphism. Throws NotSurjective / NotHomomorphism.
Tower make_tower(std::vector<PGroupPtr> stages, std::vector<std::vector<unsigned>> projections,
                 std::string name);

Tower constant_tower(const PGroupPtr& g, std::size_t depth);
/// C_p <- C_{p^2} <- ... <- C_{p^depth}, the Z_p approximation.
Tower cyclic_tower(std::uint32_t p, std::size_t depth, std::size_t order_cap = kDefaultOrderCap);
Tower product_tower(const Tower& a, const Tower& b, std::size_t order_cap = kDefaultOrderCap);

/// ker(G_m -> G_j) as a subgroup of stage m (1-based, j < m).
Subgroup tower_kernel(const Tower& t, std::size_t m, std::size_t j);

struct TowerValidation {
    std::vector<std::size_t> orders;
    std::vector<std::size_t> elab_dims;
    /// First stage k with elab_dims[k-1] == elab_dims[k] (1-based), if any.
    std::optional<std::size_t> elab_stable_at;
};

/// Re-verifies every projection and reports the basic stage data.
TowerValidation tower_validate(const Tower& t);

enum class Verdict { SoundPositive, Inconclusive };

struct FreeTestEntry {
    std::size_t j = 0;               // basis subgroup index: U_j = ker(G_m -> G_j)
    std::size_t kernel_dim = 0;      // dim ker of the transfer on ElAb
    Verdict verdict = Verdict::Inconclusive;
};

struct FreeTestReport {
    std::size_t stage = 0;
    bool abelianization_stable = false;
    std::vector<FreeTestEntry> entries;
    bool all_sound_positive() const {
        for (const auto& e : entries)
            if (e.verdict != Verdict::SoundPositive) return false;
        return true;
    }
};

/// Cor-B style finite-stage freeness evidence: injectivity of the transfer
/// G_m^{ab,el} -> U^{ab,el} for the kernel basis subgroups. Positive verdicts
/// are sound once the abelianization ranks have stabilized; negatives are
/// always inconclusive.
FreeTestReport free_test(const Tower& t, std::size_t m);

struct D1Report {
    std::size_t stage = 0;
    std::vector<std::size_t> chain_dims;       // ElAb dims along G_m >= K_{m,1} >= ...
    std::vector<std::size_t> step_ranks;       // rank of each transfer step
    std::vector<std::size_t> composite_ranks;  // ranks of composites from the top
    std::size_t certificate = 0;               // final composite rank
};

/// The transfer chain down the kernel filtration: a finite-stage witness for
/// the colimit defining D_1(F_p).
D1Report d1_report(const Tower& t, std::size_t m);

struct EndsReport {
    enum class Kind { Finite, TwoEnds, LowerBound } kind = Kind::LowerBound;
    std::size_t value = 0;  // E for Finite/TwoEnds, the bound 1+b otherwise
    std::string detail;
};

/// E = 0 when the tower stabilizes; E = 2 (consistent-with verdict) for a
/// strictly growing tower whose D_1 certificate locks at 1 with injective
/// chain transfers; otherwise only the evidence bound E >= 1 + b is reported.
EndsReport ends_classify(const Tower& t, std::size_t m);

/// Stage-wise surjections tau_k : G_k -> Z/p^k with a compatible section
/// witness s_k. tau is given on each stage as a full element-value table.
struct DirectionWitnessData {
    std::vector<std::vector<unsigned>> tau;  // tau[k][element] in Z/p^{k+1}
    std::vector<unsigned> sigma;             // s_k per stage
};

struct DirectionReport {
    std::size_t stage = 0;
    bool splitting_verified = false;
    bool j_el_nonzero = false;  // sound-positive over all available kernels
    std::size_t n_dim = 0;      // dim N_m^{ab,el}
    std::size_t quotient_order = 0;
    std::size_t head_dim = 0;
    bool n_evidence = false;  // dims match the limit prediction at this stage
};

/// Verifies the witness (throws IncompatibleWitness) and evaluates the
/// F_p-direction conditions at stage m with sound-positive semantics.
DirectionReport direction_check(const Tower& t, const DirectionWitnessData& w, std::size_t m);

}  // namespace mlab

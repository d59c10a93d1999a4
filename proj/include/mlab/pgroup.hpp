#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "mlab/fp_matrix.hpp"

namespace mlab {

inline constexpr std::size_t kDefaultOrderCap = 4096;
inline constexpr std::size_t kDefaultSubgroupBudget = 100000;

/// A finite p-group materialized as a Cayley table over element indices.
/// Index 0 is the identity. Elements are ordered by BFS over generator words
/// (identity first, then generator images in index order, and so on), so every
/// construction from the same generators is reproducible. Immutable.
class PGroup {
  public:
    /// Group generated by permutations of {0..degree-1}. Each permutation is a
    /// vector of images. Fails with NotAPGroup when the generated order is not
    /// a power of p and with CapExceeded above order_cap.
    static std::shared_ptr<const PGroup> from_generators(std::uint32_t p, std::size_t degree,
                                                         const std::vector<std::vector<unsigned>>& perms,
                                                         std::size_t order_cap = kDefaultOrderCap);

    /// Wrap an existing table. Checks identity, inverses, the latin-square
    /// property, associativity (Light's test on the generators), p-power order
    /// and p-power element orders, and that the generators generate.
    static std::shared_ptr<const PGroup> from_cayley(std::uint32_t p,
                                                     std::vector<std::vector<unsigned>> table,
                                                     std::vector<unsigned> generators);

    std::uint32_t p() const { return p_; }
    std::size_t order() const { return order_; }
    unsigned mul(unsigned a, unsigned b) const { return cayley_[a * order_ + b]; }
    unsigned inv(unsigned a) const { return inverse_[a]; }
    unsigned conj(unsigned g, unsigned x) const { return mul(mul(g, x), inv(g)); }  // g x g^-1
    const std::vector<unsigned>& generators() const { return generators_; }
    unsigned element_order(unsigned a) const { return elem_order_[a]; }

    /// Generator letters whose left-to-right product is the element.
    std::vector<unsigned> word_of(unsigned e) const;

  private:
    PGroup() = default;
    void finish_construction();  // inverse, orders, words

    std::uint32_t p_ = 2;
    std::size_t order_ = 1;
    std::vector<unsigned> cayley_;  // row-major order_ x order_
    std::vector<unsigned> generators_;
    std::vector<unsigned> inverse_;
    std::vector<unsigned> elem_order_;
    std::vector<unsigned> bfs_parent_;
    std::vector<unsigned> bfs_letter_;
};

using PGroupPtr = std::shared_ptr<const PGroup>;

// Built-in families. All funnel through from_generators.
PGroupPtr cyclic_group(std::uint32_t p, unsigned k, std::size_t order_cap = kDefaultOrderCap);
PGroupPtr elem_abelian_group(std::uint32_t p, unsigned rank, std::size_t order_cap = kDefaultOrderCap);
PGroupPtr dihedral_group(unsigned k, std::size_t order_cap = kDefaultOrderCap);    // order 2^k, k >= 2
PGroupPtr quaternion_group(unsigned k, std::size_t order_cap = kDefaultOrderCap);  // order 2^k, k >= 3
PGroupPtr product_group(const PGroupPtr& a, const PGroupPtr& b, std::size_t order_cap = kDefaultOrderCap);

/// Subgroup of a PGroup as a membership bitset. Closure under multiplication
/// and inversion is validated at construction.
class Subgroup {
  public:
    Subgroup(PGroupPtr parent, std::vector<bool> members);

    static Subgroup whole(PGroupPtr g);
    static Subgroup trivial(PGroupPtr g);
    static Subgroup generated(PGroupPtr g, const std::vector<unsigned>& gens);

    const PGroupPtr& parent() const { return parent_; }
    bool contains(unsigned e) const { return members_[e]; }
    const std::vector<unsigned>& elements() const { return elements_; }
    std::size_t order() const { return elements_.size(); }
    const std::vector<bool>& members() const { return members_; }

    bool operator==(const Subgroup& o) const {
        return parent_ == o.parent_ && members_ == o.members_;
    }
    bool subset_of(const Subgroup& o) const;
    Subgroup conjugate(unsigned g) const;  // g U g^-1
    Subgroup intersect(const Subgroup& o) const;
    bool normal_in(const Subgroup& bigger) const;
    bool is_whole_group() const { return order() == parent_->order(); }

  private:
    PGroupPtr parent_;
    std::vector<bool> members_;
    std::vector<unsigned> elements_;
};

/// Minimal-index representatives of the left cosets h*U, h in H.
std::vector<unsigned> left_transversal(const Subgroup& small, const Subgroup& big);
/// Minimal-index representatives of the right cosets U*h.
std::vector<unsigned> right_transversal(const Subgroup& small, const Subgroup& big);

/// Lexicographically first minimal generating sequence of U.
std::vector<unsigned> generating_set(const Subgroup& u);

/// Smallest subgroup of G containing all g*x*g^-1, x a seed, g in G.
Subgroup normal_closure(const PGroupPtr& g, const std::vector<unsigned>& seeds);

enum class SubgroupKind { All, Normal };

/// Complete duplicate-free list, ordered by (order, element list). Uses the
/// cyclic-extension closure; every subgroup of a p-group sits above a maximal
/// normal subgroup of index p, so the level-by-level extension is exhaustive.
std::vector<Subgroup> subgroups(const PGroupPtr& g, SubgroupKind kind,
                                std::size_t budget = kDefaultSubgroupBudget);

/// The maximal elementary abelian quotient H/Phi(H) with a deterministic basis.
struct ElAbQuotient {
    Subgroup domain;
    Subgroup frattini;
    std::vector<unsigned> basis;  // elements of H whose images form the basis
    std::size_t rank = 0;
    /// Coordinates of a member of H in the chosen basis of H/Phi(H).
    FpVector log(unsigned e) const;

    std::vector<FpVector> log_table;  // indexed by parent element; valid on members
};

/// Phi(H) = subgroup generated by p-th powers and commutators, plus H/Phi(H).
ElAbQuotient frattini_and_elab(const Subgroup& h);

/// Representatives (minimal element index) of the double cosets W \ U / V.
std::vector<unsigned> double_cosets(const Subgroup& w, const Subgroup& u, const Subgroup& v);

/// Matrix of the classical transfer (Verlagerung) ElAb(H) -> ElAb(U) in the
/// deterministic ElAb bases of both sides. Independent of the transversal.
FpMatrix verlagerung(const Subgroup& h, const Subgroup& u);
FpMatrix verlagerung_with_transversal(const Subgroup& h, const Subgroup& u,
                                      const std::vector<unsigned>& reps,
                                      const ElAbQuotient& elab_h, const ElAbQuotient& elab_u);

struct QuotientGroup {
    PGroupPtr group;
    std::vector<unsigned> proj;  // parent element -> quotient element
};

/// G/N for N normal in G. Cosets are ordered by minimal representative.
QuotientGroup quotient_group(const PGroupPtr& g, const Subgroup& n);

struct SubgroupAsGroup {
    PGroupPtr group;
    std::vector<unsigned> embed;    // new index -> parent index
    std::vector<unsigned> restrict_idx;  // parent index -> new index (members only)
};

/// U as a standalone PGroup, elements ordered by parent index.
SubgroupAsGroup subgroup_as_group(const Subgroup& u);

}  // namespace mlab

#include "mlab/pgroup.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <string>

#include "mlab/errors.hpp"

namespace mlab {

namespace {

bool is_p_power(std::size_t n, std::uint32_t p) {
    if (n == 0) return false;
    while (n % p == 0) n /= p;
    return n == 1;
}

std::vector<unsigned> compose(const std::vector<unsigned>& a, const std::vector<unsigned>& b) {
    // (a . b)(x) = a(b(x))
    std::vector<unsigned> r(a.size());
    for (std::size_t x = 0; x < a.size(); ++x) r[x] = a[b[x]];
    return r;
}

}  // namespace

void PGroup::finish_construction() {
    inverse_.assign(order_, 0);
    for (unsigned a = 0; a < order_; ++a)
        for (unsigned b = 0; b < order_; ++b)
            if (mul(a, b) == 0) {
                inverse_[a] = b;
                break;
            }
    elem_order_.assign(order_, 1);
    for (unsigned a = 0; a < order_; ++a) {
        unsigned x = a, k = 1;
        while (x != 0) {
            x = mul(x, a);
            ++k;
        }
        elem_order_[a] = k;
        if (!is_p_power(k, p_))
            throw NotAPGroup("element order " + std::to_string(k) + " is not a power of " +
                             std::to_string(p_));
    }
}

std::vector<unsigned> PGroup::word_of(unsigned e) const {
    std::vector<unsigned> w;
    while (e != 0) {
        w.push_back(bfs_letter_[e]);
        e = bfs_parent_[e];
    }
    std::reverse(w.begin(), w.end());
    return w;
}

std::shared_ptr<const PGroup> PGroup::from_generators(std::uint32_t p, std::size_t degree,
                                                      const std::vector<std::vector<unsigned>>& perms,
                                                      std::size_t order_cap) {
    if (!is_prime(p)) throw InvariantError("p = " + std::to_string(p) + " is not prime");
    for (const auto& perm : perms) {
        if (perm.size() != degree) throw InvariantError("permutation has wrong degree");
        std::vector<bool> seen(degree, false);
        for (unsigned v : perm) {
            if (v >= degree || seen[v]) throw InvariantError("not a permutation of {0..degree-1}");
            seen[v] = true;
        }
    }

    std::vector<unsigned> id(degree);
    std::iota(id.begin(), id.end(), 0);

    // BFS over generator words, identity first; ties broken by generator index.
    std::vector<std::vector<unsigned>> elems{id};
    std::map<std::vector<unsigned>, unsigned> index{{id, 0}};
    std::vector<unsigned> parent{0}, letter{0};
    std::vector<unsigned> gen_mult;  // gen_mult[e * ngens + j] = index of elems[e] * perms[j]
    const std::size_t ngens = perms.size();
    for (std::size_t head = 0; head < elems.size(); ++head) {
        for (std::size_t j = 0; j < ngens; ++j) {
            std::vector<unsigned> prod = compose(elems[head], perms[j]);
            auto it = index.find(prod);
            unsigned idx;
            if (it == index.end()) {
                idx = static_cast<unsigned>(elems.size());
                if (elems.size() + 1 > order_cap)
                    throw CapExceeded("generated group exceeds order cap " + std::to_string(order_cap));
                index.emplace(prod, idx);
                elems.push_back(std::move(prod));
                parent.push_back(static_cast<unsigned>(head));
                letter.push_back(static_cast<unsigned>(j));
            } else {
                idx = it->second;
            }
            gen_mult.push_back(idx);
        }
    }

    const std::size_t n = elems.size();
    if (!is_p_power(n, p))
        throw NotAPGroup("generated order " + std::to_string(n) + " is not a power of " + std::to_string(p));

    auto g = std::shared_ptr<PGroup>(new PGroup());
    g->p_ = p;
    g->order_ = n;
    g->bfs_parent_ = parent;
    g->bfs_letter_ = letter;
    for (std::size_t j = 0; j < ngens; ++j) g->generators_.push_back(gen_mult[0 * ngens + j]);

    // cayley[a][b] with b in BFS order: a*b = (a*parent(b))*letter(b).
    g->cayley_.assign(n * n, 0);
    for (unsigned a = 0; a < n; ++a) {
        g->cayley_[a * n + 0] = a;
        for (unsigned b = 1; b < n; ++b) {
            unsigned ap = g->cayley_[a * n + parent[b]];
            g->cayley_[a * n + b] = gen_mult[ap * ngens + letter[b]];
        }
    }
    g->finish_construction();
    return g;
}

std::shared_ptr<const PGroup> PGroup::from_cayley(std::uint32_t p, std::vector<std::vector<unsigned>> table,
                                                  std::vector<unsigned> generators) {
    if (!is_prime(p)) throw InvariantError("p is not prime");
    const std::size_t n = table.size();
    if (!is_p_power(n, p)) throw NotAPGroup("order is not a power of p");
    for (const auto& row : table)
        if (row.size() != n) throw InvariantError("cayley table is not square");

    auto g = std::shared_ptr<PGroup>(new PGroup());
    g->p_ = p;
    g->order_ = n;
    g->cayley_.assign(n * n, 0);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
            if (table[a][b] >= n) throw InvariantError("cayley entry out of range");
            g->cayley_[a * n + b] = table[a][b];
        }

    for (unsigned x = 0; x < n; ++x)
        if (g->mul(0, x) != x || g->mul(x, 0) != x)
            throw InvariantError("index 0 is not an identity for the table");

    // Latin square property.
    for (unsigned a = 0; a < n; ++a) {
        std::vector<bool> row(n, false), col(n, false);
        for (unsigned b = 0; b < n; ++b) {
            if (row[g->mul(a, b)]) throw InvariantError("cayley row has repeats");
            row[g->mul(a, b)] = true;
            if (col[g->mul(b, a)]) throw InvariantError("cayley column has repeats");
            col[g->mul(b, a)] = true;
        }
    }

    // Light's associativity test over the (claimed) generators.
    for (unsigned s : generators) {
        if (s >= n) throw InvariantError("generator index out of range");
        for (unsigned a = 0; a < n; ++a)
            for (unsigned b = 0; b < n; ++b)
                if (g->mul(g->mul(a, s), b) != g->mul(a, g->mul(s, b)))
                    throw InvariantError("cayley table is not associative");
    }

    // BFS with the given generators: order-of-discovery words and reachability.
    g->generators_ = generators;
    g->bfs_parent_.assign(n, 0);
    g->bfs_letter_.assign(n, 0);
    std::vector<bool> seen(n, false);
    seen[0] = true;
    std::vector<unsigned> queue{0};
    for (std::size_t head = 0; head < queue.size(); ++head)
        for (std::size_t j = 0; j < generators.size(); ++j) {
            unsigned nxt = g->mul(queue[head], generators[j]);
            if (!seen[nxt]) {
                seen[nxt] = true;
                g->bfs_parent_[nxt] = queue[head];
                g->bfs_letter_[nxt] = static_cast<unsigned>(j);
                queue.push_back(nxt);
            }
        }
    if (queue.size() != n) throw InvariantError("generators do not generate the group");

    g->finish_construction();
    return g;
}

PGroupPtr cyclic_group(std::uint32_t p, unsigned k, std::size_t order_cap) {
    std::size_t n = 1;
    for (unsigned i = 0; i < k; ++i) n *= p;
    if (n == 1) return PGroup::from_generators(p, 1, {}, order_cap);
    std::vector<unsigned> cyc(n);
    for (std::size_t i = 0; i < n; ++i) cyc[i] = static_cast<unsigned>((i + 1) % n);
    return PGroup::from_generators(p, n, {cyc}, order_cap);
}

PGroupPtr elem_abelian_group(std::uint32_t p, unsigned rank, std::size_t order_cap) {
    if (rank == 0) return PGroup::from_generators(p, 1, {}, order_cap);
    std::size_t degree = static_cast<std::size_t>(p) * rank;
    std::vector<std::vector<unsigned>> gens;
    for (unsigned b = 0; b < rank; ++b) {
        std::vector<unsigned> perm(degree);
        std::iota(perm.begin(), perm.end(), 0);
        for (unsigned i = 0; i < p; ++i) perm[b * p + i] = b * p + (i + 1) % p;
        gens.push_back(std::move(perm));
    }
    return PGroup::from_generators(p, degree, gens, order_cap);
}

PGroupPtr dihedral_group(unsigned k, std::size_t order_cap) {
    if (k < 2) throw InvariantError("dihedral family needs order >= 4");
    if (k == 2) return elem_abelian_group(2, 2, order_cap);  // degenerate D_4 = Klein group
    std::size_t n = std::size_t(1) << (k - 1);
    std::vector<unsigned> rot(n), refl(n);
    for (std::size_t i = 0; i < n; ++i) {
        rot[i] = static_cast<unsigned>((i + 1) % n);
        refl[i] = static_cast<unsigned>((n - i) % n);
    }
    return PGroup::from_generators(2, n, {rot, refl}, order_cap);
}

PGroupPtr quaternion_group(unsigned k, std::size_t order_cap) {
    if (k < 3) throw InvariantError("quaternion family needs order >= 8");
    const std::size_t m = std::size_t(1) << (k - 1);  // order of <a>
    const std::size_t n = 2 * m;
    // Elements a^i b^j encoded as i + m*j. Left multiplication by a and b.
    std::vector<unsigned> pa(n), pb(n);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < 2; ++j) {
            std::size_t x = i + m * j;
            pa[x] = static_cast<unsigned>((i + 1) % m + m * j);
            if (j == 0)
                pb[x] = static_cast<unsigned>((m - i) % m + m);  // b a^i = a^-i b
            else
                pb[x] = static_cast<unsigned>(((m - i) % m + m / 2) % m);  // b a^i b = a^{-i + m/2}
        }
    return PGroup::from_generators(2, n, {pa, pb}, order_cap);
}

PGroupPtr product_group(const PGroupPtr& a, const PGroupPtr& b, std::size_t order_cap) {
    if (a->p() != b->p()) throw InvariantError("product of groups with different p");
    // Regular-ish permutation realization on disjoint point sets: each factor
    // acts on a copy of itself by left translation.
    std::size_t da = a->order(), db = b->order();
    std::vector<std::vector<unsigned>> gens;
    for (unsigned g : a->generators()) {
        std::vector<unsigned> perm(da + db);
        for (std::size_t x = 0; x < da; ++x) perm[x] = a->mul(g, static_cast<unsigned>(x));
        for (std::size_t x = 0; x < db; ++x) perm[da + x] = static_cast<unsigned>(da + x);
        gens.push_back(std::move(perm));
    }
    for (unsigned g : b->generators()) {
        std::vector<unsigned> perm(da + db);
        for (std::size_t x = 0; x < da; ++x) perm[x] = static_cast<unsigned>(x);
        for (std::size_t x = 0; x < db; ++x) perm[da + x] = static_cast<unsigned>(da + b->mul(g, static_cast<unsigned>(x)));
        gens.push_back(std::move(perm));
    }
    return PGroup::from_generators(a->p(), da + db, gens, order_cap);
}

Subgroup::Subgroup(PGroupPtr parent, std::vector<bool> members)
    : parent_(std::move(parent)), members_(std::move(members)) {
    if (members_.size() != parent_->order()) throw InvariantError("subgroup bitset has wrong size");
    if (!members_[0]) throw InvariantError("subgroup does not contain the identity");
    for (unsigned e = 0; e < members_.size(); ++e)
        if (members_[e]) elements_.push_back(e);
    for (unsigned x : elements_) {
        if (!members_[parent_->inv(x)]) throw InvariantError("subgroup not closed under inverses");
        for (unsigned y : elements_)
            if (!members_[parent_->mul(x, y)]) throw InvariantError("subgroup not closed under products");
    }
}

Subgroup Subgroup::whole(PGroupPtr g) {
    std::vector<bool> m(g->order(), true);
    return Subgroup(std::move(g), std::move(m));
}

Subgroup Subgroup::trivial(PGroupPtr g) {
    std::vector<bool> m(g->order(), false);
    m[0] = true;
    return Subgroup(std::move(g), std::move(m));
}

Subgroup Subgroup::generated(PGroupPtr g, const std::vector<unsigned>& gens) {
    std::vector<bool> m(g->order(), false);
    m[0] = true;
    std::vector<unsigned> queue{0};
    for (std::size_t head = 0; head < queue.size(); ++head)
        for (unsigned s : gens) {
            for (unsigned t : {g->mul(queue[head], s), g->mul(queue[head], g->inv(s))})
                if (!m[t]) {
                    m[t] = true;
                    queue.push_back(t);
                }
        }
    return Subgroup(std::move(g), std::move(m));
}

bool Subgroup::subset_of(const Subgroup& o) const {
    if (parent_ != o.parent_) return false;
    for (unsigned e : elements_)
        if (!o.members_[e]) return false;
    return true;
}

Subgroup Subgroup::conjugate(unsigned g) const {
    std::vector<bool> m(parent_->order(), false);
    for (unsigned e : elements_) m[parent_->conj(g, e)] = true;
    return Subgroup(parent_, std::move(m));
}

Subgroup Subgroup::intersect(const Subgroup& o) const {
    if (parent_ != o.parent_) throw NotSubgroup("intersection across different groups");
    std::vector<bool> m(parent_->order(), false);
    for (unsigned e : elements_) m[e] = members_[e] && o.members_[e];
    return Subgroup(parent_, std::move(m));
}

bool Subgroup::normal_in(const Subgroup& bigger) const {
    if (!subset_of(bigger)) return false;
    for (unsigned g : bigger.elements())
        for (unsigned e : elements_)
            if (!members_[parent_->conj(g, e)]) return false;
    return true;
}

std::vector<unsigned> left_transversal(const Subgroup& small, const Subgroup& big) {
    if (!small.subset_of(big)) throw NotSubgroup("left_transversal: not a subgroup pair");
    const auto& g = *big.parent();
    std::vector<bool> seen(g.order(), false);
    std::vector<unsigned> reps;
    for (unsigned h : big.elements()) {
        if (seen[h]) continue;
        reps.push_back(h);
        for (unsigned u : small.elements()) seen[g.mul(h, u)] = true;
    }
    return reps;
}

std::vector<unsigned> right_transversal(const Subgroup& small, const Subgroup& big) {
    if (!small.subset_of(big)) throw NotSubgroup("right_transversal: not a subgroup pair");
    const auto& g = *big.parent();
    std::vector<bool> seen(g.order(), false);
    std::vector<unsigned> reps;
    for (unsigned h : big.elements()) {
        if (seen[h]) continue;
        reps.push_back(h);
        for (unsigned u : small.elements()) seen[g.mul(u, h)] = true;
    }
    return reps;
}

std::vector<unsigned> generating_set(const Subgroup& u) {
    std::vector<unsigned> gens;
    Subgroup span = Subgroup::trivial(u.parent());
    while (span.order() < u.order()) {
        unsigned next = 0;
        bool found = false;
        for (unsigned e : u.elements())
            if (!span.contains(e)) {
                next = e;
                found = true;
                break;
            }
        if (!found) break;
        gens.push_back(next);
        span = Subgroup::generated(u.parent(), gens);
    }
    return gens;
}

Subgroup normal_closure(const PGroupPtr& g, const std::vector<unsigned>& seeds) {
    std::vector<unsigned> gens;
    for (unsigned x : seeds)
        for (unsigned c = 0; c < g->order(); ++c) gens.push_back(g->conj(c, x));
    std::sort(gens.begin(), gens.end());
    gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
    return Subgroup::generated(g, gens);
}

std::vector<Subgroup> subgroups(const PGroupPtr& g, SubgroupKind kind, std::size_t budget) {
    const std::uint32_t p = g->p();
    std::vector<std::vector<bool>> known;
    std::vector<Subgroup> found;

    auto add = [&](Subgroup s) -> bool {
        for (const auto& k : known)
            if (k == s.members()) return false;
        if (found.size() + 1 > budget) throw CapExceeded("subgroup count exceeds budget");
        known.push_back(s.members());
        found.push_back(std::move(s));
        return true;
    };

    add(Subgroup::trivial(g));
    std::vector<Subgroup> frontier{found.front()};
    while (!frontier.empty()) {
        std::vector<Subgroup> next;
        for (const Subgroup& h : frontier) {
            // Normalizer of h.
            std::vector<unsigned> normalizer;
            for (unsigned c = 0; c < g->order(); ++c) {
                bool ok = true;
                for (unsigned e : h.elements())
                    if (!h.contains(g->conj(c, e))) {
                        ok = false;
                        break;
                    }
                if (ok) normalizer.push_back(c);
            }
            for (unsigned x : normalizer) {
                if (h.contains(x)) continue;
                unsigned xp = x;
                for (std::uint32_t i = 1; i < p; ++i) xp = g->mul(xp, x);
                if (!h.contains(xp)) continue;  // x^p must fall into h
                std::vector<bool> m(g->order(), false);
                unsigned c = 0;  // coset representative x^i
                for (std::uint32_t i = 0; i < p; ++i) {
                    for (unsigned e : h.elements()) m[g->mul(e, c)] = true;
                    c = g->mul(c, x);
                }
                Subgroup k(g, std::move(m));
                bool fresh = true;
                for (const auto& kn : known)
                    if (kn == k.members()) {
                        fresh = false;
                        break;
                    }
                if (fresh) {
                    add(k);
                    next.push_back(std::move(k));
                }
            }
        }
        frontier = std::move(next);
    }

    if (kind == SubgroupKind::Normal) {
        Subgroup whole = Subgroup::whole(g);
        std::vector<Subgroup> normal;
        for (const Subgroup& s : found)
            if (s.normal_in(whole)) normal.push_back(s);
        found = std::move(normal);
    }

    std::sort(found.begin(), found.end(), [](const Subgroup& a, const Subgroup& b) {
        if (a.order() != b.order()) return a.order() < b.order();
        return a.elements() < b.elements();
    });
    return found;
}

FpVector ElAbQuotient::log(unsigned e) const {
    if (!domain.contains(e)) throw NotSubgroup("ElAb log of a non-member");
    return log_table[e];
}

ElAbQuotient frattini_and_elab(const Subgroup& h) {
    const auto& g = *h.parent();
    const std::uint32_t p = g.p();

    // Phi(H): all p-th powers and commutators of members.
    std::vector<unsigned> seeds;
    for (unsigned x : h.elements()) {
        unsigned xp = x;
        for (std::uint32_t i = 1; i < p; ++i) xp = g.mul(xp, x);
        seeds.push_back(xp);
        for (unsigned y : h.elements())
            seeds.push_back(g.mul(g.mul(g.inv(x), g.inv(y)), g.mul(x, y)));
    }
    std::sort(seeds.begin(), seeds.end());
    seeds.erase(std::unique(seeds.begin(), seeds.end()), seeds.end());
    Subgroup phi = Subgroup::generated(h.parent(), seeds);
    if (!phi.subset_of(h)) throw InternalCheckError("Frattini subgroup escaped its group");

    ElAbQuotient q{h, phi, {}, 0, {}};

    // Lexicographically first minimal generating sequence of H over Phi.
    Subgroup span = phi;
    while (span.order() < h.order()) {
        unsigned next = 0;
        bool found = false;
        for (unsigned e : h.elements())
            if (!span.contains(e)) {
                next = e;
                found = true;
                break;
            }
        if (!found) break;
        q.basis.push_back(next);
        std::vector<unsigned> gens = generating_set(span);
        gens.push_back(next);
        span = Subgroup::generated(h.parent(), gens);
    }
    q.rank = q.basis.size();

    // Coset labelling of H/Phi and exponent vectors via BFS along the basis.
    std::vector<int> coset_of(g.order(), -1);
    std::vector<unsigned> coset_rep;
    for (unsigned e : h.elements()) {
        if (coset_of[e] >= 0) continue;
        int id = static_cast<int>(coset_rep.size());
        coset_rep.push_back(e);
        for (unsigned f : phi.elements()) coset_of[g.mul(e, f)] = id;
    }
    std::vector<FpVector> coset_log(coset_rep.size());
    std::vector<bool> have(coset_rep.size(), false);
    coset_log[coset_of[0]] = FpVector(q.rank, 0);
    have[coset_of[0]] = true;
    std::vector<int> queue{coset_of[0]};
    for (std::size_t head = 0; head < queue.size(); ++head) {
        int c = queue[head];
        for (std::size_t b = 0; b < q.rank; ++b) {
            int c2 = coset_of[g.mul(coset_rep[c], q.basis[b])];
            if (!have[c2]) {
                FpVector v = coset_log[c];
                v[b] = (v[b] + 1) % p;
                coset_log[c2] = std::move(v);
                have[c2] = true;
                queue.push_back(c2);
            }
        }
    }
    if (queue.size() != coset_rep.size()) throw InternalCheckError("ElAb coset BFS incomplete");

    q.log_table.assign(g.order(), {});
    for (unsigned e : h.elements()) q.log_table[e] = coset_log[coset_of[e]];
    return q;
}

std::vector<unsigned> double_cosets(const Subgroup& w, const Subgroup& u, const Subgroup& v) {
    if (!w.subset_of(u) || !v.subset_of(u)) throw NotSubgroup("double_cosets: W, V must sit inside U");
    const auto& g = *u.parent();
    std::vector<bool> seen(g.order(), false);
    std::vector<unsigned> reps;
    for (unsigned x : u.elements()) {
        if (seen[x]) continue;
        reps.push_back(x);
        for (unsigned a : w.elements()) {
            unsigned ax = g.mul(a, x);
            for (unsigned b : v.elements()) seen[g.mul(ax, b)] = true;
        }
    }
    return reps;
}

FpMatrix verlagerung_with_transversal(const Subgroup& h, const Subgroup& u,
                                      const std::vector<unsigned>& reps, const ElAbQuotient& elab_h,
                                      const ElAbQuotient& elab_u) {
    const auto& g = *h.parent();
    const std::uint32_t p = g.p();

    // coset_of[x] = index of the left coset rU containing x.
    std::vector<int> coset_of(g.order(), -1);
    for (std::size_t j = 0; j < reps.size(); ++j)
        for (unsigned e : u.elements()) coset_of[g.mul(reps[j], e)] = static_cast<int>(j);

    FpMatrix m(p, elab_u.rank, elab_h.rank);
    for (std::size_t col = 0; col < elab_h.rank; ++col) {
        unsigned b = elab_h.basis[col];
        FpVector acc(elab_u.rank, 0);
        for (unsigned r : reps) {
            unsigned br = g.mul(b, r);
            int j = coset_of[br];
            if (j < 0) throw InternalCheckError("transfer: coset table incomplete");
            unsigned ui = g.mul(g.inv(reps[j]), br);
            if (!u.contains(ui)) throw InternalCheckError("transfer: residue left the subgroup");
            FpVector lg = elab_u.log(ui);
            for (std::size_t i = 0; i < acc.size(); ++i) acc[i] = (acc[i] + lg[i]) % p;
        }
        for (std::size_t i = 0; i < acc.size(); ++i) m.set(i, col, acc[i]);
    }
    return m;
}

FpMatrix verlagerung(const Subgroup& h, const Subgroup& u) {
    if (!u.subset_of(h)) throw NotSubgroup("verlagerung: U must be a subgroup of H");
    ElAbQuotient eh = frattini_and_elab(h);
    ElAbQuotient eu = frattini_and_elab(u);
    return verlagerung_with_transversal(h, u, left_transversal(u, h), eh, eu);
}

QuotientGroup quotient_group(const PGroupPtr& g, const Subgroup& n) {
    Subgroup whole = Subgroup::whole(g);
    if (!n.normal_in(whole)) throw NotNormal("quotient by a non-normal subgroup");

    std::vector<int> coset_of(g->order(), -1);
    std::vector<unsigned> rep;
    for (unsigned e = 0; e < g->order(); ++e) {
        if (coset_of[e] >= 0) continue;
        int id = static_cast<int>(rep.size());
        rep.push_back(e);
        for (unsigned f : n.elements()) coset_of[g->mul(e, f)] = id;
    }

    const std::size_t q = rep.size();
    std::vector<std::vector<unsigned>> table(q, std::vector<unsigned>(q));
    for (std::size_t a = 0; a < q; ++a)
        for (std::size_t b = 0; b < q; ++b)
            table[a][b] = static_cast<unsigned>(coset_of[g->mul(rep[a], rep[b])]);

    std::vector<unsigned> gens;
    for (unsigned ge : g->generators()) {
        unsigned img = static_cast<unsigned>(coset_of[ge]);
        if (img != 0 && std::find(gens.begin(), gens.end(), img) == gens.end()) gens.push_back(img);
    }

    QuotientGroup out;
    out.group = PGroup::from_cayley(g->p(), table, gens);
    out.proj.resize(g->order());
    for (unsigned e = 0; e < g->order(); ++e) out.proj[e] = static_cast<unsigned>(coset_of[e]);
    return out;
}

SubgroupAsGroup subgroup_as_group(const Subgroup& u) {
    const auto& g = *u.parent();
    SubgroupAsGroup out;
    out.embed = u.elements();
    out.restrict_idx.assign(g.order(), 0);
    for (std::size_t i = 0; i < out.embed.size(); ++i) out.restrict_idx[out.embed[i]] = static_cast<unsigned>(i);

    const std::size_t n = out.embed.size();
    std::vector<std::vector<unsigned>> table(n, std::vector<unsigned>(n));
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            table[a][b] = out.restrict_idx[g.mul(out.embed[a], out.embed[b])];

    std::vector<unsigned> gens;
    for (unsigned e : generating_set(u)) gens.push_back(out.restrict_idx[e]);
    out.group = PGroup::from_cayley(g.p(), table, gens);
    return out;
}

}  // namespace mlab

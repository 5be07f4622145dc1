#pragma once

#include "booldyn/system.hpp"

#include <bit>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace booldyn {

// --- hereditary / saturated ideals -------------------------------------------
//
// All operations here live on the finite backend and on principal ideals;
// an ideal is identified with its generator bit mask throughout.

namespace detail {

inline std::uint64_t require_principal_gen(const Ideal& i, const char* who) {
    if (!i.algebra().is_finite())
        throw UnsupportedBackendError(std::string(who) + " needs the finite backend");
    if (!i.is_principal())
        throw UnsupportedIdealFormError(std::string(who) + " needs a principal ideal");
    return i.generator().bits();
}

inline std::uint64_t theta_bits(const BooleanDynamicalSystem& sys, std::uint32_t label,
                                std::uint64_t bits) {
    return sys.action(label)(Element::from_bits(sys.algebra, bits)).bits();
}

// Is g closed under every theta (as a mask)?
inline bool hereditary_mask(const BooleanDynamicalSystem& sys, std::uint64_t g) {
    for (std::uint32_t l = 0; l < sys.labels.size(); ++l)
        if ((theta_bits(sys, l, g) & ~g) != 0) return false;
    return true;
}

// J-saturation, atom-wise: every atom a <= gen J whose nonzero theta-images all
// fall inside g must itself lie in g. (The definitional statement over all
// A in J reduces to atoms: Delta and theta are union-additive, so A in J with
// all images in H splits into atoms with the same property.)
inline bool saturated_mask(const BooleanDynamicalSystem& sys, std::uint64_t gj, std::uint64_t g) {
    std::uint64_t candidates = gj & ~g;
    while (candidates) {
        std::uint64_t a = candidates & (~candidates + 1);
        candidates &= candidates - 1;
        bool forced = true;
        for (std::uint32_t l = 0; l < sys.labels.size(); ++l) {
            std::uint64_t img = theta_bits(sys, l, a);
            if (img != 0 && (img & ~g) != 0) {
                forced = false;
                break;
            }
        }
        if (forced) return false; // a belongs in g but is missing
    }
    return true;
}

inline std::uint64_t closure_mask(const BooleanDynamicalSystem& sys, std::uint64_t gj,
                                  std::uint64_t g) {
    for (;;) {
        std::uint64_t next = g;
        for (std::uint32_t l = 0; l < sys.labels.size(); ++l) next |= theta_bits(sys, l, next);
        std::uint64_t candidates = gj & ~next;
        while (candidates) {
            std::uint64_t a = candidates & (~candidates + 1);
            candidates &= candidates - 1;
            bool forced = true;
            for (std::uint32_t l = 0; l < sys.labels.size(); ++l) {
                std::uint64_t img = theta_bits(sys, l, a);
                if (img != 0 && (img & ~next) != 0) {
                    forced = false;
                    break;
                }
            }
            if (forced) next |= a;
        }
        if (next == g) return g;
        g = next;
    }
}

// gen(B_H): atoms already in H, plus atoms whose class stays regular in B/H.
// In the quotient an atom x (not in H) is regular iff some label sends it
// outside H, i.e. exists alpha with theta_alpha(x) not<= gen H.
inline std::uint64_t bh_mask(const BooleanDynamicalSystem& sys, std::uint64_t gh) {
    std::uint64_t out = gh;
    for (std::uint32_t x = 0; x < sys.algebra.atom_count(); ++x) {
        std::uint64_t a = std::uint64_t{1} << x;
        if (a & gh) continue;
        for (std::uint32_t l = 0; l < sys.labels.size(); ++l) {
            std::uint64_t img = theta_bits(sys, l, a);
            if ((img & ~gh) != 0) {
                out |= a;
                break;
            }
        }
    }
    return out;
}

// Deterministic order on generator masks: size, then atom indices.
inline bool gen_less(std::uint64_t a, std::uint64_t b) {
    int pa = std::popcount(a), pb = std::popcount(b);
    if (pa != pb) return pa < pb;
    // lexicographic on ascending atom index sequences = numeric order of the
    // reversed masks; smallest-first comparison:
    while (a && b) {
        std::uint64_t la = a & (~a + 1), lb = b & (~b + 1);
        if (la != lb) return la < lb;
        a &= a - 1;
        b &= b - 1;
    }
    return false;
}

} // namespace detail

inline bool is_hereditary(const BooleanDynamicalSystem& sys, const Ideal& H) {
    return detail::hereditary_mask(sys, detail::require_principal_gen(H, "is_hereditary"));
}

inline bool is_hereditary(const BooleanDynamicalSystem& sys, const Element& g) {
    return is_hereditary(sys, Ideal::principal(g));
}

inline bool is_J_saturated(const RelativeGBDS& sys, const Ideal& H) {
    std::uint64_t gh = detail::require_principal_gen(H, "is_J_saturated");
    std::uint64_t gj = detail::require_principal_gen(sys.relative, "is_J_saturated");
    return detail::saturated_mask(sys.base(), gj, gh);
}

inline bool is_J_saturated(const RelativeGBDS& sys, const Element& g) {
    return is_J_saturated(sys, Ideal::principal(g));
}

// Least hereditary J-saturated ideal containing `from`.
inline Ideal saturation_closure(const RelativeGBDS& sys, const Ideal& from) {
    std::uint64_t g0 = detail::require_principal_gen(from, "saturation_closure");
    std::uint64_t gj = detail::require_principal_gen(sys.relative, "saturation_closure");
    return Ideal::principal(
        Element::from_bits(sys.algebra(), detail::closure_mask(sys.base(), gj, g0)));
}

inline Ideal saturation_closure(const RelativeGBDS& sys, const Element& from) {
    return saturation_closure(sys, Ideal::principal(from));
}

struct LatticeOptions {
    std::size_t max_atoms = 16; // bound for the exhaustive 2^n routes
    std::size_t max_pairs = 1u << 20;
};

// All hereditary J-saturated ideals, as sorted generators. Exhaustive route:
// filter all 2^n masks.
inline std::vector<Element> enumerate_hsat_exhaustive(const RelativeGBDS& sys,
                                                      const LatticeOptions& opts = {}) {
    const Algebra& alg = sys.algebra();
    if (!alg.is_finite()) throw UnsupportedBackendError("enumerate_hsat needs the finite backend");
    if (alg.atom_count() > opts.max_atoms)
        throw SizeLimitError("exhaustive enumeration capped at " + std::to_string(opts.max_atoms) +
                             " atoms");
    std::uint64_t gj = detail::require_principal_gen(sys.relative, "enumerate_hsat");
    std::vector<std::uint64_t> gens;
    const std::uint64_t n = std::uint64_t{1} << alg.atom_count();
    for (std::uint64_t g = 0; g < n; ++g)
        if (detail::hereditary_mask(sys.base(), g) && detail::saturated_mask(sys.base(), gj, g))
            gens.push_back(g);
    std::sort(gens.begin(), gens.end(), detail::gen_less);
    std::vector<Element> out;
    for (auto g : gens) out.push_back(Element::from_bits(alg, g));
    return out;
}

// Closure route: seed with closures of single atoms, close under join. Output-
// polynomial; usable past the exhaustive bound.
inline std::vector<Element> enumerate_hsat_closure(const RelativeGBDS& sys) {
    const Algebra& alg = sys.algebra();
    if (!alg.is_finite()) throw UnsupportedBackendError("enumerate_hsat needs the finite backend");
    std::uint64_t gj = detail::require_principal_gen(sys.relative, "enumerate_hsat");
    std::set<std::uint64_t> closed;
    closed.insert(detail::closure_mask(sys.base(), gj, 0));
    std::vector<std::uint64_t> seeds;
    for (std::uint32_t x = 0; x < alg.atom_count(); ++x)
        seeds.push_back(detail::closure_mask(sys.base(), gj, std::uint64_t{1} << x));
    std::vector<std::uint64_t> work(closed.begin(), closed.end());
    for (auto s : seeds)
        if (closed.insert(s).second) work.push_back(s);
    while (!work.empty()) {
        std::uint64_t g = work.back();
        work.pop_back();
        for (auto s : seeds) {
            std::uint64_t j = detail::closure_mask(sys.base(), gj, g | s);
            if (closed.insert(j).second) work.push_back(j);
        }
    }
    std::vector<std::uint64_t> gens(closed.begin(), closed.end());
    std::sort(gens.begin(), gens.end(), detail::gen_less);
    std::vector<Element> out;
    for (auto g : gens) out.push_back(Element::from_bits(alg, g));
    return out;
}

inline std::vector<Element> enumerate_hsat(const RelativeGBDS& sys, const LatticeOptions& opts = {}) {
    if (sys.algebra().atom_count() <= opts.max_atoms)
        return enumerate_hsat_exhaustive(sys, opts);
    return enumerate_hsat_closure(sys);
}

// B_H = { A : [A] regular in B/H }; contains H and B_reg.
inline Ideal compute_BH(const RelativeGBDS& sys, const Ideal& H) {
    std::uint64_t gh = detail::require_principal_gen(H, "compute_BH");
    return Ideal::principal(
        Element::from_bits(sys.algebra(), detail::bh_mask(sys.base(), gh)));
}

// Delta of [A] in the quotient by H: labels whose image escapes gen H.
inline std::vector<std::uint32_t> quotient_delta(const BooleanDynamicalSystem& sys,
                                                 std::uint64_t gh, const Element& a) {
    std::vector<std::uint32_t> out;
    for (std::uint32_t l = 0; l < sys.labels.size(); ++l)
        if ((sys.action(l)(a).bits() & ~gh) != 0) out.push_back(l);
    return out;
}

// --- admissible pairs ---------------------------------------------------------

// (H,S): H hereditary J-saturated, S an ideal of B_H with H u J <= S.
// Stored by generators; the algebra rides along inside the Elements.
struct AdmissiblePair {
    Element h;
    Element s;

    friend bool operator==(const AdmissiblePair& a, const AdmissiblePair& b) {
        return a.h == b.h && a.s == b.s;
    }
    friend bool operator<=(const AdmissiblePair& a, const AdmissiblePair& b) {
        return subseteq(a.h, b.h) && subseteq(a.s, b.s);
    }
    friend std::string to_string(const AdmissiblePair& p) {
        return "(H=" + to_string(p.h) + ",S=" + to_string(p.s) + ")";
    }
};

inline AdmissiblePair make_admissible_pair(const RelativeGBDS& sys, const Ideal& H,
                                           const Ideal& S) {
    std::uint64_t gh = detail::require_principal_gen(H, "make_admissible_pair");
    std::uint64_t gs = detail::require_principal_gen(S, "make_admissible_pair");
    std::uint64_t gj = detail::require_principal_gen(sys.relative, "make_admissible_pair");
    if (!detail::hereditary_mask(sys.base(), gh))
        throw InvalidIdealError("H is not hereditary");
    if (!detail::saturated_mask(sys.base(), gj, gh))
        throw InvalidIdealError("H is not J-saturated");
    if ((gh | gj) & ~gs) throw InvalidPairError("S must contain H and J");
    std::uint64_t bh = detail::bh_mask(sys.base(), gh);
    if (gs & ~bh) throw InvalidPairError("S must lie inside B_H");
    return AdmissiblePair{Element::from_bits(sys.algebra(), gh),
                          Element::from_bits(sys.algebra(), gs)};
}

// The finite lattice of admissible pairs, ordered by componentwise inclusion.
// Meets and joins are located by poset search and certified unique; the
// componentwise candidate is not used (S1 n S2 can escape B_{H1 n H2}).
class PairLattice {
public:
    std::vector<AdmissiblePair> pairs;

    bool leq(std::size_t i, std::size_t j) const { return pairs[i] <= pairs[j]; }

    std::optional<std::size_t> index_of(const AdmissiblePair& p) const {
        for (std::size_t i = 0; i < pairs.size(); ++i)
            if (pairs[i] == p) return i;
        return std::nullopt;
    }

    struct Bound {
        std::size_t index = 0;
        bool unique = false; // certified: every other bound compares against it
    };

    Bound glb(std::size_t i, std::size_t j) const {
        std::vector<std::size_t> lower;
        for (std::size_t k = 0; k < pairs.size(); ++k)
            if (leq(k, i) && leq(k, j)) lower.push_back(k);
        // candidate: a maximal element of the lower set
        std::size_t best = lower.front();
        for (auto k : lower)
            if (leq(best, k)) best = k;
        for (auto k : lower)
            if (!leq(k, best)) return {best, false};
        return {best, true};
    }

    Bound lub(std::size_t i, std::size_t j) const {
        std::vector<std::size_t> upper;
        for (std::size_t k = 0; k < pairs.size(); ++k)
            if (leq(i, k) && leq(j, k)) upper.push_back(k);
        std::size_t best = upper.front();
        for (auto k : upper)
            if (leq(k, best)) best = k;
        for (auto k : upper)
            if (!leq(best, k)) return {best, false};
        return {best, true};
    }
};

// Enumerates every admissible pair: for each hereditary J-saturated H, the
// admissible S are exactly the principal ideals with gen H u gen J <= gen S
// <= gen B_H.
inline PairLattice admissible_pairs(const RelativeGBDS& sys, const LatticeOptions& opts = {}) {
    std::uint64_t gj = detail::require_principal_gen(sys.relative, "admissible_pairs");
    PairLattice lat;
    for (const Element& h : enumerate_hsat(sys, opts)) {
        std::uint64_t gh = h.bits();
        std::uint64_t base = gh | gj;
        std::uint64_t slack = detail::bh_mask(sys.base(), gh) & ~base;
        // submask walk over the free atoms of S
        std::uint64_t sub = 0;
        for (;;) {
            lat.pairs.push_back(AdmissiblePair{h, Element::from_bits(sys.algebra(), base | sub)});
            if (lat.pairs.size() > opts.max_pairs)
                throw SizeLimitError("admissible pair count exceeds the configured bound");
            if (sub == slack) break;
            sub = (sub - slack) & slack; // next submask
        }
    }
    std::sort(lat.pairs.begin(), lat.pairs.end(), [](const AdmissiblePair& a, const AdmissiblePair& b) {
        if (a.h != b.h) return detail::gen_less(a.h.bits(), b.h.bits());
        return detail::gen_less(a.s.bits(), b.s.bits());
    });
    return lat;
}

// --- quotients ----------------------------------------------------------------

// B/H for a hereditary H: the power set of the atoms outside gen H, with the
// induced actions. Well defined because H is hereditary: theta_alpha(A) and
// theta_alpha(A \ gen H) agree outside gen H. Atom labels survive unchanged.
inline BooleanDynamicalSystem quotient_base(const BooleanDynamicalSystem& sys, std::uint64_t gh) {
    std::vector<std::string> atoms;
    std::vector<std::optional<std::uint32_t>> to_new(sys.algebra.atom_count());
    for (std::uint32_t x = 0; x < sys.algebra.atom_count(); ++x)
        if (!((gh >> x) & 1)) {
            to_new[x] = static_cast<std::uint32_t>(atoms.size());
            atoms.push_back(sys.algebra.atom_label(x));
        }
    Algebra q = Algebra::finite(atoms);
    std::vector<Action> actions;
    for (std::uint32_t l = 0; l < sys.labels.size(); ++l) {
        const auto& f = sys.actions[l].dual();
        std::vector<std::optional<std::uint32_t>> g(q.atom_count());
        for (std::uint32_t x = 0; x < f.size(); ++x)
            if (to_new[x] && f[x] && to_new[*f[x]]) g[*to_new[x]] = to_new[*f[x]];
        actions.push_back(Action::dual_map(q, std::move(g)));
    }
    return make_system(std::move(q), sys.labels, std::move(actions));
}

namespace detail {

inline Element project_mask(const Algebra& from, const Algebra& to, std::uint64_t bits,
                            std::uint64_t gh) {
    std::uint64_t out = 0;
    std::uint32_t nxt = 0;
    for (std::uint32_t x = 0; x < from.atom_count(); ++x) {
        if ((gh >> x) & 1) continue;
        if ((bits >> x) & 1) out |= std::uint64_t{1} << nxt;
        ++nxt;
    }
    return Element::from_bits(to, out);
}

} // namespace detail

// Class of an element in B/H (the quotient built by quotient_system on the
// same H): drop the atoms of gen H.
inline Element quotient_class(const BooleanDynamicalSystem& quotient, const Element& e,
                              const Ideal& H) {
    std::uint64_t gh = detail::require_principal_gen(H, "quotient_class");
    return detail::project_mask(e.algebra(), quotient.algebra, e.bits(), gh);
}

// Quotient of the full relative structure by a hereditary J-saturated H:
// (B/H, L, theta, [I_alpha]; [J]).
inline RelativeGBDS quotient_system(const RelativeGBDS& sys, const Ideal& H) {
    std::uint64_t gh = detail::require_principal_gen(H, "quotient_system");
    if (!detail::hereditary_mask(sys.base(), gh))
        throw InvalidIdealError("quotient needs a hereditary ideal");
    std::uint64_t gj = detail::require_principal_gen(sys.relative, "quotient_system");
    if (!detail::saturated_mask(sys.base(), gj, gh))
        throw InvalidIdealError("quotient needs a J-saturated ideal");
    BooleanDynamicalSystem q = quotient_base(sys.base(), gh);
    std::vector<Ideal> ideals;
    for (std::uint32_t l = 0; l < sys.base().labels.size(); ++l)
        ideals.push_back(Ideal::principal(detail::project_mask(
            sys.algebra(), q.algebra, sys.g.ideal(l).generator().bits(), gh)));
    Ideal jq = Ideal::principal(detail::project_mask(sys.algebra(), q.algebra, gj, gh));
    return make_relative(make_generalized(std::move(q), std::move(ideals)), std::move(jq));
}

// Quotient datum of an admissible pair (H,S): (B/H, L, theta, [I_alpha]; [S]).
inline RelativeGBDS quotient_system(const RelativeGBDS& sys, const AdmissiblePair& p) {
    // validates admissibility as a side effect
    AdmissiblePair checked =
        make_admissible_pair(sys, Ideal::principal(p.h), Ideal::principal(p.s));
    std::uint64_t gh = checked.h.bits();
    BooleanDynamicalSystem q = quotient_base(sys.base(), gh);
    std::vector<Ideal> ideals;
    for (std::uint32_t l = 0; l < sys.base().labels.size(); ++l)
        ideals.push_back(Ideal::principal(detail::project_mask(
            sys.algebra(), q.algebra, sys.g.ideal(l).generator().bits(), gh)));
    Ideal sq = Ideal::principal(
        detail::project_mask(sys.algebra(), q.algebra, checked.s.bits(), gh));
    return make_relative(make_generalized(std::move(q), std::move(ideals)), std::move(sq));
}

} // namespace booldyn

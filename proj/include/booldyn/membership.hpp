#pragma once

#include "booldyn/lattice.hpp"
#include "booldyn/linalg.hpp"
#include "booldyn/terms.hpp"

#include <bit>
#include <cstdlib>
#include <map>
#include <string>
#include <vector>

namespace booldyn {

// --- ideal generators ---------------------------------------------------------
//
// The gauge-invariant ideal of a pair (H,S) is spanned by the conjugated
// defects  s_{alpha,a} (p_a - p_{a,H}) s*_{beta,a}  where a runs over atoms of
// gen S and p_{a,H} sums s_{gamma,theta(a)} s*_{gamma,theta(a)} over the labels
// gamma whose image of a escapes gen H (the quotient Delta of [a]). Everything
// here reduces to atoms because theta, Delta, and the defect are additive over
// disjoint unions.

namespace detail {

// (alpha,a,beta) - sum_{gamma in Delta_[a]} sum_{atoms e <= theta_gamma(a)}
// (alpha.gamma, e, beta.gamma); with gh == 0 this is the absolute defect
// (Delta_[a] = Delta_a).
inline AlgElement conjugated_defect(const BooleanDynamicalSystem& sys, std::uint64_t gh,
                                    const Word& alpha, std::uint32_t atom, const Word& beta) {
    AlgElement out = AlgElement::term(NormalTerm{alpha, atom, beta});
    Element a = Element::atom(sys.algebra, atom);
    for (auto gamma : quotient_delta(sys, gh, a)) {
        Element image = sys.action(gamma)(a);
        Word l = alpha, r = beta;
        l.push_back(gamma);
        r.push_back(gamma);
        for (auto e : image.atom_indices()) out.add_term(NormalTerm{l, e, r}, Rational(-1));
    }
    return out;
}

} // namespace detail

// p_a - p_{a,H} for one atom, relative to a hereditary ideal generator.
inline AlgElement defect_element(const RelativeGBDS& sys, const Ideal& H, std::uint32_t atom) {
    std::uint64_t gh = detail::require_principal_gen(H, "defect_element");
    if (atom >= sys.algebra().atom_count()) throw UnknownAtomError("defect_element");
    return detail::conjugated_defect(sys.base(), gh, {}, atom, {});
}

// The absolute defect q_a = p_a - sum over all of Delta_a (H = 0).
inline AlgElement absolute_defect(const RelativeGBDS& sys, std::uint32_t atom) {
    if (atom >= sys.algebra().atom_count()) throw UnknownAtomError("absolute_defect");
    return detail::conjugated_defect(sys.base(), 0, {}, atom, {});
}

// Generators of the pair ideal: one defect per atom of gen S. Atoms of gen H
// contribute plain projections (their quotient Delta is empty).
inline std::vector<AlgElement> ideal_generators(const RelativeGBDS& sys,
                                                const AdmissiblePair& pair) {
    std::vector<AlgElement> out;
    for (auto a : pair.s.atom_indices())
        out.push_back(detail::conjugated_defect(sys.base(), pair.h.bits(), {}, a, {}));
    return out;
}

// --- symbolic ideal membership --------------------------------------------------
//
// Strategy: work in raw term coordinates (no rewriting of the probe). Two row
// families are built level by level, where level d admits words of length up
// to d:
//
//   T-rows: conjugated defects s_{alpha,a}(p_a - p_{a,H})s*_{beta,a}, a an atom
//           of gen S with a in I_alpha n I_beta — these span the ideal;
//   Z-rows: t - (CK expansion of t) for valid terms t whose atom lies in J —
//           these are zero in the algebra, so adding them never enlarges the
//           ideal, but they let raw coordinates absorb the defining relations.
//
// x lies in the ideal iff its raw vector eventually lands in span(T u Z). "In"
// is certified by an explicit combination (re-verified exactly). For "NotIn",
// order the coordinates so that terms *outside* the probe's window V_L (max
// word length <= L) come first: echelon rows whose pivot is inside the window
// form a basis of span n V_L, and that intersection grows monotonically with
// the level. Once a level adds nothing to it (the truncation is saturated),
// membership of any window-supported homogeneous vector is decided. Probes are
// always split into gauge-degree components first — the ideal is graded, so
// membership holds iff it holds per component.

enum class Membership { In, NotIn, Inconclusive };

struct MembershipOptions {
    std::size_t depth = 0;      // word-length cap; 0 = twice the atom count
    std::size_t max_rows = 0;   // inserted-row budget; 0 = default 20000
    std::size_t max_pairs = 0;  // word-pair budget per level; 0 = default 250000
};

struct MembershipResult {
    Membership verdict = Membership::Inconclusive;
    std::size_t depth_used = 0;
    std::string note;
};

namespace detail {

struct WindowCmp {
    std::size_t window = 0;
    bool inside(const NormalTerm& t) const {
        return std::max(t.left.size(), t.right.size()) <= window;
    }
    bool operator()(const NormalTerm& a, const NormalTerm& b) const {
        bool ia = inside(a), ib = inside(b);
        if (ia != ib) return !ia; // outside-the-window keys first
        return a < b;
    }
};

using MemberSpace = RowSpace<NormalTerm, WindowCmp>;

inline MemberSpace::Vec to_vec(const MemberSpace& rs, const AlgElement& x) {
    MemberSpace::Vec v = rs.make_vec();
    for (const auto& [t, c] : x.terms()) v.emplace(t, c);
    return v;
}

inline std::size_t window_dim(const MemberSpace& rs) {
    std::size_t n = 0;
    for (const auto& row : rs.rows())
        if (rs.compare().inside(row.pivot)) ++n;
    return n;
}

// words of a fixed length together with the generator mask of their word ideal
struct WordLevel {
    std::vector<std::pair<Word, std::uint64_t>> entries;
};

class WordTable {
public:
    WordTable(const GeneralizedBDS& g) : g_(g) {}

    const WordLevel& level(std::size_t k) {
        while (levels_.size() <= k) grow();
        return levels_[k];
    }

private:
    const GeneralizedBDS& g_;
    std::vector<WordLevel> levels_;

    void grow() {
        std::size_t k = levels_.size();
        WordLevel next;
        const Algebra& alg = g_.base.algebra;
        if (k == 0) {
            next.entries.push_back({Word{}, Element::top(alg).bits()});
        } else if (k == 1) {
            for (std::uint32_t l = 0; l < g_.base.labels.size(); ++l)
                next.entries.push_back({Word{l}, g_.ideal(l).generator().bits()});
        } else {
            for (const auto& [w, m] : levels_[k - 1].entries)
                for (std::uint32_t l = 0; l < g_.base.labels.size(); ++l) {
                    Word ext = w;
                    ext.push_back(l);
                    std::uint64_t img =
                        g_.base.action(l)(Element::from_bits(alg, m)).bits();
                    next.entries.push_back({std::move(ext), img});
                }
        }
        levels_.push_back(std::move(next));
    }
};

// one gauge-degree component, nonzero, all terms within window L
inline MembershipResult membership_homogeneous(const RelativeGBDS& sys, const AlgElement& x,
                                               std::uint64_t gh, std::uint64_t gs,
                                               const MembershipOptions& opts,
                                               WordTable& words) {
    const int delta = degree(x.terms().begin()->first);
    const std::size_t adelta = static_cast<std::size_t>(std::abs(delta));
    const std::uint64_t gj = sys.relative.generator().bits();
    const std::size_t L = max_word_length(x);

    MemberSpace rs(WindowCmp{L});
    std::vector<AlgElement> row_elems;
    MemberSpace::Vec target = to_vec(rs, x);

    auto verdict_in = [&](std::size_t d) -> MembershipResult {
        auto combo = rs.solve(target);
        if (!combo) throw InternalError("membership: combination vanished");
        AlgElement sum;
        for (const auto& [i, c] : *combo) sum += c * row_elems[i];
        if (!(sum == x)) throw InternalError("membership: combination does not reproduce probe");
        return {Membership::In, d, "combination over " + std::to_string(combo->size()) +
                                       " spanning rows verified"};
    };

    const std::size_t max_rows = opts.max_rows ? opts.max_rows : 20000;
    const std::size_t max_pairs = opts.max_pairs ? opts.max_pairs : 250000;

    auto add_row = [&](AlgElement row) {
        rs.insert(to_vec(rs, row));
        row_elems.push_back(std::move(row)); // aligned with rs insertion indices
    };

    std::size_t prev_dim = 0;
    for (std::size_t d = 0; d <= opts.depth; ++d) {
        // level d contributes the single word-length shape with max length d:
        // la - lb = delta and max(la, lb) = d
        if (d >= adelta) {
            std::size_t la = delta >= 0 ? d : d - adelta;
            std::size_t lb = delta >= 0 ? d - adelta : d;
            words.level(std::max(la, lb)); // grow first: level() references move on growth
            const WordLevel& A = words.level(la);
            const WordLevel& B = words.level(lb);
            if (A.entries.size() * B.entries.size() > max_pairs)
                return {Membership::Inconclusive, d, "word-pair budget exhausted"};
            for (const auto& [alpha, ma] : A.entries)
                for (const auto& [beta, mb] : B.entries) {
                    std::uint64_t valid = ma & mb;
                    if (!valid) continue;
                    if (rs.inserted() + std::size_t(std::popcount(valid & gs)) +
                            std::size_t(std::popcount(valid & gj)) >
                        max_rows)
                        return {Membership::Inconclusive, d, "row budget exhausted"};
                    std::uint64_t tmask = valid & gs;
                    while (tmask) {
                        std::uint32_t a = static_cast<std::uint32_t>(std::countr_zero(tmask));
                        tmask &= tmask - 1;
                        add_row(conjugated_defect(sys.base(), gh, alpha, a, beta));
                    }
                    std::uint64_t zmask = valid & gj;
                    while (zmask) {
                        std::uint32_t a = static_cast<std::uint32_t>(std::countr_zero(zmask));
                        zmask &= zmask - 1;
                        NormalTerm t{alpha, a, beta};
                        add_row(AlgElement::term(t) - ck_expand(sys, t));
                    }
                }
        }
        if (rs.contains(target)) return verdict_in(d);
        std::size_t dim = window_dim(rs);
        if (d >= adelta + 1 && dim == prev_dim)
            return {Membership::NotIn, d, "window span saturated at depth " + std::to_string(d)};
        prev_dim = dim;
    }
    return {Membership::Inconclusive, opts.depth, "depth cap reached without saturation"};
}

} // namespace detail

inline MembershipResult ideal_membership(const RelativeGBDS& sys, const AlgElement& x,
                                         const AdmissiblePair& pair,
                                         MembershipOptions opts = {}) {
    for (const auto& [t, c] : x.terms())
        if (!is_valid_term(sys.g, t)) throw InvalidTermError("ideal_membership: invalid probe");
    if (opts.depth == 0) opts.depth = 2 * sys.algebra().atom_count();
    if (x.is_zero()) return {Membership::In, 0, "zero element"};

    detail::WordTable words(sys.g);
    bool inconclusive = false;
    std::size_t used = 0;
    std::string note;
    for (const auto& [deg, comp] : grading(x)) {
        MembershipResult r = detail::membership_homogeneous(sys, comp, pair.h.bits(),
                                                            pair.s.bits(), opts, words);
        used = std::max(used, r.depth_used);
        if (r.verdict == Membership::NotIn)
            return {Membership::NotIn, r.depth_used,
                    "degree " + std::to_string(deg) + " component: " + r.note};
        if (r.verdict == Membership::Inconclusive) {
            inconclusive = true;
            note = "degree " + std::to_string(deg) + " component: " + r.note;
        }
    }
    if (inconclusive) return {Membership::Inconclusive, used, note};
    return {Membership::In, used, "all degree components verified"};
}

// --- pair recovery ---------------------------------------------------------------

struct RecoverResult {
    bool ok = false;
    std::optional<AdmissiblePair> pair;
    std::string note;
};

// Reconstruct (H,S) from its ideal: H' collects the atoms whose projection
// lies in the ideal; S' collects the atoms of gen B_{H'} whose H'-defect does.
inline RecoverResult recover_pair(const RelativeGBDS& sys, const AdmissiblePair& pair,
                                  MembershipOptions opts = {}) {
    const Algebra& alg = sys.algebra();
    std::uint64_t gh2 = 0;
    for (std::uint32_t a = 0; a < alg.atom_count(); ++a) {
        AlgElement p = AlgElement::term(NormalTerm{{}, a, {}});
        MembershipResult r = ideal_membership(sys, p, pair, opts);
        if (r.verdict == Membership::Inconclusive)
            return {false, std::nullopt,
                    "p[" + alg.atom_label(a) + "] membership inconclusive: " + r.note};
        if (r.verdict == Membership::In) gh2 |= std::uint64_t{1} << a;
    }
    Ideal H2 = Ideal::principal(Element::from_bits(alg, gh2));
    std::uint64_t bh2 = compute_BH(sys, H2).generator().bits();
    std::uint64_t gs2 = 0;
    std::uint64_t probe = bh2;
    while (probe) {
        std::uint32_t a = static_cast<std::uint32_t>(std::countr_zero(probe));
        probe &= probe - 1;
        MembershipResult r = ideal_membership(sys, defect_element(sys, H2, a), pair, opts);
        if (r.verdict == Membership::Inconclusive)
            return {false, std::nullopt,
                    "defect of " + alg.atom_label(a) + " membership inconclusive: " + r.note};
        if (r.verdict == Membership::In) gs2 |= std::uint64_t{1} << a;
    }
    AdmissiblePair out =
        make_admissible_pair(sys, H2, Ideal::principal(Element::from_bits(alg, gs2)));
    return {true, out, ""};
}

} // namespace booldyn

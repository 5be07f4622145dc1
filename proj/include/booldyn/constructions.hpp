#pragma once

#include "booldyn/membership.hpp"
#include "booldyn/terms.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace booldyn {

// --- labelled-graph import -------------------------------------------------------
//
// A finite labelled directed graph induces a dynamical system on the power set
// of its vertices: theta_alpha(A) = the ranges of alpha-edges with source in A.
// That map preserves intersections exactly when, per label, distinct sources
// have disjoint ranges (weakly left-resolving); theta_alpha is then the dual of
// the partial map sending each range vertex to its unique alpha-source.

struct LabelledGraph {
    struct Edge {
        std::string src, dst, label;
    };
    std::vector<std::string> vertices;
    std::vector<Edge> edges;
    std::vector<std::string> alphabet; // empty: derive from the edges, sorted
};

inline GeneralizedBDS import_labelled_graph(const LabelledGraph& g) {
    Algebra alg = Algebra::finite(g.vertices);

    std::vector<std::string> labels = g.alphabet;
    if (labels.empty()) {
        std::set<std::string> seen;
        for (const auto& e : g.edges) seen.insert(e.label);
        labels.assign(seen.begin(), seen.end());
    }
    std::map<std::string, std::uint32_t> label_index;
    for (std::uint32_t i = 0; i < labels.size(); ++i) label_index[labels[i]] = i;

    // dual maps: per label, range vertex -> its unique source
    std::vector<std::vector<std::optional<std::uint32_t>>> dual(
        labels.size(), std::vector<std::optional<std::uint32_t>>(alg.atom_count()));
    std::vector<bool> used(labels.size(), false);
    for (const auto& e : g.edges) {
        auto it = label_index.find(e.label);
        if (it == label_index.end())
            throw UnknownLabelError("edge label '" + e.label + "' not in the alphabet");
        std::uint32_t src = alg.atom_index(e.src), dst = alg.atom_index(e.dst);
        auto& slot = dual[it->second][dst];
        if (slot && *slot != src)
            throw NotWeaklyLeftResolvingError(
                "label " + e.label + ": vertices " + alg.atom_label(*slot) + " and " + e.src +
                " both reach " + e.dst);
        slot = src;
        used[it->second] = true;
    }
    for (std::size_t i = 0; i < labels.size(); ++i)
        if (!used[i])
            throw ShapeError("alphabet letter '" + labels[i] + "' labels no edge");

    std::vector<Action> actions;
    for (auto& d : dual) actions.push_back(Action::dual_map(alg, std::move(d)));
    return make_generalized(make_system(std::move(alg), std::move(labels), std::move(actions)));
}

// --- the tilde construction --------------------------------------------------------
//
// Turns a relative system into a plain one with the same algebra-theoretic
// content: atoms in g_reg \ g_J acquire a primed copy, elements encode pairs
// (A,[B]) — original atoms mark A, copies mark B within g_reg \ g_J — and the
// actions read only the original part, writing images to both blocks. The
// result's regular ideal is exactly the encoded {(A,0) : A in B_reg}, so
// imposing reconstruction everywhere there matches imposing it on J upstairs.

struct TildeResult {
    GeneralizedBDS system;
    Algebra source;
    std::vector<std::optional<std::uint32_t>> copy_atom; // source atom -> its copy, if any
    std::vector<std::uint32_t> copy_source;              // copy atom -> source atom

    std::uint32_t original_count() const {
        return static_cast<std::uint32_t>(copy_atom.size());
    }
    bool is_copy(std::uint32_t tilde_atom) const { return tilde_atom >= original_count(); }
    std::uint32_t source_of(std::uint32_t tilde_atom) const {
        return is_copy(tilde_atom) ? copy_source[tilde_atom - original_count()] : tilde_atom;
    }

    // (A,[B]) as a new-algebra element; only B n (g_reg \ g_J) is read, which
    // is exactly the part [B]_J determines.
    Element encode(const Element& a, const Element& b) const {
        std::uint64_t bits = a.bits();
        for (auto x : b.atom_indices())
            if (copy_atom[x]) bits |= std::uint64_t{1} << *copy_atom[x];
        return Element::from_bits(system.base.algebra, bits);
    }

    // the A part of a new-algebra element
    Element decode_original(const Element& t) const {
        return Element::from_bits(source,
                                  t.bits() & ((std::uint64_t{1} << original_count()) - 1));
    }

    // the copy part, as the source-algebra subset of g_reg \ g_J it marks
    Element decode_copies(const Element& t) const {
        std::uint64_t bits = 0;
        for (auto z : t.atom_indices())
            if (is_copy(z)) bits |= std::uint64_t{1} << copy_source[z - original_count()];
        return Element::from_bits(source, bits);
    }
};

inline TildeResult tilde(const RelativeGBDS& sys) {
    const Algebra& alg = sys.algebra();
    if (!alg.is_finite()) throw UnsupportedBackendError("tilde needs the finite backend");
    for (const auto& act : sys.base().actions)
        if (!act.is_dual_map())
            throw UnsupportedBackendError("tilde needs dual-map actions");

    const std::uint32_t n = alg.atom_count();
    const std::uint64_t greg = regular_ideal(sys.base()).generator().bits();
    const std::uint64_t gj = detail::require_principal_gen(sys.relative, "tilde");
    const std::uint64_t rj = greg & ~gj;

    std::vector<std::string> names;
    for (std::uint32_t x = 0; x < n; ++x) names.push_back(alg.atom_label(x));
    std::vector<std::optional<std::uint32_t>> copy_atom(n);
    std::vector<std::uint32_t> copy_source;
    for (std::uint32_t x = 0; x < n; ++x)
        if ((rj >> x) & 1) {
            copy_atom[x] = static_cast<std::uint32_t>(names.size());
            copy_source.push_back(x);
            names.push_back(alg.atom_label(x) + "'");
        }
    Algebra big = Algebra::finite(std::move(names));

    // f~(y) = f~(y') = f(y): both blocks read the original image
    std::vector<Action> actions;
    for (const auto& act : sys.base().actions) {
        const auto& f = act.dual();
        std::vector<std::optional<std::uint32_t>> lift(big.atom_count());
        for (std::uint32_t x = 0; x < n; ++x) {
            lift[x] = f[x];
            if (copy_atom[x]) lift[*copy_atom[x]] = f[x];
        }
        actions.push_back(Action::dual_map(big, std::move(lift)));
    }
    BooleanDynamicalSystem base =
        make_system(big, sys.base().labels, std::move(actions));

    auto encode_bits = [&](std::uint64_t orig) { // (A,[A]): atoms of A plus their copies
        std::uint64_t bits = orig;
        for (std::uint32_t x = 0; x < n; ++x)
            if (((orig >> x) & 1) && copy_atom[x]) bits |= std::uint64_t{1} << *copy_atom[x];
        return bits;
    };
    std::vector<Ideal> ideals;
    for (std::uint32_t l = 0; l < sys.base().labels.size(); ++l)
        ideals.push_back(Ideal::principal(
            Element::from_bits(big, encode_bits(sys.g.ideal(l).generator().bits()))));

    // make_generalized re-checks R~ <= I~; a failure here is a bug, not input error
    return TildeResult{make_generalized(std::move(base), std::move(ideals)), alg,
                       std::move(copy_atom), std::move(copy_source)};
}

// the tilde system with reconstruction imposed on all of its regular ideal —
// the form in which its word calculus matches the source's relative calculus
inline RelativeGBDS tilde_relative(const TildeResult& t) {
    return make_relative(t.system);
}

// --- the isomorphism, on generators -------------------------------------------------
//
// phi embeds the source *-algebra into the tilde one: every atom a maps to the
// encoded ({a},[{a}]), i.e. the atom plus its copy when it has one. rho goes
// back: an original atom of the tilde algebra is "a minus its tail", the copy
// is the tail itself, where the tail of a is its absolute defect
// q_a = p_a - sum_{gamma} s_{gamma,theta(a)} s*. rho(phi(x)) = x exactly;
// phi(rho(y)) = y modulo reconstruction, checked by eq_modulo_ck downstream.

class TildeIso {
public:
    TildeIso(RelativeGBDS source, TildeResult t)
        : src_(std::move(source)), t_(std::move(t)), tilde_rel_(tilde_relative(t_)) {}

    const RelativeGBDS& source() const { return src_; }
    const RelativeGBDS& tilde_system() const { return tilde_rel_; }
    const TildeResult& data() const { return t_; }

    AlgElement phi(const AlgElement& x) const {
        AlgElement out;
        for (const auto& [t, c] : x.terms()) {
            out.add_term(check_tilde({t.left, t.atom, t.right}), c);
            if (const auto& cp = t_.copy_atom[t.atom])
                out.add_term(check_tilde({t.left, *cp, t.right}), c);
        }
        return out;
    }

    AlgElement rho(const AlgElement& y) const {
        AlgElement out;
        for (const auto& [t, c] : y.terms()) {
            std::uint32_t a = t_.source_of(t.atom);
            NormalTerm base = check_source({t.left, a, t.right});
            // the tail for a copy, p_a minus the tail for an original that has
            // one, plain p_a otherwise — conjugated by the words of t
            AlgElement piece;
            if (t_.is_copy(t.atom)) {
                piece = detail::conjugated_defect(src_.base(), 0, t.left, a, t.right);
            } else if (t_.copy_atom[a]) {
                piece = AlgElement::term(base) -
                        detail::conjugated_defect(src_.base(), 0, t.left, a, t.right);
            } else {
                piece = AlgElement::term(base);
            }
            out += c * piece;
        }
        return out;
    }

private:
    RelativeGBDS src_;
    TildeResult t_;
    RelativeGBDS tilde_rel_;

    NormalTerm check_tilde(NormalTerm t) const {
        if (!is_valid_term(tilde_rel_.g, t))
            throw InternalError("tilde embedding produced an invalid term");
        return t;
    }
    NormalTerm check_source(NormalTerm t) const {
        if (!is_valid_term(src_.g, t))
            throw InternalError("tilde retraction produced an invalid term");
        return t;
    }
};

inline TildeIso tilde_iso_generators(const RelativeGBDS& sys, TildeResult t) {
    return TildeIso(sys, std::move(t));
}

// --- the two-ideal example over finite x finite-or-cofinite sets ---------------------
//
// One label a on the product of FinSubsets(N) and FinCofin(N), acting by
// theta_a((A,B)) = (0,A). The range ideal R_a = {(0,B) : B finite} is not
// principal, but the principal ideal on (0,N) also contains it — and the two
// generalized systems genuinely differ: (0,N) witnesses the gap, and the
// resulting algebras are not isomorphic. Regularity has the closed form
// {(A,0)}: any (A,B) with B != 0 sits above the singular (0,B).

struct RemarkExample {
    RelativeGBDS range_choice;     // I_a = R_a, as a rule
    RelativeGBDS principal_choice; // I_a = <(0,N)>
    Element witness;               // (0,N): in the principal ideal, not in R_a
    Ideal regular;                 // B_reg = {(A,0) : A finite}, as a rule
};

namespace detail {

inline bool remark_right_finite(const Element& e) {
    const auto* v = e.second().fin_cofin();
    if (!v) throw UnsupportedBackendError("expected a finite-or-cofinite coordinate");
    return !v->cofinite;
}

} // namespace detail

inline RemarkExample remark_example() {
    Algebra alg = Algebra::product(Algebra::fin_subsets(), Algebra::fin_cofin());

    Action theta = Action::callable(alg, [alg](const Element& e) {
        return Element::pair(alg, Element::empty(alg.left()),
                             Element::finite_set(alg.right(), e.first().fin_set()->s));
    });
    BooleanDynamicalSystem base = make_system(alg, {"a"}, {theta});

    Ideal range = Ideal::predicate(
        alg,
        [](const Element& e) {
            return is_empty(e.first()) && detail::remark_right_finite(e);
        },
        "{(0,B) : B a finite subset}");
    Ideal principal = Ideal::principal(
        Element::pair(alg, Element::empty(alg.left()), Element::cofinite_set(alg.right(), {})));
    Ideal regular = Ideal::predicate(
        alg, [](const Element& e) { return is_empty(e.second()); }, "{(A,0) : A finite}");

    RemarkExample out{
        RelativeGBDS{GeneralizedBDS{base, {range}}, regular},
        RelativeGBDS{GeneralizedBDS{base, {principal}}, regular},
        Element::pair(alg, Element::empty(alg.left()), Element::cofinite_set(alg.right(), {})),
        regular};
    return out;
}

} // namespace booldyn

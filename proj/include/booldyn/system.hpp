#pragma once

#include "booldyn/action.hpp"
#include "booldyn/algebra.hpp"

#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

namespace booldyn {

// Finite word over the label alphabet, stored as label indices. The empty
// word acts as the identity.
using Word = std::vector<std::uint32_t>;

// A Boolean dynamical system (B, L, theta): an algebra together with one
// action per label. Members are public so tests can assemble broken systems;
// use make_system for shape checking.
struct BooleanDynamicalSystem {
    Algebra algebra;
    std::vector<std::string> labels;
    std::vector<Action> actions; // parallel to labels

    std::uint32_t label_index(std::string_view l) const {
        for (std::uint32_t i = 0; i < labels.size(); ++i)
            if (labels[i] == l) return i;
        throw UnknownLabelError(std::string(l));
    }

    bool has_label(std::string_view l) const {
        for (const auto& x : labels)
            if (x == l) return true;
        return false;
    }

    const Action& action(std::uint32_t label) const {
        if (label >= actions.size()) throw UnknownLabelError("index " + std::to_string(label));
        return actions[label];
    }

    const Action& action(std::string_view l) const { return actions[label_index(l)]; }
};

inline BooleanDynamicalSystem make_system(Algebra algebra, std::vector<std::string> labels,
                                          std::vector<Action> actions) {
    if (labels.size() != actions.size())
        throw ShapeError("labels and actions must be parallel");
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i].empty()) throw UnknownLabelError("empty label");
        for (std::size_t j = i + 1; j < labels.size(); ++j)
            if (labels[i] == labels[j]) throw UnknownLabelError("duplicate label " + labels[i]);
        if (actions[i].algebra() != algebra)
            throw AlgebraMismatchError("action for label " + labels[i] +
                                       " lives on a different algebra");
    }
    return BooleanDynamicalSystem{std::move(algebra), std::move(labels), std::move(actions)};
}

// --- words ------------------------------------------------------------------

inline std::string word_str(const BooleanDynamicalSystem& sys, const Word& w) {
    std::string out;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (w[i] >= sys.labels.size()) throw UnknownLabelError("index " + std::to_string(w[i]));
        if (i && (sys.labels[w[i]].size() > 1 || sys.labels[w[i - 1]].size() > 1)) out += '.';
        out += sys.labels[w[i]];
    }
    return out;
}

// Parses a word. Single-character labels may be concatenated ("ee"); longer
// labels need '.' separators ("in.out"). Greedy longest-match on each step.
inline Word parse_word(const BooleanDynamicalSystem& sys, std::string_view text) {
    Word w;
    std::size_t pos = 0;
    while (pos < text.size()) {
        if (text[pos] == '.') {
            ++pos;
            continue;
        }
        std::optional<std::uint32_t> best;
        std::size_t best_len = 0;
        for (std::uint32_t i = 0; i < sys.labels.size(); ++i) {
            const std::string& l = sys.labels[i];
            if (l.size() > best_len && text.substr(pos, l.size()) == l) {
                best = i;
                best_len = l.size();
            }
        }
        if (!best) throw UnknownLabelError("cannot read a label at '" + std::string(text.substr(pos)) + "'");
        w.push_back(*best);
        pos += best_len;
    }
    return w;
}

// theta_w = theta_{w_n} o ... o theta_{w_1}: the first letter acts first.
inline Element apply_word(const BooleanDynamicalSystem& sys, const Word& w, Element e) {
    for (auto label : w) e = sys.action(label)(e);
    return e;
}

// --- Delta and regularity -----------------------------------------------------

// Labels alpha with theta_alpha(e) != 0, as sorted label indices.
inline std::vector<std::uint32_t> delta(const BooleanDynamicalSystem& sys, const Element& e) {
    std::vector<std::uint32_t> out;
    for (std::uint32_t i = 0; i < sys.labels.size(); ++i)
        if (!is_empty(sys.actions[i](e))) out.push_back(i);
    return out;
}

inline std::size_t lambda(const BooleanDynamicalSystem& sys, const Element& e) {
    return delta(sys, e).size();
}

// The ideal B_reg of regular elements: A is regular when every nonzero B <= A
// has 0 < lambda_B < infinity. With finitely many labels only the lower bound
// matters, and since Delta is union-additive it suffices that every atom below
// A has nonempty Delta. Finite backend only; the fin_cofin construction
// example carries its own closed form.
inline Ideal regular_ideal(const BooleanDynamicalSystem& sys) {
    if (!sys.algebra.is_finite())
        throw UnsupportedBackendError("regular_ideal needs the finite backend");
    std::uint64_t gen = 0;
    for (std::uint32_t x = 0; x < sys.algebra.atom_count(); ++x) {
        Element a = Element::atom(sys.algebra, x);
        if (!delta(sys, a).empty()) gen |= std::uint64_t{1} << x;
    }
    return Ideal::principal(Element::from_bits(sys.algebra, gen));
}

// R_alpha = { A : A <= theta_alpha(B) for some B } = the principal ideal on
// theta_alpha(top) (theta is monotone). Finite backend only.
inline Ideal range_ideal(const BooleanDynamicalSystem& sys, std::uint32_t label) {
    if (!sys.algebra.is_finite())
        throw UnsupportedBackendError("range_ideal needs the finite backend; "
                                      "supply a rule-based ideal instead");
    return Ideal::principal(sys.action(label)(Element::top(sys.algebra)));
}

// --- generalized and relative systems ----------------------------------------

struct SystemCheck {
    bool ok = true;
    std::vector<std::string> issues;
    std::vector<Element> witnesses;

    void fail(std::string what, std::optional<Element> witness = std::nullopt) {
        ok = false;
        issues.push_back(std::move(what));
        if (witness) witnesses.push_back(std::move(*witness));
    }
};

// (B, L, theta, I_alpha): one ideal per label with R_alpha <= I_alpha.
struct GeneralizedBDS {
    BooleanDynamicalSystem base;
    std::vector<Ideal> ideals; // parallel to labels

    const Ideal& ideal(std::uint32_t label) const {
        if (label >= ideals.size()) throw UnknownLabelError("index " + std::to_string(label));
        return ideals[label];
    }
};

// (B, L, theta, I_alpha; J): adds an ideal J <= B_reg singling out where the
// Cuntz-Krieger identity is imposed.
struct RelativeGBDS {
    GeneralizedBDS g;
    Ideal relative; // J

    const BooleanDynamicalSystem& base() const { return g.base; }
    const Algebra& algebra() const { return g.base.algebra; }
};

inline SystemCheck validate_generalized(const GeneralizedBDS& sys) {
    SystemCheck r;
    if (sys.ideals.size() != sys.base.labels.size()) {
        r.fail("expected one ideal per label");
        return r;
    }
    for (const auto& ideal : sys.ideals)
        if (ideal.algebra() != sys.base.algebra) {
            r.fail("ideal on a different algebra");
            return r;
        }
    if (sys.base.algebra.is_finite()) {
        Element top = Element::top(sys.base.algebra);
        for (std::uint32_t i = 0; i < sys.base.labels.size(); ++i) {
            Element range = sys.base.actions[i](top);
            if (!sys.ideals[i].contains(range))
                r.fail("R_" + sys.base.labels[i] + " not contained in I_" + sys.base.labels[i] +
                           "; witness " + to_string(range),
                       range);
        }
    }
    return r;
}

inline SystemCheck validate_system(const RelativeGBDS& sys) {
    SystemCheck r = validate_generalized(sys.g);
    if (!r.ok && r.issues.front() == "expected one ideal per label") return r;
    if (sys.relative.algebra() != sys.algebra()) {
        r.fail("relative ideal on a different algebra");
        return r;
    }
    if (sys.algebra().is_finite()) {
        Ideal reg = regular_ideal(sys.base());
        if (sys.relative.is_principal()) {
            const Element& gj = sys.relative.generator();
            if (!reg.contains(gj)) {
                Element bad = difference(gj, reg.generator());
                r.fail("relative ideal not contained in the regular ideal; witness " +
                           to_string(bad),
                       bad);
            }
        } else {
            // rule-based J on a finite algebra: check every element below top
            const std::uint64_t n = std::uint64_t{1} << sys.algebra().atom_count();
            if (sys.algebra().atom_count() <= 16) {
                for (std::uint64_t b = 0; b < n; ++b) {
                    Element e = Element::from_bits(sys.algebra(), b);
                    if (sys.relative.contains(e) && !reg.contains(e)) {
                        r.fail("relative ideal not contained in the regular ideal; witness " +
                                   to_string(e),
                               e);
                        break;
                    }
                }
            }
        }
    }
    return r;
}

inline GeneralizedBDS make_generalized(BooleanDynamicalSystem base, std::vector<Ideal> ideals) {
    GeneralizedBDS g{std::move(base), std::move(ideals)};
    SystemCheck r = validate_generalized(g);
    if (!r.ok) throw InvalidSystemError(r.issues.front());
    return g;
}

// Defaults every I_alpha to R_alpha (finite backend).
inline GeneralizedBDS make_generalized(BooleanDynamicalSystem base) {
    std::vector<Ideal> ideals;
    for (std::uint32_t i = 0; i < base.labels.size(); ++i) ideals.push_back(range_ideal(base, i));
    return GeneralizedBDS{std::move(base), std::move(ideals)};
}

inline RelativeGBDS make_relative(GeneralizedBDS g, Ideal relative) {
    RelativeGBDS sys{std::move(g), std::move(relative)};
    SystemCheck r = validate_system(sys);
    if (!r.ok) throw InvalidSystemError(r.issues.front());
    return sys;
}

// Defaults J to all of B_reg (finite backend), giving the non-relative algebra.
inline RelativeGBDS make_relative(GeneralizedBDS g) {
    Ideal reg = regular_ideal(g.base);
    return RelativeGBDS{std::move(g), std::move(reg)};
}

// I_w for a word w: I_empty is the whole algebra and for w = a_1...a_n
// I_w = { A : A <= theta_{a_2...a_n}(B) for some B in I_{a_1} }, which on the
// finite backend is the principal ideal on theta_{a_2...a_n}(gen I_{a_1}).
inline Ideal word_ideal(const GeneralizedBDS& sys, const Word& w) {
    if (!sys.base.algebra.is_finite())
        throw UnsupportedBackendError("word_ideal needs the finite backend");
    if (w.empty()) return Ideal::whole(sys.base.algebra);
    Element g = sys.ideal(w[0]).generator();
    for (std::size_t i = 1; i < w.size(); ++i) g = sys.base.action(w[i])(g);
    return Ideal::principal(std::move(g));
}

} // namespace booldyn

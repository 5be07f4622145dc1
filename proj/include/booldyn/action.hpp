#pragma once

#include "booldyn/algebra.hpp"

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace booldyn {

// A Boolean homomorphism theta of the algebra into itself with theta(0) = 0.
//
// On the finite backend actions are stored as dual partial maps on atoms:
// theta(A) = f^{-1}(A). All four homomorphism laws then hold by construction.
// Other backends take an arbitrary callable; use validate_action to sample-check
// the laws, since a callable carries no such guarantee.
class Action {
    Algebra alg_;
    std::optional<std::vector<std::optional<std::uint32_t>>> dual_;
    std::function<Element(const Element&)> fn_;

    Action(Algebra a, std::optional<std::vector<std::optional<std::uint32_t>>> d,
           std::function<Element(const Element&)> f)
        : alg_(std::move(a)), dual_(std::move(d)), fn_(std::move(f)) {}

public:
    static Action dual_map(const Algebra& a,
                           std::vector<std::optional<std::uint32_t>> image) {
        if (!a.is_finite())
            throw UnsupportedBackendError("dual_map actions need the finite backend");
        if (image.size() != a.atom_count())
            throw ShapeError("dual map must assign every atom (or leave it undefined)");
        for (const auto& t : image)
            if (t && *t >= a.atom_count())
                throw UnknownAtomError("dual map target index out of range");
        return Action(a, std::move(image), nullptr);
    }

    static Action dual_map(const Algebra& a, const std::map<std::string, std::string>& image) {
        std::vector<std::optional<std::uint32_t>> f(a.atom_count());
        for (const auto& [from, to] : image) f[a.atom_index(from)] = a.atom_index(to);
        return Action(a, std::move(f), nullptr);
    }

    static Action callable(Algebra a, std::function<Element(const Element&)> f) {
        if (!f) throw ShapeError("callable action needs a function");
        return Action(std::move(a), std::nullopt, std::move(f));
    }

    const Algebra& algebra() const { return alg_; }
    bool is_dual_map() const { return dual_.has_value(); }

    const std::vector<std::optional<std::uint32_t>>& dual() const {
        if (!dual_) throw UnsupportedBackendError("action is not a dual map");
        return *dual_;
    }

    Element apply(const Element& e) const {
        if (e.algebra() != alg_)
            throw AlgebraMismatchError("action applied to element of a different algebra");
        if (dual_) {
            std::uint64_t in = e.bits(), out = 0;
            for (std::uint32_t x = 0; x < dual_->size(); ++x) {
                const auto& t = (*dual_)[x];
                if (t && ((in >> *t) & 1)) out |= std::uint64_t{1} << x;
            }
            return Element::from_bits(alg_, out);
        }
        Element r = fn_(e);
        if (r.algebra() != alg_)
            throw AlgebraMismatchError("callable action returned element of a different algebra");
        return r;
    }

    Element operator()(const Element& e) const { return apply(e); }
};

struct ActionCheck {
    bool ok = true;
    std::string law;                        // which law failed
    std::optional<Element> lhs, rhs;        // witness pair, when applicable
    std::string message;
};

namespace detail {

inline ActionCheck check_action_on(const Action& act, const Element& a, const Element& b) {
    const Element empty = Element::empty(act.algebra());
    if (act(empty) != empty)
        return {false, "theta(0)=0", std::nullopt, std::nullopt, "theta(0) != 0"};
    struct Law {
        const char* name;
        Element (*combine)(const Element&, const Element&);
    };
    const Law laws[] = {{"theta(a|b)=theta(a)|theta(b)", [](const Element& x, const Element& y) { return unite(x, y); }},
                        {"theta(a&b)=theta(a)&theta(b)", [](const Element& x, const Element& y) { return intersect(x, y); }},
                        {"theta(a\\b)=theta(a)\\theta(b)", [](const Element& x, const Element& y) { return difference(x, y); }}};
    for (const auto& law : laws) {
        if (act(law.combine(a, b)) != law.combine(act(a), act(b)))
            return {false, law.name, a, b,
                    std::string(law.name) + " fails at a=" + to_string(a) + " b=" + to_string(b)};
    }
    return {};
}

} // namespace detail

// Sample-checks the homomorphism laws on `samples` random element pairs.
template <class Rng>
ActionCheck validate_action(const Action& act, Rng& rng, int samples = 64) {
    for (int i = 0; i < samples; ++i) {
        Element a = random_element(act.algebra(), rng);
        Element b = random_element(act.algebra(), rng);
        ActionCheck c = detail::check_action_on(act, a, b);
        if (!c.ok) return c;
    }
    return {};
}

// Exhaustive variant for small finite algebras.
inline ActionCheck validate_action_exhaustive(const Action& act) {
    const Algebra& alg = act.algebra();
    if (!alg.is_finite() || alg.atom_count() > 12)
        throw SizeLimitError("exhaustive action check limited to 12 atoms");
    const std::uint64_t n = std::uint64_t{1} << alg.atom_count();
    for (std::uint64_t i = 0; i < n; ++i)
        for (std::uint64_t j = 0; j < n; ++j) {
            ActionCheck c = detail::check_action_on(act, Element::from_bits(alg, i),
                                                    Element::from_bits(alg, j));
            if (!c.ok) return c;
        }
    return {};
}

} // namespace booldyn

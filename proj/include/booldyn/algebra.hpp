#pragma once

#include "booldyn/errors.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace booldyn {

// Generalized Boolean algebras (relatively complemented distributive lattices
// with a least element, not necessarily a greatest one). Four backends:
//
//   finite       power set of a named finite atom set, values as bit masks
//   fin_subsets  finite subsets of IN = {0,1,2,...}
//   fin_cofin    finite and cofinite subsets of IN
//   product      direct product of two backends, componentwise operations
enum class Backend { finite, fin_subsets, fin_cofin, product };

class Algebra {
    struct Node {
        Backend kind;
        std::vector<std::string> atoms;                  // finite only
        std::map<std::string, std::uint32_t, std::less<>> index; // finite only
        std::shared_ptr<const Node> left, right;         // product only
    };

    std::shared_ptr<const Node> node_;

    explicit Algebra(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

    static bool node_equal(const Node& a, const Node& b) {
        if (a.kind != b.kind) return false;
        switch (a.kind) {
            case Backend::finite: return a.atoms == b.atoms;
            case Backend::product:
                return node_equal(*a.left, *b.left) && node_equal(*a.right, *b.right);
            default: return true;
        }
    }

public:
    static constexpr std::size_t max_finite_atoms = 64;

    static Algebra finite(std::vector<std::string> atom_labels) {
        if (atom_labels.size() > max_finite_atoms)
            throw SizeLimitError("finite algebra limited to 64 atoms, got " +
                                 std::to_string(atom_labels.size()));
        auto n = std::make_shared<Node>();
        n->kind = Backend::finite;
        for (std::uint32_t i = 0; i < atom_labels.size(); ++i) {
            if (atom_labels[i].empty())
                throw DuplicateAtomError("empty atom label");
            if (!n->index.emplace(atom_labels[i], i).second)
                throw DuplicateAtomError(atom_labels[i]);
        }
        n->atoms = std::move(atom_labels);
        return Algebra(std::move(n));
    }

    static Algebra fin_subsets() {
        auto n = std::make_shared<Node>();
        n->kind = Backend::fin_subsets;
        return Algebra(std::move(n));
    }

    static Algebra fin_cofin() {
        auto n = std::make_shared<Node>();
        n->kind = Backend::fin_cofin;
        return Algebra(std::move(n));
    }

    static Algebra product(const Algebra& l, const Algebra& r) {
        auto n = std::make_shared<Node>();
        n->kind = Backend::product;
        n->left = l.node_;
        n->right = r.node_;
        return Algebra(std::move(n));
    }

    Backend kind() const { return node_->kind; }
    bool is_finite() const { return node_->kind == Backend::finite; }

    std::size_t atom_count() const {
        require_finite("atom_count");
        return node_->atoms.size();
    }

    const std::vector<std::string>& atom_labels() const {
        require_finite("atom_labels");
        return node_->atoms;
    }

    const std::string& atom_label(std::uint32_t i) const {
        require_finite("atom_label");
        if (i >= node_->atoms.size()) throw UnknownAtomError("index " + std::to_string(i));
        return node_->atoms[i];
    }

    std::uint32_t atom_index(std::string_view label) const {
        require_finite("atom_index");
        auto it = node_->index.find(label);
        if (it == node_->index.end()) throw UnknownAtomError(std::string(label));
        return it->second;
    }

    bool has_atom(std::string_view label) const {
        require_finite("has_atom");
        return node_->index.find(label) != node_->index.end();
    }

    Algebra left() const {
        require_product("left");
        return Algebra(node_->left);
    }

    Algebra right() const {
        require_product("right");
        return Algebra(node_->right);
    }

    friend bool operator==(const Algebra& a, const Algebra& b) {
        return a.node_ == b.node_ || node_equal(*a.node_, *b.node_);
    }
    friend bool operator!=(const Algebra& a, const Algebra& b) { return !(a == b); }

private:
    void require_finite(const char* op) const {
        if (node_->kind != Backend::finite)
            throw UnsupportedBackendError(std::string(op) + " needs the finite backend");
    }
    void require_product(const char* op) const {
        if (node_->kind != Backend::product)
            throw UnsupportedBackendError(std::string(op) + " needs the product backend");
    }
};

namespace detail {

using U32Set = std::vector<std::uint32_t>; // sorted, unique

inline U32Set set_union(const U32Set& a, const U32Set& b) {
    U32Set out;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}
inline U32Set set_intersect(const U32Set& a, const U32Set& b) {
    U32Set out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}
inline U32Set set_difference(const U32Set& a, const U32Set& b) {
    U32Set out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}
inline U32Set normalized(U32Set v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

} // namespace detail

// An element of a generalized Boolean algebra. Immutable value type; every
// element knows its owning algebra and all binary operations insist the
// owners agree.
class Element {
public:
    struct FiniteVal { std::uint64_t bits = 0; };
    struct FinSetVal { detail::U32Set s; };
    // cofinite ? IN \ s : s
    struct FinCofinVal { bool cofinite = false; detail::U32Set s; };
    struct ProductVal { std::shared_ptr<const std::pair<Element, Element>> lr; };

private:
    Algebra alg_;
    std::variant<FiniteVal, FinSetVal, FinCofinVal, ProductVal> val_;

    Element(Algebra a, FiniteVal v) : alg_(std::move(a)), val_(v) {}
    Element(Algebra a, FinSetVal v) : alg_(std::move(a)), val_(std::move(v)) {}
    Element(Algebra a, FinCofinVal v) : alg_(std::move(a)), val_(std::move(v)) {}
    Element(Algebra a, ProductVal v) : alg_(std::move(a)), val_(std::move(v)) {}

    static void check_same(const Element& a, const Element& b, const char* op) {
        if (a.alg_ != b.alg_)
            throw AlgebraMismatchError(std::string(op) + " on elements of different algebras");
    }

public:
    // --- constructors -----------------------------------------------------

    static Element empty(const Algebra& a) {
        switch (a.kind()) {
            case Backend::finite: return Element(a, FiniteVal{0});
            case Backend::fin_subsets: return Element(a, FinSetVal{});
            case Backend::fin_cofin: return Element(a, FinCofinVal{false, {}});
            case Backend::product: {
                auto lr = std::make_shared<std::pair<Element, Element>>(empty(a.left()),
                                                                        empty(a.right()));
                return Element(a, ProductVal{std::move(lr)});
            }
        }
        throw InternalError("unreachable backend");
    }

    // Greatest element; exists for every backend except fin_subsets.
    static Element top(const Algebra& a) {
        switch (a.kind()) {
            case Backend::finite: {
                std::uint64_t bits = a.atom_count() == 64
                                         ? ~std::uint64_t{0}
                                         : ((std::uint64_t{1} << a.atom_count()) - 1);
                return Element(a, FiniteVal{bits});
            }
            case Backend::fin_cofin: return Element(a, FinCofinVal{true, {}});
            case Backend::fin_subsets:
                throw UnsupportedBackendError("fin_subsets has no greatest element");
            case Backend::product: {
                auto lr = std::make_shared<std::pair<Element, Element>>(top(a.left()),
                                                                        top(a.right()));
                return Element(a, ProductVal{std::move(lr)});
            }
        }
        throw InternalError("unreachable backend");
    }

    static Element from_bits(const Algebra& a, std::uint64_t bits) {
        if (a.kind() != Backend::finite)
            throw UnsupportedBackendError("from_bits needs the finite backend");
        if (a.atom_count() < 64 && (bits >> a.atom_count()) != 0)
            throw UnknownAtomError("bit index out of range");
        return Element(a, FiniteVal{bits});
    }

    static Element atom(const Algebra& a, std::string_view label) {
        return from_bits(a, std::uint64_t{1} << a.atom_index(label));
    }

    static Element atom(const Algebra& a, std::uint32_t index) {
        if (index >= a.atom_count()) throw UnknownAtomError("index " + std::to_string(index));
        return from_bits(a, std::uint64_t{1} << index);
    }

    static Element atoms(const Algebra& a, const std::vector<std::string>& labels) {
        std::uint64_t bits = 0;
        for (const auto& l : labels) bits |= std::uint64_t{1} << a.atom_index(l);
        return from_bits(a, bits);
    }

    static Element finite_set(const Algebra& a, detail::U32Set s) {
        if (a.kind() != Backend::fin_subsets && a.kind() != Backend::fin_cofin)
            throw UnsupportedBackendError("finite_set needs fin_subsets or fin_cofin");
        s = detail::normalized(std::move(s));
        if (a.kind() == Backend::fin_subsets) return Element(a, FinSetVal{std::move(s)});
        return Element(a, FinCofinVal{false, std::move(s)});
    }

    static Element cofinite_set(const Algebra& a, detail::U32Set excluded) {
        if (a.kind() != Backend::fin_cofin)
            throw UnsupportedBackendError("cofinite_set needs fin_cofin");
        return Element(a, FinCofinVal{true, detail::normalized(std::move(excluded))});
    }

    static Element pair(const Algebra& a, Element l, Element r) {
        if (a.kind() != Backend::product)
            throw UnsupportedBackendError("pair needs the product backend");
        if (l.algebra() != a.left() || r.algebra() != a.right())
            throw AlgebraMismatchError("pair coordinates do not match the product factors");
        auto lr = std::make_shared<std::pair<Element, Element>>(std::move(l), std::move(r));
        return Element(a, ProductVal{std::move(lr)});
    }

    // --- observers ---------------------------------------------------------

    const Algebra& algebra() const { return alg_; }

    std::uint64_t bits() const {
        if (auto* v = std::get_if<FiniteVal>(&val_)) return v->bits;
        throw UnsupportedBackendError("bits needs the finite backend");
    }

    const FinSetVal* fin_set() const { return std::get_if<FinSetVal>(&val_); }
    const FinCofinVal* fin_cofin() const { return std::get_if<FinCofinVal>(&val_); }

    const Element& first() const {
        if (auto* v = std::get_if<ProductVal>(&val_)) return v->lr->first;
        throw UnsupportedBackendError("first needs the product backend");
    }
    const Element& second() const {
        if (auto* v = std::get_if<ProductVal>(&val_)) return v->lr->second;
        throw UnsupportedBackendError("second needs the product backend");
    }

    // Indices of the atoms below this element (finite backend).
    std::vector<std::uint32_t> atom_indices() const {
        std::uint64_t b = bits();
        std::vector<std::uint32_t> out;
        for (std::uint32_t i = 0; b != 0; ++i, b >>= 1)
            if (b & 1) out.push_back(i);
        return out;
    }

    std::vector<std::string> atom_label_list() const {
        std::vector<std::string> out;
        for (auto i : atom_indices()) out.push_back(alg_.atom_label(i));
        return out;
    }

    // --- boolean operations ------------------------------------------------

    friend Element unite(const Element& a, const Element& b) {
        check_same(a, b, "unite");
        return std::visit(
            [&](const auto& va) -> Element {
                using T = std::decay_t<decltype(va)>;
                const auto& vb = std::get<T>(b.val_);
                if constexpr (std::is_same_v<T, FiniteVal>) {
                    return Element(a.alg_, FiniteVal{va.bits | vb.bits});
                } else if constexpr (std::is_same_v<T, FinSetVal>) {
                    return Element(a.alg_, FinSetVal{detail::set_union(va.s, vb.s)});
                } else if constexpr (std::is_same_v<T, FinCofinVal>) {
                    if (!va.cofinite && !vb.cofinite)
                        return Element(a.alg_, FinCofinVal{false, detail::set_union(va.s, vb.s)});
                    if (!va.cofinite && vb.cofinite)
                        return Element(a.alg_, FinCofinVal{true, detail::set_difference(vb.s, va.s)});
                    if (va.cofinite && !vb.cofinite)
                        return Element(a.alg_, FinCofinVal{true, detail::set_difference(va.s, vb.s)});
                    return Element(a.alg_, FinCofinVal{true, detail::set_intersect(va.s, vb.s)});
                } else {
                    return pair(a.alg_, unite(va.lr->first, std::get<T>(b.val_).lr->first),
                                unite(va.lr->second, std::get<T>(b.val_).lr->second));
                }
            },
            a.val_);
    }

    friend Element intersect(const Element& a, const Element& b) {
        check_same(a, b, "intersect");
        return std::visit(
            [&](const auto& va) -> Element {
                using T = std::decay_t<decltype(va)>;
                const auto& vb = std::get<T>(b.val_);
                if constexpr (std::is_same_v<T, FiniteVal>) {
                    return Element(a.alg_, FiniteVal{va.bits & vb.bits});
                } else if constexpr (std::is_same_v<T, FinSetVal>) {
                    return Element(a.alg_, FinSetVal{detail::set_intersect(va.s, vb.s)});
                } else if constexpr (std::is_same_v<T, FinCofinVal>) {
                    if (!va.cofinite && !vb.cofinite)
                        return Element(a.alg_, FinCofinVal{false, detail::set_intersect(va.s, vb.s)});
                    if (!va.cofinite && vb.cofinite)
                        return Element(a.alg_, FinCofinVal{false, detail::set_difference(va.s, vb.s)});
                    if (va.cofinite && !vb.cofinite)
                        return Element(a.alg_, FinCofinVal{false, detail::set_difference(vb.s, va.s)});
                    return Element(a.alg_, FinCofinVal{true, detail::set_union(va.s, vb.s)});
                } else {
                    return pair(a.alg_, intersect(va.lr->first, std::get<T>(b.val_).lr->first),
                                intersect(va.lr->second, std::get<T>(b.val_).lr->second));
                }
            },
            a.val_);
    }

    friend Element difference(const Element& a, const Element& b) {
        check_same(a, b, "difference");
        return std::visit(
            [&](const auto& va) -> Element {
                using T = std::decay_t<decltype(va)>;
                const auto& vb = std::get<T>(b.val_);
                if constexpr (std::is_same_v<T, FiniteVal>) {
                    return Element(a.alg_, FiniteVal{va.bits & ~vb.bits});
                } else if constexpr (std::is_same_v<T, FinSetVal>) {
                    return Element(a.alg_, FinSetVal{detail::set_difference(va.s, vb.s)});
                } else if constexpr (std::is_same_v<T, FinCofinVal>) {
                    if (!va.cofinite && !vb.cofinite)
                        return Element(a.alg_, FinCofinVal{false, detail::set_difference(va.s, vb.s)});
                    if (!va.cofinite && vb.cofinite)
                        return Element(a.alg_, FinCofinVal{false, detail::set_intersect(va.s, vb.s)});
                    if (va.cofinite && !vb.cofinite)
                        return Element(a.alg_, FinCofinVal{true, detail::set_union(va.s, vb.s)});
                    return Element(a.alg_, FinCofinVal{false, detail::set_difference(vb.s, va.s)});
                } else {
                    return pair(a.alg_, difference(va.lr->first, std::get<T>(b.val_).lr->first),
                                difference(va.lr->second, std::get<T>(b.val_).lr->second));
                }
            },
            a.val_);
    }

    friend bool is_empty(const Element& a) {
        return std::visit(
            [](const auto& v) -> bool {
                using T = std::decay_t<decltype(v)>;
                if constexpr (std::is_same_v<T, FiniteVal>) return v.bits == 0;
                else if constexpr (std::is_same_v<T, FinSetVal>) return v.s.empty();
                else if constexpr (std::is_same_v<T, FinCofinVal>) return !v.cofinite && v.s.empty();
                else return is_empty(v.lr->first) && is_empty(v.lr->second);
            },
            a.val_);
    }

    friend bool operator==(const Element& a, const Element& b) {
        check_same(a, b, "equals");
        return std::visit(
            [&](const auto& va) -> bool {
                using T = std::decay_t<decltype(va)>;
                const auto& vb = std::get<T>(b.val_);
                if constexpr (std::is_same_v<T, FiniteVal>) return va.bits == vb.bits;
                else if constexpr (std::is_same_v<T, FinSetVal>) return va.s == vb.s;
                else if constexpr (std::is_same_v<T, FinCofinVal>)
                    return va.cofinite == vb.cofinite && va.s == vb.s;
                else
                    return va.lr->first == vb.lr->first && va.lr->second == vb.lr->second;
            },
            a.val_);
    }
    friend bool operator!=(const Element& a, const Element& b) { return !(a == b); }

    friend bool subseteq(const Element& a, const Element& b) {
        check_same(a, b, "subseteq");
        return intersect(a, b) == a;
    }

    // Deterministic total order (same algebra assumed); usable as map key.
    friend int compare(const Element& a, const Element& b) {
        check_same(a, b, "compare");
        return std::visit(
            [&](const auto& va) -> int {
                using T = std::decay_t<decltype(va)>;
                const auto& vb = std::get<T>(b.val_);
                if constexpr (std::is_same_v<T, FiniteVal>) {
                    return va.bits < vb.bits ? -1 : va.bits > vb.bits ? 1 : 0;
                } else if constexpr (std::is_same_v<T, FinSetVal>) {
                    return va.s < vb.s ? -1 : vb.s < va.s ? 1 : 0;
                } else if constexpr (std::is_same_v<T, FinCofinVal>) {
                    if (va.cofinite != vb.cofinite) return va.cofinite ? 1 : -1;
                    return va.s < vb.s ? -1 : vb.s < va.s ? 1 : 0;
                } else {
                    int c = compare(va.lr->first, vb.lr->first);
                    if (c != 0) return c;
                    return compare(va.lr->second, vb.lr->second);
                }
            },
            a.val_);
    }
    friend bool operator<(const Element& a, const Element& b) { return compare(a, b) < 0; }

    friend std::string to_string(const Element& e) {
        std::ostringstream os;
        std::visit(
            [&](const auto& v) {
                using T = std::decay_t<decltype(v)>;
                if constexpr (std::is_same_v<T, FiniteVal>) {
                    os << '{';
                    bool first = true;
                    for (auto i : e.atom_indices()) {
                        if (!first) os << ',';
                        first = false;
                        os << e.alg_.atom_label(i);
                    }
                    os << '}';
                } else if constexpr (std::is_same_v<T, FinSetVal>) {
                    os << '{';
                    for (std::size_t i = 0; i < v.s.size(); ++i)
                        os << (i ? "," : "") << v.s[i];
                    os << '}';
                } else if constexpr (std::is_same_v<T, FinCofinVal>) {
                    if (v.cofinite) os << "co";
                    os << '{';
                    for (std::size_t i = 0; i < v.s.size(); ++i)
                        os << (i ? "," : "") << v.s[i];
                    os << '}';
                } else {
                    os << '(' << to_string(v.lr->first) << ',' << to_string(v.lr->second) << ')';
                }
            },
            e.val_);
        return os.str();
    }

    friend std::ostream& operator<<(std::ostream& os, const Element& e) {
        return os << to_string(e);
    }
};

// An ideal of a generalized Boolean algebra: nonempty, downward closed, and
// closed under unions of pairs. Two concrete forms: principal (carries its
// generator, the only form with decidable join/meet everywhere) and
// predicate (membership rule, used by the infinite backends).
class Ideal {
    Algebra alg_;
    std::optional<Element> gen_;
    std::function<bool(const Element&)> pred_;
    std::string desc_;

    Ideal(Algebra a, std::optional<Element> g, std::function<bool(const Element&)> p,
          std::string d)
        : alg_(std::move(a)), gen_(std::move(g)), pred_(std::move(p)), desc_(std::move(d)) {}

public:
    static Ideal principal(Element generator) {
        Algebra a = generator.algebra();
        return Ideal(a, std::move(generator), nullptr, "");
    }

    static Ideal predicate(Algebra a, std::function<bool(const Element&)> member,
                           std::string description) {
        if (!member) throw InvalidGeneratorError("predicate ideal needs a membership rule");
        return Ideal(std::move(a), std::nullopt, std::move(member), std::move(description));
    }

    static Ideal whole(const Algebra& a) { return principal(Element::top(a)); }
    static Ideal zero(const Algebra& a) { return principal(Element::empty(a)); }

    const Algebra& algebra() const { return alg_; }
    bool is_principal() const { return gen_.has_value(); }

    const Element& generator() const {
        if (!gen_) throw UnsupportedIdealFormError("ideal has no principal generator: " + desc_);
        return *gen_;
    }

    const std::string& description() const { return desc_; }

    bool contains(const Element& e) const {
        if (e.algebra() != alg_)
            throw AlgebraMismatchError("ideal_contains: element of a different algebra");
        if (gen_) return subseteq(e, *gen_);
        return pred_(e);
    }
};

inline bool ideal_contains(const Ideal& ideal, const Element& e) { return ideal.contains(e); }

inline Ideal ideal_join(const Ideal& a, const Ideal& b) {
    if (a.algebra() != b.algebra()) throw AlgebraMismatchError("ideal_join");
    if (!a.is_principal() || !b.is_principal())
        throw UnsupportedIdealFormError("ideal_join needs principal ideals");
    return Ideal::principal(unite(a.generator(), b.generator()));
}

inline Ideal ideal_meet(const Ideal& a, const Ideal& b) {
    if (a.algebra() != b.algebra()) throw AlgebraMismatchError("ideal_meet");
    if (!a.is_principal() || !b.is_principal())
        throw UnsupportedIdealFormError("ideal_meet needs principal ideals");
    return Ideal::principal(intersect(a.generator(), b.generator()));
}

// Deterministic sample elements for law checking on any backend. Indices for
// the infinite backends are drawn from {0..19}.
template <class Rng>
Element random_element(const Algebra& a, Rng& rng) {
    switch (a.kind()) {
        case Backend::finite: {
            std::uniform_int_distribution<std::uint64_t> d(0, (a.atom_count() == 64)
                                                                  ? ~std::uint64_t{0}
                                                                  : (std::uint64_t{1} << a.atom_count()) - 1);
            return Element::from_bits(a, d(rng));
        }
        case Backend::fin_subsets:
        case Backend::fin_cofin: {
            std::uniform_int_distribution<int> size(0, 6), idx(0, 19), coin(0, 1);
            detail::U32Set s;
            for (int i = size(rng); i > 0; --i) s.push_back(static_cast<std::uint32_t>(idx(rng)));
            s = detail::normalized(std::move(s));
            if (a.kind() == Backend::fin_subsets) return Element::finite_set(a, std::move(s));
            if (coin(rng)) return Element::cofinite_set(a, std::move(s));
            return Element::finite_set(a, std::move(s));
        }
        case Backend::product: {
            Element l = random_element(a.left(), rng);
            Element r = random_element(a.right(), rng);
            return Element::pair(a, std::move(l), std::move(r));
        }
    }
    throw InternalError("unreachable backend");
}

} // namespace booldyn

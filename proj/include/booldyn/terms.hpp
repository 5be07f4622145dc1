#pragma once

#include "booldyn/rational.hpp"
#include "booldyn/system.hpp"

#include <cctype>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace booldyn {

// --- normal terms ---------------------------------------------------------------
//
// The dense *-subalgebra is spanned by s_{alpha,A} s*_{beta,A} with A in
// I_alpha n I_beta. Every spanning element decomposes over the atoms of A, so
// the symbolic layer works with *atom-diagonal* normal terms
//
//     (alpha, a, beta)  ==  s_{alpha,a} s*_{beta,a},     a an atom,
//
// with p_a = (0,a,0) and s_{alpha,a} = (alpha,a,0) as special shapes. Products
// of normal terms are again single normal terms (or zero), which keeps the
// multiplication exact and table-driven.

namespace detail {

// words ordered by length, then position-wise
inline bool word_less(const Word& a, const Word& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
}

} // namespace detail

struct NormalTerm {
    Word left;
    std::uint32_t atom = 0;
    Word right;

    friend bool operator==(const NormalTerm&, const NormalTerm&) = default;
    friend bool operator<(const NormalTerm& x, const NormalTerm& y) {
        if (x.left != y.left) return detail::word_less(x.left, y.left);
        if (x.atom != y.atom) return x.atom < y.atom;
        return detail::word_less(x.right, y.right);
    }
};

// gauge degree |alpha| - |beta|
inline int degree(const NormalTerm& t) {
    return static_cast<int>(t.left.size()) - static_cast<int>(t.right.size());
}

inline NormalTerm adjoint(const NormalTerm& t) { return {t.right, t.atom, t.left}; }

// --- linear combinations --------------------------------------------------------

class AlgElement {
    std::map<NormalTerm, Rational> terms_;

public:
    AlgElement() = default;

    static AlgElement term(NormalTerm t, Rational c = Rational(1)) {
        AlgElement e;
        e.add_term(std::move(t), std::move(c));
        return e;
    }

    void add_term(NormalTerm t, Rational c) {
        if (c == 0) return;
        auto it = terms_.find(t);
        if (it == terms_.end()) {
            terms_.emplace(std::move(t), std::move(c));
        } else {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    const std::map<NormalTerm, Rational>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    AlgElement& operator+=(const AlgElement& o) {
        for (const auto& [t, c] : o.terms_) add_term(t, c);
        return *this;
    }
    AlgElement& operator-=(const AlgElement& o) {
        for (const auto& [t, c] : o.terms_) add_term(t, -c);
        return *this;
    }
    AlgElement& operator*=(const Rational& c) {
        if (c == 0) {
            terms_.clear();
            return *this;
        }
        for (auto& [t, v] : terms_) v *= c;
        return *this;
    }

    friend AlgElement operator+(AlgElement a, const AlgElement& b) { return a += b; }
    friend AlgElement operator-(AlgElement a, const AlgElement& b) { return a -= b; }
    friend AlgElement operator-(AlgElement a) {
        for (auto& [t, v] : a.terms_) v = -v;
        return a;
    }
    friend AlgElement operator*(const Rational& c, AlgElement a) { return a *= c; }
    friend AlgElement operator*(AlgElement a, const Rational& c) { return a *= c; }
    friend bool operator==(const AlgElement&, const AlgElement&) = default;
};

inline AlgElement adjoint(const AlgElement& x) {
    AlgElement out;
    for (const auto& [t, c] : x.terms()) out.add_term(adjoint(t), c); // rational = real
    return out;
}

// largest word length appearing in x
inline std::size_t max_word_length(const AlgElement& x) {
    std::size_t n = 0;
    for (const auto& [t, c] : x.terms()) n = std::max({n, t.left.size(), t.right.size()});
    return n;
}

// --- validity --------------------------------------------------------------------

inline bool is_valid_term(const GeneralizedBDS& g, const NormalTerm& t) {
    const Algebra& alg = g.base.algebra;
    if (t.atom >= alg.atom_count()) return false;
    for (auto l : t.left)
        if (l >= g.base.labels.size()) return false;
    for (auto l : t.right)
        if (l >= g.base.labels.size()) return false;
    Element a = Element::atom(alg, t.atom);
    return word_ideal(g, t.left).contains(a) && word_ideal(g, t.right).contains(a);
}

inline NormalTerm make_term(const GeneralizedBDS& g, Word left, std::uint32_t atom, Word right) {
    NormalTerm t{std::move(left), atom, std::move(right)};
    if (!is_valid_term(g, t))
        throw InvalidTermError("atom must lie in the word ideals of both words");
    return t;
}

inline NormalTerm make_term(const GeneralizedBDS& g, const std::string& left,
                            const std::string& atom, const std::string& right) {
    return make_term(g, parse_word(g.base, left), g.base.algebra.atom_index(atom),
                     parse_word(g.base, right));
}

// --- multiplication ---------------------------------------------------------------
//
// (alpha,a,beta)(mu,c,nu) is nonzero in exactly three shapes, depending on how
// beta and mu overlap; the overlap tests are exact atom containments.

namespace detail {

inline bool is_prefix(const Word& p, const Word& w) {
    return p.size() <= w.size() && std::equal(p.begin(), p.end(), w.begin());
}

inline Word word_concat(const Word& a, const Word& b) {
    Word out = a;
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

inline Word word_suffix(const Word& w, std::size_t from) {
    return Word(w.begin() + static_cast<std::ptrdiff_t>(from), w.end());
}

inline std::optional<NormalTerm> term_mul_cases(const BooleanDynamicalSystem& sys,
                                                const NormalTerm& t, const NormalTerm& u) {
    const Algebra& alg = sys.algebra;
    if (t.right == u.left) {
        if (t.atom != u.atom) return std::nullopt; // distinct atoms are disjoint
        return NormalTerm{t.left, t.atom, u.right};
    }
    if (is_prefix(u.left, t.right)) { // beta = mu.beta'
        Word rest = word_suffix(t.right, u.left.size());
        Element image = apply_word(sys, rest, Element::atom(alg, u.atom));
        if (!subseteq(Element::atom(alg, t.atom), image)) return std::nullopt;
        return NormalTerm{t.left, t.atom, word_concat(u.right, rest)};
    }
    if (is_prefix(t.right, u.left)) { // mu = beta.mu'
        Word rest = word_suffix(u.left, t.right.size());
        Element image = apply_word(sys, rest, Element::atom(alg, t.atom));
        if (!subseteq(Element::atom(alg, u.atom), image)) return std::nullopt;
        return NormalTerm{word_concat(t.left, rest), u.atom, u.right};
    }
    return std::nullopt;
}

} // namespace detail

// Product of two normal terms: a single normal term or zero. Inputs are
// validated; outputs are provably valid, and that proof is re-checked.
inline AlgElement term_mul(const GeneralizedBDS& g, const NormalTerm& t, const NormalTerm& u) {
    if (!is_valid_term(g, t) || !is_valid_term(g, u))
        throw InvalidTermError("term_mul needs valid terms");
    auto r = detail::term_mul_cases(g.base, t, u);
    if (!r) return {};
    if (!is_valid_term(g, *r))
        throw InternalError("term_mul produced an invalid term");
    return AlgElement::term(std::move(*r));
}

inline AlgElement mul(const GeneralizedBDS& g, const AlgElement& x, const AlgElement& y) {
    AlgElement out;
    for (const auto& [t, ct] : x.terms())
        for (const auto& [u, cu] : y.terms()) {
            auto r = detail::term_mul_cases(g.base, t, u);
            if (!r) continue;
            if (!is_valid_term(g, *r))
                throw InternalError("term_mul produced an invalid term");
            out.add_term(std::move(*r), ct * cu);
        }
    return out;
}

// --- embedding of the generating family -------------------------------------------

// p_A as an element: atom decomposition of A.
inline AlgElement embed_p(const GeneralizedBDS& g, const Element& a) {
    if (a.algebra() != g.base.algebra)
        throw AlgebraMismatchError("embed_p: element from another algebra");
    AlgElement out;
    for (auto i : a.atom_indices()) out.add_term(NormalTerm{{}, i, {}}, Rational(1));
    return out;
}

// s_{alpha,B} as an element; requires B in I_alpha. s_{0,B} = p_B.
inline AlgElement embed_s(const GeneralizedBDS& g, const Word& alpha, const Element& b) {
    if (b.algebra() != g.base.algebra)
        throw AlgebraMismatchError("embed_s: element from another algebra");
    if (!word_ideal(g, alpha).contains(b))
        throw InvalidGeneratorError("embed_s: set must lie in the word ideal");
    AlgElement out;
    for (auto i : b.atom_indices()) out.add_term(NormalTerm{alpha, i, {}}, Rational(1));
    return out;
}

inline AlgElement embed_s(const GeneralizedBDS& g, const std::string& alpha, const Element& b) {
    return embed_s(g, parse_word(g.base, alpha), b);
}

// --- CK expansion and bounded-depth normal form ------------------------------------

// (alpha,a,beta) = sum over gamma in Delta_a, atoms d <= theta_gamma(a) of
// (alpha.gamma, d, beta.gamma); the reconstruction identity holds exactly when
// a lies in J.
inline AlgElement ck_expand(const RelativeGBDS& sys, const NormalTerm& t) {
    const Algebra& alg = sys.algebra();
    Element a = Element::atom(alg, t.atom);
    if (!sys.relative.contains(a))
        throw NotExpandableError("reconstruction applies only to atoms of the relative ideal");
    AlgElement out;
    for (auto gamma : delta(sys.base(), a)) {
        Element image = sys.base().action(gamma)(a);
        Word l = t.left, r = t.right;
        l.push_back(gamma);
        r.push_back(gamma);
        for (auto d : image.atom_indices()) out.add_term(NormalTerm{l, d, r}, Rational(1));
    }
    return out;
}

// Depth-capped normal form: repeatedly expand terms whose atom lies in J while
// min(|alpha|,|beta|) < depth. Linear; the result is independent of expansion
// order because distinct terms expand independently.
inline AlgElement normal_form(const RelativeGBDS& sys, const AlgElement& x, std::size_t depth) {
    AlgElement out;
    std::vector<std::pair<NormalTerm, Rational>> work(x.terms().begin(), x.terms().end());
    while (!work.empty()) {
        auto [t, c] = std::move(work.back());
        work.pop_back();
        bool shallow = std::min(t.left.size(), t.right.size()) < depth;
        if (shallow && sys.relative.contains(Element::atom(sys.algebra(), t.atom))) {
            AlgElement expanded = ck_expand(sys, t);
            for (const auto& [u, cu] : expanded.terms()) work.emplace_back(u, c * cu);
        } else {
            out.add_term(std::move(t), std::move(c));
        }
    }
    return out;
}

// --- bounded-depth equality --------------------------------------------------------

enum class EqVerdict { Equal, Distinct, Inconclusive };

// Rewriting is sound: a vanishing normal form certifies equality. A nonzero
// normal form certifies nothing (deeper expansion may still cancel), so this
// overload never answers Distinct; a separating matrix witness can (see the
// representation layer).
inline EqVerdict eq_modulo_ck(const RelativeGBDS& sys, const AlgElement& x, const AlgElement& y,
                              std::size_t depth) {
    return normal_form(sys, x - y, depth).is_zero() ? EqVerdict::Equal
                                                    : EqVerdict::Inconclusive;
}

inline EqVerdict eq_modulo_ck(const RelativeGBDS& sys, const AlgElement& x,
                              const AlgElement& y) {
    return eq_modulo_ck(sys, x, y, std::max(max_word_length(x), max_word_length(y)) + 1);
}

// --- grading -----------------------------------------------------------------------

inline std::map<int, AlgElement> grading(const AlgElement& x) {
    std::map<int, AlgElement> out;
    for (const auto& [t, c] : x.terms()) out[degree(t)].add_term(t, c);
    return out;
}

inline bool is_homogeneous(const AlgElement& x) { return grading(x).size() <= 1; }

// invariant under the circle action = concentrated in degree zero
inline bool gauge_invariant(const AlgElement& x) {
    for (const auto& [t, c] : x.terms())
        if (degree(t) != 0) return false;
    return true;
}

// --- printing ----------------------------------------------------------------------

inline std::string to_string(const BooleanDynamicalSystem& sys, const NormalTerm& t) {
    const std::string atom = sys.algebra.atom_label(t.atom);
    if (t.left.empty() && t.right.empty()) return "p[" + atom + "]";
    std::string out;
    if (!t.left.empty()) out += "s[" + word_str(sys, t.left) + ";" + atom + "]";
    if (!t.right.empty()) {
        if (!out.empty()) out += "*";
        out += "s[" + word_str(sys, t.right) + ";" + atom + "]^";
    }
    return out;
}

inline std::string to_string(const BooleanDynamicalSystem& sys, const AlgElement& x) {
    if (x.is_zero()) return "0";
    std::string out;
    for (const auto& [t, c] : x.terms()) {
        Rational mag = c < 0 ? Rational(-c) : c;
        if (out.empty()) {
            if (c < 0) out += "-";
        } else {
            out += c < 0 ? " - " : " + ";
        }
        if (mag != 1) out += rational_str(mag) + "*";
        out += to_string(sys, t);
    }
    return out;
}

// --- parsing -----------------------------------------------------------------------
//
// expr   := ['-'] product (('+'|'-') product)*
// product:= factor ('*' factor)*
// factor := rational | atomset-free generator | '(' expr ')' ['^']
// generator := 'p[' atoms ']' | 's[' word ';' atoms ']' ['^']
// atoms  := label (',' label)*

namespace detail {

class TermParser {
public:
    TermParser(const GeneralizedBDS& g, std::string_view text) : g_(g), s_(text) {}

    AlgElement parse() {
        AlgElement e = expr();
        skip();
        if (pos_ != s_.size()) throw ParseError("trailing input at '" + rest() + "'");
        return e;
    }

private:
    const GeneralizedBDS& g_;
    std::string_view s_;
    std::size_t pos_ = 0;

    std::string rest() const { return std::string(s_.substr(pos_, 12)); }
    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool eat(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    char peek() {
        skip();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }

    AlgElement expr() {
        bool neg = false;
        skip();
        if (eat('-'))
            neg = true;
        else
            eat('+');
        AlgElement acc = product();
        if (neg) acc = -acc;
        for (;;) {
            skip();
            if (eat('+'))
                acc += product();
            else if (eat('-'))
                acc -= product();
            else
                return acc;
        }
    }

    AlgElement product() {
        AlgElement acc = factor();
        while (eat('*')) acc = booldyn::mul(g_, acc, factor());
        return acc;
    }

    AlgElement factor() {
        skip();
        char c = peek();
        if (c == '(') {
            eat('(');
            AlgElement inner = expr();
            if (!eat(')')) throw ParseError("expected ')' at '" + rest() + "'");
            if (eat('^')) inner = booldyn::adjoint(inner);
            return inner;
        }
        if (c == 'p' || c == 's') return generator();
        return number_times_one();
    }

    // The algebra has no unit in general, so a scalar must multiply a
    // generator; the one bare scalar with a meaning of its own is 0.
    AlgElement number_times_one() {
        Rational r = number();
        if (!eat('*')) {
            if (r == 0) return {};
            throw ParseError("a scalar must multiply a generator");
        }
        return r * factor();
    }

    Rational number() {
        skip();
        std::size_t start = pos_;
        while (pos_ < s_.size() &&
               (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '/'))
            ++pos_;
        if (start == pos_) throw ParseError("expected a term at '" + rest() + "'");
        try {
            return Rational(std::string(s_.substr(start, pos_ - start)));
        } catch (const std::exception&) {
            throw ParseError("bad rational '" + std::string(s_.substr(start, pos_ - start)) + "'");
        }
    }

    std::string until(char stop) {
        std::string out;
        while (pos_ < s_.size() && s_[pos_] != stop) out += s_[pos_++];
        if (pos_ == s_.size()) throw ParseError(std::string("expected '") + stop + "'");
        ++pos_;
        return out;
    }

    Element atom_set(const std::string& csv) {
        std::vector<std::string> labels;
        std::string cur;
        for (char ch : csv) {
            if (ch == ',') {
                labels.push_back(cur);
                cur.clear();
            } else if (!std::isspace(static_cast<unsigned char>(ch))) {
                cur += ch;
            }
        }
        if (!cur.empty()) labels.push_back(cur);
        if (labels.empty()) return Element::empty(g_.base.algebra);
        return Element::atoms(g_.base.algebra, labels);
    }

    AlgElement generator() {
        if (eat('p')) {
            if (!eat('[')) throw ParseError("expected '[' after p");
            AlgElement e = embed_p(g_, atom_set(until(']')));
            if (eat('^')) e = booldyn::adjoint(e); // projections are self-adjoint
            return e;
        }
        if (!eat('s')) throw ParseError("expected a generator at '" + rest() + "'");
        if (!eat('[')) throw ParseError("expected '[' after s");
        std::string body = until(']');
        auto semi = body.find(';');
        if (semi == std::string::npos) throw ParseError("expected ';' inside s[...]");
        Word w = parse_word(g_.base, body.substr(0, semi));
        Element b = atom_set(body.substr(semi + 1));
        AlgElement e = embed_s(g_, w, b);
        if (eat('^')) e = booldyn::adjoint(e);
        return e;
    }
};

} // namespace detail

inline AlgElement parse_alg_element(const GeneralizedBDS& g, std::string_view text) {
    return detail::TermParser(g, text).parse();
}

} // namespace booldyn

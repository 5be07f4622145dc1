#include "booldyn/system.hpp"

#include "fixtures.hpp"

#include <catch_amalgamated.hpp>

#include <random>

using namespace booldyn;

namespace {

// Brute-force regularity: A is regular iff every nonzero B <= A has
// lambda_B > 0 (finitely many labels, so the upper bound is automatic).
bool regular_by_definition(const BooleanDynamicalSystem& sys, std::uint64_t abits) {
    for (std::uint64_t b = abits;; b = (b - 1) & abits) {
        if (b != 0 && lambda(sys, Element::from_bits(sys.algebra, b)) == 0) return false;
        if (b == 0) break;
    }
    return true;
}

} // namespace

TEST_CASE("dual map application and word composition order") {
    auto sys = fixtures::sys1_base();
    const Algebra& a = sys.algebra;
    Element v = Element::atom(a, "v"), w = Element::atom(a, "w");

    REQUIRE(sys.action("e")(v) == w);
    REQUIRE(is_empty(sys.action("e")(w)));
    REQUIRE(sys.action("e")(Element::top(a)) == w);

    // theta over the empty word is the identity
    REQUIRE(apply_word(sys, {}, v) == v);
    // ee: theta_e twice kills everything
    REQUIRE(is_empty(apply_word(sys, parse_word(sys, "ee"), v)));

    // the first letter acts first: on chain x -a-> y -b-> z (dual maps),
    // theta_{ab} = theta_b o theta_a
    auto chain = fixtures::chain_base();
    Element x = Element::atom(chain.algebra, "x");
    REQUIRE(apply_word(chain, parse_word(chain, "ab"), x) ==
            Element::atom(chain.algebra, "z"));
    REQUIRE(is_empty(apply_word(chain, parse_word(chain, "ba"), x)));
}

TEST_CASE("word parsing") {
    auto sys = fixtures::chain_base();
    REQUIRE(parse_word(sys, "ab") == Word{0, 1});
    REQUIRE(parse_word(sys, "a.b") == Word{0, 1});
    REQUIRE(parse_word(sys, "") == Word{});
    REQUIRE(word_str(sys, {0, 1, 0}) == "aba");
    REQUIRE_THROWS_AS(parse_word(sys, "az"), UnknownLabelError);

    // multi-character labels need separators and longest-match wins
    Algebra alg = Algebra::finite({"v"});
    auto long_sys = make_system(
        alg, {"in", "i"},
        {Action::dual_map(alg, std::map<std::string, std::string>{{"v", "v"}}),
         Action::dual_map(alg, std::map<std::string, std::string>{})});
    REQUIRE(parse_word(long_sys, "in.i") == Word{0, 1});
    REQUIRE(parse_word(long_sys, "in") == Word{0});
    REQUIRE(word_str(long_sys, {0, 1}) == "in.i");
}

TEST_CASE("delta and lambda") {
    auto sys = fixtures::sys1_base();
    const Algebra& a = sys.algebra;
    REQUIRE(delta(sys, Element::atom(a, "v")) == std::vector<std::uint32_t>{0});
    REQUIRE(delta(sys, Element::atom(a, "w")).empty());
    REQUIRE(delta(sys, Element::top(a)) == std::vector<std::uint32_t>{0});
    REQUIRE(lambda(sys, Element::atom(a, "v")) == 1);
    REQUIRE(lambda(sys, Element::atom(a, "w")) == 0);
    REQUIRE(delta(sys, Element::empty(a)).empty());
}

TEST_CASE("delta is union-additive on random systems") {
    std::mt19937_64 rng(101);
    for (int s = 0; s < 40; ++s) {
        auto sys = fixtures::random_bds(rng);
        const std::uint64_t n = std::uint64_t{1} << sys.algebra.atom_count();
        for (int it = 0; it < 30; ++it) {
            std::uniform_int_distribution<std::uint64_t> d(0, n - 1);
            Element x = Element::from_bits(sys.algebra, d(rng));
            Element y = Element::from_bits(sys.algebra, d(rng));
            auto dx = delta(sys, x), dy = delta(sys, y);
            std::vector<std::uint32_t> both;
            std::set_union(dx.begin(), dx.end(), dy.begin(), dy.end(), std::back_inserter(both));
            REQUIRE(delta(sys, unite(x, y)) == both);
        }
    }
}

TEST_CASE("regular ideal matches the definition exhaustively") {
    // pinned example first
    auto sys1 = fixtures::sys1_base();
    REQUIRE(regular_ideal(sys1).generator() == Element::atom(sys1.algebra, "v"));

    std::mt19937_64 rng(55);
    for (int s = 0; s < 60; ++s) {
        auto sys = fixtures::random_bds(rng);
        Ideal reg = regular_ideal(sys);
        const std::uint64_t n = std::uint64_t{1} << sys.algebra.atom_count();
        for (std::uint64_t b = 0; b < n; ++b) {
            Element e = Element::from_bits(sys.algebra, b);
            REQUIRE(ideal_contains(reg, e) == regular_by_definition(sys, b));
        }
    }
}

TEST_CASE("regular ideal needs the finite backend") {
    Algebra a = Algebra::fin_cofin();
    auto sys = make_system(a, {"e"}, {Action::callable(a, [](const Element& e) { return e; })});
    REQUIRE_THROWS_AS(regular_ideal(sys), UnsupportedBackendError);
}

TEST_CASE("range and word ideals") {
    auto g = make_generalized(fixtures::sys1_base());
    const auto& sys = g.base;
    const Algebra& a = sys.algebra;
    REQUIRE(range_ideal(sys, 0).generator() == Element::atom(a, "w"));
    REQUIRE(word_ideal(g, {}).generator() == Element::top(a));
    REQUIRE(word_ideal(g, parse_word(sys, "e")).generator() == Element::atom(a, "w"));
    REQUIRE(is_empty(word_ideal(g, parse_word(sys, "ee")).generator()));
}

TEST_CASE("word ideal agrees with its definition on random systems") {
    std::mt19937_64 rng(77);
    for (int s = 0; s < 40; ++s) {
        auto g = fixtures::random_gbds(rng, 5, 3);
        const auto& sys = g.base;
        const std::uint64_t n = std::uint64_t{1} << sys.algebra.atom_count();
        std::uniform_int_distribution<int> len(1, 3);
        std::uniform_int_distribution<std::uint32_t> lab(0,
                                                         static_cast<std::uint32_t>(sys.labels.size() - 1));
        for (int it = 0; it < 10; ++it) {
            Word w;
            for (int k = len(rng); k > 0; --k) w.push_back(lab(rng));
            Ideal wi = word_ideal(g, w);
            // definition: A in I_w iff A <= theta_{w_2...w_n}(B) for some B in I_{w_1}
            const Word tail(w.begin() + 1, w.end());
            const std::uint64_t gen1 = g.ideal(w[0]).generator().bits();
            for (std::uint64_t abits = 0; abits < n; ++abits) {
                Element A = Element::from_bits(sys.algebra, abits);
                bool member = false;
                for (std::uint64_t b = gen1;; b = (b - 1) & gen1) {
                    Element img = apply_word(sys, tail, Element::from_bits(sys.algebra, b));
                    if (subseteq(A, img)) {
                        member = true;
                        break;
                    }
                    if (b == 0) break;
                }
                REQUIRE(ideal_contains(wi, A) == member);
            }
        }
    }
}

TEST_CASE("validate_system accepts SYS1 and rejects broken structures") {
    REQUIRE(validate_system(fixtures::sys1_ck()).ok);
    REQUIRE(validate_system(fixtures::sys1_toeplitz()).ok);

    // J = <{w}> is not inside B_reg = <{v}>
    auto g = make_generalized(fixtures::sys1_base());
    const Algebra& a = g.base.algebra;
    RelativeGBDS bad{g, Ideal::principal(Element::atom(a, "w"))};
    auto r = validate_system(bad);
    REQUIRE(!r.ok);
    REQUIRE(r.issues.front().find("regular") != std::string::npos);
    REQUIRE(r.witnesses.front() == Element::atom(a, "w"));
    REQUIRE_THROWS_AS(make_relative(g, Ideal::principal(Element::atom(a, "w"))),
                      InvalidSystemError);

    // I_e = <{v}> fails to contain R_e = <{w}>
    GeneralizedBDS badg{fixtures::sys1_base(), {Ideal::principal(Element::atom(a, "v"))}};
    auto r2 = validate_generalized(badg);
    REQUIRE(!r2.ok);
    REQUIRE(r2.witnesses.front() == Element::atom(a, "w"));
    REQUIRE_THROWS_AS(make_generalized(fixtures::sys1_base(),
                                       {Ideal::principal(Element::atom(a, "v"))}),
                      InvalidSystemError);
}

TEST_CASE("validate_action on dual maps and on a deliberately broken callable") {
    auto sys = fixtures::sys1_base();
    REQUIRE(validate_action_exhaustive(sys.action("e")).ok);

    std::mt19937_64 rng(3);
    for (int s = 0; s < 20; ++s) {
        auto r = fixtures::random_bds(rng);
        for (const auto& act : r.actions) REQUIRE(validate_action_exhaustive(act).ok);
    }

    // x |-> x gains an atom: not even theta(0) = 0
    Algebra a = Algebra::finite({"p", "q"});
    Action broken = Action::callable(a, [&a](const Element&) { return Element::atom(a, "p"); });
    auto chk = validate_action(broken, rng, 16);
    REQUIRE(!chk.ok);
    REQUIRE(chk.law == "theta(0)=0");

    // a homomorphism that misses difference: union with a constant
    Action skew = Action::callable(a, [&a](const Element& e) {
        return is_empty(e) ? e : unite(e, Element::atom(a, "p"));
    });
    auto chk2 = validate_action(skew, rng, 64);
    REQUIRE(!chk2.ok);
}

TEST_CASE("make_relative defaults J to B_reg") {
    auto rs = fixtures::sys1_ck();
    REQUIRE(rs.relative.generator() == Element::atom(rs.algebra(), "v"));
    auto iso = fixtures::isolated2_ck();
    REQUIRE(is_empty(iso.relative.generator()));
}

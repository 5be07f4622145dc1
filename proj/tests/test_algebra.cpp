#include "booldyn/algebra.hpp"

#include <catch_amalgamated.hpp>

#include <random>
#include <set>

using namespace booldyn;

namespace {

// Independent model of a fin_cofin element: its trace on {0..K-1}, for K
// beyond every support in play. The mode arithmetic must agree with plain
// set arithmetic on every such window.
std::set<std::uint32_t> window(const Element& e, std::uint32_t K) {
    const auto* v = e.fin_cofin();
    REQUIRE(v != nullptr);
    std::set<std::uint32_t> out;
    for (std::uint32_t i = 0; i < K; ++i) {
        bool in_support = std::binary_search(v->s.begin(), v->s.end(), i);
        if (v->cofinite ? !in_support : in_support) out.insert(i);
    }
    return out;
}

std::set<std::uint32_t> model_union(std::set<std::uint32_t> a, const std::set<std::uint32_t>& b) {
    a.insert(b.begin(), b.end());
    return a;
}
std::set<std::uint32_t> model_intersect(const std::set<std::uint32_t>& a,
                                        const std::set<std::uint32_t>& b) {
    std::set<std::uint32_t> out;
    for (auto x : a)
        if (b.count(x)) out.insert(x);
    return out;
}
std::set<std::uint32_t> model_difference(const std::set<std::uint32_t>& a,
                                         const std::set<std::uint32_t>& b) {
    std::set<std::uint32_t> out;
    for (auto x : a)
        if (!b.count(x)) out.insert(x);
    return out;
}

} // namespace

TEST_CASE("finite algebra construction and atoms") {
    Algebra a = Algebra::finite({"v", "w"});
    REQUIRE(a.atom_count() == 2);
    REQUIRE(a.atom_index("v") == 0);
    REQUIRE(a.atom_index("w") == 1);
    REQUIRE_THROWS_AS(Algebra::finite({"v", "v"}), DuplicateAtomError);
    REQUIRE_THROWS_AS(a.atom_index("z"), UnknownAtomError);
    REQUIRE_THROWS_AS(Algebra::finite(std::vector<std::string>(65, "x")), SizeLimitError);

    Element v = Element::atom(a, "v");
    Element w = Element::atom(a, "w");
    Element t = Element::top(a);
    REQUIRE(unite(v, w) == t);
    REQUIRE(is_empty(intersect(v, w)));
    REQUIRE(difference(t, v) == w);
    REQUIRE(subseteq(v, t));
    REQUIRE(!subseteq(t, v));
    REQUIRE(to_string(t) == "{v,w}");
    REQUIRE(to_string(Element::empty(a)) == "{}");
}

TEST_CASE("operations refuse mixed owners") {
    Algebra a = Algebra::finite({"v", "w"});
    Algebra b = Algebra::finite({"x"});
    REQUIRE_THROWS_AS(unite(Element::atom(a, "v"), Element::atom(b, "x")), AlgebraMismatchError);
    // structurally equal algebras are the same algebra
    Algebra a2 = Algebra::finite({"v", "w"});
    REQUIRE(a == a2);
    REQUIRE(unite(Element::atom(a, "v"), Element::atom(a2, "w")) == Element::top(a));
}

TEST_CASE("finite elements track std::set semantics") {
    Algebra a = Algebra::finite({"p", "q", "r", "s", "t"});
    std::mt19937_64 rng(41);
    for (int it = 0; it < 300; ++it) {
        Element x = random_element(a, rng), y = random_element(a, rng);
        auto as_set = [](const Element& e) {
            auto idx = e.atom_indices();
            return std::set<std::uint32_t>(idx.begin(), idx.end());
        };
        auto sx = as_set(x), sy = as_set(y);
        REQUIRE(as_set(unite(x, y)) == model_union(sx, sy));
        REQUIRE(as_set(intersect(x, y)) == model_intersect(sx, sy));
        REQUIRE(as_set(difference(x, y)) == model_difference(sx, sy));
        REQUIRE(subseteq(x, y) == (model_intersect(sx, sy) == sx));
    }
}

TEST_CASE("lattice laws hold on every backend") {
    std::vector<Algebra> algebras = {
        Algebra::finite({"p", "q", "r", "s"}), Algebra::fin_subsets(), Algebra::fin_cofin(),
        Algebra::product(Algebra::finite({"p", "q"}), Algebra::fin_cofin())};
    std::mt19937_64 rng(7);
    for (const auto& alg : algebras) {
        for (int it = 0; it < 200; ++it) {
            Element x = random_element(alg, rng);
            Element y = random_element(alg, rng);
            Element z = random_element(alg, rng);
            // distributivity both ways
            REQUIRE(intersect(x, unite(y, z)) == unite(intersect(x, y), intersect(x, z)));
            REQUIRE(unite(x, intersect(y, z)) == intersect(unite(x, y), unite(x, z)));
            // relative complement axioms
            REQUIRE(unite(intersect(x, y), difference(x, y)) == x);
            REQUIRE(is_empty(intersect(intersect(x, y), difference(x, y))));
            // partial order via intersection
            REQUIRE(subseteq(x, unite(x, y)));
            REQUIRE(subseteq(intersect(x, y), x));
        }
    }
}

TEST_CASE("fin_cofin mode arithmetic agrees with every truncation window") {
    Algebra a = Algebra::fin_cofin();
    std::mt19937_64 rng(11);
    for (int it = 0; it < 400; ++it) {
        Element x = random_element(a, rng), y = random_element(a, rng);
        for (std::uint32_t K : {25u, 40u}) { // supports live below 20
            REQUIRE(window(unite(x, y), K) == model_union(window(x, K), window(y, K)));
            REQUIRE(window(intersect(x, y), K) == model_intersect(window(x, K), window(y, K)));
            REQUIRE(window(difference(x, y), K) == model_difference(window(x, K), window(y, K)));
        }
    }
}

TEST_CASE("fin_cofin worked example") {
    Algebra a = Algebra::fin_cofin();
    // (IN \ {1}) \ {2,3} = IN \ {1,2,3}
    Element x = Element::cofinite_set(a, {1});
    Element y = Element::finite_set(a, {2, 3});
    REQUIRE(difference(x, y) == Element::cofinite_set(a, {1, 2, 3}));
    // complement within IN: IN \ (IN \ {1}) = {1}
    Element full = Element::top(a);
    REQUIRE(difference(full, x) == Element::finite_set(a, {1}));
    REQUIRE(to_string(x) == "co{1}");
}

TEST_CASE("principal ideals: contains, join, meet") {
    Algebra a = Algebra::finite({"p", "q", "r"});
    Ideal i = Ideal::principal(Element::atoms(a, {"p", "q"}));
    REQUIRE(ideal_contains(i, Element::atom(a, "p")));
    REQUIRE(ideal_contains(i, Element::empty(a)));
    REQUIRE(!ideal_contains(i, Element::top(a)));
    Ideal j = Ideal::principal(Element::atoms(a, {"q", "r"}));
    REQUIRE(ideal_join(i, j).generator() == Element::top(a));
    REQUIRE(ideal_meet(i, j).generator() == Element::atom(a, "q"));
}

TEST_CASE("predicate ideals answer membership but refuse generator questions") {
    Algebra a = Algebra::fin_subsets();
    Ideal fin = Ideal::predicate(a, [](const Element& e) { return e.fin_set() != nullptr; },
                                 "all finite subsets");
    REQUIRE(ideal_contains(fin, Element::finite_set(a, {3, 4})));
    REQUIRE_THROWS_AS(fin.generator(), UnsupportedIdealFormError);
    REQUIRE_THROWS_AS(ideal_join(fin, fin), UnsupportedIdealFormError);
}

TEST_CASE("product backend and the (0,IN) principal ideal") {
    Algebra prod = Algebra::product(Algebra::fin_subsets(), Algebra::fin_cofin());
    Element gen = Element::pair(prod, Element::finite_set(prod.left(), {}),
                                Element::top(prod.right()));
    Ideal i = Ideal::principal(gen);
    // (0, IN \ {5}) lies below (0, IN)
    Element e = Element::pair(prod, Element::finite_set(prod.left(), {}),
                              Element::cofinite_set(prod.right(), {5}));
    REQUIRE(ideal_contains(i, e));
    // ({1}, IN) does not: first coordinate escapes
    Element f = Element::pair(prod, Element::finite_set(prod.left(), {1}),
                              Element::top(prod.right()));
    REQUIRE(!ideal_contains(i, f));
    REQUIRE(to_string(e) == "({},co{5})");
}

TEST_CASE("element total order is consistent") {
    Algebra a = Algebra::fin_cofin();
    std::mt19937_64 rng(13);
    for (int it = 0; it < 100; ++it) {
        Element x = random_element(a, rng), y = random_element(a, rng);
        int c = compare(x, y);
        REQUIRE(c == -compare(y, x));
        REQUIRE((c == 0) == (x == y));
    }
}

#pragma once

#include "booldyn/system.hpp"

#include <map>
#include <random>
#include <string>

// Shared hand-built systems. All expected values in the tests that use these
// were derived by hand from the definitions before the implementation existed.
namespace fixtures {

using namespace booldyn;

// Two atoms v,w; one label e; dual map w |-> v, so theta_e({v}) = {w} and
// theta_e({w}) = 0. Same dynamics as the one-edge graph v -> w.
// Facts: Delta_{v} = {e}, Delta_{w} = 0, B_reg = <{v}>, R_e = <{w}>.
inline BooleanDynamicalSystem sys1_base() {
    Algebra a = Algebra::finite({"v", "w"});
    return make_system(a, {"e"},
                       {Action::dual_map(a, std::map<std::string, std::string>{{"w", "v"}})});
}

// J = B_reg: the non-relative (Cuntz-Krieger) structure; C* is M_2.
inline RelativeGBDS sys1_ck() { return make_relative(make_generalized(sys1_base())); }

// J = 0: the Toeplitz-like structure.
inline RelativeGBDS sys1_toeplitz() {
    GeneralizedBDS g = make_generalized(sys1_base());
    Ideal zero = Ideal::zero(g.base.algebra);
    return make_relative(std::move(g), std::move(zero));
}

// One atom with an identity loop: theta_e = id. C* is C(T).
inline BooleanDynamicalSystem loop_base() {
    Algebra a = Algebra::finite({"v"});
    return make_system(a, {"e"},
                       {Action::dual_map(a, std::map<std::string, std::string>{{"v", "v"}})});
}

inline RelativeGBDS loop_ck() { return make_relative(make_generalized(loop_base())); }

// Two atoms, one label, action empty everywhere: B_reg = 0.
inline BooleanDynamicalSystem isolated2_base() {
    Algebra a = Algebra::finite({"u", "w"});
    return make_system(a, {"e"}, {Action::dual_map(a, std::map<std::string, std::string>{})});
}

inline RelativeGBDS isolated2_ck() { return make_relative(make_generalized(isolated2_base())); }

// Three atoms x,y,z with theta_a({x}) = {y} and theta_b({y}) = {z}; words ab
// and ba act differently, pinning the application order.
inline BooleanDynamicalSystem chain_base() {
    Algebra a = Algebra::finite({"x", "y", "z"});
    return make_system(a, {"a", "b"},
                       {Action::dual_map(a, std::map<std::string, std::string>{{"y", "x"}}),
                        Action::dual_map(a, std::map<std::string, std::string>{{"z", "y"}})});
}

// --- deterministic random systems -------------------------------------------

// Random dual-map system: n atoms (named p,q,r,s,t,u), m single-char labels
// (a,b,c). Each atom maps to a uniform target or stays undefined.
inline BooleanDynamicalSystem random_bds(std::mt19937_64& rng, int max_atoms = 6,
                                         int max_labels = 3) {
    static const std::vector<std::string> atom_names = {"p", "q", "r", "s", "t", "u"};
    static const std::vector<std::string> label_names = {"a", "b", "c"};
    std::uniform_int_distribution<int> natoms(1, max_atoms), nlabels(1, max_labels);
    int n = natoms(rng), m = nlabels(rng);
    Algebra alg = Algebra::finite(std::vector<std::string>(atom_names.begin(), atom_names.begin() + n));
    std::vector<std::string> labels(label_names.begin(), label_names.begin() + m);
    std::vector<Action> actions;
    std::uniform_int_distribution<int> target(0, n); // n = undefined
    for (int l = 0; l < m; ++l) {
        std::vector<std::optional<std::uint32_t>> f(n);
        for (int x = 0; x < n; ++x) {
            int t = target(rng);
            if (t < n) f[x] = static_cast<std::uint32_t>(t);
        }
        actions.push_back(Action::dual_map(alg, std::move(f)));
    }
    return make_system(std::move(alg), std::move(labels), std::move(actions));
}

// Adds random principal range ideals I_alpha >= R_alpha.
inline GeneralizedBDS random_gbds(std::mt19937_64& rng, int max_atoms = 6, int max_labels = 3) {
    BooleanDynamicalSystem base = random_bds(rng, max_atoms, max_labels);
    std::uniform_int_distribution<std::uint64_t> extra(0, (std::uint64_t{1}
                                                           << base.algebra.atom_count()) -
                                                             1);
    std::vector<Ideal> ideals;
    for (std::uint32_t l = 0; l < base.labels.size(); ++l) {
        Element gen = unite(range_ideal(base, l).generator(),
                            Element::from_bits(base.algebra, extra(rng)));
        ideals.push_back(Ideal::principal(std::move(gen)));
    }
    return make_generalized(std::move(base), std::move(ideals));
}

// Adds a random relative ideal J <= B_reg.
inline RelativeGBDS random_rgbds(std::mt19937_64& rng, int max_atoms = 6, int max_labels = 3) {
    GeneralizedBDS g = random_gbds(rng, max_atoms, max_labels);
    Element reg = regular_ideal(g.base).generator();
    std::uniform_int_distribution<std::uint64_t> mask(0, ~std::uint64_t{0});
    Element j = Element::from_bits(g.base.algebra, reg.bits() & mask(rng));
    return make_relative(std::move(g), Ideal::principal(std::move(j)));
}

} // namespace fixtures

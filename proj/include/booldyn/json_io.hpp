#pragma once

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "algebra.hpp"
#include "constructions.hpp"
#include "errors.hpp"
#include "lattice.hpp"
#include "repcheck.hpp"
#include "system.hpp"

namespace booldyn::io {

using json = nlohmann::ordered_json;

namespace detail {

// Schema accessors. Structural problems (missing keys, wrong JSON types) are
// ParseErrors; name resolution and semantic validation stay with the modules.

inline const json& require(const json& j, const std::string& key, const std::string& where) {
    if (!j.is_object()) throw ParseError(where + " must be an object");
    auto it = j.find(key);
    if (it == j.end()) throw ParseError(where + " is missing \"" + key + "\"");
    return *it;
}

inline std::string as_string(const json& j, const std::string& where) {
    if (!j.is_string()) throw ParseError(where + " must be a string");
    return j.get<std::string>();
}

inline const json& as_array(const json& j, const std::string& where) {
    if (!j.is_array()) throw ParseError(where + " must be an array");
    return j;
}

inline const json& as_object(const json& j, const std::string& where) {
    if (!j.is_object()) throw ParseError(where + " must be an object");
    return j;
}

inline std::vector<std::string> string_list(const json& j, const std::string& where) {
    std::vector<std::string> out;
    for (const auto& v : as_array(j, where)) out.push_back(as_string(v, where + " entry"));
    return out;
}

inline booldyn::detail::U32Set nat_list(const json& j, const std::string& where) {
    booldyn::detail::U32Set out;
    for (const auto& v : as_array(j, where)) {
        if (!v.is_number_unsigned())
            throw ParseError(where + " entries must be non-negative integers");
        out.push_back(v.get<std::uint32_t>());
    }
    return out;
}

} // namespace detail

// --- algebras and elements -----------------------------------------------------------

inline json algebra_to_json(const Algebra& a) {
    switch (a.kind()) {
        case Backend::finite: return json{{"type", "finite"}, {"atoms", a.atom_labels()}};
        case Backend::fin_subsets: return json{{"type", "finsubsets"}};
        case Backend::fin_cofin: return json{{"type", "fincofin"}};
        case Backend::product:
            return json{{"type", "product"},
                        {"left", algebra_to_json(a.left())},
                        {"right", algebra_to_json(a.right())}};
    }
    throw InternalError("unreachable backend");
}

inline Algebra algebra_from_json(const json& j) {
    std::string type = detail::as_string(detail::require(j, "type", "algebra"), "algebra.type");
    if (type == "finite")
        return Algebra::finite(
            detail::string_list(detail::require(j, "atoms", "algebra"), "algebra.atoms"));
    if (type == "finsubsets") return Algebra::fin_subsets();
    if (type == "fincofin") return Algebra::fin_cofin();
    if (type == "product")
        return Algebra::product(algebra_from_json(detail::require(j, "left", "algebra")),
                                algebra_from_json(detail::require(j, "right", "algebra")));
    throw ParseError("unknown algebra type \"" + type + "\"");
}

inline json element_to_json(const Element& e) {
    switch (e.algebra().kind()) {
        case Backend::finite: return json(e.atom_label_list());
        case Backend::fin_subsets: return json(e.fin_set()->s);
        case Backend::fin_cofin: {
            const auto* v = e.fin_cofin();
            return json{{"mode", v->cofinite ? "cofinite" : "finite"}, {"set", v->s}};
        }
        case Backend::product:
            return json{{"first", element_to_json(e.first())},
                        {"second", element_to_json(e.second())}};
    }
    throw InternalError("unreachable backend");
}

inline Element element_from_json(const Algebra& a, const json& j, const std::string& where) {
    switch (a.kind()) {
        case Backend::finite: return Element::atoms(a, detail::string_list(j, where));
        case Backend::fin_subsets: return Element::finite_set(a, detail::nat_list(j, where));
        case Backend::fin_cofin: {
            std::string mode =
                detail::as_string(detail::require(j, "mode", where), where + ".mode");
            auto s = detail::nat_list(detail::require(j, "set", where), where + ".set");
            if (mode == "finite") return Element::finite_set(a, std::move(s));
            if (mode == "cofinite") return Element::cofinite_set(a, std::move(s));
            throw ParseError(where + ".mode must be \"finite\" or \"cofinite\"");
        }
        case Backend::product:
            return Element::pair(
                a,
                element_from_json(a.left(), detail::require(j, "first", where),
                                  where + ".first"),
                element_from_json(a.right(), detail::require(j, "second", where),
                                  where + ".second"));
    }
    throw InternalError("unreachable backend");
}

// --- systems --------------------------------------------------------------------------

// A loaded system file: either a plain finite-backend system or one of the
// named builtins (currently the two-ideal example, whose rule ideals have no
// generic serialization).
struct LoadedSystem {
    RelativeGBDS system;
    std::optional<RemarkExample> remark; // set when the file named the builtin
    bool is_remark() const { return remark.has_value(); }
};

inline json system_to_json(const RelativeGBDS& sys) {
    const BooleanDynamicalSystem& base = sys.base();
    const Algebra& alg = base.algebra;
    if (!alg.is_finite())
        throw UnsupportedBackendError("system files hold finite-backend systems only");

    json actions = json::object();
    for (std::uint32_t l = 0; l < base.labels.size(); ++l) {
        const Action& act = base.actions[l];
        if (!act.is_dual_map())
            throw UnsupportedBackendError("system files hold dual-map actions only");
        json dual = json::object();
        for (std::uint32_t x = 0; x < act.dual().size(); ++x)
            if (act.dual()[x]) dual[alg.atom_label(x)] = alg.atom_label(*act.dual()[x]);
        actions[base.labels[l]] = json{{"dual", std::move(dual)}};
    }

    json ideals = json::object();
    for (std::uint32_t l = 0; l < base.labels.size(); ++l)
        ideals[base.labels[l]] =
            json{{"principal", element_to_json(sys.g.ideal(l).generator())}};

    return json{{"algebra", algebra_to_json(alg)},
                {"labels", base.labels},
                {"actions", std::move(actions)},
                {"ideals", std::move(ideals)},
                {"relative", json{{"principal", element_to_json(sys.relative.generator())}}}};
}

inline LoadedSystem system_from_json(const json& j) {
    detail::as_object(j, "system file");

    if (j.contains("builtin")) {
        std::string name = detail::as_string(j.at("builtin"), "builtin");
        if (name != "remark-example")
            throw ParseError("unknown builtin \"" + name + "\"");
        std::string choice = "principal";
        if (j.contains("choice")) choice = detail::as_string(j.at("choice"), "choice");
        RemarkExample ex = remark_example();
        if (choice == "principal") return LoadedSystem{ex.principal_choice, std::move(ex)};
        if (choice == "range") return LoadedSystem{ex.range_choice, std::move(ex)};
        throw ParseError("builtin choice must be \"range\" or \"principal\"");
    }

    Algebra alg = algebra_from_json(detail::require(j, "algebra", "system file"));
    if (!alg.is_finite())
        throw UnsupportedBackendError(
            "only finite algebras load from system files; infinite backends are builtins");
    std::vector<std::string> labels =
        detail::string_list(detail::require(j, "labels", "system file"), "labels");

    const json& actions_j =
        detail::as_object(detail::require(j, "actions", "system file"), "actions");
    std::vector<Action> actions;
    for (const auto& label : labels) {
        auto it = actions_j.find(label);
        if (it == actions_j.end())
            throw ParseError("actions is missing label \"" + label + "\"");
        const json& dual_j =
            detail::as_object(detail::require(*it, "dual", "actions." + label),
                              "actions." + label + ".dual");
        std::map<std::string, std::string> image;
        for (const auto& [from, to] : dual_j.items())
            image[from] = detail::as_string(to, "actions." + label + ".dual." + from);
        actions.push_back(Action::dual_map(alg, image));
    }
    for (const auto& item : actions_j.items())
        if (std::find(labels.begin(), labels.end(), item.key()) == labels.end())
            throw UnknownLabelError("actions names \"" + item.key() +
                                    "\", not a declared label");

    BooleanDynamicalSystem base = make_system(alg, labels, std::move(actions));

    auto principal_ideal = [&](const json& spec, const std::string& where) {
        return Ideal::principal(element_from_json(
            alg, detail::require(spec, "principal", where), where + ".principal"));
    };

    std::vector<Ideal> ideals;
    if (j.contains("ideals")) {
        const json& ideals_j = detail::as_object(j.at("ideals"), "ideals");
        for (const auto& item : ideals_j.items())
            if (!base.has_label(item.key()))
                throw UnknownLabelError("ideals names \"" + item.key() +
                                        "\", not a declared label");
        for (std::uint32_t l = 0; l < base.labels.size(); ++l) {
            auto it = ideals_j.find(base.labels[l]);
            if (it == ideals_j.end())
                ideals.push_back(range_ideal(base, l));
            else
                ideals.push_back(principal_ideal(*it, "ideals." + base.labels[l]));
        }
    } else {
        for (std::uint32_t l = 0; l < base.labels.size(); ++l)
            ideals.push_back(range_ideal(base, l));
    }
    GeneralizedBDS g = make_generalized(std::move(base), std::move(ideals));

    if (j.contains("relative"))
        return LoadedSystem{
            make_relative(std::move(g), principal_ideal(j.at("relative"), "relative")),
            std::nullopt};
    return LoadedSystem{make_relative(std::move(g)), std::nullopt};
}

inline json remark_builtin_json() {
    return json{{"builtin", "remark-example"},
                {"choice", "principal"},
                {"description",
                 "one label a on FinSubsets(N) x FinCofin(N) with theta_a(A,B) = ({},A); "
                 "\"choice\" picks I_a: \"range\" for the rule ideal R_a = {({},B) : B "
                 "finite}, \"principal\" for <({},N)>"}};
}

// --- labelled graphs -------------------------------------------------------------------

inline LabelledGraph graph_from_json(const json& j) {
    LabelledGraph g;
    g.vertices =
        detail::string_list(detail::require(j, "vertices", "graph file"), "vertices");
    for (const auto& e : detail::as_array(detail::require(j, "edges", "graph file"), "edges")) {
        g.edges.push_back(
            LabelledGraph::Edge{detail::as_string(detail::require(e, "src", "edge"), "edge.src"),
                                detail::as_string(detail::require(e, "dst", "edge"), "edge.dst"),
                                detail::as_string(detail::require(e, "label", "edge"),
                                                  "edge.label")});
    }
    if (j.contains("alphabet")) g.alphabet = detail::string_list(j.at("alphabet"), "alphabet");
    return g;
}

// --- representations --------------------------------------------------------------------

namespace detail {

inline std::complex<double> entry_from_json(const json& j, const std::string& where) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return {j[0].get<double>(), j[1].get<double>()};
    throw ParseError(where + " entries must be numbers or [re,im] pairs");
}

inline Matrix matrix_from_json(const json& j, const std::string& where) {
    const json& rows = as_array(j, where);
    Eigen::Index nr = static_cast<Eigen::Index>(rows.size());
    Eigen::Index nc = nr == 0 ? 0 : static_cast<Eigen::Index>(as_array(rows[0], where).size());
    Matrix m(nr, nc);
    for (Eigen::Index r = 0; r < nr; ++r) {
        const json& row = as_array(rows[r], where);
        if (static_cast<Eigen::Index>(row.size()) != nc)
            throw ParseError(where + " rows have unequal lengths");
        for (Eigen::Index c = 0; c < nc; ++c) m(r, c) = entry_from_json(row[c], where);
    }
    return m;
}

inline json matrix_to_json(const Matrix& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            std::complex<double> z = m(r, c);
            if (z.imag() == 0.0)
                row.push_back(z.real());
            else
                row.push_back(json::array({z.real(), z.imag()}));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace detail

inline ConcreteRep rep_from_json(const RelativeGBDS& sys, const json& j) {
    const Algebra& alg = sys.algebra();
    if (!alg.is_finite())
        throw UnsupportedBackendError("representation files need a finite-backend system");
    ConcreteRep rep;
    const json& dim = detail::require(j, "dim", "rep file");
    if (!dim.is_number_unsigned()) throw ParseError("rep file dim must be a non-negative integer");
    rep.dim = dim.get<std::size_t>();

    for (const auto& [atom, m] :
         detail::as_object(detail::require(j, "P", "rep file"), "rep file P").items())
        rep.projections[alg.atom_index(atom)] = detail::matrix_from_json(m, "P." + atom);

    for (const auto& [key, m] :
         detail::as_object(detail::require(j, "S", "rep file"), "rep file S").items()) {
        auto bar = key.find('|');
        if (bar == std::string::npos)
            throw ParseError("S key \"" + key + "\" must look like \"label|atom\"");
        std::uint32_t label = sys.base().label_index(key.substr(0, bar));
        std::uint32_t atom = alg.atom_index(key.substr(bar + 1));
        rep.isometries[{label, atom}] = detail::matrix_from_json(m, "S." + key);
    }
    return rep;
}

inline json rep_report_to_json(const RepReport& report, const GiutReport& giut,
                               std::size_t dim) {
    json violations = json::array();
    for (const auto& v : report.violations)
        violations.push_back(json{
            {"relation", v.relation}, {"detail", v.detail}, {"residual", v.residual}});
    return json{{"ok", report.ok()},
                {"dim", dim},
                {"violations", std::move(violations)},
                {"uniqueness", json{{"atoms_nonzero", giut.atoms_nonzero},
                                    {"zero_atoms", giut.zero_atoms},
                                    {"defects_nonzero", giut.defects_nonzero},
                                    {"zero_defects", giut.zero_defects},
                                    {"gauge", giut.gauge_note}}}};
}

// --- pair lattices ------------------------------------------------------------------------

inline json lattice_to_json(const PairLattice& lat) {
    json pairs = json::array();
    for (const auto& p : lat.pairs)
        pairs.push_back(json{{"H", element_to_json(p.h)}, {"S", element_to_json(p.s)}});
    json order = json::array();
    for (std::size_t i = 0; i < lat.pairs.size(); ++i)
        for (std::size_t k = 0; k < lat.pairs.size(); ++k)
            if (i != k && lat.leq(i, k)) order.push_back(json::array({i, k}));
    return json{{"pairs", std::move(pairs)}, {"order", std::move(order)}};
}

// Hasse diagram: the transitive reduction of the (strict) pair order, exact.
inline std::string lattice_to_dot(const PairLattice& lat) {
    const std::size_t n = lat.pairs.size();
    auto strictly = [&](std::size_t i, std::size_t k) { return i != k && lat.leq(i, k); };
    std::string out = "digraph pairs {\n  rankdir=BT;\n";
    for (std::size_t i = 0; i < n; ++i)
        out += "  " + std::to_string(i) + " [label=\"H=" + to_string(lat.pairs[i].h) +
               " S=" + to_string(lat.pairs[i].s) + "\"];\n";
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            if (!strictly(i, k)) continue;
            bool covering = true;
            for (std::size_t m = 0; m < n && covering; ++m)
                if (strictly(i, m) && strictly(m, k)) covering = false;
            if (covering) out += "  " + std::to_string(i) + " -> " + std::to_string(k) + ";\n";
        }
    out += "}\n";
    return out;
}

inline std::string lattice_to_text(const PairLattice& lat) {
    std::string out;
    for (std::size_t i = 0; i < lat.pairs.size(); ++i)
        out += std::to_string(i) + ": H=" + to_string(lat.pairs[i].h) +
               " S=" + to_string(lat.pairs[i].s) + "\n";
    return out;
}

} // namespace booldyn::io

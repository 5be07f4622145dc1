#pragma once

#include <CLI11.hpp>

#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "booldyn/errors.hpp"
#include "booldyn/json_io.hpp"
#include "booldyn/lattice.hpp"
#include "booldyn/membership.hpp"
#include "booldyn/repcheck.hpp"
#include "booldyn/system.hpp"
#include "booldyn/terms.hpp"

namespace booldyn::cli {

namespace detail {

using io::json;

inline json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open \"" + path + "\"");
    try {
        return json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
}

inline io::LoadedSystem load_system(const std::string& path) {
    return io::system_from_json(load_json(path));
}

inline std::vector<std::string> split_csv(const std::string& text) {
    std::vector<std::string> out;
    if (text.empty()) return out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(item);
    return out;
}

inline void emit(std::ostream& out, const json& j) { out << j.dump(2) << "\n"; }

// --- inspect ----------------------------------------------------------------------

inline int cmd_inspect_remark(const RemarkExample& ex, const std::string& format,
                              std::ostream& out) {
    const bool in_principal = ex.principal_choice.g.ideal(0).contains(ex.witness);
    const bool in_range = ex.range_choice.g.ideal(0).contains(ex.witness);
    const std::string witness = to_string(ex.witness);
    if (format == "json") {
        emit(out, json{{"builtin", "remark-example"},
                       {"labels", {"a"}},
                       {"action", "theta_a(A,B) = ({},A)"},
                       {"regular_rule", ex.regular.description()},
                       {"range_rule", ex.range_choice.g.ideal(0).description()},
                       {"principal_generator", io::element_to_json(ex.witness)},
                       {"witness", witness},
                       {"witness_in_principal", in_principal},
                       {"witness_in_range", in_range},
                       {"range_strictly_contained", in_principal && !in_range}});
        return 0;
    }
    out << "builtin: two-ideal example on FinSubsets(N) x FinCofin(N)\n";
    out << "label a: theta_a(A,B) = ({},A)\n";
    out << "B_reg rule: " << ex.regular.description() << "\n";
    out << "J = B_reg\n";
    out << "I[a] choices: range rule " << ex.range_choice.g.ideal(0).description()
        << " | principal <" << witness << ">\n";
    out << "witness " << witness << ": in principal I[a] = " << (in_principal ? "yes" : "no")
        << ", in R[a] = " << (in_range ? "yes" : "no") << "\n";
    if (in_principal && !in_range)
        out << "R[a] strictly contained in principal I[a]\n";
    return 0;
}

inline int cmd_inspect(const std::string& file, const std::string& format, std::ostream& out) {
    io::LoadedSystem ls = load_system(file);
    if (ls.is_remark()) return cmd_inspect_remark(*ls.remark, format, out);

    const RelativeGBDS& sys = ls.system;
    const BooleanDynamicalSystem& base = sys.base();
    const Algebra& alg = base.algebra;
    SystemCheck check = validate_system(sys);

    if (format == "json") {
        json ideals = json::object();
        for (std::uint32_t l = 0; l < base.labels.size(); ++l) {
            Element range = range_ideal(base, l).generator();
            const Element& gen = sys.g.ideal(l).generator();
            ideals[base.labels[l]] = json{{"generator", io::element_to_json(gen)},
                                          {"range", io::element_to_json(range)},
                                          {"equals_range", gen == range}};
        }
        json sysj = io::system_to_json(sys);
        emit(out, json{{"atoms", alg.atom_labels()},
                       {"labels", base.labels},
                       {"actions", sysj.at("actions")},
                       {"ideals", std::move(ideals)},
                       {"regular", io::element_to_json(regular_ideal(base).generator())},
                       {"relative", io::element_to_json(sys.relative.generator())},
                       {"valid", check.ok},
                       {"issues", check.issues}});
        return 0;
    }

    out << "atoms: " << to_string(Element::top(alg)) << "\n";
    out << "labels:";
    for (const auto& l : base.labels) out << " " << l;
    out << "\n";
    for (std::uint32_t l = 0; l < base.labels.size(); ++l)
        for (std::uint32_t x = 0; x < alg.atom_count(); ++x) {
            Element img = base.actions[l](Element::atom(alg, x));
            if (!is_empty(img))
                out << "theta[" << base.labels[l] << "]{" << alg.atom_label(x)
                    << "} = " << to_string(img) << "\n";
        }
    for (std::uint32_t l = 0; l < base.labels.size(); ++l) {
        Element range = range_ideal(base, l).generator();
        const Element& gen = sys.g.ideal(l).generator();
        out << "I[" << base.labels[l] << "] = <" << to_string(gen) << ">";
        if (gen == range)
            out << " (= R[" << base.labels[l] << "])\n";
        else
            out << " (R[" << base.labels[l] << "] = <" << to_string(range) << ">)\n";
    }
    out << "B_reg = <" << to_string(regular_ideal(base).generator()) << ">\n";
    out << "J = <" << to_string(sys.relative.generator()) << ">\n";
    out << "valid: " << (check.ok ? "yes" : "no") << "\n";
    for (const auto& issue : check.issues) out << "issue: " << issue << "\n";
    return 0;
}

// --- lattice / quotient ------------------------------------------------------------

inline int cmd_lattice(const std::string& file, const std::string& format,
                       std::size_t max_atoms, std::ostream& out) {
    io::LoadedSystem ls = load_system(file);
    LatticeOptions opts;
    opts.max_atoms = max_atoms;
    PairLattice lat = admissible_pairs(ls.system, opts);
    if (format == "dot")
        out << io::lattice_to_dot(lat);
    else if (format == "text")
        out << io::lattice_to_text(lat);
    else
        emit(out, io::lattice_to_json(lat));
    return 0;
}

inline int cmd_quotient(const std::string& file, const std::optional<std::size_t>& pair_index,
                        const std::optional<std::string>& hereditary,
                        const std::optional<std::string>& s_gen, std::size_t max_atoms,
                        std::ostream& out) {
    if (pair_index.has_value() == hereditary.has_value())
        throw ParseError("quotient needs exactly one of --pair or --hereditary");
    io::LoadedSystem ls = load_system(file);
    const RelativeGBDS& sys = ls.system;

    AdmissiblePair pair = [&] {
        if (pair_index) {
            LatticeOptions opts;
            opts.max_atoms = max_atoms;
            PairLattice lat = admissible_pairs(sys, opts);
            if (*pair_index >= lat.pairs.size())
                throw InvalidPairError("pair index " + std::to_string(*pair_index) +
                                       " out of range; the lattice has " +
                                       std::to_string(lat.pairs.size()) + " pairs");
            return lat.pairs[*pair_index];
        }
        Element h = Element::atoms(sys.algebra(), split_csv(*hereditary));
        Element s = s_gen ? Element::atoms(sys.algebra(), split_csv(*s_gen))
                          : unite(h, sys.relative.generator());
        return make_admissible_pair(sys, Ideal::principal(h), Ideal::principal(s));
    }();

    emit(out, io::system_to_json(quotient_system(sys, pair)));
    return 0;
}

// --- tilde ------------------------------------------------------------------------

inline int cmd_tilde(const std::string& file, std::ostream& out) {
    io::LoadedSystem ls = load_system(file);
    const RelativeGBDS& sys = ls.system;
    const BooleanDynamicalSystem& base = sys.base();

    TildeResult t = tilde(sys);
    TildeIso iso = tilde_iso_generators(sys, t);
    const RelativeGBDS& tsys = iso.tilde_system();
    const Algebra& talg = tsys.algebra();

    json copies = json::object();
    for (std::uint32_t a = 0; a < t.original_count(); ++a)
        if (t.copy_atom[a])
            copies[base.algebra.atom_label(a)] = talg.atom_label(*t.copy_atom[a]);

    auto atom_term = [](std::uint32_t a) { return NormalTerm{{}, a, {}}; };
    auto iso_term = [](std::uint32_t l, std::uint32_t a) { return NormalTerm{{l}, a, {}}; };

    json phi = json::array();
    auto phi_row = [&](const NormalTerm& g) {
        phi.push_back(json{{"generator", to_string(base, g)},
                           {"image", to_string(tsys.base(), iso.phi(AlgElement::term(g)))}});
    };
    for (std::uint32_t a = 0; a < base.algebra.atom_count(); ++a) phi_row(atom_term(a));
    for (std::uint32_t l = 0; l < base.labels.size(); ++l)
        for (auto a : sys.g.ideal(l).generator().atom_indices()) phi_row(iso_term(l, a));

    json rho = json::array();
    auto rho_row = [&](const NormalTerm& g) {
        rho.push_back(json{{"generator", to_string(tsys.base(), g)},
                           {"image", to_string(base, iso.rho(AlgElement::term(g)))}});
    };
    for (std::uint32_t a = 0; a < talg.atom_count(); ++a) rho_row(atom_term(a));
    for (std::uint32_t l = 0; l < tsys.base().labels.size(); ++l)
        for (auto a : tsys.g.ideal(l).generator().atom_indices()) rho_row(iso_term(l, a));

    emit(out, json{{"system", io::system_to_json(tsys)},
                   {"copies", std::move(copies)},
                   {"iso", json{{"phi", std::move(phi)}, {"rho", std::move(rho)}}}});
    return 0;
}

// --- import / builtin emitters -------------------------------------------------------

inline int cmd_import_labelled(const std::string& file, std::ostream& out) {
    LabelledGraph g = io::graph_from_json(load_json(file));
    emit(out, io::system_to_json(make_relative(import_labelled_graph(g))));
    return 0;
}

inline int cmd_remark_example(std::ostream& out) {
    emit(out, io::remark_builtin_json());
    return 0;
}

// --- check-rep -----------------------------------------------------------------------

inline int cmd_check_rep(const std::string& file, const std::string& rep_file,
                         const std::string& format, std::ostream& out) {
    io::LoadedSystem ls = load_system(file);
    ConcreteRep rep = io::rep_from_json(ls.system, load_json(rep_file));
    RepReport report = validate_representation(ls.system, rep);
    GiutReport giut = check_giut(ls.system, rep);
    if (format == "json") {
        emit(out, io::rep_report_to_json(report, giut, rep.dim));
        return 0;
    }
    out << "ok: " << (report.ok() ? "yes" : "no") << "\n";
    out << "dim: " << rep.dim << "\n";
    out << "violations: " << report.violations.size() << "\n";
    for (const auto& v : report.violations)
        out << "violation " << v.relation << ": " << v.detail << " (residual " << v.residual
            << ")\n";
    out << "atoms nonzero: " << (giut.atoms_nonzero ? "yes" : "no");
    for (const auto& a : giut.zero_atoms) out << " " << a;
    out << "\n";
    out << "defects nonzero: " << (giut.defects_nonzero ? "yes" : "no");
    for (const auto& a : giut.zero_defects) out << " " << a;
    out << "\n";
    out << giut.gauge_note << "\n";
    return 0;
}

// --- eval -----------------------------------------------------------------------------

inline int cmd_eval(const std::string& file, const std::string& expr,
                    const std::optional<int>& depth, const std::optional<std::string>& rep_file,
                    const std::string& format, std::ostream& out) {
    io::LoadedSystem ls = load_system(file);
    const RelativeGBDS& sys = ls.system;
    AlgElement x = parse_alg_element(sys.g, expr);

    std::optional<std::string> nf;
    if (depth) nf = to_string(sys.base(), normal_form(sys, x, static_cast<std::size_t>(*depth)));

    std::optional<json> matrix;
    if (rep_file) {
        ConcreteRep rep = io::rep_from_json(sys, load_json(*rep_file));
        matrix = io::detail::matrix_to_json(evaluate(sys.g, rep, x));
    }

    if (format == "json") {
        json j{{"symbolic", to_string(sys.base(), x)}};
        if (nf) j["normal_form"] = *nf;
        if (matrix) j["matrix"] = *matrix;
        emit(out, j);
        return 0;
    }
    out << to_string(sys.base(), x) << "\n";
    if (nf) out << "normal form[" << *depth << "]: " << *nf << "\n";
    if (matrix) out << "rep value: " << matrix->dump() << "\n";
    return 0;
}

// --- export-dot -------------------------------------------------------------------------

inline int cmd_export_dot(const std::string& file, std::ostream& out) {
    io::LoadedSystem ls = load_system(file);
    const BooleanDynamicalSystem& base = ls.system.base();
    const Algebra& alg = base.algebra;
    if (!alg.is_finite())
        throw UnsupportedBackendError("export-dot needs a finite-backend system");
    out << "digraph system {\n";
    for (std::uint32_t x = 0; x < alg.atom_count(); ++x)
        out << "  \"" << alg.atom_label(x) << "\";\n";
    for (std::uint32_t l = 0; l < base.labels.size(); ++l) {
        const Action& act = base.actions[l];
        if (!act.is_dual_map())
            throw UnsupportedBackendError("export-dot needs dual-map actions");
        for (std::uint32_t x = 0; x < act.dual().size(); ++x)
            if (act.dual()[x])
                out << "  \"" << alg.atom_label(*act.dual()[x]) << "\" -> \""
                    << alg.atom_label(x) << "\" [label=\"" << base.labels[l] << "\"];\n";
    }
    out << "}\n";
    return 0;
}

} // namespace detail

inline int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"relative Boolean dynamical systems: lattices, quotients, the tilde "
                 "construction, term evaluation, and representation checking",
                 "booldyn"};
    app.require_subcommand(1);

    std::string in_file, rep_file, expr;
    std::string fmt_inspect = "text", fmt_lattice = "json", fmt_checkrep = "json",
                fmt_eval = "text";
    std::size_t lattice_max_atoms = 16, quotient_max_atoms = 16;
    std::optional<std::size_t> pair_index;
    std::optional<std::string> hereditary, s_gen, eval_rep;
    std::optional<int> depth;

    auto* c_inspect = app.add_subcommand("inspect", "summarize a system file");
    c_inspect->add_option("file", in_file, "system JSON file")->required();
    c_inspect->add_option("--format", fmt_inspect, "output format (default text)")
        ->check(CLI::IsMember({"text", "json"}));

    auto* c_lattice =
        app.add_subcommand("lattice", "enumerate the admissible pair lattice");
    c_lattice->add_option("file", in_file, "system JSON file")->required();
    c_lattice->add_option("--format", fmt_lattice, "output format (default json)")
        ->check(CLI::IsMember({"json", "dot", "text"}));
    c_lattice->add_option("--max-atoms", lattice_max_atoms,
                          "bound on the atom count for exhaustive enumeration");

    auto* c_quotient =
        app.add_subcommand("quotient", "quotient a system by an admissible pair");
    c_quotient->add_option("file", in_file, "system JSON file")->required();
    c_quotient->add_option("--pair", pair_index, "pair index in the lattice ordering");
    c_quotient->add_option("--hereditary", hereditary,
                           "comma-separated atoms generating H (use \"\" for the zero ideal)");
    c_quotient->add_option("--s", s_gen,
                           "comma-separated atoms generating S (default: H join J)");
    c_quotient->add_option("--max-atoms", quotient_max_atoms,
                           "bound on the atom count for exhaustive enumeration");

    auto* c_tilde = app.add_subcommand(
        "tilde", "emit the absolute companion system and its iso generator table");
    c_tilde->add_option("file", in_file, "system JSON file")->required();

    auto* c_import =
        app.add_subcommand("import-labelled", "turn a labelled graph into a system");
    c_import->add_option("file", in_file, "graph JSON file")->required();

    auto* c_remark = app.add_subcommand(
        "remark-example", "emit the builtin two-ideal example as a system file");

    auto* c_checkrep =
        app.add_subcommand("check-rep", "validate a matrix representation of a system");
    c_checkrep->add_option("file", in_file, "system JSON file")->required();
    c_checkrep->add_option("--rep", rep_file, "representation JSON file")->required();
    c_checkrep->add_option("--format", fmt_checkrep, "output format (default json)")
        ->check(CLI::IsMember({"json", "text"}));

    auto* c_eval = app.add_subcommand("eval", "evaluate a term expression");
    c_eval->add_option("file", in_file, "system JSON file")->required();
    c_eval->add_option("expr", expr, "term expression, e.g. \"s[e;w]^ * s[e;w]\"")->required();
    c_eval->add_option("--depth", depth, "also print the normal form at this rewrite depth")
        ->check(CLI::NonNegativeNumber);
    c_eval->add_option("--rep", eval_rep, "also evaluate in this representation file");
    c_eval->add_option("--format", fmt_eval, "output format (default text)")
        ->check(CLI::IsMember({"text", "json"}));

    auto* c_dot =
        app.add_subcommand("export-dot", "emit the labelled graph of a system as DOT");
    c_dot->add_option("file", in_file, "system JSON file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? 0 : 2;
    }

    try {
        if (app.got_subcommand(c_inspect)) return detail::cmd_inspect(in_file, fmt_inspect, out);
        if (app.got_subcommand(c_lattice))
            return detail::cmd_lattice(in_file, fmt_lattice, lattice_max_atoms, out);
        if (app.got_subcommand(c_quotient))
            return detail::cmd_quotient(in_file, pair_index, hereditary, s_gen,
                                        quotient_max_atoms, out);
        if (app.got_subcommand(c_tilde)) return detail::cmd_tilde(in_file, out);
        if (app.got_subcommand(c_import)) return detail::cmd_import_labelled(in_file, out);
        if (app.got_subcommand(c_remark)) return detail::cmd_remark_example(out);
        if (app.got_subcommand(c_checkrep))
            return detail::cmd_check_rep(in_file, rep_file, fmt_checkrep, out);
        if (app.got_subcommand(c_eval))
            return detail::cmd_eval(in_file, expr, depth, eval_rep, fmt_eval, out);
        if (app.got_subcommand(c_dot)) return detail::cmd_export_dot(in_file, out);
        throw InternalError("no subcommand dispatched");
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const nlohmann::json::exception& e) {
        err << "error: ParseError: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace booldyn::cli

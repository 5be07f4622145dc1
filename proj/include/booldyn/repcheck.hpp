#pragma once

#include "booldyn/constructions.hpp"
#include "booldyn/membership.hpp"
#include "booldyn/terms.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace booldyn {

using Matrix = Eigen::MatrixXcd;

// A finite-dimensional matrix family indexed by the atoms: P over every atom,
// S over the pairs (label, atom of gen I_label). Values over composite sets
// are synthesized additively and the laws are then re-checked, not assumed.
struct ConcreteRep {
    std::size_t dim = 0;
    std::map<std::uint32_t, Matrix> projections;
    std::map<std::pair<std::uint32_t, std::uint32_t>, Matrix> isometries;
    double tolerance = 1e-9;
};

// The same data with the families given as callables on whole elements, for
// backends whose elements are not finite unions of atoms.
struct FamilyRep {
    std::size_t dim = 0;
    std::function<Matrix(const Element&)> P;
    std::function<Matrix(std::uint32_t, const Element&)> S;
    double tolerance = 1e-9;
};

struct RepViolation {
    std::string relation; // projection | empty | meet | join | commutation |
                          // isometry-overlap | reconstruction
    std::string detail;
    double residual = 0.0;
};

struct RepReport {
    std::vector<RepViolation> violations;
    bool ok() const { return violations.empty(); }
};

namespace detail {

inline void require_square(const Matrix& m, std::size_t dim, const std::string& who) {
    if (m.rows() != static_cast<Eigen::Index>(dim) ||
        m.cols() != static_cast<Eigen::Index>(dim))
        throw ShapeError(who + " is " + std::to_string(m.rows()) + "x" +
                         std::to_string(m.cols()) + ", expected " + std::to_string(dim) +
                         "x" + std::to_string(dim));
}

// P over an arbitrary element, summed from the atom projections
inline Matrix rep_P(const ConcreteRep& r, const Element& a) {
    Matrix out = Matrix::Zero(r.dim, r.dim);
    for (auto x : a.atom_indices()) {
        auto it = r.projections.find(x);
        if (it == r.projections.end())
            throw ShapeError("no projection for atom " + a.algebra().atom_label(x));
        out += it->second;
    }
    return out;
}

// S over one label and an arbitrary element of I_label
inline Matrix rep_S(const ConcreteRep& r, std::uint32_t label, const Element& b) {
    Matrix out = Matrix::Zero(r.dim, r.dim);
    for (auto x : b.atom_indices()) {
        auto it = r.isometries.find({label, x});
        if (it == r.isometries.end())
            throw ShapeError("no isometry for (" + std::to_string(label) + ", " +
                             b.algebra().atom_label(x) + ")");
        out += it->second;
    }
    return out;
}

// S over a word: leading factors run along the images of gen I_{w_0}, the
// last factor carries the set itself.
inline Matrix rep_word(const GeneralizedBDS& g, const ConcreteRep& r, const Word& w,
                       const Element& a) {
    if (w.empty()) return rep_P(r, a);
    if (w.size() == 1) return rep_S(r, w[0], a);
    Element box = g.ideal(w[0]).generator();
    Matrix out = rep_S(r, w[0], box);
    for (std::size_t k = 1; k + 1 < w.size(); ++k) {
        box = g.base.action(w[k])(box);
        out = out * rep_S(r, w[k], box);
    }
    return out * rep_S(r, w.back(), a);
}

} // namespace detail

// pi(x) for the matrix family: (alpha, a, beta) |-> S_alpha P_a S_beta^*
inline Matrix evaluate(const GeneralizedBDS& g, const ConcreteRep& r, const AlgElement& x) {
    Matrix out = Matrix::Zero(r.dim, r.dim);
    for (const auto& [t, c] : x.terms()) {
        if (!is_valid_term(g, t))
            throw InvalidTermError("cannot evaluate " + to_string(g.base, t));
        Element a = Element::atom(g.base.algebra, t.atom);
        Matrix left = detail::rep_word(g, r, t.left, a);
        Matrix right = detail::rep_word(g, r, t.right, a);
        out += std::complex<double>(c.convert_to<double>(), 0.0) * left * right.adjoint();
    }
    return out;
}

// Checks the defining relations of a representation over every element of the
// (small) finite algebra: the Boolean-to-projection laws, the commutation law
// P_A S = S P_{theta(A)}, the overlap law S*S' = delta P, and reconstruction
// over everything inside the relative ideal.
inline RepReport validate_representation(const RelativeGBDS& sys, const ConcreteRep& r) {
    const Algebra& alg = sys.algebra();
    if (!alg.is_finite())
        throw UnsupportedBackendError("validate_representation needs the finite backend; "
                                      "use validate_family with explicit test sets");
    const std::uint32_t n = alg.atom_count();
    if (n > 8) throw SizeLimitError("exhaustive representation check limited to 8 atoms");
    if (r.dim == 0) throw ShapeError("representation dimension is zero");

    // shape first: exactly one projection per atom, one isometry per
    // (label, atom of gen I_label), all square of the declared dimension
    for (std::uint32_t x = 0; x < n; ++x) {
        auto it = r.projections.find(x);
        if (it == r.projections.end())
            throw ShapeError("no projection for atom " + alg.atom_label(x));
        detail::require_square(it->second, r.dim, "P[" + alg.atom_label(x) + "]");
    }
    if (r.projections.size() != n) throw ShapeError("projection for an unknown atom");
    std::size_t expected = 0;
    for (std::uint32_t l = 0; l < sys.base().labels.size(); ++l) {
        for (auto x : sys.g.ideal(l).generator().atom_indices()) {
            auto it = r.isometries.find({l, x});
            if (it == r.isometries.end())
                throw ShapeError("no isometry for (" + sys.base().labels[l] + ", " +
                                 alg.atom_label(x) + ")");
            detail::require_square(it->second,
                                   r.dim, "S[" + sys.base().labels[l] + ";" + alg.atom_label(x) + "]");
            ++expected;
        }
    }
    if (r.isometries.size() != expected)
        throw ShapeError("isometry outside the declared ideals");

    RepReport report;
    auto flag = [&](const char* relation, double residual, auto detail) {
        if (residual > r.tolerance)
            report.violations.push_back({relation, detail(), residual});
    };
    auto name = [&](std::uint64_t mask) { return to_string(Element::from_bits(alg, mask)); };

    const std::uint64_t full = n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
    std::vector<Matrix> P(full + 1);
    for (std::uint64_t m = 0; m <= full; ++m)
        P[m] = detail::rep_P(r, Element::from_bits(alg, m));

    for (std::uint32_t x = 0; x < n; ++x)
        flag("projection",
             (P[std::uint64_t{1} << x].adjoint() - P[std::uint64_t{1} << x]).norm(),
             [&] { return "P[" + alg.atom_label(x) + "] is not self-adjoint"; });
    flag("empty", P[0].norm(), [] { return std::string("P over the least element is not zero"); });
    for (std::uint64_t a = 0; a <= full; ++a)
        for (std::uint64_t b = a; b <= full; ++b) {
            flag("meet", (P[a] * P[b] - P[a & b]).norm(), [&] {
                return "P[" + name(a) + "] P[" + name(b) + "] != P of the intersection";
            });
            flag("join", (P[a] + P[b] - P[a & b] - P[a | b]).norm(), [&] {
                return "P[" + name(a) + "] + P[" + name(b) + "] - P[meet] != P of the union";
            });
        }

    for (std::uint32_t l = 0; l < sys.base().labels.size(); ++l) {
        const std::uint64_t gi = sys.g.ideal(l).generator().bits();
        for (std::uint64_t b = gi;; b = (b - 1) & gi) {
            Matrix S = detail::rep_S(r, l, Element::from_bits(alg, b));
            for (std::uint64_t a = 0; a <= full; ++a) {
                std::uint64_t image = sys.base().action(l)(Element::from_bits(alg, a)).bits();
                flag("commutation", (P[a] * S - S * P[image]).norm(), [&] {
                    return "P[" + name(a) + "] S[" + sys.base().labels[l] + ";" + name(b) +
                           "] != S P[theta(A)]";
                });
            }
            if (b == 0) break;
        }
    }

    for (std::uint32_t l = 0; l < sys.base().labels.size(); ++l)
        for (std::uint32_t l2 = 0; l2 < sys.base().labels.size(); ++l2) {
            const std::uint64_t gi = sys.g.ideal(l).generator().bits();
            const std::uint64_t gi2 = sys.g.ideal(l2).generator().bits();
            for (std::uint64_t b = gi;; b = (b - 1) & gi) {
                Matrix S = detail::rep_S(r, l, Element::from_bits(alg, b));
                for (std::uint64_t b2 = gi2;; b2 = (b2 - 1) & gi2) {
                    Matrix S2 = detail::rep_S(r, l2, Element::from_bits(alg, b2));
                    Matrix rhs = l == l2 ? P[b & b2] : Matrix(Matrix::Zero(r.dim, r.dim));
                    flag("isometry-overlap", (S.adjoint() * S2 - rhs).norm(), [&] {
                        return "S[" + sys.base().labels[l] + ";" + name(b) + "]^ S[" +
                               sys.base().labels[l2] + ";" + name(b2) + "] mismatch";
                    });
                    if (b2 == 0) break;
                }
                if (b == 0) break;
            }
        }

    const std::uint64_t gj = sys.relative.generator().bits();
    for (std::uint64_t a = gj;; a = (a - 1) & gj) {
        Element e = Element::from_bits(alg, a);
        Matrix sum = Matrix::Zero(r.dim, r.dim);
        for (auto gamma : delta(sys.base(), e)) {
            Matrix S = detail::rep_S(r, gamma, sys.base().action(gamma)(e));
            sum += S * S.adjoint();
        }
        flag("reconstruction", (P[a] - sum).norm(), [&] {
            return "P[" + name(a) + "] != sum of S S^ over its outgoing labels";
        });
        if (a == 0) break;
    }

    return report;
}

// The same relations for a callable family, checked over caller-supplied
// finite element sets: `projection_tests` for the Boolean laws, one list per
// label of elements of I_label for the isometry laws.
inline RepReport validate_family(const RelativeGBDS& sys, const FamilyRep& rep,
                                 const std::vector<Element>& projection_tests,
                                 const std::vector<std::vector<Element>>& isometry_tests) {
    if (rep.dim == 0) throw ShapeError("representation dimension is zero");
    if (isometry_tests.size() != sys.base().labels.size())
        throw ShapeError("one isometry test list per label expected");
    for (std::uint32_t l = 0; l < isometry_tests.size(); ++l)
        for (const Element& b : isometry_tests[l])
            if (!sys.g.ideal(l).contains(b))
                throw ShapeError("isometry test element outside I_" + sys.base().labels[l] +
                                 ": " + to_string(b));

    RepReport report;
    auto flag = [&](const char* relation, double residual, auto detail) {
        if (residual > rep.tolerance)
            report.violations.push_back({relation, detail(), residual});
    };
    auto P = [&](const Element& e) {
        Matrix m = rep.P(e);
        if (m.rows() != static_cast<Eigen::Index>(rep.dim) ||
            m.cols() != static_cast<Eigen::Index>(rep.dim))
            detail::require_square(m, rep.dim, "P[" + to_string(e) + "]");
        return m;
    };
    auto S = [&](std::uint32_t l, const Element& e) {
        Matrix m = rep.S(l, e);
        if (m.rows() != static_cast<Eigen::Index>(rep.dim) ||
            m.cols() != static_cast<Eigen::Index>(rep.dim))
            detail::require_square(m, rep.dim,
                                   "S[" + sys.base().labels[l] + ";" + to_string(e) + "]");
        return m;
    };

    flag("empty", P(Element::empty(sys.algebra())).norm(),
         [] { return std::string("P over the least element is not zero"); });
    for (const Element& a : projection_tests) {
        flag("projection", (P(a).adjoint() - P(a)).norm(),
             [&] { return "P[" + to_string(a) + "] is not self-adjoint"; });
        for (const Element& b : projection_tests) {
            flag("meet", (P(a) * P(b) - P(intersect(a, b))).norm(), [&] {
                return "P[" + to_string(a) + "] P[" + to_string(b) +
                       "] != P of the intersection";
            });
            flag("join", (P(a) + P(b) - P(intersect(a, b)) - P(unite(a, b))).norm(), [&] {
                return "P[" + to_string(a) + "] + P[" + to_string(b) +
                       "] - P[meet] != P of the union";
            });
        }
    }

    for (std::uint32_t l = 0; l < isometry_tests.size(); ++l)
        for (const Element& b : isometry_tests[l]) {
            Matrix Sb = S(l, b);
            for (const Element& a : projection_tests)
                flag("commutation", (P(a) * Sb - Sb * P(sys.base().action(l)(a))).norm(), [&] {
                    return "P[" + to_string(a) + "] S[" + sys.base().labels[l] + ";" +
                           to_string(b) + "] != S P[theta(A)]";
                });
        }

    for (std::uint32_t l = 0; l < isometry_tests.size(); ++l)
        for (const Element& b : isometry_tests[l])
            for (std::uint32_t l2 = 0; l2 < isometry_tests.size(); ++l2)
                for (const Element& b2 : isometry_tests[l2]) {
                    Matrix rhs = l == l2 ? P(intersect(b, b2))
                                         : Matrix(Matrix::Zero(rep.dim, rep.dim));
                    flag("isometry-overlap", (S(l, b).adjoint() * S(l2, b2) - rhs).norm(), [&] {
                        return "S[" + sys.base().labels[l] + ";" + to_string(b) + "]^ S[" +
                               sys.base().labels[l2] + ";" + to_string(b2) + "] mismatch";
                    });
                }

    for (const Element& a : projection_tests) {
        if (!sys.relative.contains(a)) continue;
        Matrix sum = Matrix::Zero(rep.dim, rep.dim);
        for (auto gamma : delta(sys.base(), a)) {
            Matrix Sg = S(gamma, sys.base().action(gamma)(a));
            sum += Sg * Sg.adjoint();
        }
        flag("reconstruction", (P(a) - sum).norm(), [&] {
            return "P[" + to_string(a) + "] != sum of S S^ over its outgoing labels";
        });
    }

    return report;
}

// --- faithfulness hypotheses ---------------------------------------------------------
//
// Two of the three uniqueness hypotheses are decidable for a concrete matrix
// family: every atom projection is nonzero, and the defect of every atom that
// is regular but outside the relative ideal is nonzero. The third (existence
// of a compatible circle action) is not a property of a single family, so it
// is reported as out of scope rather than guessed.

struct GiutReport {
    bool atoms_nonzero = true;
    std::vector<std::string> zero_atoms;
    bool defects_nonzero = true;
    std::vector<std::string> zero_defects;
    std::string gauge_note;
    bool checked_ok() const { return atoms_nonzero && defects_nonzero; }
};

inline GiutReport check_giut(const RelativeGBDS& sys, const ConcreteRep& r) {
    const Algebra& alg = sys.algebra();
    GiutReport out;
    out.gauge_note =
        "gauge action: not checked - the existence of a compatible circle action is a "
        "property of the ambient algebra, not of one matrix family; use the grading of "
        "the word calculus instead";
    for (std::uint32_t x = 0; x < alg.atom_count(); ++x)
        if (detail::rep_P(r, Element::atom(alg, x)).norm() <= r.tolerance) {
            out.atoms_nonzero = false;
            out.zero_atoms.push_back(alg.atom_label(x));
        }
    const std::uint64_t pending =
        regular_ideal(sys.base()).generator().bits() & ~sys.relative.generator().bits();
    for (std::uint32_t x = 0; x < alg.atom_count(); ++x)
        if ((pending >> x) & 1) {
            if (evaluate(sys.g, r, absolute_defect(sys, x)).norm() <= r.tolerance) {
                out.defects_nonzero = false;
                out.zero_defects.push_back(alg.atom_label(x));
            }
        }
    return out;
}

// Equality with a matrix witness: a zero bounded-depth normal form still means
// Equal; a validated family evaluating the difference away from zero upgrades
// the fallback from Inconclusive to Distinct.
inline EqVerdict eq_modulo_ck(const RelativeGBDS& sys, const ConcreteRep& r,
                              const AlgElement& x, const AlgElement& y, std::size_t depth) {
    if (normal_form(sys, x - y, depth).is_zero()) return EqVerdict::Equal;
    if (evaluate(sys.g, r, x - y).norm() > r.tolerance) return EqVerdict::Distinct;
    return EqVerdict::Inconclusive;
}

inline EqVerdict eq_modulo_ck(const RelativeGBDS& sys, const ConcreteRep& r,
                              const AlgElement& x, const AlgElement& y) {
    return eq_modulo_ck(sys, r, x, y,
                        std::max(max_word_length(x), max_word_length(y)) + 1);
}

// --- the truncated family for the two-ideal example ----------------------------------
//
// Functions on {0,...,points-1, infinity} stand in for the one-point
// compactification; a pair (A,B) becomes the diagonal matrix (1_A, 1_B) over
// the two blocks and (0,C) the upper-right block 1_C. Exact on every set that
// stays below the truncation.

struct RemarkTruncation {
    std::size_t points = 0; // finite points kept; dim = 2 * (points + 1)
    FamilyRep rep;
    std::vector<Element> projection_tests;
    std::vector<Element> range_isometry_tests;     // (0, C finite): inside R_a
    std::vector<Element> principal_isometry_tests; // adds (0, N) itself
};

namespace detail {

inline Eigen::VectorXd remark_chi(const Element& slot, std::size_t points) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(points + 1);
    auto member = [&](std::uint32_t i, const U32Set& s) {
        return std::binary_search(s.begin(), s.end(), i);
    };
    if (const auto* fs = slot.fin_set()) {
        for (std::size_t i = 0; i < points; ++i)
            v[i] = member(static_cast<std::uint32_t>(i), fs->s) ? 1.0 : 0.0;
        v[points] = 0.0; // finite sets vanish at infinity
    } else if (const auto* fc = slot.fin_cofin()) {
        for (std::size_t i = 0; i < points; ++i) {
            bool in = member(static_cast<std::uint32_t>(i), fc->s);
            v[i] = (fc->cofinite ? !in : in) ? 1.0 : 0.0;
        }
        v[points] = fc->cofinite ? 1.0 : 0.0;
    } else {
        throw ShapeError("expected a set-valued coordinate");
    }
    return v;
}

} // namespace detail

inline RemarkTruncation remark_truncation(const RemarkExample& ex, std::size_t points = 8,
                                          std::uint32_t bound = 2) {
    const Algebra alg = ex.range_choice.algebra();
    const std::size_t dim = 2 * (points + 1);

    RemarkTruncation out;
    out.points = points;
    out.rep.dim = dim;
    out.rep.P = [points, dim](const Element& e) {
        Matrix m = Matrix::Zero(dim, dim);
        Eigen::VectorXd a = detail::remark_chi(e.first(), points);
        Eigen::VectorXd b = detail::remark_chi(e.second(), points);
        for (std::size_t i = 0; i <= points; ++i) {
            m(i, i) = a[i];
            m(points + 1 + i, points + 1 + i) = b[i];
        }
        return m;
    };
    out.rep.S = [points, dim](std::uint32_t, const Element& e) {
        if (!is_empty(e.first()))
            throw ShapeError("isometry index must have an empty first slot");
        Matrix m = Matrix::Zero(dim, dim);
        Eigen::VectorXd c = detail::remark_chi(e.second(), points);
        for (std::size_t i = 0; i <= points; ++i) m(i, points + 1 + i) = c[i];
        return m;
    };

    // every (A,B) with both slots drawn from subsets of {0..bound}, the right
    // slot in both its finite and cofinite guises
    std::vector<detail::U32Set> smalls;
    for (std::uint32_t mask = 0; mask < (1u << (bound + 1)); ++mask) {
        detail::U32Set s;
        for (std::uint32_t i = 0; i <= bound; ++i)
            if ((mask >> i) & 1) s.push_back(i);
        smalls.push_back(std::move(s));
    }
    for (const auto& a : smalls) {
        for (const auto& b : smalls) {
            out.projection_tests.push_back(
                Element::pair(alg, Element::finite_set(alg.left(), a),
                              Element::finite_set(alg.right(), b)));
            out.projection_tests.push_back(
                Element::pair(alg, Element::finite_set(alg.left(), a),
                              Element::cofinite_set(alg.right(), b)));
        }
    }
    for (const auto& c : smalls)
        out.range_isometry_tests.push_back(
            Element::pair(alg, Element::empty(alg.left()),
                          Element::finite_set(alg.right(), c)));
    out.principal_isometry_tests = out.range_isometry_tests;
    out.principal_isometry_tests.push_back(ex.witness);
    return out;
}

} // namespace booldyn

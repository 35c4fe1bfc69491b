#pragma once

#include "incmeter/core/database.hpp"
#include "incmeter/dsl/ast.hpp"
#include "incmeter/grounder/grounder.hpp"
#include "incmeter/transversal/transversal.hpp"

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

namespace incmeter {

using AtomId = std::uint32_t;

/// A disjunction of negated atoms, stored as the sorted atom list.
using Clause = std::vector<AtomId>;

/// g(c): a conjunction of negative clauses. Canonical: clauses sorted, no duplicates,
/// no clause contained in another. `sources` lists the constraints (by position in
/// the originating constraint set) that map to this formula.
struct ConstraintFormula {
    std::vector<std::size_t> sources;
    std::vector<Clause> clauses;

    friend bool operator==(const ConstraintFormula&, const ConstraintFormula&) = default;
};

struct AtomInfo {
    std::string relation;
    std::vector<Value> values;
    std::string label;

    friend bool operator==(const AtomInfo&, const AtomInfo&) = default;
};

/// Element of K: atoms are 0..n-1, formulas n..n+m-1.
using KbElement = std::uint32_t;
using KbSubset = std::vector<KbElement>;

/// K_DB: one atom per tuple (same index as the TupleId), plus the defined g(c), with
/// constraints that produce equal formulas sharing one member.
class PropKB {
public:
    std::vector<AtomInfo> atoms;
    std::vector<ConstraintFormula> formulas;
    std::vector<std::string> constraint_names;
    std::vector<std::optional<std::size_t>> g; // per constraint: formula index, or undefined

    std::size_t atom_count() const { return atoms.size(); }
    std::size_t formula_count() const { return formulas.size(); }
    /// |K|
    std::size_t size() const { return atoms.size() + formulas.size(); }

    KbElement formula_element(std::size_t f) const { return static_cast<KbElement>(atoms.size() + f); }
    bool is_atom(KbElement e) const { return e < atoms.size(); }

    std::vector<KbElement> elements() const {
        std::vector<KbElement> out(size());
        for (KbElement i = 0; i < out.size(); ++i) out[i] = i;
        return out;
    }

    /// Any formula makes K inconsistent: all atoms of its clauses are members of K.
    bool consistent() const { return formulas.empty(); }

    std::string atom_name(AtomId a) const { return "a" + std::to_string(a + 1); }

    std::string formula_name(std::size_t f) const {
        std::string out = "g(";
        for (std::size_t i = 0; i < formulas[f].sources.size(); ++i) {
            if (i) out += ",";
            out += constraint_names[formulas[f].sources[i]];
        }
        return out + ")";
    }

    /// `(!a1 | !a3) & (!a2 | !a3)`
    std::string formula_text(std::size_t f) const {
        const auto& cl = formulas[f].clauses;
        std::string out;
        for (std::size_t i = 0; i < cl.size(); ++i) {
            if (i) out += " & ";
            std::string c;
            for (std::size_t j = 0; j < cl[i].size(); ++j) {
                if (j) c += " | ";
                c += "!" + atom_name(cl[i][j]);
            }
            out += (cl.size() > 1 && cl[i].size() > 1) ? "(" + c + ")" : c;
        }
        return out;
    }

    std::string element_name(KbElement e) const {
        return is_atom(e) ? atom_name(e) : formula_name(e - atoms.size());
    }

    friend bool operator==(const PropKB&, const PropKB&) = default;
};

namespace detail {

inline std::vector<Clause> canonical_clauses(const std::vector<TupleSet>& sets) {
    std::vector<Clause> raw;
    for (const auto& s : sets) {
        Clause c;
        for (TupleId t : s) c.push_back(t.index);
        raw.push_back(std::move(c));
    }
    return minimize_antichain(std::move(raw));
}

/// Merges formulas with equal clause sets, keeping the first position, and rebuilds g.
inline void normalize_formulas(PropKB& kb, std::vector<std::vector<Clause>> per_constraint) {
    kb.formulas.clear();
    kb.g.assign(per_constraint.size(), std::nullopt);
    for (std::size_t c = 0; c < per_constraint.size(); ++c) {
        if (per_constraint[c].empty()) continue;
        std::optional<std::size_t> hit;
        for (std::size_t f = 0; f < kb.formulas.size(); ++f)
            if (kb.formulas[f].clauses == per_constraint[c]) hit = f;
        if (!hit) {
            kb.formulas.push_back(ConstraintFormula{{}, std::move(per_constraint[c])});
            hit = kb.formulas.size() - 1;
        }
        kb.formulas[*hit].sources.push_back(c);
        kb.g[c] = hit;
    }
}

inline std::vector<std::vector<Clause>> clauses_per_constraint(const PropKB& kb) {
    std::vector<std::vector<Clause>> out(kb.g.size());
    for (std::size_t c = 0; c < kb.g.size(); ++c)
        if (kb.g[c]) out[c] = kb.formulas[*kb.g[c]].clauses;
    return out;
}

} // namespace detail

/// The transformation of a database with constraints into K_DB.
inline PropKB transform(const Database& db, const ConstraintSet& cs) {
    PropKB kb;
    for (TupleId t : db.ids()) {
        const auto& tup = db.tuple(t);
        kb.atoms.push_back(AtomInfo{db.schema().relation(tup.relation).name(), tup.values, db.label(t)});
    }
    std::vector<std::vector<Clause>> per;
    for (const auto& c : cs) {
        kb.constraint_names.push_back(c.name);
        per.push_back(detail::canonical_clauses(violation_sets(db, c)));
    }
    detail::normalize_formulas(kb, std::move(per));
    return kb;
}

/// MI(K): {F} together with the atoms of one clause of F, for every formula and clause.
inline std::vector<KbSubset> mi_of_kb(const PropKB& kb) {
    std::vector<KbSubset> out;
    for (std::size_t f = 0; f < kb.formulas.size(); ++f)
        for (const auto& clause : kb.formulas[f].clauses) {
            KbSubset s(clause.begin(), clause.end());
            s.push_back(kb.formula_element(f));
            std::sort(s.begin(), s.end());
            out.push_back(std::move(s));
        }
    std::sort(out.begin(), out.end());
    return out;
}

/// K without atom `a` and every clause mentioning it; atoms above `a` shift down by one.
inline PropKB delete_atom(const PropKB& kb, AtomId a) {
    if (a >= kb.atoms.size()) throw ValidationError("unknown atom " + std::to_string(a + 1));
    PropKB out;
    out.atoms = kb.atoms;
    out.atoms.erase(out.atoms.begin() + a);
    out.constraint_names = kb.constraint_names;
    auto per = detail::clauses_per_constraint(kb);
    for (auto& clauses : per) {
        std::vector<Clause> kept;
        for (auto& cl : clauses) {
            if (std::binary_search(cl.begin(), cl.end(), a)) continue;
            for (auto& x : cl)
                if (x > a) --x;
            kept.push_back(std::move(cl));
        }
        clauses = std::move(kept);
    }
    detail::normalize_formulas(out, std::move(per));
    // Relabel atoms by per-relation ordinal, as a fresh load would.
    std::map<std::string, std::size_t> ordinal;
    for (auto& info : out.atoms) info.label = info.relation + "#" + std::to_string(++ordinal[info.relation]);
    return out;
}

inline PropKB delete_tuple(const Database& db, const ConstraintSet& cs, TupleId t) {
    if (t.index >= db.size()) throw ValidationError("unknown tuple id " + std::to_string(t.index));
    return delete_atom(transform(db, cs), t.index);
}

/// Removing a constraint leaves K unchanged when g(c) is undefined or shared with another
/// constraint; otherwise g(c) leaves K.
inline PropKB delete_constraint(const PropKB& kb, const std::string& name) {
    auto it = std::find(kb.constraint_names.begin(), kb.constraint_names.end(), name);
    if (it == kb.constraint_names.end()) throw ValidationError("unknown constraint " + name);
    std::size_t c = static_cast<std::size_t>(it - kb.constraint_names.begin());
    PropKB out;
    out.atoms = kb.atoms;
    auto per = detail::clauses_per_constraint(kb);
    per.erase(per.begin() + static_cast<std::ptrdiff_t>(c));
    out.constraint_names = kb.constraint_names;
    out.constraint_names.erase(out.constraint_names.begin() + static_cast<std::ptrdiff_t>(c));
    detail::normalize_formulas(out, std::move(per));
    return out;
}

inline PropKB delete_constraint(const Database& db, const ConstraintSet& cs, const std::string& name) {
    return delete_constraint(transform(db, cs), name);
}

/// Transformation of the union: databases and constraint sets are merged first.
inline PropKB union_transform(const Database& db1, const ConstraintSet& cs1, const Database& db2,
                              const ConstraintSet& cs2) {
    if (!(db1.schema() == db2.schema())) throw ValidationError("databases have different schemas");
    return transform(db1.merged(db2), cs1.merged(cs2));
}

/// Same members, ignoring which constraints a formula came from.
inline bool same_knowledge_base(const PropKB& a, const PropKB& b) {
    if (a.atoms.size() != b.atoms.size()) return false;
    for (std::size_t i = 0; i < a.atoms.size(); ++i)
        if (a.atoms[i].relation != b.atoms[i].relation || a.atoms[i].values != b.atoms[i].values) return false;
    auto clauses = [](const PropKB& k) {
        std::vector<std::vector<Clause>> out;
        for (const auto& f : k.formulas) out.push_back(f.clauses);
        std::sort(out.begin(), out.end());
        return out;
    };
    return clauses(a) == clauses(b);
}

} // namespace incmeter

#pragma once

#include "incmeter/kb/kb.hpp"

#include <json.hpp>

#include <string>

namespace incmeter {

/// JSON form of K_DB. Atom ids are 1-based, matching the a1, a2, ... names:
///
///     {"atoms": [{"id": 1, "label": "MealTicket#1", "relation": "MealTicket",
///                 "kinds": ["int", ...], "values": ["1001", ...]}, ...],
///      "constraints": [{"name": "c1", "formula": 1}, {"name": "c2", "formula": null}, ...],
///      "formulas": [{"id": 1, "name": "g(c1)", "sources": ["c1"], "clauses": [[5]]}, ...]}
inline nlohmann::ordered_json kb_to_json(const PropKB& kb) {
    using nlohmann::ordered_json;
    ordered_json atoms = ordered_json::array();
    for (std::size_t i = 0; i < kb.atoms.size(); ++i) {
        const auto& a = kb.atoms[i];
        ordered_json kinds = ordered_json::array(), values = ordered_json::array();
        for (const auto& v : a.values) {
            kinds.push_back(std::string(kind_name(v.kind())));
            values.push_back(v.str());
        }
        atoms.push_back({{"id", i + 1}, {"label", a.label}, {"relation", a.relation}, {"kinds", kinds}, {"values", values}});
    }
    ordered_json constraints = ordered_json::array();
    for (std::size_t c = 0; c < kb.constraint_names.size(); ++c) {
        ordered_json f = nullptr;
        if (kb.g[c]) f = *kb.g[c] + 1;
        constraints.push_back({{"name", kb.constraint_names[c]}, {"formula", f}});
    }
    ordered_json formulas = ordered_json::array();
    for (std::size_t f = 0; f < kb.formulas.size(); ++f) {
        ordered_json sources = ordered_json::array(), clauses = ordered_json::array();
        for (auto s : kb.formulas[f].sources) sources.push_back(kb.constraint_names[s]);
        for (const auto& cl : kb.formulas[f].clauses) {
            ordered_json c = ordered_json::array();
            for (auto a : cl) c.push_back(a + 1);
            clauses.push_back(c);
        }
        formulas.push_back({{"id", f + 1}, {"name", kb.formula_name(f)}, {"sources", sources}, {"clauses", clauses}});
    }
    return {{"atoms", atoms}, {"constraints", constraints}, {"formulas", formulas}};
}

inline PropKB kb_from_json(const nlohmann::ordered_json& j) {
    try {
        PropKB kb;
        for (const auto& a : j.at("atoms")) {
            AtomInfo info;
            info.relation = a.at("relation").get<std::string>();
            info.label = a.at("label").get<std::string>();
            const auto& kinds = a.at("kinds");
            const auto& values = a.at("values");
            if (kinds.size() != values.size()) throw ValidationError("atom kinds and values differ in length");
            for (std::size_t i = 0; i < values.size(); ++i)
                info.values.push_back(Value::parse(values[i].get<std::string>(), parse_kind(kinds[i].get<std::string>())));
            kb.atoms.push_back(std::move(info));
        }
        for (const auto& c : j.at("constraints")) {
            kb.constraint_names.push_back(c.at("name").get<std::string>());
            const auto& f = c.at("formula");
            kb.g.push_back(f.is_null() ? std::nullopt : std::optional<std::size_t>(f.get<std::size_t>() - 1));
        }
        for (const auto& f : j.at("formulas")) {
            ConstraintFormula cf;
            for (const auto& s : f.at("sources")) {
                auto name = s.get<std::string>();
                auto it = std::find(kb.constraint_names.begin(), kb.constraint_names.end(), name);
                if (it == kb.constraint_names.end()) throw ValidationError("formula source " + name + " is not a constraint");
                cf.sources.push_back(static_cast<std::size_t>(it - kb.constraint_names.begin()));
            }
            for (const auto& cl : f.at("clauses")) {
                Clause c;
                for (const auto& a : cl) {
                    auto id = a.get<std::size_t>();
                    if (id == 0 || id > kb.atoms.size()) throw ValidationError("clause mentions unknown atom");
                    c.push_back(static_cast<AtomId>(id - 1));
                }
                cf.clauses.push_back(std::move(c));
            }
            kb.formulas.push_back(std::move(cf));
        }
        for (const auto& g : kb.g)
            if (g && *g >= kb.formulas.size()) throw ValidationError("constraint refers to unknown formula");
        return kb;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("malformed knowledge base JSON: ") + e.what());
    }
}

/// DIMACS CNF of the conjunction of K: a unit clause per atom, then the clauses of each
/// formula, preceded by `c formula <name>`. Variable i is atom a_i.
inline std::string kb_to_dimacs(const PropKB& kb) {
    std::size_t clauses = kb.atoms.size();
    for (const auto& f : kb.formulas) clauses += f.clauses.size();
    std::string out = "p cnf " + std::to_string(kb.atoms.size()) + " " + std::to_string(clauses) + "\n";
    for (std::size_t i = 0; i < kb.atoms.size(); ++i)
        out += "c atom " + std::to_string(i + 1) + " " + kb.atoms[i].label + "\n";
    for (std::size_t i = 0; i < kb.atoms.size(); ++i) out += std::to_string(i + 1) + " 0\n";
    for (std::size_t f = 0; f < kb.formulas.size(); ++f) {
        out += "c formula " + kb.formula_name(f) + "\n";
        for (const auto& cl : kb.formulas[f].clauses) {
            for (auto a : cl) out += "-" + std::to_string(a + 1) + " ";
            out += "0\n";
        }
    }
    return out;
}

} // namespace incmeter

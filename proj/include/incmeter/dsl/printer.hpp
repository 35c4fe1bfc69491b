#pragma once

#include "incmeter/dsl/ast.hpp"

#include <string>

namespace incmeter {

inline std::string print_term(const Term& t) {
    if (is_variable(t)) return as_variable(t).name;
    const Value& v = as_constant(t);
    if (v.kind() != Kind::text) return v.str();
    std::string out = "\"";
    for (char c : v.as_text()) {
        if (c == '"' || c == '\\') out += '\\';
        if (c == '\n') {
            out += "\\n";
            continue;
        }
        if (c == '\t') {
            out += "\\t";
            continue;
        }
        out += c;
    }
    return out + "\"";
}

inline std::string print_atom(const RelationAtom& a) {
    std::string out = a.relation + "(";
    for (std::size_t i = 0; i < a.args.size(); ++i) {
        if (i) out += ", ";
        out += print_term(a.args[i]);
    }
    return out + ")";
}

inline std::string print_comparison(const Comparison& c) {
    return print_term(c.left) + " " + std::string(op_symbol(c.op)) + " " + print_term(c.right);
}

inline std::string print_conjunction(const Conjunction& conj) {
    std::string out;
    for (std::size_t i = 0; i < conj.size(); ++i) {
        if (i) out += " & ";
        out += print_comparison(conj[i]);
    }
    return out;
}

/// `denial name: R(x, y), R(x, z) -> y = z`
inline std::string print_constraint(const DenialConstraint& c) {
    std::string out = "denial " + c.name + ": ";
    for (std::size_t i = 0; i < c.atoms.size(); ++i) {
        if (i) out += ", ";
        out += print_atom(c.atoms[i]);
    }
    out += " ->";
    for (std::size_t i = 0; i < c.phi.size(); ++i) {
        out += i ? " | " : " ";
        out += print_conjunction(c.phi[i]);
    }
    return out;
}

/// Disjunctive form: `name: !R(x, y) | !R(x, z) | y = z`.
inline std::string print_constraint_paper_form(const DenialConstraint& c) {
    std::string out = c.name + ":";
    bool first = true;
    auto sep = [&] {
        out += first ? " " : " | ";
        first = false;
    };
    for (const auto& a : c.atoms) {
        sep();
        out += "!" + print_atom(a);
    }
    for (const auto& conj : c.phi) {
        sep();
        out += conj.size() > 1 ? "(" + print_conjunction(conj) + ")" : print_conjunction(conj);
    }
    return out;
}

inline std::string pretty_print(const ConstraintSet& cs, bool paper_form = false) {
    std::string out;
    for (const auto& c : cs) out += (paper_form ? print_constraint_paper_form(c) : print_constraint(c)) + "\n";
    return out;
}

} // namespace incmeter

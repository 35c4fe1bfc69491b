#pragma once

#include "incmeter/core/error.hpp"
#include "incmeter/core/schema.hpp"
#include "incmeter/core/value.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace incmeter {

struct Variable {
    std::string name;

    friend bool operator==(const Variable&, const Variable&) = default;
    friend bool operator<(const Variable& a, const Variable& b) { return a.name < b.name; }
};

/// A variable or a constant.
using Term = std::variant<Variable, Value>;

inline bool is_variable(const Term& t) { return std::holds_alternative<Variable>(t); }
inline const Variable& as_variable(const Term& t) { return std::get<Variable>(t); }
inline const Value& as_constant(const Term& t) { return std::get<Value>(t); }

struct RelationAtom {
    std::string relation;
    std::vector<Term> args;

    friend bool operator==(const RelationAtom&, const RelationAtom&) = default;
};

struct Comparison {
    Term left;
    CmpOp op = CmpOp::eq;
    Term right;

    friend bool operator==(const Comparison&, const Comparison&) = default;
};

using Conjunction = std::vector<Comparison>;

/// forall bindings matching every atom, phi must hold. phi is a disjunction of
/// conjunctions; an empty phi is false, so any match is a violation.
struct DenialConstraint {
    std::string name;
    std::vector<RelationAtom> atoms;
    std::vector<Conjunction> phi;

    std::size_t arity() const { return atoms.size(); }

    friend bool operator==(const DenialConstraint&, const DenialConstraint&) = default;
};

class ConstraintSet {
public:
    ConstraintSet() = default;
    explicit ConstraintSet(std::vector<DenialConstraint> cs) {
        for (auto& c : cs) add(std::move(c));
    }

    void add(DenialConstraint c) {
        if (find(c.name)) throw ValidationError("constraint " + c.name + " declared twice");
        constraints_.push_back(std::move(c));
    }

    const std::vector<DenialConstraint>& constraints() const { return constraints_; }
    std::size_t size() const { return constraints_.size(); }
    bool empty() const { return constraints_.empty(); }
    const DenialConstraint& operator[](std::size_t i) const { return constraints_.at(i); }

    auto begin() const { return constraints_.begin(); }
    auto end() const { return constraints_.end(); }

    std::optional<std::size_t> index_of(const std::string& name) const {
        for (std::size_t i = 0; i < constraints_.size(); ++i)
            if (constraints_[i].name == name) return i;
        return std::nullopt;
    }

    const DenialConstraint* find(const std::string& name) const {
        auto i = index_of(name);
        return i ? &constraints_[*i] : nullptr;
    }

    ConstraintSet without(const std::string& name) const {
        if (!find(name)) throw ValidationError("unknown constraint " + name);
        ConstraintSet out;
        for (const auto& c : constraints_)
            if (c.name != name) out.constraints_.push_back(c);
        return out;
    }

    /// Union by name; a name present in both must denote the same constraint.
    ConstraintSet merged(const ConstraintSet& other) const {
        ConstraintSet out = *this;
        for (const auto& c : other.constraints_) {
            if (const auto* mine = out.find(c.name)) {
                if (!(*mine == c)) throw ValidationError("constraint " + c.name + " differs between the two sets");
                continue;
            }
            out.constraints_.push_back(c);
        }
        return out;
    }

    friend bool operator==(const ConstraintSet&, const ConstraintSet&) = default;

private:
    std::vector<DenialConstraint> constraints_;
};

/// Checks a constraint against a schema and returns it with integer constants widened
/// where a rational is expected. Throws ValidationError on unknown relations, arity
/// or kind mismatches, unbound variables and ill-typed comparisons.
inline DenialConstraint validate_constraint(DenialConstraint c, const Schema& schema) {
    auto fail = [&](const std::string& msg) { return ValidationError("constraint " + c.name + ": " + msg); };
    if (c.atoms.empty()) throw fail("needs at least one relation atom");

    std::map<std::string, Kind> var_kind;
    for (auto& atom : c.atoms) {
        auto rel = schema.index_of(atom.relation);
        if (!rel) throw fail("unknown relation " + atom.relation);
        const auto& scheme = schema.relation(*rel);
        if (atom.args.size() != scheme.arity())
            throw fail(atom.relation + " expects " + std::to_string(scheme.arity()) + " arguments, got " +
                       std::to_string(atom.args.size()));
        for (std::size_t i = 0; i < atom.args.size(); ++i) {
            Kind want = scheme.attribute(i).type;
            auto& arg = atom.args[i];
            if (is_variable(arg)) {
                auto [it, fresh] = var_kind.emplace(as_variable(arg).name, want);
                if (!fresh && it->second != want)
                    throw fail("variable " + it->first + " used as both " + std::string(kind_name(it->second)) +
                               " and " + std::string(kind_name(want)));
            } else {
                const Value& v = as_constant(arg);
                if (v.kind() == want) continue;
                if (v.kind() == Kind::integer && want == Kind::rational) {
                    arg = v.coerced_to(Kind::rational);
                    continue;
                }
                throw fail("constant " + v.str() + " does not fit attribute " + scheme.attribute(i).name + " of type " +
                           std::string(kind_name(want)));
            }
        }
    }

    auto kind_of = [&](const Term& t) -> Kind {
        if (!is_variable(t)) return as_constant(t).kind();
        auto it = var_kind.find(as_variable(t).name);
        if (it == var_kind.end()) throw fail("variable " + as_variable(t).name + " does not occur in any relation atom");
        return it->second;
    };
    for (auto& conj : c.phi) {
        if (conj.empty()) throw fail("empty conjunction in condition");
        for (auto& cmp : conj) {
            Kind l = kind_of(cmp.left), r = kind_of(cmp.right);
            if (l == r) continue;
            if (l == Kind::rational && r == Kind::integer && !is_variable(cmp.right)) {
                cmp.right = as_constant(cmp.right).coerced_to(Kind::rational);
                continue;
            }
            if (r == Kind::rational && l == Kind::integer && !is_variable(cmp.left)) {
                cmp.left = as_constant(cmp.left).coerced_to(Kind::rational);
                continue;
            }
            throw fail("cannot compare " + std::string(kind_name(l)) + " with " + std::string(kind_name(r)));
        }
    }
    return c;
}

inline ConstraintSet validate_constraints(const ConstraintSet& cs, const Schema& schema) {
    ConstraintSet out;
    for (const auto& c : cs) out.add(validate_constraint(c, schema));
    return out;
}

namespace detail {

inline std::vector<std::size_t> attribute_positions(const RelationScheme& scheme, const std::vector<std::string>& attrs) {
    std::vector<std::size_t> out;
    for (const auto& a : attrs) {
        auto p = scheme.position(a);
        if (!p) throw ValidationError("relation " + scheme.name() + " has no attribute " + a);
        out.push_back(*p);
    }
    return out;
}

/// k copies of R; lhs positions share the first copy's variables, every other position
/// gets a fresh variable. Variables are named x1, x2, ... in order of first use.
inline std::vector<RelationAtom> shared_atoms(const RelationScheme& scheme, const std::vector<std::size_t>& lhs,
                                              std::size_t copies) {
    std::set<std::size_t> shared(lhs.begin(), lhs.end());
    std::size_t counter = 0;
    auto fresh = [&] { return Term(Variable{"x" + std::to_string(++counter)}); };
    std::vector<RelationAtom> atoms;
    RelationAtom first{scheme.name(), {}};
    for (std::size_t i = 0; i < scheme.arity(); ++i) first.args.push_back(fresh());
    atoms.push_back(first);
    for (std::size_t k = 1; k < copies; ++k) {
        RelationAtom a{scheme.name(), {}};
        for (std::size_t i = 0; i < scheme.arity(); ++i) a.args.push_back(shared.count(i) ? first.args[i] : fresh());
        atoms.push_back(std::move(a));
    }
    return atoms;
}

} // namespace detail

/// X -> Y as the two-atom denial R(x, y, z) & R(x, u, w) -> y = u.
inline DenialConstraint desugar_fd(const std::string& name, const RelationScheme& scheme,
                                   const std::vector<std::string>& lhs, const std::string& rhs) {
    auto lpos = detail::attribute_positions(scheme, lhs);
    std::size_t y = detail::attribute_positions(scheme, {rhs}).front();
    DenialConstraint c{name, detail::shared_atoms(scheme, lpos, 2), {}};
    c.phi.push_back({Comparison{c.atoms[0].args[y], CmpOp::eq, c.atoms[1].args[y]}});
    return c;
}

/// X ->^k Y: among any k+1 tuples agreeing on X, two must agree on Y.
inline DenialConstraint desugar_nd(const std::string& name, const RelationScheme& scheme,
                                   const std::vector<std::string>& lhs, const std::string& rhs, std::size_t bound) {
    if (bound == 0) throw ValidationError("constraint " + name + ": numerical dependency bound must be at least 1");
    auto lpos = detail::attribute_positions(scheme, lhs);
    std::size_t y = detail::attribute_positions(scheme, {rhs}).front();
    DenialConstraint c{name, detail::shared_atoms(scheme, lpos, bound + 1), {}};
    for (std::size_t i = 0; i < c.atoms.size(); ++i)
        for (std::size_t j = i + 1; j < c.atoms.size(); ++j)
            c.phi.push_back({Comparison{c.atoms[i].args[y], CmpOp::eq, c.atoms[j].args[y]}});
    return c;
}

/// Variables of a constraint in order of first occurrence in its atoms.
inline std::vector<std::string> atom_variables(const DenialConstraint& c) {
    std::vector<std::string> out;
    std::set<std::string> seen;
    for (const auto& a : c.atoms)
        for (const auto& t : a.args)
            if (is_variable(t) && seen.insert(as_variable(t).name).second) out.push_back(as_variable(t).name);
    return out;
}

} // namespace incmeter

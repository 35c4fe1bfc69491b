#pragma once

#include "incmeter/core/database.hpp"
#include "incmeter/dsl/ast.hpp"
#include "incmeter/transversal/transversal.hpp"

#include <functional>
#include <map>
#include <set>
#include <unordered_map>
#include <vector>

namespace incmeter {

using TupleSet = std::vector<TupleId>;

struct GroundViolation {
    std::size_t constraint = 0;  // index into the constraint set
    std::vector<TupleId> binding;
    TupleSet tuple_set;

    friend bool operator==(const GroundViolation&, const GroundViolation&) = default;
};

/// MI(D): the minimal inconsistent tuple sets, with the constraints each one violates.
struct ConflictHypergraph {
    std::vector<TupleSet> edges;                     // lexicographic order
    std::vector<std::vector<std::size_t>> witnesses; // constraint indices, parallel to edges
};

struct TupleClassification {
    TupleSet problematic;
    TupleSet free;
    TupleSet contradictory;
};

namespace detail {

struct ValuesHash {
    std::size_t operator()(const std::vector<Value>& vs) const {
        std::size_t h = 0xcbf29ce484222325ULL;
        for (const auto& v : vs) h = (h ^ v.hash()) * 0x100000001b3ULL;
        return h;
    }
};

/// Backtracking join over a constraint's atoms. Positions whose value is known before an
/// atom is visited (constants and variables bound by earlier atoms) key a hash index, so
/// FD-style self joins touch only matching groups.
class ConstraintGrounder {
public:
    ConstraintGrounder(const Database& db, const DenialConstraint& c) : db_(db), c_(c) { compile(); }

    /// Calls `visit(binding)` for every violating binding; stops early if visit returns false.
    void run(const std::function<bool(const std::vector<TupleId>&)>& visit) {
        if (impossible_) return;
        assignment_.assign(var_count_, nullptr);
        binding_.assign(plans_.size(), TupleId{});
        visit_ = &visit;
        stopped_ = false;
        descend(0);
    }

private:
    struct Operand {
        bool is_var = false;
        std::size_t var = 0;
        Value constant;
    };
    struct Cmp {
        Operand left, right;
        CmpOp op;
    };
    struct Plan {
        std::size_t relation = 0;
        std::vector<std::size_t> key_positions;
        std::vector<Operand> key_sources;
        std::vector<std::pair<std::size_t, std::size_t>> binds;   // position, var
        std::vector<std::pair<std::size_t, std::size_t>> repeats; // position, var bound earlier in this atom
        std::unordered_map<std::vector<Value>, std::vector<TupleId>, ValuesHash> index;
        std::vector<std::size_t> ready_conjunctions;
    };

    void compile() {
        std::map<std::string, std::size_t> var_ids;
        std::vector<std::size_t> bound_at; // atom index binding each var
        for (std::size_t a = 0; a < c_.atoms.size(); ++a) {
            const auto& atom = c_.atoms[a];
            Plan p;
            auto rel = db_.schema().index_of(atom.relation);
            if (!rel) throw ValidationError("unknown relation " + atom.relation);
            p.relation = *rel;
            for (std::size_t i = 0; i < atom.args.size(); ++i) {
                const Term& t = atom.args[i];
                if (!is_variable(t)) {
                    p.key_positions.push_back(i);
                    p.key_sources.push_back(Operand{false, 0, as_constant(t)});
                    continue;
                }
                auto [it, fresh] = var_ids.emplace(as_variable(t).name, var_ids.size());
                if (fresh) {
                    bound_at.push_back(a);
                    p.binds.emplace_back(i, it->second);
                } else if (bound_at[it->second] < a) {
                    p.key_positions.push_back(i);
                    p.key_sources.push_back(Operand{true, it->second, {}});
                } else {
                    p.repeats.emplace_back(i, it->second);
                }
            }
            for (TupleId id : db_.ids_of(p.relation)) {
                std::vector<Value> key;
                key.reserve(p.key_positions.size());
                for (std::size_t pos : p.key_positions) key.push_back(db_.tuple(id).values[pos]);
                p.index[std::move(key)].push_back(id);
            }
            plans_.push_back(std::move(p));
        }
        var_count_ = var_ids.size();

        auto operand = [&](const Term& t, std::size_t& ready) {
            if (!is_variable(t)) return Operand{false, 0, as_constant(t)};
            auto it = var_ids.find(as_variable(t).name);
            if (it == var_ids.end()) throw ValidationError("unbound variable " + as_variable(t).name);
            ready = std::max(ready, bound_at[it->second]);
            return Operand{true, it->second, {}};
        };
        for (std::size_t k = 0; k < c_.phi.size(); ++k) {
            std::vector<Cmp> conj;
            std::size_t ready = 0;
            for (const auto& cmp : c_.phi[k]) conj.push_back(Cmp{operand(cmp.left, ready), operand(cmp.right, ready), cmp.op});
            // A conjunction of constants only is decided before any tuple is read.
            if (conj_holds_static(conj)) {
                impossible_ = true;
            }
            conjunctions_.push_back(std::move(conj));
            plans_[ready].ready_conjunctions.push_back(k);
        }
    }

    static bool conj_holds_static(const std::vector<Cmp>& conj) {
        for (const auto& c : conj)
            if (c.left.is_var || c.right.is_var) return false;
        for (const auto& c : conj)
            if (!compare(c.left.constant, c.right.constant, c.op)) return false;
        return true;
    }

    const Value& value_of(const Operand& o) const { return o.is_var ? *assignment_[o.var] : o.constant; }

    bool conj_holds(std::size_t k) const {
        for (const auto& c : conjunctions_[k])
            if (!compare(value_of(c.left), value_of(c.right), c.op)) return false;
        return true;
    }

    void descend(std::size_t depth) {
        if (stopped_) return;
        if (depth == plans_.size()) {
            if (!(*visit_)(binding_)) stopped_ = true;
            return;
        }
        Plan& p = plans_[depth];
        std::vector<Value> key;
        key.reserve(p.key_sources.size());
        for (const auto& s : p.key_sources) key.push_back(value_of(s));
        auto it = p.index.find(key);
        if (it == p.index.end()) return;
        for (TupleId id : it->second) {
            const auto& vals = db_.tuple(id).values;
            for (auto [pos, var] : p.binds) assignment_[var] = &vals[pos];
            bool ok = true;
            for (auto [pos, var] : p.repeats)
                if (!(vals[pos] == *assignment_[var])) {
                    ok = false;
                    break;
                }
            if (ok)
                for (std::size_t k : p.ready_conjunctions)
                    if (conj_holds(k)) {
                        ok = false; // phi holds whatever the remaining atoms bind
                        break;
                    }
            if (ok) {
                binding_[depth] = id;
                descend(depth + 1);
                if (stopped_) return;
            }
        }
        for (auto [pos, var] : p.binds) assignment_[var] = nullptr;
    }

    const Database& db_;
    const DenialConstraint& c_;
    std::vector<Plan> plans_;
    std::vector<std::vector<Cmp>> conjunctions_;
    std::size_t var_count_ = 0;
    bool impossible_ = false;

    std::vector<const Value*> assignment_;
    std::vector<TupleId> binding_;
    const std::function<bool(const std::vector<TupleId>&)>* visit_ = nullptr;
    bool stopped_ = false;
};

inline TupleSet as_tuple_set(const std::vector<TupleId>& binding) {
    TupleSet s = binding;
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    return s;
}

} // namespace detail

/// Every violating binding of one constraint; the same tuple may fill several atoms.
inline std::vector<GroundViolation> ground_constraint(const Database& db, const DenialConstraint& c,
                                                      std::size_t constraint_index = 0) {
    std::vector<GroundViolation> out;
    detail::ConstraintGrounder(db, c).run([&](const std::vector<TupleId>& b) {
        out.push_back(GroundViolation{constraint_index, b, detail::as_tuple_set(b)});
        return true;
    });
    return out;
}

/// Distinct tuple sets of the violations of one constraint, lexicographic order.
inline std::vector<TupleSet> violation_sets(const Database& db, const DenialConstraint& c) {
    std::set<TupleSet> sets;
    detail::ConstraintGrounder(db, c).run([&](const std::vector<TupleId>& b) {
        sets.insert(detail::as_tuple_set(b));
        return true;
    });
    return {sets.begin(), sets.end()};
}

/// Per constraint, its inclusion-minimal violation sets: the tuple parts of the pairs
/// (c, X) that are minimal inconsistent in D together with the constraints as formulas.
inline std::vector<std::vector<TupleSet>> minimal_violations_per_constraint(const Database& db,
                                                                            const ConstraintSet& cs) {
    std::vector<std::vector<TupleSet>> out;
    for (const auto& c : cs) out.push_back(minimize_antichain(violation_sets(db, c)));
    return out;
}

inline ConflictHypergraph conflict_hypergraph(const Database& db, const ConstraintSet& cs) {
    std::map<TupleSet, std::vector<std::size_t>> by_set;
    for (std::size_t i = 0; i < cs.size(); ++i)
        for (auto& s : violation_sets(db, cs[i])) by_set[std::move(s)].push_back(i);
    std::vector<TupleSet> all;
    for (const auto& [s, _] : by_set) all.push_back(s);
    ConflictHypergraph h;
    h.edges = minimize_antichain(std::move(all));
    for (const auto& e : h.edges) h.witnesses.push_back(by_set.at(e));
    return h;
}

inline TupleClassification classify_tuples(const ConflictHypergraph& h, const Database& db) {
    std::vector<char> problem(db.size(), 0), contra(db.size(), 0);
    for (const auto& e : h.edges) {
        for (TupleId t : e) problem[t.index] = 1;
        if (e.size() == 1) contra[e[0].index] = 1;
    }
    TupleClassification out;
    for (TupleId t : db.ids()) {
        (problem[t.index] ? out.problematic : out.free).push_back(t);
        if (contra[t.index]) out.contradictory.push_back(t);
    }
    return out;
}

inline bool is_consistent(const Database& db, const ConstraintSet& cs) {
    for (const auto& c : cs) {
        bool found = false;
        detail::ConstraintGrounder(db, c).run([&](const std::vector<TupleId>&) {
            found = true;
            return false;
        });
        if (found) return false;
    }
    return true;
}

} // namespace incmeter

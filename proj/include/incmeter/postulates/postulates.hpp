#pragma once

#include "incmeter/core/database.hpp"
#include "incmeter/core/measure_value.hpp"
#include "incmeter/dsl/ast.hpp"
#include "incmeter/dsl/parser.hpp"
#include "incmeter/dsl/printer.hpp"
#include "incmeter/grounder/grounder.hpp"
#include "incmeter/io/manifest.hpp"
#include "incmeter/kb/kb.hpp"
#include "incmeter/measures/measures.hpp"
#include "incmeter/postulates/generator.hpp"

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace incmeter {

enum class PostulateId : std::uint8_t {
    Consistency,
    Monotony,
    FreeFormulaIndependence,
    SafeFormulaIndependence,
    Penalty,
    Dominance,
    SuperAdditivity,
    MISeparability,
    MINormalization,
    Attenuation,
    EqualConflict,
    AlmostConsistency,
};

inline constexpr std::array<PostulateId, 12> all_postulates = {
    PostulateId::Consistency,     PostulateId::Monotony,        PostulateId::FreeFormulaIndependence,
    PostulateId::SafeFormulaIndependence, PostulateId::Penalty, PostulateId::Dominance,
    PostulateId::SuperAdditivity, PostulateId::MISeparability,  PostulateId::MINormalization,
    PostulateId::Attenuation,     PostulateId::EqualConflict,   PostulateId::AlmostConsistency};

/// The rows of the satisfaction tables, in order.
inline constexpr std::array<PostulateId, 10> table_postulates = {
    PostulateId::FreeFormulaIndependence, PostulateId::SafeFormulaIndependence, PostulateId::Penalty,
    PostulateId::Dominance,               PostulateId::SuperAdditivity,         PostulateId::MISeparability,
    PostulateId::MINormalization,         PostulateId::Attenuation,             PostulateId::EqualConflict,
    PostulateId::AlmostConsistency};

inline std::string_view postulate_name(PostulateId p) {
    static constexpr std::array<std::string_view, 12> names = {
        "Consistency",     "Monotony",        "FreeFormulaIndependence", "SafeFormulaIndependence",
        "Penalty",         "Dominance",       "SuperAdditivity",         "MISeparability",
        "MINormalization", "Attenuation",     "EqualConflict",           "AlmostConsistency"};
    return names[static_cast<std::size_t>(p)];
}

inline std::string_view postulate_title(PostulateId p) {
    static constexpr std::array<std::string_view, 12> titles = {
        "Consistency",      "Monotony",    "Free-Formula Independence", "Safe-Formula Independence",
        "Penalty",          "Dominance",   "Super-Additivity",          "MI-Separability",
        "MI-Normalization", "Attenuation", "Equal Conflict",            "Almost Consistency"};
    return titles[static_cast<std::size_t>(p)];
}

inline PostulateId parse_postulate(std::string_view s) {
    for (auto p : all_postulates)
        if (postulate_name(p) == s) return p;
    throw ValidationError("unknown postulate '" + std::string(s) + "'");
}

inline std::string_view family_token(Family f) { return f == Family::propositional ? "prop" : "db"; }

inline Family parse_family(std::string_view s) {
    if (s == "prop") return Family::propositional;
    if (s == "db") return Family::database;
    throw ValidationError("unknown family '" + std::string(s) + "' (expected prop or db)");
}

/// Expected satisfaction, one string per table row, columns IB IM Isharp IP IA IH Inc Ihs IC Ieta.
/// Consistency and Monotony hold for every measure.
inline bool expected_satisfied(Family f, MeasureName m, PostulateId p) {
    static constexpr std::array<std::string_view, 10> prop = {
        "1111110111", "1111110111", "0111101000", "1000000111", "0111111010",
        "0110000000", "1100011110", "0010000001", "1111111111", "0010000001"};
    static constexpr std::array<std::string_view, 10> db = {
        "1111110111", "1111110111", "0111001000", "1111111111", "0111111010",
        "0110000000", "1100011010", "0010000000", "1111111111", "0010000001"};
    if (p == PostulateId::Consistency || p == PostulateId::Monotony) return true;
    const auto& table = f == Family::propositional ? prop : db;
    std::size_t row = static_cast<std::size_t>(p) - 2;
    return table[row][static_cast<std::size_t>(m)] == '1';
}

/// One database with its constraints.
struct Side {
    ConstraintSet constraints;
    Database database;
};

/// A concrete instantiation of a postulate's antecedent. `left` is D (or M); `right` is
/// D' (or M') for postulates about two databases. A deletion target names a tuple or a
/// constraint of `left`.
struct Scenario {
    Family family = Family::database;
    PostulateId postulate = PostulateId::Consistency;
    Side left;
    std::optional<Side> right;
    std::optional<Tuple> drop_tuple;
    std::optional<std::string> drop_constraint;
};

enum class Outcome : std::uint8_t { vacuous, held, violated };

using MeasureRow = std::array<MeasureValue, 10>;
using OutcomeRow = std::array<Outcome, 10>;

inline MeasureRow measure_row(Family f, const Database& db, const ConstraintSet& cs) {
    Analysis a(db, cs);
    MeasureRow out;
    for (auto n : all_measure_names) out[static_cast<std::size_t>(n)] = a.value(MeasureId{f, n});
    return out;
}

namespace detail {

using ValueSet = std::vector<Tuple>;

inline ValueSet values_of(const Database& db, const TupleSet& s) {
    ValueSet out;
    for (TupleId t : s) out.push_back(db.tuple(t));
    std::sort(out.begin(), out.end());
    return out;
}

inline std::set<ValueSet> db_mi_by_value(const Database& db, const ConstraintSet& cs) {
    std::set<ValueSet> out;
    for (const auto& e : conflict_hypergraph(db, cs).edges) out.insert(values_of(db, e));
    return out;
}

/// MI(K) with atoms named by their tuple and formulas by their clauses over tuples.
using KbMiKey = std::pair<ValueSet, std::vector<ValueSet>>;

inline std::set<KbMiKey> kb_mi_by_value(const Database& db, const ConstraintSet& cs) {
    PropKB kb = transform(db, cs);
    std::set<KbMiKey> out;
    for (const auto& f : kb.formulas) {
        std::vector<ValueSet> named;
        for (const auto& cl : f.clauses) {
            TupleSet s;
            for (AtomId a : cl) s.push_back(TupleId{a});
            named.push_back(values_of(db, s));
        }
        std::sort(named.begin(), named.end());
        for (const auto& cl : named) out.emplace(cl, named);
    }
    return out;
}

inline bool contains_all(const Database& big, const Database& small) {
    for (const auto& t : small.tuples())
        if (!big.find(t)) return false;
    return true;
}

inline bool disjoint(const Database& a, const Database& b) {
    for (const auto& t : a.tuples())
        if (b.find(t)) return false;
    return true;
}

/// Size of a standalone minimal inconsistent set, or nullopt when the side is not one.
/// Database family: MI(D) = {D}. Propositional family: MI(K) = {K}.
inline std::optional<std::size_t> standalone_mi_size(Family f, const Side& s) {
    if (f == Family::database) {
        auto edges = conflict_hypergraph(s.database, s.constraints).edges;
        if (edges.size() != 1 || edges[0].size() != s.database.size()) return std::nullopt;
        return s.database.size();
    }
    PropKB kb = transform(s.database, s.constraints);
    auto mi = mi_of_kb(kb);
    if (mi.size() != 1 || mi[0].size() != kb.size()) return std::nullopt;
    return kb.size();
}

inline bool is_prefix_weakening(const DenialConstraint& c, const DenialConstraint& w) {
    if (w.atoms.size() < c.atoms.size()) return false;
    if (!std::equal(c.atoms.begin(), c.atoms.end(), w.atoms.begin())) return false;
    for (const auto& conj : c.phi)
        if (std::find(w.phi.begin(), w.phi.end(), conj) == w.phi.end()) return false;
    return true;
}

template <typename Pred>
OutcomeRow judge(Pred&& pred) {
    OutcomeRow out;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = pred(i) ? Outcome::held : Outcome::violated;
    return out;
}

inline OutcomeRow vacuous_row() {
    OutcomeRow out;
    out.fill(Outcome::vacuous);
    return out;
}

/// Constraints whose formula equals g(c) on `db`, c included; empty if g(c) is undefined.
inline std::vector<std::string> same_formula_constraints(const Database& db, const ConstraintSet& cs,
                                                         const std::string& name) {
    PropKB kb = transform(db, cs);
    auto c = cs.index_of(name);
    if (!c) throw ValidationError("unknown constraint " + name);
    std::vector<std::string> out;
    if (!kb.g[*c]) return out;
    for (std::size_t s : kb.formulas[*kb.g[*c]].sources) out.push_back(cs[s].name);
    return out;
}

inline ConstraintSet without_all(const ConstraintSet& cs, const std::vector<std::string>& names) {
    ConstraintSet out = cs;
    for (const auto& n : names) out = out.without(n);
    return out;
}

} // namespace detail

/// Evaluates a scenario for all ten measures of its family. A measure's outcome is
/// vacuous when the antecedent does not hold.
inline OutcomeRow evaluate(const Scenario& s) {
    using namespace detail;
    const Family f = s.family;
    const Database& D = s.left.database;
    const ConstraintSet& C = s.left.constraints;
    auto row = [&](const Database& db, const ConstraintSet& cs) { return measure_row(f, db, cs); };
    auto need_right = [&]() -> const Side& {
        if (!s.right) throw ValidationError(std::string(postulate_name(s.postulate)) + " needs a second database");
        return *s.right;
    };

    switch (s.postulate) {
    case PostulateId::Consistency: {
        bool consistent = is_consistent(D, C);
        auto v = row(D, C);
        return judge([&](std::size_t i) { return (v[i] == MeasureValue(0)) == consistent; });
    }
    case PostulateId::Monotony: {
        const Side& r = need_right();
        if (!(r.constraints == C) || !contains_all(r.database, D)) return vacuous_row();
        auto a = row(D, C), b = row(r.database, C);
        return judge([&](std::size_t i) { return a[i] <= b[i]; });
    }
    case PostulateId::FreeFormulaIndependence:
    case PostulateId::SafeFormulaIndependence:
    case PostulateId::Penalty: {
        const bool penalty = s.postulate == PostulateId::Penalty;
        Database D2 = D;
        ConstraintSet C2 = C;
        if (s.drop_tuple) {
            auto id = D.find(*s.drop_tuple);
            if (!id) throw ValidationError("deletion target is not a tuple of the database");
            bool problematic = false;
            if (f == Family::database) {
                auto cls = classify_tuples(conflict_hypergraph(D, C), D);
                problematic = std::find(cls.problematic.begin(), cls.problematic.end(), *id) != cls.problematic.end();
            } else {
                for (const auto& m : mi_of_kb(transform(D, C)))
                    if (std::find(m.begin(), m.end(), id->index) != m.end()) problematic = true;
            }
            if (problematic != penalty) return vacuous_row();
            D2 = D.without(*id);
        } else if (s.drop_constraint) {
            if (f == Family::database) return vacuous_row();
            auto same = same_formula_constraints(D, C, *s.drop_constraint);
            bool problematic = !same.empty();
            if (problematic != penalty) return vacuous_row();
            // K without g(c): every constraint mapping to the same formula goes with it.
            C2 = problematic ? without_all(C, same) : C.without(*s.drop_constraint);
        } else {
            throw ValidationError("scenario has no deletion target");
        }
        auto a = row(D, C), b = row(D2, C2);
        if (penalty) return judge([&](std::size_t i) { return a[i] > b[i]; });
        return judge([&](std::size_t i) { return a[i] == b[i]; });
    }
    case PostulateId::Dominance: {
        if (f == Family::database) return judge([](std::size_t) { return true; });
        const Side& r = need_right();
        if (!(r.database == D) || r.constraints.size() != C.size()) return vacuous_row();
        std::size_t differing = 0;
        bool weaker = true;
        for (std::size_t i = 0; i < C.size(); ++i) {
            if (C[i] == r.constraints[i]) continue;
            ++differing;
            weaker = weaker && is_prefix_weakening(C[i], r.constraints[i]);
        }
        if (differing != 1 || !weaker) return vacuous_row();
        auto a = row(D, C), b = row(D, r.constraints);
        return judge([&](std::size_t i) { return a[i] >= b[i]; });
    }
    case PostulateId::SuperAdditivity: {
        const Side& r = need_right();
        if (!disjoint(D, r.database)) return vacuous_row();
        if (f == Family::database && !(r.constraints == C)) return vacuous_row();
        ConstraintSet CU = C.merged(r.constraints);
        auto u = row(D.merged(r.database), CU), a = row(D, C), b = row(r.database, r.constraints);
        return judge([&](std::size_t i) { return u[i] >= a[i] + b[i]; });
    }
    case PostulateId::MISeparability: {
        const Side& r = need_right();
        if (f == Family::database && !(r.constraints == C)) return vacuous_row();
        Database DU = D.merged(r.database);
        ConstraintSet CU = C.merged(r.constraints);
        bool separable = false;
        if (f == Family::database) {
            auto mu = db_mi_by_value(DU, CU), ma = db_mi_by_value(D, C), mb = db_mi_by_value(r.database, C);
            std::set<ValueSet> un = ma, in;
            un.insert(mb.begin(), mb.end());
            std::set_intersection(ma.begin(), ma.end(), mb.begin(), mb.end(), std::inserter(in, in.end()));
            separable = mu == un && in.empty();
        } else {
            auto mu = kb_mi_by_value(DU, CU), ma = kb_mi_by_value(D, C), mb = kb_mi_by_value(r.database, r.constraints);
            std::set<KbMiKey> un = ma, in;
            un.insert(mb.begin(), mb.end());
            std::set_intersection(ma.begin(), ma.end(), mb.begin(), mb.end(), std::inserter(in, in.end()));
            separable = mu == un && in.empty();
        }
        if (!separable) return vacuous_row();
        auto u = row(DU, CU), a = row(D, C), b = row(r.database, r.constraints);
        return judge([&](std::size_t i) { return u[i] == a[i] + b[i]; });
    }
    case PostulateId::MINormalization: {
        if (!standalone_mi_size(f, s.left)) return vacuous_row();
        auto a = row(D, C);
        return judge([&](std::size_t i) { return a[i] == MeasureValue(1); });
    }
    case PostulateId::Attenuation:
    case PostulateId::EqualConflict:
    case PostulateId::AlmostConsistency: {
        const Side& r = need_right();
        if (f == Family::database && s.postulate != PostulateId::AlmostConsistency && !(r.constraints == C))
            return vacuous_row();
        auto n1 = standalone_mi_size(f, s.left), n2 = standalone_mi_size(f, r);
        if (!n1 || !n2) return vacuous_row();
        auto a = row(D, C), b = row(r.database, r.constraints);
        if (s.postulate == PostulateId::EqualConflict) {
            if (*n1 != *n2) return vacuous_row();
            return judge([&](std::size_t i) { return a[i] == b[i]; });
        }
        if (*n1 >= *n2) return vacuous_row();
        // Almost Consistency on a pair from the M_n family: a larger set must score lower.
        return judge([&](std::size_t i) { return a[i] > b[i]; });
    }
    }
    throw Error("unknown postulate");
}

/// M_n: n distinct tuples of M(A) under one n-ary denial allowing at most n-1 distinct values.
inline Side almost_consistency_member(std::size_t n) {
    Schema schema = parse_schema("relation M(A: int)\n");
    std::string text = "denial m" + std::to_string(n) + ": ";
    for (std::size_t i = 1; i <= n; ++i) text += (i > 1 ? ", M(x" : "M(x") + std::to_string(i) + ")";
    text += " ->";
    bool first = true;
    for (std::size_t i = 1; i <= n; ++i)
        for (std::size_t j = i + 1; j <= n; ++j) {
            text += first ? " " : " | ";
            first = false;
            text += "x" + std::to_string(i) + " = x" + std::to_string(j);
        }
    Side s;
    s.constraints = parse_constraints(text, schema);
    s.database = Database(schema);
    for (std::size_t i = 1; i <= n; ++i) s.database.insert(Tuple{0, {Value::integer(static_cast<long long>(i))}});
    return s;
}

inline constexpr std::size_t almost_consistency_min_n = 2;
inline constexpr std::size_t almost_consistency_max_n = 8;

/// Finite proxy for the limit: over n = 2..8 the values strictly decrease and stay
/// at most 1/n.
inline OutcomeRow almost_consistency_family(Family f) {
    std::vector<MeasureRow> rows;
    for (std::size_t n = almost_consistency_min_n; n <= almost_consistency_max_n; ++n) {
        Side s = almost_consistency_member(n);
        rows.push_back(measure_row(f, s.database, s.constraints));
    }
    return detail::judge([&](std::size_t i) {
        for (std::size_t k = 0; k < rows.size(); ++k) {
            const auto& v = rows[k][i];
            if (v.is_infinite()) return false;
            std::size_t n = almost_consistency_min_n + k;
            if (v.rational() * static_cast<long long>(n) > 1) return false;
            if (k > 0 && !(v < rows[k - 1][i])) return false;
        }
        return true;
    });
}

/// The smallest and largest members of the M_n range as an Almost Consistency scenario.
inline Scenario almost_consistency_scenario(Family f) {
    Scenario s;
    s.family = f;
    s.postulate = PostulateId::AlmostConsistency;
    s.left = almost_consistency_member(almost_consistency_min_n);
    s.right = almost_consistency_member(almost_consistency_max_n);
    return s;
}

namespace detail {

/// c with one extra relation atom over fresh variables, or one extra disjunct.
inline DenialConstraint weaken(const DenialConstraint& c, InstanceGen& gen, const std::string& name) {
    const Schema& schema = InstanceGen::schema();
    DenialConstraint w = c;
    w.name = name;
    auto vars = atom_variables(c);
    if (vars.empty() || gen.coin()) {
        std::size_t rel = gen.coin(0.7) ? 0 : 1;
        const auto& scheme = schema.relation(rel);
        RelationAtom atom{scheme.name(), {}};
        for (std::size_t i = 0; i < scheme.arity(); ++i) atom.args.push_back(Variable{"y" + std::to_string(i + 1)});
        w.atoms.push_back(std::move(atom));
    } else {
        static constexpr CmpOp ops[] = {CmpOp::eq, CmpOp::ne, CmpOp::lt, CmpOp::le, CmpOp::gt, CmpOp::ge};
        Comparison cmp{Variable{vars[gen.uniform(0, vars.size() - 1)]}, ops[gen.uniform(0, 5)],
                       Value::integer(static_cast<long long>(gen.uniform(0, gen.limits().max_value)))};
        Conjunction extra{cmp};
        if (std::find(w.phi.begin(), w.phi.end(), extra) == w.phi.end()) w.phi.push_back(extra);
        else w.atoms.push_back(w.atoms.front());
    }
    return validate_constraint(std::move(w), schema);
}

inline Database random_subset(const Database& db, InstanceGen& gen, double p) {
    std::vector<TupleId> keep;
    for (TupleId t : db.ids())
        if (gen.coin(p)) keep.push_back(t);
    return db.subset(keep);
}

inline Side side_of(const Database& db, const TupleSet& s, ConstraintSet cs) {
    return Side{std::move(cs), db.subset(s)};
}

} // namespace detail

/// The scenarios drawn from one random trial. Scenarios outside the antecedent may be
/// produced; evaluate() marks them vacuous.
inline std::vector<Scenario> random_scenarios(Family f, PostulateId p, InstanceGen& gen) {
    using namespace detail;
    std::vector<Scenario> out;
    auto make = [&](Side left) {
        Scenario s;
        s.family = f;
        s.postulate = p;
        s.left = std::move(left);
        return s;
    };
    switch (p) {
    case PostulateId::Consistency: {
        ConstraintSet cs = gen.constraints();
        out.push_back(make(Side{cs, gen.database()}));
        break;
    }
    case PostulateId::Monotony: {
        ConstraintSet cs = gen.constraints();
        Database big = gen.database();
        Scenario s = make(Side{cs, random_subset(big, gen, 0.6)});
        s.right = Side{cs, big};
        out.push_back(std::move(s));
        break;
    }
    case PostulateId::FreeFormulaIndependence:
    case PostulateId::SafeFormulaIndependence:
    case PostulateId::Penalty: {
        ConstraintSet cs = gen.constraints();
        Database db = gen.database();
        for (const auto& t : db.tuples()) {
            Scenario s = make(Side{cs, db});
            s.drop_tuple = t;
            out.push_back(std::move(s));
        }
        if (f == Family::propositional)
            for (const auto& c : cs) {
                Scenario s = make(Side{cs, db});
                s.drop_constraint = c.name;
                out.push_back(std::move(s));
            }
        break;
    }
    case PostulateId::Dominance: {
        if (f == Family::database) break;
        ConstraintSet base = gen.constraints();
        Database db = gen.database();
        DenialConstraint c = gen.constraint("d");
        DenialConstraint w = weaken(c, gen, "d");
        ConstraintSet strong = base, weak = base;
        strong.add(c);
        weak.add(w);
        Scenario s = make(Side{strong, db});
        s.right = Side{weak, db};
        out.push_back(std::move(s));
        break;
    }
    case PostulateId::SuperAdditivity:
    case PostulateId::MISeparability: {
        Database db = gen.database();
        ConstraintSet c1 = gen.constraints(f == Family::database ? "c" : "p");
        ConstraintSet c2 = c1;
        if (f == Family::propositional) {
            c2 = gen.constraints("q");
            if (p == PostulateId::MISeparability && gen.coin(0.3)) c2.add(c1[0]);
        }
        Database a, b;
        if (p == PostulateId::SuperAdditivity) {
            std::vector<TupleId> l, r;
            for (TupleId t : db.ids()) (gen.coin() ? l : r).push_back(t);
            a = db.subset(l);
            b = db.subset(r);
        } else {
            a = random_subset(db, gen, 0.6);
            b = random_subset(db, gen, 0.6);
        }
        Scenario s = make(Side{c1, a});
        s.right = Side{c2, b};
        out.push_back(std::move(s));
        break;
    }
    case PostulateId::MINormalization:
    case PostulateId::Attenuation:
    case PostulateId::EqualConflict: {
        ConstraintSet cs = gen.constraints();
        Database db = gen.database();
        std::vector<Side> sets;
        if (f == Family::database) {
            for (const auto& e : conflict_hypergraph(db, cs).edges) sets.push_back(side_of(db, e, cs));
        } else {
            auto per = minimal_violations_per_constraint(db, cs);
            for (std::size_t c = 0; c < cs.size(); ++c)
                for (const auto& x : per[c]) sets.push_back(side_of(db, x, ConstraintSet({cs[c]})));
        }
        for (std::size_t i = 0; i < sets.size(); ++i) {
            if (p == PostulateId::MINormalization) {
                out.push_back(make(sets[i]));
                continue;
            }
            for (std::size_t j = 0; j < sets.size(); ++j) {
                if (i == j) continue;
                if (p == PostulateId::EqualConflict && j < i) continue;
                Scenario s = make(sets[i]);
                s.right = sets[j];
                out.push_back(std::move(s));
            }
        }
        break;
    }
    case PostulateId::AlmostConsistency: out.push_back(almost_consistency_scenario(f)); break;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Counterexample store

namespace detail {

inline std::string tuple_label(const Database& db, const Tuple& t) {
    auto id = db.find(t);
    if (!id) throw ValidationError("deletion target is not a tuple of the database");
    return db.label(*id);
}

inline Tuple tuple_by_label(const Database& db, const std::string& label) {
    auto hash = label.rfind('#');
    if (hash == std::string::npos) throw ValidationError("malformed tuple label '" + label + "'");
    auto rel = db.schema().index_of(label.substr(0, hash));
    if (!rel) throw ValidationError("unknown relation in tuple label '" + label + "'");
    std::size_t k = 0;
    try {
        k = std::stoul(label.substr(hash + 1));
    } catch (const std::exception&) {
        throw ValidationError("malformed tuple label '" + label + "'");
    }
    const auto& ids = db.ids_of(*rel);
    if (k == 0 || k > ids.size()) throw ValidationError("no tuple " + label);
    return db.tuple(ids[k - 1]);
}

inline void write_side(const fs::path& dir, const Side& s) {
    fs::create_directories(dir);
    write_file(dir / "constraints.dc", pretty_print(s.constraints));
    for (std::size_t r = 0; r < s.database.schema().size(); ++r)
        write_file(dir / (s.database.schema().relation(r).name() + ".csv"), relation_csv(s.database, r));
}

inline Side read_side(const fs::path& dir, const Schema& schema) {
    Side s;
    auto cpath = dir / "constraints.dc";
    s.constraints = with_file_context(cpath, [&] { return parse_constraints(read_file(cpath), schema); });
    std::vector<TextRows> batches;
    for (const auto& scheme : schema.relations()) {
        auto p = dir / (scheme.name() + ".csv");
        batches.push_back(with_file_context(p, [&] { return parse_relation_csv(scheme, read_file(p)); }));
    }
    s.database = load_database(schema, batches);
    return s;
}

} // namespace detail

struct Counterexample {
    MeasureId measure;
    Scenario scenario;
    std::string note;
};

inline std::string bundle_dir_name(MeasureId m, PostulateId p) {
    return std::string(family_token(m.family)) + "-" + std::string(measure_token(m.name)) + "-" +
           std::string(postulate_name(p));
}

/// Layout: bundle.txt, schema.txt, left/ and (when used) right/, each holding
/// constraints.dc and one CSV per relation.
inline void write_counterexample(const fs::path& dir, const Counterexample& cx) {
    const Scenario& s = cx.scenario;
    fs::create_directories(dir);
    std::ostringstream b;
    if (!cx.note.empty()) b << "# " << cx.note << "\n";
    b << "measure = " << cx.measure.str() << "\n";
    b << "postulate = " << postulate_name(s.postulate) << "\n";
    if (s.drop_tuple) b << "drop tuple = " << detail::tuple_label(s.left.database, *s.drop_tuple) << "\n";
    if (s.drop_constraint) b << "drop constraint = " << *s.drop_constraint << "\n";
    b << "expect = violated\n";
    write_file(dir / "bundle.txt", b.str());
    write_file(dir / "schema.txt", print_schema(s.left.database.schema()));
    detail::write_side(dir / "left", s.left);
    if (fs::exists(dir / "right")) fs::remove_all(dir / "right");
    if (s.right) detail::write_side(dir / "right", *s.right);
}

inline Counterexample read_counterexample(const fs::path& dir) {
    Counterexample cx;
    std::map<std::string, std::string> kv;
    std::istringstream in(read_file(dir / "bundle.txt"));
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            auto b = line.find_first_not_of("# ");
            if (cx.note.empty() && b != std::string::npos) cx.note = line.substr(b);
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError("bundle.txt: expected 'key = value'", line_no, 1);
        auto trim = [](std::string s) {
            auto b = s.find_first_not_of(" \t");
            auto e = s.find_last_not_of(" \t");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    auto get = [&](const std::string& k) {
        auto it = kv.find(k);
        if (it == kv.end()) throw ValidationError(dir.string() + ": bundle.txt has no '" + k + "'");
        return it->second;
    };
    if (get("expect") != "violated") throw ValidationError(dir.string() + ": unsupported expectation");
    cx.measure = MeasureId::parse(get("measure"));
    Scenario& s = cx.scenario;
    s.family = cx.measure.family;
    s.postulate = parse_postulate(get("postulate"));
    auto spath = dir / "schema.txt";
    Schema schema = with_file_context(spath, [&] { return parse_schema(read_file(spath)); });
    s.left = detail::read_side(dir / "left", schema);
    if (fs::exists(dir / "right")) s.right = detail::read_side(dir / "right", schema);
    if (kv.count("drop tuple")) s.drop_tuple = detail::tuple_by_label(s.left.database, kv["drop tuple"]);
    if (kv.count("drop constraint")) s.drop_constraint = kv["drop constraint"];
    return cx;
}

inline bool violates(const Counterexample& cx) {
    if (cx.scenario.family != cx.measure.family) return false;
    return evaluate(cx.scenario)[static_cast<std::size_t>(cx.measure.name)] == Outcome::violated;
}

// ---------------------------------------------------------------------------
// Checking

enum class Verdict : std::uint8_t {
    held_on_trials,
    counterexample_verified,
    satisfied_by_definition,
    violated,               // a trial refuted a cell expected to hold
    counterexample_missing, // no stored counterexample, or it fails to violate
    not_run,
};

inline std::string_view verdict_name(Verdict v) {
    switch (v) {
    case Verdict::held_on_trials: return "held-on-trials";
    case Verdict::counterexample_verified: return "counterexample-verified";
    case Verdict::satisfied_by_definition: return "satisfied-by-definition";
    case Verdict::violated: return "violated";
    case Verdict::counterexample_missing: return "counterexample-missing";
    case Verdict::not_run: return "not-run";
    }
    return "?";
}

struct CheckResult {
    MeasureId measure;
    PostulateId postulate = PostulateId::Consistency;
    bool expected = true;
    Verdict verdict = Verdict::not_run;
    std::size_t trials = 0;
    std::size_t instances = 0; // scenarios where the antecedent held
    std::size_t violations = 0;
    std::optional<Scenario> counterexample;
    std::string detail;

    bool matches() const {
        if (expected) return verdict == Verdict::held_on_trials || verdict == Verdict::satisfied_by_definition;
        return verdict == Verdict::counterexample_verified;
    }
};

struct CheckOptions {
    std::size_t trials = 1000;
    std::uint64_t seed = 42;
    InstanceGen::Limits limits{};
    std::optional<fs::path> store; // counterexample directory
};

/// Runs one table row: random trials for the measures expected to satisfy the
/// postulate, stored counterexamples for the others.
inline std::array<CheckResult, 10> check_row(Family f, PostulateId p, const CheckOptions& opt) {
    std::array<CheckResult, 10> out;
    for (auto n : all_measure_names) {
        auto& r = out[static_cast<std::size_t>(n)];
        r.measure = MeasureId{f, n};
        r.postulate = p;
        r.expected = expected_satisfied(f, n, p);
    }

    bool any_expected = false;
    for (const auto& r : out) any_expected = any_expected || r.expected;

    if (f == Family::database && p == PostulateId::Dominance) {
        for (auto& r : out) {
            r.verdict = Verdict::satisfied_by_definition;
            r.detail = "a tuple implies only itself";
        }
    } else if (p == PostulateId::AlmostConsistency) {
        auto row = almost_consistency_family(f);
        for (std::size_t i = 0; i < out.size(); ++i) {
            if (!out[i].expected) continue;
            out[i].trials = almost_consistency_max_n - almost_consistency_min_n + 1;
            out[i].instances = out[i].trials;
            if (row[i] == Outcome::held) {
                out[i].verdict = Verdict::held_on_trials;
            } else {
                out[i].verdict = Verdict::violated;
                out[i].violations = 1;
                out[i].counterexample = almost_consistency_scenario(f);
                out[i].detail = "not strictly decreasing within 1/n over n = 2..8";
            }
        }
    } else if (any_expected && opt.trials > 0) {
        for (auto& r : out)
            if (r.expected) r.verdict = Verdict::held_on_trials;
        for (std::size_t t = 0; t < opt.trials; ++t) {
            InstanceGen gen(derive_seed(opt.seed, static_cast<std::uint64_t>(f), static_cast<std::uint64_t>(p), t),
                            opt.limits);
            for (const auto& s : random_scenarios(f, p, gen)) {
                auto row = evaluate(s);
                for (std::size_t i = 0; i < out.size(); ++i) {
                    auto& r = out[i];
                    if (!r.expected || row[i] == Outcome::vacuous) continue;
                    ++r.instances;
                    if (row[i] == Outcome::violated) {
                        ++r.violations;
                        if (!r.counterexample) r.counterexample = s;
                        r.verdict = Verdict::violated;
                    }
                }
            }
            for (auto& r : out)
                if (r.expected) r.trials = t + 1;
        }
    }

    for (auto& r : out) {
        if (r.expected) continue;
        if (!opt.store) {
            r.verdict = Verdict::counterexample_missing;
            r.detail = "no counterexample store";
            continue;
        }
        fs::path dir = *opt.store / bundle_dir_name(r.measure, p);
        if (!fs::exists(dir / "bundle.txt")) {
            r.verdict = Verdict::counterexample_missing;
            r.detail = "no bundle at " + dir.string();
            continue;
        }
        try {
            Counterexample cx = read_counterexample(dir);
            if (cx.measure != r.measure || cx.scenario.postulate != p) {
                r.verdict = Verdict::counterexample_missing;
                r.detail = "bundle at " + dir.string() + " is for another cell";
            } else if (violates(cx)) {
                r.verdict = Verdict::counterexample_verified;
                r.counterexample = cx.scenario;
                r.detail = cx.note;
            } else {
                r.verdict = Verdict::counterexample_missing;
                r.detail = "bundle at " + dir.string() + " does not violate the postulate";
            }
        } catch (const Error& e) {
            r.verdict = Verdict::counterexample_missing;
            r.detail = std::string("bundle at ") + dir.string() + " failed to load: " + e.what();
        }
    }
    return out;
}

inline CheckResult check_postulate(MeasureId m, PostulateId p, const CheckOptions& opt) {
    return check_row(m.family, p, opt)[static_cast<std::size_t>(m.name)];
}

inline std::vector<CheckResult> check_table(Family f, const CheckOptions& opt) {
    std::vector<CheckResult> out;
    for (auto p : table_postulates) {
        auto row = check_row(f, p, opt);
        out.insert(out.end(), row.begin(), row.end());
    }
    return out;
}

// ---------------------------------------------------------------------------
// Counterexample search

namespace detail {

inline bool still_violates(const Scenario& s, std::size_t m) {
    try {
        return evaluate(s)[m] == Outcome::violated;
    } catch (const Error&) {
        return false;
    }
}

inline bool drop_one_tuple(Database& db, std::size_t k) {
    if (k >= db.size()) return false;
    db = db.without(TupleId{static_cast<std::uint32_t>(k)});
    return true;
}

/// Greedy shrink: remove tuples and constraints one at a time while the violation stays.
inline Scenario shrink(Scenario s, std::size_t m) {
    bool progress = true;
    while (progress) {
        progress = false;
        for (int side = 0; side < 2 && !progress; ++side) {
            if (side == 1 && !s.right) break;
            std::size_t n = side == 0 ? s.left.database.size() : s.right->database.size();
            for (std::size_t k = 0; k < n && !progress; ++k) {
                Scenario t = s;
                Database& db = side == 0 ? t.left.database : t.right->database;
                if (side == 0 && t.drop_tuple && db.tuple(TupleId{static_cast<std::uint32_t>(k)}) == *t.drop_tuple)
                    continue;
                drop_one_tuple(db, k);
                // Postulates comparing the same database on both sides shrink both.
                if (t.right && (s.postulate == PostulateId::Dominance || s.postulate == PostulateId::Monotony) &&
                    side == 0) {
                    Tuple gone = s.left.database.tuple(TupleId{static_cast<std::uint32_t>(k)});
                    if (auto id = t.right->database.find(gone)) t.right->database = t.right->database.without(*id);
                }
                if (still_violates(t, m)) {
                    s = std::move(t);
                    progress = true;
                }
            }
        }
        for (std::size_t k = 0; k < s.left.constraints.size() && !progress; ++k) {
            std::string name = s.left.constraints[k].name;
            if (s.drop_constraint && *s.drop_constraint == name) continue;
            Scenario t = s;
            t.left.constraints = t.left.constraints.without(name);
            if (t.right && t.right->constraints.find(name) &&
                (s.family == Family::database || s.postulate == PostulateId::Dominance))
                t.right->constraints = t.right->constraints.without(name);
            if (still_violates(t, m)) {
                s = std::move(t);
                progress = true;
            }
        }
        if (s.right && s.family == Family::propositional && s.postulate != PostulateId::Dominance)
            for (std::size_t k = 0; k < s.right->constraints.size() && !progress; ++k) {
                Scenario t = s;
                t.right->constraints = t.right->constraints.without(s.right->constraints[k].name);
                if (still_violates(t, m)) {
                    s = std::move(t);
                    progress = true;
                }
            }
    }
    return s;
}

inline std::size_t scenario_size(const Scenario& s) {
    std::size_t n = s.left.database.size() + s.left.constraints.size();
    if (s.right) n += s.right->database.size() + s.right->constraints.size();
    return n;
}

} // namespace detail

/// Randomized search for an instance violating (m, p), shrunk greedily. Among the
/// violations found within the budget the smallest is returned.
inline std::optional<Scenario> find_counterexample(MeasureId m, PostulateId p, std::uint64_t seed, std::size_t budget,
                                                   InstanceGen::Limits limits = {}) {
    const std::size_t i = static_cast<std::size_t>(m.name);
    if (m.family == Family::database && p == PostulateId::Dominance) return std::nullopt;
    if (p == PostulateId::AlmostConsistency) {
        Scenario s = almost_consistency_scenario(m.family);
        if (detail::still_violates(s, i)) return s;
        return std::nullopt;
    }
    std::optional<Scenario> best;
    std::size_t found = 0;
    for (std::size_t t = 0; t < budget && found < 8; ++t) {
        InstanceGen gen(derive_seed(seed, 0x5eed, static_cast<std::uint64_t>(p), t), limits);
        for (const auto& s : random_scenarios(m.family, p, gen)) {
            if (!detail::still_violates(s, i)) continue;
            Scenario small = detail::shrink(s, i);
            ++found;
            if (!best || detail::scenario_size(small) < detail::scenario_size(*best)) best = std::move(small);
            break;
        }
    }
    return best;
}

// ---------------------------------------------------------------------------
// Reporting

inline std::string cell_text(const CheckResult& r) {
    switch (r.verdict) {
    case Verdict::held_on_trials: return "✓";
    case Verdict::satisfied_by_definition: return "✓ (def)";
    case Verdict::counterexample_verified: return "✗";
    case Verdict::violated: return "**✗ (expected ✓)**";
    case Verdict::counterexample_missing: return "**? (expected ✗)**";
    case Verdict::not_run: return r.expected ? "· (✓ not run)" : "·";
    }
    return "?";
}

/// Markdown table for one family, followed by a list of the cells that disagree with
/// the expected table.
inline std::string table_report(Family f, const std::vector<CheckResult>& results, const CheckOptions& opt) {
    std::ostringstream o;
    o << "## " << (f == Family::propositional ? "Propositional measures on K_DB" : "Database measures") << "\n\n";
    o << "Trials per row: " << opt.trials << ", seed " << opt.seed << ".\n\n";
    o << "| Postulate |";
    for (auto n : all_measure_names) o << " " << measure_token(n) << " |";
    o << "\n|---|";
    for (std::size_t i = 0; i < all_measure_names.size(); ++i) o << "---|";
    o << "\n";
    std::vector<const CheckResult*> mismatches;
    for (auto p : table_postulates) {
        o << "| " << postulate_title(p) << " |";
        for (auto n : all_measure_names) {
            const CheckResult* hit = nullptr;
            for (const auto& r : results)
                if (r.postulate == p && r.measure == MeasureId{f, n}) hit = &r;
            if (!hit) {
                o << " |";
                continue;
            }
            o << " " << cell_text(*hit) << " |";
            if (!hit->matches() && hit->verdict != Verdict::not_run) mismatches.push_back(hit);
        }
        o << "\n";
    }
    o << "\n";
    if (mismatches.empty()) {
        o << "All cells match.\n";
    } else {
        o << "Cells that do not match (" << mismatches.size() << "):\n\n";
        for (const auto* r : mismatches) {
            o << "- " << r->measure.str() << " " << postulate_name(r->postulate) << ": " << verdict_name(r->verdict);
            if (r->verdict == Verdict::violated)
                o << " in " << r->violations << " of " << r->instances << " instances";
            if (!r->detail.empty()) o << " (" << r->detail << ")";
            o << "\n";
        }
    }
    return o.str();
}

} // namespace incmeter

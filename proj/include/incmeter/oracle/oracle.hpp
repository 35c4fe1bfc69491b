#pragma once

// Brute-force reference implementations. Everything here enumerates subsets or
// interpretations directly and avoids the grounder, transversal and measure code.

#include "incmeter/core/database.hpp"
#include "incmeter/core/measure_value.hpp"
#include "incmeter/dsl/ast.hpp"
#include "incmeter/kb/kb.hpp"
#include "incmeter/lp/psat.hpp"
#include "incmeter/measures/measure_id.hpp"
#include "incmeter/oracle/three_valued.hpp"

#include <cstdint>
#include <cstdlib>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace incmeter::oracle {

enum class Mode { propositional, database };

/// Size limits: tuples for subset enumeration, atoms for classical and three-valued
/// interpretation tables. INCMETER_ORACLE_BOUND overrides them: one number sets all
/// three, `s,c,t` sets each.
struct Bounds {
    std::size_t subsets = 12;
    std::size_t classical = 14;
    std::size_t three_valued = 10;

    static Bounds from_env() {
        Bounds b;
        const char* env = std::getenv("INCMETER_ORACLE_BOUND");
        if (!env || !*env) return b;
        std::vector<std::size_t> nums;
        std::string cur;
        for (const char* p = env;; ++p) {
            if (*p == ',' || *p == '\0') {
                if (cur.empty() || cur.size() > 3 || cur.find_first_not_of("0123456789") != std::string::npos)
                    throw ValidationError(std::string("malformed INCMETER_ORACLE_BOUND '") + env + "'");
                nums.push_back(std::stoul(cur));
                cur.clear();
                if (!*p) break;
            } else {
                cur += *p;
            }
        }
        if (nums.size() == 1) nums.assign(3, nums[0]);
        if (nums.size() != 3) throw ValidationError(std::string("malformed INCMETER_ORACLE_BOUND '") + env + "'");
        for (auto n : nums)
            if (n > 24) throw ValidationError("INCMETER_ORACLE_BOUND values above 24 are not supported");
        b.subsets = nums[0];
        b.classical = nums[1];
        b.three_valued = nums[2];
        return b;
    }
};

inline void require_bound(std::size_t n, std::size_t bound, const char* what) {
    if (n > bound)
        throw BoundExceeded(std::string(what) + ": size " + std::to_string(n) + " exceeds oracle bound " +
                            std::to_string(bound));
}

using Mask = std::uint64_t;

namespace detail {

inline bool eval_term_pair(const Term& l, const Term& r, CmpOp op, const std::map<std::string, Value>& env) {
    auto get = [&](const Term& t) -> const Value& { return is_variable(t) ? env.at(as_variable(t).name) : as_constant(t); };
    return compare(get(l), get(r), op);
}

inline bool phi_holds(const DenialConstraint& c, const std::map<std::string, Value>& env) {
    for (const auto& conj : c.phi) {
        bool all = true;
        for (const auto& cmp : conj)
            if (!eval_term_pair(cmp.left, cmp.right, cmp.op, env)) {
                all = false;
                break;
            }
        if (all) return true;
    }
    return false;
}

/// Tries every assignment of pool tuples to the atoms, in order.
template <typename F>
void each_violation(const Database& db, const std::vector<TupleId>& pool, const DenialConstraint& c, std::size_t i,
                    std::map<std::string, Value>& env, std::vector<TupleId>& seq, F&& f) {
    if (i == c.atoms.size()) {
        if (!phi_holds(c, env)) f(seq);
        return;
    }
    const auto& atom = c.atoms[i];
    for (TupleId t : pool) {
        const Tuple& tup = db.tuple(t);
        if (db.schema().relation(tup.relation).name() != atom.relation) continue;
        auto saved = env;
        bool ok = true;
        for (std::size_t p = 0; p < atom.args.size() && ok; ++p) {
            const Term& term = atom.args[p];
            if (!is_variable(term)) {
                ok = as_constant(term) == tup.values[p];
                continue;
            }
            auto it = env.find(as_variable(term).name);
            if (it == env.end()) env.emplace(as_variable(term).name, tup.values[p]);
            else ok = it->second == tup.values[p];
        }
        if (ok) {
            seq.push_back(t);
            each_violation(db, pool, c, i + 1, env, seq, f);
            seq.pop_back();
        }
        env = std::move(saved);
    }
}

inline std::vector<TupleId> ids_in(Mask m, std::size_t n) {
    std::vector<TupleId> out;
    for (std::size_t i = 0; i < n; ++i)
        if (m >> i & 1) out.push_back(TupleId{static_cast<std::uint32_t>(i)});
    return out;
}

inline std::size_t popcount(Mask m) { return static_cast<std::size_t>(__builtin_popcountll(m)); }

} // namespace detail

/// Whether the tuples in `pool` together violate `c`.
inline bool violates(const Database& db, const std::vector<TupleId>& pool, const DenialConstraint& c) {
    bool found = false;
    std::map<std::string, Value> env;
    std::vector<TupleId> seq;
    detail::each_violation(db, pool, c, 0, env, seq, [&](const std::vector<TupleId>&) { found = true; });
    return found;
}

inline bool subset_consistent(const Database& db, const std::vector<TupleId>& pool, const ConstraintSet& cs) {
    for (const auto& c : cs)
        if (violates(db, pool, c)) return false;
    return true;
}

/// Consistency of every subset of D, indexed by bitmask.
inline std::vector<char> consistency_table(const Database& db, const ConstraintSet& cs, const Bounds& b) {
    require_bound(db.size(), b.subsets, "subset enumeration");
    const std::size_t n = db.size();
    std::vector<char> ok(std::size_t(1) << n);
    for (Mask m = 0; m < ok.size(); ++m) ok[m] = subset_consistent(db, detail::ids_in(m, n), cs);
    return ok;
}

inline std::vector<Mask> minimal_masks(const std::vector<char>& consistent) {
    std::vector<Mask> out;
    for (Mask m = 0; m < consistent.size(); ++m) {
        if (consistent[m]) continue;
        bool minimal = true;
        for (Mask s = (m - 1) & m; minimal; s = (s - 1) & m) {
            if (s != m && !consistent[s]) minimal = false;
            if (s == 0) break;
        }
        if (minimal) out.push_back(m);
    }
    return out;
}

inline std::vector<Mask> maximal_masks(const std::vector<char>& consistent, std::size_t n) {
    std::vector<Mask> out;
    for (Mask m = 0; m < consistent.size(); ++m) {
        if (!consistent[m]) continue;
        bool maximal = true;
        for (std::size_t i = 0; i < n && maximal; ++i)
            if (!(m >> i & 1) && consistent[m | (Mask(1) << i)]) maximal = false;
        if (maximal) out.push_back(m);
    }
    return out;
}

inline std::vector<TupleSet> oracle_mi(const Database& db, const ConstraintSet& cs, const Bounds& b = Bounds::from_env()) {
    std::vector<TupleSet> out;
    for (Mask m : minimal_masks(consistency_table(db, cs, b))) out.push_back(detail::ids_in(m, db.size()));
    std::sort(out.begin(), out.end());
    return out;
}

inline std::vector<TupleSet> oracle_mc(const Database& db, const ConstraintSet& cs, const Bounds& b = Bounds::from_env()) {
    std::vector<TupleSet> out;
    for (Mask m : maximal_masks(consistency_table(db, cs, b), db.size())) out.push_back(detail::ids_in(m, db.size()));
    std::sort(out.begin(), out.end());
    return out;
}

/// K_DB built naively: g(c) keeps one clause per violating sequence, without any
/// simplification, and formulas equivalent under every interpretation count once.
struct OracleKB {
    std::size_t atoms = 0;
    std::vector<std::vector<std::vector<std::uint32_t>>> formulas;

    std::size_t size() const { return atoms + formulas.size(); }

    bool formula_true(std::size_t f, Mask world) const {
        for (const auto& clause : formulas[f]) {
            bool some_false = false;
            for (auto a : clause)
                if (!(world >> a & 1)) some_false = true;
            if (!some_false) return false;
        }
        return true;
    }

    Truth formula_value(std::size_t f, const std::vector<Truth>& val) const {
        Truth conj = Truth::T;
        for (const auto& clause : formulas[f]) {
            Truth disj = Truth::F;
            for (auto a : clause) disj = disj || !val[a];
            conj = conj && disj;
        }
        return conj;
    }

    /// Elements of K true in a classical world: atoms first, then formulas.
    Mask true_elements(Mask world) const {
        Mask m = world;
        for (std::size_t f = 0; f < formulas.size(); ++f)
            if (formula_true(f, world)) m |= Mask(1) << (atoms + f);
        return m;
    }
};

inline OracleKB oracle_transform(const Database& db, const ConstraintSet& cs, const Bounds& b = Bounds::from_env()) {
    require_bound(db.size(), b.classical, "classical interpretations");
    OracleKB kb;
    kb.atoms = db.size();
    auto all = db.ids();
    for (const auto& c : cs) {
        std::vector<std::vector<std::uint32_t>> clauses;
        std::map<std::string, Value> env;
        std::vector<TupleId> seq;
        detail::each_violation(db, all, c, 0, env, seq, [&](const std::vector<TupleId>& s) {
            std::vector<std::uint32_t> cl;
            for (TupleId t : s) cl.push_back(t.index);
            clauses.push_back(std::move(cl));
        });
        if (clauses.empty()) continue;
        kb.formulas.push_back(std::move(clauses));
        std::size_t f = kb.formulas.size() - 1;
        for (std::size_t g = 0; g < f; ++g) {
            bool same = true;
            for (Mask w = 0; w < (Mask(1) << kb.atoms) && same; ++w)
                same = kb.formula_true(f, w) == kb.formula_true(g, w);
            if (same) {
                kb.formulas.pop_back();
                break;
            }
        }
    }
    return kb;
}

inline OracleKB from_prop_kb(const PropKB& k) {
    OracleKB kb;
    kb.atoms = k.atom_count();
    for (const auto& f : k.formulas) {
        std::vector<std::vector<std::uint32_t>> clauses;
        for (const auto& c : f.clauses) clauses.emplace_back(c.begin(), c.end());
        kb.formulas.push_back(std::move(clauses));
    }
    return kb;
}

namespace detail {

/// Distinct sets of K-elements made true by some admissible classical world.
inline std::vector<Mask> world_patterns(const OracleKB& kb, Mode mode, const Bounds& b) {
    require_bound(kb.atoms, b.classical, "classical interpretations");
    std::set<Mask> out;
    Mask formula_bits = 0;
    for (std::size_t f = 0; f < kb.formulas.size(); ++f) formula_bits |= Mask(1) << (kb.atoms + f);
    for (Mask w = 0; w < (Mask(1) << kb.atoms); ++w) {
        Mask t = kb.true_elements(w);
        if (mode == Mode::database && (t & formula_bits) != formula_bits) continue;
        out.insert(t);
    }
    return {out.begin(), out.end()};
}

inline std::size_t min_subset_hitting(std::size_t n, const std::vector<Mask>& edges) {
    std::size_t best = n + 1;
    for (Mask x = 0; x < (Mask(1) << n); ++x) {
        bool hits = true;
        for (Mask e : edges)
            if (!(e & x)) {
                hits = false;
                break;
            }
        if (hits) best = std::min(best, popcount(x));
    }
    return best;
}

/// Smallest number of patterns whose union contains `need`; 0 if need is empty.
inline std::optional<std::size_t> min_pattern_cover(Mask need, const std::vector<Mask>& patterns) {
    if (!need) return 0;
    Mask any = 0;
    for (Mask p : patterns) any |= p;
    if ((any & need) != need) return std::nullopt;
    std::vector<Mask> frontier{0};
    for (std::size_t k = 1; k <= patterns.size(); ++k) {
        std::set<Mask> next;
        for (Mask cov : frontier)
            for (Mask p : patterns) {
                Mask u = (cov | p) & need;
                if (u == need) return k;
                next.insert(u);
            }
        frontier.assign(next.begin(), next.end());
    }
    return std::nullopt;
}

inline MeasureValue psat_over_patterns(std::size_t rows, const std::vector<Mask>& patterns) {
    if (rows == 0) return 0;
    std::vector<std::vector<char>> covers;
    for (Mask p : patterns) {
        std::vector<char> c(rows);
        for (std::size_t r = 0; r < rows; ++r) c[r] = (p >> r & 1) ? 1 : 0;
        covers.push_back(std::move(c));
    }
    return solve_psat_eta(rows, covers).measure();
}

} // namespace detail

/// Least conflict base over all three-valued models. Propositional mode: every member of K
/// is T or B. Database mode: atoms T or B and every constraint formula designated.
inline MeasureValue oracle_3vl_C(const OracleKB& kb, Mode mode, const Bounds& b = Bounds::from_env()) {
    (void)mode; // both modes demand the same of atoms and formulas
    require_bound(kb.atoms, b.three_valued, "three-valued interpretations");
    std::size_t total = 1;
    for (std::size_t i = 0; i < kb.atoms; ++i) total *= 3;
    std::optional<std::size_t> best;
    std::vector<Truth> val(kb.atoms);
    for (std::size_t code = 0; code < total; ++code) {
        std::size_t x = code, conflicts = 0;
        bool model = true;
        for (std::size_t i = 0; i < kb.atoms; ++i) {
            val[i] = static_cast<Truth>(x % 3);
            x /= 3;
            if (!designated(val[i])) model = false;
            if (val[i] == Truth::B) ++conflicts;
        }
        for (std::size_t f = 0; f < kb.formulas.size() && model; ++f)
            if (!designated(kb.formula_value(f, val))) model = false;
        if (model && (!best || conflicts < *best)) best = conflicts;
    }
    if (!best) return MeasureValue::infinity();
    return static_cast<long long>(*best);
}

/// Least number of admissible classical interpretations making every element true (every
/// member of K, or in database mode every tuple atom), minus one.
inline MeasureValue oracle_hs(const OracleKB& kb, Mode mode, const Bounds& b = Bounds::from_env()) {
    auto patterns = detail::world_patterns(kb, mode, b);
    Mask need = mode == Mode::database ? ((Mask(1) << kb.atoms) - 1) : ((Mask(1) << kb.size()) - 1);
    if (!need) return 0;
    auto k = detail::min_pattern_cover(need, patterns);
    if (!k) return MeasureValue::infinity();
    return static_cast<long long>(*k) - 1;
}

/// 1 - max eta with the LP ranging over every admissible interpretation.
inline MeasureValue oracle_eta(const OracleKB& kb, Mode mode, const Bounds& b = Bounds::from_env()) {
    auto patterns = detail::world_patterns(kb, mode, b);
    std::size_t rows = mode == Mode::database ? kb.atoms : kb.size();
    if (mode == Mode::database && patterns.empty()) throw Error("no admissible interpretation");
    return detail::psat_over_patterns(rows, patterns);
}

/// Propositional measures of K_DB, each straight from its definition.
inline MeasureValue oracle_prop(MeasureName n, const Database& db, const ConstraintSet& cs,
                                const Bounds& b = Bounds::from_env()) {
    OracleKB kb = oracle_transform(db, cs, b);
    const std::size_t size = kb.size();
    require_bound(size, b.classical + 8, "knowledge base subsets");
    auto patterns = detail::world_patterns(kb, Mode::propositional, b);
    std::vector<char> consistent(std::size_t(1) << size, 0);
    for (Mask s = 0; s < consistent.size(); ++s)
        for (Mask p : patterns)
            if ((s & p) == s) {
                consistent[s] = 1;
                break;
            }
    const Mask full = (Mask(1) << size) - 1;
    auto mi = minimal_masks(consistent);
    switch (n) {
    case MeasureName::B: return consistent[full] ? 0 : 1;
    case MeasureName::M: return static_cast<long long>(mi.size());
    case MeasureName::sharp: {
        Rational r = 0;
        for (Mask m : mi) r += Rational(1, static_cast<long long>(detail::popcount(m)));
        return MeasureValue(r);
    }
    case MeasureName::P: {
        Mask u = 0;
        for (Mask m : mi) u |= m;
        return static_cast<long long>(detail::popcount(u));
    }
    case MeasureName::A: {
        std::size_t self = 0;
        for (std::size_t e = 0; e < size; ++e)
            if (!consistent[Mask(1) << e]) ++self;
        return static_cast<long long>(maximal_masks(consistent, size).size() + self) - 1;
    }
    case MeasureName::H: {
        if (mi.empty()) return 0;
        return static_cast<long long>(detail::min_subset_hitting(size, mi));
    }
    case MeasureName::nc: {
        std::size_t best = 0;
        for (std::size_t k = 0; k <= size; ++k) {
            bool all = true;
            for (Mask s = 0; s <= full && all; ++s)
                if (detail::popcount(s) == k && !consistent[s]) all = false;
            if (all) best = k;
        }
        return static_cast<long long>(size - best);
    }
    case MeasureName::hs: return oracle_hs(kb, Mode::propositional, b);
    case MeasureName::C: return oracle_3vl_C(kb, Mode::propositional, b);
    case MeasureName::eta: return oracle_eta(kb, Mode::propositional, b);
    }
    throw Error("unknown measure");
}

/// Database measures, each straight from its definition over tuple subsets.
inline MeasureValue oracle_db(MeasureName n, const Database& db, const ConstraintSet& cs,
                              const Bounds& b = Bounds::from_env()) {
    const std::size_t size = db.size();
    const Mask full = (Mask(1) << size) - 1;
    auto consistent = consistency_table(db, cs, b);
    auto mi = minimal_masks(consistent);
    switch (n) {
    case MeasureName::B: return consistent[full] ? 0 : 1;
    case MeasureName::M: return static_cast<long long>(mi.size());
    case MeasureName::sharp: {
        Rational r = 0;
        for (Mask m : mi) r += Rational(1, static_cast<long long>(detail::popcount(m)));
        return MeasureValue(r);
    }
    case MeasureName::P: {
        Mask u = 0;
        for (Mask m : mi) u |= m;
        return static_cast<long long>(detail::popcount(u));
    }
    case MeasureName::A: {
        std::size_t contradictory = 0;
        for (std::size_t i = 0; i < size; ++i)
            if (!consistent[Mask(1) << i]) ++contradictory;
        return static_cast<long long>(maximal_masks(consistent, size).size() + contradictory) - 1;
    }
    case MeasureName::H: {
        if (mi.empty()) return 0;
        return static_cast<long long>(detail::min_subset_hitting(size, mi));
    }
    case MeasureName::nc: {
        std::size_t best = 0;
        for (std::size_t k = 0; k <= size; ++k) {
            bool all = true;
            for (Mask s = 0; s <= full && all; ++s)
                if (detail::popcount(s) == k && !consistent[s]) all = false;
            if (all) best = k;
        }
        return static_cast<long long>(size - best);
    }
    case MeasureName::hs: return oracle_hs(oracle_transform(db, cs, b), Mode::database, b);
    case MeasureName::C: return oracle_3vl_C(oracle_transform(db, cs, b), Mode::database, b);
    case MeasureName::eta: return oracle_eta(oracle_transform(db, cs, b), Mode::database, b);
    }
    throw Error("unknown measure");
}

inline MeasureValue oracle_measure(MeasureId id, const Database& db, const ConstraintSet& cs,
                                   const Bounds& b = Bounds::from_env()) {
    return id.family == Family::database ? oracle_db(id.name, db, cs, b) : oracle_prop(id.name, db, cs, b);
}

} // namespace incmeter::oracle

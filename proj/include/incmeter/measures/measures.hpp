#pragma once

#include "incmeter/core/database.hpp"
#include "incmeter/core/measure_value.hpp"
#include "incmeter/dsl/ast.hpp"
#include "incmeter/grounder/grounder.hpp"
#include "incmeter/kb/kb.hpp"
#include "incmeter/lp/psat.hpp"
#include "incmeter/measures/measure_id.hpp"
#include "incmeter/transversal/transversal.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace incmeter {

/// Supporting data behind one measure value. Sets are given as labels.
struct MeasureEvidence {
    std::optional<std::vector<std::string>> hitting_set;          // IH, IC (conflict base)
    std::optional<std::vector<std::vector<std::string>>> cover;   // Ihs
    std::vector<std::pair<std::vector<std::string>, Rational>> distribution; // Ieta, nonzero columns
};

struct MeasureReport {
    std::map<MeasureId, MeasureValue> values;
    std::map<MeasureId, MeasureEvidence> evidence;
    std::set<std::string> computed; // names of the intermediates that were built

    const MeasureValue& at(MeasureId id) const { return values.at(id); }
};

/// Lazily computed intermediates for one database and constraint set. Each is built at
/// most once and only when a requested measure needs it.
class Analysis {
public:
    Analysis(const Database& db, const ConstraintSet& cs) : db_(db), cs_(cs) {}

    const Database& database() const { return db_; }
    const ConstraintSet& constraints() const { return cs_; }
    const std::set<std::string>& computed() const { return computed_; }

    bool consistent() {
        if (!consistent_) {
            if (hypergraph_) {
                consistent_ = hypergraph_->edges.empty();
            } else {
                computed_.insert("consistency");
                consistent_ = is_consistent(db_, cs_);
            }
        }
        return *consistent_;
    }

    const ConflictHypergraph& hypergraph() {
        if (!hypergraph_) {
            computed_.insert("mi_db");
            hypergraph_ = conflict_hypergraph(db_, cs_);
        }
        return *hypergraph_;
    }

    const std::vector<TupleSet>& mi() { return hypergraph().edges; }

    const TupleClassification& classification() {
        if (!classification_) classification_ = classify_tuples(hypergraph(), db_);
        return *classification_;
    }

    const std::vector<TupleSet>& mc() {
        if (!mc_) {
            computed_.insert("mc_db");
            mc_ = maximal_consistent_subsets(db_.ids(), mi());
        }
        return *mc_;
    }

    const PropKB& kb() {
        if (!kb_) {
            computed_.insert("kb");
            kb_ = transform(db_, cs_);
        }
        return *kb_;
    }

    const std::vector<KbSubset>& mi_kb() {
        if (!mi_kb_) mi_kb_ = mi_of_kb(kb());
        return *mi_kb_;
    }

    const std::vector<KbSubset>& mc_kb() {
        if (!mc_kb_) {
            computed_.insert("mc_kb");
            mc_kb_ = maximal_consistent_subsets(kb().elements(), mi_kb());
        }
        return *mc_kb_;
    }

    std::vector<std::string> labels(const TupleSet& s) const {
        std::vector<std::string> out;
        for (TupleId t : s) out.push_back(db_.label(t));
        return out;
    }

    std::vector<std::string> kb_labels(const KbSubset& s) {
        std::vector<std::string> out;
        for (KbElement e : s) out.push_back(kb().element_name(e));
        return out;
    }

    MeasureValue value(MeasureId id, MeasureEvidence* ev = nullptr) {
        return id.family == Family::database ? db_value(id.name, ev) : prop_value(id.name, ev);
    }

private:
    MeasureValue db_value(MeasureName n, MeasureEvidence* ev) {
        switch (n) {
        case MeasureName::B: return consistent() ? 0 : 1;
        case MeasureName::M: return static_cast<long long>(mi().size());
        case MeasureName::sharp: {
            Rational sum = 0;
            for (const auto& e : mi()) sum += Rational(1, static_cast<long long>(e.size()));
            return MeasureValue(sum);
        }
        case MeasureName::P: return static_cast<long long>(classification().problematic.size());
        case MeasureName::A:
            return static_cast<long long>(mc().size() + classification().contradictory.size()) - 1;
        case MeasureName::H:
        case MeasureName::C: {
            auto hs = min_hitting_set(mi());
            if (!hs) return MeasureValue::infinity();
            if (ev) ev->hitting_set = labels(*hs);
            return static_cast<long long>(hs->size());
        }
        case MeasureName::nc: {
            if (mi().empty()) return 0;
            std::size_t smallest = mi().front().size();
            for (const auto& e : mi()) smallest = std::min(smallest, e.size());
            return static_cast<long long>(db_.size() - smallest + 1);
        }
        case MeasureName::hs: {
            if (consistent()) return 0;
            auto cover = min_cover(db_.ids(), mc());
            if (!cover) return MeasureValue::infinity();
            if (ev) {
                ev->cover.emplace();
                for (auto i : *cover) ev->cover->push_back(labels(mc()[i]));
            }
            return static_cast<long long>(cover->size()) - 1;
        }
        case MeasureName::eta: {
            if (consistent()) return 0;
            computed_.insert("lp_db");
            const auto& cols = mc();
            std::vector<std::vector<char>> covers;
            for (const auto& s : cols) {
                std::vector<char> row(db_.size(), 0);
                for (TupleId t : s) row[t.index] = 1;
                covers.push_back(std::move(row));
            }
            auto res = solve_psat_eta(db_.size(), covers);
            if (ev)
                for (std::size_t j = 0; j < cols.size(); ++j)
                    if (!res.probability[j].is_zero()) ev->distribution.emplace_back(labels(cols[j]), res.probability[j]);
            return res.measure();
        }
        }
        throw Error("unknown measure");
    }

    MeasureValue prop_value(MeasureName n, MeasureEvidence* ev) {
        const PropKB& k = kb();
        switch (n) {
        case MeasureName::B:
        case MeasureName::hs:
            // One interpretation satisfies K iff K is consistent; otherwise all-true covers
            // the atoms and all-false covers the formulas.
            return k.consistent() ? 0 : 1;
        case MeasureName::M: return static_cast<long long>(mi_kb().size());
        case MeasureName::sharp: {
            Rational sum = 0;
            for (const auto& s : mi_kb()) sum += Rational(1, static_cast<long long>(s.size()));
            return MeasureValue(sum);
        }
        case MeasureName::P: {
            std::set<KbElement> u;
            for (const auto& s : mi_kb()) u.insert(s.begin(), s.end());
            return static_cast<long long>(u.size());
        }
        case MeasureName::A: {
            for (const auto& f : k.formulas)
                for (const auto& c : f.clauses)
                    if (c.empty()) throw Error("formula with an empty clause is self-contradictory");
            return static_cast<long long>(mc_kb().size()) - 1;
        }
        case MeasureName::H: {
            auto hs = min_hitting_set(mi_kb());
            if (!hs) return MeasureValue::infinity();
            if (ev) ev->hitting_set = kb_labels(*hs);
            return static_cast<long long>(hs->size());
        }
        case MeasureName::nc: {
            if (mi_kb().empty()) return 0;
            std::size_t smallest = mi_kb().front().size();
            for (const auto& s : mi_kb()) smallest = std::min(smallest, s.size());
            return static_cast<long long>(k.size() - smallest + 1);
        }
        case MeasureName::C: {
            // Atoms must be T or B; a formula is F exactly when one of its clauses has all
            // atoms T. So the least conflict base is a least atom set meeting every clause.
            std::vector<std::vector<AtomId>> clauses;
            for (const auto& f : k.formulas) clauses.insert(clauses.end(), f.clauses.begin(), f.clauses.end());
            auto hs = min_hitting_set(clauses);
            if (!hs) return MeasureValue::infinity();
            if (ev) {
                ev->hitting_set.emplace();
                for (auto a : *hs) ev->hitting_set->push_back(k.atom_name(a));
            }
            return static_cast<long long>(hs->size());
        }
        case MeasureName::eta: {
            if (k.consistent()) return 0;
            computed_.insert("lp_kb");
            const auto& cols = mc_kb();
            std::vector<std::vector<char>> covers;
            for (const auto& s : cols) {
                std::vector<char> row(k.size(), 0);
                for (KbElement e : s) row[e] = 1;
                covers.push_back(std::move(row));
            }
            auto res = solve_psat_eta(k.size(), covers);
            if (ev)
                for (std::size_t j = 0; j < cols.size(); ++j)
                    if (!res.probability[j].is_zero()) ev->distribution.emplace_back(kb_labels(cols[j]), res.probability[j]);
            return res.measure();
        }
        }
        throw Error("unknown measure");
    }

    const Database& db_;
    const ConstraintSet& cs_;
    std::set<std::string> computed_;
    std::optional<bool> consistent_;
    std::optional<ConflictHypergraph> hypergraph_;
    std::optional<TupleClassification> classification_;
    std::optional<std::vector<TupleSet>> mc_;
    std::optional<PropKB> kb_;
    std::optional<std::vector<KbSubset>> mi_kb_;
    std::optional<std::vector<KbSubset>> mc_kb_;
};

inline MeasureValue db_measure(MeasureName n, const Database& db, const ConstraintSet& cs) {
    return Analysis(db, cs).value(MeasureId{Family::database, n});
}

inline MeasureValue prop_measure(MeasureName n, const Database& db, const ConstraintSet& cs) {
    return Analysis(db, cs).value(MeasureId{Family::propositional, n});
}

inline MeasureValue measure(MeasureId id, const Database& db, const ConstraintSet& cs) {
    return Analysis(db, cs).value(id);
}

/// Computes the requested measures, sharing intermediates between them.
inline MeasureReport measure_all(const Database& db, const ConstraintSet& cs, const std::vector<MeasureId>& which,
                                 bool with_evidence = false) {
    Analysis a(db, cs);
    MeasureReport r;
    for (const auto& id : which) {
        MeasureEvidence ev;
        r.values[id] = a.value(id, with_evidence ? &ev : nullptr);
        if (with_evidence) r.evidence[id] = std::move(ev);
    }
    r.computed = a.computed();
    return r;
}

} // namespace incmeter

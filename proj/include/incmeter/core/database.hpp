#pragma once

#include "incmeter/core/csv.hpp"
#include "incmeter/core/error.hpp"
#include "incmeter/core/schema.hpp"
#include "incmeter/core/value.hpp"

#include <algorithm>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace incmeter {

/// Dense, stable tuple identifier. Tuples are numbered relation by relation (schema
/// order), and within a relation in first-occurrence order of the input rows.
struct TupleId {
    std::uint32_t index = 0;

    friend auto operator<=>(const TupleId&, const TupleId&) = default;
    friend bool operator==(const TupleId&, const TupleId&) = default;
};

struct Tuple {
    std::size_t relation = 0;
    std::vector<Value> values;

    friend bool operator==(const Tuple&, const Tuple&) = default;
    friend bool operator<(const Tuple& a, const Tuple& b) {
        if (a.relation != b.relation) return a.relation < b.relation;
        return a.values < b.values;
    }
};

/// Rows for one relation, either typed or as raw text cells.
template <typename Cell>
struct RowBatch {
    std::string relation;
    std::vector<std::vector<Cell>> rows;
};

using ValueRows = RowBatch<Value>;
using TextRows = RowBatch<std::string>;

/// A set of tuples over a schema. Duplicate rows collapse to a single tuple.
class Database {
public:
    Database() = default;
    explicit Database(Schema schema) : schema_(std::move(schema)), by_relation_(schema_.size()) {}

    const Schema& schema() const { return schema_; }
    std::size_t size() const { return tuples_.size(); }
    bool empty() const { return tuples_.empty(); }

    const Tuple& tuple(TupleId id) const { return tuples_.at(id.index); }
    const std::vector<Tuple>& tuples() const { return tuples_; }
    const std::vector<TupleId>& ids_of(std::size_t relation) const { return by_relation_.at(relation); }

    std::vector<TupleId> ids() const {
        std::vector<TupleId> out(tuples_.size());
        for (std::uint32_t i = 0; i < out.size(); ++i) out[i] = TupleId{i};
        return out;
    }

    /// Per-relation 1-based ordinal of a tuple.
    std::size_t ordinal(TupleId id) const { return ordinal_.at(id.index); }

    /// `Relation#k`, e.g. `MealTicket#5`.
    std::string label(TupleId id) const {
        return schema_.relation(tuple(id).relation).name() + "#" + std::to_string(ordinal(id));
    }

    std::optional<TupleId> find(const Tuple& t) const {
        if (t.relation >= by_relation_.size()) return std::nullopt;
        for (TupleId id : by_relation_[t.relation])
            if (tuples_[id.index].values == t.values) return id;
        return std::nullopt;
    }

    /// Adds a tuple unless an equal one exists; returns the id either way.
    TupleId insert(Tuple t) {
        if (t.relation >= schema_.size()) throw ValidationError("relation index out of range");
        auto key = std::make_pair(t.relation, t.values);
        if (auto it = index_.find(key); it != index_.end()) return it->second;
        TupleId id{static_cast<std::uint32_t>(tuples_.size())};
        by_relation_[t.relation].push_back(id);
        ordinal_.push_back(by_relation_[t.relation].size());
        index_.emplace(std::move(key), id);
        tuples_.push_back(std::move(t));
        return id;
    }

    /// The sub-database made of `keep`, renumbered in id order.
    Database subset(std::span<const TupleId> keep) const {
        std::vector<TupleId> sorted(keep.begin(), keep.end());
        std::sort(sorted.begin(), sorted.end());
        sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
        std::vector<std::vector<Tuple>> grouped(schema_.size());
        for (TupleId id : sorted) grouped[tuple(id).relation].push_back(tuple(id));
        return from_groups(schema_, std::move(grouped));
    }

    Database without(TupleId drop) const {
        std::vector<TupleId> keep;
        keep.reserve(size());
        for (std::uint32_t i = 0; i < size(); ++i)
            if (i != drop.index) keep.push_back(TupleId{i});
        return subset(keep);
    }

    /// Set union; tuples of `other` that are new come after this database's tuples
    /// of the same relation.
    Database merged(const Database& other) const {
        if (!(schema_ == other.schema_)) throw ValidationError("cannot merge databases over different schemas");
        std::vector<std::vector<Tuple>> grouped(schema_.size());
        for (const auto& t : tuples_) grouped[t.relation].push_back(t);
        for (const auto& t : other.tuples_) grouped[t.relation].push_back(t);
        return from_groups(schema_, std::move(grouped));
    }

    friend bool operator==(const Database& a, const Database& b) {
        return a.schema_ == b.schema_ && a.tuples_ == b.tuples_;
    }

    static Database from_groups(const Schema& schema, std::vector<std::vector<Tuple>> grouped) {
        Database db(schema);
        for (auto& group : grouped)
            for (auto& t : group) db.insert(std::move(t));
        return db;
    }

private:
    Schema schema_;
    std::vector<Tuple> tuples_;
    std::vector<std::vector<TupleId>> by_relation_;
    std::vector<std::size_t> ordinal_;
    std::map<std::pair<std::size_t, std::vector<Value>>, TupleId> index_;
};

namespace detail {

inline std::string row_context(const std::string& relation, std::size_t row) {
    return "relation " + relation + ", row " + std::to_string(row + 1);
}

} // namespace detail

/// Builds a database from typed rows. Row indices in errors are 1-based within the batch.
inline Database load_database(const Schema& schema, const std::vector<ValueRows>& batches) {
    std::vector<std::vector<Tuple>> grouped(schema.size());
    for (const auto& batch : batches) {
        auto rel = schema.index_of(batch.relation);
        if (!rel) throw ValidationError("unknown relation " + batch.relation);
        const auto& scheme = schema.relation(*rel);
        for (std::size_t r = 0; r < batch.rows.size(); ++r) {
            const auto& row = batch.rows[r];
            if (row.size() != scheme.arity())
                throw ValidationError(detail::row_context(batch.relation, r) + ": expected " +
                                      std::to_string(scheme.arity()) + " values, got " + std::to_string(row.size()));
            Tuple t{*rel, {}};
            t.values.reserve(row.size());
            for (std::size_t i = 0; i < row.size(); ++i) {
                Kind want = scheme.attribute(i).type;
                if (row[i].kind() == want) {
                    t.values.push_back(row[i]);
                } else if (row[i].kind() == Kind::integer && want == Kind::rational) {
                    t.values.push_back(row[i].coerced_to(want));
                } else {
                    throw ValidationError(detail::row_context(batch.relation, r) + ": attribute " +
                                          scheme.attribute(i).name + " expects " +
                                          std::string(kind_name(want)) + ", got " +
                                          std::string(kind_name(row[i].kind())));
                }
            }
            grouped[*rel].push_back(std::move(t));
        }
    }
    return Database::from_groups(schema, std::move(grouped));
}

/// Builds a database from raw text cells, parsing each by its attribute type.
inline Database load_database(const Schema& schema, const std::vector<TextRows>& batches) {
    std::vector<ValueRows> typed;
    typed.reserve(batches.size());
    for (const auto& batch : batches) {
        auto rel = schema.index_of(batch.relation);
        if (!rel) throw ValidationError("unknown relation " + batch.relation);
        const auto& scheme = schema.relation(*rel);
        ValueRows out{batch.relation, {}};
        for (std::size_t r = 0; r < batch.rows.size(); ++r) {
            const auto& row = batch.rows[r];
            if (row.size() != scheme.arity())
                throw ValidationError(detail::row_context(batch.relation, r) + ": expected " +
                                      std::to_string(scheme.arity()) + " values, got " + std::to_string(row.size()));
            std::vector<Value> values;
            for (std::size_t i = 0; i < row.size(); ++i) {
                try {
                    values.push_back(Value::parse(row[i], scheme.attribute(i).type));
                } catch (const Error& e) {
                    throw ValidationError(detail::row_context(batch.relation, r) + ": attribute " +
                                          scheme.attribute(i).name + ": " + e.what());
                }
            }
            out.rows.push_back(std::move(values));
        }
        typed.push_back(std::move(out));
    }
    return load_database(schema, typed);
}

/// Parses one relation's CSV text: a header naming the attributes in scheme order, then rows.
inline TextRows parse_relation_csv(const RelationScheme& scheme, std::string_view text) {
    auto rows = csv::parse(text);
    if (rows.empty()) throw ValidationError("relation " + scheme.name() + ": CSV has no header row");
    const auto& header = rows.front();
    if (header.size() != scheme.arity())
        throw ValidationError("relation " + scheme.name() + ": header has " + std::to_string(header.size()) +
                              " columns, scheme has " + std::to_string(scheme.arity()));
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] != scheme.attribute(i).name)
            throw ValidationError("relation " + scheme.name() + ": header column " + std::to_string(i + 1) + " is '" +
                                  header[i] + "', expected '" + scheme.attribute(i).name + "'");
    TextRows out{scheme.name(), {}};
    out.rows.assign(std::make_move_iterator(rows.begin() + 1), std::make_move_iterator(rows.end()));
    return out;
}

/// CSV text (header plus rows) for one relation of a database.
inline std::string relation_csv(const Database& db, std::size_t relation) {
    const auto& scheme = db.schema().relation(relation);
    std::vector<csv::Row> rows;
    csv::Row header;
    for (const auto& a : scheme.attributes()) header.push_back(a.name);
    rows.push_back(std::move(header));
    for (TupleId id : db.ids_of(relation)) {
        csv::Row row;
        for (const auto& v : db.tuple(id).values) row.push_back(v.str());
        rows.push_back(std::move(row));
    }
    return csv::write(rows);
}

/// t[A_i1, ..., A_ij]: the values of the named attributes, in the requested order.
inline std::vector<Value> project(const Database& db, TupleId id, std::span<const std::string> attrs) {
    const Tuple& t = db.tuple(id);
    const auto& scheme = db.schema().relation(t.relation);
    std::vector<Value> out;
    out.reserve(attrs.size());
    for (const auto& a : attrs) out.push_back(t.values[scheme.require_position(a)]);
    return out;
}

} // namespace incmeter

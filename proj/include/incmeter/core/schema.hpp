#pragma once

#include "incmeter/core/error.hpp"
#include "incmeter/core/value.hpp"

#include <algorithm>
#include <cctype>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace incmeter {

struct Attribute {
    std::string name;
    Kind type = Kind::integer;

    friend bool operator==(const Attribute&, const Attribute&) = default;
};

/// R(A_1, ..., A_n): a named, ordered list of typed attributes.
class RelationScheme {
public:
    RelationScheme(std::string name, std::vector<Attribute> attributes)
        : name_(std::move(name)), attributes_(std::move(attributes)) {
        if (attributes_.empty()) throw ValidationError("relation " + name_ + " has no attributes");
        for (std::size_t i = 0; i < attributes_.size(); ++i)
            for (std::size_t j = i + 1; j < attributes_.size(); ++j)
                if (attributes_[i].name == attributes_[j].name)
                    throw ValidationError("relation " + name_ + " repeats attribute " + attributes_[i].name);
    }

    const std::string& name() const { return name_; }
    std::size_t arity() const { return attributes_.size(); }
    const std::vector<Attribute>& attributes() const { return attributes_; }
    const Attribute& attribute(std::size_t i) const { return attributes_.at(i); }

    std::optional<std::size_t> position(std::string_view attr) const {
        for (std::size_t i = 0; i < attributes_.size(); ++i)
            if (attributes_[i].name == attr) return i;
        return std::nullopt;
    }

    std::size_t require_position(std::string_view attr) const {
        if (auto p = position(attr)) return *p;
        throw ValidationError("relation " + name_ + " has no attribute " + std::string(attr));
    }

    friend bool operator==(const RelationScheme&, const RelationScheme&) = default;

private:
    std::string name_;
    std::vector<Attribute> attributes_;
};

/// A nonempty set of relation schemes with unique names; declaration order is kept.
class Schema {
public:
    Schema() = default;
    explicit Schema(std::vector<RelationScheme> relations) : relations_(std::move(relations)) {
        for (std::size_t i = 0; i < relations_.size(); ++i)
            for (std::size_t j = i + 1; j < relations_.size(); ++j)
                if (relations_[i].name() == relations_[j].name())
                    throw ValidationError("relation " + relations_[i].name() + " declared twice");
    }

    const std::vector<RelationScheme>& relations() const { return relations_; }
    std::size_t size() const { return relations_.size(); }
    bool empty() const { return relations_.empty(); }
    const RelationScheme& relation(std::size_t i) const { return relations_.at(i); }

    std::optional<std::size_t> index_of(std::string_view name) const {
        for (std::size_t i = 0; i < relations_.size(); ++i)
            if (relations_[i].name() == name) return i;
        return std::nullopt;
    }

    const RelationScheme& require(std::string_view name) const {
        if (auto i = index_of(name)) return relations_[*i];
        throw ValidationError("unknown relation " + std::string(name));
    }

    friend bool operator==(const Schema&, const Schema&) = default;

private:
    std::vector<RelationScheme> relations_;
};

namespace detail {

inline bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
inline bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

} // namespace detail

/// Parses the line-oriented schema format:
///
///     # comment
///     relation MealTicket(Number: int, Value: int, Holder: text, Date: date)
inline Schema parse_schema(std::string_view text) {
    std::vector<RelationScheme> relations;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(start, end - start);
        ++line_no;
        start = end + 1;
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);

        std::size_t pos = 0;
        auto col = [&] { return pos + 1; };
        auto skip_ws = [&] {
            while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
        };
        auto ident = [&](const char* what) {
            skip_ws();
            if (pos >= line.size() || !detail::is_ident_start(line[pos]))
                throw ParseError(std::string("expected ") + what, line_no, col());
            std::size_t b = pos;
            while (pos < line.size() && detail::is_ident_char(line[pos])) ++pos;
            return std::string(line.substr(b, pos - b));
        };
        auto expect = [&](char c) {
            skip_ws();
            if (pos >= line.size() || line[pos] != c)
                throw ParseError(std::string("expected '") + c + "'", line_no, col());
            ++pos;
        };

        skip_ws();
        if (pos == line.size()) {
            if (end == text.size()) break;
            continue;
        }
        if (ident("'relation'") != "relation") throw ParseError("expected 'relation'", line_no, 1);
        std::string name = ident("relation name");
        expect('(');
        std::vector<Attribute> attrs;
        for (;;) {
            std::string attr = ident("attribute name");
            expect(':');
            std::size_t type_col = col();
            std::string type = ident("attribute type");
            try {
                attrs.push_back({attr, parse_kind(type)});
            } catch (const ValidationError& e) {
                throw ParseError(e.what(), line_no, type_col + 1);
            }
            skip_ws();
            if (pos < line.size() && line[pos] == ',') {
                ++pos;
                continue;
            }
            break;
        }
        expect(')');
        skip_ws();
        if (pos != line.size()) throw ParseError("trailing characters", line_no, col());
        try {
            relations.emplace_back(std::move(name), std::move(attrs));
        } catch (const ValidationError& e) {
            throw ParseError(e.what(), line_no, 1);
        }
        if (end == text.size()) break;
    }
    if (relations.empty()) throw ValidationError("schema declares no relations");
    return Schema(std::move(relations));
}

inline std::string print_schema(const Schema& s) {
    std::string out;
    for (const auto& r : s.relations()) {
        out += "relation " + r.name() + "(";
        for (std::size_t i = 0; i < r.arity(); ++i) {
            if (i) out += ", ";
            out += r.attribute(i).name + ": " + std::string(kind_name(r.attribute(i).type));
        }
        out += ")\n";
    }
    return out;
}

} // namespace incmeter

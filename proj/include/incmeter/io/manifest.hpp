#pragma once

#include "incmeter/core/database.hpp"
#include "incmeter/core/error.hpp"
#include "incmeter/core/schema.hpp"
#include "incmeter/dsl/ast.hpp"
#include "incmeter/dsl/parser.hpp"
#include "incmeter/measures/measure_id.hpp"

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace incmeter {

namespace fs = std::filesystem;

inline std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw Error("cannot read " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const fs::path& p, std::string_view text) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw Error("cannot write " + p.string());
    out << text;
    if (!out) throw Error("error writing " + p.string());
}

/// Key-value description of an instance. Paths are relative to the manifest's directory.
///
///     # comment
///     schema = schema.txt
///     constraints = constraints.dc
///     data MealTicket = MealTicket.csv
///     measures = db:IM, prop:Isharp      (optional; default all twenty)
///     evidence = true                    (optional)
struct Manifest {
    fs::path base;
    fs::path schema;
    fs::path constraints;
    std::map<std::string, fs::path> data;
    std::vector<MeasureId> measures;
    bool evidence = false;
};

inline Manifest parse_manifest(std::string_view text, const fs::path& base) {
    Manifest m;
    m.base = base;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    auto trim = [](std::string s) {
        auto b = s.find_first_not_of(" \t\r");
        if (b == std::string::npos) return std::string();
        auto e = s.find_last_not_of(" \t\r");
        return s.substr(b, e - b + 1);
    };
    while (std::getline(in, line)) {
        ++line_no;
        if (auto h = line.find('#'); h != std::string::npos) line = line.substr(0, h);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError("expected 'key = value'", line_no, 1);
        std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
        if (value.empty()) throw ParseError("missing value for " + key, line_no, eq + 2);
        if (key == "schema") {
            m.schema = base / value;
        } else if (key == "constraints") {
            m.constraints = base / value;
        } else if (key.rfind("data", 0) == 0 && key.size() > 4 && (key[4] == ' ' || key[4] == '\t')) {
            std::string rel = trim(key.substr(4));
            if (!m.data.emplace(rel, base / value).second)
                throw ParseError("relation " + rel + " has two data files", line_no, 1);
        } else if (key == "measures") {
            std::string tok;
            for (char c : value + ",") {
                if (c == ',' || c == ' ' || c == '\t') {
                    if (!tok.empty()) {
                        try {
                            m.measures.push_back(MeasureId::parse(tok));
                        } catch (const ValidationError& e) {
                            throw ParseError(e.what(), line_no, eq + 2);
                        }
                    }
                    tok.clear();
                } else {
                    tok += c;
                }
            }
        } else if (key == "evidence") {
            if (value != "true" && value != "false") throw ParseError("evidence must be true or false", line_no, eq + 2);
            m.evidence = value == "true";
        } else {
            throw ParseError("unknown key '" + key + "'", line_no, 1);
        }
    }
    if (m.schema.empty()) throw ValidationError("manifest has no schema entry");
    if (m.constraints.empty()) throw ValidationError("manifest has no constraints entry");
    return m;
}

inline Manifest load_manifest(const fs::path& path) {
    return parse_manifest(read_file(path), path.parent_path());
}

struct Instance {
    Schema schema;
    ConstraintSet constraints;
    Database database;
};

/// Prefixes an error with the file it came from.
template <typename F>
auto with_file_context(const fs::path& p, F&& f) {
    try {
        return f();
    } catch (const ParseError& e) {
        throw ParseError(p.filename().string() + ": " + e.message(), e.line(), e.column());
    } catch (const ValidationError& e) {
        throw ValidationError(p.filename().string() + ": " + e.what());
    }
}

inline Instance load_instance(const Manifest& m) {
    Instance inst;
    inst.schema = with_file_context(m.schema, [&] { return parse_schema(read_file(m.schema)); });
    inst.constraints =
        with_file_context(m.constraints, [&] { return parse_constraints(read_file(m.constraints), inst.schema); });
    for (const auto& [rel, _] : m.data)
        if (!inst.schema.index_of(rel)) throw ValidationError("manifest names data for unknown relation " + rel);
    std::vector<TextRows> batches;
    for (const auto& scheme : inst.schema.relations()) {
        auto it = m.data.find(scheme.name());
        if (it == m.data.end()) throw ValidationError("manifest has no data file for relation " + scheme.name());
        std::string text = read_file(it->second);
        if (text.find_first_not_of(" \t\r\n") == std::string::npos) continue;
        batches.push_back(with_file_context(it->second, [&] { return parse_relation_csv(scheme, text); }));
    }
    inst.database = load_database(inst.schema, batches);
    return inst;
}

inline Instance load_instance(const fs::path& manifest_path) { return load_instance(load_manifest(manifest_path)); }

} // namespace incmeter

#include "incmeter/incmeter.hpp"
#include "incmeter/kb/kb_io.hpp"
#include "incmeter/oracle/oracle.hpp"
#include "incmeter/postulates/postulates.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <iostream>
#include <limits>
#include <string>

using namespace incmeter;
using json = nlohmann::json;

namespace {

constexpr int exit_false = 1;
constexpr int exit_error = 2;
constexpr int exit_mismatch = 3;

struct Globals {
    std::string manifest;
    std::string json_out;
    std::uint64_t seed = 42;
    unsigned threads = 1;
};

json integer_json(const Integer& i) {
    if (i >= std::numeric_limits<long long>::min() && i <= std::numeric_limits<long long>::max())
        return static_cast<long long>(i);
    return i.str();
}

json value_json(const MeasureValue& v) {
    if (v.is_infinite()) return "inf";
    return json{{"num", integer_json(v.numerator())}, {"den", integer_json(v.denominator())}};
}

json rational_json(const Rational& r) { return value_json(MeasureValue(r)); }

/// Writes to the --json target, or stdout when none is given.
void emit(const Globals& g, const json& j) {
    std::string text = j.dump(2) + "\n";
    if (g.json_out.empty() || g.json_out == "-") {
        std::cout << text;
    } else {
        write_file(g.json_out, text);
    }
}

Instance load(const Globals& g) {
    if (g.manifest.empty()) throw ValidationError("--manifest is required");
    return load_instance(fs::path(g.manifest));
}

std::vector<MeasureId> parse_measure_list(const std::vector<std::string>& items) {
    std::vector<MeasureId> out;
    for (const auto& item : items) {
        std::string tok;
        for (char c : item + ",") {
            if (c == ',') {
                if (!tok.empty()) out.push_back(MeasureId::parse(tok));
                tok.clear();
            } else if (c != ' ') {
                tok += c;
            }
        }
    }
    return out;
}

json evidence_json(const MeasureEvidence& ev) {
    json j = json::object();
    if (ev.hitting_set) j["hitting_set"] = *ev.hitting_set;
    if (ev.cover) j["cover"] = *ev.cover;
    if (!ev.distribution.empty()) {
        json d = json::array();
        for (const auto& [set, p] : ev.distribution) d.push_back({{"set", set}, {"probability", rational_json(p)}});
        j["distribution"] = d;
    }
    return j;
}

int cmd_measure(const Globals& g, const std::vector<std::string>& which_raw, bool evidence) {
    if (g.manifest.empty()) throw ValidationError("--manifest is required");
    Manifest m = load_manifest(fs::path(g.manifest));
    Instance inst = load_instance(m);
    auto which = parse_measure_list(which_raw);
    if (which.empty()) which = m.measures;
    if (which.empty()) which = all_measures();
    evidence = evidence || m.evidence;
    auto report = measure_all(inst.database, inst.constraints, which, evidence);
    json values = json::object(), ev = json::object();
    for (const auto& [id, v] : report.values) values[id.str()] = value_json(v);
    json out{{"measures", values}};
    if (evidence) {
        for (const auto& [id, e] : report.evidence) ev[id.str()] = evidence_json(e);
        out["evidence"] = ev;
    }
    emit(g, out);
    return 0;
}

int cmd_decide(const Globals& g, const std::string& measure, const std::string& op, const std::string& threshold) {
    MeasureId id = MeasureId::parse(measure);
    if (op != "lv" && op != "uv" && op != "ev") throw ValidationError("decision must be lv, uv or ev, got '" + op + "'");
    MeasureValue v = MeasureValue::parse(threshold);
    if (op == "lv" && !(v > MeasureValue(0))) throw ValidationError("lv needs a threshold greater than 0");
    Instance inst = load(g);
    MeasureValue actual = incmeter::measure(id, inst.database, inst.constraints);
    bool verdict = op == "lv" ? actual >= v : op == "uv" ? actual <= v : actual == v;
    std::cout << (verdict ? "true" : "false") << "\n";
    if (!g.json_out.empty() && g.json_out != "-")
        write_file(g.json_out, json{{"measure", id.str()},
                                    {"op", op},
                                    {"threshold", value_json(v)},
                                    {"value", value_json(actual)},
                                    {"result", verdict}}
                                   .dump(2) +
                                   "\n");
    return verdict ? 0 : exit_false;
}

int cmd_explain(const Globals& g, bool with_mcs) {
    Instance inst = load(g);
    Analysis a(inst.database, inst.constraints);
    const auto& h = a.hypergraph();
    json mi = json::array();
    for (std::size_t i = 0; i < h.edges.size(); ++i) {
        json w = json::array();
        for (auto c : h.witnesses[i]) w.push_back(inst.constraints[c].name);
        mi.push_back({{"tuples", a.labels(h.edges[i])}, {"constraints", w}});
    }
    const auto& cls = a.classification();
    json out{{"tuples", inst.database.size()},
             {"consistent", h.edges.empty()},
             {"minimal_inconsistent", mi},
             {"problematic", a.labels(cls.problematic)},
             {"free", a.labels(cls.free)},
             {"contradictory", a.labels(cls.contradictory)}};
    json tuples = json::object();
    for (TupleId t : inst.database.ids()) {
        json vals = json::array();
        for (const auto& v : inst.database.tuple(t).values) vals.push_back(v.str());
        tuples[inst.database.label(t)] = vals;
    }
    out["values"] = tuples;
    if (with_mcs) {
        json mc = json::array();
        for (const auto& s : a.mc()) mc.push_back(a.labels(s));
        out["maximal_consistent"] = mc;
    }
    emit(g, out);
    return 0;
}

int cmd_transform(const Globals& g, const std::string& out_path, bool dimacs, bool paper_form) {
    Instance inst = load(g);
    PropKB kb = transform(inst.database, inst.constraints);
    std::string text;
    if (dimacs) {
        text = kb_to_dimacs(kb);
    } else if (paper_form) {
        for (std::size_t i = 0; i < kb.atoms.size(); ++i)
            text += kb.atom_name(static_cast<AtomId>(i)) + "  " + kb.atoms[i].label + "\n";
        for (std::size_t f = 0; f < kb.formulas.size(); ++f)
            text += kb.formula_name(f) + " = " + kb.formula_text(f) + "\n";
    } else {
        text = kb_to_json(kb).dump(2) + "\n";
    }
    if (out_path.empty() || out_path == "-") {
        std::cout << text;
    } else {
        write_file(out_path, text);
    }
    return 0;
}

std::vector<Family> families(const std::string& f) {
    if (f == "both") return {Family::propositional, Family::database};
    return {parse_family(f)};
}

int cmd_check_postulates(const Globals& g, const std::string& family, std::size_t trials,
                         const std::string& report_path, const std::string& store) {
    CheckOptions opt;
    opt.trials = trials;
    opt.seed = g.seed;
    if (!store.empty()) opt.store = fs::path(store);
    std::string report = "# Postulate checks\n\n";
    json cells = json::array();
    std::size_t mismatches = 0;
    for (Family f : families(family)) {
        auto results = check_table(f, opt);
        report += table_report(f, results, opt) + "\n";
        for (const auto& r : results) {
            if (!r.matches()) ++mismatches;
            cells.push_back({{"measure", r.measure.str()},
                             {"postulate", std::string(postulate_name(r.postulate))},
                             {"expected", r.expected},
                             {"verdict", std::string(verdict_name(r.verdict))},
                             {"trials", r.trials},
                             {"instances", r.instances},
                             {"violations", r.violations},
                             {"matches", r.matches()}});
        }
    }
    if (!report_path.empty()) write_file(report_path, report);
    if (!g.json_out.empty()) {
        emit(g, json{{"cells", cells}, {"mismatches", mismatches}, {"seed", g.seed}, {"trials", trials}});
    } else {
        std::cout << report;
    }
    return mismatches == 0 ? 0 : exit_mismatch;
}

int cmd_find_counterexamples(const Globals& g, const std::string& family, std::size_t budget,
                             const std::string& store, const std::vector<std::string>& only) {
    std::size_t missing = 0;
    for (Family f : families(family))
        for (auto p : table_postulates)
            for (auto n : all_measure_names) {
                MeasureId m{f, n};
                if (expected_satisfied(f, n, p)) continue;
                std::string cell = m.str() + ":" + std::string(postulate_name(p));
                if (!only.empty() && std::find(only.begin(), only.end(), cell) == only.end()) continue;
                auto s = find_counterexample(m, p, g.seed, budget);
                if (!s) {
                    std::cout << cell << ": none found\n";
                    ++missing;
                    continue;
                }
                fs::path dir = fs::path(store) / bundle_dir_name(m, p);
                write_counterexample(dir, Counterexample{m, *s, "found by search, seed " + std::to_string(g.seed)});
                bool ok = violates(read_counterexample(dir));
                std::cout << cell << ": " << (ok ? "stored " : "STORED BUT DOES NOT VERIFY ") << dir.string() << "\n";
                if (!ok) ++missing;
            }
    return missing == 0 ? 0 : exit_mismatch;
}

/// Writes the instance of a failed comparison where it can be replayed with --manifest.
fs::path write_repro(const Database& db, const ConstraintSet& cs, std::uint64_t trial_seed) {
    fs::path dir = fs::temp_directory_path() / ("incmeter-repro-" + std::to_string(trial_seed));
    fs::create_directories(dir);
    write_file(dir / "schema.txt", print_schema(db.schema()));
    write_file(dir / "constraints.dc", pretty_print(cs));
    std::string manifest = "schema = schema.txt\nconstraints = constraints.dc\n";
    for (std::size_t r = 0; r < db.schema().size(); ++r) {
        std::string name = db.schema().relation(r).name();
        write_file(dir / (name + ".csv"), relation_csv(db, r));
        manifest += "data " + name + " = " + name + ".csv\n";
    }
    write_file(dir / "manifest.txt", manifest);
    return dir;
}

int cmd_oracle_check(const Globals& g, std::size_t trials) {
    std::size_t mismatches = 0;
    for (std::size_t t = 0; t < trials; ++t) {
        std::uint64_t s = derive_seed(g.seed, 0x0ac1e, t);
        InstanceGen gen(s, InstanceGen::Limits{6, 3, 2});
        ConstraintSet cs = gen.constraints();
        Database db = gen.database();
        for (const auto& id : all_measures()) {
            MeasureValue fast = incmeter::measure(id, db, cs), slow = oracle::oracle_measure(id, db, cs);
            if (fast == slow) continue;
            ++mismatches;
            auto dir = write_repro(db, cs, s);
            std::cerr << "trial " << t << ": " << id.str() << " = " << fast << ", oracle " << slow << "; repro in "
                      << dir.string() << "\n";
        }
    }
    json out{{"trials", trials}, {"seed", g.seed}, {"mismatches", mismatches}};
    emit(g, out);
    return mismatches == 0 ? 0 : exit_mismatch;
}

void report_error(const std::exception& e) {
    json err{{"message", e.what()}};
    if (const auto* p = dynamic_cast<const ParseError*>(&e)) {
        err = json{{"kind", "parse"}, {"message", p->message()}, {"line", p->line()}, {"column", p->column()}};
    } else if (dynamic_cast<const TypeError*>(&e)) {
        err["kind"] = "type";
    } else if (dynamic_cast<const ValidationError*>(&e)) {
        err["kind"] = "validation";
    } else if (dynamic_cast<const BoundExceeded*>(&e)) {
        err["kind"] = "bound";
    } else {
        err["kind"] = "error";
    }
    std::cerr << json{{"error", err}}.dump() << "\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Inconsistency measures for relational databases with denial constraints"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    app.add_option("--manifest", g.manifest, "Instance manifest");
    app.add_option("--json", g.json_out, "Write JSON output to PATH (- for stdout)");
    app.add_option("--seed", g.seed, "Random seed")->default_val(42);
    app.add_option("--threads", g.threads, "Worker threads")->check(CLI::Range(1u, 1024u));

    std::vector<std::string> which;
    bool evidence = false;
    auto* measure = app.add_subcommand("measure", "Compute measures");
    measure->add_option("--measures", which, "Comma-separated ids such as db:IM,prop:Isharp");
    measure->add_flag("--evidence", evidence, "Include hitting sets, covers and distributions");

    std::string d_measure, d_op, d_value;
    auto* decide = app.add_subcommand("decide", "Decide I >= v (lv), I <= v (uv) or I = v (ev)");
    decide->add_option("measure", d_measure)->required();
    decide->add_option("op", d_op)->required();
    decide->add_option("value", d_value)->required();

    bool with_mcs = false;
    auto* explain = app.add_subcommand("explain", "Minimal inconsistent subsets and tuple classes");
    explain->add_flag("--mcs", with_mcs, "Also list the maximal consistent subsets");

    std::string t_out;
    bool t_dimacs = false, t_paper = false;
    auto* transform_cmd = app.add_subcommand("transform", "Export the propositional knowledge base");
    transform_cmd->add_option("--out", t_out, "Output file (default stdout)");
    transform_cmd->add_flag("--dimacs-like", t_dimacs, "DIMACS-style clause listing");
    transform_cmd->add_flag("--paper-form", t_paper, "Atom and formula listing");

    std::string c_family = "both", c_report, c_store = "counterexamples";
    std::size_t c_trials = 1000;
    auto* check = app.add_subcommand("check-postulates", "Check the postulate satisfaction tables");
    check->add_option("--family", c_family, "prop, db or both")->default_val("both");
    check->add_option("--trials", c_trials, "Random instances per table row")->default_val(1000);
    check->add_option("--report", c_report, "Write the markdown report to PATH");
    check->add_option("--store", c_store, "Counterexample directory")->default_val("counterexamples");

    std::size_t o_trials = 500;
    auto* oracle_cmd = app.add_subcommand("oracle-check", "Compare optimized measures with brute force");
    oracle_cmd->add_option("--trials", o_trials, "Random instances")->default_val(500);

    std::string f_family = "both", f_store = "counterexamples";
    std::size_t f_budget = 3000;
    std::vector<std::string> f_only;
    auto* find = app.add_subcommand("find-counterexamples", "Search for and store counterexamples");
    find->add_option("--family", f_family, "prop, db or both")->default_val("both");
    find->add_option("--budget", f_budget, "Random instances per cell")->default_val(3000);
    find->add_option("--store", f_store, "Counterexample directory")->default_val("counterexamples");
    find->add_option("--only", f_only, "Restrict to cells such as db:IB:Penalty");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : exit_error;
    }

    try {
        if (*measure) return cmd_measure(g, which, evidence);
        if (*decide) return cmd_decide(g, d_measure, d_op, d_value);
        if (*explain) return cmd_explain(g, with_mcs);
        if (*transform_cmd) return cmd_transform(g, t_out, t_dimacs, t_paper);
        if (*check) return cmd_check_postulates(g, c_family, c_trials, c_report, c_store);
        if (*oracle_cmd) return cmd_oracle_check(g, o_trials);
        if (*find) return cmd_find_counterexamples(g, f_family, f_budget, f_store, f_only);
    } catch (const std::exception& e) {
        report_error(e);
        return exit_error;
    }
    return exit_error;
}

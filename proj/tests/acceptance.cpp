// One line per criterion: `criterion N: PASS|FAIL <detail>`. With an argument, runs only
// that criterion; the exit status is nonzero if any run criterion fails.

#include "support.hpp"

#include "incmeter/oracle/oracle.hpp"
#include "incmeter/postulates/postulates.hpp"

#include <array>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <sys/wait.h>

using namespace incmeter;
using Clock = std::chrono::steady_clock;

namespace {

struct Result {
    bool pass = true;
    std::string detail;
};

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

std::string fmt(double s) {
    std::ostringstream o;
    o.precision(3);
    o << s << "s";
    return o.str();
}

const std::vector<std::string> db_golden = {"1", "3", "2", "4", "2", "2", "7", "inf", "2", "1"};
const std::vector<std::string> prop_golden = {"1", "4", "17/12", "9", "14", "2", "9", "1", "2", "1/2"};

Result goldens(Family f, const std::vector<std::string>& want) {
    Result r;
    auto start = Clock::now();
    auto inst = fixtures::load_sample("mealticket");
    auto ids = all_measures(f);
    auto report = measure_all(inst.database, inst.constraints, ids);
    double t = seconds_since(start);
    std::string bad;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        const auto& got = report.at(ids[i]);
        if (got != MeasureValue::parse(want[i])) bad += " " + ids[i].str() + "=" + got.str() + " (want " + want[i] + ")";
    }
    r.pass = bad.empty() && t < 1.0;
    r.detail = bad.empty() ? "all ten equal" : "mismatch:" + bad;
    r.detail += ", " + fmt(t);
    return r;
}

Result structural() {
    Result r;
    std::vector<std::string> bad;
    auto inst = fixtures::load_sample("mealticket");
    Analysis a(inst.database, inst.constraints);
    std::vector<std::vector<std::string>> mi, mc;
    for (const auto& s : a.mi()) mi.push_back(a.labels(s));
    for (const auto& s : a.mc()) mc.push_back(a.labels(s));
    std::vector<std::vector<std::string>> want_mi = {
        {"MealTicket#1", "MealTicket#3"}, {"MealTicket#2", "MealTicket#3"}, {"MealTicket#5"}};
    std::vector<std::vector<std::string>> want_mc = {
        {"MealTicket#1", "MealTicket#2", "MealTicket#4", "MealTicket#6", "MealTicket#7"},
        {"MealTicket#3", "MealTicket#4", "MealTicket#6", "MealTicket#7"}};
    if (mi != want_mi) bad.push_back("MI(D)");
    if (mc != want_mc) bad.push_back("MC(D)");
    if (a.mc_kb().size() != 15) bad.push_back("|MC(K)|=" + std::to_string(a.mc_kb().size()) + " (want 15)");

    std::set<std::vector<std::string>> mi_kb, want_kb = {
        {"a5", "g(c1)"}, {"a1", "a3", "g(c3)"}, {"a2", "a3", "g(c3)"}, {"a5", "a6", "a7", "g(c4)"}};
    for (const auto& s : a.mi_kb()) {
        auto l = a.kb_labels(s);
        std::sort(l.begin(), l.end());
        mi_kb.insert(l);
    }
    std::set<std::vector<std::string>> sorted_want;
    for (auto w : want_kb) {
        std::sort(w.begin(), w.end());
        sorted_want.insert(w);
    }
    if (mi_kb != sorted_want || a.mi_kb().size() != 4) bad.push_back("MI(K)");

    auto ex2 = fixtures::load_sample("example2");
    auto kb = transform(ex2.database, ex2.constraints);
    if (kb.size() != 2 || kb.formula_text(0) != "!a1" || mi_of_kb(kb).size() != 1) bad.push_back("example K={a1,!a1}");

    r.pass = bad.empty();
    if (bad.empty()) {
        r.detail = "all structural checks hold";
    } else {
        r.detail = "mismatch:";
        for (const auto& b : bad) r.detail += " " + b + ";";
    }
    return r;
}

struct RandomInstance {
    ConstraintSet cs;
    Database db;
};

RandomInstance instance(std::uint64_t t) {
    InstanceGen gen(derive_seed(42, 0x0ac1e, t), InstanceGen::Limits{6, 3, 2});
    RandomInstance out;
    out.cs = gen.constraints();
    out.db = gen.database();
    return out;
}

Result oracle_equivalence() {
    Result r;
    auto start = Clock::now();
    std::size_t mismatches = 0;
    std::string first;
    for (std::uint64_t t = 0; t < 500; ++t) {
        auto in = instance(t);
        auto report = measure_all(in.db, in.cs, all_measures());
        for (const auto& id : all_measures()) {
            auto want = oracle::oracle_measure(id, in.db, in.cs);
            if (report.at(id) != want) {
                if (!mismatches)
                    first = " first: instance " + std::to_string(t) + " " + id.str() + " got " + report.at(id).str() +
                            " oracle " + want.str();
                ++mismatches;
            }
        }
    }
    double s = seconds_since(start);
    r.pass = mismatches == 0 && s < 120.0;
    r.detail = std::to_string(mismatches) + " mismatches over 500 instances x 20 measures, " + fmt(s) + first;
    return r;
}

Result identities() {
    Result r;
    std::size_t hs = 0, ch = 0, card = 0;
    for (std::uint64_t t = 0; t < 500; ++t) {
        auto in = instance(t);
        Analysis a(in.db, in.cs);
        if (a.value({Family::propositional, MeasureName::hs}) != a.value({Family::propositional, MeasureName::B})) ++hs;
        if (a.value({Family::database, MeasureName::C}) != a.value({Family::database, MeasureName::H})) ++ch;
        std::size_t mi_db = 0;
        for (const auto& sets : minimal_violations_per_constraint(in.db, in.cs)) mi_db += sets.size();
        if (a.mi_kb().size() > mi_db) ++card;
    }
    r.pass = hs == 0 && ch == 0 && card == 0;
    r.detail = "failures: Ihs=IB " + std::to_string(hs) + ", IC=IH " + std::to_string(ch) + ", |MI(K)|<=|MI(D)| " +
               std::to_string(card) + " of 500";
    return r;
}

Result axioms() {
    Result r;
    std::map<std::string, std::size_t> violated;
    std::size_t pairs = 0;
    for (auto f : {Family::propositional, Family::database}) {
        for (auto p : {PostulateId::Consistency, PostulateId::Monotony}) {
            for (std::uint64_t t = 0; t < 500; ++t) {
                InstanceGen gen(derive_seed(42, 0xa1, static_cast<std::uint64_t>(p), t), InstanceGen::Limits{6, 3, 2});
                for (const auto& s : random_scenarios(f, p, gen)) {
                    if (p == PostulateId::Monotony) ++pairs;
                    auto row = evaluate(s);
                    for (auto n : all_measure_names)
                        if (row[static_cast<std::size_t>(n)] == Outcome::violated)
                            ++violated[MeasureId{f, n}.str() + ":" + std::string(postulate_name(p))];
                }
            }
        }
    }
    r.pass = violated.empty();
    r.detail = std::to_string(pairs) + " monotony pairs, 1000 consistency instances, 20 measures";
    for (const auto& [k, v] : violated) r.detail += "; " + k + " violated " + std::to_string(v);
    return r;
}

struct Run {
    int code = -1;
    std::string out;
};

Run cli(const std::string& args) {
    std::string cmd = std::string(INCMETER_CLI) + " " + args + " 2>&1";
    Run r;
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) return r;
    std::array<char, 4096> buf{};
    while (std::size_t n = fread(buf.data(), 1, buf.size(), p)) r.out.append(buf.data(), n);
    int status = pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

Result postulate_tables() {
    Result r;
    auto start = Clock::now();
    fs::path store = fixtures::source_dir() / "counterexamples";
    auto run = cli("--seed 42 check-postulates --trials 1000 --store " + store.string());
    double s = seconds_since(start);
    r.pass = run.code == 0;
    std::istringstream in(run.out);
    std::string line, mismatches;
    while (std::getline(in, line))
        if (line.rfind("- ", 0) == 0) mismatches += " " + line.substr(2) + ";";
    r.detail = "exit " + std::to_string(run.code) + ", " + fmt(s);
    if (!mismatches.empty()) r.detail += ", mismatched cells:" + mismatches;
    return r;
}

Database fd_database(const Schema& s, std::size_t n, std::uint64_t seed) {
    // Mostly unique keys; about 5% of tuples share a key with one other tuple and differ on V.
    std::mt19937_64 rng(seed);
    std::vector<std::vector<Tuple>> grouped(1);
    std::size_t key = 0;
    while (grouped[0].size() < n) {
        ++key;
        grouped[0].push_back(Tuple{0, {Value::integer(static_cast<long long>(key)), Value::integer(0)}});
        if (grouped[0].size() < n && std::bernoulli_distribution(0.026)(rng))
            grouped[0].push_back(Tuple{0, {Value::integer(static_cast<long long>(key)), Value::integer(1)}});
    }
    return Database::from_groups(s, std::move(grouped));
}

Result tractability() {
    Result r;
    auto schema = parse_schema("relation R(K: int, V: int)\n");
    auto cs = parse_constraints("fd f: R: K -> V\n", schema);
    const std::vector<MeasureId> ids = {{Family::database, MeasureName::B},
                                        {Family::database, MeasureName::M},
                                        {Family::database, MeasureName::sharp},
                                        {Family::database, MeasureName::P}};
    struct Timing {
        double seconds = 1e9;
        std::size_t pairs = 0, problematic = 0;
    };
    auto timed = [&](std::size_t n) {
        auto db = fd_database(schema, n, 8);
        Timing out;
        for (int rep = 0; rep < 7; ++rep) {
            auto start = Clock::now();
            auto report = measure_all(db, cs, ids);
            out.seconds = std::min(out.seconds, seconds_since(start));
            out.pairs = static_cast<std::size_t>(report.at(ids[1]).rational().convert_to<double>());
            out.problematic = static_cast<std::size_t>(report.at(ids[3]).rational().convert_to<double>());
        }
        return out;
    };
    Timing t10 = timed(10000), t20 = timed(20000);
    double ratio = t10.seconds > 0 ? t20.seconds / t10.seconds : 0;
    r.pass = t10.seconds < 5.0 && ratio < 4.0;
    std::ostringstream o;
    o.precision(3);
    o << "n=10000: " << fmt(t10.seconds) << " (" << t10.pairs << " violating pairs, " << t10.problematic
      << " tuples in them), n=20000: " << fmt(t20.seconds) << " (" << t20.pairs << " pairs), ratio " << ratio;
    r.detail = o.str();
    return r;
}

Result round_trips() {
    Result r;
    std::size_t bad = 0;
    for (std::uint64_t i = 0; i < 200; ++i) {
        fixtures::RandomAst gen(derive_seed(42, 9, i));
        auto cs = gen.constraint_set();
        try {
            if (!(parse_constraints(pretty_print(cs), fixtures::ast_schema()) == cs)) ++bad;
        } catch (const Error&) {
            ++bad;
        }
    }
    r.pass = bad == 0;
    r.detail = std::to_string(200 - bad) + " of 200 constraint sets survive print then parse";
    return r;
}

Result decisions() {
    Result r;
    std::string m = "--manifest " + fixtures::sample("mealticket").string();
    std::vector<std::string> bad;
    auto expect = [&](const std::string& args, bool want) {
        auto run = cli(m + " decide " + args);
        bool ok = want ? (run.code == 0 && run.out == "true\n") : (run.code == 1 && run.out == "false\n");
        if (!ok) bad.push_back(args + " -> " + (run.out.empty() ? "exit " + std::to_string(run.code) : run.out.substr(0, run.out.find('\n'))));
    };
    for (auto f : {Family::database, Family::propositional}) {
        const auto& golden = f == Family::database ? db_golden : prop_golden;
        auto ids = all_measures(f);
        for (std::size_t i = 0; i < ids.size(); ++i) {
            MeasureValue v = MeasureValue::parse(golden[i]);
            std::string id = ids[i].str(), vs = v.str();
            expect(id + " lv " + vs, true);
            expect(id + " uv " + vs, true);
            expect(id + " ev " + vs, true);
            if (v.is_infinite()) {
                expect(id + " ev 1000000", false);
                expect(id + " lv 1000000", true);
                expect(id + " uv 1000000", false);
            } else {
                expect(id + " ev " + (v + MeasureValue(1)).str(), false);
            }
        }
    }
    r.pass = bad.empty();
    r.detail = bad.empty() ? "all decisions as expected" : std::to_string(bad.size()) + " unexpected:";
    for (const auto& b : bad) r.detail += " [" + b + "]";
    return r;
}

} // namespace

int main(int argc, char** argv) {
    const std::vector<std::function<Result()>> criteria = {
        [] { return goldens(Family::database, db_golden); },
        [] { return goldens(Family::propositional, prop_golden); },
        structural,
        oracle_equivalence,
        identities,
        axioms,
        postulate_tables,
        tractability,
        round_trips,
        decisions,
    };
    std::vector<std::size_t> which;
    if (argc > 1) {
        for (int i = 1; i < argc; ++i) which.push_back(std::stoul(argv[i]));
    } else {
        for (std::size_t i = 1; i <= criteria.size(); ++i) which.push_back(i);
    }
    bool all = true;
    for (std::size_t n : which) {
        if (n < 1 || n > criteria.size()) {
            std::cerr << "no criterion " << n << "\n";
            return 2;
        }
        Result r;
        try {
            r = criteria[n - 1]();
        } catch (const std::exception& e) {
            r = Result{false, std::string("error: ") + e.what()};
        }
        std::cout << "criterion " << n << ": " << (r.pass ? "PASS" : "FAIL") << " " << r.detail << std::endl;
        all = all && r.pass;
    }
    return all ? 0 : 1;
}

#include "support.hpp"

#include "incmeter/kb/kb_io.hpp"
#include "incmeter/postulates/postulates.hpp"

#include <json.hpp>

#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <sys/wait.h>

using namespace incmeter;

namespace {

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

std::string manifest(const std::string& name) { return "--manifest " + fixtures::sample(name).string(); }

std::size_t index(MeasureName n) { return static_cast<std::size_t>(n); }

} // namespace

TEST(Postulates, ExpectedTablesHaveTheRightShape) {
    std::size_t prop = 0, db = 0;
    for (auto p : table_postulates)
        for (auto n : all_measure_names) {
            prop += expected_satisfied(Family::propositional, n, p);
            db += expected_satisfied(Family::database, n, p);
        }
    EXPECT_EQ(prop, 56u);
    EXPECT_EQ(db, 59u);
    EXPECT_TRUE(expected_satisfied(Family::database, MeasureName::M, PostulateId::Penalty));
    EXPECT_FALSE(expected_satisfied(Family::database, MeasureName::A, PostulateId::Penalty));
    EXPECT_TRUE(expected_satisfied(Family::propositional, MeasureName::eta, PostulateId::Attenuation));
    EXPECT_FALSE(expected_satisfied(Family::database, MeasureName::eta, PostulateId::Attenuation));
    for (auto n : all_measure_names) {
        EXPECT_TRUE(expected_satisfied(Family::database, n, PostulateId::Consistency));
        EXPECT_TRUE(expected_satisfied(Family::propositional, n, PostulateId::Monotony));
    }
}

TEST(Postulates, NamesRoundTrip) {
    for (auto p : all_postulates) EXPECT_EQ(parse_postulate(postulate_name(p)), p);
    EXPECT_EQ(parse_family("db"), Family::database);
    EXPECT_EQ(postulate_title(PostulateId::FreeFormulaIndependence), "Free-Formula Independence");
    EXPECT_EQ(bundle_dir_name(MeasureId::parse("db:IB"), PostulateId::Penalty), "db-IB-Penalty");
}

TEST(Postulates, RemovingAProblematicTuple) {
    auto inst = fixtures::load_sample("mealticket");
    Scenario s;
    s.family = Family::database;
    s.postulate = PostulateId::Penalty;
    s.left = Side{inst.constraints, inst.database};
    s.drop_tuple = inst.database.tuple(TupleId{0});
    auto row = evaluate(s);
    EXPECT_EQ(row[index(MeasureName::M)], Outcome::held);
    EXPECT_EQ(row[index(MeasureName::P)], Outcome::held);
    // MC(D) stays at two sets when t1 leaves.
    EXPECT_EQ(row[index(MeasureName::A)], Outcome::violated);
}

TEST(Postulates, RemovingAFreeTupleIsVacuousForPenalty) {
    auto inst = fixtures::load_sample("mealticket");
    Scenario s;
    s.family = Family::database;
    s.postulate = PostulateId::Penalty;
    s.left = Side{inst.constraints, inst.database};
    s.drop_tuple = inst.database.tuple(TupleId{3});
    for (auto o : evaluate(s)) EXPECT_EQ(o, Outcome::vacuous);
}

TEST(Postulates, SingletonConflictIsNotNormalizedByHs) {
    auto inst = fixtures::load_sample("example2");
    Scenario s;
    s.family = Family::database;
    s.postulate = PostulateId::MINormalization;
    s.left = Side{inst.constraints, inst.database};
    auto row = evaluate(s);
    EXPECT_EQ(row[index(MeasureName::hs)], Outcome::violated);
    EXPECT_EQ(row[index(MeasureName::M)], Outcome::held);
    EXPECT_EQ(row[index(MeasureName::B)], Outcome::held);
}

TEST(Postulates, AlmostConsistencyFamily) {
    auto m3 = almost_consistency_member(3);
    EXPECT_EQ(m3.database.size(), 3u);
    EXPECT_EQ(conflict_hypergraph(m3.database, m3.constraints).edges.size(), 1u);
    auto row = almost_consistency_family(Family::database);
    EXPECT_EQ(row[index(MeasureName::sharp)], Outcome::held);
    EXPECT_EQ(row[index(MeasureName::M)], Outcome::violated);
}

TEST(Postulates, StoredCounterexamplesVerify) {
    fs::path store = fixtures::source_dir() / "counterexamples";
    ASSERT_TRUE(fs::is_directory(store));
    std::size_t bundles = 0;
    for (const auto& entry : fs::directory_iterator(store)) {
        if (!entry.is_directory()) continue;
        ++bundles;
        auto cx = read_counterexample(entry.path());
        EXPECT_EQ(bundle_dir_name(cx.measure, cx.scenario.postulate), entry.path().filename().string());
        EXPECT_FALSE(expected_satisfied(cx.measure.family, cx.measure.name, cx.scenario.postulate)) << entry.path();
        EXPECT_TRUE(violates(cx)) << entry.path();
    }
    EXPECT_GE(bundles, 80u);
}

TEST(Postulates, BundleRoundTrip) {
    auto src = read_counterexample(fixtures::source_dir() / "counterexamples" / "db-IA-Penalty");
    fs::path tmp = fs::temp_directory_path() / "incmeter-bundle-test";
    fs::remove_all(tmp);
    write_counterexample(tmp, src);
    auto back = read_counterexample(tmp);
    EXPECT_EQ(back.measure, src.measure);
    EXPECT_EQ(back.scenario.left.constraints, src.scenario.left.constraints);
    EXPECT_EQ(back.scenario.left.database.tuples(), src.scenario.left.database.tuples());
    EXPECT_EQ(back.scenario.drop_tuple, src.scenario.drop_tuple);
    EXPECT_TRUE(violates(back));
    fs::remove_all(tmp);
}

TEST(Postulates, SmallRowCheck) {
    CheckOptions opt;
    opt.trials = 40;
    opt.store = fixtures::source_dir() / "counterexamples";
    auto row = check_row(Family::database, PostulateId::MINormalization, opt);
    for (const auto& r : row) EXPECT_TRUE(r.matches()) << r.measure.str() << " " << verdict_name(r.verdict);
}

TEST(Cli, MeasureJson) {
    auto r = cli(manifest("mealticket") + " measure --measures db:IM,prop:Isharp,db:Ihs");
    ASSERT_EQ(r.code, 0) << r.out;
    auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["measures"]["db:IM"]["num"], 3);
    EXPECT_EQ(j["measures"]["prop:Isharp"]["num"], 17);
    EXPECT_EQ(j["measures"]["prop:Isharp"]["den"], 12);
    EXPECT_EQ(j["measures"]["db:Ihs"], "inf");
    EXPECT_EQ(j["measures"].size(), 3u);
}

TEST(Cli, DecideExitCodes) {
    auto m = manifest("mealticket");
    auto yes = cli(m + " decide db:IM ev 3");
    EXPECT_EQ(yes.code, 0);
    EXPECT_EQ(yes.out, "true\n");
    auto no = cli(m + " decide db:IM ev 4");
    EXPECT_EQ(no.code, 1);
    EXPECT_EQ(no.out, "false\n");
    EXPECT_EQ(cli(m + " decide db:Ihs lv 1000000").code, 0);
    EXPECT_EQ(cli(m + " decide db:Ihs uv 1000000").code, 1);
    EXPECT_EQ(cli(m + " decide prop:Ieta uv 0.5").code, 0);
    EXPECT_EQ(cli(m + " decide prop:Ieta lv 2/3").code, 1);
    EXPECT_EQ(cli(m + " decide db:IM gt 3").code, 2);
    EXPECT_EQ(cli(m + " decide db:Inope ev 3").code, 2);
}

TEST(Cli, Explain) {
    auto r = cli(manifest("mealticket") + " explain --mcs");
    ASSERT_EQ(r.code, 0) << r.out;
    auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["minimal_inconsistent"].size(), 3u);
    EXPECT_EQ(j["free"], nlohmann::json({"MealTicket#4", "MealTicket#6", "MealTicket#7"}));
    EXPECT_EQ(j["contradictory"], nlohmann::json({"MealTicket#5"}));
    EXPECT_EQ(j["maximal_consistent"].size(), 2u);
}

TEST(Cli, Transform) {
    auto r = cli(manifest("mealticket") + " transform");
    ASSERT_EQ(r.code, 0) << r.out;
    auto kb = kb_from_json(nlohmann::ordered_json::parse(r.out));
    EXPECT_EQ(kb.size(), 10u);
    auto d = cli(manifest("mealticket") + " transform --dimacs-like");
    EXPECT_EQ(d.out.substr(0, 11), "p cnf 7 11\n");
}

TEST(Cli, ErrorsAreJsonWithExitTwo) {
    fs::path dir = fs::temp_directory_path() / "incmeter-cli-error";
    fs::create_directories(dir);
    write_file(dir / "schema.txt", "relation R(A: int)\n");
    write_file(dir / "constraints.dc", "denial c: R(x) -> x > \"a\"\n");
    write_file(dir / "R.csv", "A\n1\n");
    write_file(dir / "manifest.txt", "schema = schema.txt\nconstraints = constraints.dc\ndata R = R.csv\n");
    auto r = cli("--manifest " + (dir / "manifest.txt").string() + " measure");
    EXPECT_EQ(r.code, 2);
    auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["error"]["line"], 1);
    EXPECT_EQ(j["error"]["column"], 1);
    EXPECT_NE(j["error"]["message"].get<std::string>().find("cannot compare int with text"), std::string::npos);
    EXPECT_EQ(cli("--manifest " + (dir / "missing.txt").string() + " measure").code, 2);
    fs::remove_all(dir);
}

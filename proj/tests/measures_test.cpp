#include "support.hpp"

#include "incmeter/oracle/oracle.hpp"
#include "incmeter/oracle/three_valued.hpp"
#include "incmeter/postulates/generator.hpp"

#include <gtest/gtest.h>

using namespace incmeter;

namespace {

MeasureValue val(const std::string& s) { return MeasureValue::parse(s); }

void expect_values(Family f, const std::vector<std::string>& want) {
    auto inst = fixtures::load_sample("mealticket");
    auto ids = all_measures(f);
    ASSERT_EQ(ids.size(), want.size());
    auto report = measure_all(inst.database, inst.constraints, ids);
    for (std::size_t i = 0; i < ids.size(); ++i) EXPECT_EQ(report.at(ids[i]), val(want[i])) << ids[i].str();
}

} // namespace

TEST(Measures, MealticketDatabaseFamily) {
    expect_values(Family::database, {"1", "3", "2", "4", "2", "2", "7", "inf", "2", "1"});
}

// K has twelve maximal consistent subsets and no self-contradictory member.
TEST(Measures, MealticketPropositionalFamily) {
    expect_values(Family::propositional, {"1", "4", "17/12", "9", "11", "2", "9", "1", "2", "1/2"});
}

TEST(Measures, MealticketSubsets) {
    auto inst = fixtures::load_sample("mealticket");
    Analysis a(inst.database, inst.constraints);
    ASSERT_EQ(a.mc().size(), 2u);
    EXPECT_EQ(a.labels(a.mc()[1]),
              (std::vector<std::string>{"MealTicket#3", "MealTicket#4", "MealTicket#6", "MealTicket#7"}));
    EXPECT_EQ(a.mi_kb().size(), 4u);
    EXPECT_EQ(a.mc_kb().size(), 12u);
    EXPECT_EQ(a.mc(), oracle::oracle_mc(inst.database, inst.constraints));
}

TEST(Measures, ConsistentDatabaseIsZeroEverywhere) {
    auto inst = fixtures::load_sample("consistent");
    auto report = measure_all(inst.database, inst.constraints, all_measures());
    for (const auto& [id, v] : report.values) EXPECT_EQ(v, MeasureValue(0)) << id.str();
}

TEST(Measures, SelfContradictoryTupleMakesHsInfinite) {
    auto inst = fixtures::load_sample("example2");
    EXPECT_EQ(measure(MeasureId::parse("db:Ihs"), inst.database, inst.constraints), MeasureValue::infinity());
    EXPECT_EQ(measure(MeasureId::parse("prop:Ihs"), inst.database, inst.constraints), MeasureValue(1));
    EXPECT_EQ(measure(MeasureId::parse("prop:IM"), inst.database, inst.constraints), MeasureValue(1));
    EXPECT_EQ(measure(MeasureId::parse("db:IM"), inst.database, inst.constraints), MeasureValue(1));
}

TEST(Measures, OnlyNeededIntermediatesAreBuilt) {
    auto inst = fixtures::load_sample("mealticket");
    {
        Analysis a(inst.database, inst.constraints);
        a.value(MeasureId::parse("db:IB"));
        EXPECT_EQ(a.computed().count("kb"), 0u);
        EXPECT_EQ(a.computed().count("mc_db"), 0u);
        EXPECT_EQ(a.computed().count("lp_db"), 0u);
    }
    {
        Analysis a(inst.database, inst.constraints);
        a.value(MeasureId::parse("db:IM"));
        a.value(MeasureId::parse("db:IP"));
        EXPECT_EQ(a.computed(), (std::set<std::string>{"mi_db"}));
    }
    {
        Analysis a(inst.database, inst.constraints);
        a.value(MeasureId::parse("prop:Ieta"));
        EXPECT_EQ(a.computed().count("lp_kb"), 1u);
        EXPECT_EQ(a.computed().count("mc_db"), 0u);
    }
}

TEST(Measures, EvidenceIsConsistentWithValues) {
    auto inst = fixtures::load_sample("mealticket");
    auto report = measure_all(inst.database, inst.constraints, all_measures(), true);
    const auto& hs = report.evidence.at(MeasureId::parse("db:IH")).hitting_set;
    ASSERT_TRUE(hs);
    EXPECT_EQ(MeasureValue(static_cast<long long>(hs->size())), report.at(MeasureId::parse("db:IH")));
    Rational total = 0;
    for (const auto& [set, p] : report.evidence.at(MeasureId::parse("prop:Ieta")).distribution) total += p;
    EXPECT_EQ(total, Rational(1));
}

TEST(ThreeValued, ConnectiveTables) {
    using T = Truth;
    const T all[] = {T::F, T::B, T::T};
    const char* neg = "TBF";
    const char* conj[] = {"FFF", "FBB", "FBT"};
    const char* disj[] = {"FBT", "BBT", "TTT"};
    for (int i = 0; i < 3; ++i) {
        EXPECT_EQ(truth_name(!all[i])[0], neg[i]);
        for (int j = 0; j < 3; ++j) {
            EXPECT_EQ(truth_name(all[i] && all[j])[0], conj[i][j]) << i << j;
            EXPECT_EQ(truth_name(all[i] || all[j])[0], disj[i][j]) << i << j;
        }
    }
    EXPECT_TRUE(designated(T::B));
    EXPECT_FALSE(designated(T::F));
}

TEST(Oracle, AgreesOnRandomInstances) {
    for (std::uint64_t t = 0; t < 60; ++t) {
        InstanceGen gen(derive_seed(5, t), {5, 3, 2});
        auto cs = gen.constraints();
        auto db = gen.database();
        auto report = measure_all(db, cs, all_measures());
        for (const auto& id : all_measures())
            EXPECT_EQ(report.at(id), oracle::oracle_measure(id, db, cs)) << id.str() << "\n" << pretty_print(cs);
    }
}

TEST(Oracle, RefusesLargeInputs) {
    auto s = parse_schema("relation R(A: int)\n");
    std::vector<std::vector<std::string>> rows;
    for (int i = 0; i < 20; ++i) rows.push_back({std::to_string(i)});
    auto db = load_database(s, std::vector<TextRows>{{"R", rows}});
    auto cs = parse_constraints("denial c: R(x) -> x > 3\n", s);
    EXPECT_THROW(oracle::oracle_mi(db, cs, oracle::Bounds{}), BoundExceeded);
}

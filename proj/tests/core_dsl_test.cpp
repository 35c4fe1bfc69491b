#include "support.hpp"

#include <gtest/gtest.h>

using namespace incmeter;
using incmeter::fixtures::ast_schema;
using incmeter::fixtures::RandomAst;

namespace {

const Schema& ticket_schema() {
    static const Schema s = parse_schema("relation MealTicket(Number: int, Value: int, Holder: text, Date: date)\n");
    return s;
}

std::string error_of(std::string_view text, const Schema& schema) {
    try {
        parse_constraints(text, schema);
    } catch (const ParseError& e) {
        return e.what();
    }
    return "no error";
}

} // namespace

TEST(Value, ParsesEachKind) {
    EXPECT_EQ(Value::parse("-12", Kind::integer), Value::integer(-12));
    EXPECT_EQ(Value::parse("3/6", Kind::rational), Value::rational(1, 2));
    EXPECT_EQ(Value::parse("-0.25", Kind::rational), Value::rational(-1, 4));
    EXPECT_EQ(Value::parse("7", Kind::rational), Value::rational(7, 1));
    EXPECT_EQ(Value::parse("2018-12-13", Kind::date), Value::date(2018, 12, 13));
    EXPECT_EQ(Value::parse(" a b ", Kind::text).as_text(), " a b ");
    EXPECT_THROW(Value::parse("1.5", Kind::integer), ValidationError);
    EXPECT_THROW(Value::parse("1/0", Kind::rational), ValidationError);
    EXPECT_THROW(Value::parse("2019-02-29", Kind::date), ValidationError);
    EXPECT_THROW(Value::parse("2018-1-13", Kind::date), ValidationError);
}

TEST(Value, RationalsPrintWithDenominator) {
    EXPECT_EQ(Value::rational(4, 2).str(), "2/1");
    EXPECT_EQ(Value::rational(-3, 9).str(), "-1/3");
    EXPECT_EQ(Value::integer(5).str(), "5");
    EXPECT_EQ(Value::date(2020, 2, 29).str(), "2020-02-29");
}

TEST(Value, ComparisonsAreTyped) {
    EXPECT_TRUE(compare(Value::integer(2), Value::integer(3), CmpOp::lt));
    EXPECT_TRUE(compare(Value::text("Alex"), Value::text("Sophia"), CmpOp::lt));
    EXPECT_TRUE(compare(Value::date(2018, 12, 18), Value::date(2018, 12, 13), CmpOp::gt));
    EXPECT_TRUE(compare(Value::rational(1, 3), Value::rational(2, 6), CmpOp::eq));
    EXPECT_THROW(compare(Value::integer(1), Value::text("1"), CmpOp::lt), TypeError);
    EXPECT_EQ(Value::integer(1).coerced_to(Kind::rational), Value::rational(1, 1));
    EXPECT_THROW(Value::rational(1, 2).coerced_to(Kind::integer), TypeError);
}

TEST(MeasureValueTest, OrderAndText) {
    EXPECT_LT(MeasureValue(1), MeasureValue(17, 12));
    EXPECT_LT(MeasureValue(1000000), MeasureValue::infinity());
    EXPECT_EQ(MeasureValue::infinity(), MeasureValue::infinity());
    EXPECT_EQ(MeasureValue(34, 24).str(), "17/12");
    EXPECT_EQ(MeasureValue::infinity().str(), "inf");
    EXPECT_EQ(MeasureValue::parse("0.5"), MeasureValue(1, 2));
    EXPECT_EQ(MeasureValue::parse("inf"), MeasureValue::infinity());
    EXPECT_THROW(MeasureValue::parse("-1"), ValidationError);
    EXPECT_EQ(MeasureValue::infinity() + MeasureValue(2), MeasureValue::infinity());
}

TEST(Schema, ParseAndPrint) {
    auto s = parse_schema("# tickets\nrelation R(A: int, B: rational)\n\nrelation S(C: text, D: date)\n");
    ASSERT_EQ(s.size(), 2u);
    EXPECT_EQ(s.relation(1).attribute(1).type, Kind::date);
    EXPECT_EQ(parse_schema(print_schema(s)), s);
    EXPECT_THROW(parse_schema("relation R(A: int, A: int)\n"), Error);
    EXPECT_THROW(parse_schema("relation R(A: float)\n"), Error);
    EXPECT_THROW(parse_schema("relation R(A: int)\nrelation R(B: int)\n"), Error);
}

TEST(Csv, QuotingRoundTrip) {
    std::vector<csv::Row> rows = {{"a", "b,c", "say \"x\""}, {"", " pad ", "line\nbreak"}};
    EXPECT_EQ(csv::parse(csv::write(rows)), rows);
    auto crlf = csv::parse("A,B\r\n1,2\r\n");
    ASSERT_EQ(crlf.size(), 2u);
    EXPECT_EQ(crlf[1][1], "2");
    EXPECT_THROW(csv::parse("A\n\"open\n"), ParseError);
}

TEST(DatabaseTest, DuplicatesCollapseAndIdsAreStable) {
    auto s = parse_schema("relation R(A: int)\nrelation S(B: text)\n");
    auto db = load_database(s, std::vector<TextRows>{{"S", {{"x"}, {"y"}}}, {"R", {{"2"}, {"1"}, {"2"}}}});
    ASSERT_EQ(db.size(), 4u);
    EXPECT_EQ(db.label(TupleId{0}), "R#1");
    EXPECT_EQ(db.tuple(TupleId{0}).values[0], Value::integer(2));
    EXPECT_EQ(db.label(TupleId{3}), "S#2");
    EXPECT_EQ(db.find(Tuple{1, {Value::text("y")}}), TupleId{3});
    auto smaller = db.without(TupleId{0});
    EXPECT_EQ(smaller.size(), 3u);
    EXPECT_FALSE(smaller.find(Tuple{0, {Value::integer(2)}}));
    EXPECT_EQ(smaller.merged(db).size(), 4u);
}

TEST(DatabaseTest, CsvErrorsNameTheRow) {
    const auto& s = ticket_schema();
    auto rows = parse_relation_csv(s.relation(0), "Number,Value,Holder,Date\n1,2,A,2018-12-13\n2,x,B,2018-12-13\n");
    try {
        load_database(s, std::vector<TextRows>{rows});
        FAIL();
    } catch (const ValidationError& e) {
        EXPECT_NE(std::string(e.what()).find("row 2"), std::string::npos) << e.what();
    }
    EXPECT_THROW(parse_relation_csv(s.relation(0), "Number,Value,Date,Holder\n"), ValidationError);
}

TEST(DatabaseTest, CsvRoundTrip) {
    auto inst = incmeter::fixtures::load_sample("mealticket");
    ASSERT_EQ(inst.database.size(), 7u);
    auto again = load_database(inst.schema, std::vector<TextRows>{parse_relation_csv(inst.schema.relation(0),
                                                                                    relation_csv(inst.database, 0))});
    EXPECT_EQ(again.tuples(), inst.database.tuples());
}

TEST(Parser, FdDesugarsToTwoAtoms) {
    auto cs = parse_constraints("fd c2: MealTicket: Number -> Value\n", ticket_schema());
    ASSERT_EQ(cs.size(), 1u);
    EXPECT_EQ(print_constraint(cs[0]), "denial c2: MealTicket(x1, x2, x3, x4), MealTicket(x1, x5, x6, x7) -> x2 = x5");
}

TEST(Parser, NdDesugarsToPairwiseEqualities) {
    auto cs = parse_constraints("nd c4: MealTicket: Holder, Date -> 2 Number\n", ticket_schema());
    EXPECT_EQ(print_constraint(cs[0]),
              "denial c4: MealTicket(x1, x2, x3, x4), MealTicket(x5, x6, x3, x4), MealTicket(x7, x8, x3, x4) -> "
              "x1 = x5 | x1 = x7 | x5 = x7");
    auto nd1 = parse_constraints("nd n: MealTicket: Number -> 1 Value\n", ticket_schema());
    auto fd = parse_constraints("fd n: MealTicket: Number -> Value\n", ticket_schema());
    EXPECT_EQ(nd1, fd);
}

TEST(Parser, DenialWithEmptyConditionAndComments) {
    auto cs = parse_constraints("# none allowed\ndenial never: MealTicket(a, b, \"Alex\", d) ->\n"
                                "denial pos: MealTicket(x1, x2, x3, x4) -> x2 > 0 # trailing\n",
                                ticket_schema());
    ASSERT_EQ(cs.size(), 2u);
    EXPECT_TRUE(cs[0].phi.empty());
    EXPECT_EQ(as_constant(cs[0].atoms[0].args[2]), Value::text("Alex"));
    EXPECT_EQ(pretty_print(cs, true), "never: !MealTicket(a, b, \"Alex\", d)\npos: !MealTicket(x1, x2, x3, x4) | x2 > 0\n");
}

TEST(Parser, IntConstantWidensForRationalAttribute) {
    auto s = parse_schema("relation P(Q: rational)\n");
    auto cs = parse_constraints("denial p: P(1) -> \ndenial q: P(x) -> x < 2\n", s);
    EXPECT_EQ(as_constant(cs[0].atoms[0].args[0]).kind(), Kind::rational);
    EXPECT_EQ(as_constant(cs[1].phi[0][0].right), Value::rational(2, 1));
}

TEST(Parser, ErrorPositions) {
    const auto& s = ticket_schema();
    EXPECT_EQ(error_of("denial c: MealTicket(x1, x2, x3) -> x1 > 0", s),
              "1:1: constraint c: MealTicket expects 4 arguments, got 3");
    EXPECT_EQ(error_of("denial c: MealTicket(x1, x2, x3, x4) -> x1 > \"a\"", s),
              "1:1: constraint c: cannot compare int with text");
    EXPECT_EQ(error_of("\n  denial c: MealTicket(x1, x2, x3, x4) -> x5 > 0", s),
              "2:3: constraint c: variable x5 does not occur in any relation atom");
    EXPECT_EQ(error_of("denial c: Nope(x) ->", s), "1:1: constraint c: unknown relation Nope");
    EXPECT_EQ(error_of("fd f: MealTicket: Number -> Colour", s), "1:1: relation MealTicket has no attribute Colour");
    EXPECT_EQ(error_of("fd f: Other: A -> B", s), "1:7: unknown relation Other");
    EXPECT_EQ(error_of("denial c: MealTicket(x1, x2, x3, x4) x1 > 0", s), "1:38: expected '->', found 'x1'");
    EXPECT_EQ(error_of("denial c: MealTicket(x1, x2, x3, x4) -> x1 > 0\ndenial c: MealTicket(a, b, c, d) ->", s),
              "2:1: constraint c declared twice");
    EXPECT_EQ(error_of("nd n: MealTicket: Holder -> 0 Number", s),
              "1:1: constraint n: numerical dependency bound must be at least 1");
    EXPECT_EQ(error_of("denial c: MealTicket(x1, x2, \"open, x4) ->", s), "1:30: unterminated string literal");
    EXPECT_EQ(error_of("denial c: MealTicket(x1, x2, x3, 2018-02-30) ->", s), "1:34: invalid date '2018-02-30'");
}

TEST(Parser, MealticketPrintsBack) {
    auto inst = incmeter::fixtures::load_sample("mealticket");
    auto printed = pretty_print(inst.constraints);
    EXPECT_EQ(parse_constraints(printed, inst.schema), inst.constraints);
    EXPECT_NE(printed.find("denial c1: MealTicket(x1, x2, x3, x4) -> x2 > 0"), std::string::npos);
}

TEST(Parser, RandomRoundTrips) {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        RandomAst gen(seed);
        ConstraintSet cs = gen.constraint_set();
        std::string text = pretty_print(cs);
        ConstraintSet back;
        ASSERT_NO_THROW(back = parse_constraints(text, ast_schema())) << text;
        EXPECT_EQ(back, cs) << text;
        EXPECT_EQ(pretty_print(back), text);
    }
}

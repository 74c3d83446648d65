#include <gtest/gtest.h>

#include "foreach_crdt/codec.hpp"
#include "foreach_crdt/errors.hpp"
#include "foreach_crdt/fuzz.hpp"
#include "foreach_crdt/replica.hpp"
#include "foreach_crdt/scenario.hpp"

using namespace foreach_crdt;
using codec::Json;

namespace {

const ReplicaId A("A");
const ReplicaId B("B");

}  // namespace

TEST(CodecTest, ClockOmitsZeros) {
  VectorClock vc{{A, 2}};
  vc.set(B, 0);
  EXPECT_EQ(codec::dump(codec::encode(vc)), R"({"A":2})");
  EXPECT_EQ(codec::decode_clock(Json::parse(R"({"A":2,"B":0})")), vc);
}

TEST(CodecTest, ScalarForms) {
  EXPECT_EQ(codec::encode(Position::parse("1.A/1.B")), Json("1.A/1.B"));
  EXPECT_EQ(codec::encode(Rational(3, 2)), Json("3/2"));
  EXPECT_EQ(codec::decode_rational(Json("-6/4")), Rational(-3, 2));
  EXPECT_EQ(codec::decode_rational(Json(5)), Rational(5));
  EXPECT_THROW(codec::decode_rational(Json("1/0")), ParseError);
  EXPECT_THROW(codec::decode_rational(Json("one")), ParseError);
  EXPECT_EQ(codec::decode_bound(codec::encode(PositionBound(PosInfinity{}))), PositionBound(PosInfinity{}));
}

TEST(CodecTest, EnvelopeLineIsCanonical) {
  Replica a(A);
  const auto e = a.insert(0, rich_char("a"));
  EXPECT_EQ(codec::to_line(e),
            R"({"dot":{"clock":1,"sender":"A"},"kind":"insert","payload":{"p":"1.A","sigma0":{"attrs":{},"char":"a","kind":"rich_char"}},"vc":{"A":1}})");
}

TEST(CodecTest, EveryPayloadRoundTrips) {
  Replica a(A);
  std::vector<Envelope> log;
  log.push_back(a.insert(0, rich_char("a")));
  log.push_back(a.insert(1, ingredient("flour", Rational(1, 3), "cup")));
  log.push_back(a.insert(2, Amount{7, "g"}));
  log.push_back(a.insert(3, Vec2{Rational(-1, 2), 4}));
  log.push_back(a.insert(4, slide_object({Vec2{1, 2}}, A)));
  log.push_back(a.apply(0, attr_set("size", std::int64_t{12})));
  log.push_back(a.apply(1, amount_mult(Rational(5, 2))));
  log.push_back(a.apply(1, name_set("rye flour")));
  log.push_back(a.apply(3, vec2_mult(Matrix2{1, 2, 3, 4})));
  log.push_back(translate_object(a, a.at(4).p, Vec2{2, 2}));
  log.push_back(a.for_each(rotate_group({a.at(4).p}, Matrix2::clockwise(Rational(3, 5), Rational(4, 5)))));
  log.push_back(a.for_each(MutationFn{HalfOpenRange{a.at(0).p, PosInfinity{}}, PriorGate::kPriorOnly, Null{}}));
  log.push_back(a.for_each(MutationFn{ClosedRange{a.at(0).p, a.at(1).p}, PriorGate::kConcurrentOnly, Del{}}));
  log.push_back(a.erase(0));

  Replica b(B);
  for (const auto& e : log) {
    const auto line = codec::to_line(e);
    const auto back = codec::parse_line(line, 1);
    EXPECT_EQ(codec::to_line(back), line);
    b.deliver(back);
  }
  EXPECT_EQ(codec::dump(codec::snapshot(a.state())), codec::dump(codec::snapshot(b.state())));
  EXPECT_EQ(codec::dump(codec::encode(a.state())), codec::dump(codec::encode(b.state())));
}

TEST(CodecTest, ListStateRoundTrips) {
  FuzzConfig cfg;
  cfg.ops = 120;
  cfg.schedules = 0;
  const auto run = run_fuzz(cfg);
  Replica r(A);
  for (const auto& e : run.log) {
    if (r.can_deliver(e)) r.deliver(e);
  }
  const auto j = codec::encode(r.state());
  EXPECT_EQ(codec::dump(codec::encode(codec::decode_list(j))), codec::dump(j));
}

TEST(CodecTest, BadLinesReportTheirLineNumber) {
  try {
    codec::parse_line("{not json", 7);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 7u);
    EXPECT_NE(std::string(e.what()).find("line 7"), std::string::npos);
  }
  EXPECT_THROW(codec::parse_line(R"({"dot":{"clock":2,"sender":"A"},"kind":"delete","payload":{"p":"1.A"},"vc":{"A":1}})", 1),
               ParseError);
  EXPECT_THROW(codec::parse_line(R"({"dot":{"clock":1,"sender":"A"},"kind":"teleport","payload":{},"vc":{"A":1}})", 1),
               ParseError);
  EXPECT_THROW(codec::parse_line(R"({"dot":{"clock":1,"sender":"A"},"kind":"delete","payload":{"p":"1.A/0.B"},"vc":{"A":1}})", 1),
               ParseError);
}

#include <gtest/gtest.h>

#include <algorithm>

#include "foreach_crdt/codec.hpp"
#include "foreach_crdt/element_crdt.hpp"
#include "foreach_crdt/errors.hpp"
#include "foreach_crdt/list_state.hpp"
#include "foreach_crdt/mutation.hpp"
#include "foreach_crdt/rng.hpp"

using namespace foreach_crdt;

namespace {

const ReplicaId A("A");
const ReplicaId B("B");

ClockContext ctx(const ReplicaId& who, std::uint64_t clock, VectorClock w) { return {Dot{who, clock}, std::move(w)}; }

// Independent matrix-vector product on plain rationals.
std::pair<Rational, Rational> mul(const Rational (&m)[2][2], const Rational& x, const Rational& y) {
  return {m[0][0] * x + m[0][1] * y, m[1][0] * x + m[1][1] * y};
}

}  // namespace

TEST(AttrSetTest, InstallsOnEmptyMap) {
  ElementState s = rich_char("a");
  effect(attr_set("bold", true), ctx(A, 5, {{A, 5}}), s);
  const auto& c = std::get<RichChar>(s);
  ASSERT_NE(c.attrs.get("bold"), nullptr);
  EXPECT_EQ(*c.attrs.get("bold"), AttrValue(true));
  EXPECT_EQ(c.attrs.entries().at("bold").stamp.dot, (Dot{A, 5}));
}

TEST(AttrSetTest, StaleWriteLoses) {
  ElementState s = rich_char("a");
  effect(attr_set("bold", true), ctx(A, 5, {{A, 5}}), s);
  effect(attr_set("bold", false), ctx(A, 4, {{A, 4}}), s);
  EXPECT_EQ(*std::get<RichChar>(s).attrs.get("bold"), AttrValue(true));
}

TEST(AttrSetTest, ConcurrentWritesTieBreakOnSenderInBothOrders) {
  const auto a = ctx(A, 5, {{A, 5}});
  const auto b = ctx(B, 5, {{B, 5}});
  ElementState s1 = rich_char("x");
  ElementState s2 = rich_char("x");
  effect(attr_set("bold", true), a, s1);
  effect(attr_set("bold", false), b, s1);
  effect(attr_set("bold", false), b, s2);
  effect(attr_set("bold", true), a, s2);
  EXPECT_EQ(s1, s2);
  EXPECT_EQ(std::get<RichChar>(s1).attrs.entries().at("bold").stamp.dot, (Dot{B, 5}));
  EXPECT_EQ(*std::get<RichChar>(s1).attrs.get("bold"), AttrValue(false));
}

TEST(AttrSetTest, CausallyLaterWriteWinsRegardlessOfSender) {
  // B's write saw A's: it must win even though A's own counter is higher.
  ElementState s = rich_char("x");
  effect(attr_set("color", std::string("red")), ctx(A, 7, {{A, 7}}), s);
  effect(attr_set("color", std::string("blue")), ctx(B, 1, {{A, 7}, {B, 1}}), s);
  EXPECT_EQ(*std::get<RichChar>(s).attrs.get("color"), AttrValue(std::string("blue")));
}

TEST(AmountMultTest, Examples) {
  ElementState s = Amount{3, "cup"};
  effect(amount_mult(2), ctx(A, 1, {{A, 1}}), s);
  EXPECT_EQ(std::get<Amount>(s).value, Rational(6));
  effect(amount_mult(1), ctx(A, 2, {{A, 2}}), s);
  EXPECT_EQ(std::get<Amount>(s).value, Rational(6));

  ElementState x = Amount{1, "g"};
  ElementState y = Amount{1, "g"};
  effect(amount_mult(2), ctx(A, 1, {{A, 1}}), x);
  effect(amount_mult(3), ctx(B, 1, {{B, 1}}), x);
  effect(amount_mult(3), ctx(B, 1, {{B, 1}}), y);
  effect(amount_mult(2), ctx(A, 1, {{A, 1}}), y);
  EXPECT_EQ(x, y);
  EXPECT_EQ(std::get<Amount>(x).value, Rational(6));
}

TEST(AmountMultTest, RejectsNonPositiveFactor) {
  EXPECT_THROW(amount_mult(0), ContractViolation);
  EXPECT_THROW(amount_mult(Rational(-1, 2)), ContractViolation);
  EXPECT_THROW(ingredient("flour", 0, "cup"), ContractViolation);
}

TEST(AmountMultTest, ScalesIngredientAmount) {
  ElementState s = ingredient("flour", Rational(1, 2), "cup");
  effect(amount_mult(Rational(4, 3)), ctx(A, 1, {{A, 1}}), s);
  EXPECT_EQ(std::get<Ingredient>(s).amount.value, Rational(2, 3));
}

TEST(Vec2MultTest, Identity) {
  ElementState s = Vec2{3, -2};
  effect(vec2_mult(Matrix2::identity()), ctx(A, 1, {{A, 1}}), s);
  EXPECT_EQ(std::get<Vec2>(s), (Vec2{3, -2}));
}

TEST(Vec2MultTest, QuarterTurnAgainstIndependentProduct) {
  const Rational m[2][2] = {{0, 1}, {-1, 0}};
  ElementState s = Vec2{1, 0};
  effect(vec2_mult(Matrix2{m[0][0], m[0][1], m[1][0], m[1][1]}), ctx(A, 1, {{A, 1}}), s);
  const auto [x, y] = mul(m, 1, 0);
  EXPECT_EQ(std::get<Vec2>(s), (Vec2{x, y}));
  EXPECT_EQ(std::get<Vec2>(s), (Vec2{0, -1}));
}

TEST(Vec2MultTest, RotationsCommute) {
  const auto r1 = Matrix2::clockwise(Rational(3, 5), Rational(4, 5));
  const auto r2 = Matrix2::clockwise(Rational(56, 65), Rational(33, 65));
  ElementState x = Vec2{Rational(7, 3), 2};
  ElementState y = x;
  effect(vec2_mult(r1), ctx(A, 1, {{A, 1}}), x);
  effect(vec2_mult(r2), ctx(B, 1, {{B, 1}}), x);
  effect(vec2_mult(r2), ctx(B, 1, {{B, 1}}), y);
  effect(vec2_mult(r1), ctx(A, 1, {{A, 1}}), y);
  EXPECT_EQ(x, y);
  EXPECT_EQ(r1 * r2, r2 * r1);
}

TEST(EffectTest, KindMismatchIsSchemaError) {
  ElementState s = rich_char("a");
  EXPECT_THROW(effect(amount_mult(2), ctx(A, 1, {{A, 1}}), s), SchemaError);
  EXPECT_THROW(effect(vec2_mult(Matrix2::identity()), ctx(A, 1, {{A, 1}}), s), SchemaError);
  EXPECT_THROW(effect(nested_foreach(MutationFn{}), ctx(A, 1, {{A, 1}}), s), SchemaError);
  ElementState v = Vec2{0, 0};
  EXPECT_THROW(effect(attr_set("bold", true), ctx(A, 1, {{A, 1}}), v), SchemaError);
}

TEST(EffectTest, DeterministicOnCopies) {
  ElementState s = ingredient("salt", 1, "tsp");
  ElementState t = s;
  effect(name_set("sea salt"), ctx(A, 2, {{A, 2}}), s);
  effect(name_set("sea salt"), ctx(A, 2, {{A, 2}}), t);
  EXPECT_EQ(s, t);
  EXPECT_EQ(std::get<Ingredient>(s).name.value, "sea salt");
}

// Three pairwise concurrent operations on each element kind, effected in all
// six orders, give one state.
TEST(EffectTest, ThreeConcurrentOpsAllOrders) {
  const std::vector<ClockContext> ctxs = {ctx(A, 1, {{A, 1}}), ctx(B, 1, {{B, 1}}), ctx(ReplicaId("C"), 1, {{ReplicaId("C"), 1}})};
  struct Case {
    ElementState initial;
    std::vector<PureOp> ops;
  };
  const std::vector<Case> cases = {
      {rich_char("q"), {attr_set("bold", true), attr_set("bold", false), attr_set("size", std::int64_t{12})}},
      {ingredient("oil", 2, "tbsp"), {amount_mult(3), name_set("olive oil"), name_set("canola")}},
      {Amount{5, "g"}, {amount_mult(2), amount_mult(Rational(1, 3)), amount_mult(7)}},
      {Vec2{1, 2},
       {vec2_mult(Matrix2::clockwise(Rational(3, 5), Rational(4, 5))),
        vec2_mult(Matrix2::clockwise(Rational(5, 13), Rational(12, 13))), vec2_mult(Matrix2{2, 0, 0, 2})}},
  };
  for (const auto& c : cases) {
    std::vector<std::size_t> order = {0, 1, 2};
    std::optional<std::string> first;
    do {
      ElementState s = c.initial;
      for (auto i : order) effect(c.ops[i], ctxs[i], s);
      const auto text = codec::dump(codec::encode(s));
      if (!first) first = text;
      EXPECT_EQ(*first, text) << kind_name(c.initial);
    } while (std::next_permutation(order.begin(), order.end()));
  }
}

namespace {

ElementState random_state(Rng& rng) {
  switch (uniform_below(rng, 5)) {
    case 0: {
      ElementState s = rich_char(std::string(1, static_cast<char>('a' + uniform_below(rng, 26))));
      effect(attr_set("bold", chance(rng, 1, 2)), {Dot{A, 1}, {{A, 1}}}, s);
      return s;
    }
    case 1:
      return ingredient("item" + std::to_string(uniform_below(rng, 100)), Rational(1 + uniform_below(rng, 9), 1 + uniform_below(rng, 4)), "g");
    case 2:
      return Amount{Rational(1 + uniform_below(rng, 50)), "ml"};
    case 3:
      return Vec2{Rational(static_cast<std::int64_t>(uniform_below(rng, 21)) - 10), Rational(uniform_below(rng, 7))};
    default: {
      std::vector<ElementState> inner;
      for (auto n = uniform_below(rng, 4); n > 0; --n) inner.push_back(Vec2{Rational(uniform_below(rng, 5)), 1});
      return nested_list(std::move(inner), B);
    }
  }
}

}  // namespace

// gen(o, sigma) = o, byte for byte, for every shipped pure operation.
TEST(PurityTest, GeneratorIsIdentityOnRandomStates) {
  const MutationFn inner{AllPositions{}, PriorGate::kAny, ApplyOp{vec2_mult(Matrix2::clockwise(Rational(3, 5), Rational(4, 5)))}};
  const std::vector<PureOp> ops = {attr_set("bold", true),       attr_set("color", std::string("red")),
                                   attr_set("size", std::int64_t{14}), amount_mult(Rational(3, 2)),
                                   vec2_mult(Matrix2{1, 2, 3, 4}), name_set("butter"),
                                   nested_foreach(inner)};
  Rng rng(2024);
  for (int i = 0; i < 1000; ++i) {
    const ElementState sigma = random_state(rng);
    for (const auto& op : ops) {
      std::uint64_t counter = 17;
      const ElementMessage msg = generate(ElementOpRequest(op), sigma, A, counter);
      ASSERT_TRUE(std::holds_alternative<PureOp>(msg));
      ASSERT_EQ(codec::dump(codec::encode(msg)), codec::dump(codec::encode(ElementMessage(op))));
      ASSERT_EQ(std::get<PureOp>(msg), op);
      ASSERT_EQ(counter, 17u);
    }
  }
}

TEST(NestedListTest, CopiesAreDeep) {
  ElementState a = nested_list({Vec2{1, 1}}, A);
  ElementState b = a;
  effect(nested_foreach(MutationFn{AllPositions{}, PriorGate::kAny, ApplyOp{vec2_mult(Matrix2{2, 0, 0, 2})}}),
         ctx(A, 1, {{A, 1}}), b);
  EXPECT_EQ(std::get<Vec2>(std::get<NestedList>(a).state().elts.at(0).sigma), (Vec2{1, 1}));
  EXPECT_EQ(std::get<Vec2>(std::get<NestedList>(b).state().elts.at(0).sigma), (Vec2{2, 2}));
  EXPECT_NE(a, b);
}

TEST(NestedListTest, NullInstructionIsNoOpAtBothLevels) {
  ElementState a = nested_list({Vec2{1, 1}, Vec2{0, 3}}, A);
  effect(nested_foreach(MutationFn{AllPositions{}, PriorGate::kAny, Null{}}), ctx(A, 1, {{A, 1}}), a);
  const auto& inner = std::get<NestedList>(a).state();
  EXPECT_EQ(inner.elts.size(), 2u);
  EXPECT_EQ(std::get<Vec2>(inner.elts[0].sigma), (Vec2{1, 1}));
  EXPECT_EQ(std::get<Vec2>(inner.elts[1].sigma), (Vec2{0, 3}));
  EXPECT_EQ(inner.buffer.size(), 1u);
}

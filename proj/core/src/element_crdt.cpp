#include "foreach_crdt/element_crdt.hpp"

#include "foreach_crdt/codec.hpp"
#include "foreach_crdt/crdt_list.hpp"
#include "foreach_crdt/errors.hpp"
#include "foreach_crdt/foreach_list.hpp"
#include "foreach_crdt/list_state.hpp"
#include "foreach_crdt/mutation.hpp"
#include "overloaded.hpp"

namespace foreach_crdt {

namespace {

using detail::overloaded;

[[noreturn]] void mismatch(std::string_view op, const ElementState& state) {
  throw SchemaError(std::string(op) + " cannot be effected on a " + std::string(kind_name(state)) +
                    " element");
}

}  // namespace

void AttrMap::set(const std::string& key, AttrValue value, const LwwStamp& stamp) {
  auto it = entries_.find(key);
  if (it == entries_.end()) {
    entries_.emplace(key, AttrEntry{std::move(value), stamp});
  } else if (it->second.stamp < stamp) {
    it->second = AttrEntry{std::move(value), stamp};
  }
}

const AttrValue* AttrMap::get(const std::string& key) const {
  auto it = entries_.find(key);
  return it == entries_.end() ? nullptr : &it->second.value;
}

void LwwRegister::set(std::string v, const LwwStamp& s) {
  if (!stamp || *stamp < s) {
    value = std::move(v);
    stamp = s;
  }
}

Vec2 operator*(const Matrix2& m, const Vec2& v) { return {m.a * v.x + m.b * v.y, m.c * v.x + m.d * v.y}; }

Matrix2 operator*(const Matrix2& m, const Matrix2& n) {
  return {m.a * n.a + m.b * n.c, m.a * n.b + m.b * n.d, m.c * n.a + m.d * n.c, m.c * n.b + m.d * n.d};
}

Vec2 operator+(const Vec2& a, const Vec2& b) { return {a.x + b.x, a.y + b.y}; }

NestedList::NestedList() : impl_(std::make_unique<ListState>()) {}
NestedList::NestedList(ListState state) : impl_(std::make_unique<ListState>(std::move(state))) {}
NestedList::NestedList(const NestedList& other) : impl_(std::make_unique<ListState>(*other.impl_)) {}
NestedList::NestedList(NestedList&&) noexcept = default;
NestedList& NestedList::operator=(const NestedList& other) {
  if (this != &other) impl_ = std::make_unique<ListState>(*other.impl_);
  return *this;
}
NestedList& NestedList::operator=(NestedList&&) noexcept = default;
NestedList::~NestedList() = default;

bool operator==(const NestedList& a, const NestedList& b) {
  return codec::dump(codec::encode(a.state())) == codec::dump(codec::encode(b.state()));
}

NestedList nested_list(std::vector<ElementState> initial, const ReplicaId& author) {
  ListState state;
  std::uint64_t counter = 0;
  for (auto& sigma : initial) {
    Position p = position_for_insert(state, state.size(), author, counter++);
    insert_element(state, std::move(p), std::move(sigma), Dot{author, 0});
  }
  return NestedList(std::move(state));
}

std::string_view kind_name(const ElementState& state) {
  return std::visit(overloaded{[](const RichChar&) { return "rich_char"; },
                               [](const Ingredient&) { return "ingredient"; },
                               [](const Amount&) { return "amount"; }, [](const Vec2&) { return "vec2"; },
                               [](const NestedList&) { return "list"; }},
                    state);
}

RichChar rich_char(std::string ch) { return RichChar{std::move(ch), {}}; }

Ingredient ingredient(std::string name, Rational amount, std::string unit) {
  if (amount <= 0) throw ContractViolation("ingredient amount must be positive");
  return Ingredient{LwwRegister{std::move(name), std::nullopt}, Amount{std::move(amount), std::move(unit)}};
}

bool operator==(const NestedForEach& a, const NestedForEach& b) {
  if (a.fn == b.fn) return true;
  if (!a.fn || !b.fn) return false;
  return *a.fn == *b.fn;
}

PureOp attr_set(std::string key, AttrValue value) { return AttrSet{std::move(key), std::move(value)}; }

PureOp amount_mult(Rational factor) {
  if (factor <= 0) throw ContractViolation("amount multiplier must be positive, got " + factor.str());
  return AmountMult{std::move(factor)};
}

PureOp vec2_mult(Matrix2 m) { return Vec2Mult{std::move(m)}; }

PureOp name_set(std::string value) { return NameSet{std::move(value)}; }

PureOp nested_foreach(MutationFn inner) {
  return NestedForEach{std::make_shared<const MutationFn>(std::move(inner))};
}

ElementMessage generate(const ElementOpRequest& request, const ElementState& state, const ReplicaId& author,
                        std::uint64_t& counter) {
  return std::visit(overloaded{[](const PureOp& op) -> ElementMessage { return op; },
                               [&](const InsertIntoNested& ins) -> ElementMessage {
                                 const auto* list = std::get_if<NestedList>(&state);
                                 if (!list) {
                                   throw SchemaError("list insert requested on a " +
                                                     std::string(kind_name(state)) + " element");
                                 }
                                 Position p = position_for_insert(list->state(), ins.index, author, counter);
                                 ++counter;
                                 return ListInsert{std::move(p), ins.initial};
                               }},
                    request);
}

void effect(const PureOp& op, const ClockContext& ctx, ElementState& state) {
  std::visit(overloaded{[&](const AttrSet& set) {
                          auto* rich = std::get_if<RichChar>(&state);
                          if (!rich) mismatch("attr_set", state);
                          rich->attrs.set(set.key, set.value, LwwStamp::from(ctx));
                        },
                        [&](const AmountMult& mult) {
                          if (auto* amount = std::get_if<Amount>(&state)) {
                            amount->value *= mult.factor;
                          } else if (auto* ing = std::get_if<Ingredient>(&state)) {
                            ing->amount.value *= mult.factor;
                          } else {
                            mismatch("amount_mult", state);
                          }
                        },
                        [&](const Vec2Mult& mult) {
                          auto* v = std::get_if<Vec2>(&state);
                          if (!v) mismatch("vec2_mult", state);
                          *v = mult.m * *v;
                        },
                        [&](const NameSet& set) {
                          auto* ing = std::get_if<Ingredient>(&state);
                          if (!ing) mismatch("name_set", state);
                          ing->name.set(set.value, LwwStamp::from(ctx));
                        },
                        [&](const NestedForEach& nested) {
                          auto* list = std::get_if<NestedList>(&state);
                          if (!list) mismatch("nested_foreach", state);
                          foreach_effect(list->state(), *nested.fn, ctx.dot, ctx.w);
                        }},
             op);
}

void effect(const ElementMessage& msg, const ClockContext& ctx, ElementState& state) {
  std::visit(overloaded{[&](const PureOp& op) { effect(op, ctx, state); },
                        [&](const ListInsert& ins) {
                          auto* list = std::get_if<NestedList>(&state);
                          if (!list) mismatch("list_insert", state);
                          insert_effect(list->state(), ins.p, ins.initial, ctx.dot, ctx.w);
                        }},
             msg);
}

}  // namespace foreach_crdt

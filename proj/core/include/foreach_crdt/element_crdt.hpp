#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "foreach_crdt/causal.hpp"
#include "foreach_crdt/position.hpp"

namespace foreach_crdt {

using Rational = boost::multiprecision::cpp_rational;

// Identity and causal context of the operation being effected. Identical on
// every replica for a given message: for an apply it is the apply's own dot
// and clock, for a for-each it is the for-each's.
struct ClockContext {
  Dot dot;
  VectorClock w;
};

// Last-writer-wins timestamp. Ordered by (sum of the writer's vector clock,
// sender), which extends happened-before, so a causally later write always
// beats an earlier one and concurrent writes tie-break on the sender.
struct LwwStamp {
  std::uint64_t lamport = 0;
  Dot dot;

  static LwwStamp from(const ClockContext& ctx) { return {ctx.w.total(), ctx.dot}; }

  friend bool operator==(const LwwStamp&, const LwwStamp&) = default;
  friend std::strong_ordering operator<=>(const LwwStamp& a, const LwwStamp& b) {
    if (auto c = a.lamport <=> b.lamport; c != 0) return c;
    if (auto c = a.dot.sender <=> b.dot.sender; c != 0) return c;
    return a.dot.clock <=> b.dot.clock;
  }
};

using AttrValue = std::variant<bool, std::int64_t, std::string>;

struct AttrEntry {
  AttrValue value;
  LwwStamp stamp;

  friend bool operator==(const AttrEntry&, const AttrEntry&) = default;
};

// Map CRDT of formatting attributes; one LWW register per key.
class AttrMap {
 public:
  // Installs the write iff `stamp` beats the key's current winner.
  void set(const std::string& key, AttrValue value, const LwwStamp& stamp);

  const AttrValue* get(const std::string& key) const;
  const std::map<std::string, AttrEntry>& entries() const { return entries_; }
  std::map<std::string, AttrEntry>& mutable_entries() { return entries_; }

  friend bool operator==(const AttrMap&, const AttrMap&) = default;

 private:
  std::map<std::string, AttrEntry> entries_;
};

// A rich character: an immutable glyph (one UTF-8 code point) plus attributes.
struct RichChar {
  std::string ch;
  AttrMap attrs;

  friend bool operator==(const RichChar&, const RichChar&) = default;
};

struct LwwRegister {
  std::string value;
  std::optional<LwwStamp> stamp;

  void set(std::string v, const LwwStamp& s);

  friend bool operator==(const LwwRegister&, const LwwRegister&) = default;
};

// A positive exact quantity with a unit tag. Supports only multiplication.
struct Amount {
  Rational value;
  std::string unit;

  friend bool operator==(const Amount&, const Amount&) = default;
};

struct Ingredient {
  LwwRegister name;
  Amount amount;

  friend bool operator==(const Ingredient&, const Ingredient&) = default;
};

struct Vec2 {
  Rational x;
  Rational y;

  friend bool operator==(const Vec2&, const Vec2&) = default;
};

// Row-major [[a, b], [c, d]].
struct Matrix2 {
  Rational a, b, c, d;

  static Matrix2 identity() { return {1, 0, 0, 1}; }
  // Clockwise rotation with the given cosine and sine, [[c, s], [-s, c]].
  static Matrix2 clockwise(const Rational& cos, const Rational& sin) { return {cos, sin, -sin, cos}; }

  friend bool operator==(const Matrix2&, const Matrix2&) = default;
};

Vec2 operator*(const Matrix2& m, const Vec2& v);
Matrix2 operator*(const Matrix2& m, const Matrix2& n);
Vec2 operator+(const Vec2& a, const Vec2& b);

struct ListState;

// An element state that is itself a list of CRDTs (with for-each). Owns its
// list by value; copies are deep.
class NestedList {
 public:
  NestedList();
  explicit NestedList(ListState state);
  NestedList(const NestedList& other);
  NestedList(NestedList&&) noexcept;
  NestedList& operator=(const NestedList& other);
  NestedList& operator=(NestedList&&) noexcept;
  ~NestedList();

  const ListState& state() const { return *impl_; }
  ListState& state() { return *impl_; }

  friend bool operator==(const NestedList& a, const NestedList& b);

 private:
  std::unique_ptr<ListState> impl_;
};

using ElementState = std::variant<RichChar, Ingredient, Amount, Vec2, NestedList>;

// Builds a nested list holding `initial` in order. Elements that are part of
// an initial state carry clock 0, so they count as prior to every operation
// later effected on the containing element.
NestedList nested_list(std::vector<ElementState> initial, const ReplicaId& author);

std::string_view kind_name(const ElementState& state);

RichChar rich_char(std::string ch);
Ingredient ingredient(std::string name, Rational amount, std::string unit);

struct MutationFn;

struct AttrSet {
  std::string key;
  AttrValue value;

  friend bool operator==(const AttrSet&, const AttrSet&) = default;
};

struct AmountMult {
  Rational factor;

  friend bool operator==(const AmountMult&, const AmountMult&) = default;
};

struct Vec2Mult {
  Matrix2 m;

  friend bool operator==(const Vec2Mult&, const Vec2Mult&) = default;
};

struct NameSet {
  std::string value;

  friend bool operator==(const NameSet&, const NameSet&) = default;
};

// Runs a for-each on a nested list, using the outer operation's clock
// context as its own identity. Holds its function immutably.
struct NestedForEach {
  std::shared_ptr<const MutationFn> fn;

  friend bool operator==(const NestedForEach& a, const NestedForEach& b);
};

// Operations whose generated message is the operation itself.
using PureOp = std::variant<AttrSet, AmountMult, Vec2Mult, NameSet, NestedForEach>;

PureOp attr_set(std::string key, AttrValue value);
// Throws ContractViolation unless factor > 0.
PureOp amount_mult(Rational factor);
PureOp vec2_mult(Matrix2 m);
PureOp name_set(std::string value);
PureOp nested_foreach(MutationFn inner);

// Message of an insert into a nested list. Not pure: its generator reads the
// nested list to choose a position.
struct ListInsert {
  Position p;
  ElementState initial;

  friend bool operator==(const ListInsert&, const ListInsert&) = default;
};

using ElementMessage = std::variant<PureOp, ListInsert>;

// What a user asks to apply to one element; `generate` turns it into the
// message that is broadcast.
struct InsertIntoNested {
  std::size_t index = 0;
  ElementState initial;
};

using ElementOpRequest = std::variant<PureOp, InsertIntoNested>;

// Generator of the element CRDT. Pure operations come back unchanged.
// `counter` is the replica's position disambiguator and is advanced when a
// new position is minted.
ElementMessage generate(const ElementOpRequest& request, const ElementState& state, const ReplicaId& author,
                        std::uint64_t& counter);

// Effector of the element CRDT. Throws SchemaError when the operation does
// not fit the state's kind.
void effect(const PureOp& op, const ClockContext& ctx, ElementState& state);
void effect(const ElementMessage& msg, const ClockContext& ctx, ElementState& state);

}  // namespace foreach_crdt

#pragma once

#include <set>
#include <string_view>
#include <variant>

#include "foreach_crdt/element_crdt.hpp"
#include "foreach_crdt/position.hpp"

namespace foreach_crdt {

// Predicates over element positions.
struct AllPositions {
  friend bool operator==(const AllPositions&, const AllPositions&) = default;
};

// start <= p < end. `end` may be +inf for a range running to the end.
struct HalfOpenRange {
  Position start;
  PositionBound end;

  friend bool operator==(const HalfOpenRange&, const HalfOpenRange&) = default;
};

// start <= p <= end.
struct ClosedRange {
  Position start;
  Position end;

  friend bool operator==(const ClosedRange&, const ClosedRange&) = default;
};

// Positions used purely as identifiers; their order is irrelevant.
struct IdSet {
  std::set<Position> ids;

  friend bool operator==(const IdSet&, const IdSet&) = default;
};

using Predicate = std::variant<AllPositions, HalfOpenRange, ClosedRange, IdSet>;

enum class PriorGate { kAny, kPriorOnly, kConcurrentOnly };

std::string_view to_string(PriorGate gate);

struct ApplyOp {
  PureOp op;

  friend bool operator==(const ApplyOp&, const ApplyOp&) = default;
};
struct Del {
  friend bool operator==(const Del&, const Del&) = default;
};
struct Null {
  friend bool operator==(const Null&, const Null&) = default;
};

using Instruction = std::variant<ApplyOp, Del, Null>;

// The argument of a for-each: a closed, serializable function
// (p, prior) -> pure op | del | null.
struct MutationFn {
  Predicate predicate = AllPositions{};
  PriorGate gate = PriorGate::kAny;
  Instruction instruction = Null{};

  friend bool operator==(const MutationFn&, const MutationFn&) = default;
};

bool matches(const Predicate& predicate, const Position& p);
bool passes(PriorGate gate, bool prior);

// f(p, prior): the instruction if both the predicate and the gate accept,
// otherwise Null.
Instruction eval_mutation(const MutationFn& f, const Position& p, bool prior);

}  // namespace foreach_crdt

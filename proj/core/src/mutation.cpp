#include "foreach_crdt/mutation.hpp"

#include "overloaded.hpp"

namespace foreach_crdt {

using detail::overloaded;

std::string_view to_string(PriorGate gate) {
  switch (gate) {
    case PriorGate::kAny:
      return "any";
    case PriorGate::kPriorOnly:
      return "prior_only";
    case PriorGate::kConcurrentOnly:
      return "concurrent_only";
  }
  return "any";
}

bool matches(const Predicate& predicate, const Position& p) {
  return std::visit(overloaded{[](const AllPositions&) { return true; },
                               [&](const HalfOpenRange& r) { return r.start <= p && PositionBound(p) < r.end; },
                               [&](const ClosedRange& r) { return r.start <= p && p <= r.end; },
                               [&](const IdSet& s) { return s.ids.contains(p); }},
                    predicate);
}

bool passes(PriorGate gate, bool prior) {
  switch (gate) {
    case PriorGate::kAny:
      return true;
    case PriorGate::kPriorOnly:
      return prior;
    case PriorGate::kConcurrentOnly:
      return !prior;
  }
  return false;
}

Instruction eval_mutation(const MutationFn& f, const Position& p, bool prior) {
  if (passes(f.gate, prior) && matches(f.predicate, p)) return f.instruction;
  return Null{};
}

}  // namespace foreach_crdt

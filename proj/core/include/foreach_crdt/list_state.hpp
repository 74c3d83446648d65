#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "foreach_crdt/causal.hpp"
#include "foreach_crdt/element_crdt.hpp"
#include "foreach_crdt/mutation.hpp"
#include "foreach_crdt/position.hpp"

namespace foreach_crdt {

// One list element: position, element state, and insertion dot.
struct Element {
  Position p;
  ElementState sigma;
  Dot t;
};

// A received for-each, kept so later concurrent inserts can be mutated.
struct BufferEntry {
  MutationFn f;
  Dot u;
  VectorClock w;
};

// State shared by the top-level replica and nested lists: elements sorted
// strictly by position, and the for-each buffer in receipt order. Deleted
// elements leave nothing behind.
struct ListState {
  std::vector<Element> elts;
  std::vector<BufferEntry> buffer;

  std::size_t size() const { return elts.size(); }

  // Index of the element at `p`, if present.
  std::optional<std::size_t> index_of(const Position& p) const;
  Element* find(const Position& p);
  const Element* find(const Position& p) const;

  // Position bounds around a new element at `index` (0 <= index <= size()).
  PositionBound bound_before(std::size_t index) const;
  PositionBound bound_after(std::size_t index) const;
};

}  // namespace foreach_crdt

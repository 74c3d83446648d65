#pragma once

#include <cstdint>

#include "foreach_crdt/list_state.hpp"

namespace foreach_crdt {

// List-of-CRDTs effectors on a bare ListState. The replica-level generators
// and the causal gate live in Replica; nested lists call these directly.

// New position for an element inserted at `index`, between the elements
// currently at index - 1 and index. Throws ContractViolation if
// index > size().
Position position_for_insert(const ListState& state, std::size_t index, const ReplicaId& author,
                             std::uint64_t counter);

// Inserts (p, sigma, t) at its sorted location and returns its index. Throws
// IntegrityError if `p` is already present. Does not consult the buffer; see
// insert_effect in foreach_list.hpp for the full insert effector.
std::size_t insert_element(ListState& state, Position p, ElementState sigma, Dot t);

// Removes the element at `p`. Returns false if it was already gone.
bool delete_effect(ListState& state, const Position& p);

// Effects `msg` on the element at `p` with the apply's own clock context.
// Returns false (and does nothing) if the element was deleted.
bool apply_effect(ListState& state, const Position& p, const ElementMessage& msg, const ClockContext& ctx);

}  // namespace foreach_crdt

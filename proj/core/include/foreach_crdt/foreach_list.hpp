#pragma once

#include "foreach_crdt/crdt_list.hpp"
#include "foreach_crdt/list_state.hpp"
#include "foreach_crdt/mutation.hpp"

namespace foreach_crdt {

struct EffectOptions {
  // Only ever cleared by failure-injection runs that check the fuzzer's
  // sensitivity.
  bool run_buffer_loop = true;
};

enum class ExecuteResult { kUnchanged, kApplied, kDeleted };

// Evaluates f on the element at `index` and carries out the instruction
// locally: apply the pure op with `ctx`, delete the element, or nothing.
// Never produces messages.
ExecuteResult execute(ListState& state, std::size_t index, const MutationFn& f, const ClockContext& ctx,
                      bool prior);

// For-each effector: runs f on every element currently present, with
// prior = "inserted causally before the for-each", then appends (f, u, w) to
// the buffer.
void foreach_effect(ListState& state, const MutationFn& f, const Dot& u, const VectorClock& w);

// Insert effector: inserts the element with dot `t`, then runs every
// buffered for-each that the insert (clock `v`) had not seen, with
// prior = false, in buffer order. Returns true if the element survives.
bool insert_effect(ListState& state, Position p, ElementState sigma, const Dot& t, const VectorClock& v,
                   const EffectOptions& options = {});

}  // namespace foreach_crdt

#include "foreach_crdt/foreach_list.hpp"

#include "overloaded.hpp"

namespace foreach_crdt {

using detail::overloaded;

ExecuteResult execute(ListState& state, std::size_t index, const MutationFn& f, const ClockContext& ctx,
                      bool prior) {
  Element& elt = state.elts.at(index);
  const Instruction instruction = eval_mutation(f, elt.p, prior);
  return std::visit(overloaded{[&](const ApplyOp& apply) {
                                 effect(apply.op, ctx, elt.sigma);
                                 return ExecuteResult::kApplied;
                               },
                               [&](const Del&) {
                                 state.elts.erase(state.elts.begin() + static_cast<std::ptrdiff_t>(index));
                                 return ExecuteResult::kDeleted;
                               },
                               [](const Null&) { return ExecuteResult::kUnchanged; }},
                    instruction);
}

void foreach_effect(ListState& state, const MutationFn& f, const Dot& u, const VectorClock& w) {
  const ClockContext ctx{u, w};
  for (std::size_t i = 0; i < state.elts.size();) {
    const bool prior = dot_is_prior(state.elts[i].t, w);
    if (execute(state, i, f, ctx, prior) != ExecuteResult::kDeleted) ++i;
  }
  state.buffer.push_back(BufferEntry{f, u, w});
}

bool insert_effect(ListState& state, Position p, ElementState sigma, const Dot& t, const VectorClock& v,
                   const EffectOptions& options) {
  const Position key = p;
  insert_element(state, std::move(p), std::move(sigma), t);
  if (!options.run_buffer_loop) return true;
  for (const BufferEntry& entry : state.buffer) {
    if (!dot_is_concurrent(entry.u, v)) continue;
    // Earlier entries may have shifted or removed the element.
    auto index = state.index_of(key);
    if (!index) return false;
    execute(state, *index, entry.f, ClockContext{entry.u, entry.w}, /*prior=*/false);
  }
  return state.index_of(key).has_value();
}

}  // namespace foreach_crdt

#include "foreach_crdt/replica.hpp"

#include "foreach_crdt/crdt_list.hpp"
#include "foreach_crdt/errors.hpp"
#include "overloaded.hpp"

namespace foreach_crdt {

using detail::overloaded;

Replica::Replica(ReplicaId id, ReplicaOptions options) : id_(std::move(id)), options_(options) {}

std::vector<ElementView> Replica::elements() const {
  std::vector<ElementView> out;
  out.reserve(state_.size());
  for (const auto& e : state_.elts) out.push_back({e.p, e.sigma});
  return out;
}

const Element& Replica::at(std::size_t index) const {
  if (index >= state_.size()) {
    throw ContractViolation("index " + std::to_string(index) + " out of range for length " +
                            std::to_string(state_.size()));
  }
  return state_.elts[index];
}

Envelope Replica::stamp(Payload payload) {
  VectorClock v = vc_;
  const auto clock = v.increment(id_);
  return Envelope{Dot{id_, clock}, std::move(v), std::move(payload)};
}

Envelope Replica::insert(std::size_t index, ElementState initial) {
  Position p = position_for_insert(state_, index, id_, seq_);
  ++seq_;
  Envelope e = stamp(InsertPayload{std::move(p), std::move(initial)});
  effect(e);
  return e;
}

Envelope Replica::erase(std::size_t index) { return erase_at(at(index).p); }

Envelope Replica::erase_at(const Position& p) {
  if (!state_.find(p)) throw ContractViolation("no element at position " + p.str());
  Envelope e = stamp(DeletePayload{p});
  effect(e);
  return e;
}

Envelope Replica::apply(std::size_t index, ElementOpRequest op) { return apply_at(at(index).p, std::move(op)); }

Envelope Replica::apply_at(const Position& p, ElementOpRequest op) {
  const Element* elt = state_.find(p);
  if (!elt) throw ContractViolation("no element at position " + p.str());
  ElementMessage msg = generate(op, elt->sigma, id_, seq_);
  Envelope e = stamp(ApplyPayload{p, std::move(msg)});
  effect(e);
  return e;
}

Envelope Replica::for_each(MutationFn f) {
  Envelope e = stamp(ForEachPayload{std::move(f)});
  effect(e);
  return e;
}

std::vector<Envelope> Replica::for_each_prior(const MutationFn& f) {
  // Decide everything against the current snapshot first; the generated
  // deletes would otherwise shift the loop.
  std::vector<std::pair<Position, Instruction>> plan;
  for (const auto& elt : state_.elts) plan.emplace_back(elt.p, eval_mutation(f, elt.p, /*prior=*/true));

  std::vector<Envelope> out;
  for (auto& [p, instruction] : plan) {
    std::visit(overloaded{[&](const ApplyOp& a) { out.push_back(apply_at(p, a.op)); },
                          [&](const Del&) { out.push_back(erase_at(p)); }, [](const Null&) {}},
               instruction);
  }
  return out;
}

bool Replica::can_deliver(const Envelope& e) const { return deliverable(e, vc_); }

void Replica::deliver(const Envelope& e) {
  if (has_delivered(e.dot)) {
    throw CausalityError("replica " + id_.str() + ": envelope " + to_string(e.dot) + " already delivered");
  }
  if (!deliverable(e, vc_)) {
    throw CausalityError("replica " + id_.str() + ": " + describe_causal_gap(e, vc_));
  }
  effect(e);
}

void Replica::effect(const Envelope& e) {
  vc_ = record_delivery(e, std::move(vc_));
  std::visit(overloaded{[&](const InsertPayload& ins) {
                          insert_effect(state_, ins.p, ins.sigma0, e.dot, e.vc, options_.effects);
                        },
                        [&](const DeletePayload& del) { delete_effect(state_, del.p); },
                        [&](const ApplyPayload& app) { apply_effect(state_, app.p, app.op, e.context()); },
                        [&](const ForEachPayload& fe) { foreach_effect(state_, fe.f, e.dot, e.vc); }},
             e.payload);
}

}  // namespace foreach_crdt

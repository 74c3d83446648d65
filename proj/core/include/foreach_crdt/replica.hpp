#pragma once

#include <cstdint>
#include <vector>

#include "foreach_crdt/causal.hpp"
#include "foreach_crdt/envelope.hpp"
#include "foreach_crdt/foreach_list.hpp"
#include "foreach_crdt/list_state.hpp"

namespace foreach_crdt {

struct ReplicaOptions {
  EffectOptions effects;
};

struct ElementView {
  const Position& p;
  const ElementState& sigma;
};

// One replica of the list of CRDTs with for-each. Each generator builds the
// message, runs the local effector atomically, and returns the envelope for
// broadcast. Remote envelopes go through deliver(), which enforces causal,
// exactly-once delivery.
class Replica {
 public:
  explicit Replica(ReplicaId id, ReplicaOptions options = {});

  const ReplicaId& id() const { return id_; }
  const VectorClock& clock() const { return vc_; }
  const ListState& state() const { return state_; }
  std::size_t size() const { return state_.size(); }

  std::vector<ElementView> elements() const;
  const Element& at(std::size_t index) const;

  Envelope insert(std::size_t index, ElementState initial);
  Envelope erase(std::size_t index);
  Envelope apply(std::size_t index, ElementOpRequest op);
  Envelope for_each(MutationFn f);

  // Position-addressed variants. Throw ContractViolation if `p` is absent.
  Envelope erase_at(const Position& p);
  Envelope apply_at(const Position& p, ElementOpRequest op);

  // The literal local loop: one apply or delete envelope per currently
  // present element for which f(p, true) asks for something. Affects only
  // causally prior elements.
  std::vector<Envelope> for_each_prior(const MutationFn& f);

  bool has_delivered(const Dot& dot) const { return vc_.get(dot.sender) >= dot.clock; }
  bool can_deliver(const Envelope& e) const;

  // Runs the effector for a remote message. Throws CausalityError if the
  // message was already delivered or is not yet causally ready.
  void deliver(const Envelope& e);

 private:
  Envelope stamp(Payload payload);
  void effect(const Envelope& e);

  ReplicaId id_;
  ReplicaOptions options_;
  ListState state_;
  VectorClock vc_;
  std::uint64_t seq_ = 0;
};

}  // namespace foreach_crdt

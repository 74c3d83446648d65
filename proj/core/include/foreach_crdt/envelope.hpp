#pragma once

#include <string_view>
#include <variant>

#include "foreach_crdt/causal.hpp"
#include "foreach_crdt/element_crdt.hpp"
#include "foreach_crdt/mutation.hpp"
#include "foreach_crdt/position.hpp"

namespace foreach_crdt {

struct InsertPayload {
  Position p;
  ElementState sigma0;
};

struct DeletePayload {
  Position p;
};

struct ApplyPayload {
  Position p;
  ElementMessage op;
};

struct ForEachPayload {
  MutationFn f;
};

using Payload = std::variant<InsertPayload, DeletePayload, ApplyPayload, ForEachPayload>;

enum class MessageKind { kInsert, kDelete, kApply, kForEach };

std::string_view to_string(MessageKind kind);

// One broadcast message. vc is the sender's clock after incrementing its own
// entry, so vc[dot.sender] == dot.clock.
struct Envelope {
  Dot dot;
  VectorClock vc;
  Payload payload;

  MessageKind kind() const { return static_cast<MessageKind>(payload.index()); }
  ClockContext context() const { return {dot, vc}; }
};

bool deliverable(const Envelope& e, const VectorClock& local);
VectorClock record_delivery(const Envelope& e, VectorClock local);

// Human-readable reason why `e` is not deliverable at `local`, or empty.
std::string describe_causal_gap(const Envelope& e, const VectorClock& local);

}  // namespace foreach_crdt

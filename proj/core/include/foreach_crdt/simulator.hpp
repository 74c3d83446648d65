#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include "foreach_crdt/envelope.hpp"
#include "foreach_crdt/replica.hpp"
#include "foreach_crdt/rng.hpp"

namespace foreach_crdt {

struct MessageCounts {
  std::size_t insert = 0;
  std::size_t erase = 0;
  std::size_t apply = 0;
  std::size_t foreach = 0;

  void add(MessageKind kind);
  std::size_t total() const { return insert + erase + apply + foreach; }
};

// Single-threaded in-memory transport between a fixed set of replicas. Every
// generated envelope is queued for every other replica; delivery honours the
// causal gate and each replica's delivery order (its own generations
// included) is recorded for later replay.
class Simulator {
 public:
  Simulator(std::vector<ReplicaId> ids, std::uint64_t seed, ReplicaOptions options = {});

  std::size_t replica_count() const { return replicas_.size(); }
  Replica& replica(std::size_t index) { return replicas_.at(index); }
  const Replica& replica(std::size_t index) const { return replicas_.at(index); }
  // Throws ContractViolation for an unknown id.
  std::size_t index_of(const ReplicaId& id) const;

  // Runs a generator on one replica and broadcasts what it returns.
  const Envelope& perform(std::size_t at, const std::function<Envelope(Replica&)>& op);
  std::vector<Envelope> perform_many(std::size_t at, const std::function<std::vector<Envelope>(Replica&)>& op);

  // Records an envelope already effected at replica `from` and queues it for
  // the others.
  void broadcast(std::size_t from, const Envelope& e);

  // Delivers one envelope chosen uniformly among all deliverable
  // (replica, envelope) pairs. Returns false when nothing is deliverable.
  bool deliver_one();
  void deliver_all();
  // Delivers everything pending at one replica, oldest first.
  void deliver_all_to(std::size_t index);
  // Every replica receives everything, replica by replica, oldest first.
  void sync();

  std::size_t pending() const;

  // All envelopes in generation order.
  const std::vector<Envelope>& log() const { return log_; }
  const std::vector<Dot>& delivery_order(std::size_t index) const { return orders_.at(index); }
  const MessageCounts& counts() const { return counts_; }

  // Throws CausalityError unless every replica has delivered every logged
  // envelope exactly once and in an order consistent with causality.
  void check_exactly_once() const;

 private:
  void deliver_to(std::size_t index, std::size_t inbox_slot);

  std::vector<Replica> replicas_;
  std::vector<std::vector<std::size_t>> inboxes_;  // indices into log_
  std::vector<std::vector<Dot>> orders_;
  std::vector<Envelope> log_;
  MessageCounts counts_;
  Rng rng_;
};

// A causal delivery order of `envelopes` drawn uniformly step by step among
// the currently deliverable ones. Throws CausalityError if some envelope can
// never become deliverable.
std::vector<Dot> random_causal_schedule(const std::vector<Envelope>& envelopes, std::uint64_t seed);

}  // namespace foreach_crdt

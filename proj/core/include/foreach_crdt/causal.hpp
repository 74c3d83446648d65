#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <string_view>

namespace foreach_crdt {

// Identifies one replica. Ordered by its string value; every replica agrees
// on the order. Restricted to [A-Za-z0-9_-] so it can appear inside the
// textual position form without escaping.
class ReplicaId {
 public:
  ReplicaId() = default;
  explicit ReplicaId(std::string value);

  const std::string& str() const { return value_; }
  bool empty() const { return value_.empty(); }

  friend auto operator<=>(const ReplicaId&, const ReplicaId&) = default;
  friend bool operator==(const ReplicaId&, const ReplicaId&) = default;

  friend std::ostream& operator<<(std::ostream& os, const ReplicaId& id) { return os << id.value_; }

 private:
  std::string value_;
};

bool is_valid_replica_name(std::string_view name);

// A causal dot: the sender's own vector-clock entry for one message.
struct Dot {
  ReplicaId sender;
  std::uint64_t clock = 0;

  friend bool operator==(const Dot&, const Dot&) = default;
  friend auto operator<=>(const Dot&, const Dot&) = default;
};

std::ostream& operator<<(std::ostream& os, const Dot& dot);
std::string to_string(const Dot& dot);

enum class CausalOrder { kEqual, kBefore, kAfter, kConcurrent };

// Map from replica to counter. Absent entries read as zero; zero entries are
// never stored, so two clocks are equal iff their maps are equal.
class VectorClock {
 public:
  using Entries = std::map<ReplicaId, std::uint64_t>;

  VectorClock() = default;
  VectorClock(std::initializer_list<std::pair<const ReplicaId, std::uint64_t>> init);

  std::uint64_t get(const ReplicaId& id) const;
  void set(const ReplicaId& id, std::uint64_t value);
  std::uint64_t increment(const ReplicaId& id);

  // Componentwise maximum.
  void merge(const VectorClock& other);

  // Componentwise <=.
  bool dominated_by(const VectorClock& other) const;
  CausalOrder compare(const VectorClock& other) const;

  // Sum of all entries. Strictly increases along happened-before, so
  // (sum, sender) is a total order that extends causality.
  std::uint64_t total() const;

  const Entries& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }

  friend bool operator==(const VectorClock&, const VectorClock&) = default;

 private:
  Entries entries_;
};

std::ostream& operator<<(std::ostream& os, const VectorClock& vc);

// True iff the operation named by `t` is causally prior to (or is) the
// operation whose clock is `w`.
bool dot_is_prior(const Dot& t, const VectorClock& w);

// True iff the operation with clock `v` has not seen the operation named by
// `u`. Under causal delivery this means the two are concurrent.
bool dot_is_concurrent(const Dot& u, const VectorClock& v);

// Causal-delivery gate: the message is the next one from its sender and
// everything it depends on from other senders is already delivered.
bool deliverable(const Dot& dot, const VectorClock& message_vc, const VectorClock& local);

// Effector-side clock update. Only the sender's entry changes; under the
// delivery gate this equals a full merge.
VectorClock record_delivery(const Dot& dot, VectorClock local);

}  // namespace foreach_crdt

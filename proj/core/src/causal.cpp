#include "foreach_crdt/causal.hpp"

#include <algorithm>
#include <sstream>

#include "foreach_crdt/errors.hpp"

namespace foreach_crdt {

bool is_valid_replica_name(std::string_view name) {
  if (name.empty()) return false;
  return std::all_of(name.begin(), name.end(), [](char c) {
    return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_' ||
           c == '-';
  });
}

ReplicaId::ReplicaId(std::string value) : value_(std::move(value)) {
  if (!is_valid_replica_name(value_)) {
    throw ContractViolation("invalid replica id '" + value_ + "'");
  }
}

std::ostream& operator<<(std::ostream& os, const Dot& dot) {
  return os << '(' << dot.sender << ',' << dot.clock << ')';
}

std::string to_string(const Dot& dot) {
  std::ostringstream os;
  os << dot;
  return os.str();
}

VectorClock::VectorClock(std::initializer_list<std::pair<const ReplicaId, std::uint64_t>> init) {
  for (const auto& [id, n] : init) set(id, n);
}

std::uint64_t VectorClock::get(const ReplicaId& id) const {
  auto it = entries_.find(id);
  return it == entries_.end() ? 0 : it->second;
}

void VectorClock::set(const ReplicaId& id, std::uint64_t value) {
  if (value == 0) {
    entries_.erase(id);
  } else {
    entries_[id] = value;
  }
}

std::uint64_t VectorClock::increment(const ReplicaId& id) { return ++entries_[id]; }

void VectorClock::merge(const VectorClock& other) {
  for (const auto& [id, n] : other.entries_) {
    auto& mine = entries_[id];
    mine = std::max(mine, n);
  }
}

bool VectorClock::dominated_by(const VectorClock& other) const {
  return std::all_of(entries_.begin(), entries_.end(),
                     [&](const auto& kv) { return kv.second <= other.get(kv.first); });
}

CausalOrder VectorClock::compare(const VectorClock& other) const {
  const bool le = dominated_by(other);
  const bool ge = other.dominated_by(*this);
  if (le && ge) return CausalOrder::kEqual;
  if (le) return CausalOrder::kBefore;
  if (ge) return CausalOrder::kAfter;
  return CausalOrder::kConcurrent;
}

std::uint64_t VectorClock::total() const {
  std::uint64_t sum = 0;
  for (const auto& kv : entries_) sum += kv.second;
  return sum;
}

std::ostream& operator<<(std::ostream& os, const VectorClock& vc) {
  os << '{';
  bool first = true;
  for (const auto& [id, n] : vc.entries()) {
    if (!first) os << ',';
    first = false;
    os << id << ':' << n;
  }
  return os << '}';
}

bool dot_is_prior(const Dot& t, const VectorClock& w) { return w.get(t.sender) >= t.clock; }

bool dot_is_concurrent(const Dot& u, const VectorClock& v) { return v.get(u.sender) < u.clock; }

bool deliverable(const Dot& dot, const VectorClock& message_vc, const VectorClock& local) {
  if (message_vc.get(dot.sender) != dot.clock) return false;
  if (dot.clock != local.get(dot.sender) + 1) return false;
  for (const auto& [id, n] : message_vc.entries()) {
    if (id != dot.sender && n > local.get(id)) return false;
  }
  return true;
}

VectorClock record_delivery(const Dot& dot, VectorClock local) {
  local.set(dot.sender, dot.clock);
  return local;
}

}  // namespace foreach_crdt

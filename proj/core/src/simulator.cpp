#include "foreach_crdt/simulator.hpp"

#include "foreach_crdt/errors.hpp"
#include "foreach_crdt/oracle.hpp"

namespace foreach_crdt {

void MessageCounts::add(MessageKind kind) {
  switch (kind) {
    case MessageKind::kInsert:
      ++insert;
      break;
    case MessageKind::kDelete:
      ++erase;
      break;
    case MessageKind::kApply:
      ++apply;
      break;
    case MessageKind::kForEach:
      ++foreach;
      break;
  }
}

Simulator::Simulator(std::vector<ReplicaId> ids, std::uint64_t seed, ReplicaOptions options) : rng_(seed) {
  if (ids.empty()) throw ContractViolation("a simulation needs at least one replica");
  for (auto& id : ids) {
    for (const auto& r : replicas_) {
      if (r.id() == id) throw ContractViolation("duplicate replica id " + id.str());
    }
    replicas_.emplace_back(std::move(id), options);
  }
  inboxes_.resize(replicas_.size());
  orders_.resize(replicas_.size());
}

std::size_t Simulator::index_of(const ReplicaId& id) const {
  for (std::size_t i = 0; i < replicas_.size(); ++i) {
    if (replicas_[i].id() == id) return i;
  }
  throw ContractViolation("unknown replica " + id.str());
}

const Envelope& Simulator::perform(std::size_t at, const std::function<Envelope(Replica&)>& op) {
  Envelope e = op(replicas_.at(at));
  broadcast(at, e);
  return log_.back();
}

std::vector<Envelope> Simulator::perform_many(std::size_t at,
                                              const std::function<std::vector<Envelope>(Replica&)>& op) {
  auto out = op(replicas_.at(at));
  for (const auto& e : out) broadcast(at, e);
  return out;
}

void Simulator::broadcast(std::size_t from, const Envelope& e) {
  if (!(replicas_.at(from).id() == e.dot.sender)) {
    throw ContractViolation("replica " + replicas_[from].id().str() + " cannot broadcast " + to_string(e.dot));
  }
  log_.push_back(e);
  counts_.add(e.kind());
  orders_[from].push_back(e.dot);
  for (std::size_t i = 0; i < replicas_.size(); ++i) {
    if (i != from) inboxes_[i].push_back(log_.size() - 1);
  }
}

void Simulator::deliver_to(std::size_t index, std::size_t inbox_slot) {
  auto& inbox = inboxes_[index];
  const Envelope& e = log_[inbox[inbox_slot]];
  replicas_[index].deliver(e);
  orders_[index].push_back(e.dot);
  inbox.erase(inbox.begin() + static_cast<std::ptrdiff_t>(inbox_slot));
}

bool Simulator::deliver_one() {
  std::vector<std::pair<std::size_t, std::size_t>> ready;
  for (std::size_t r = 0; r < replicas_.size(); ++r) {
    for (std::size_t k = 0; k < inboxes_[r].size(); ++k) {
      if (replicas_[r].can_deliver(log_[inboxes_[r][k]])) ready.emplace_back(r, k);
    }
  }
  if (ready.empty()) return false;
  const auto [r, k] = ready[uniform_below(rng_, ready.size())];
  deliver_to(r, k);
  return true;
}

void Simulator::deliver_all() {
  while (deliver_one()) {
  }
  if (pending() != 0) throw CausalityError("simulation stalled with undeliverable envelopes");
}

void Simulator::deliver_all_to(std::size_t index) {
  auto& inbox = inboxes_.at(index);
  bool progress = true;
  while (progress) {
    progress = false;
    for (std::size_t k = 0; k < inbox.size(); ++k) {
      if (replicas_[index].can_deliver(log_[inbox[k]])) {
        deliver_to(index, k);
        progress = true;
        break;
      }
    }
  }
  if (!inbox.empty()) {
    throw CausalityError("replica " + replicas_[index].id().str() + ": " +
                         describe_causal_gap(log_[inbox.front()], replicas_[index].clock()));
  }
}

void Simulator::sync() {
  for (std::size_t i = 0; i < replicas_.size(); ++i) deliver_all_to(i);
}

std::size_t Simulator::pending() const {
  std::size_t n = 0;
  for (const auto& inbox : inboxes_) n += inbox.size();
  return n;
}

void Simulator::check_exactly_once() const {
  const oracle::History h(log_);
  for (std::size_t i = 0; i < replicas_.size(); ++i) {
    try {
      oracle::validate_complete_schedule(h, orders_[i]);
    } catch (const CausalityError& err) {
      throw CausalityError("replica " + replicas_[i].id().str() + ": " + err.what());
    }
  }
}

std::vector<Dot> random_causal_schedule(const std::vector<Envelope>& envelopes, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::size_t> waiting(envelopes.size());
  for (std::size_t i = 0; i < waiting.size(); ++i) waiting[i] = i;
  VectorClock local;
  std::vector<Dot> order;
  order.reserve(envelopes.size());
  std::vector<std::size_t> ready;
  while (!waiting.empty()) {
    ready.clear();
    for (std::size_t k = 0; k < waiting.size(); ++k) {
      if (deliverable(envelopes[waiting[k]], local)) ready.push_back(k);
    }
    if (ready.empty()) {
      throw CausalityError(describe_causal_gap(envelopes[waiting.front()], local));
    }
    const std::size_t k = ready[uniform_below(rng, ready.size())];
    const Envelope& e = envelopes[waiting[k]];
    local = record_delivery(e, std::move(local));
    order.push_back(e.dot);
    waiting.erase(waiting.begin() + static_cast<std::ptrdiff_t>(k));
  }
  return order;
}

}  // namespace foreach_crdt

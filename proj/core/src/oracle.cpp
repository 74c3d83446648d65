#include "foreach_crdt/oracle.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "foreach_crdt/errors.hpp"
#include "foreach_crdt/rng.hpp"
#include "overloaded.hpp"

namespace foreach_crdt::oracle {

using detail::overloaded;

namespace {

const Position* target_position(const Envelope& e) {
  return std::visit(overloaded{[](const InsertPayload& p) -> const Position* { return &p.p; },
                               [](const DeletePayload& p) -> const Position* { return &p.p; },
                               [](const ApplyPayload& p) -> const Position* { return &p.p; },
                               [](const ForEachPayload&) -> const Position* { return nullptr; }},
                    e.payload);
}

}  // namespace

History::History(std::vector<Envelope> envelopes) : envelopes_(std::move(envelopes)) {
  const std::size_t n = envelopes_.size();
  std::map<ReplicaId, std::uint64_t> highest;
  for (std::size_t i = 0; i < n; ++i) {
    const Envelope& e = envelopes_[i];
    if (e.dot.clock == 0) throw ValidationError("envelope " + to_string(e.dot) + " has clock 0");
    if (e.vc.get(e.dot.sender) != e.dot.clock) {
      throw ValidationError("envelope " + to_string(e.dot) + " carries a clock that disagrees with its dot");
    }
    if (!index_.emplace(e.dot, i).second) throw ValidationError("duplicate envelope " + to_string(e.dot));
    auto& h = highest[e.dot.sender];
    h = std::max(h, e.dot.clock);
  }
  for (const auto& [sender, top] : highest) {
    for (std::uint64_t c = 1; c <= top; ++c) {
      if (!index_.contains(Dot{sender, c})) {
        throw ValidationError("history is missing envelope " + to_string(Dot{sender, c}));
      }
    }
  }
  for (const Envelope& e : envelopes_) {
    for (const auto& [id, k] : e.vc.entries()) {
      auto it = index_.find(Dot{id, k});
      if (it == index_.end()) {
        throw ValidationError("envelope " + to_string(e.dot) + " depends on unknown " + to_string(Dot{id, k}));
      }
      if (!envelopes_[it->second].vc.dominated_by(e.vc)) {
        throw ValidationError("envelope " + to_string(e.dot) + " does not dominate its predecessor " +
                              to_string(Dot{id, k}));
      }
    }
  }
  before_.assign(n * n, false);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      before_[a * n + b] = envelopes_[a].vc.compare(envelopes_[b].vc) == CausalOrder::kBefore;
    }
  }
}

std::optional<std::size_t> History::index_of(const Dot& dot) const {
  auto it = index_.find(dot);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::size_t> History::linear_extension(std::uint64_t seed) const {
  const std::size_t n = envelopes_.size();
  std::vector<std::size_t> indegree(n, 0);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (happened_before(a, b)) ++indegree[b];
    }
  }
  std::vector<std::size_t> ready;
  for (std::size_t i = 0; i < n; ++i) {
    if (indegree[i] == 0) ready.push_back(i);
  }
  Rng rng(seed);
  std::vector<std::size_t> order;
  order.reserve(n);
  while (!ready.empty()) {
    std::size_t pick = 0;
    if (seed == 0) {
      for (std::size_t k = 1; k < ready.size(); ++k) {
        const Envelope& a = envelopes_[ready[k]];
        const Envelope& b = envelopes_[ready[pick]];
        if (std::pair(a.vc.total(), a.dot.sender) < std::pair(b.vc.total(), b.dot.sender)) pick = k;
      }
    } else {
      pick = uniform_below(rng, ready.size());
    }
    const std::size_t next = ready[pick];
    ready.erase(ready.begin() + static_cast<std::ptrdiff_t>(pick));
    order.push_back(next);
    for (std::size_t b = 0; b < n; ++b) {
      if (happened_before(next, b) && --indegree[b] == 0) ready.push_back(b);
    }
  }
  return order;
}

namespace {

ExpectedState fold_element(const History& h, std::size_t insert_index, const std::vector<std::size_t>& order) {
  const Envelope& ins = h[insert_index];
  const auto* payload = std::get_if<InsertPayload>(&ins.payload);
  if (!payload) throw ValidationError("envelope " + to_string(ins.dot) + " is not an insert");
  const Position& p = payload->p;
  ElementState sigma = payload->sigma0;

  for (std::size_t j : order) {
    if (j == insert_index) continue;
    const Envelope& e = h[j];
    if (e.kind() == MessageKind::kForEach) {
      if (h.happened_before(j, insert_index)) continue;
      const bool prior = h.happened_before(insert_index, j);
      const Instruction instruction = eval_mutation(std::get<ForEachPayload>(e.payload).f, p, prior);
      if (std::holds_alternative<Del>(instruction)) return Deleted{};
      if (const auto* apply = std::get_if<ApplyOp>(&instruction)) effect(apply->op, e.context(), sigma);
      continue;
    }
    const Position* q = target_position(e);
    if (!q || !(*q == p)) continue;
    if (e.kind() == MessageKind::kInsert) {
      throw ValidationError("position " + p.str() + " inserted twice");
    }
    if (!h.happened_before(insert_index, j)) {
      throw ValidationError("envelope " + to_string(e.dot) + " targets " + p.str() + " without seeing its insert");
    }
    if (e.kind() == MessageKind::kDelete) return Deleted{};
    effect(std::get<ApplyPayload>(e.payload).op, e.context(), sigma);
  }
  return sigma;
}

}  // namespace

ExpectedState expected_element_state(const History& h, std::size_t insert_index, std::uint64_t extension_seed) {
  return fold_element(h, insert_index, h.linear_extension(extension_seed));
}

codec::Json expected_snapshot(const History& h, std::uint64_t extension_seed) {
  const auto order = h.linear_extension(extension_seed);
  std::vector<std::pair<Position, ElementState>> alive;
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (h[i].kind() != MessageKind::kInsert) continue;
    auto state = fold_element(h, i, order);
    if (auto* sigma = std::get_if<ElementState>(&state)) {
      alive.emplace_back(std::get<InsertPayload>(h[i].payload).p, std::move(*sigma));
    }
  }
  std::sort(alive.begin(), alive.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  codec::Json out = codec::Json::array();
  for (const auto& [p, sigma] : alive) {
    out.push_back(codec::Json{{"p", codec::encode(p)}, {"sigma", codec::encode(sigma)}});
  }
  return out;
}

std::vector<Dot> expected_deletions(const History& h) {
  const auto order = h.linear_extension();
  std::vector<Dot> out;
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (h[i].kind() != MessageKind::kInsert) continue;
    if (std::holds_alternative<Deleted>(fold_element(h, i, order))) out.push_back(h[i].dot);
  }
  return out;
}

void validate_schedule(const History& h, const std::vector<Dot>& order) {
  std::vector<bool> seen(h.size(), false);
  for (const Dot& dot : order) {
    auto idx = h.index_of(dot);
    if (!idx) throw CausalityError("schedule delivers unknown envelope " + to_string(dot));
    if (seen[*idx]) throw CausalityError("schedule delivers " + to_string(dot) + " twice");
    for (std::size_t j = 0; j < h.size(); ++j) {
      if (!seen[j] && h.happened_before(j, *idx)) {
        throw CausalityError("schedule delivers " + to_string(dot) + " before its causal predecessor " +
                             to_string(h[j].dot));
      }
    }
    seen[*idx] = true;
  }
}

void validate_complete_schedule(const History& h, const std::vector<Dot>& order) {
  validate_schedule(h, order);
  if (order.size() != h.size()) {
    throw CausalityError("schedule delivers " + std::to_string(order.size()) + " of " + std::to_string(h.size()) +
                         " envelopes");
  }
}

std::string describe_difference(const codec::Json& expected, const codec::Json& actual) {
  std::ostringstream os;
  if (!expected.is_array() || !actual.is_array()) return "snapshots are not arrays";
  const std::size_t n = std::min(expected.size(), actual.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (expected[i] != actual[i]) {
      os << "element " << i << ": expected " << expected[i].dump() << ", got " << actual[i].dump();
      return os.str();
    }
  }
  if (expected.size() != actual.size()) {
    os << "expected " << expected.size() << " elements, got " << actual.size();
    return os.str();
  }
  return {};
}

codec::Json ConvergenceReport::to_json() const {
  return codec::Json{{"schedules", snapshots.size()},
                     {"pairwise_equal", pairwise_equal},
                     {"oracle_equal", oracle_equal},
                     {"oracle_deterministic", oracle_deterministic},
                     {"diffs", diffs}};
}

ConvergenceReport check_convergence(const History& h, const std::vector<std::vector<Dot>>& schedules,
                                    const ReplicaOptions& options) {
  ConvergenceReport report;
  const codec::Json expected = expected_snapshot(h);
  report.expected = codec::dump(expected);
  for (std::uint64_t seed : {1, 2}) {
    if (codec::dump(expected_snapshot(h, seed)) != report.expected) {
      report.oracle_deterministic = false;
      report.diffs.push_back("oracle result depends on the linear extension (seed " + std::to_string(seed) + ")");
    }
  }

  for (std::size_t s = 0; s < schedules.size(); ++s) {
    validate_complete_schedule(h, schedules[s]);
    Replica replica(ReplicaId("replay"), options);
    for (const Dot& dot : schedules[s]) replica.deliver(h[*h.index_of(dot)]);
    const codec::Json snap = codec::snapshot(replica.state());
    report.snapshots.push_back(codec::dump(snap));
    if (report.snapshots.back() != report.snapshots.front()) {
      report.pairwise_equal = false;
      report.diffs.push_back("schedule " + std::to_string(s) + " differs from schedule 0: " +
                             describe_difference(codec::Json::parse(report.snapshots.front()), snap));
    }
    if (report.snapshots.back() != report.expected) {
      report.oracle_equal = false;
      report.diffs.push_back("schedule " + std::to_string(s) +
                             " differs from the oracle: " + describe_difference(expected, snap));
    }
  }
  return report;
}

}  // namespace foreach_crdt::oracle

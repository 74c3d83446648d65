#include "foreach_crdt/fuzz.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "foreach_crdt/errors.hpp"

namespace foreach_crdt {

namespace {

enum class OpKind { kInsert, kDelete, kApply, kForEach };

std::vector<ReplicaId> replica_ids(std::size_t n) {
  std::vector<ReplicaId> ids;
  for (std::size_t i = 0; i < n; ++i) {
    ids.emplace_back(i < 26 ? std::string(1, static_cast<char>('A' + i)) : "R" + std::to_string(i));
  }
  return ids;
}

template <typename T>
void shuffle(std::vector<T>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[uniform_below(rng, i)]);
}

PureOp random_attr(Rng& rng) {
  switch (uniform_below(rng, 4)) {
    case 0:
      return attr_set("bold", chance(rng, 1, 2));
    case 1:
      return attr_set("italic", chance(rng, 1, 2));
    case 2: {
      static const char* const colors[] = {"red", "green", "blue"};
      return attr_set("color", std::string(colors[uniform_below(rng, 3)]));
    }
    default:
      return attr_set("size", static_cast<std::int64_t>(8 + uniform_below(rng, 17)));
  }
}

std::vector<Position> visible_positions(const Replica& r) {
  std::vector<Position> out;
  out.reserve(r.size());
  for (const auto& e : r.state().elts) out.push_back(e.p);
  return out;
}

std::set<Position> inserted_positions(const std::vector<Envelope>& log) {
  std::set<Position> out;
  for (const auto& e : log) {
    if (const auto* ins = std::get_if<InsertPayload>(&e.payload)) out.insert(ins->p);
  }
  return out;
}

}  // namespace

void validate(const FuzzConfig& config) {
  if (config.ops < 1) throw ValidationError("ops must be at least 1");
  if (config.replicas < 1) throw ValidationError("replicas must be at least 1");
  if (config.foreach_share < 0.0 || config.foreach_share > 1.0) {
    throw ValidationError("foreach share must lie in [0, 1]");
  }
}

MutationFn random_mutation(Rng& rng, const std::vector<Position>& visible) {
  MutationFn f;
  const std::size_t n = visible.size();
  if (n > 0) {
    switch (uniform_below(rng, 4)) {
      case 0:
        f.predicate = AllPositions{};
        break;
      case 1: {
        const std::size_t i = uniform_below(rng, n);
        const std::size_t j = i + 1 + uniform_below(rng, n - i);
        f.predicate = HalfOpenRange{visible[i], j == n ? PositionBound(PosInfinity{}) : PositionBound(visible[j])};
        break;
      }
      case 2: {
        const std::size_t i = uniform_below(rng, n);
        const std::size_t j = i + uniform_below(rng, n - i);
        f.predicate = ClosedRange{visible[i], visible[j]};
        break;
      }
      default: {
        IdSet ids;
        for (const auto& p : visible) {
          if (chance(rng, 1, 2)) ids.ids.insert(p);
        }
        if (ids.ids.empty()) ids.ids.insert(visible[uniform_below(rng, n)]);
        f.predicate = std::move(ids);
        break;
      }
    }
  }
  const auto g = uniform_below(rng, 4);
  f.gate = g < 2 ? PriorGate::kAny : g == 2 ? PriorGate::kPriorOnly : PriorGate::kConcurrentOnly;
  const auto k = uniform_below(rng, 20);
  if (k < 14) {
    f.instruction = ApplyOp{random_attr(rng)};
  } else if (k < 17 && !std::holds_alternative<AllPositions>(f.predicate)) {
    // Deleting everything would leave later operations little to work on.
    f.instruction = Del{};
  } else {
    f.instruction = Null{};
  }
  return f;
}

std::vector<std::string> check_history(const std::vector<Envelope>& log, const std::vector<std::vector<Dot>>& schedules,
                                       const ReplicaOptions& options, oracle::ConvergenceReport* report) {
  std::vector<std::string> failures;
  try {
    const oracle::History h(log);
    auto conv = oracle::check_convergence(h, schedules, options);
    failures = conv.diffs;

    if (!conv.snapshots.empty()) {
      std::set<Position> present;
      for (const auto& item : codec::Json::parse(conv.snapshots.front())) {
        present.insert(codec::decode_position(item.at("p")));
      }
      std::set<Position> deleted;
      for (const Dot& d : oracle::expected_deletions(h)) {
        deleted.insert(std::get<InsertPayload>(h[*h.index_of(d)].payload).p);
      }
      for (const auto& p : inserted_positions(log)) {
        if (present.contains(p) == deleted.contains(p)) {
          failures.push_back("deletion status of " + p.str() + " disagrees with the oracle");
        }
      }
    }
    if (report) *report = std::move(conv);
  } catch (const Error& err) {
    failures.emplace_back(err.what());
  }
  return failures;
}

std::vector<Envelope> minimize_failure(const std::vector<Envelope>& log, std::size_t schedules, std::uint64_t seed,
                                       const ReplicaOptions& options) {
  const auto fails = [&](const std::vector<Envelope>& candidate) {
    std::vector<std::vector<Dot>> orders;
    for (std::size_t k = 0; k < std::max<std::size_t>(schedules, 1); ++k) {
      orders.push_back(random_causal_schedule(candidate, derive_seed(seed, 200 + k)));
    }
    return !check_history(candidate, orders, options).empty();
  };

  std::vector<Envelope> current = log;
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = current.size(); i-- > 0;) {
      if (i >= current.size()) continue;
      const Dot victim = current[i].dot;
      std::vector<Envelope> candidate;
      for (const auto& e : current) {
        if (e.vc.get(victim.sender) < victim.clock) candidate.push_back(e);
      }
      if (fails(candidate)) {
        current = std::move(candidate);
        changed = true;
      }
    }
  }
  return current;
}

FuzzResult run_fuzz(const FuzzConfig& config) {
  validate(config);
  FuzzResult result;
  result.config = config;

  ReplicaOptions options;
  options.effects.run_buffer_loop = !config.inject_skip_buffer;
  Simulator sim(replica_ids(config.replicas), derive_seed(config.seed, 0), options);
  Rng rng(derive_seed(config.seed, 1));

  const std::size_t foreach_ops =
      config.with_foreach ? static_cast<std::size_t>(std::ceil(config.foreach_share * config.ops)) : 0;
  std::vector<bool> deck(config.ops, false);
  std::fill_n(deck.begin(), std::min(foreach_ops, deck.size()), true);
  shuffle(deck, rng);

  for (const bool is_foreach : deck) {
    for (auto steps = uniform_below(rng, 4); steps > 0; --steps) sim.deliver_one();
    const std::size_t at = uniform_below(rng, sim.replica_count());
    Replica& r = sim.replica(at);

    OpKind kind = OpKind::kForEach;
    if (!is_foreach) {
      const auto k = uniform_below(rng, 10);
      kind = k < 5 ? OpKind::kInsert : k < 7 ? OpKind::kDelete : OpKind::kApply;
      if (r.size() == 0) kind = OpKind::kInsert;
    }
    switch (kind) {
      case OpKind::kInsert: {
        const auto index = uniform_below(rng, r.size() + 1);
        const std::string ch(1, static_cast<char>('a' + uniform_below(rng, 26)));
        sim.perform(at, [&](Replica& x) { return x.insert(index, rich_char(ch)); });
        break;
      }
      case OpKind::kDelete: {
        const auto index = uniform_below(rng, r.size());
        sim.perform(at, [&](Replica& x) { return x.erase(index); });
        break;
      }
      case OpKind::kApply: {
        const auto index = uniform_below(rng, r.size());
        PureOp op = random_attr(rng);
        sim.perform(at, [&](Replica& x) { return x.apply(index, op); });
        break;
      }
      case OpKind::kForEach: {
        MutationFn f = random_mutation(rng, visible_positions(r));
        sim.perform(at, [&](Replica& x) { return x.for_each(f); });
        break;
      }
    }
  }

  try {
    sim.deliver_all();
    sim.check_exactly_once();
  } catch (const CausalityError& err) {
    result.failures.push_back(std::string("causal delivery: ") + err.what());
  }

  result.log = sim.log();
  result.counts = sim.counts();

  std::string first;
  for (std::size_t i = 0; i < sim.replica_count(); ++i) {
    const std::string snap = codec::dump(codec::snapshot(sim.replica(i).state()));
    if (i == 0) {
      first = snap;
    } else if (snap != first) {
      result.live_equal = false;
      result.failures.push_back("replica " + sim.replica(i).id().str() + " differs from replica " +
                                sim.replica(0).id().str());
    }
    result.schedules.push_back(sim.delivery_order(i));
  }
  for (std::size_t k = 0; k < config.schedules; ++k) {
    result.schedules.push_back(random_causal_schedule(result.log, derive_seed(config.seed, 100 + k)));
  }

  for (auto& f : check_history(result.log, result.schedules, options, &result.convergence)) {
    result.failures.push_back(std::move(f));
  }
  if (!result.ok() && config.minimize) {
    result.minimized = minimize_failure(result.log, config.schedules, config.seed, options);
  }
  return result;
}

codec::Json FuzzResult::to_json() const {
  codec::Json j;
  j["config"] = {{"ops", config.ops},
                 {"replicas", config.replicas},
                 {"seed", config.seed},
                 {"schedules", config.schedules},
                 {"with_foreach", config.with_foreach},
                 {"inject_skip_buffer", config.inject_skip_buffer}};
  j["ok"] = ok();
  j["envelopes"] = log.size();
  j["counts"] = {{"insert", counts.insert},
                 {"delete", counts.erase},
                 {"apply", counts.apply},
                 {"foreach", counts.foreach}};
  j["live_equal"] = live_equal;
  j["convergence"] = convergence.to_json();
  j["failures"] = failures;
  if (!ok()) j["minimized_envelopes"] = minimized.size();
  return j;
}

}  // namespace foreach_crdt

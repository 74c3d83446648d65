#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "foreach_crdt/codec.hpp"
#include "foreach_crdt/envelope.hpp"
#include "foreach_crdt/mutation.hpp"
#include "foreach_crdt/oracle.hpp"
#include "foreach_crdt/rng.hpp"
#include "foreach_crdt/simulator.hpp"

namespace foreach_crdt {

struct FuzzConfig {
  std::size_t ops = 200;
  std::size_t replicas = 4;
  std::uint64_t seed = 1;
  std::size_t schedules = 10;
  bool with_foreach = true;
  double foreach_share = 0.3;
  // Self-test: replicas skip the buffer loop of the insert effector.
  bool inject_skip_buffer = false;
  bool minimize = true;
};

// Throws ValidationError for a config that cannot run.
void validate(const FuzzConfig& config);

struct FuzzResult {
  FuzzConfig config;
  std::vector<Envelope> log;
  std::vector<std::vector<Dot>> schedules;  // live replicas first, then random
  MessageCounts counts;
  bool live_equal = true;
  oracle::ConvergenceReport convergence;
  std::vector<std::string> failures;
  std::vector<Envelope> minimized;  // only when the run failed

  bool ok() const { return failures.empty(); }
  codec::Json to_json() const;
};

// A random mutation function over the elements currently visible to one
// replica. Instructions only use attr_set, so they fit rich characters.
MutationFn random_mutation(Rng& rng, const std::vector<Position>& visible);

// Random rich-character workload across `replicas` replicas with random
// interleaving of delivery, then full delivery and the convergence checks:
// live replicas pairwise, `schedules` random causal replays, and the oracle.
// The causal gate of every live replica is checked independently.
FuzzResult run_fuzz(const FuzzConfig& config);

// Runs the convergence checks of run_fuzz on a fixed history. Returns the
// failure messages (empty on success).
std::vector<std::string> check_history(const std::vector<Envelope>& log, const std::vector<std::vector<Dot>>& schedules,
                                       const ReplicaOptions& options, oracle::ConvergenceReport* report = nullptr);

// Greedily drops envelopes (with everything causally after them) while
// random replays of the remainder still fail the checks.
std::vector<Envelope> minimize_failure(const std::vector<Envelope>& log, std::size_t schedules, std::uint64_t seed,
                                       const ReplicaOptions& options);

}  // namespace foreach_crdt

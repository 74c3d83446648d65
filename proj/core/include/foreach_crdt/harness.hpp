#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "foreach_crdt/codec.hpp"
#include "foreach_crdt/envelope.hpp"
#include "foreach_crdt/fuzz.hpp"

namespace foreach_crdt::harness {

inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitUsage = 2;

struct Outcome {
  int exit_code = kExitPass;
  codec::Json report;
  std::vector<std::string> lines;  // human summary
};

// Envelope logs are JSON lines. A sidecar `<log>.meta.json` records the
// delivery schedules, the snapshot each produced, and the replica options, so
// a replay can check it reproduces the run byte for byte.
struct Log {
  std::vector<Envelope> envelopes;
  std::optional<codec::Json> meta;
};

std::filesystem::path meta_path(const std::filesystem::path& log);
void write_log(const std::filesystem::path& path, const std::vector<Envelope>& envelopes,
               const std::vector<std::vector<Dot>>& schedules, const std::vector<std::string>& snapshots,
               const ReplicaOptions& options, codec::Json extra = codec::Json::object());
// Throws ParseError (with the line number for a bad envelope line).
Log read_log(const std::filesystem::path& path);

struct ScenarioOptions {
  std::string name;
  std::filesystem::path dir;
  std::uint64_t seed = 0;
  std::optional<std::filesystem::path> log;
  bool write_golden = false;
};

// Runs a scenario script over its live delivery orders plus random causal
// schedules, and checks replicas, oracle and the golden file beside the
// script. Unknown scenarios are usage errors.
Outcome run_scenario(const ScenarioOptions& options);

struct FuzzOptions {
  FuzzConfig config;
  std::optional<std::filesystem::path> log;
};

// On failure a minimized reproducing log is written next to `log`
// (`<log>.min.jsonl`), or to fuzz-failure-<seed>.jsonl without one.
Outcome fuzz(const FuzzOptions& options);

// Re-delivers a log per its recorded schedules (file order without a
// sidecar) on fresh replicas, checks the snapshots against the recorded ones
// and re-runs the convergence checks.
Outcome replay(const std::filesystem::path& log);

}  // namespace foreach_crdt::harness

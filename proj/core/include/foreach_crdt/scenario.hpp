#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "foreach_crdt/codec.hpp"
#include "foreach_crdt/element_crdt.hpp"
#include "foreach_crdt/mutation.hpp"
#include "foreach_crdt/replica.hpp"
#include "foreach_crdt/simulator.hpp"

namespace foreach_crdt {

// Rich text ---------------------------------------------------------------

enum class RangeMode { kHalfOpen, kClosed };

// Sets `key` on every character in the range. A half-open range [start, end)
// also catches characters inserted concurrently just before `end`; a closed
// range [start, end] stops at its last character. Throws ContractViolation
// unless start < end (start <= end when closed) and, when closed, `end` is a
// position.
MutationFn rich_text_format(const Position& start, const PositionBound& end, RangeMode mode, std::string key,
                            AttrValue value);
MutationFn rich_text_bold(const Position& start, const PositionBound& end, RangeMode mode);

// Deletes the characters in [start, end) that the deleting replica could see;
// concurrently inserted text survives.
MutationFn rich_text_delete_range(const Position& start, const PositionBound& end);

// Position bounds of the index range [first, last) of a replica's list, as
// used by the builders above: [p(first), p(last) or +inf) for half-open and
// [p(first), p(last - 1)] for closed.
std::pair<Position, PositionBound> index_range(const Replica& r, std::size_t first, std::size_t last, RangeMode mode);

// Recipes -----------------------------------------------------------------

// Multiplies every amount, including those of concurrently inserted
// ingredients. Throws ContractViolation unless s > 0.
MutationFn scale_recipe(const Rational& s);

// Slideshow ---------------------------------------------------------------
//
// An object is a nested list of translation vectors; its position is their
// sum. Rotating a group multiplies every vector, so a concurrent translation
// ends up rotated as well.

// Throws ContractViolation if `objects` is empty.
MutationFn rotate_group(std::set<Position> objects, const Matrix2& m);
Envelope translate_object(Replica& r, const Position& object, const Vec2& v);
Vec2 object_position(const NestedList& object);
NestedList slide_object(const std::vector<Vec2>& vectors, const ReplicaId& author);

// Scripts -----------------------------------------------------------------

// A scripted multi-replica run loaded from JSON:
//   {"name", "kind": "rich_text" | "recipe" | "slideshow", "replicas": [...],
//    "schedules": N, "steps": [{"op": ..., "at": ..., ...}]}
// Steps run in order; messages stay in flight until a "sync" or "deliver"
// step or the end of the script, so steps between barriers are concurrent.
struct Scenario {
  std::string name;
  std::string kind;
  std::string description;
  std::vector<ReplicaId> replicas;
  std::size_t random_schedules = 4;
  codec::Json steps;
};

// Throw SchemaError for a malformed script.
Scenario parse_scenario(const codec::Json& j);
Scenario load_scenario(const std::filesystem::path& path);

struct StepRecord {
  std::size_t index = 0;
  std::string op;
  std::string at;
  std::size_t envelopes = 0;
  // For for-each steps: how many envelopes the per-element loop would have
  // sent from the same replica at the same moment.
  std::optional<std::size_t> per_element_envelopes;

  codec::Json to_json() const;
};

struct ScenarioRun {
  std::vector<Envelope> log;
  std::vector<std::vector<Dot>> live_orders;
  std::vector<std::string> live_snapshots;
  std::vector<StepRecord> steps;
  MessageCounts counts;
};

// Runs the script, then delivers everything in flight to every replica.
ScenarioRun execute(const Scenario& scenario, std::uint64_t seed = 0);

// Human-oriented view of a snapshot ([{p, sigma}]):
//   rich_text: {"text", "runs": [{"text", "attrs"}]}
//   recipe:    [{"name", "amount", "unit"}]
//   slideshow: [{"object", "position": [x, y], "vectors"}]
codec::Json render(const std::string& kind, const codec::Json& snapshot);

}  // namespace foreach_crdt

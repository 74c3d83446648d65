#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "foreach_crdt/codec.hpp"
#include "foreach_crdt/envelope.hpp"
#include "foreach_crdt/replica.hpp"

// Reference semantics for the list with for-each, computed in batch from a
// full message history. Nothing here looks at replica internals: causality is
// re-derived from the envelopes' vector clocks, and each element's state is a
// direct fold over the messages that concern it.
namespace foreach_crdt::oracle {

// A set of envelopes with the happened-before relation derived from their
// vector clocks (a before b iff vc(a) <= vc(b) componentwise and they differ).
class History {
 public:
  // Throws ValidationError unless the dots are unique, each sender's clocks
  // run 1..n without gaps, vc[sender] == clock, and every clock entry refers
  // to an envelope in the history whose own clock it dominates.
  explicit History(std::vector<Envelope> envelopes);

  const std::vector<Envelope>& envelopes() const { return envelopes_; }
  std::size_t size() const { return envelopes_.size(); }
  const Envelope& operator[](std::size_t i) const { return envelopes_[i]; }

  std::optional<std::size_t> index_of(const Dot& dot) const;
  bool happened_before(std::size_t a, std::size_t b) const { return before_[a * envelopes_.size() + b]; }
  bool concurrent(std::size_t a, std::size_t b) const {
    return a != b && !happened_before(a, b) && !happened_before(b, a);
  }

  // A topological order of the happened-before relation. Seed 0 breaks ties
  // by (clock sum, sender); other seeds break them pseudo-randomly.
  std::vector<std::size_t> linear_extension(std::uint64_t seed = 0) const;

 private:
  std::vector<Envelope> envelopes_;
  std::map<Dot, std::size_t> index_;
  std::vector<bool> before_;
};

struct Deleted {
  friend bool operator==(const Deleted&, const Deleted&) = default;
};

using ExpectedState = std::variant<Deleted, ElementState>;

// State of the element created by history[insert_index]: its initial state
// with, in a causal order, every apply on its position, f(p, true) for every
// for-each causally after the insert, and f(p, false) for every for-each
// concurrent with it. Deleted once a delete for its position appears or some
// f yields del; nothing after that point is folded.
ExpectedState expected_element_state(const History& h, std::size_t insert_index, std::uint64_t extension_seed = 0);

// The expected elements() snapshot of a replica that has delivered exactly
// the messages in `h`, in the same canonical form as codec::snapshot.
codec::Json expected_snapshot(const History& h, std::uint64_t extension_seed = 0);

// Dot of every insert that the deletion rule says is gone.
std::vector<Dot> expected_deletions(const History& h);

// Throws CausalityError naming the first envelope that is delivered twice,
// unknown to the history, or ahead of one of its causal predecessors.
void validate_schedule(const History& h, const std::vector<Dot>& order);

// Every schedule in `schedules` must deliver exactly the history.
void validate_complete_schedule(const History& h, const std::vector<Dot>& order);

struct ConvergenceReport {
  std::string expected;                // oracle snapshot, canonical text
  std::vector<std::string> snapshots;  // one per schedule
  bool pairwise_equal = true;
  bool oracle_equal = true;
  bool oracle_deterministic = true;
  std::vector<std::string> diffs;

  bool ok() const { return pairwise_equal && oracle_equal && oracle_deterministic; }
  codec::Json to_json() const;
};

// Replays `h` on a fresh replica once per schedule and compares every final
// snapshot with each other and with expected_snapshot. Schedules are checked
// with validate_complete_schedule first.
ConvergenceReport check_convergence(const History& h, const std::vector<std::vector<Dot>>& schedules,
                                    const ReplicaOptions& options = {});

// Short description of the first difference between two snapshots.
std::string describe_difference(const codec::Json& expected, const codec::Json& actual);

}  // namespace foreach_crdt::oracle

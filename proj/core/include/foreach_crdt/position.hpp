#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <compare>
#include <ostream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "foreach_crdt/causal.hpp"

namespace foreach_crdt {

using BigInt = boost::multiprecision::cpp_int;

// One level of a position path.
struct PositionPair {
  BigInt digit;
  ReplicaId author;

  friend bool operator==(const PositionPair&, const PositionPair&) = default;
};

std::strong_ordering compare(const PositionPair& a, const PositionPair& b);

// Logoot-style list identifier: a non-empty path of (digit, author) pairs,
// ordered lexicographically, with a strict prefix ordered before its
// extensions. Every well-formed position ends in a pair whose digit is at
// least 1, which leaves room below any position for a new one.
class Position {
 public:
  explicit Position(std::vector<PositionPair> path);

  const std::vector<PositionPair>& path() const { return path_; }
  std::size_t depth() const { return path_.size(); }

  // `digit.author` pairs joined by '/', e.g. "1.A/1.B".
  std::string str() const;
  static Position parse(std::string_view text);

  friend std::strong_ordering operator<=>(const Position& a, const Position& b);
  friend bool operator==(const Position&, const Position&) = default;

 private:
  std::vector<PositionPair> path_;
};

std::ostream& operator<<(std::ostream& os, const Position& p);

// Three-way comparison with an explicit name, for call sites that read better
// without operators.
std::strong_ordering compare(const Position& a, const Position& b);

struct NegInfinity {
  friend bool operator==(NegInfinity, NegInfinity) { return true; }
};
struct PosInfinity {
  friend bool operator==(PosInfinity, PosInfinity) { return true; }
};

// A position or one of the two sentinels bracketing every position.
class PositionBound {
 public:
  PositionBound(NegInfinity) : value_(NegInfinity{}) {}
  PositionBound(PosInfinity) : value_(PosInfinity{}) {}
  PositionBound(Position p) : value_(std::move(p)) {}

  bool is_neg_infinity() const { return std::holds_alternative<NegInfinity>(value_); }
  bool is_pos_infinity() const { return std::holds_alternative<PosInfinity>(value_); }
  const Position* position() const { return std::get_if<Position>(&value_); }

  std::string str() const;
  static PositionBound parse(std::string_view text);

  friend std::strong_ordering operator<=>(const PositionBound& a, const PositionBound& b);
  friend bool operator==(const PositionBound& a, const PositionBound& b) {
    return (a <=> b) == std::strong_ordering::equal;
  }

 private:
  std::variant<NegInfinity, Position, PosInfinity> value_;
};

// Returns a fresh position strictly between `left` and `right`. The result
// ends in the pair (counter + 1, author), so distinct (author, counter) pairs
// never produce equal positions. Throws ContractViolation unless left < right.
//
// The prefix before that final pair is the shortest path P with
// left <= P < right such that P is not a prefix of `right`; at each level the
// digit is the smallest one above `left` when `left` constrains the level,
// otherwise the largest one below `right`.
Position between(const PositionBound& left, const PositionBound& right, const ReplicaId& author,
                 std::uint64_t counter);

}  // namespace foreach_crdt

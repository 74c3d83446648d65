#include "foreach_crdt/position.hpp"

#include <optional>
#include <sstream>

#include "foreach_crdt/errors.hpp"

namespace foreach_crdt {

std::strong_ordering compare(const PositionPair& a, const PositionPair& b) {
  if (a.digit < b.digit) return std::strong_ordering::less;
  if (b.digit < a.digit) return std::strong_ordering::greater;
  return a.author <=> b.author;
}

Position::Position(std::vector<PositionPair> path) : path_(std::move(path)) {
  if (path_.empty()) throw ContractViolation("position path must be non-empty");
  for (const auto& pair : path_) {
    if (pair.digit < 0) throw ContractViolation("position digits must be non-negative");
  }
  if (path_.back().digit < 1) throw ContractViolation("position must end in a digit >= 1");
}

std::strong_ordering operator<=>(const Position& a, const Position& b) {
  const std::size_t n = std::min(a.path_.size(), b.path_.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (auto c = compare(a.path_[i], b.path_[i]); c != 0) return c;
  }
  return a.path_.size() <=> b.path_.size();
}

std::strong_ordering compare(const Position& a, const Position& b) { return a <=> b; }

std::string Position::str() const {
  std::string out;
  for (std::size_t i = 0; i < path_.size(); ++i) {
    if (i) out += '/';
    out += path_[i].digit.str();
    out += '.';
    out += path_[i].author.str();
  }
  return out;
}

Position Position::parse(std::string_view text) {
  std::vector<PositionPair> path;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t slash = text.find('/', start);
    if (slash == std::string_view::npos) slash = text.size();
    const std::string_view part = text.substr(start, slash - start);
    const std::size_t dot = part.find('.');
    if (dot == std::string_view::npos || dot == 0) {
      throw ParseError("malformed position '" + std::string(text) + "'");
    }
    const std::string_view digits = part.substr(0, dot);
    for (char c : digits) {
      if (c < '0' || c > '9') throw ParseError("malformed position digit in '" + std::string(text) + "'");
    }
    const std::string author(part.substr(dot + 1));
    if (!is_valid_replica_name(author)) {
      throw ParseError("malformed position author in '" + std::string(text) + "'");
    }
    path.push_back({BigInt(std::string(digits)), ReplicaId(author)});
    start = slash + 1;
  }
  try {
    return Position(std::move(path));
  } catch (const ContractViolation& e) {
    throw ParseError(e.what());
  }
}

std::ostream& operator<<(std::ostream& os, const Position& p) { return os << p.str(); }

std::string PositionBound::str() const {
  if (is_neg_infinity()) return "-inf";
  if (is_pos_infinity()) return "+inf";
  return position()->str();
}

PositionBound PositionBound::parse(std::string_view text) {
  if (text == "-inf") return NegInfinity{};
  if (text == "+inf") return PosInfinity{};
  return Position::parse(text);
}

namespace {

int rank(const PositionBound& b) { return b.is_neg_infinity() ? 0 : b.is_pos_infinity() ? 2 : 1; }

PositionPair smallest_above(const PositionPair& bound, const ReplicaId& author) {
  if (author > bound.author) return {bound.digit, author};
  return {bound.digit + 1, author};
}

std::optional<PositionPair> largest_below(const PositionPair& bound, const ReplicaId& author) {
  if (author < bound.author) return PositionPair{bound.digit, author};
  if (bound.digit >= 1) return PositionPair{bound.digit - 1, author};
  return std::nullopt;
}

}  // namespace

std::strong_ordering operator<=>(const PositionBound& a, const PositionBound& b) {
  const int ra = rank(a);
  const int rb = rank(b);
  if (ra != rb || ra != 1) return ra <=> rb;
  return *a.position() <=> *b.position();
}

Position between(const PositionBound& left, const PositionBound& right, const ReplicaId& author,
                 std::uint64_t counter) {
  if (!(left < right)) {
    throw ContractViolation("between(" + left.str() + ", " + right.str() + "): bounds out of order");
  }
  const Position* lo = left.position();
  const Position* hi = right.position();
  // While active, the prefix built so far equals the bound's path up to the
  // current level, so that bound still constrains the next pair.
  bool left_active = lo != nullptr;
  bool right_active = hi != nullptr;

  std::vector<PositionPair> path;
  for (std::size_t level = 0;; ++level) {
    if (left_active && level >= lo->depth()) left_active = false;
    if (right_active && level >= hi->depth()) {
      throw IntegrityError("between: right bound exhausted at level " + std::to_string(level));
    }
    if (!left_active && !right_active) break;

    if (left_active && !right_active) {
      path.push_back(smallest_above(lo->path()[level], author));
      break;
    }
    if (!left_active) {
      const auto& r = hi->path()[level];
      if (auto below = largest_below(r, author)) {
        path.push_back(std::move(*below));
        break;
      }
      path.push_back(r);
      continue;
    }

    const auto& l = lo->path()[level];
    const auto& r = hi->path()[level];
    auto candidate = smallest_above(l, author);
    if (compare(candidate, r) < 0) {
      path.push_back(std::move(candidate));
      break;
    }
    path.push_back(l);
    if (!(l == r)) right_active = false;
  }
  path.push_back({BigInt(counter) + 1, author});
  return Position(std::move(path));
}

}  // namespace foreach_crdt

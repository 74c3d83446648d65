#include "foreach_crdt/crdt_list.hpp"

#include <algorithm>

#include "foreach_crdt/errors.hpp"

namespace foreach_crdt {

namespace {

auto lower_bound_for(const std::vector<Element>& elts, const Position& p) {
  return std::lower_bound(elts.begin(), elts.end(), p, [](const Element& e, const Position& q) { return e.p < q; });
}

}  // namespace

std::optional<std::size_t> ListState::index_of(const Position& p) const {
  auto it = lower_bound_for(elts, p);
  if (it == elts.end() || !(it->p == p)) return std::nullopt;
  return static_cast<std::size_t>(it - elts.begin());
}

Element* ListState::find(const Position& p) {
  auto idx = index_of(p);
  return idx ? &elts[*idx] : nullptr;
}

const Element* ListState::find(const Position& p) const {
  auto idx = index_of(p);
  return idx ? &elts[*idx] : nullptr;
}

PositionBound ListState::bound_before(std::size_t index) const {
  if (index == 0) return NegInfinity{};
  return elts.at(index - 1).p;
}

PositionBound ListState::bound_after(std::size_t index) const {
  if (index >= elts.size()) return PosInfinity{};
  return elts[index].p;
}

Position position_for_insert(const ListState& state, std::size_t index, const ReplicaId& author,
                             std::uint64_t counter) {
  if (index > state.size()) {
    throw ContractViolation("insert index " + std::to_string(index) + " out of range for length " +
                            std::to_string(state.size()));
  }
  return between(state.bound_before(index), state.bound_after(index), author, counter);
}

std::size_t insert_element(ListState& state, Position p, ElementState sigma, Dot t) {
  auto it = lower_bound_for(state.elts, p);
  if (it != state.elts.end() && it->p == p) {
    throw IntegrityError("duplicate position " + p.str() + " inserted by " + to_string(t));
  }
  const auto index = static_cast<std::size_t>(it - state.elts.begin());
  state.elts.insert(it, Element{std::move(p), std::move(sigma), std::move(t)});
  return index;
}

bool delete_effect(ListState& state, const Position& p) {
  auto idx = state.index_of(p);
  if (!idx) return false;
  state.elts.erase(state.elts.begin() + static_cast<std::ptrdiff_t>(*idx));
  return true;
}

bool apply_effect(ListState& state, const Position& p, const ElementMessage& msg, const ClockContext& ctx) {
  Element* elt = state.find(p);
  if (!elt) return false;
  effect(msg, ctx, elt->sigma);
  return true;
}

}  // namespace foreach_crdt

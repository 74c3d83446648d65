#pragma once

#include <nlohmann/json.hpp>
#include <string>
#include <string_view>

#include "foreach_crdt/causal.hpp"
#include "foreach_crdt/element_crdt.hpp"
#include "foreach_crdt/envelope.hpp"
#include "foreach_crdt/list_state.hpp"
#include "foreach_crdt/mutation.hpp"
#include "foreach_crdt/position.hpp"

// Canonical JSON forms. Objects use sorted keys (nlohmann's default map), and
// every encoding is a function of the value alone, so dump() output is
// byte-comparable across replicas, runs and processes. Decoders throw
// ParseError.
namespace foreach_crdt::codec {

using Json = nlohmann::json;

// Compact canonical text.
std::string dump(const Json& j);

Json encode(const VectorClock& vc);
VectorClock decode_clock(const Json& j);

Json encode(const Dot& dot);
Dot decode_dot(const Json& j);

Json encode(const Position& p);
Position decode_position(const Json& j);
Json encode(const PositionBound& b);
PositionBound decode_bound(const Json& j);

Json encode(const Rational& r);
Rational decode_rational(const Json& j);

Json encode(const AttrValue& v);
AttrValue decode_attr_value(const Json& j);

Json encode(const Matrix2& m);
Matrix2 decode_matrix(const Json& j);

Json encode(const ElementState& state);
ElementState decode_state(const Json& j);

Json encode(const PureOp& op);
PureOp decode_pure_op(const Json& j);

Json encode(const ElementMessage& msg);
ElementMessage decode_message(const Json& j);

Json encode(const MutationFn& f);
MutationFn decode_mutation(const Json& j);

// Full list state. The buffer is written sorted by dot: buffered for-each
// operations commute, so receipt order is not part of the observable state.
Json encode(const ListState& state);
ListState decode_list(const Json& j);

Json encode(const Envelope& e);
Envelope decode_envelope(const Json& j);

// One envelope per line for logs.
std::string to_line(const Envelope& e);
Envelope parse_line(std::string_view line, std::size_t line_number);

// Observable contents: [{p, sigma}] in position order.
Json snapshot(const ListState& state);

}  // namespace foreach_crdt::codec

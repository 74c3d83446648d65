#include "foreach_crdt/codec.hpp"

#include <algorithm>

#include "foreach_crdt/errors.hpp"
#include "overloaded.hpp"

namespace foreach_crdt::codec {

using detail::overloaded;

namespace {

const Json& field(const Json& j, const char* key) {
  if (!j.is_object()) throw ParseError(std::string("expected object with field '") + key + "'");
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(std::string("missing field '") + key + "'");
  return *it;
}

std::string string_field(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_string()) throw ParseError(std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

std::uint64_t count_field(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_number_unsigned()) throw ParseError(std::string("field '") + key + "' must be a non-negative integer");
  return v.get<std::uint64_t>();
}

ReplicaId replica_id(const std::string& s) {
  if (!is_valid_replica_name(s)) throw ParseError("invalid replica id '" + s + "'");
  return ReplicaId(s);
}

Json encode_stamp(const LwwStamp& s) { return Json{{"lamport", s.lamport}, {"dot", encode(s.dot)}}; }

LwwStamp decode_stamp(const Json& j) { return {count_field(j, "lamport"), decode_dot(field(j, "dot"))}; }

Json encode_element(const Element& e) {
  return Json{{"p", encode(e.p)}, {"sigma", encode(e.sigma)}, {"t", encode(e.t)}};
}

Json encode_buffer_entry(const BufferEntry& b) {
  return Json{{"f", encode(b.f)}, {"u", encode(b.u)}, {"w", encode(b.w)}};
}

}  // namespace

std::string dump(const Json& j) { return j.dump(); }

Json encode(const VectorClock& vc) {
  Json out = Json::object();
  for (const auto& [id, n] : vc.entries()) out[id.str()] = n;
  return out;
}

VectorClock decode_clock(const Json& j) {
  if (!j.is_object()) throw ParseError("vector clock must be an object");
  VectorClock vc;
  for (const auto& [key, value] : j.items()) {
    if (!value.is_number_unsigned()) throw ParseError("vector clock entry '" + key + "' must be a count");
    vc.set(replica_id(key), value.get<std::uint64_t>());
  }
  return vc;
}

Json encode(const Dot& dot) { return Json{{"sender", dot.sender.str()}, {"clock", dot.clock}}; }

Dot decode_dot(const Json& j) { return Dot{replica_id(string_field(j, "sender")), count_field(j, "clock")}; }

Json encode(const Position& p) { return p.str(); }

Position decode_position(const Json& j) {
  if (!j.is_string()) throw ParseError("position must be a string");
  return Position::parse(j.get<std::string>());
}

Json encode(const PositionBound& b) { return b.str(); }

PositionBound decode_bound(const Json& j) {
  if (!j.is_string()) throw ParseError("position bound must be a string");
  return PositionBound::parse(j.get<std::string>());
}

Json encode(const Rational& r) { return r.str(); }

Rational decode_rational(const Json& j) {
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  if (!j.is_string()) throw ParseError("rational must be a string like \"3/2\"");
  const auto s = j.get<std::string>();
  const bool ok = !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
    return (c >= '0' && c <= '9') || c == '-' || c == '/';
  });
  if (!ok) throw ParseError("malformed rational '" + s + "'");
  try {
    return Rational(s);
  } catch (const std::exception&) {
    throw ParseError("malformed rational '" + s + "'");
  }
}

Json encode(const AttrValue& v) {
  return std::visit([](const auto& x) { return Json(x); }, v);
}

AttrValue decode_attr_value(const Json& j) {
  if (j.is_boolean()) return j.get<bool>();
  if (j.is_number_integer()) return j.get<std::int64_t>();
  if (j.is_string()) return j.get<std::string>();
  throw ParseError("attribute value must be a bool, integer or string");
}

Json encode(const Matrix2& m) {
  return Json::array({Json::array({encode(m.a), encode(m.b)}), Json::array({encode(m.c), encode(m.d)})});
}

Matrix2 decode_matrix(const Json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_array() || j[0].size() != 2 || !j[1].is_array() ||
      j[1].size() != 2) {
    throw ParseError("matrix must be [[a, b], [c, d]]");
  }
  return {decode_rational(j[0][0]), decode_rational(j[0][1]), decode_rational(j[1][0]), decode_rational(j[1][1])};
}

Json encode(const ElementState& state) {
  return std::visit(
      overloaded{[](const RichChar& r) {
                   Json attrs = Json::object();
                   for (const auto& [key, entry] : r.attrs.entries()) {
                     attrs[key] = Json{{"value", encode(entry.value)}, {"stamp", encode_stamp(entry.stamp)}};
                   }
                   return Json{{"kind", "rich_char"}, {"char", r.ch}, {"attrs", std::move(attrs)}};
                 },
                 [](const Ingredient& i) {
                   Json name{{"value", i.name.value},
                             {"stamp", i.name.stamp ? encode_stamp(*i.name.stamp) : Json(nullptr)}};
                   return Json{{"kind", "ingredient"},
                               {"name", std::move(name)},
                               {"amount", encode(i.amount.value)},
                               {"unit", i.amount.unit}};
                 },
                 [](const Amount& a) {
                   return Json{{"kind", "amount"}, {"value", encode(a.value)}, {"unit", a.unit}};
                 },
                 [](const Vec2& v) { return Json{{"kind", "vec2"}, {"x", encode(v.x)}, {"y", encode(v.y)}}; },
                 [](const NestedList& l) {
                   Json out = encode(l.state());
                   out["kind"] = "list";
                   return out;
                 }},
      state);
}

ElementState decode_state(const Json& j) {
  const std::string kind = string_field(j, "kind");
  if (kind == "rich_char") {
    RichChar r = rich_char(string_field(j, "char"));
    const Json& attrs = field(j, "attrs");
    if (!attrs.is_object()) throw ParseError("attrs must be an object");
    for (const auto& [key, entry] : attrs.items()) {
      r.attrs.mutable_entries().emplace(
          key, AttrEntry{decode_attr_value(field(entry, "value")), decode_stamp(field(entry, "stamp"))});
    }
    return r;
  }
  if (kind == "ingredient") {
    const Json& name = field(j, "name");
    Ingredient i;
    i.name.value = string_field(name, "value");
    if (const Json& s = field(name, "stamp"); !s.is_null()) i.name.stamp = decode_stamp(s);
    i.amount = Amount{decode_rational(field(j, "amount")), string_field(j, "unit")};
    return i;
  }
  if (kind == "amount") return Amount{decode_rational(field(j, "value")), string_field(j, "unit")};
  if (kind == "vec2") return Vec2{decode_rational(field(j, "x")), decode_rational(field(j, "y"))};
  if (kind == "list") return NestedList(decode_list(j));
  throw ParseError("unknown element kind '" + kind + "'");
}

Json encode(const PureOp& op) {
  return std::visit(
      overloaded{[](const AttrSet& s) { return Json{{"tag", "attr_set"}, {"key", s.key}, {"value", encode(s.value)}}; },
                 [](const AmountMult& m) { return Json{{"tag", "amount_mult"}, {"s", encode(m.factor)}}; },
                 [](const Vec2Mult& m) { return Json{{"tag", "vec2_mult"}, {"m", encode(m.m)}}; },
                 [](const NameSet& s) { return Json{{"tag", "name_set"}, {"value", s.value}}; },
                 [](const NestedForEach& n) { return Json{{"tag", "nested_foreach"}, {"f", encode(*n.fn)}}; }},
      op);
}

PureOp decode_pure_op(const Json& j) {
  const std::string tag = string_field(j, "tag");
  if (tag == "attr_set") return attr_set(string_field(j, "key"), decode_attr_value(field(j, "value")));
  if (tag == "amount_mult") {
    try {
      return amount_mult(decode_rational(field(j, "s")));
    } catch (const ContractViolation& e) {
      throw ParseError(e.what());
    }
  }
  if (tag == "vec2_mult") return vec2_mult(decode_matrix(field(j, "m")));
  if (tag == "name_set") return name_set(string_field(j, "value"));
  if (tag == "nested_foreach") return nested_foreach(decode_mutation(field(j, "f")));
  throw ParseError("unknown pure op tag '" + tag + "'");
}

Json encode(const ElementMessage& msg) {
  return std::visit(overloaded{[](const PureOp& op) { return encode(op); },
                               [](const ListInsert& ins) {
                                 return Json{{"tag", "list_insert"},
                                             {"p", encode(ins.p)},
                                             {"sigma0", encode(ins.initial)}};
                               }},
                    msg);
}

ElementMessage decode_message(const Json& j) {
  if (string_field(j, "tag") == "list_insert") {
    return ListInsert{decode_position(field(j, "p")), decode_state(field(j, "sigma0"))};
  }
  return decode_pure_op(j);
}

Json encode(const MutationFn& f) {
  Json predicate = std::visit(
      overloaded{[](const AllPositions&) { return Json{{"kind", "all"}}; },
                 [](const HalfOpenRange& r) {
                   return Json{{"kind", "half_open"}, {"start", encode(r.start)}, {"end", encode(r.end)}};
                 },
                 [](const ClosedRange& r) {
                   return Json{{"kind", "closed"}, {"start", encode(r.start)}, {"end", encode(r.end)}};
                 },
                 [](const IdSet& s) {
                   Json ids = Json::array();
                   for (const auto& p : s.ids) ids.push_back(encode(p));
                   return Json{{"kind", "id_set"}, {"ids", std::move(ids)}};
                 }},
      f.predicate);
  Json instruction =
      std::visit(overloaded{[](const ApplyOp& a) { return Json{{"kind", "apply"}, {"op", encode(a.op)}}; },
                            [](const Del&) { return Json{{"kind", "del"}}; },
                            [](const Null&) { return Json{{"kind", "null"}}; }},
                 f.instruction);
  return Json{{"predicate", std::move(predicate)},
              {"priorGate", std::string(to_string(f.gate))},
              {"instruction", std::move(instruction)}};
}

MutationFn decode_mutation(const Json& j) {
  MutationFn f;
  const Json& pred = field(j, "predicate");
  const std::string pk = string_field(pred, "kind");
  if (pk == "all") {
    f.predicate = AllPositions{};
  } else if (pk == "half_open") {
    f.predicate = HalfOpenRange{decode_position(field(pred, "start")), decode_bound(field(pred, "end"))};
  } else if (pk == "closed") {
    f.predicate = ClosedRange{decode_position(field(pred, "start")), decode_position(field(pred, "end"))};
  } else if (pk == "id_set") {
    const Json& ids = field(pred, "ids");
    if (!ids.is_array()) throw ParseError("id_set ids must be an array");
    IdSet s;
    for (const auto& p : ids) s.ids.insert(decode_position(p));
    f.predicate = std::move(s);
  } else {
    throw ParseError("unknown predicate kind '" + pk + "'");
  }

  const std::string gate = string_field(j, "priorGate");
  if (gate == "any") {
    f.gate = PriorGate::kAny;
  } else if (gate == "prior_only") {
    f.gate = PriorGate::kPriorOnly;
  } else if (gate == "concurrent_only") {
    f.gate = PriorGate::kConcurrentOnly;
  } else {
    throw ParseError("unknown priorGate '" + gate + "'");
  }

  const Json& instr = field(j, "instruction");
  const std::string ik = string_field(instr, "kind");
  if (ik == "apply") {
    f.instruction = ApplyOp{decode_pure_op(field(instr, "op"))};
  } else if (ik == "del") {
    f.instruction = Del{};
  } else if (ik == "null") {
    f.instruction = Null{};
  } else {
    throw ParseError("unknown instruction kind '" + ik + "'");
  }
  return f;
}

Json encode(const ListState& state) {
  Json elts = Json::array();
  for (const auto& e : state.elts) elts.push_back(encode_element(e));

  std::vector<const BufferEntry*> sorted;
  sorted.reserve(state.buffer.size());
  for (const auto& b : state.buffer) sorted.push_back(&b);
  std::sort(sorted.begin(), sorted.end(), [](const BufferEntry* a, const BufferEntry* b) { return a->u < b->u; });
  Json buffer = Json::array();
  for (const auto* b : sorted) buffer.push_back(encode_buffer_entry(*b));

  return Json{{"elts", std::move(elts)}, {"buffer", std::move(buffer)}};
}

ListState decode_list(const Json& j) {
  ListState state;
  const Json& elts = field(j, "elts");
  const Json& buffer = field(j, "buffer");
  if (!elts.is_array() || !buffer.is_array()) throw ParseError("list elts and buffer must be arrays");
  for (const auto& e : elts) {
    Position p = decode_position(field(e, "p"));
    if (!state.elts.empty() && !(state.elts.back().p < p)) throw ParseError("list elements out of order");
    state.elts.push_back(Element{std::move(p), decode_state(field(e, "sigma")), decode_dot(field(e, "t"))});
  }
  for (const auto& b : buffer) {
    state.buffer.push_back(
        BufferEntry{decode_mutation(field(b, "f")), decode_dot(field(b, "u")), decode_clock(field(b, "w"))});
  }
  return state;
}

Json encode(const Envelope& e) {
  Json payload = std::visit(
      overloaded{[](const InsertPayload& p) { return Json{{"p", encode(p.p)}, {"sigma0", encode(p.sigma0)}}; },
                 [](const DeletePayload& p) { return Json{{"p", encode(p.p)}}; },
                 [](const ApplyPayload& p) { return Json{{"p", encode(p.p)}, {"op", encode(p.op)}}; },
                 [](const ForEachPayload& p) { return Json{{"f", encode(p.f)}}; }},
      e.payload);
  return Json{{"dot", encode(e.dot)},
              {"vc", encode(e.vc)},
              {"kind", std::string(to_string(e.kind()))},
              {"payload", std::move(payload)}};
}

namespace {

Payload decode_payload(const std::string& kind, const Json& payload) {
  if (kind == "insert") {
    return InsertPayload{decode_position(field(payload, "p")), decode_state(field(payload, "sigma0"))};
  }
  if (kind == "delete") return DeletePayload{decode_position(field(payload, "p"))};
  if (kind == "apply") {
    return ApplyPayload{decode_position(field(payload, "p")), decode_message(field(payload, "op"))};
  }
  if (kind == "foreach") return ForEachPayload{decode_mutation(field(payload, "f"))};
  throw ParseError("unknown envelope kind '" + kind + "'");
}

}  // namespace

Envelope decode_envelope(const Json& j) {
  Envelope e{decode_dot(field(j, "dot")), decode_clock(field(j, "vc")),
             decode_payload(string_field(j, "kind"), field(j, "payload"))};
  if (e.dot.clock == 0) throw ParseError("envelope dot clock must be positive");
  if (e.vc.get(e.dot.sender) != e.dot.clock) throw ParseError("envelope vc disagrees with its dot");
  return e;
}

std::string to_line(const Envelope& e) { return dump(encode(e)); }

Envelope parse_line(std::string_view line, std::size_t line_number) {
  try {
    return decode_envelope(Json::parse(line));
  } catch (const ParseError& e) {
    throw ParseError(e.what(), line_number);
  } catch (const Json::exception& e) {
    throw ParseError(e.what(), line_number);
  } catch (const ContractViolation& e) {
    throw ParseError(e.what(), line_number);
  }
}

Json snapshot(const ListState& state) {
  Json out = Json::array();
  for (const auto& e : state.elts) out.push_back(Json{{"p", encode(e.p)}, {"sigma", encode(e.sigma)}});
  return out;
}

}  // namespace foreach_crdt::codec

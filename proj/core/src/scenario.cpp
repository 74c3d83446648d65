#include "foreach_crdt/scenario.hpp"

#include <fstream>

#include "foreach_crdt/errors.hpp"
#include "foreach_crdt/list_state.hpp"

namespace foreach_crdt {

using codec::Json;

MutationFn rich_text_format(const Position& start, const PositionBound& end, RangeMode mode, std::string key,
                            AttrValue value) {
  MutationFn f;
  f.gate = PriorGate::kAny;
  f.instruction = ApplyOp{attr_set(std::move(key), std::move(value))};
  if (mode == RangeMode::kHalfOpen) {
    if (!(PositionBound(start) < end)) throw ContractViolation("format range is empty");
    f.predicate = HalfOpenRange{start, end};
  } else {
    const Position* last = end.position();
    if (!last) throw ContractViolation("a closed range needs a finite end");
    if (*last < start) throw ContractViolation("format range is empty");
    f.predicate = ClosedRange{start, *last};
  }
  return f;
}

MutationFn rich_text_bold(const Position& start, const PositionBound& end, RangeMode mode) {
  return rich_text_format(start, end, mode, "bold", true);
}

MutationFn rich_text_delete_range(const Position& start, const PositionBound& end) {
  if (!(PositionBound(start) < end)) throw ContractViolation("delete range is empty");
  return MutationFn{HalfOpenRange{start, end}, PriorGate::kPriorOnly, Del{}};
}

std::pair<Position, PositionBound> index_range(const Replica& r, std::size_t first, std::size_t last,
                                               RangeMode mode) {
  if (first >= last || last > r.size()) {
    throw ContractViolation("index range [" + std::to_string(first) + ", " + std::to_string(last) +
                            ") does not fit a list of length " + std::to_string(r.size()));
  }
  const Position& start = r.at(first).p;
  if (mode == RangeMode::kClosed) return {start, r.at(last - 1).p};
  if (last == r.size()) return {start, PosInfinity{}};
  return {start, r.at(last).p};
}

MutationFn scale_recipe(const Rational& s) {
  if (s <= 0) throw ContractViolation("scale factor must be positive");
  return MutationFn{AllPositions{}, PriorGate::kAny, ApplyOp{amount_mult(s)}};
}

MutationFn rotate_group(std::set<Position> objects, const Matrix2& m) {
  if (objects.empty()) throw ContractViolation("rotate_group needs at least one object");
  const MutationFn inner{AllPositions{}, PriorGate::kAny, ApplyOp{vec2_mult(m)}};
  return MutationFn{IdSet{std::move(objects)}, PriorGate::kAny, ApplyOp{nested_foreach(inner)}};
}

Envelope translate_object(Replica& r, const Position& object, const Vec2& v) {
  const Element* elt = r.state().find(object);
  if (!elt) throw ContractViolation("no object at position " + object.str());
  const auto* list = std::get_if<NestedList>(&elt->sigma);
  if (!list) throw SchemaError("element at " + object.str() + " is not a slide object");
  return r.apply_at(object, InsertIntoNested{list->state().size(), v});
}

Vec2 object_position(const NestedList& object) {
  Vec2 sum{0, 0};
  for (const auto& e : object.state().elts) {
    const auto* v = std::get_if<Vec2>(&e.sigma);
    if (!v) throw SchemaError("slide object holds a " + std::string(kind_name(e.sigma)));
    sum = sum + *v;
  }
  return sum;
}

NestedList slide_object(const std::vector<Vec2>& vectors, const ReplicaId& author) {
  return nested_list(std::vector<ElementState>(vectors.begin(), vectors.end()), author);
}

namespace {

const Json& field(const Json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw SchemaError(std::string("missing field '") + key + "'");
  return *it;
}

std::string string_field(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_string()) throw SchemaError(std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

std::size_t index_field(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_number_integer() || v.get<std::int64_t>() < 0) {
    throw SchemaError(std::string("field '") + key + "' must be a non-negative integer");
  }
  return v.get<std::size_t>();
}

Rational rational_field(const Json& j, const char* key) {
  try {
    return codec::decode_rational(field(j, key));
  } catch (const ParseError& err) {
    throw SchemaError(std::string("field '") + key + "': " + err.what());
  }
}

Vec2 vec_value(const Json& j) {
  if (!j.is_array() || j.size() != 2) throw SchemaError("a vector is written [x, y]");
  return {codec::decode_rational(j[0]), codec::decode_rational(j[1])};
}

RangeMode mode_field(const Json& j) {
  const auto mode = j.contains("mode") ? string_field(j, "mode") : std::string("half_open");
  if (mode == "half_open") return RangeMode::kHalfOpen;
  if (mode == "closed") return RangeMode::kClosed;
  throw SchemaError("unknown range mode '" + mode + "'");
}

std::vector<std::string> code_points(const std::string& text) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < text.size();) {
    const auto c = static_cast<unsigned char>(text[i]);
    const std::size_t len = c < 0x80 ? 1 : (c >> 5) == 0x6 ? 2 : (c >> 4) == 0xe ? 3 : (c >> 3) == 0x1e ? 4 : 0;
    if (len == 0 || i + len > text.size()) throw SchemaError("text is not valid UTF-8");
    out.push_back(text.substr(i, len));
    i += len;
  }
  return out;
}

std::size_t per_element_count(const Replica& r, const MutationFn& f) {
  std::size_t n = 0;
  for (const auto& e : r.state().elts) {
    if (!std::holds_alternative<Null>(eval_mutation(f, e.p, true))) ++n;
  }
  return n;
}

const std::set<std::string>& known_ops() {
  static const std::set<std::string> ops = {"insert_text",  "format",           "delete_range", "delete",
                                            "insert_ingredient", "scale",       "rename",       "insert_object",
                                            "translate",    "rotate_group",     "sync",         "deliver"};
  return ops;
}

}  // namespace

Scenario parse_scenario(const Json& j) {
  if (!j.is_object()) throw SchemaError("a scenario is a JSON object");
  Scenario s;
  s.name = string_field(j, "name");
  s.kind = string_field(j, "kind");
  if (s.kind != "rich_text" && s.kind != "recipe" && s.kind != "slideshow") {
    throw SchemaError("unknown scenario kind '" + s.kind + "'");
  }
  if (j.contains("description")) s.description = string_field(j, "description");
  const Json& replicas = field(j, "replicas");
  if (!replicas.is_array() || replicas.empty()) throw SchemaError("'replicas' must be a non-empty array");
  for (const auto& r : replicas) {
    if (!r.is_string() || !is_valid_replica_name(r.get<std::string>())) throw SchemaError("bad replica name");
    s.replicas.emplace_back(r.get<std::string>());
  }
  if (j.contains("schedules")) s.random_schedules = index_field(j, "schedules");
  s.steps = field(j, "steps");
  if (!s.steps.is_array()) throw SchemaError("'steps' must be an array");
  for (const auto& step : s.steps) {
    const auto op = string_field(step, "op");
    if (!known_ops().contains(op)) throw SchemaError("unknown step '" + op + "'");
    if (op != "sync" && op != "deliver") {
      const ReplicaId at(string_field(step, "at"));
      if (std::find(s.replicas.begin(), s.replicas.end(), at) == s.replicas.end()) {
        throw SchemaError("step names unknown replica '" + at.str() + "'");
      }
    }
  }
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open scenario " + path.string());
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::exception& err) {
    throw SchemaError(path.string() + ": " + err.what());
  }
  return parse_scenario(j);
}

codec::Json StepRecord::to_json() const {
  Json j{{"step", index}, {"op", op}, {"envelopes", envelopes}};
  if (!at.empty()) j["at"] = at;
  if (per_element_envelopes) j["per_element_envelopes"] = *per_element_envelopes;
  return j;
}

ScenarioRun execute(const Scenario& scenario, std::uint64_t seed) {
  Simulator sim(scenario.replicas, seed);
  ScenarioRun run;

  for (std::size_t i = 0; i < scenario.steps.size(); ++i) {
    const Json& step = scenario.steps[i];
    StepRecord rec;
    rec.index = i;
    rec.op = string_field(step, "op");
    const std::size_t before = sim.log().size();

    if (rec.op == "sync") {
      sim.sync();
      run.steps.push_back(rec);
      continue;
    }
    if (rec.op == "deliver") {
      sim.deliver_all_to(sim.index_of(ReplicaId(string_field(step, "to"))));
      run.steps.push_back(rec);
      continue;
    }

    rec.at = string_field(step, "at");
    const std::size_t at = sim.index_of(ReplicaId(rec.at));
    Replica& r = sim.replica(at);
    const bool prior_loop = step.contains("via") && string_field(step, "via") == "for_each_prior";
    if (step.contains("via")) {
      const auto via = string_field(step, "via");
      if (via != "for_each" && via != "for_each_prior") throw SchemaError("unknown 'via' value '" + via + "'");
    }
    const auto run_foreach = [&](const MutationFn& f) {
      rec.per_element_envelopes = per_element_count(r, f);
      if (prior_loop) {
        sim.perform_many(at, [&](Replica& x) { return x.for_each_prior(f); });
      } else {
        sim.perform(at, [&](Replica& x) { return x.for_each(f); });
      }
    };

    if (rec.op == "insert_text") {
      std::size_t index = index_field(step, "index");
      for (const auto& ch : code_points(string_field(step, "text"))) {
        sim.perform(at, [&](Replica& x) { return x.insert(index, rich_char(ch)); });
        ++index;
      }
    } else if (rec.op == "format") {
      const RangeMode mode = mode_field(step);
      auto [start, end] = index_range(r, index_field(step, "start"), index_field(step, "end"), mode);
      const std::string key = step.contains("key") ? string_field(step, "key") : std::string("bold");
      const AttrValue value = step.contains("value") ? codec::decode_attr_value(step["value"]) : AttrValue(true);
      run_foreach(rich_text_format(start, end, mode, key, value));
    } else if (rec.op == "delete_range") {
      auto [start, end] = index_range(r, index_field(step, "start"), index_field(step, "end"), RangeMode::kHalfOpen);
      run_foreach(rich_text_delete_range(start, end));
    } else if (rec.op == "delete") {
      const auto index = index_field(step, "index");
      sim.perform(at, [&](Replica& x) { return x.erase(index); });
    } else if (rec.op == "insert_ingredient") {
      const auto index = index_field(step, "index");
      auto sigma = ingredient(string_field(step, "name"), rational_field(step, "amount"), string_field(step, "unit"));
      sim.perform(at, [&](Replica& x) { return x.insert(index, sigma); });
    } else if (rec.op == "scale") {
      run_foreach(scale_recipe(rational_field(step, "factor")));
    } else if (rec.op == "rename") {
      const auto index = index_field(step, "index");
      const auto name = string_field(step, "name");
      sim.perform(at, [&](Replica& x) { return x.apply(index, name_set(name)); });
    } else if (rec.op == "insert_object") {
      const auto index = index_field(step, "index");
      std::vector<Vec2> vectors;
      for (const auto& v : field(step, "vectors")) vectors.push_back(vec_value(v));
      sim.perform(at, [&](Replica& x) { return x.insert(index, slide_object(vectors, x.id())); });
    } else if (rec.op == "translate") {
      const Position p = r.at(index_field(step, "object")).p;
      const Vec2 v = vec_value(field(step, "by"));
      sim.perform(at, [&](Replica& x) { return translate_object(x, p, v); });
    } else if (rec.op == "rotate_group") {
      std::set<Position> objects;
      for (const auto& o : field(step, "objects")) objects.insert(r.at(o.get<std::size_t>()).p);
      run_foreach(rotate_group(std::move(objects), Matrix2::clockwise(rational_field(step, "cos"), rational_field(step, "sin"))));
    }
    rec.envelopes = sim.log().size() - before;
    run.steps.push_back(rec);
  }

  sim.sync();
  sim.check_exactly_once();
  run.log = sim.log();
  run.counts = sim.counts();
  for (std::size_t i = 0; i < sim.replica_count(); ++i) {
    run.live_orders.push_back(sim.delivery_order(i));
    run.live_snapshots.push_back(codec::dump(codec::snapshot(sim.replica(i).state())));
  }
  return run;
}

namespace {

Json render_rich_text(const Json& snapshot) {
  std::string text;
  Json runs = Json::array();
  for (const auto& item : snapshot) {
    const auto sigma = codec::decode_state(item.at("sigma"));
    const auto* c = std::get_if<RichChar>(&sigma);
    if (!c) throw SchemaError("rich text holds a " + std::string(kind_name(sigma)));
    Json attrs = Json::object();
    for (const auto& [key, entry] : c->attrs.entries()) attrs[key] = codec::encode(entry.value);
    text += c->ch;
    if (!runs.empty() && runs.back()["attrs"] == attrs) {
      runs.back()["text"] = runs.back()["text"].get<std::string>() + c->ch;
    } else {
      runs.push_back(Json{{"text", c->ch}, {"attrs", std::move(attrs)}});
    }
  }
  return Json{{"text", text}, {"runs", runs}};
}

Json render_recipe(const Json& snapshot) {
  Json out = Json::array();
  for (const auto& item : snapshot) {
    const auto sigma = codec::decode_state(item.at("sigma"));
    const auto* i = std::get_if<Ingredient>(&sigma);
    if (!i) throw SchemaError("recipe holds a " + std::string(kind_name(sigma)));
    out.push_back(Json{{"name", i->name.value}, {"amount", codec::encode(i->amount.value)}, {"unit", i->amount.unit}});
  }
  return out;
}

Json render_slideshow(const Json& snapshot) {
  Json out = Json::array();
  std::size_t index = 0;
  for (const auto& item : snapshot) {
    const auto sigma = codec::decode_state(item.at("sigma"));
    const auto* obj = std::get_if<NestedList>(&sigma);
    if (!obj) throw SchemaError("slideshow holds a " + std::string(kind_name(sigma)));
    const Vec2 pos = object_position(*obj);
    out.push_back(Json{{"object", index++},
                       {"position", Json::array({codec::encode(pos.x), codec::encode(pos.y)})},
                       {"vectors", obj->state().size()}});
  }
  return out;
}

}  // namespace

Json render(const std::string& kind, const Json& snapshot) {
  if (kind == "rich_text") return render_rich_text(snapshot);
  if (kind == "recipe") return render_recipe(snapshot);
  if (kind == "slideshow") return render_slideshow(snapshot);
  throw SchemaError("unknown scenario kind '" + kind + "'");
}

}  // namespace foreach_crdt

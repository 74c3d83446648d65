#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "foreach_crdt/errors.hpp"
#include "foreach_crdt/harness.hpp"
#include "foreach_crdt/oracle.hpp"
#include "foreach_crdt/scenario.hpp"
#include "foreach_crdt/simulator.hpp"

using namespace foreach_crdt;
using codec::Json;

namespace {

const ReplicaId A("A");
const ReplicaId B("B");
const std::filesystem::path kScenarioDir = FOREACH_CRDT_SCENARIO_DIR;

struct Result {
  ScenarioRun run;
  Json rendering;
};

Result run(const Json& script, std::uint64_t seed = 0) {
  const auto s = parse_scenario(script);
  Result r{execute(s, seed), {}};
  for (const auto& snap : r.run.live_snapshots) EXPECT_EQ(snap, r.run.live_snapshots.front());
  const auto h = oracle::History(r.run.log);
  EXPECT_EQ(codec::dump(oracle::expected_snapshot(h)), r.run.live_snapshots.front());
  r.rendering = render(s.kind, Json::parse(r.run.live_snapshots.front()));
  return r;
}

Json text_script(const Json& steps) {
  return {{"name", "t"}, {"kind", "rich_text"}, {"replicas", {"A", "B"}}, {"steps", steps}};
}

Json base_text(const std::string& text) { return {{"op", "insert_text"}, {"at", "A"}, {"index", 0}, {"text", text}}; }

Json format_step(int start, int end, const std::string& mode, const std::string& via) {
  return {{"op", "format"}, {"at", "A"}, {"start", start}, {"end", end}, {"mode", mode},
          {"key", "bold"},  {"value", true}, {"via", via}};
}

Json sync_step() { return {{"op", "sync"}}; }

Json b_types(int index, const std::string& text) {
  return {{"op", "insert_text"}, {"at", "B"}, {"index", index}, {"text", text}};
}

std::vector<std::string> bold_runs(const Json& rendering) {
  std::vector<std::string> out;
  for (const auto& r : rendering["runs"]) {
    if (r["attrs"].contains("bold") && r["attrs"]["bold"] == true) out.push_back(r["text"]);
  }
  return out;
}

Json recipe_script(const Json& steps) {
  return {{"name", "r"}, {"kind", "recipe"}, {"replicas", {"A", "B", "C"}}, {"steps", steps}};
}

Json ingredient_step(const std::string& at, int index, const std::string& name, const Json& amount) {
  return {{"op", "insert_ingredient"}, {"at", at}, {"index", index}, {"name", name}, {"amount", amount}, {"unit", "cup"}};
}

Json scale_step(const std::string& at, const Json& factor) {
  return {{"op", "scale"}, {"at", at}, {"factor", factor}, {"via", "for_each"}};
}

std::map<std::string, std::string> amounts(const Json& rendering) {
  std::map<std::string, std::string> out;
  for (const auto& i : rendering) out[i["name"]] = i["amount"];
  return out;
}

}  // namespace

TEST(ScenarioTest, EveryScriptPassesAndMatchesItsGolden) {
  std::size_t seen = 0;
  for (const auto& entry : std::filesystem::directory_iterator(kScenarioDir)) {
    const auto name = entry.path().filename().string();
    if (name.ends_with(".golden.json") || !name.ends_with(".json")) continue;
    ++seen;
    const auto stem = entry.path().stem().string();
    for (std::uint64_t seed : {0, 7}) {
      const auto out = harness::run_scenario({stem, kScenarioDir, seed, std::nullopt, false});
      EXPECT_EQ(out.exit_code, harness::kExitPass) << stem << " seed " << seed << "\n" << out.report.dump(2);
    }
  }
  EXPECT_GE(seen, 9u);
}

TEST(ScenarioTest, UnknownScriptIsUsageError) {
  const auto out = harness::run_scenario({"no_such_script", kScenarioDir, 0, std::nullopt, false});
  EXPECT_EQ(out.exit_code, harness::kExitUsage);
}

TEST(ScenarioTest, ForEachBoldsConcurrentInsertionButPriorDoesNot) {
  const auto live = run(text_script({base_text("jumped over lazy dog"), sync_step(), format_step(7, 16, "half_open", "for_each"),
                                     b_types(11, " the")}));
  EXPECT_EQ(live.rendering["text"], "jumped over the lazy dog");
  EXPECT_EQ(bold_runs(live.rendering), std::vector<std::string>{"over the lazy"});

  const auto prior = run(text_script({base_text("jumped over lazy dog"), sync_step(),
                                      format_step(7, 16, "half_open", "for_each_prior"), b_types(11, " the")}));
  EXPECT_EQ(prior.rendering["text"], "jumped over the lazy dog");
  EXPECT_EQ(bold_runs(prior.rendering), (std::vector<std::string>{"over", " lazy"}));
}

TEST(ScenarioTest, BoldIsIdempotentUnderConcurrentRepeat) {
  auto again = format_step(7, 16, "half_open", "for_each");
  again["at"] = "B";
  const auto r = run(text_script({base_text("jumped over lazy dog"), sync_step(), format_step(7, 16, "half_open", "for_each"),
                                  again}));
  EXPECT_EQ(bold_runs(r.rendering), std::vector<std::string>{"over lazy"});
}

TEST(ScenarioTest, DeleteRangeKeepsConcurrentInsertion) {
  for (const std::string via : {"for_each", "for_each_prior"}) {
    const auto r = run(text_script({base_text("jumped over lazy dog"), sync_step(),
                                    {{"op", "delete_range"}, {"at", "A"}, {"start", 7}, {"end", 16}, {"via", via}},
                                    b_types(11, " the")}));
    EXPECT_EQ(r.rendering["text"], "jumped  the dog") << via;
    const auto& step = r.run.steps.at(2);
    if (via == "for_each") {
      EXPECT_EQ(step.envelopes, 1u);
    } else {
      EXPECT_EQ(step.envelopes, 9u);
    }
    EXPECT_EQ(step.per_element_envelopes, std::optional<std::size_t>(9));
  }
}

TEST(ScenarioTest, EmptyDeleteRangeIsRejected) {
  Replica a(A);
  a.insert(0, rich_char("x"));
  EXPECT_THROW(rich_text_delete_range(a.at(0).p, a.at(0).p), ContractViolation);
  EXPECT_THROW(index_range(a, 1, 1, RangeMode::kHalfOpen), ContractViolation);
}

TEST(ScenarioTest, HalfOpenLinkGrowsButClosedLinkDoesNot) {
  for (const std::string mode : {"half_open", "closed"}) {
    auto link = format_step(4, 8, mode, "for_each");
    const auto r = run(text_script({base_text("see docs now"), sync_step(), link, b_types(8, "!")}));
    EXPECT_EQ(r.rendering["text"], "see docs! now");
    const auto runs = bold_runs(r.rendering);
    EXPECT_EQ(runs, std::vector<std::string>{mode == "half_open" ? "docs!" : "docs"}) << mode;
  }
}

TEST(ScenarioTest, ScalingCoversConcurrentIngredient) {
  const auto r = run(recipe_script({ingredient_step("A", 0, "flour", 2), ingredient_step("A", 1, "sugar", "1/2"), sync_step(),
                                    scale_step("A", 2), ingredient_step("B", 2, "eggs", 3)}));
  EXPECT_EQ(amounts(r.rendering), (std::map<std::string, std::string>{{"eggs", "6"}, {"flour", "4"}, {"sugar", "1"}}));
}

TEST(ScenarioTest, ScalingByOneIsIdentity) {
  const auto r = run(recipe_script({ingredient_step("A", 0, "flour", "2/3"), sync_step(), scale_step("A", 1)}));
  EXPECT_EQ(amounts(r.rendering), (std::map<std::string, std::string>{{"flour", "2/3"}}));
}

TEST(ScenarioTest, ConcurrentScalesMultiply) {
  const auto r = run(recipe_script({ingredient_step("A", 0, "flour", 2), ingredient_step("A", 1, "sugar", "1/2"), sync_step(),
                                    scale_step("A", 2), scale_step("B", 3), ingredient_step("C", 0, "salt", "1/4")}));
  EXPECT_EQ(amounts(r.rendering),
            (std::map<std::string, std::string>{{"flour", "12"}, {"salt", "3/2"}, {"sugar", "3"}}));
  EXPECT_THROW(scale_recipe(0), ContractViolation);
}

TEST(ScenarioTest, RotationAppliesToConcurrentTranslation) {
  const Matrix2 m = Matrix2::clockwise(Rational(56, 65), Rational(33, 65));
  const std::vector<Vec2> starts = {{3, 1}, {1, 4}, {5, 5}};
  const Vec2 t{2, 1};
  for (int order = 0; order < 2; ++order) {
    Replica a(A);
    Replica b(B);
    for (std::size_t i = 0; i < starts.size(); ++i) b.deliver(a.insert(i, slide_object({starts[i]}, A)));
    const auto rot = a.for_each(rotate_group({a.at(0).p, a.at(1).p}, m));
    const auto tr = translate_object(b, b.at(0).p, t);
    if (order == 0) {
      a.deliver(tr);
      b.deliver(rot);
    } else {
      b.deliver(rot);
      a.deliver(tr);
    }
    for (const Replica* r : {&a, &b}) {
      const auto pos = [&](std::size_t i) { return object_position(std::get<NestedList>(r->at(i).sigma)); };
      // Rotating the translated point by hand.
      const Rational x = starts[0].x + t.x;
      const Rational y = starts[0].y + t.y;
      EXPECT_EQ(pos(0), (Vec2{Rational(56, 65) * x + Rational(33, 65) * y, Rational(-33, 65) * x + Rational(56, 65) * y}));
      EXPECT_EQ(pos(0), (Vec2{Rational(346, 65), Rational(-53, 65)}));
      EXPECT_EQ(pos(1), (Vec2{Rational(188, 65), Rational(191, 65)}));
      EXPECT_EQ(pos(2), starts[2]);
    }
  }
}

TEST(ScenarioTest, IdentityRotationChangesNothing) {
  Replica a(A);
  a.insert(0, slide_object({{3, 1}, {Rational(1, 2), 0}}, A));
  const auto view = [&] { return render("slideshow", codec::snapshot(a.state())).dump(); };
  const auto before = view();
  a.for_each(rotate_group({a.at(0).p}, Matrix2::identity()));
  EXPECT_EQ(view(), before);
  EXPECT_THROW(rotate_group({}, Matrix2::identity()), ContractViolation);
}

TEST(ScenarioTest, MalformedScriptsAreSchemaErrors) {
  EXPECT_THROW(parse_scenario(Json::object()), SchemaError);
  EXPECT_THROW(parse_scenario(text_script({{{"op", "levitate"}}})), SchemaError);
  auto bad_kind = text_script(Json::array());
  bad_kind["kind"] = "spreadsheet";
  EXPECT_THROW(parse_scenario(bad_kind), SchemaError);
  EXPECT_THROW(load_scenario(kScenarioDir / "missing.json"), SchemaError);
}

#include <gtest/gtest.h>

#include "foreach_crdt/errors.hpp"
#include "foreach_crdt/fuzz.hpp"
#include "foreach_crdt/oracle.hpp"
#include "foreach_crdt/scenario.hpp"
#include "foreach_crdt/simulator.hpp"

using namespace foreach_crdt;

namespace {

const ReplicaId A("A");
const ReplicaId B("B");

std::vector<std::vector<Dot>> random_schedules(const std::vector<Envelope>& log, std::size_t n, std::uint64_t seed) {
  std::vector<std::vector<Dot>> out;
  for (std::size_t k = 0; k < n; ++k) out.push_back(random_causal_schedule(log, derive_seed(seed, k)));
  return out;
}

}  // namespace

TEST(OracleTest, UntouchedElementKeepsInitialState) {
  Replica a(A);
  const auto e = a.insert(0, ingredient("milk", 1, "cup"));
  const oracle::History h({e});
  const auto s = oracle::expected_element_state(h, 0);
  ASSERT_TRUE(std::holds_alternative<ElementState>(s));
  EXPECT_EQ(std::get<ElementState>(s), ElementState(ingredient("milk", 1, "cup")));
}

TEST(OracleTest, BoldRangeCoversConcurrentInsertion) {
  Simulator sim({A, B}, 1);
  const std::string text = "jumped over lazy dog";
  for (std::size_t i = 0; i < text.size(); ++i) {
    sim.perform(0, [&](Replica& r) { return r.insert(i, rich_char(text.substr(i, 1))); });
  }
  sim.sync();
  sim.perform(0, [](Replica& r) { return r.for_each(rich_text_bold(r.at(7).p, r.at(16).p, RangeMode::kHalfOpen)); });
  const std::string the = " the";
  for (std::size_t i = 0; i < the.size(); ++i) {
    sim.perform(1, [&](Replica& r) { return r.insert(11 + i, rich_char(the.substr(i, 1))); });
  }
  const oracle::History h(sim.log());
  for (std::size_t i = h.size() - the.size(); i < h.size(); ++i) {
    const auto s = oracle::expected_element_state(h, i);
    const auto& c = std::get<RichChar>(std::get<ElementState>(s));
    ASSERT_NE(c.attrs.get("bold"), nullptr);
    EXPECT_EQ(*c.attrs.get("bold"), AttrValue(true));
  }
}

TEST(OracleTest, EightMessageHistoriesMatchEveryReplay) {
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    FuzzConfig cfg;
    cfg.ops = 8;
    cfg.replicas = 3;
    cfg.seed = seed;
    cfg.schedules = 0;
    cfg.foreach_share = 0.4;
    const auto run = run_fuzz(cfg);
    const oracle::History h(run.log);
    const auto expected = codec::dump(oracle::expected_snapshot(h));
    for (std::uint64_t ext = 1; ext <= 5; ++ext) {
      ASSERT_EQ(codec::dump(oracle::expected_snapshot(h, ext)), expected) << "seed " << seed;
    }
    const auto report = oracle::check_convergence(h, random_schedules(run.log, 20, seed));
    ASSERT_TRUE(report.ok()) << "seed " << seed << ": " << report.to_json().dump();
    EXPECT_EQ(report.expected, expected);
  }
}

TEST(OracleTest, SingleReplicaIsTriviallyConvergent) {
  Replica a(A);
  std::vector<Envelope> log = {a.insert(0, rich_char("a")), a.apply(0, attr_set("bold", true)),
                               a.for_each(MutationFn{})};
  const oracle::History h(log);
  std::vector<Dot> order;
  for (const auto& e : log) order.push_back(e.dot);
  EXPECT_TRUE(oracle::check_convergence(h, {order}).ok());
}

TEST(OracleTest, ConcurrentInsertAndForEachBothOrders) {
  Simulator sim({A, B}, 3);
  sim.perform(0, [](Replica& r) { return r.insert(0, rich_char("a")); });
  sim.sync();
  const auto fe = sim.perform(0, [](Replica& r) {
    return r.for_each(MutationFn{AllPositions{}, PriorGate::kAny, ApplyOp{attr_set("italic", true)}});
  });
  const auto ins = sim.perform(1, [](Replica& r) { return r.insert(1, rich_char("b")); });
  const oracle::History h(sim.log());
  const Dot first = sim.log()[0].dot;
  const auto report = oracle::check_convergence(h, {{first, fe.dot, ins.dot}, {first, ins.dot, fe.dot}});
  EXPECT_TRUE(report.ok()) << report.to_json().dump();
  EXPECT_EQ(report.snapshots.size(), 2u);
}

TEST(OracleTest, FuzzHistoriesConverge) {
  FuzzConfig cfg;
  cfg.ops = 60;
  cfg.replicas = 4;
  cfg.schedules = 10;
  cfg.seed = 99;
  const auto run = run_fuzz(cfg);
  EXPECT_TRUE(run.ok());
  EXPECT_TRUE(run.convergence.ok());
  EXPECT_EQ(run.convergence.snapshots.size(), 14u);
}

TEST(OracleTest, MalformedHistoriesAreRejected) {
  Replica a(A);
  const auto e1 = a.insert(0, rich_char("a"));
  const auto e2 = a.insert(1, rich_char("b"));
  EXPECT_THROW(oracle::History({e2}), ValidationError);
  EXPECT_THROW(oracle::History({e1, e1}), ValidationError);
  Envelope bad = e2;
  bad.vc.set(A, 5);
  EXPECT_THROW(oracle::History({e1, bad}), ValidationError);
  Envelope phantom = e2;
  phantom.vc.set(B, 1);
  EXPECT_THROW(oracle::History({e1, phantom}), ValidationError);
}

TEST(OracleTest, ScheduleViolationNamesTheEnvelope) {
  Replica a(A);
  const auto e1 = a.insert(0, rich_char("a"));
  const auto e2 = a.apply(0, attr_set("bold", true));
  const oracle::History h({e1, e2});
  try {
    oracle::check_convergence(h, {{e2.dot, e1.dot}});
    FAIL();
  } catch (const CausalityError& err) {
    EXPECT_NE(std::string(err.what()).find("(A,2)"), std::string::npos) << err.what();
  }
  EXPECT_THROW(oracle::validate_schedule(h, {e1.dot, e1.dot}), CausalityError);
  EXPECT_THROW(oracle::validate_complete_schedule(h, {e1.dot}), CausalityError);
}

TEST(OracleTest, DeletionLaw) {
  Simulator sim({A, B}, 5);
  sim.perform(0, [](Replica& r) { return r.insert(0, rich_char("a")); });
  sim.perform(0, [](Replica& r) { return r.insert(1, rich_char("b")); });
  sim.perform(0, [](Replica& r) { return r.insert(2, rich_char("c")); });
  sim.sync();
  sim.perform(0, [](Replica& r) { return r.erase(0); });
  sim.perform(1, [](Replica& r) {
    return r.for_each(MutationFn{IdSet{{r.at(1).p}}, PriorGate::kAny, Del{}});
  });
  sim.deliver_all();
  const oracle::History h(sim.log());
  const auto deleted = oracle::expected_deletions(h);
  EXPECT_EQ(deleted, (std::vector<Dot>{{A, 1}, {A, 2}}));
  EXPECT_EQ(sim.replica(0).size(), 1u);
}

TEST(OracleTest, DetectsSkippedBufferLoop) {
  FuzzConfig cfg;
  cfg.ops = 120;
  cfg.seed = 4;
  cfg.inject_skip_buffer = true;
  cfg.minimize = false;
  const auto run = run_fuzz(cfg);
  EXPECT_FALSE(run.ok());
  EXPECT_FALSE(run.convergence.oracle_equal);
}

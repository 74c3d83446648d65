#include "foreach_crdt/harness.hpp"

#include <fstream>
#include <sstream>

#include "foreach_crdt/errors.hpp"
#include "foreach_crdt/oracle.hpp"
#include "foreach_crdt/scenario.hpp"
#include "foreach_crdt/simulator.hpp"

namespace foreach_crdt::harness {

using codec::Json;

namespace {

Json encode_counts(const MessageCounts& c) {
  return Json{{"insert", c.insert}, {"delete", c.erase}, {"apply", c.apply}, {"foreach", c.foreach}};
}

Json encode_schedules(const std::vector<std::vector<Dot>>& schedules) {
  Json out = Json::array();
  for (const auto& s : schedules) {
    Json one = Json::array();
    for (const auto& d : s) one.push_back(codec::encode(d));
    out.push_back(std::move(one));
  }
  return out;
}

Outcome usage_error(std::string message) {
  Outcome out;
  out.exit_code = kExitUsage;
  out.report = Json{{"ok", false}, {"error", message}};
  out.lines.push_back("error: " + message);
  return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string position_table(const Json& rendering) {
  std::ostringstream os;
  os << "object  x          y          vectors\n";
  for (const auto& row : rendering) {
    std::string x = row["position"][0].is_string() ? row["position"][0].get<std::string>() : row["position"][0].dump();
    std::string y = row["position"][1].is_string() ? row["position"][1].get<std::string>() : row["position"][1].dump();
    x.resize(std::max<std::size_t>(x.size(), 10), ' ');
    y.resize(std::max<std::size_t>(y.size(), 10), ' ');
    os << row["object"].get<std::size_t>() << "       " << x << ' ' << y << ' ' << row["vectors"].get<std::size_t>()
       << '\n';
  }
  return os.str();
}

}  // namespace

std::filesystem::path meta_path(const std::filesystem::path& log) {
  auto p = log;
  p += ".meta.json";
  return p;
}

void write_log(const std::filesystem::path& path, const std::vector<Envelope>& envelopes,
               const std::vector<std::vector<Dot>>& schedules, const std::vector<std::string>& snapshots,
               const ReplicaOptions& options, Json extra) {
  std::string text;
  for (const auto& e : envelopes) text += codec::to_line(e) + '\n';
  write_text(path, text);
  Json meta = std::move(extra);
  meta["schedules"] = encode_schedules(schedules);
  meta["snapshots"] = snapshots;
  meta["options"] = Json{{"run_buffer_loop", options.effects.run_buffer_loop}};
  write_text(meta_path(path), codec::dump(meta) + '\n');
}

Log read_log(const std::filesystem::path& path) {
  Log log;
  std::istringstream in(read_text(path));
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    log.envelopes.push_back(codec::parse_line(line, number));
  }
  const auto mp = meta_path(path);
  if (std::filesystem::exists(mp)) {
    try {
      log.meta = Json::parse(read_text(mp));
    } catch (const Json::exception& err) {
      throw ParseError(mp.string() + ": " + err.what());
    }
  }
  return log;
}

Outcome run_scenario(const ScenarioOptions& options) {
  const auto script = options.dir / (options.name + ".json");
  if (options.name.empty() || !std::filesystem::exists(script)) {
    return usage_error("unknown scenario '" + options.name + "'");
  }
  Scenario sc;
  try {
    sc = load_scenario(script);
  } catch (const Error& err) {
    return usage_error(err.what());
  }

  Outcome out;
  std::vector<std::string> failures;
  ScenarioRun run;
  try {
    run = execute(sc, options.seed);
  } catch (const Error& err) {
    out.exit_code = kExitFail;
    out.report = Json{{"mode", "simulate"}, {"scenario", sc.name}, {"ok", false}, {"failures", {err.what()}}};
    out.lines.push_back("FAIL " + sc.name + ": " + err.what());
    return out;
  }

  for (std::size_t i = 1; i < run.live_snapshots.size(); ++i) {
    if (run.live_snapshots[i] != run.live_snapshots[0]) {
      failures.push_back("replica " + sc.replicas[i].str() + " differs from replica " + sc.replicas[0].str());
    }
  }
  std::vector<std::vector<Dot>> schedules = run.live_orders;
  for (std::size_t k = 0; k < sc.random_schedules; ++k) {
    schedules.push_back(random_causal_schedule(run.log, derive_seed(options.seed, 300 + k)));
  }
  oracle::ConvergenceReport conv;
  for (auto& f : check_history(run.log, schedules, {}, &conv)) failures.push_back(std::move(f));

  Json rendering;
  Json expected;
  if (!conv.expected.empty()) {
    expected = Json::parse(conv.expected);
    rendering = render(sc.kind, expected);
  }

  const auto golden_path = options.dir / (sc.name + ".golden.json");
  const Json golden{{"rendering", rendering}, {"snapshot", expected}};
  if (options.write_golden) {
    if (failures.empty()) write_text(golden_path, golden.dump(2) + '\n');
  } else if (!std::filesystem::exists(golden_path)) {
    failures.push_back("no golden file " + golden_path.filename().string());
  } else {
    Json stored;
    try {
      stored = Json::parse(read_text(golden_path));
    } catch (const Json::exception& err) {
      return usage_error(golden_path.string() + ": " + err.what());
    }
    if (codec::dump(stored.value("rendering", Json())) != codec::dump(rendering)) {
      failures.push_back("rendering differs from the golden file");
    }
    if (codec::dump(stored.value("snapshot", Json())) != codec::dump(expected)) {
      failures.push_back("snapshot differs from the golden file: " +
                         oracle::describe_difference(stored.value("snapshot", Json::array()), expected));
    }
  }

  if (options.log) {
    write_log(*options.log, run.log, schedules, conv.snapshots, {},
              Json{{"scenario", sc.name}, {"seed", options.seed}});
  }

  Json steps = Json::array();
  for (const auto& s : run.steps) steps.push_back(s.to_json());
  out.report = Json{{"mode", "simulate"},
                    {"scenario", sc.name},
                    {"seed", options.seed},
                    {"ok", failures.empty()},
                    {"envelopes", run.log.size()},
                    {"counts", encode_counts(run.counts)},
                    {"steps", steps},
                    {"rendering", rendering},
                    {"convergence", conv.to_json()},
                    {"failures", failures}};
  out.exit_code = failures.empty() ? kExitPass : kExitFail;
  out.lines.push_back((failures.empty() ? "PASS " : "FAIL ") + sc.name + " (" + std::to_string(schedules.size()) +
                      " schedules, " + std::to_string(run.log.size()) + " envelopes)");
  for (const auto& f : failures) out.lines.push_back("  " + f);
  if (sc.kind == "slideshow" && rendering.is_array()) out.lines.push_back(position_table(rendering));
  if (sc.kind == "rich_text" && rendering.is_object()) out.lines.push_back("text: " + rendering["text"].get<std::string>());
  return out;
}

Outcome fuzz(const FuzzOptions& options) {
  try {
    validate(options.config);
  } catch (const ValidationError& err) {
    return usage_error(err.what());
  }
  const FuzzResult result = run_fuzz(options.config);
  ReplicaOptions ropts;
  ropts.effects.run_buffer_loop = !options.config.inject_skip_buffer;

  Outcome out;
  out.report = result.to_json();
  const Json extra{{"fuzz_seed", options.config.seed}};
  if (options.log) {
    write_log(*options.log, result.log, result.schedules, result.convergence.snapshots, ropts, extra);
  }
  if (!result.ok()) {
    std::filesystem::path min_path;
    if (options.log) {
      min_path = *options.log;
      min_path += ".min.jsonl";
    } else {
      min_path = "fuzz-failure-" + std::to_string(options.config.seed) + ".jsonl";
    }
    const auto& envs = result.minimized.empty() ? result.log : result.minimized;
    std::vector<std::vector<Dot>> schedules;
    for (std::size_t k = 0; k < std::max<std::size_t>(options.config.schedules, 1); ++k) {
      schedules.push_back(random_causal_schedule(envs, derive_seed(options.config.seed, 200 + k)));
    }
    oracle::ConvergenceReport conv;
    check_history(envs, schedules, ropts, &conv);
    write_log(min_path, envs, schedules, conv.snapshots, ropts, extra);
    out.report["minimized_log"] = min_path.string();
  }
  out.exit_code = result.ok() ? kExitPass : kExitFail;
  out.lines.push_back(std::string(result.ok() ? "PASS" : "FAIL") + " fuzz seed=" + std::to_string(options.config.seed) +
                      " ops=" + std::to_string(options.config.ops) + " replicas=" +
                      std::to_string(options.config.replicas) + " envelopes=" + std::to_string(result.log.size()) +
                      " foreach=" + std::to_string(result.counts.foreach));
  for (const auto& f : result.failures) out.lines.push_back("  " + f);
  if (out.report.contains("minimized_log")) {
    out.lines.push_back("  minimized log: " + out.report["minimized_log"].get<std::string>() + " (" +
                        std::to_string(result.minimized.size()) + " envelopes)");
  }
  return out;
}

Outcome replay(const std::filesystem::path& path) {
  Log log;
  try {
    log = read_log(path);
  } catch (const ParseError& err) {
    return usage_error(err.what());
  }

  ReplicaOptions ropts;
  std::vector<std::vector<Dot>> schedules;
  std::vector<std::string> recorded;
  try {
    if (log.meta) {
      const Json& meta = *log.meta;
      if (meta.contains("options")) ropts.effects.run_buffer_loop = meta["options"].value("run_buffer_loop", true);
      for (const auto& s : meta.at("schedules")) {
        std::vector<Dot> one;
        for (const auto& d : s) one.push_back(codec::decode_dot(d));
        schedules.push_back(std::move(one));
      }
      recorded = meta.at("snapshots").get<std::vector<std::string>>();
    }
  } catch (const std::exception& err) {
    return usage_error(meta_path(path).string() + ": " + err.what());
  }
  if (schedules.empty()) {
    std::vector<Dot> file_order;
    for (const auto& e : log.envelopes) file_order.push_back(e.dot);
    schedules.push_back(std::move(file_order));
  }

  std::map<Dot, const Envelope*> by_dot;
  for (const auto& e : log.envelopes) by_dot.emplace(e.dot, &e);

  Outcome out;
  std::vector<std::string> failures;
  std::vector<std::string> snapshots;
  try {
    for (const auto& schedule : schedules) {
      Replica r(ReplicaId("replay"), ropts);
      for (const Dot& d : schedule) {
        auto it = by_dot.find(d);
        if (it == by_dot.end()) continue;  // the gate reports the gap at the next dependent envelope
        r.deliver(*it->second);
      }
      if (r.clock().total() != log.envelopes.size()) {
        throw CausalityError("schedule does not deliver every logged envelope");
      }
      snapshots.push_back(codec::dump(codec::snapshot(r.state())));
    }
  } catch (const CausalityError& err) {
    out.exit_code = kExitFail;
    out.report = Json{{"mode", "replay"}, {"ok", false}, {"failures", {std::string("causal gap: ") + err.what()}}};
    out.lines.push_back(std::string("FAIL replay: causal gap: ") + err.what());
    return out;
  }

  bool snapshots_match = true;
  if (!recorded.empty()) {
    snapshots_match = recorded == snapshots;
    if (!snapshots_match) failures.push_back("replayed snapshots differ from the recorded run");
  }
  oracle::ConvergenceReport conv;
  for (auto& f : check_history(log.envelopes, schedules, ropts, &conv)) failures.push_back(std::move(f));

  out.report = Json{{"mode", "replay"},
                    {"ok", failures.empty()},
                    {"envelopes", log.envelopes.size()},
                    {"schedules", schedules.size()},
                    {"snapshots_match", snapshots_match},
                    {"snapshots", snapshots},
                    {"convergence", conv.to_json()},
                    {"failures", failures}};
  out.exit_code = failures.empty() ? kExitPass : kExitFail;
  out.lines.push_back(std::string(failures.empty() ? "PASS" : "FAIL") + " replay " + path.filename().string() + " (" +
                      std::to_string(log.envelopes.size()) + " envelopes, " + std::to_string(schedules.size()) +
                      " schedules)");
  for (const auto& f : failures) out.lines.push_back("  " + f);
  return out;
}

}  // namespace foreach_crdt::harness

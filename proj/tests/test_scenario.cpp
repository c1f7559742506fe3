#include "doctest.h"

#include "holonet/report.hpp"
#include "holonet/runner.hpp"
#include "holonet/scenario.hpp"
#include "support.hpp"

using namespace holonet;
using namespace testing_support;

namespace {

std::filesystem::path scenario(const std::string& name) {
  return std::filesystem::path(HOLONET_SCENARIO_DIR) / name;
}

std::string parse_error(std::string_view text) {
  try {
    parse_scenario_text(text, "t.yaml");
  } catch (const ParseError& e) {
    return e.what();
  }
  return "";
}

const char* kMinimal = R"(schema_version: 1
name: mini
topology:
  builtin: annulus
sigma:
  winding: pi/3
modes_per_region: 1
tasks: [check, holonomy]
)";

}  // namespace

TEST_CASE("angles") {
  CHECK(parse_angle("pi") == doctest::Approx(kPi));
  CHECK(parse_angle("pi/3") == doctest::Approx(kPi / 3));
  CHECK(parse_angle("-2pi/3") == doctest::Approx(-2 * kPi / 3));
  CHECK(parse_angle("3*pi/4") == doctest::Approx(3 * kPi / 4));
  CHECK(parse_angle("-pi") == doctest::Approx(-kPi));
  CHECK(parse_angle("1.25") == 1.25);
  CHECK_THROWS_AS(parse_angle("pie"), ParseError);
  CHECK_THROWS_AS(parse_angle("pi/0"), ParseError);
  CHECK_THROWS_AS(parse_angle(""), ParseError);
}

TEST_CASE("minimal scenario parses with defaults") {
  const ScenarioConfig cfg = parse_scenario_text(kMinimal);
  CHECK(cfg.name == "mini");
  CHECK(cfg.group.kind == GroupKind::PhaseU1);
  CHECK(cfg.charge == 1);
  CHECK_FALSE(cfg.seed);
  CHECK(cfg.tasks == std::vector<Task>{Task::Check, Task::Holonomy});
  CHECK(cfg.sigma.size() == 1);
  CHECK(cfg.sigma.begin()->second.angle() == doctest::Approx(kPi / 3).epsilon(1e-12));
  // builtin loops are available by name
  CHECK(cfg.find_path("winding") != nullptr);
  CHECK(cfg.find_path("outer") != nullptr);
}

TEST_CASE("parse errors carry the source line") {
  std::string text = kMinimal;
  text += "bogus: 3\n";
  CHECK(parse_error(text) == "t.yaml:9: unknown field 'bogus' in scenario");

  CHECK(parse_error("schema_version: 2\nname: x\ntopology: {builtin: disk}\n").rfind("t.yaml:1:", 0) == 0);
  CHECK(parse_error("schema_version: 1\nname: x\n").find("missing 'topology'") != std::string::npos);
  CHECK(parse_error("schema_version: 1\nname: x\ntopology: {builtin: annulus}\n")
            .find("no value for generator") != std::string::npos);
  CHECK(parse_error("schema_version: 1\nname: x\ntopology: {builtin: disk}\nloops:\n  l: [d0, d1]\n")
            .rfind("t.yaml:5:", 0) == 0);
  CHECK(parse_error("schema_version: 1\nname: x\ntopology: {builtin: disk}\nrandom_checks: 2\n")
            .find("seed") != std::string::npos);
  CHECK(parse_error("schema_version: 1\nname: x\ntopology: {builtin: disk}\ntasks: [check, dance]\n")
            .find("unknown task 'dance'") != std::string::npos);
  CHECK(parse_error("schema_version: 1\nname: x\ntopology: {builtin: disk}\nloops:\n  l: [d0, zz, d0]\n")
            .find("undefined region 'zz'") != std::string::npos);
  CHECK(parse_error("schema_version: 1\nname: x\n  topology: [\n").rfind("t.yaml:", 0) == 0);
  CHECK(parse_error("schema_version: 1\nname: x\ntopology: {builtin: figure_eight}\ngroup: su2\n"
                    "sigma:\n  a: [[1, 0], [0, 2]]\n  b: {axis: [0, 0, 1], angle: 1}\n")
            .find("not unitary") != std::string::npos);
  CHECK(parse_error("schema_version: 1\nname: x\ntopology: {builtin: figure_eight}\n"
                    "sigma:\n  commutator: 1.0\n  a: 0.5\n")
            .find("not a single generator") != std::string::npos);
  CHECK_THROWS_AS(parse_scenario(scenario("does_not_exist.yaml")), ParseError);
}

TEST_CASE("explicit topologies and su2 values") {
  const ScenarioConfig circle = parse_scenario(scenario("circle_u1.yaml"));
  CHECK_FALSE(circle.builtin);
  CHECK(circle.cover.region_count() == 3);
  CHECK_FALSE(circle.seed);

  const ScenarioConfig fig = parse_scenario(scenario("figure_eight_su2.yaml"));
  CHECK(fig.group.kind == GroupKind::MatrixUn);
  CHECK(fig.group.dimension == 2);
  // axis x, angle π/2: cos(π/4) I − i sin(π/4) σx
  bool found = false;
  for (const auto& [gen, value] : fig.sigma) {
    if (max_norm(Matrix(value.matrix() - su2_axis_angle(1, 0, 0, kPi / 2))) < 1e-12 ||
        max_norm(Matrix(value.matrix() - su2_axis_angle(1, 0, 0, kPi / 2).adjoint())) < 1e-12) {
      found = true;
    }
  }
  CHECK(found);
}

TEST_CASE("every shipped scenario runs clean") {
  for (const auto& entry : std::filesystem::directory_iterator(HOLONET_SCENARIO_DIR)) {
    if (entry.path().extension() != ".yaml") continue;
    CAPTURE(entry.path().filename().string());
    const Report r = run(parse_scenario(entry.path()));
    for (const auto& s : r.tasks) {
      CAPTURE(to_string(s.task));
      CAPTURE(s.message);
      if (s.task == Task::Amplitude && r.group != "U(1)") continue;
      CHECK(s.status == Status::Pass);
    }
  }
}

TEST_CASE("annulus report values") {
  const Report r = run(parse_scenario(scenario("annulus_quarter_turn.yaml")));
  CHECK(exit_code(r) == kExitOk);
  const TaskSection* amp = r.section(Task::Amplitude);
  REQUIRE(amp != nullptr);
  const auto& v = amp->values.at("amplitudes").at("wind3").at("amplitude");
  // three quarter turns: −i
  CHECK(v.at(0).get<double>() == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(v.at(1).get<double>() == doctest::Approx(-1.0));
  const TaskSection* cls = r.section(Task::Classify);
  REQUIRE(cls != nullptr);
  CHECK(cls->values.at("class") == "topological");
}

TEST_CASE("structured reports round-trip and are deterministic") {
  const ScenarioConfig cfg = parse_scenario(scenario("torus_u1.yaml"));
  const Report a = run(cfg);
  const Report b = run(cfg);
  const std::string text = emit_structured(a);
  CHECK(text == emit_structured(b));
  const Report back = parse_report(text);
  CHECK(back == a);
  CHECK(emit_structured(back) == text);
  CHECK_THROWS_AS(parse_report("{\"format\": \"other\"}"), ParseError);
  CHECK_THROWS_AS(parse_report("not json"), ParseError);

  // a subset re-run reproduces the same sections
  RunOptions only;
  only.tasks = std::vector<Task>{Task::Check, Task::Sector, Task::Amplitude};
  const Report sub = run(cfg, only);
  CHECK(*sub.section(Task::Amplitude) == *a.section(Task::Amplitude));
  CHECK(*sub.section(Task::Sector) == *a.section(Task::Sector));

  RunOptions other_seed;
  other_seed.seed = 99;
  CHECK(run(cfg, other_seed).seed == std::optional<std::uint64_t>(99));

  const std::string txt = emit_text(a);
  CHECK(txt.find("[check] pass") != std::string::npos);
  CHECK(txt.find("exit 0") != std::string::npos);
}

TEST_CASE("prerequisites and skipping") {
  ScenarioConfig cfg = parse_scenario_text(kMinimal);
  cfg.sigma.begin()->second = GroupValue::phase(0.5);
  RunOptions opts;
  opts.tasks = std::vector<Task>{Task::Classify};
  const Report r = run(cfg, opts);
  REQUIRE(r.tasks.size() == 1);
  CHECK(r.tasks.front().status == Status::Pass);

  // a failing check skips what depends on it
  opts.tasks = std::vector<Task>{Task::Check, Task::Holonomy};
  opts.tolerance = -1.0;
  const Report failed = run(cfg, opts);
  CHECK(failed.section(Task::Check)->status == Status::Fail);
  CHECK(failed.section(Task::Holonomy)->status == Status::Skipped);
  CHECK(exit_code(failed) == kExitTaskFailure);
}

TEST_CASE("capacity and timeout are reported, not thrown") {
  const std::string big = "schema_version: 1\nname: big\ntopology: {builtin: torus}\n"
                          "sigma: {a: 0.1, b: 0.2}\nmodes_per_region: 2\ntasks: [check, sector]\n";
  const Report r = run(parse_scenario_text(big));
  CHECK(r.section(Task::Check)->status == Status::Pass);
  CHECK(r.section(Task::Sector)->status == Status::Error);
  CHECK(r.section(Task::Sector)->error_kind == "capacity");
  CHECK(exit_code(r) == kExitCapacity);

  ScenarioConfig slow = parse_scenario(scenario("annulus_quarter_turn.yaml"));
  slow.timeout_seconds = 1e-9;
  const Report t = run(slow);
  bool timed_out = false;
  for (const auto& s : t.tasks) timed_out = timed_out || s.error_kind == "timeout";
  CHECK(timed_out);
  CHECK(exit_code(t) == kExitTaskFailure);
}

#include <cstdio>
#include <filesystem>

#include "doctest.h"
#include "riskpf/io.hpp"
#include "riskpf/scenario.hpp"

using namespace riskpf;

namespace {

// Reduced solver budget keeps the closed-loop tests quick; the full-budget behavior
// is covered by the acceptance suite.
ScenarioConfig quick_config() {
  ScenarioConfig cfg;
  cfg.population = 32;
  cfg.iterations = 12;
  cfg.steps = 24;
  return cfg;
}

}  // namespace

TEST_CASE("uncertainty presets") {
  const UncertaintyGrowth low = growth_for(UncertaintyLevel::kLow);
  CHECK(low.q_diag[0] == 0.1);
  CHECK(low.dq.c1 == 1.0);
  CHECK(low.dv == 1.0);
  const UncertaintyGrowth high = growth_for(UncertaintyLevel::kHigh);
  CHECK(high.q_diag[2] == 1.5);
  CHECK(high.dq.c2 == 3.0);
  CHECK(parse_uncertainty("medium") == UncertaintyLevel::kMedium);
  CHECK(!parse_uncertainty("med"));
  CHECK(parse_mode("rmpc") == ControllerMode::kRobust);
  CHECK(!parse_mode("mpc"));
}

TEST_CASE("metrics") {
  // 3-4-5 error norm on a single row
  CHECK(Error4{3.0, 4.0, 0.0, 0.0}.norm() == doctest::Approx(5.0));

  std::vector<TraceRow> trace(3);
  for (int i = 0; i < 3; ++i) {
    trace[static_cast<std::size_t>(i)].err_norm = 5.0;
    trace[static_cast<std::size_t>(i)].ego_c1 = 0.0;
    trace[static_cast<std::size_t>(i)].ego_c2 = 0.0;
    trace[static_cast<std::size_t>(i)].obj_c1 = 10.0;
    trace[static_cast<std::size_t>(i)].obj_c2 = 0.0;
  }
  const auto [e_acc, d_min] = metrics(trace);
  CHECK(e_acc == doctest::Approx(15.0));
  CHECK(d_min == doctest::Approx(10.0));
}

TEST_CASE("run_scenario without an object converges to the path") {
  ScenarioConfig cfg = quick_config();
  cfg.object_start = {1e6, 1e6, 0.0};
  cfg.steps = 30;
  const ScenarioResult res = run_scenario(cfg);

  CHECK_FALSE(res.collided);
  CHECK(res.e_acc < 30.0);  // well below any avoidance run
  // converged tail
  for (std::size_t i = res.trace.size() - 5; i < res.trace.size(); ++i) {
    CHECK(res.trace[i].err_norm < 0.3);
  }
  CHECK(res.trace.size() == 30);
  CHECK(res.trace.front().k == 0);
  CHECK(res.trace.back().k == 29);
}

TEST_CASE("run_scenario is deterministic") {
  ScenarioConfig cfg = quick_config();
  cfg.mode = ControllerMode::kStochastic;
  cfg.uncertainty = UncertaintyLevel::kMedium;
  cfg.epsilon = 500.0;
  cfg.seed = 31337;

  const ScenarioResult a = run_scenario(cfg);
  const ScenarioResult b = run_scenario(cfg);
  CHECK(trace_to_csv(a.trace) == trace_to_csv(b.trace));
  CHECK(a.e_acc == b.e_acc);
  CHECK(a.d_min == b.d_min);
}

TEST_CASE("collision flag is consistent with d_min") {
  ScenarioConfig cfg = quick_config();
  cfg.epsilon = 2500.0;
  const ScenarioResult res = run_scenario(cfg);
  CHECK(res.collided == (res.d_min <= cfg.ego_radius + cfg.object_radius));
}

TEST_CASE("smpc with low uncertainty avoids the crossing object") {
  ScenarioConfig cfg;  // full solver budget for the headline behavior
  cfg.mode = ControllerMode::kStochastic;
  cfg.uncertainty = UncertaintyLevel::kLow;
  cfg.epsilon = 2500.0;
  cfg.steps = 30;
  const ScenarioResult res = run_scenario(cfg);
  CHECK_FALSE(res.collided);
  CHECK(res.d_min > 3.0);
}

TEST_CASE("trace round-trips through CSV and metrics recompute") {
  ScenarioConfig cfg = quick_config();
  cfg.steps = 10;
  const ScenarioResult res = run_scenario(cfg);

  const std::string csv = trace_to_csv(res.trace);
  const std::vector<TraceRow> parsed = parse_trace_csv(csv);
  REQUIRE(parsed.size() == res.trace.size());
  const auto [e_acc, d_min] = metrics(parsed);
  CHECK(e_acc == doctest::Approx(res.e_acc).epsilon(1e-9));
  CHECK(d_min == doctest::Approx(res.d_min).epsilon(1e-9));

  const std::string json = summary_to_json(res);
  CHECK(json.find("\"e_acc\"") != std::string::npos);
  CHECK(json.find("\"config\"") != std::string::npos);
}

TEST_CASE("config file application") {
  namespace fs = std::filesystem;
  const fs::path file = fs::temp_directory_path() / "riskpf_test_config.txt";
  write_file(file,
             "# comment\n"
             "controller = rmpc\n"
             "epsilon = 1500\n"
             "uncertainty = high\n"
             "v_ref = 4\n"
             "steps = 12\n"
             "seed = 99\n"
             "growth_sigma = 0\n"
             "growth_dq = 0\n"
             "growth_dv = 0\n");
  ScenarioConfig cfg;
  apply_config_file(file, &cfg);
  CHECK(cfg.mode == ControllerMode::kRobust);
  CHECK(cfg.epsilon == 1500.0);
  CHECK(cfg.uncertainty == UncertaintyLevel::kHigh);
  CHECK(cfg.v_ref == 4.0);
  CHECK(cfg.steps == 12);
  CHECK(cfg.seed == 99);
  REQUIRE(cfg.growth_override.has_value());
  CHECK(cfg.growth().q_diag[0] == 0.0);
  CHECK(cfg.growth().dv == 0.0);
  fs::remove(file);

  ScenarioConfig other;
  CHECK_THROWS(apply_config_line("no_such_key", "1", &other));
}

TEST_CASE("point-mass zero-growth closed loops are mode-independent") {
  ScenarioConfig rm = quick_config();
  rm.mode = ControllerMode::kRobust;
  rm.growth_override = UncertaintyGrowth{};
  rm.object_v_lo = rm.object_v_hi = rm.object_input.v;  // degenerate velocity interval
  rm.epsilon = 1000.0;
  rm.seed = 777;
  rm.steps = 16;

  ScenarioConfig sm = rm;
  sm.mode = ControllerMode::kStochastic;

  const ScenarioResult a = run_scenario(rm);
  const ScenarioResult b = run_scenario(sm);
  REQUIRE(a.trace.size() == b.trace.size());
  for (std::size_t i = 0; i < a.trace.size(); ++i) {
    CHECK(a.trace[i].ego_c1 == b.trace[i].ego_c1);
    CHECK(a.trace[i].ego_c2 == b.trace[i].ego_c2);
    CHECK(a.trace[i].lambda == b.trace[i].lambda);
    CHECK(a.trace[i].risk_step == b.trace[i].risk_step);
  }
}

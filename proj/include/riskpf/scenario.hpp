#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "riskpf/controller.hpp"

namespace riskpf {

enum class UncertaintyLevel { kLow, kMedium, kHigh };

// Growth settings per uncertainty level: additive sigma q*I3 and truncation growth
// (d, d, d) with (q, d) = (0.1, 1), (0.8, 2), (1.5, 3).
UncertaintyGrowth growth_for(UncertaintyLevel level);

const char* to_string(UncertaintyLevel level);
const char* to_string(ControllerMode mode);
std::optional<UncertaintyLevel> parse_uncertainty(const std::string& s);
std::optional<ControllerMode> parse_mode(const std::string& s);

// Full description of one closed-loop run. The defaults are the simulation case
// study's parameter set.
struct ScenarioConfig {
  // reference path
  Configuration goal{65.0, 5.0, 0.0};
  double curvature{0.003};
  double lambda0{-95.0};
  double lambda_g{0.0};

  // ego vehicle
  Configuration ego_start{-10.0, 10.0, 0.0};
  double ego_radius{1.5};
  double ego_mass{1000.0};
  double v_ref{3.0};

  // object
  Configuration object_start{5.0, -5.0, kPi / 2.0};
  double object_radius{1.5};
  double object_mass{1000.0};
  EgoInput object_input{3.0, 1e-4};
  double object_v_lo{-5.0};
  double object_v_hi{5.0};
  std::array<double, 3> sigma0{0.0, 0.0, 0.0};

  // uncertainty growth (level defaults, explicit override wins)
  UncertaintyLevel uncertainty{UncertaintyLevel::kLow};
  std::optional<UncertaintyGrowth> growth_override{};

  // controller
  ControllerMode mode{ControllerMode::kStochastic};
  double epsilon{0.0};
  double dt{0.5};
  int horizon{6};
  int mcs_samples{500};
  int grid_points{40};
  Weight4 weight{identity_weight()};
  InputBounds bounds{};
  int population{64};
  int iterations{30};
  bool polish{true};

  // simulation
  int steps{40};
  std::uint64_t seed{1};

  ArcPath path() const { return ArcPath(goal, curvature, lambda0, lambda_g); }
  UncertaintyGrowth growth() const {
    return growth_override ? *growth_override : growth_for(uncertainty);
  }
  OcpConfig ocp() const;
};

// One closed-loop step of the emitted trace; the columns match the CSV layout.
struct TraceRow {
  int k{};
  double t_s{};
  double ego_c1{}, ego_c2{}, ego_theta{};
  double ego_v_applied{};
  double lambda{};
  double ref_c1{}, ref_c2{}, ref_theta{};
  double obj_c1{}, obj_c2{}, obj_theta{};
  double obj_v{};
  double risk_step{};  // max predicted per-step risk of the executed solution
  double err_norm{};
  bool feasible{};
};

struct ScenarioResult {
  std::vector<TraceRow> trace;
  double e_acc{};
  double d_min{};
  bool collided{};
  double wall_time_s{};
  ScenarioConfig config;
};

// (e_acc, d_min): accumulated error norm and minimum ego-object center distance.
std::pair<double, double> metrics(const std::vector<TraceRow>& trace);

// Runs the closed loop for cfg.steps: measure the object exactly, solve the OCP,
// apply the first inputs to the vehicle and the timing law, advance the object truth
// by its constant-input model. Deterministic given cfg.seed.
ScenarioResult run_scenario(const ScenarioConfig& cfg);

struct MatrixCell {
  ControllerMode mode{};
  UncertaintyLevel uncertainty{};
  double epsilon{};
  std::uint64_t seed{};
  ScenarioResult result;
};

struct MatrixResult {
  std::vector<MatrixCell> cells;  // mode-major, then uncertainty, then epsilon
  double wall_time_s{};

  const MatrixCell& cell(ControllerMode mode, UncertaintyLevel unc, double epsilon) const;
};

inline constexpr std::array<double, 6> kEpsilonGrid{0.0, 500.0, 1000.0, 1500.0, 2000.0, 2500.0};
inline constexpr std::array<UncertaintyLevel, 3> kUncertaintyLevels{
    UncertaintyLevel::kLow, UncertaintyLevel::kMedium, UncertaintyLevel::kHigh};

// The 36-cell comparison: {robust, stochastic} x {low, medium, high} x six risk
// tolerances, starting from `base` with per-cell seeds derived from (base.seed, mode,
// uncertainty, epsilon). Cells run concurrently on up to `threads` workers
// (0 = hardware concurrency); results are deterministic regardless.
MatrixResult run_matrix(const ScenarioConfig& base, int threads = 0);

}  // namespace riskpf

#pragma once

#include <array>
#include <span>
#include <vector>

#include "riskpf/risk.hpp"

namespace riskpf {

enum class ControllerMode { kRobust, kStochastic };

using Weight4 = std::array<std::array<double, 4>, 4>;

inline Weight4 identity_weight() {
  Weight4 w{};
  for (int i = 0; i < 4; ++i) w[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = 1.0;
  return w;
}

inline double quad_form(const Error4& e, const Weight4& w) {
  const std::array<double, 4> v{e.e1, e.e2, e.e_theta, e.e_v};
  double acc = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) acc += v[i] * w[i][j] * v[j];
  }
  return acc;
}

// Everything one receding-horizon solve needs: horizon, cost, risk constraint, the
// reference path and the object prediction model.
struct OcpConfig {
  int horizon{6};    // N
  double dt{0.5};    // T, s
  Weight4 weight{identity_weight()};
  double epsilon{0.0};  // risk tolerance, J
  ControllerMode mode{ControllerMode::kStochastic};
  InputBounds bounds{};
  int mcs_samples{500};  // J
  int grid_points{40};   // L

  ArcPath path{};
  double v_ref{3.0};
  double r_e{1.5};
  double r_o{1.5};
  SeverityParams masses{};
  EgoInput object_input{3.0, 1e-4};
  UncertaintyGrowth growth{};

  // solver budget
  int population{64};
  int iterations{30};
  int elites{8};
  bool polish{true};
  double risk_penalty{1e6};
};

// Accepted solutions satisfy per-step risk <= epsilon within this slack.
inline double risk_tolerance(double epsilon) { return 1e-6 * std::max(1.0, epsilon); }

inline bool risk_within_tolerance(double risk, double epsilon) {
  return risk <= epsilon + risk_tolerance(epsilon);
}

struct OcpSolution {
  std::vector<EgoInput> u1;      // N
  std::vector<double> u2;        // N
  std::vector<EgoState> states;  // N+1, states[0] = x0
  std::vector<double> lambdas;   // N+1
  std::vector<double> risks;     // N+1, aligned with states
  double cost{0.0};
  bool feasible{false};

  double max_risk() const;
};

// Beliefs for prediction steps 0..N: step 0 is the measurement, each later step is
// propagate_mean followed by one growth increment.
std::vector<ObjectBelief> predict_beliefs(const ObjectBelief& belief0, const OcpConfig& cfg);

// Frozen per-step risk inputs for one solve. In stochastic mode the sample sets are
// drawn once here (common random numbers), so the constraint surface is deterministic
// across all candidate evaluations of the solve.
struct RiskContext {
  std::vector<std::vector<ObjectSample>> samples;  // stochastic
  std::vector<WorstCaseEvaluator> worst_case;      // robust
};

RiskContext make_risk_context(std::span<const ObjectBelief> beliefs, const OcpConfig& cfg,
                              RngStream& rng);

// Substream salts used by solve(): sample draws and the candidate search come from
// independent children of the solve stream, so changing the controller mode never
// perturbs the search sequence.
inline constexpr std::uint64_t kSampleStreamSalt = 0x5a6d706c65ULL;
inline constexpr std::uint64_t kSearchStreamSalt = 0x536561726368ULL;

// Simulates the horizon from (x0, lambda0) under the given input sequences and
// evaluates stage cost, per-step risk and feasibility. The ego velocity paired with
// the state at step n is the velocity input applied at n (held for the terminal state).
OcpSolution rollout(const EgoState& x0, double lambda0, std::span<const EgoInput> u1,
                    std::span<const double> u2, const OcpConfig& cfg,
                    std::span<const ObjectBelief> beliefs, const RiskContext& ctx);

// Receding-horizon solve by direct single shooting over the 3N inputs with a
// cross-entropy search plus deterministic pattern-search polish. Candidates outside
// the input boxes are clipped; risk violations enter as an exact penalty and the
// returned feasibility re-checks the hard constraint. If no candidate satisfies the
// risk constraint the minimum-risk candidate is returned flagged infeasible.
OcpSolution solve(const EgoState& x0, double lambda0, const ObjectBelief& belief0,
                  const OcpConfig& cfg, const OcpSolution* warm, RngStream& rng);

}  // namespace riskpf

#include "riskpf/scenario.hpp"

#include <atomic>
#include <cassert>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace riskpf {

UncertaintyGrowth growth_for(UncertaintyLevel level) {
  switch (level) {
    case UncertaintyLevel::kLow:
      return UncertaintyGrowth::uniform(0.1, 1.0);
    case UncertaintyLevel::kMedium:
      return UncertaintyGrowth::uniform(0.8, 2.0);
    case UncertaintyLevel::kHigh:
      return UncertaintyGrowth::uniform(1.5, 3.0);
  }
  return {};
}

const char* to_string(UncertaintyLevel level) {
  switch (level) {
    case UncertaintyLevel::kLow:
      return "low";
    case UncertaintyLevel::kMedium:
      return "medium";
    case UncertaintyLevel::kHigh:
      return "high";
  }
  return "?";
}

const char* to_string(ControllerMode mode) {
  return mode == ControllerMode::kRobust ? "rmpc" : "smpc";
}

std::optional<UncertaintyLevel> parse_uncertainty(const std::string& s) {
  if (s == "low") return UncertaintyLevel::kLow;
  if (s == "medium") return UncertaintyLevel::kMedium;
  if (s == "high") return UncertaintyLevel::kHigh;
  return std::nullopt;
}

std::optional<ControllerMode> parse_mode(const std::string& s) {
  if (s == "rmpc") return ControllerMode::kRobust;
  if (s == "smpc") return ControllerMode::kStochastic;
  return std::nullopt;
}

OcpConfig ScenarioConfig::ocp() const {
  OcpConfig cfg;
  cfg.horizon = horizon;
  cfg.dt = dt;
  cfg.weight = weight;
  cfg.epsilon = epsilon;
  cfg.mode = mode;
  cfg.bounds = bounds;
  cfg.mcs_samples = mcs_samples;
  cfg.grid_points = grid_points;
  cfg.path = path();
  cfg.v_ref = v_ref;
  cfg.r_e = ego_radius;
  cfg.r_o = object_radius;
  cfg.masses = {ego_mass, object_mass};
  cfg.object_input = object_input;
  cfg.growth = growth();
  cfg.population = population;
  cfg.iterations = iterations;
  cfg.polish = polish;
  return cfg;
}

std::pair<double, double> metrics(const std::vector<TraceRow>& trace) {
  assert(!trace.empty());
  double e_acc = 0.0;
  double d_min = std::numeric_limits<double>::infinity();
  for (const TraceRow& row : trace) {
    e_acc += row.err_norm;
    d_min = std::min(d_min, distance({row.ego_c1, row.ego_c2}, {row.obj_c1, row.obj_c2}));
  }
  return {e_acc, d_min};
}

ScenarioResult run_scenario(const ScenarioConfig& cfg) {
  if (cfg.steps < 1) throw std::invalid_argument("run_scenario: steps must be >= 1");
  if (cfg.ego_radius <= 0.0 || cfg.object_radius <= 0.0) {
    throw std::invalid_argument("run_scenario: radii must be positive");
  }
  const auto t_start = std::chrono::steady_clock::now();

  const ArcPath path = cfg.path();
  const OcpConfig ocp = cfg.ocp();

  ScenarioResult out;
  out.config = cfg;
  out.trace.reserve(static_cast<std::size_t>(cfg.steps));

  EgoState ego = make_configuration(cfg.ego_start.c1, cfg.ego_start.c2, cfg.ego_start.theta);
  Configuration obj =
      make_configuration(cfg.object_start.c1, cfg.object_start.c2, cfg.object_start.theta);
  double lambda = path.nearest_lambda(ego);
  std::optional<OcpSolution> warm;

  for (int k = 0; k < cfg.steps; ++k) {
    const ObjectBelief belief0 = make_measured_belief(obj, cfg.object_input.v, cfg.sigma0,
                                                      cfg.object_v_lo, cfg.object_v_hi);
    RngStream solve_rng(mix_seed(cfg.seed, static_cast<std::uint64_t>(k)));
    const OcpSolution sol = solve(ego, lambda, belief0, ocp, warm ? &*warm : nullptr, solve_rng);

    const EgoInput u = sol.u1.front();
    const double u2 = sol.u2.front();
    const Error4 err = tracking_error(ego, lambda, u2, path, cfg.v_ref);
    const Configuration ref = path.eval(lambda);

    TraceRow row;
    row.k = k;
    row.t_s = k * cfg.dt;
    row.ego_c1 = ego.c1;
    row.ego_c2 = ego.c2;
    row.ego_theta = ego.theta;
    row.ego_v_applied = u.v;
    row.lambda = lambda;
    row.ref_c1 = ref.c1;
    row.ref_c2 = ref.c2;
    row.ref_theta = ref.theta;
    row.obj_c1 = obj.c1;
    row.obj_c2 = obj.c2;
    row.obj_theta = obj.theta;
    row.obj_v = cfg.object_input.v;
    row.risk_step = sol.max_risk();
    row.err_norm = err.norm();
    row.feasible = sol.feasible;
    out.trace.push_back(row);

    lambda = advance_lambda(path, lambda, u2, ego.theta, cfg.dt);
    ego = step(ego, u, cfg.dt);
    obj = step(obj, cfg.object_input, cfg.dt);
    warm = sol;
  }

  const auto [e_acc, d_min] = metrics(out.trace);
  out.e_acc = e_acc;
  out.d_min = d_min;
  out.collided = d_min <= cfg.ego_radius + cfg.object_radius;
  out.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return out;
}

const MatrixCell& MatrixResult::cell(ControllerMode mode, UncertaintyLevel unc,
                                     double epsilon) const {
  for (const MatrixCell& c : cells) {
    if (c.mode == mode && c.uncertainty == unc && c.epsilon == epsilon) return c;
  }
  throw std::out_of_range("MatrixResult::cell: no such cell");
}

MatrixResult run_matrix(const ScenarioConfig& base, int threads) {
  const auto t_start = std::chrono::steady_clock::now();

  std::vector<ScenarioConfig> configs;
  std::vector<MatrixCell> cells;
  for (ControllerMode mode : {ControllerMode::kRobust, ControllerMode::kStochastic}) {
    for (UncertaintyLevel unc : kUncertaintyLevels) {
      for (double eps : kEpsilonGrid) {
        ScenarioConfig cfg = base;
        cfg.mode = mode;
        cfg.uncertainty = unc;
        cfg.epsilon = eps;
        cfg.seed = mix_seed(
            mix_seed(mix_seed(base.seed, static_cast<std::uint64_t>(mode)),
                     static_cast<std::uint64_t>(unc)),
            static_cast<std::uint64_t>(eps));
        configs.push_back(cfg);
        cells.push_back({mode, unc, eps, cfg.seed, {}});
      }
    }
  }

  int n_workers = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
  n_workers = std::clamp(n_workers, 1, static_cast<int>(configs.size()));

  std::atomic<std::size_t> next{0};
  const auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= configs.size()) break;
      cells[i].result = run_scenario(configs[i]);
    }
  };
  if (n_workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n_workers));
    for (int w = 0; w < n_workers; ++w) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }

  MatrixResult out;
  out.cells = std::move(cells);
  out.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return out;
}

}  // namespace riskpf

#include "riskpf/controller.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>

namespace riskpf {

double OcpSolution::max_risk() const {
  double m = 0.0;
  for (double r : risks) m = std::max(m, r);
  return m;
}

std::vector<ObjectBelief> predict_beliefs(const ObjectBelief& belief0, const OcpConfig& cfg) {
  std::vector<ObjectBelief> beliefs;
  beliefs.reserve(static_cast<std::size_t>(cfg.horizon) + 1);
  beliefs.push_back(belief0);
  for (int n = 0; n < cfg.horizon; ++n) {
    beliefs.push_back(grow(propagate_mean(beliefs.back(), cfg.object_input, cfg.dt), cfg.growth));
  }
  return beliefs;
}

RiskContext make_risk_context(std::span<const ObjectBelief> beliefs, const OcpConfig& cfg,
                              RngStream& rng) {
  RiskContext ctx;
  if (cfg.mode == ControllerMode::kStochastic) {
    ctx.samples.reserve(beliefs.size());
    for (const ObjectBelief& b : beliefs) ctx.samples.push_back(sample(b, cfg.mcs_samples, rng));
  } else {
    ctx.worst_case.reserve(beliefs.size());
    for (const ObjectBelief& b : beliefs) {
      ctx.worst_case.emplace_back(b, cfg.grid_points, cfg.r_e, cfg.r_o, cfg.masses);
    }
  }
  return ctx;
}

namespace {

double step_risk(const OcpConfig& cfg, std::span<const ObjectBelief> beliefs,
                 const RiskContext& ctx, std::size_t n, const Vec2& q_e, double v_e) {
  if (cfg.mode == ControllerMode::kStochastic) {
    RiskQuery query{q_e, v_e, cfg.r_e, cfg.r_o, beliefs[n], cfg.masses};
    return mcs_risk(query, ctx.samples[n]);
  }
  return ctx.worst_case[n].risk(q_e, v_e);
}

}  // namespace

OcpSolution rollout(const EgoState& x0, double lambda0, std::span<const EgoInput> u1,
                    std::span<const double> u2, const OcpConfig& cfg,
                    std::span<const ObjectBelief> beliefs, const RiskContext& ctx) {
  const std::size_t n_steps = static_cast<std::size_t>(cfg.horizon);
  if (u1.size() != n_steps || u2.size() != n_steps) {
    throw std::invalid_argument("rollout: input sequences must have horizon length");
  }
  if (beliefs.size() != n_steps + 1) {
    throw std::invalid_argument("rollout: belief list must have horizon+1 entries");
  }
  const std::size_t ctx_size =
      cfg.mode == ControllerMode::kStochastic ? ctx.samples.size() : ctx.worst_case.size();
  if (ctx_size != n_steps + 1) {
    throw std::invalid_argument("rollout: risk context does not match the horizon");
  }

  OcpSolution sol;
  sol.u1.assign(u1.begin(), u1.end());
  sol.u2.assign(u2.begin(), u2.end());
  sol.states.resize(n_steps + 1);
  sol.lambdas.resize(n_steps + 1);
  sol.risks.resize(n_steps + 1);

  sol.states[0] = make_configuration(x0.c1, x0.c2, x0.theta);
  sol.lambdas[0] = std::clamp(lambda0, cfg.path.lambda0(), cfg.path.lambda_g());

  // Stage cost over the N predicted states (the current one is fixed by 8b and
  // carries no decision); the path-velocity error at the terminal state holds the
  // last input. This way every input shapes the cost, including the final one.
  bool ok = true;
  double cost = 0.0;
  for (std::size_t n = 0; n < n_steps; ++n) {
    ok = ok && cfg.bounds.contains(u1[n]) && cfg.bounds.contains_u2(u2[n]);

    sol.states[n + 1] = step(sol.states[n], u1[n], cfg.dt);
    sol.lambdas[n + 1] =
        advance_lambda(cfg.path, sol.lambdas[n], u2[n], sol.states[n].theta, cfg.dt);
    const double u2_at = u2[std::min(n + 1, n_steps - 1)];
    const Error4 e =
        tracking_error(sol.states[n + 1], sol.lambdas[n + 1], u2_at, cfg.path, cfg.v_ref);
    cost += quad_form(e, cfg.weight);
  }
  for (std::size_t n = 0; n <= n_steps; ++n) {
    const double v_e = u1[std::min(n, n_steps - 1)].v;
    sol.risks[n] = step_risk(cfg, beliefs, ctx, n, position(sol.states[n]), v_e);
    ok = ok && risk_within_tolerance(sol.risks[n], cfg.epsilon);
    ok = ok && sol.lambdas[n] >= cfg.path.lambda0() && sol.lambdas[n] <= cfg.path.lambda_g();
  }
  sol.cost = cost;
  sol.feasible = ok;
  return sol;
}

namespace {

// Flattened decision vector: (v, omega, u2) per step.
struct Objective {
  const EgoState* x0;
  double lambda0;
  const OcpConfig* cfg;
  std::span<const ObjectBelief> beliefs;
  const RiskContext* ctx;

  struct Eval {
    double cost{};          // raw stage cost, sum of e'We
    double merit{};         // cost + penalty * violation; the search ordering
    double violation{};     // sum over steps of max(0, risk - epsilon)
    double worst_excess{};  // max over steps of max(0, risk - epsilon)
    bool feasible{};
  };

  std::size_t n_steps() const { return static_cast<std::size_t>(cfg->horizon); }
  std::size_t dim() const { return 3 * n_steps(); }

  void clip(std::vector<double>& z) const {
    const InputBounds& b = cfg->bounds;
    for (std::size_t n = 0; n < n_steps(); ++n) {
      z[3 * n + 0] = std::clamp(z[3 * n + 0], b.v_lo, b.v_hi);
      z[3 * n + 1] = std::clamp(z[3 * n + 1], b.omega_lo, b.omega_hi);
      z[3 * n + 2] = std::clamp(z[3 * n + 2], b.u2_lo, b.u2_hi);
    }
  }

  // Penalized evaluation without materializing an OcpSolution.
  Eval evaluate(const std::vector<double>& z, double penalty) const {
    const std::size_t n_steps_ = n_steps();
    Eval out;
    out.feasible = true;

    EgoState x = *x0;
    double lambda = lambda0;
    double cost = 0.0;
    double violation = 0.0;
    double worst = 0.0;

    // Risk at the current (fixed) state, paired with the first velocity input.
    {
      const double r = step_risk(*cfg, beliefs, *ctx, 0, position(x), z[0]);
      if (!risk_within_tolerance(r, cfg->epsilon)) out.feasible = false;
      const double exc = std::max(0.0, r - cfg->epsilon);
      violation += exc;
      worst = std::max(worst, exc);
    }
    for (std::size_t n = 0; n < n_steps_; ++n) {
      const EgoInput u{z[3 * n + 0], z[3 * n + 1]};
      const double u2 = z[3 * n + 2];

      const double lambda_next = advance_lambda(cfg->path, lambda, u2, x.theta, cfg->dt);
      x = step(x, u, cfg->dt);
      lambda = lambda_next;

      const double u2_at = z[3 * std::min(n + 1, n_steps_ - 1) + 2];
      const Error4 e = tracking_error(x, lambda, u2_at, cfg->path, cfg->v_ref);
      cost += quad_form(e, cfg->weight);

      const double v_e = z[3 * std::min(n + 1, n_steps_ - 1) + 0];
      const double r = step_risk(*cfg, beliefs, *ctx, n + 1, position(x), v_e);
      if (!risk_within_tolerance(r, cfg->epsilon)) out.feasible = false;
      const double exc = std::max(0.0, r - cfg->epsilon);
      violation += exc;
      worst = std::max(worst, exc);
    }
    out.cost = cost;
    out.merit = cost + penalty * violation;
    out.violation = violation;
    out.worst_excess = worst;
    return out;
  }
};

struct Incumbents {
  std::vector<double> best_merit_z;
  double best_merit = std::numeric_limits<double>::infinity();

  std::vector<double> best_feasible_z;
  double best_feasible_cost = std::numeric_limits<double>::infinity();
  bool has_feasible = false;

  std::vector<double> least_risky_z;
  double least_excess = std::numeric_limits<double>::infinity();
  double least_excess_sum = std::numeric_limits<double>::infinity();
  double least_excess_cost = std::numeric_limits<double>::infinity();

  void consider(const std::vector<double>& z, const Objective::Eval& e) {
    if (e.merit < best_merit) {
      best_merit = e.merit;
      best_merit_z = z;
    }
    if (e.feasible && e.cost < best_feasible_cost) {
      best_feasible_cost = e.cost;
      best_feasible_z = z;
      has_feasible = true;
    }
    // Minimum-risk fallback ordering: worst per-step excess, then total excess, then
    // cost. Total excess discriminates between candidates whose deep-horizon
    // violations coincide.
    const bool better =
        e.worst_excess < least_excess ||
        (e.worst_excess == least_excess &&
         (e.violation < least_excess_sum ||
          (e.violation == least_excess_sum && e.cost < least_excess_cost)));
    if (better) {
      least_excess = e.worst_excess;
      least_excess_sum = e.violation;
      least_excess_cost = e.cost;
      least_risky_z = z;
    }
  }
};

}  // namespace

OcpSolution solve(const EgoState& x0, double lambda0, const ObjectBelief& belief0,
                  const OcpConfig& cfg, const OcpSolution* warm, RngStream& rng) {
  assert(cfg.horizon >= 1);
  const std::vector<ObjectBelief> beliefs = predict_beliefs(belief0, cfg);

  RngStream sample_rng = rng.split(kSampleStreamSalt);
  RngStream search_rng = rng.split(kSearchStreamSalt);
  const RiskContext ctx = make_risk_context(beliefs, cfg, sample_rng);

  const Objective obj{&x0, std::clamp(lambda0, cfg.path.lambda0(), cfg.path.lambda_g()), &cfg,
                      beliefs, &ctx};
  const std::size_t dim = obj.dim();
  const std::size_t n_steps = obj.n_steps();

  Incumbents pool;
  const auto consider = [&](std::vector<double> z) {
    obj.clip(z);
    const Objective::Eval e = obj.evaluate(z, cfg.risk_penalty);
    pool.consider(z, e);
    return e;
  };

  // Constant-input seed trajectories. Besides the nominal reference-following guess,
  // a few maneuver primitives (brake, full reverse, half speed) give the search a
  // foothold in basins far from the warm start, e.g. the retreat the worst-case
  // constraint demands once the truncation boxes outgrow the reachable gap.
  const auto constant_guess = [&](double v, double u2) {
    std::vector<double> z(dim);
    for (std::size_t n = 0; n < n_steps; ++n) {
      z[3 * n + 0] = std::clamp(v, cfg.bounds.v_lo, cfg.bounds.v_hi);
      z[3 * n + 1] = 0.0;
      z[3 * n + 2] = cfg.bounds.clamp_u2(u2);
    }
    return z;
  };
  const std::vector<double> nominal = constant_guess(cfg.v_ref, cfg.v_ref);
  consider(nominal);
  consider(constant_guess(0.0, 0.0));
  consider(constant_guess(cfg.bounds.v_lo, 0.0));
  consider(constant_guess(0.5 * cfg.v_ref, 0.5 * cfg.v_ref));

  // One-step-shifted previous solution, padded by repeating the last input.
  std::vector<double> mean = nominal;
  if (warm != nullptr && warm->u1.size() == n_steps && warm->u2.size() == n_steps) {
    std::vector<double> shifted(dim);
    for (std::size_t n = 0; n < n_steps; ++n) {
      const std::size_t src = std::min(n + 1, n_steps - 1);
      shifted[3 * n + 0] = warm->u1[src].v;
      shifted[3 * n + 1] = warm->u1[src].omega;
      shifted[3 * n + 2] = warm->u2[src];
    }
    consider(shifted);
    mean = shifted;
  }

  std::vector<double> sigma(dim);
  for (std::size_t n = 0; n < n_steps; ++n) {
    sigma[3 * n + 0] = 2.0;
    sigma[3 * n + 1] = 0.2;
    sigma[3 * n + 2] = 2.0;
  }
  constexpr double kSigmaFloor = 1e-4;

  const int population = std::max(cfg.population, 4);
  const int elites = std::clamp(cfg.elites, 1, population);
  std::vector<std::vector<double>> cand(static_cast<std::size_t>(population));
  std::vector<Objective::Eval> evals(static_cast<std::size_t>(population));
  std::vector<int> order(static_cast<std::size_t>(population));

  for (int it = 0; it < cfg.iterations; ++it) {
    for (int p = 0; p < population; ++p) {
      auto& z = cand[static_cast<std::size_t>(p)];
      if (p == 0) {
        z = pool.best_merit_z;  // elitism
      } else if (p == 1) {
        z = mean;
      } else {
        z.resize(dim);
        for (std::size_t i = 0; i < dim; ++i) z[i] = search_rng.normal(mean[i], sigma[i]);
      }
      evals[static_cast<std::size_t>(p)] = consider(z);
    }

    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      const double ma = evals[static_cast<std::size_t>(a)].merit;
      const double mb = evals[static_cast<std::size_t>(b)].merit;
      if (ma != mb) return ma < mb;
      return a < b;  // deterministic tie-break
    });

    for (std::size_t i = 0; i < dim; ++i) {
      double m = 0.0;
      for (int e = 0; e < elites; ++e) m += cand[static_cast<std::size_t>(order[e])][i];
      m /= elites;
      double var = 0.0;
      for (int e = 0; e < elites; ++e) {
        const double d = cand[static_cast<std::size_t>(order[e])][i] - m;
        var += d * d;
      }
      mean[i] = m;
      sigma[i] = std::max(std::sqrt(var / elites), kSigmaFloor);
    }
  }

  // Deterministic coordinate pattern-search polish around the candidate that the
  // selection below would return.
  if (cfg.polish) {
    std::vector<double> z = pool.has_feasible ? pool.best_feasible_z : pool.least_risky_z;
    Objective::Eval ze = obj.evaluate(z, cfg.risk_penalty);
    for (double scale : {1.0, 0.25, 0.0625}) {
      bool improved = true;
      int sweeps = 0;
      while (improved && sweeps < 4) {
        improved = false;
        ++sweeps;
        for (std::size_t i = 0; i < dim; ++i) {
          const double delta = (i % 3 == 1 ? 0.05 : 0.5) * scale;
          for (double dir : {+1.0, -1.0}) {
            std::vector<double> trial = z;
            trial[i] += dir * delta;
            obj.clip(trial);
            const Objective::Eval te = obj.evaluate(trial, cfg.risk_penalty);
            pool.consider(trial, te);
            if (te.merit + 1e-12 < ze.merit) {
              z = std::move(trial);
              ze = te;
              improved = true;
              break;
            }
          }
        }
      }
    }
  }

  const std::vector<double>& z = pool.has_feasible ? pool.best_feasible_z : pool.least_risky_z;
  std::vector<EgoInput> u1(n_steps);
  std::vector<double> u2(n_steps);
  for (std::size_t n = 0; n < n_steps; ++n) {
    u1[n] = {z[3 * n + 0], z[3 * n + 1]};
    u2[n] = z[3 * n + 2];
  }
  return rollout(x0, obj.lambda0, u1, u2, cfg, beliefs, ctx);
}

}  // namespace riskpf

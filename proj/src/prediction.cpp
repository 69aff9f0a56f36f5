#include "riskpf/prediction.hpp"

#include <cassert>
#include <cmath>

namespace riskpf {

ObjectBelief make_measured_belief(const Configuration& measured, double measured_v,
                                  const std::array<double, 3>& sigma0, double v_lo,
                                  double v_hi) {
  ObjectBelief b;
  b.mean_config = make_configuration(measured.c1, measured.c2, measured.theta);
  b.mean_v = measured_v;
  b.sigma = sigma0;
  b.q_lo = {measured.c1, measured.c2};
  b.q_hi = {measured.c1, measured.c2};
  b.v_lo = v_lo;
  b.v_hi = v_hi;
  return b;
}

ObjectBelief propagate_mean(const ObjectBelief& belief, const EgoInput& object_input,
                            double dt) {
  ObjectBelief out = belief;
  out.mean_config = step(belief.mean_config, object_input, dt);
  out.mean_v = object_input.v;
  // The truncation bounds ride along with the propagated means; their widths (the
  // spread) stay unchanged. Keeping them static would strand the box behind a moving
  // object and break the mean-inside-bounds invariant.
  const double dc1 = out.mean_config.c1 - belief.mean_config.c1;
  const double dc2 = out.mean_config.c2 - belief.mean_config.c2;
  const double dv = out.mean_v - belief.mean_v;
  out.q_lo.c1 += dc1;
  out.q_hi.c1 += dc1;
  out.q_lo.c2 += dc2;
  out.q_hi.c2 += dc2;
  out.v_lo += dv;
  out.v_hi += dv;
  return out;
}

ObjectBelief grow(const ObjectBelief& belief, const UncertaintyGrowth& g) {
  ObjectBelief out = belief;
  // Independent per-step noise accumulates in variance, so the std devs add in
  // quadrature (sigma_n = q*sqrt(n) from a point mass); the truncation bounds grow
  // linearly, one increment per side per step.
  for (int i = 0; i < 3; ++i) {
    out.sigma[i] = std::sqrt(belief.sigma[i] * belief.sigma[i] + g.q_diag[i] * g.q_diag[i]);
  }
  out.q_lo.c1 -= g.dq.c1;
  out.q_lo.c2 -= g.dq.c2;
  out.q_hi.c1 += g.dq.c1;
  out.q_hi.c2 += g.dq.c2;
  out.v_lo -= g.dv;
  out.v_hi += g.dv;
  return out;
}

std::vector<ObjectSample> sample(const ObjectBelief& belief, int count, RngStream& rng) {
  assert(count >= 1);
  std::vector<ObjectSample> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int j = 0; j < count; ++j) {
    ObjectSample s;
    s.q.c1 = rng.trunc_normal(belief.mean_config.c1, belief.sigma[0], belief.q_lo.c1,
                              belief.q_hi.c1);
    s.q.c2 = rng.trunc_normal(belief.mean_config.c2, belief.sigma[1], belief.q_lo.c2,
                              belief.q_hi.c2);
    s.v = rng.trunc_normal(belief.mean_v, belief.sigma[2], belief.v_lo, belief.v_hi);
    out.push_back(s);
  }
  return out;
}

std::vector<double> grid_axis(double lo, double hi, int points) {
  if (hi <= lo) return {lo};
  assert(points >= 2);
  std::vector<double> out(static_cast<std::size_t>(points));
  const double h = (hi - lo) / (points - 1);
  for (int i = 0; i < points; ++i) out[static_cast<std::size_t>(i)] = lo + i * h;
  out.back() = hi;  // pin the endpoint exactly
  return out;
}

GridAxes grid_axes(const ObjectBelief& belief, int points_per_axis) {
  return {grid_axis(belief.q_lo.c1, belief.q_hi.c1, points_per_axis),
          grid_axis(belief.q_lo.c2, belief.q_hi.c2, points_per_axis),
          grid_axis(belief.v_lo, belief.v_hi, points_per_axis)};
}

std::vector<ObjectSample> grid(const ObjectBelief& belief, int points_per_axis) {
  const GridAxes axes = grid_axes(belief, points_per_axis);
  std::vector<ObjectSample> out;
  out.reserve(axes.c1.size() * axes.c2.size() * axes.v.size());
  for (double x : axes.c1) {
    for (double y : axes.c2) {
      for (double v : axes.v) {
        out.push_back({{x, y}, v});
      }
    }
  }
  return out;
}

}  // namespace riskpf

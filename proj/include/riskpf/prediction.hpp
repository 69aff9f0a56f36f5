#pragma once

#include <array>
#include <vector>

#include "riskpf/dynamics.hpp"
#include "riskpf/rng.hpp"

namespace riskpf {

// Truncated-Gaussian belief over the object's position and scalar velocity.
// Components are independent; a zero sigma is a point mass on the mean. The means
// stay inside the truncation bounds.
struct ObjectBelief {
  Configuration mean_config;
  double mean_v{};
  std::array<double, 3> sigma{};  // (sigma_c1, sigma_c2, sigma_v)
  Vec2 q_lo;
  Vec2 q_hi;
  double v_lo{};
  double v_hi{};
};

// Belief for an exactly measured object: point-mass position, the measured velocity
// as mean over the given admissible interval.
ObjectBelief make_measured_belief(const Configuration& measured, double measured_v,
                                  const std::array<double, 3>& sigma0, double v_lo, double v_hi);

// Per-step additive growth of the spread and the truncation bounds.
struct UncertaintyGrowth {
  std::array<double, 3> q_diag{};  // added to sigma each step
  Vec2 dq{};                       // box half-width growth per step
  double dv{};

  static UncertaintyGrowth uniform(double q, double d) { return {{q, q, q}, {d, d}, d}; }
};

// Advances the belief mean one step with the object's (constant) inputs. The
// truncation bounds translate with the means so the box keeps containing them; the
// spread (sigma and the bound widths) is untouched.
ObjectBelief propagate_mean(const ObjectBelief& belief, const EgoInput& object_input, double dt);

// Adds one step of uncertainty growth: sigma += q_diag, position box widens by dq per
// side, velocity interval by dv per side. Means are untouched.
ObjectBelief grow(const ObjectBelief& belief, const UncertaintyGrowth& g);

struct ObjectSample {
  Vec2 q;
  double v{};
};

// count independent draws from the componentwise truncated Gaussians; deterministic
// given the stream state.
std::vector<ObjectSample> sample(const ObjectBelief& belief, int count, RngStream& rng);

// Evenly spaced values over [lo, hi], endpoints included exactly; a degenerate
// interval contributes its single value.
std::vector<double> grid_axis(double lo, double hi, int points);

struct GridAxes {
  std::vector<double> c1;
  std::vector<double> c2;
  std::vector<double> v;
};

GridAxes grid_axes(const ObjectBelief& belief, int points_per_axis);

// Cartesian product of the per-axis grids (at most points_per_axis^3 entries).
std::vector<ObjectSample> grid(const ObjectBelief& belief, int points_per_axis);

}  // namespace riskpf

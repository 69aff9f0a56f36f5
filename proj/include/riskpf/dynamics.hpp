#pragma once

#include <algorithm>

#include "riskpf/geometry.hpp"

namespace riskpf {

// Turn rates below this take the analytic straight-line limit of the arc update.
inline constexpr double kOmegaEps = 1e-6;

// The state vector of the discrete unicycle equals the configuration.
using EgoState = Configuration;

struct EgoInput {
  double v{};      // velocity, m/s
  double omega{};  // turn rate, rad/s
};

// Box constraints on the actuator inputs (v, omega) and the path-velocity input u2.
struct InputBounds {
  double v_lo{-5.0};
  double v_hi{10.0};
  double omega_lo{-0.5};
  double omega_hi{0.5};
  double u2_lo{-5.0};
  double u2_hi{10.0};

  EgoInput clamp(const EgoInput& u) const {
    return {std::clamp(u.v, v_lo, v_hi), std::clamp(u.omega, omega_lo, omega_hi)};
  }
  double clamp_u2(double u2) const { return std::clamp(u2, u2_lo, u2_hi); }
  bool contains(const EgoInput& u) const {
    return u.v >= v_lo && u.v <= v_hi && u.omega >= omega_lo && u.omega <= omega_hi;
  }
  bool contains_u2(double u2) const { return u2 >= u2_lo && u2 <= u2_hi; }
};

// Exact-arc discrete unicycle update over one step of length dt; below kOmegaEps the
// analytic limit (v dt cos, v dt sin, omega dt) is used to avoid 1/omega blowup.
inline EgoState step(const EgoState& x, const EgoInput& u, double dt) {
  const double th = x.theta;
  double dc1, dc2;
  if (std::abs(u.omega) < kOmegaEps) {
    dc1 = u.v * dt * std::cos(th);
    dc2 = u.v * dt * std::sin(th);
  } else {
    const double th1 = th + u.omega * dt;
    dc1 = u.v / u.omega * (std::sin(th1) - std::sin(th));
    dc2 = u.v / u.omega * (std::cos(th) - std::cos(th1));
  }
  return make_configuration(x.c1 + dc1, x.c2 + dc2, th + u.omega * dt);
}

// Timing law: advances lambda by the displacement u2*dt projected onto the path
// tangent at lambda, clamped to the path interval.
inline double advance_lambda(const ArcPath& path, double lambda, double u2, double theta_e,
                             double dt) {
  const double theta_p = path.tangent_heading(lambda);
  const double next = lambda + u2 * std::cos(theta_e - theta_p) * dt;
  return std::clamp(next, path.lambda0(), path.lambda_g());
}

// Path-following error (position, heading, path velocity).
struct Error4 {
  double e1{};
  double e2{};
  double e_theta{};
  double e_v{};

  double norm() const {
    return std::sqrt(e1 * e1 + e2 * e2 + e_theta * e_theta + e_v * e_v);
  }
};

// Error of (x, u2) against the reference at lambda; the heading component is wrapped
// into (-pi, pi] so the cost sees no 2*pi jumps.
inline Error4 tracking_error(const EgoState& x, double lambda, double u2, const ArcPath& path,
                             double v_ref) {
  const Configuration ref = path.eval(lambda);
  return {x.c1 - ref.c1, x.c2 - ref.c2, wrap_to_pi(x.theta - ref.theta), u2 - v_ref};
}

}  // namespace riskpf

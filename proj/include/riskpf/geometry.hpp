#pragma once

#include <cmath>
#include <numbers>

namespace riskpf {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Curvatures below this take the straight-line form of the arc equations.
inline constexpr double kCurvatureEps = 1e-9;

// Maps an angle into [0, 2*pi).
inline double wrap_to_2pi(double angle) {
  double w = std::fmod(angle, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  if (w >= kTwoPi) w = 0.0;
  return w;
}

// Maps an angle difference into (-pi, pi].
inline double wrap_to_pi(double angle) {
  double w = std::fmod(angle, kTwoPi);
  if (w > kPi) w -= kTwoPi;
  if (w <= -kPi) w += kTwoPi;
  return w;
}

struct Vec2 {
  double c1{};
  double c2{};
};

inline Vec2 operator+(const Vec2& a, const Vec2& b) { return {a.c1 + b.c1, a.c2 + b.c2}; }
inline Vec2 operator-(const Vec2& a, const Vec2& b) { return {a.c1 - b.c1, a.c2 - b.c2}; }
inline double norm(const Vec2& v) { return std::sqrt(v.c1 * v.c1 + v.c2 * v.c2); }
inline double distance(const Vec2& a, const Vec2& b) { return norm(a - b); }

// Planar pose of an actor; theta is kept in [0, 2*pi).
struct Configuration {
  double c1{};
  double c2{};
  double theta{};
};

inline Configuration make_configuration(double c1, double c2, double theta) {
  return {c1, c2, wrap_to_2pi(theta)};
}

inline Vec2 position(const Configuration& y) { return {y.c1, y.c2}; }

struct CircleShape {
  double radius{1.0};  // strictly positive
};

// 1 iff the two discs touch or overlap (center distance <= r_e + r_o, boundary
// counts as a collision).
inline int collision_indicator(const Vec2& q_e, const Vec2& q_o, double r_e, double r_o) {
  const double dx = q_e.c1 - q_o.c1;
  const double dy = q_e.c2 - q_o.c2;
  const double r = r_e + r_o;
  return dx * dx + dy * dy <= r * r ? 1 : 0;
}

// Constant-curvature, arc-length-parameterized reference path over [lambda0, lambda_g],
// anchored so that eval(lambda_g) returns the goal configuration. The tangent heading is
// theta_g + kappa * (lambda - lambda_g); |d y / d lambda| = 1 everywhere.
class ArcPath {
 public:
  ArcPath() : ArcPath(Configuration{}, 0.0, -1.0, 0.0) {}
  ArcPath(const Configuration& goal, double curvature, double lambda0, double lambda_g);

  // Reference configuration at lambda; out-of-range arguments are clamped to the
  // interval and reported through `clamped` when given.
  Configuration eval(double lambda, bool* clamped = nullptr) const {
    const double l = clamp_lambda(lambda, clamped);
    const double rel = l - lambda_g_;
    const double th = goal_.theta + curvature_ * rel;
    double c1, c2;
    if (std::abs(curvature_) < kCurvatureEps) {
      c1 = goal_.c1 + rel * std::cos(goal_.theta);
      c2 = goal_.c2 + rel * std::sin(goal_.theta);
    } else {
      c1 = goal_.c1 + (std::sin(th) - std::sin(goal_.theta)) / curvature_;
      c2 = goal_.c2 - (std::cos(th) - std::cos(goal_.theta)) / curvature_;
    }
    return make_configuration(c1, c2, th);
  }

  // Tangent angle of the path at lambda (unwrapped).
  double tangent_heading(double lambda) const {
    return goal_.theta + curvature_ * (clamp_lambda(lambda, nullptr) - lambda_g_);
  }

  // Path parameter of the point closest to the ego position. The norm is taken over
  // the position components only; solved by a coarse 1 m grid plus golden-section
  // refinement to 1e-4 m.
  double nearest_lambda(const Configuration& y_e) const;

  double lambda0() const { return lambda0_; }
  double lambda_g() const { return lambda_g_; }
  double curvature() const { return curvature_; }
  const Configuration& goal() const { return goal_; }

 private:
  double clamp_lambda(double lambda, bool* clamped) const {
    if (lambda < lambda0_) {
      if (clamped) *clamped = true;
      return lambda0_;
    }
    if (lambda > lambda_g_) {
      if (clamped) *clamped = true;
      return lambda_g_;
    }
    if (clamped) *clamped = false;
    return lambda;
  }

  Configuration goal_;
  double curvature_;
  double lambda0_;
  double lambda_g_;
};

}  // namespace riskpf

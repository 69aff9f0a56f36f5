#include "riskpf/geometry.hpp"

#include <algorithm>
#include <stdexcept>

namespace riskpf {

ArcPath::ArcPath(const Configuration& goal, double curvature, double lambda0, double lambda_g)
    : goal_(make_configuration(goal.c1, goal.c2, goal.theta)),
      curvature_(curvature),
      lambda0_(lambda0),
      lambda_g_(lambda_g) {
  if (!(lambda0 < lambda_g)) {
    throw std::invalid_argument("ArcPath: lambda0 must be < lambda_g");
  }
}

double ArcPath::nearest_lambda(const Configuration& y_e) const {
  const auto dist2 = [&](double lambda) {
    const Configuration p = eval(lambda);
    const double dx = y_e.c1 - p.c1;
    const double dy = y_e.c2 - p.c2;
    return dx * dx + dy * dy;
  };

  // Coarse scan at 1 m resolution, endpoints included.
  constexpr double kCoarse = 1.0;
  double best_lambda = lambda0_;
  double best_d2 = dist2(lambda0_);
  for (double l = lambda0_ + kCoarse;; l += kCoarse) {
    const double lam = std::min(l, lambda_g_);
    const double d2 = dist2(lam);
    if (d2 < best_d2) {
      best_d2 = d2;
      best_lambda = lam;
    }
    if (lam >= lambda_g_) break;
  }

  // Golden-section refinement on the bracketing interval.
  constexpr double kTol = 1e-4;
  constexpr double kInvPhi = 0.6180339887498949;
  double a = std::max(lambda0_, best_lambda - kCoarse);
  double b = std::min(lambda_g_, best_lambda + kCoarse);
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = dist2(c);
  double fd = dist2(d);
  while (b - a > kTol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = dist2(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = dist2(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace riskpf

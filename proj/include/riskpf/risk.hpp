#pragma once

#include <span>
#include <vector>

#include "riskpf/prediction.hpp"

namespace riskpf {

struct SeverityParams {
  double m_e{1000.0};  // kg
  double m_o{1000.0};  // kg
};

// Differential kinetic energy of the two actors, in Joules. Positions and headings do
// not enter; the collision condition is handled separately by the indicator.
inline double severity(double v_e, double v_o, const SeverityParams& p) {
  return 0.5 * std::abs(p.m_e * v_e * v_e - p.m_o * v_o * v_o);
}

// One ego-side risk evaluation point against an object belief.
struct RiskQuery {
  Vec2 q_e;
  double v_e{};
  double r_e{1.5};
  double r_o{1.5};
  ObjectBelief belief;
  SeverityParams masses;
};

// Monte-Carlo estimate of the expected collision severity: mean of indicator-weighted
// severities over the sample set. Deterministic given the samples.
double mcs_risk(const RiskQuery& query, std::span<const ObjectSample> samples);

// Repeated worst-case queries against one belief. The grid maximization factors
// exactly: severity is position-free and the indicator is velocity-free, so the
// result is (max severity over the velocity grid) gated by whether any position grid
// point collides. The position test reduces to the nearest lattice point.
class WorstCaseEvaluator {
 public:
  WorstCaseEvaluator(const ObjectBelief& belief, int grid_points, double r_e, double r_o,
                     const SeverityParams& masses);

  double risk(const Vec2& q_e, double v_e) const;

 private:
  bool any_position_collides(const Vec2& q_e) const;

  std::vector<double> xs_, ys_;
  double mo_v2_min_{};
  double mo_v2_max_{};
  double r_e_, r_o_;
  SeverityParams masses_;
};

// One-shot worst-case risk: maximum of indicator * severity over the belief's
// uniform truncation grid (grid_points per nondegenerate axis).
double worst_case_risk(const RiskQuery& query, int grid_points);

}  // namespace riskpf

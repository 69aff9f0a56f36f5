#include "riskpf/risk.hpp"

#include <cassert>
#include <cmath>

namespace riskpf {

double mcs_risk(const RiskQuery& query, std::span<const ObjectSample> samples) {
  assert(!samples.empty());
  double acc = 0.0;
  for (const ObjectSample& s : samples) {
    if (collision_indicator(query.q_e, s.q, query.r_e, query.r_o)) {
      acc += severity(query.v_e, s.v, query.masses);
    }
  }
  return acc / static_cast<double>(samples.size());
}

WorstCaseEvaluator::WorstCaseEvaluator(const ObjectBelief& belief, int grid_points, double r_e,
                                       double r_o, const SeverityParams& masses)
    : xs_(grid_axis(belief.q_lo.c1, belief.q_hi.c1, grid_points)),
      ys_(grid_axis(belief.q_lo.c2, belief.q_hi.c2, grid_points)),
      r_e_(r_e),
      r_o_(r_o),
      masses_(masses) {
  const std::vector<double> vs = grid_axis(belief.v_lo, belief.v_hi, grid_points);
  mo_v2_min_ = mo_v2_max_ = masses.m_o * vs.front() * vs.front();
  for (double v : vs) {
    const double e = masses.m_o * v * v;
    mo_v2_min_ = std::min(mo_v2_min_, e);
    mo_v2_max_ = std::max(mo_v2_max_, e);
  }
}

namespace {

// Indices of the up-to-three lattice values bracketing x's nearest neighbor. The
// float rounding of the index is off by at most one, so scanning i-1..i+1 always
// covers the true nearest point.
inline void nearest_indices(const std::vector<double>& axis, double x, int out[3], int* n_out) {
  const int n = static_cast<int>(axis.size());
  if (n == 1) {
    out[0] = 0;
    *n_out = 1;
    return;
  }
  const double h = (axis.back() - axis.front()) / (n - 1);
  int i = static_cast<int>(std::lround((x - axis.front()) / h));
  i = std::clamp(i, 0, n - 1);
  int m = 0;
  for (int j = std::max(0, i - 1); j <= std::min(n - 1, i + 1); ++j) out[m++] = j;
  *n_out = m;
}

}  // namespace

bool WorstCaseEvaluator::any_position_collides(const Vec2& q_e) const {
  int ix[3], iy[3], nx, ny;
  nearest_indices(xs_, q_e.c1, ix, &nx);
  nearest_indices(ys_, q_e.c2, iy, &ny);
  for (int a = 0; a < nx; ++a) {
    for (int b = 0; b < ny; ++b) {
      if (collision_indicator(q_e, {xs_[static_cast<std::size_t>(ix[a])],
                                    ys_[static_cast<std::size_t>(iy[b])]},
                              r_e_, r_o_)) {
        return true;
      }
    }
  }
  return false;
}

double WorstCaseEvaluator::risk(const Vec2& q_e, double v_e) const {
  if (!any_position_collides(q_e)) return 0.0;
  const double a = masses_.m_e * v_e * v_e;
  // max_j |a - b_j| over the velocity grid is attained at the extreme b values.
  return 0.5 * std::max(std::abs(a - mo_v2_min_), std::abs(a - mo_v2_max_));
}

double worst_case_risk(const RiskQuery& query, int grid_points) {
  const WorstCaseEvaluator eval(query.belief, grid_points, query.r_e, query.r_o, query.masses);
  return eval.risk(query.q_e, query.v_e);
}

}  // namespace riskpf

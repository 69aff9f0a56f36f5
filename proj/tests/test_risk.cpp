#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "riskpf/risk.hpp"

using namespace riskpf;

namespace {

// Exhaustive grid maximization; reference for the factored fast path.
double worst_case_brute(const RiskQuery& q, int points) {
  double best = 0.0;
  for (const ObjectSample& s : grid(q.belief, points)) {
    if (collision_indicator(q.q_e, s.q, q.r_e, q.r_o)) {
      best = std::max(best, severity(q.v_e, s.v, q.masses));
    }
  }
  return best;
}

ObjectBelief random_belief(RngStream& rng) {
  ObjectBelief b;
  const double cx = rng.uniform(-5, 5), cy = rng.uniform(-5, 5);
  const double wx = rng.uniform(0.0, 4.0), wy = rng.uniform(0.0, 4.0);
  b.mean_config = make_configuration(cx, cy, 0.0);
  b.mean_v = rng.uniform(-3, 3);
  b.q_lo = {cx - wx, cy - wy};
  b.q_hi = {cx + wx, cy + wy};
  const double wv = rng.uniform(0.0, 6.0);
  b.v_lo = b.mean_v - wv;
  b.v_hi = b.mean_v + wv;
  b.sigma = {rng.uniform(0, 2), rng.uniform(0, 2), rng.uniform(0, 2)};
  return b;
}

}  // namespace

TEST_CASE("severity is the differential kinetic energy") {
  const SeverityParams p{1000.0, 1000.0};
  CHECK(severity(4.0, 3.0, p) == doctest::Approx(3500.0));
  CHECK(severity(3.0, 3.0, p) == doctest::Approx(0.0));
  CHECK(severity(0.0, 5.0, p) == doctest::Approx(12500.0));
  CHECK(severity(-2.0, 2.0, p) == doctest::Approx(0.0));  // speeds enter squared
}

TEST_CASE("mcs_risk basics") {
  SUBCASE("no sample in range gives zero") {
    RiskQuery q{{0, 0}, 4.0, 1.5, 1.5, {}, {1000, 1000}};
    std::vector<ObjectSample> samples{{{10, 0}, 3.0}, {{0, -8}, 1.0}};
    CHECK(mcs_risk(q, samples) == 0.0);
  }
  SUBCASE("all colliding at one velocity gives the plain severity") {
    RiskQuery q{{0, 0}, 4.0, 1.5, 1.5, {}, {1000, 1000}};
    std::vector<ObjectSample> samples(7, ObjectSample{{1.0, 0.5}, 3.0});
    CHECK(mcs_risk(q, samples) == doctest::Approx(3500.0));
  }
  SUBCASE("point-mass belief is exact for any sample count") {
    ObjectBelief b = make_measured_belief({2.9, 0.0, 0.0}, 0.0, {0, 0, 0}, 0.0, 0.0);
    RiskQuery q{{0, 0}, 2.0, 1.5, 1.5, b, {1000, 1000}};
    for (int j : {1, 17, 500}) {
      RngStream rng(5);
      const auto samples = sample(b, j, rng);
      CHECK(mcs_risk(q, samples) == doctest::Approx(2000.0));
    }
  }
  SUBCASE("adding a high-severity colliding sample cannot lower the estimate") {
    RiskQuery q{{0, 0}, 4.0, 1.5, 1.5, {}, {1000, 1000}};
    std::vector<ObjectSample> samples{{{1, 0}, 3.0}, {{4, 4}, 0.0}, {{0, 1}, 2.0}};
    const double before = mcs_risk(q, samples);
    samples.push_back({{0.5, 0.5}, 5.0});  // severity 4500 > current mean
    CHECK(mcs_risk(q, samples) >= before);
  }
}

TEST_CASE("worst_case_risk basics") {
  SUBCASE("belief box out of range gives zero") {
    ObjectBelief b = make_measured_belief({50.0, 0.0, 0.0}, 3.0, {0, 0, 0}, -5.0, 5.0);
    b.q_lo = {45, -5};
    b.q_hi = {55, 5};
    RiskQuery q{{0, 0}, 4.0, 1.5, 1.5, b, {1000, 1000}};
    CHECK(worst_case_risk(q, 40) == 0.0);

    RngStream rng(3);
    CHECK(mcs_risk(q, sample(b, 200, rng)) == 0.0);
  }
  SUBCASE("point box at the ego with the case-study velocity interval") {
    ObjectBelief b = make_measured_belief({0.0, 0.0, 0.0}, 0.0, {0, 0, 0}, -5.0, 5.0);
    RiskQuery q{{0, 0}, 0.0, 1.5, 1.5, b, {1000, 1000}};
    CHECK(worst_case_risk(q, 40) == doctest::Approx(12500.0));  // attained at |v_o| = 5
  }
  SUBCASE("grown boxes never shrink the bound") {
    ObjectBelief b = make_measured_belief({4.0, 1.0, 0.0}, 2.0, {0, 0, 0}, -1.0, 3.0);
    RiskQuery q{{0, 0}, 4.0, 1.5, 1.5, b, {1000, 1000}};
    double prev = worst_case_risk(q, 17);
    for (int i = 0; i < 6; ++i) {
      q.belief = grow(q.belief, UncertaintyGrowth::uniform(0.5, 1.0));
      const double cur = worst_case_risk(q, 17);
      CHECK(cur >= prev);
      prev = cur;
    }
  }
}

TEST_CASE("factored worst case equals the exhaustive grid maximum") {
  RngStream rng(314159);
  int nonzero = 0;
  for (int trial = 0; trial < 60; ++trial) {
    RiskQuery q;
    q.belief = random_belief(rng);
    q.q_e = {q.belief.mean_config.c1 + rng.uniform(-6, 6),
             q.belief.mean_config.c2 + rng.uniform(-6, 6)};
    q.v_e = rng.uniform(-5, 10);
    q.r_e = 1.5;
    q.r_o = 1.5;
    q.masses = {1000, 1000};
    const int points = 2 + (trial % 9);
    const double fast = worst_case_risk(q, points);
    const double brute = worst_case_brute(q, points);
    CHECK(fast == brute);  // exact, not approximate
    if (brute > 0.0) ++nonzero;
  }
  CHECK(nonzero > 10);  // the sweep must exercise colliding geometry
}

TEST_CASE("worst case dominates MCS on constructed cases") {
  // Constructed so the support maximum sits at grid points: the ego position lies
  // inside the box (the nearest lattice point then collides) and v_e = 0 puts the
  // severity maximum at a velocity-interval endpoint.
  RngStream rng(99);
  for (int trial = 0; trial < 20; ++trial) {
    ObjectBelief b = random_belief(rng);
    RiskQuery q;
    q.belief = b;
    q.q_e = {std::clamp(b.mean_config.c1 + rng.uniform(-3, 3), b.q_lo.c1, b.q_hi.c1),
             std::clamp(b.mean_config.c2 + rng.uniform(-3, 3), b.q_lo.c2, b.q_hi.c2)};
    q.v_e = 0.0;
    q.masses = {1000, 1000};
    const auto samples = sample(b, 300, rng);
    CHECK(worst_case_risk(q, 40) >= mcs_risk(q, samples));
  }
}

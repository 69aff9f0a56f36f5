#include <cmath>

#include "doctest.h"
#include "riskpf/prediction.hpp"

using namespace riskpf;

namespace {

ObjectBelief case_study_belief() {
  return make_measured_belief({5.0, -5.0, kPi / 2.0}, 3.0, {0, 0, 0}, -5.0, 5.0);
}

// Analytic mean and variance of a truncated normal on [lo, hi].
void trunc_moments(double mu, double sigma, double lo, double hi, double* mean, double* var) {
  const double a = (lo - mu) / sigma;
  const double b = (hi - mu) / sigma;
  const double z = normal_cdf(b) - normal_cdf(a);
  const double pa = normal_pdf(a), pb = normal_pdf(b);
  *mean = mu + sigma * (pa - pb) / z;
  *var = sigma * sigma * (1.0 + (a * pa - b * pb) / z - ((pa - pb) / z) * ((pa - pb) / z));
}

}  // namespace

TEST_CASE("propagate_mean advances the mean by the unicycle model") {
  const ObjectBelief b0 = case_study_belief();
  const EgoInput u_o{3.0, 1e-4};
  const ObjectBelief b1 = propagate_mean(b0, u_o, 0.5);

  const Configuration expect = step(b0.mean_config, u_o, 0.5);
  CHECK(b1.mean_config.c1 == expect.c1);
  CHECK(b1.mean_config.c2 == expect.c2);
  CHECK(b1.mean_config.theta == expect.theta);
  CHECK(b1.mean_v == 3.0);
  CHECK(b1.sigma == b0.sigma);

  // bounds ride along with the mean, widths unchanged
  CHECK(b1.q_lo.c1 - b1.mean_config.c1 == doctest::Approx(b0.q_lo.c1 - b0.mean_config.c1));
  CHECK(b1.q_hi.c2 - b1.mean_config.c2 == doctest::Approx(b0.q_hi.c2 - b0.mean_config.c2));
  CHECK(b1.q_hi.c1 - b1.q_lo.c1 == doctest::Approx(b0.q_hi.c1 - b0.q_lo.c1));
  CHECK(b1.v_hi - b1.v_lo == doctest::Approx(b0.v_hi - b0.v_lo));
  CHECK(b1.mean_config.c1 >= b1.q_lo.c1);
  CHECK(b1.mean_config.c1 <= b1.q_hi.c1);
  CHECK(b1.mean_config.c2 >= b1.q_lo.c2);
  CHECK(b1.mean_config.c2 <= b1.q_hi.c2);

  // heading pi/2, near-zero turn rate: the object moves up by v*dt
  CHECK(b1.mean_config.c2 == doctest::Approx(-3.5).epsilon(1e-6));
  CHECK(b1.mean_config.c1 == doctest::Approx(5.0).epsilon(1e-4));

  // zero input leaves the mean in place
  const ObjectBelief still = propagate_mean(b0, {0.0, 0.0}, 0.5);
  CHECK(still.mean_config.c1 == b0.mean_config.c1);
  CHECK(still.mean_config.c2 == b0.mean_config.c2);

  // two half-steps compose to one step sequence
  const ObjectBelief twice = propagate_mean(propagate_mean(b0, u_o, 0.5), u_o, 0.5);
  const Configuration two = step(step(b0.mean_config, u_o, 0.5), u_o, 0.5);
  CHECK(twice.mean_config.c1 == two.c1);
  CHECK(twice.mean_config.c2 == two.c2);
}

TEST_CASE("grow widens spread and bounds") {
  ObjectBelief b = case_study_belief();
  b.q_lo = {5.0, 5.0};
  b.q_hi = {5.0, 5.0};

  const ObjectBelief g1 = grow(b, UncertaintyGrowth::uniform(0.1, 1.0));
  CHECK(g1.sigma[0] == doctest::Approx(0.1));
  CHECK(g1.sigma[1] == doctest::Approx(0.1));
  CHECK(g1.sigma[2] == doctest::Approx(0.1));
  CHECK(g1.q_lo.c1 == doctest::Approx(4.0));
  CHECK(g1.q_hi.c2 == doctest::Approx(6.0));
  CHECK(g1.v_lo == doctest::Approx(-6.0));
  CHECK(g1.v_hi == doctest::Approx(6.0));

  const ObjectBelief same = grow(b, UncertaintyGrowth{});
  CHECK(same.sigma == b.sigma);
  CHECK(same.q_lo.c1 == b.q_lo.c1);
  CHECK(same.v_hi == b.v_hi);

  // n applications equal a single n-fold increment
  ObjectBelief iter = b;
  for (int i = 0; i < 5; ++i) iter = grow(iter, UncertaintyGrowth::uniform(0.8, 2.0));
  const ObjectBelief once = grow(b, UncertaintyGrowth::uniform(4.0, 10.0));
  CHECK(iter.sigma[0] == doctest::Approx(once.sigma[0]).epsilon(1e-12));
  CHECK(iter.q_lo.c2 == doctest::Approx(once.q_lo.c2).epsilon(1e-12));
  CHECK(iter.v_hi == doctest::Approx(once.v_hi).epsilon(1e-12));
}

TEST_CASE("sampling a point mass returns the mean") {
  const ObjectBelief b = case_study_belief();
  RngStream rng(11);
  for (const ObjectSample& s : sample(b, 50, rng)) {
    CHECK(s.q.c1 == 5.0);
    CHECK(s.q.c2 == -5.0);
    CHECK(s.v == 3.0);
  }
}

TEST_CASE("samples respect the truncation box and replay deterministically") {
  ObjectBelief b = case_study_belief();
  for (int i = 0; i < 3; ++i) b = grow(b, UncertaintyGrowth::uniform(1.5, 3.0));

  RngStream rng_a(42);
  RngStream rng_b(42);
  const auto sa = sample(b, 500, rng_a);
  const auto sb = sample(b, 500, rng_b);
  for (std::size_t i = 0; i < sa.size(); ++i) {
    CHECK(sa[i].q.c1 == sb[i].q.c1);
    CHECK(sa[i].q.c2 == sb[i].q.c2);
    CHECK(sa[i].v == sb[i].v);
    CHECK(sa[i].q.c1 >= b.q_lo.c1);
    CHECK(sa[i].q.c1 <= b.q_hi.c1);
    CHECK(sa[i].q.c2 >= b.q_lo.c2);
    CHECK(sa[i].q.c2 <= b.q_hi.c2);
    CHECK(sa[i].v >= b.v_lo);
    CHECK(sa[i].v <= b.v_hi);
  }
}

TEST_CASE("sample mean matches the truncated-normal moments") {
  // asymmetric truncation so the mean shift is material
  ObjectBelief b;
  b.mean_config = make_configuration(1.0, -2.0, 0.0);
  b.mean_v = 2.0;
  b.sigma = {2.0, 1.5, 1.0};
  b.q_lo = {-1.0, -3.0};
  b.q_hi = {6.0, 0.5};
  b.v_lo = 0.0;
  b.v_hi = 2.5;

  const int n = 1000000;
  RngStream rng(2024);
  const auto samples = sample(b, n, rng);

  double acc_c1 = 0.0, acc_v = 0.0;
  for (const ObjectSample& s : samples) {
    acc_c1 += s.q.c1;
    acc_v += s.v;
  }
  double mean_c1, var_c1, mean_v, var_v;
  trunc_moments(1.0, 2.0, -1.0, 6.0, &mean_c1, &var_c1);
  trunc_moments(2.0, 1.0, 0.0, 2.5, &mean_v, &var_v);

  CHECK(std::abs(acc_c1 / n - mean_c1) < 3.0 * std::sqrt(var_c1 / n));
  CHECK(std::abs(acc_v / n - mean_v) < 3.0 * std::sqrt(var_v / n));
}

TEST_CASE("grid enumerates the truncation box") {
  ObjectBelief b;
  b.mean_config = make_configuration(0.5, 0.5, 0.0);
  b.mean_v = 0.0;
  b.q_lo = {0.0, 0.0};
  b.q_hi = {1.0, 1.0};
  b.v_lo = -1.0;
  b.v_hi = 1.0;

  const auto corners = grid(b, 2);
  CHECK(corners.size() == 8);
  int at_origin = 0;
  for (const ObjectSample& s : corners) {
    CHECK((s.q.c1 == 0.0 || s.q.c1 == 1.0));
    CHECK((s.v == -1.0 || s.v == 1.0));
    if (s.q.c1 == 0.0 && s.q.c2 == 0.0 && s.v == -1.0) ++at_origin;
  }
  CHECK(at_origin == 1);

  // degenerate position box collapses those axes
  ObjectBelief point = b;
  point.q_lo = point.q_hi = {0.5, 0.5};
  const auto degen = grid(point, 5);
  CHECK(degen.size() == 5);
  for (const ObjectSample& s : degen) {
    CHECK(s.q.c1 == 0.5);
    CHECK(s.q.c2 == 0.5);
  }

  // case-study resolution: 40 points per nondegenerate axis
  ObjectBelief wide = b;
  wide.q_lo = {-2, -2};
  wide.q_hi = {2, 2};
  CHECK(grid(wide, 40).size() == 64000);

  // endpoints are always present
  const auto axis = grid_axis(-2.0, 7.0, 40);
  CHECK(axis.front() == -2.0);
  CHECK(axis.back() == 7.0);
  CHECK(axis.size() == 40);
}

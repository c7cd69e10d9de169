#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "alcove/cartan.hpp"
#include "alcove/radial.hpp"
#include "alcove/rng.hpp"
#include "alcove/sampler.hpp"

#include <cmath>
#include <vector>

using namespace alcove;

namespace {

const double kPi = 3.14159265358979323846;

// k equal increments of the straight path s -> s * a.
std::vector<Vec> line_driver(const GroupModel& g, const Vec& cartan_a, int k) {
  Vec a = Vec::Zero(g.algebra_dim());
  a.head(g.rank) = cartan_a;
  return std::vector<Vec>(k, Vec(a / k));
}

std::vector<Vec> noise_driver(const GroupModel& g, int k, std::uint64_t seed,
                              std::uint64_t stream) {
  RngStream rng(seed, stream);
  const double sig = std::sqrt(1.0 / k);
  std::vector<Vec> incs(k);
  for (Vec& dx : incs) {
    dx = Vec(g.algebra_dim());
    for (int c = 0; c < g.algebra_dim(); ++c) dx(c) = sig * rng.normal();
  }
  return incs;
}

}  // namespace

TEST_CASE("straight drivers: alcove points are fixed, others fold") {
  GroupModel g = build_su_model(2);
  auto alpha_of = [&](const RadialPoint& p) { return pair_root(g.simple_roots[0], p.a); };

  Vec a(1);

  // Interior of A at level 1: the driver's endpoint is its own radial part.
  a << 0.6 / std::sqrt(2.0);
  RadialPoint p = radial_part(g, 1.0, line_driver(g, a, 32));
  CHECK(p.tau == 1.0);
  CHECK(alpha_of(p) == doctest::Approx(0.6).epsilon(1e-12));

  // alpha(a) = 1.25 at level 1 reflects through the far wall to 0.75.
  a << 1.25 / std::sqrt(2.0);
  p = radial_part(g, 1.0, line_driver(g, a, 32));
  CHECK(alpha_of(p) == doctest::Approx(0.75).epsilon(1e-12));

  // The same direction at level 2 is already inside A_2.
  a << 1.5 / std::sqrt(2.0);
  p = radial_part(g, 2.0, line_driver(g, a, 32));
  CHECK(p.tau == 2.0);
  CHECK(alpha_of(p) == doctest::Approx(1.5).epsilon(1e-12));

  // Rank 2: an interior level-1 alcove point survives the round trip.
  GroupModel g3 = build_su_model(3);
  Vec a3 = 0.3 * g3.alcove_vertices[1] + 0.35 * g3.alcove_vertices[2];
  RadialPoint p3 = radial_part(g3, 1.0, line_driver(g3, a3, 32));
  CHECK((p3.a - a3).norm() < 1e-12);
}

TEST_CASE("radial points land in the level-tau alcove for noisy drivers") {
  for (int n : {2, 3}) {
    GroupModel g = build_su_model(n);
    for (double tau : {0.5, 1.0, 3.0}) {
      for (int trial = 0; trial < 25; ++trial) {
        RadialPoint p = radial_part(g, tau, noise_driver(g, 100, 5, trial));
        for (const Vec& alpha : g.positive_roots) {
          double v = pair_root(alpha, p.a);
          CHECK(v >= -1e-12);
          CHECK(v <= tau + 1e-12);
        }
      }
    }
  }
}

TEST_CASE("level scaling identity is exact") {
  for (int n : {2, 3}) {
    GroupModel g = build_su_model(n);
    auto incs = noise_driver(g, 150, 9, n);
    for (double tau : {0.5, 2.0, 3.5}) {
      RadialPoint p = radial_part(g, tau, incs);
      std::vector<Vec> rescaled;
      for (const Vec& dx : incs) rescaled.push_back(Vec(dx / tau));
      GroupPath unit = stochastic_exponential(g, 1.0, rescaled);
      Vec want = tau * orbit_coordinate(g, unit.points.back());
      CHECK((p.a - want).norm() == 0.0);
    }
  }
}

TEST_CASE("radial part is invariant under the gauge action of a smooth loop") {
  GroupModel g = build_su_model(2);
  const int k = 1000;
  const double ds = 1.0 / k;
  const double tau = 2.0;
  auto incs = noise_driver(g, k, 13, 1);
  RadialPoint ref = radial_part(g, tau, incs);

  RngStream rng(13, 500);
  Vec a = Vec::Zero(g.algebra_dim()), b = Vec::Zero(g.algebra_dim());
  for (int c = 0; c < g.algebra_dim(); ++c) {
    a(c) = 0.2 * rng.normal();
    b(c) = 0.2 * rng.normal();
  }
  std::vector<CMat> loop;
  for (int i = 0; i <= k; ++i) {
    double s = static_cast<double>(i) / k;
    loop.push_back(
        group_exp(g, Vec(std::sin(kPi * s) * a + std::sin(2.0 * kPi * s) * b)));
  }
  RadialPoint moved = radial_part(g, tau, gauge_transform(g, incs, loop, tau));
  CHECK((moved.a - ref.a).norm() < 5.0 * ds);
}

TEST_CASE("invalid level is rejected") {
  GroupModel g = build_su_model(2);
  auto incs = noise_driver(g, 10, 1, 1);
  CHECK_THROWS_AS(radial_part(g, 0.0, incs), std::invalid_argument);
  CHECK_THROWS_AS(radial_part(g, -1.0, incs), std::invalid_argument);
}

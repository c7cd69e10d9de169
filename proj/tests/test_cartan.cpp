#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "alcove/cartan.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <vector>

using namespace alcove;

namespace {

const double kPi = 3.14159265358979323846;

Vec vec1(double a) {
  Vec v(1);
  v << a;
  return v;
}

Vec vec2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

// Deterministic special-unitary matrix from a seeded complex Gaussian via QR,
// det corrected by a phase on the last column.
CMat random_special_unitary(int n, unsigned seed) {
  std::srand(seed);
  CMat a = CMat::Random(n, n);
  Eigen::HouseholderQR<CMat> qr(a);
  CMat q = qr.householderQ();
  std::complex<double> det = q.determinant();
  q.col(n - 1) *= std::conj(det) / std::abs(det);
  return q;
}

}  // namespace

TEST_CASE("model invariants for both supported ranks") {
  for (int n : {2, 3}) {
    GroupModel g = build_su_model(n);
    CHECK(g.rank == n - 1);
    CHECK(g.matrix_dim == n);
    CHECK(static_cast<int>(g.positive_roots.size()) == n * (n - 1) / 2);

    // alpha_i(alpha_i^vee) = 2 for every simple pair.
    for (int i = 0; i < g.rank; ++i) {
      CHECK(pair_root(g.simple_roots[i], g.simple_coroots[i]) ==
            doctest::Approx(2.0).epsilon(1e-14));
    }

    // Highest root has squared length 2 in the normalized metric.
    CHECK(g.highest_root.squaredNorm() == doctest::Approx(2.0).epsilon(1e-14));

    // rho is half the sum of positive roots.
    Vec half_sum = Vec::Zero(g.rank);
    for (const Vec& a : g.positive_roots) half_sum += 0.5 * a;
    CHECK((g.rho - half_sum).norm() < 1e-14);

    // The ambient embedding is an isometry onto the sum-zero hyperplane.
    Mat gram = g.embedding.transpose() * g.embedding;
    CHECK((gram - Mat::Identity(g.rank, g.rank)).norm() < 1e-14);
    for (int c = 0; c < g.rank; ++c) CHECK(std::abs(g.embedding.col(c).sum()) < 1e-14);

    // Cartan embeddings commute and are anti-Hermitian traceless.
    Vec x = Vec::Constant(g.rank, 0.3), y = Vec::Constant(g.rank, -0.7);
    CMat cx = g.cartan_embedding(x), cy = g.cartan_embedding(y);
    CHECK((cx * cy - cy * cx).norm() < 1e-14);
    CHECK((cx + cx.adjoint()).norm() < 1e-14);
    CHECK(std::abs(cx.trace()) < 1e-14);
  }
}

TEST_CASE("norms of rho") {
  GroupModel g2 = build_su_model(2);
  CHECK(g2.rho.squaredNorm() == doctest::Approx(0.5).epsilon(1e-14));
  GroupModel g3 = build_su_model(3);
  CHECK(g3.rho.squaredNorm() == doctest::Approx(2.0).epsilon(1e-14));
  // In rank 2 rho coincides with the highest root.
  CHECK((g3.rho - g3.highest_root).norm() < 1e-14);
}

TEST_CASE("build_su_model rejects unsupported sizes") {
  CHECK_THROWS_AS(build_su_model(1), std::invalid_argument);
  CHECK_THROWS_AS(build_su_model(4), std::invalid_argument);
}

TEST_CASE("pair_root basics") {
  GroupModel g = build_su_model(2);
  const Vec& alpha = g.simple_roots[0];
  CHECK(pair_root(alpha, g.simple_coroots[0]) == doctest::Approx(2.0));
  CHECK(pair_root(alpha, Vec::Zero(1)) == 0.0);
  // Metric coordinate 0.5 pairs to sqrt(2)/2 with the root of length sqrt(2).
  CHECK(pair_root(alpha, vec1(0.5)) == doctest::Approx(std::sqrt(2.0) * 0.5));
}

TEST_CASE("alcove vertices evaluate to one on the highest root") {
  for (int n : {2, 3}) {
    GroupModel g = build_su_model(n);
    REQUIRE(static_cast<int>(g.alcove_vertices.size()) == g.rank + 1);
    CHECK(g.alcove_vertices[0].norm() == 0.0);
    for (int i = 1; i <= g.rank; ++i) {
      CHECK(pair_root(g.highest_root, g.alcove_vertices[i]) ==
            doctest::Approx(1.0).epsilon(1e-14));
    }
  }
}

TEST_CASE("folding reaches the alcove and reports the op that does it") {
  GroupModel g2 = build_su_model(2);
  const double L = g2.alcove_vertices[1](0);

  // Already inside: identity op.
  Vec x = vec1(0.3 * L);
  auto [a, op] = fold_to_alcove(g2, x, 1.0);
  CHECK((a - x).norm() < 1e-15);
  CHECK((op.weyl_part - Mat::Identity(1, 1)).norm() < 1e-14);
  CHECK(op.translation.norm() == 0.0);

  // alpha(x) = 1.25 folds to alpha(a) = 0.75 (reflection in the tau=1 wall).
  x = vec1(1.25 / std::sqrt(2.0));
  auto [a2, op2] = fold_to_alcove(g2, x, 1.0);
  CHECK(pair_root(g2.simple_roots[0], a2) == doctest::Approx(0.75).epsilon(1e-12));
  CHECK((op2.apply(x, 1.0) - a2).norm() < 1e-12);

  // Idempotence.
  auto [a3, op3] = fold_to_alcove(g2, a2, 1.0);
  CHECK((a3 - a2).norm() < 1e-14);
  CHECK(op3.translation.norm() == 0.0);
}

TEST_CASE("folding lands in the level-tau alcove for random points") {
  for (int n : {2, 3}) {
    GroupModel g = build_su_model(n);
    std::srand(1234 + n);
    for (double tau : {0.5, 1.0, 2.5}) {
      for (int trial = 0; trial < 200; ++trial) {
        Vec x = 5.0 * Vec::Random(g.rank);
        auto [a, op] = fold_to_alcove(g, x, tau);
        for (const Vec& alpha : g.positive_roots) {
          double v = pair_root(alpha, a);
          CHECK(v >= -1e-12);
          CHECK(v <= tau + 1e-12);
        }
        CHECK((op.apply(x, tau) - a).norm() < 1e-10);
        // The translation is an integer vector in the coroot basis: check it
        // maps to integers under the fundamental-weight pairing.
        for (int i = 0; i < g.rank; ++i) {
          double c = pair_root(g.simple_roots[i], op.translation) / 1.0;
          // alpha_i(coroot lattice) is an even/integer pairing; all we need
          // is integrality of the simple-root values.
          CHECK(std::abs(c - std::round(c)) < 1e-9);
        }
      }
    }
  }
}

TEST_CASE("weyl denominator closed-form values") {
  GroupModel g2 = build_su_model(2);
  // alpha(h) = 1/2 -> sin(pi/2) = 1.
  Vec h = vec1(0.5 / std::sqrt(2.0));
  CHECK(weyl_denominator(g2, h) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(weyl_denominator(g2, Vec::Zero(1)) == 0.0);

  GroupModel g3 = build_su_model(3);
  // alpha_1(h) = alpha_2(h) = 1/3: product sin^2(pi/3) sin(2pi/3).
  Mat rows(2, 2);
  rows.row(0) = g3.simple_roots[0].transpose();
  rows.row(1) = g3.simple_roots[1].transpose();
  Vec h3 = rows.colPivHouseholderQr().solve(vec2(1.0 / 3.0, 1.0 / 3.0));
  double expected = std::sin(kPi / 3.0) * std::sin(kPi / 3.0) * std::sin(2.0 * kPi / 3.0);
  CHECK(weyl_denominator(g3, h3) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(weyl_denominator(g3, Vec::Zero(2)) == 0.0);
}

TEST_CASE("characters: dimensions, special values, class invariance") {
  GroupModel g2 = build_su_model(2);
  auto weights2 = enumerate_dominant_weights(g2, 10.0);

  // lambda = 0 is the trivial representation.
  REQUIRE(weights2[0].coroot_values(0) == 0);
  for (double c : {0.0, 0.17, 0.5}) {
    CHECK(character(g2, weights2[0], vec1(c)) == doctest::Approx(1.0).epsilon(1e-10));
  }

  // Dimension at h = 0: Dynkin label k has dimension k + 1.
  for (const auto& lam : weights2) {
    CHECK(character(g2, lam, Vec::Zero(1)) ==
          doctest::Approx(lam.coroot_values(0) + 1.0).epsilon(1e-9));
    CHECK(weight_dimension(g2, lam) ==
          doctest::Approx(lam.coroot_values(0) + 1.0).epsilon(1e-12));
  }

  // Fundamental character of SU(2) at alpha(h) = 1/3: 2 cos(pi/3) = 1.
  const DominantWeight* fund = nullptr;
  for (const auto& lam : weights2)
    if (lam.coroot_values(0) == 1) fund = &lam;
  REQUIRE(fund != nullptr);
  Vec h = vec1((1.0 / 3.0) / std::sqrt(2.0));
  CHECK(character(g2, *fund, h) == doctest::Approx(1.0).epsilon(1e-10));

  GroupModel g3 = build_su_model(3);
  auto weights3 = enumerate_dominant_weights(g3, 8.0);
  // Adjoint (1,1) has dimension 8, fundamental (1,0) dimension 3.
  for (const auto& lam : weights3) {
    int p = lam.coroot_values(0), q = lam.coroot_values(1);
    double dim = (p + 1) * (q + 1) * (p + q + 2) / 2.0;
    CHECK(weight_dimension(g3, lam) == doctest::Approx(dim).epsilon(1e-12));
    CHECK(character(g3, lam, Vec::Zero(2)) == doctest::Approx(dim).epsilon(1e-8));
  }

  // Class-function property: invariant under the extended affine action at
  // level 1 (Weyl part + coroot translation).
  for (int n : {2, 3}) {
    GroupModel g = build_su_model(n);
    auto weights = enumerate_dominant_weights(g, 6.0);
    auto ball = extended_weyl_ball(g, 2.5);
    Vec h0 = Vec::Constant(g.rank, 0.21);
    for (const auto& lam : weights) {
      std::complex<double> ref = character_complex(g, lam, h0);
      for (const auto& op : ball) {
        std::complex<double> moved = character_complex(g, lam, op.apply(h0, 1.0));
        CHECK(std::abs(moved - ref) < 1e-9);
      }
    }
  }
}

TEST_CASE("dominant weight enumeration: cutoffs, order, prefix property") {
  GroupModel g2 = build_su_model(2);
  auto only_trivial = enumerate_dominant_weights(g2, 0.0);
  REQUIRE(only_trivial.size() == 1);
  CHECK(only_trivial[0].coroot_values(0) == 0);
  CHECK(only_trivial[0].energy == 0.0);

  // ||lambda + rho||^2 - ||rho||^2 = ((k+1)^2 - 1)/2 <= 5 gives k in {0,1,2}.
  auto w5 = enumerate_dominant_weights(g2, 5.0);
  REQUIRE(w5.size() == 3);
  for (int k = 0; k < 3; ++k) {
    CHECK(w5[k].coroot_values(0) == k);
    CHECK(w5[k].energy == doctest::Approx(((k + 1.0) * (k + 1.0) - 1.0) / 2.0));
  }

  for (int n : {2, 3}) {
    GroupModel g = build_su_model(n);
    auto small = enumerate_dominant_weights(g, 4.0);
    auto large = enumerate_dominant_weights(g, 12.0);
    REQUIRE(small.size() <= large.size());
    for (std::size_t i = 0; i < small.size(); ++i) {
      CHECK((small[i].coroot_values - large[i].coroot_values).norm() == 0);
    }
    for (std::size_t i = 1; i < large.size(); ++i) {
      CHECK(large[i].energy >= large[i - 1].energy);
      CHECK(large[i].energy <= 12.0);
    }
  }
}

TEST_CASE("extended Weyl ball sizes and structure") {
  GroupModel g2 = build_su_model(2);
  CHECK(extended_weyl_ball(g2, 0.0).size() == 2);
  // Coroot length sqrt(2): translations m in {-2..2} paired with |W| = 2.
  CHECK(extended_weyl_ball(g2, 3.0).size() == 10);

  GroupModel g3 = build_su_model(3);
  CHECK(extended_weyl_ball(g3, 0.0).size() == 6);

  for (int n : {2, 3}) {
    GroupModel g = build_su_model(n);
    for (const auto& op : extended_weyl_ball(g, 2.0)) {
      // Weyl part is one of the group's matrices with the matching sign.
      bool found = false;
      for (std::size_t w = 0; w < g.weyl_matrices.size(); ++w) {
        if ((op.weyl_part - g.weyl_matrices[w]).norm() < 1e-12) {
          CHECK(op.det == g.weyl_signs[w]);
          found = true;
        }
      }
      CHECK(found);
      // Translation lies in the coroot lattice: its ambient image is integer.
      Vec amb = g.to_ambient(op.translation);
      for (int i = 0; i < g.matrix_dim; ++i) {
        CHECK(std::abs(amb(i) - std::round(amb(i))) < 1e-9);
      }
    }
  }
}

TEST_CASE("cartan exponential special points") {
  GroupModel g2 = build_su_model(2);
  CMat id = CMat::Identity(2, 2);
  CHECK((exp_cartan(g2, Vec::Zero(1)) - id).norm() < 1e-14);
  // Coroots exponentiate to the identity (period lattice).
  CHECK((exp_cartan(g2, g2.simple_coroots[0]) - id).norm() < 1e-12);
  // alpha(x) = 1 gives the center element -I.
  Vec x = vec1(1.0 / std::sqrt(2.0));
  CHECK((exp_cartan(g2, x) + id).norm() < 1e-12);

  GroupModel g3 = build_su_model(3);
  CMat id3 = CMat::Identity(3, 3);
  for (const Vec& c : g3.simple_coroots) {
    CHECK((exp_cartan(g3, c) - id3).norm() < 1e-12);
  }
  // Diagonal in the defining representation.
  CMat u = exp_cartan(g3, vec2(0.37, -0.21));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (i != j) CHECK(std::abs(u(i, j)) < 1e-14);
  CHECK(std::abs(u.determinant() - std::complex<double>(1.0, 0.0)) < 1e-12);
}

TEST_CASE("orbit coordinate: special points and conjugation invariance") {
  GroupModel g2 = build_su_model(2);
  CHECK(orbit_coordinate(g2, CMat::Identity(2, 2)).norm() < 1e-12);
  // -I sits on the far alcove wall alpha(a) = 1.
  Vec a = orbit_coordinate(g2, -CMat::Identity(2, 2));
  CHECK(pair_root(g2.simple_roots[0], a) == doctest::Approx(1.0).epsilon(1e-12));

  for (int n : {2, 3}) {
    GroupModel g = build_su_model(n);
    Vec x = Vec::Constant(g.rank, 0.23);
    CMat u = exp_cartan(g, x);
    Vec ref = orbit_coordinate(g, u);
    for (unsigned seed : {11u, 12u, 13u}) {
      CMat q = random_special_unitary(n, seed);
      Vec moved = orbit_coordinate(g, CMat(q * u * q.adjoint()));
      CHECK((moved - ref).norm() < 1e-10);
    }
  }
}

TEST_CASE("orbit coordinate of exp matches alcove folding on a grid") {
  for (int n : {2, 3}) {
    GroupModel g = build_su_model(n);
    std::srand(77 + n);
    for (int trial = 0; trial < 100; ++trial) {
      Vec x = 3.0 * Vec::Random(g.rank);
      Vec folded = fold_to_alcove(g, x, 1.0).first;
      Vec orbit = orbit_coordinate(g, exp_cartan(g, x));
      CHECK((folded - orbit).norm() < 1e-10);
    }
  }
}

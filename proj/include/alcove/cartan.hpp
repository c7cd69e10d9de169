#pragma once

#include <Eigen/Dense>

#include <complex>
#include <utility>
#include <vector>

// Root-system data and Weyl/alcove machinery for SU(2) and SU(3).
//
// Conventions.  The Cartan algebra carries orthonormal "metric" coordinates:
// the Ad-invariant product normalized so the highest root has squared length 2
// is literally the Euclidean dot product on coordinate vectors.  Roots are real
// (group) roots: alpha(x) is dimensionless and the exponential map has period
// lattice = coroot lattice, i.e. exp_cartan(coroot) == identity.
//
// Internally most group-combinatorial work happens in the "ambient" picture:
// coordinates are pushed to the sum-zero hyperplane of R^n (n = matrix_dim)
// where the Weyl group acts by coordinate permutations and the coroot lattice
// is the set of integer sum-zero vectors.  Both are exact in floating point,
// which the alternating kernel sums in kernels.cpp rely on: a signed sum over
// an exact group is an exact killed kernel evaluated at a slightly perturbed
// point, rather than a slightly wrong (and catastrophically non-cancelling)
// sum.

namespace alcove {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using CMat = Eigen::MatrixXcd;

// Element of the extended affine Weyl group W ⋉ (coroot lattice), acting on
// the Cartan algebra at level tau by x -> weyl_part * x + tau * translation.
// `translation` is stored unscaled (an integer combination of simple coroots).
struct ExtendedWeylOp {
  Mat weyl_part;
  Vec translation;
  int det = 1;

  Vec apply(const Vec& x, double tau = 1.0) const {
    return weyl_part * x + tau * translation;
  }
  static ExtendedWeylOp identity(int rank) {
    return {Mat::Identity(rank, rank), Vec::Zero(rank), 1};
  }
};

// Dominant integral weight, stored both as Dynkin labels lambda(alpha_i^vee)
// and as a coordinate covector; `energy` caches ||lambda+rho||^2 - ||rho||^2,
// the heat-semigroup eigenvalue it contributes (up to the 2*pi^2 factor).
struct DominantWeight {
  Eigen::VectorXi coroot_values;
  Vec weight_vector;
  double energy = 0.0;
};

struct GroupModel {
  int rank = 0;        // dimension of the Cartan algebra (n-1 for SU(n))
  int matrix_dim = 0;  // n for SU(n)

  std::vector<Vec> simple_roots;
  std::vector<Vec> simple_coroots;
  std::vector<Vec> positive_roots;
  Vec highest_root;
  Vec rho;
  std::vector<Vec> fundamental_weights;  // dual basis to the simple coroots

  // Vertices of the level-1 alcove: the origin plus rank fundamental
  // coweights (highest_root evaluates to 1 on each non-origin vertex).
  std::vector<Vec> alcove_vertices;

  // Orthonormal embedding of metric coordinates into the sum-zero hyperplane
  // of R^matrix_dim (columns are orthonormal, so it is an isometry).
  Mat embedding;

  // The Weyl group as ambient coordinate permutations with signs, and as
  // metric-coordinate orthogonal matrices (same order).
  std::vector<std::vector<int>> weyl_perms;
  std::vector<int> weyl_signs;
  std::vector<Mat> weyl_matrices;

  Vec to_ambient(const Vec& x) const { return embedding * x; }
  Vec from_ambient(const Vec& v) const { return embedding.transpose() * v; }

  // Anti-Hermitian traceless matrix 2*pi*i*diag(ambient coords of x); its
  // exponential has eigenvalues exp(2*pi*i*eps_j(x)).
  CMat cartan_embedding(const Vec& x) const;

  // Orthonormal basis of the full Lie algebra su(n) in the normalized metric,
  // Cartan directions first.  Used to map R^{dim g} Gaussian coordinates to
  // matrices and back.
  std::vector<CMat> algebra_basis;
  int algebra_dim() const { return matrix_dim * matrix_dim - 1; }
  CMat algebra_from_coords(const Eigen::VectorXd& c) const;
};

GroupModel build_su_model(int n);

// alpha(x) for a covector alpha; with the identity metric this is a plain dot.
inline double pair_root(const Vec& alpha, const Vec& x) { return alpha.dot(x); }

// Product of sin(pi*alpha(h)) over positive roots; vanishes exactly on the
// level-1 alcove walls and is the ground state of the Dirichlet Laplacian.
double weyl_denominator(const GroupModel& g, const Vec& h);

// Fold x into the level-tau alcove {0 <= alpha(x) <= tau} under the extended
// affine Weyl group; returns the folded point and the op that realizes it
// (op.apply(x, tau) == folded point).
std::pair<Vec, ExtendedWeylOp> fold_to_alcove(const GroupModel& g, const Vec& x,
                                              double tau);

// Weyl character of the highest-weight-lambda irreducible at exp(h).  Complex
// in general for SU(3); `character` returns the real part (exact for SU(2)
// and for any conjugation-closed combination).  Singular h (vanishing
// denominator) is handled by a Richardson-extrapolated perturbation along the
// rho direction, except h = 0 which uses the Weyl dimension formula.
std::complex<double> character_complex(const GroupModel& g,
                                       const DominantWeight& lambda,
                                       const Vec& h);
double character(const GroupModel& g, const DominantWeight& lambda, const Vec& h);
double weight_dimension(const GroupModel& g, const DominantWeight& lambda);

// All dominant weights with ||lambda+rho||^2 - ||rho||^2 <= energy_cutoff,
// sorted by that energy (ties broken lexicographically on the Dynkin labels,
// so a smaller cutoff always yields a prefix of a larger one).
std::vector<DominantWeight> enumerate_dominant_weights(const GroupModel& g,
                                                       double energy_cutoff);

// Every w * t_v with v in the coroot lattice, ||v|| <= radius, w in W.
std::vector<ExtendedWeylOp> extended_weyl_ball(const GroupModel& g, double radius);

// exp of cartan_embedding(x): a diagonal special-unitary matrix.
CMat exp_cartan(const GroupModel& g, const Vec& x);

// The unique alcove point whose adjoint orbit contains u: eigenangles on the
// principal branch, projected to the sum-zero plane, folded at level 1.
Vec orbit_coordinate(const GroupModel& g, const CMat& u);

}  // namespace alcove

#include "alcove/cartan.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace alcove {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

// Parity of a permutation given as images p[i].
int permutation_sign(std::vector<int> p) {
  int sign = 1;
  for (std::size_t i = 0; i < p.size(); ++i) {
    while (p[i] != static_cast<int>(i)) {
      std::swap(p[i], p[p[i]]);
      sign = -sign;
    }
  }
  return sign;
}

}  // namespace

CMat GroupModel::cartan_embedding(const Vec& x) const {
  Vec eps = to_ambient(x);
  CMat m = CMat::Zero(matrix_dim, matrix_dim);
  for (int j = 0; j < matrix_dim; ++j)
    m(j, j) = std::complex<double>(0.0, 2.0 * kPi * eps[j]);
  return m;
}

CMat GroupModel::algebra_from_coords(const Eigen::VectorXd& c) const {
  assert(c.size() == algebra_dim());
  CMat m = CMat::Zero(matrix_dim, matrix_dim);
  for (int i = 0; i < algebra_dim(); ++i) m += c[i] * algebra_basis[i];
  return m;
}

GroupModel build_su_model(int n) {
  if (n != 2 && n != 3) throw std::invalid_argument("only SU(2) and SU(3) are built in");

  GroupModel g;
  g.matrix_dim = n;
  g.rank = n - 1;

  // Orthonormal basis of the sum-zero hyperplane (metric coordinates).
  g.embedding = Mat::Zero(n, g.rank);
  if (n == 2) {
    g.embedding.col(0) << 1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0);
  } else {
    g.embedding.col(0) << 1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0), 0.0;
    g.embedding.col(1) << 1.0 / std::sqrt(6.0), 1.0 / std::sqrt(6.0), -2.0 / std::sqrt(6.0);
  }

  // Simple roots alpha_i = eps_i - eps_{i+1}, pulled back to metric coords.
  for (int i = 0; i + 1 < n; ++i) {
    Vec amb = Vec::Zero(n);
    amb[i] = 1.0;
    amb[i + 1] = -1.0;
    g.simple_roots.push_back(g.from_ambient(amb));
  }
  g.simple_coroots = g.simple_roots;  // simply laced, (alpha|alpha) = 2

  // Positive roots eps_j - eps_k, j < k.
  for (int j = 0; j < n; ++j)
    for (int k = j + 1; k < n; ++k) {
      Vec amb = Vec::Zero(n);
      amb[j] = 1.0;
      amb[k] = -1.0;
      g.positive_roots.push_back(g.from_ambient(amb));
    }
  {
    Vec amb = Vec::Zero(n);
    amb[0] = 1.0;
    amb[n - 1] = -1.0;
    g.highest_root = g.from_ambient(amb);  // eps_1 - eps_n
  }

  g.rho = Vec::Zero(g.rank);
  for (const Vec& a : g.positive_roots) g.rho += 0.5 * a;

  // Fundamental weights: (alpha_i | omega_j) = delta_ij, so the omega columns
  // solve R^T * Omega = I with R the matrix of simple-root coordinates.
  Mat root_mat(g.rank, g.rank);
  for (int j = 0; j < g.rank; ++j) root_mat.col(j) = g.simple_roots[j];
  Mat omega = root_mat.transpose().inverse();
  for (int j = 0; j < g.rank; ++j) g.fundamental_weights.push_back(omega.col(j));

  g.alcove_vertices.push_back(Vec::Zero(g.rank));
  for (const Vec& w : g.fundamental_weights)
    g.alcove_vertices.push_back(w / pair_root(g.highest_root, w));

  // Weyl group: all coordinate permutations, in lexicographic order.
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  do {
    g.weyl_perms.push_back(p);
    g.weyl_signs.push_back(permutation_sign(p));
    Mat perm = Mat::Zero(n, n);
    for (int i = 0; i < n; ++i) perm(i, p[i]) = 1.0;  // (w y)_i = y_{p[i]}
    g.weyl_matrices.push_back(g.embedding.transpose() * perm * g.embedding);
  } while (std::next_permutation(p.begin(), p.end()));

  // Orthonormal algebra basis: Cartan directions first, then the rotated and
  // phase-shifted root-space pairs pi*sqrt(2)*(E_jk - E_kj), i*pi*sqrt(2)*(E_jk + E_kj).
  for (int i = 0; i < g.rank; ++i) {
    Vec e = Vec::Zero(g.rank);
    e[i] = 1.0;
    g.algebra_basis.push_back(g.cartan_embedding(e));
  }
  const double c = kPi * std::sqrt(2.0);
  for (int j = 0; j < n; ++j)
    for (int k = j + 1; k < n; ++k) {
      CMat a = CMat::Zero(n, n), b = CMat::Zero(n, n);
      a(j, k) = c;
      a(k, j) = -c;
      b(j, k) = std::complex<double>(0.0, c);
      b(k, j) = std::complex<double>(0.0, c);
      g.algebra_basis.push_back(a);
      g.algebra_basis.push_back(b);
    }

  return g;
}

double weyl_denominator(const GroupModel& g, const Vec& h) {
  double prod = 1.0;
  for (const Vec& a : g.positive_roots) prod *= std::sin(kPi * pair_root(a, h));
  return prod;
}

std::pair<Vec, ExtendedWeylOp> fold_to_alcove(const GroupModel& g, const Vec& x,
                                              double tau) {
  if (!(tau > 0.0)) throw std::invalid_argument("fold_to_alcove needs tau > 0");
  const int n = g.matrix_dim;

  // Work at level 1 in ambient coordinates, where every ingredient of the
  // affine action is exact: W permutes coordinates, the translation lattice is
  // the integer sum-zero vectors, and the affine reflection at the highest
  // wall is swap(first, last) plus (+1, ..., -1).
  Vec y = g.to_ambient(x) / tau;

  // Track z = A y + b with A a signed permutation bookkeeping matrix (always a
  // plain permutation here) and b an integer vector.
  std::vector<int> aperm(n);  // z_i came from y_{aperm[i]}
  std::iota(aperm.begin(), aperm.end(), 0);
  Vec b = Vec::Zero(n);

  // Nearest-ish lattice point: round coordinates, then repair the sum by
  // nudging the entries whose rounding residual is most favourable.
  Vec z(n);
  {
    Eigen::VectorXi m(n);
    int msum = 0;
    for (int i = 0; i < n; ++i) {
      m[i] = static_cast<int>(std::lround(y[i]));
      msum += m[i];
    }
    while (msum != 0) {
      int best = 0;
      double best_gain = 1e300;
      for (int i = 0; i < n; ++i) {
        double cand = y[i] - (m[i] + (msum > 0 ? -1 : 1));
        double cur = y[i] - m[i];
        double gain = cand * cand - cur * cur;
        if (gain < best_gain) {
          best_gain = gain;
          best = i;
        }
      }
      m[best] += (msum > 0 ? -1 : 1);
      msum += (msum > 0 ? -1 : 1);
    }
    for (int i = 0; i < n; ++i) {
      z[i] = y[i] - m[i];
      b[i] = -m[i];
    }
  }

  const int max_steps = 10 * n + 20;
  int step = 0;
  for (; step < max_steps; ++step) {
    // Sort descending, carrying the bookkeeping along.
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](int a_, int b_) { return z[a_] > z[b_]; });
    if (!std::is_sorted(idx.begin(), idx.end())) {
      Vec znew(n), bnew(n);
      std::vector<int> pnew(n);
      for (int i = 0; i < n; ++i) {
        znew[i] = z[idx[i]];
        bnew[i] = b[idx[i]];
        pnew[i] = aperm[idx[i]];
      }
      z = znew;
      b = bnew;
      aperm = pnew;
    }
    if (z[0] - z[n - 1] <= 1.0) break;
    // Affine reflection at the wall theta(z) = 1.
    std::swap(z[0], z[n - 1]);
    std::swap(b[0], b[n - 1]);
    std::swap(aperm[0], aperm[n - 1]);
    z[0] += 1.0;
    z[n - 1] -= 1.0;
    b[0] += 1.0;
    b[n - 1] -= 1.0;
  }
  if (step == max_steps) throw std::runtime_error("alcove fold did not converge");

  Mat perm = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i) perm(i, aperm[i]) = 1.0;

  ExtendedWeylOp op;
  op.weyl_part = g.embedding.transpose() * perm * g.embedding;
  op.translation = g.from_ambient(b);
  op.det = permutation_sign(aperm);
  return {tau * g.from_ambient(z), op};
}

namespace {

// Character by the quotient formula; caller guarantees exp(h) is regular
// enough that the denominator is safely away from zero.
std::complex<double> character_regular(const GroupModel& g, const DominantWeight& lambda,
                                       const Vec& h) {
  const Vec mu = g.to_ambient(Vec(lambda.weight_vector + g.rho));
  const Vec ha = g.to_ambient(h);
  std::complex<double> num(0.0, 0.0);
  for (std::size_t w = 0; w < g.weyl_perms.size(); ++w) {
    double phase = 0.0;
    for (int i = 0; i < g.matrix_dim; ++i) phase += mu[g.weyl_perms[w][i]] * ha[i];
    num += static_cast<double>(g.weyl_signs[w]) *
           std::exp(std::complex<double>(0.0, 2.0 * kPi * phase));
  }
  std::complex<double> den(1.0, 0.0);
  for (const Vec& a : g.positive_roots)
    den *= std::complex<double>(0.0, 2.0) * std::sin(kPi * pair_root(a, h));
  return num / den;
}

}  // namespace

std::complex<double> character_complex(const GroupModel& g, const DominantWeight& lambda,
                                       const Vec& h) {
  if (h.norm() < 1e-14) return {weight_dimension(g, lambda), 0.0};
  double den_mag = 1.0;
  for (const Vec& a : g.positive_roots)
    den_mag *= 2.0 * std::abs(std::sin(kPi * pair_root(a, h)));
  if (den_mag > 1e-8) return character_regular(g, lambda, h);
  // Singular point: perturb along rho (which moves every root pairing off the
  // integers at once) and kill the leading error term by Richardson.
  const double eps = 1e-4;
  std::complex<double> c1 = character_regular(g, lambda, Vec(h + eps * g.rho));
  std::complex<double> c2 = character_regular(g, lambda, Vec(h + 0.5 * eps * g.rho));
  return 2.0 * c2 - c1;
}

double character(const GroupModel& g, const DominantWeight& lambda, const Vec& h) {
  return character_complex(g, lambda, h).real();
}

double weight_dimension(const GroupModel& g, const DominantWeight& lambda) {
  double dim = 1.0;
  for (const Vec& a : g.positive_roots)
    dim *= pair_root(a, Vec(lambda.weight_vector + g.rho)) / pair_root(a, g.rho);
  return dim;
}

std::vector<DominantWeight> enumerate_dominant_weights(const GroupModel& g,
                                                       double energy_cutoff) {
  std::vector<DominantWeight> out;
  const double rho2 = g.rho.squaredNorm();
  // Generous per-label bound: ||lambda+rho||^2 >= c * (k_i+1)^2 with c = 1/3
  // for both ranks (Gram matrices of the fundamental weights).
  const int kmax = static_cast<int>(std::ceil(std::sqrt(3.0 * (energy_cutoff + rho2)))) + 1;

  std::vector<Eigen::VectorXi> labels;
  if (g.rank == 1) {
    for (int k = 0; k <= kmax; ++k) labels.push_back(Eigen::VectorXi::Constant(1, k));
  } else {
    for (int k1 = 0; k1 <= kmax; ++k1)
      for (int k2 = 0; k2 <= kmax; ++k2) {
        Eigen::VectorXi k(2);
        k << k1, k2;
        labels.push_back(k);
      }
  }

  for (const auto& k : labels) {
    Vec lam = Vec::Zero(g.rank);
    for (int i = 0; i < g.rank; ++i) lam += static_cast<double>(k[i]) * g.fundamental_weights[i];
    double energy = (lam + g.rho).squaredNorm() - rho2;
    if (energy <= energy_cutoff) out.push_back({k, lam, energy});
  }

  std::sort(out.begin(), out.end(), [](const DominantWeight& a, const DominantWeight& b) {
    if (a.energy != b.energy) return a.energy < b.energy;
    for (int i = 0; i < a.coroot_values.size(); ++i)
      if (a.coroot_values[i] != b.coroot_values[i]) return a.coroot_values[i] < b.coroot_values[i];
    return false;
  });
  return out;
}

std::vector<ExtendedWeylOp> extended_weyl_ball(const GroupModel& g, double radius) {
  std::vector<ExtendedWeylOp> out;
  const int n = g.matrix_dim;
  const int m = static_cast<int>(std::floor(radius)) + 1;

  // Integer sum-zero ambient vectors within the radius.
  std::vector<Vec> lattice;
  std::vector<int> c(n, 0);
  // Iterate over the first n-1 coordinates; the last is forced.
  const int span = 2 * m + 1;
  long total = 1;
  for (int i = 0; i + 1 < n; ++i) total *= span;
  for (long it = 0; it < total; ++it) {
    long rem = it;
    long sum = 0;
    Vec v(n);
    for (int i = 0; i + 1 < n; ++i) {
      int ci = static_cast<int>(rem % span) - m;
      rem /= span;
      v[i] = ci;
      sum += ci;
    }
    v[n - 1] = static_cast<double>(-sum);
    if (v.norm() <= radius + 1e-12) lattice.push_back(v);
  }

  for (const Vec& v : lattice) {
    Vec vm = g.from_ambient(v);
    for (std::size_t w = 0; w < g.weyl_matrices.size(); ++w)
      out.push_back({g.weyl_matrices[w], vm, g.weyl_signs[w]});
  }
  return out;
}

CMat exp_cartan(const GroupModel& g, const Vec& x) {
  Vec eps = g.to_ambient(x);
  CMat u = CMat::Zero(g.matrix_dim, g.matrix_dim);
  for (int j = 0; j < g.matrix_dim; ++j)
    u(j, j) = std::exp(std::complex<double>(0.0, 2.0 * kPi * eps[j]));
  return u;
}

Vec orbit_coordinate(const GroupModel& g, const CMat& u) {
  Eigen::ComplexEigenSolver<CMat> es(u, /*computeEigenvectors=*/false);
  const int n = g.matrix_dim;
  Vec theta(n);
  for (int j = 0; j < n; ++j) {
    std::complex<double> lam = es.eigenvalues()[j];
    theta[j] = std::atan2(lam.imag(), lam.real()) / (2.0 * kPi);
  }
  // det(u) = 1 forces the angle sum to an integer; strip solver noise in the
  // trace direction, then move the integer onto one sheet so the sum is zero.
  double s = theta.sum();
  long k = std::lround(s);
  theta.array() -= (s - static_cast<double>(k)) / n;
  if (k != 0) {
    int imax = 0;
    theta.maxCoeff(&imax);
    theta[imax] -= static_cast<double>(k);
  }
  return fold_to_alcove(g, g.from_ambient(theta), 1.0).first;
}

}  // namespace alcove

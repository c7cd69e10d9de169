#include "alcove/sampler.hpp"

#include "alcove/rng.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace alcove {

namespace {

constexpr double kPiSqrt2 = 4.442882938158366;  // pi * sqrt(2)

// sin(x)/x with the series branch for small arguments.
double sinc(double x) {
  if (std::abs(x) < 1e-4) {
    double x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sin(x) / x;
}

CMat su2_matrix(const Su2State& s) {
  CMat u(2, 2);
  const std::complex<double> i1(0.0, 1.0);
  u(0, 0) = s.a + i1 * s.uz;
  u(0, 1) = i1 * s.ux + s.uy;
  u(1, 0) = i1 * s.ux - s.uy;
  u(1, 1) = s.a - i1 * s.uz;
  return u;
}

// Principal logarithm of a unitary matrix near the identity by the

// alternating series in (u - 1); falls back to an eigendecomposition when the
// series radius is exceeded.  The result is projected back onto the algebra
// (anti-Hermitian, traceless) to strip rounding residue.
CMat unitary_log(const CMat& u) {
  const int n = static_cast<int>(u.rows());
  CMat d = u - CMat::Identity(n, n);
  CMat l;
  if (d.norm() < 0.5) {
    CMat p = d;
    l = p;
    for (int k = 2; k <= 8; ++k) {
      p = p * d;
      l += (k % 2 == 0 ? -1.0 : 1.0) / static_cast<double>(k) * p;
    }
  } else {
    Eigen::ComplexEigenSolver<CMat> es(u);
    CMat log_d = CMat::Zero(n, n);
    for (int j = 0; j < n; ++j) {
      log_d(j, j) = std::complex<double>(0.0, std::arg(es.eigenvalues()(j)));
    }
    CMat v = es.eigenvectors();
    l = v * log_d * v.inverse();
  }
  l = 0.5 * (l - l.adjoint()).eval();
  l -= (l.trace() / static_cast<double>(n)) * CMat::Identity(n, n);
  return l;
}

}  // namespace

SheetGrid sample_sheet(const GroupModel& g, double ds, double dt, double t_max,
                       std::uint64_t seed, std::uint64_t stream_id) {
  if (!(ds > 0.0) || !(dt > 0.0) || !(t_max > 0.0)) {
    throw std::invalid_argument("sample_sheet: ds, dt, t_max must be positive");
  }
  SheetGrid grid;
  grid.ds = ds;
  grid.dt = dt;
  grid.s_steps = static_cast<int>(std::lround(1.0 / ds));
  grid.t_steps = static_cast<int>(std::lround(t_max / dt));
  if (std::abs(grid.s_steps * ds - 1.0) > 1e-9 || grid.s_steps < 1) {
    throw std::invalid_argument("sample_sheet: ds must divide 1");
  }
  if (std::abs(grid.t_steps * dt - t_max) > 1e-9 || grid.t_steps < 1) {
    throw std::invalid_argument("sample_sheet: dt must divide t_max");
  }
  grid.seed = seed;
  grid.stream_id = stream_id;

  const int dim = g.algebra_dim();
  const double sd = std::sqrt(ds * dt);
  RngStream rng(seed, stream_id);
  grid.cells.reserve(static_cast<std::size_t>(grid.s_steps) * grid.t_steps);
  // Draw order is pinned (t slow, s fast, coordinate fastest) so a grid is a
  // pure function of (seed, stream_id).
  for (int j = 0; j < grid.t_steps; ++j) {
    for (int i = 0; i < grid.s_steps; ++i) {
      Vec c(dim);
      for (int d = 0; d < dim; ++d) c[d] = sd * rng.normal();
      grid.cells.push_back(std::move(c));
    }
  }
  return grid;
}

void su2_apply_increment(Su2State& s, double c0, double c1, double c2, double inv_tau) {
  // algebra_from_coords(c) = i pi sqrt(2) (c2 sigma1 + c1 sigma2 + c0 sigma3).
  const double wx = kPiSqrt2 * inv_tau * c2;
  const double wy = kPiSqrt2 * inv_tau * c1;
  const double wz = kPiSqrt2 * inv_tau * c0;
  const double theta = std::sqrt(wx * wx + wy * wy + wz * wz);
  const double b = std::cos(theta), f = sinc(theta);
  const double vx = f * wx, vy = f * wy, vz = f * wz;
  // (a, u) (b, v) = (a b - u.v, a v + b u - u x v).
  const Su2State out{
      s.a * b - (s.ux * vx + s.uy * vy + s.uz * vz),
      s.a * vx + b * s.ux - (s.uy * vz - s.uz * vy),
      s.a * vy + b * s.uy - (s.uz * vx - s.ux * vz),
      s.a * vz + b * s.uz - (s.ux * vy - s.uy * vx),
  };
  // Renormalize: drift of the unit norm is below 1e-16 per step but the
  // Monte Carlo paths take millions of steps across an experiment.
  const double nrm = std::sqrt(out.a * out.a + out.ux * out.ux + out.uy * out.uy +
                               out.uz * out.uz);
  s.a = out.a / nrm;
  s.ux = out.ux / nrm;
  s.uy = out.uy / nrm;
  s.uz = out.uz / nrm;
}

Su2State su2_inverse(const Su2State& s) { return {s.a, -s.ux, -s.uy, -s.uz}; }

Su2State su2_multiply(const Su2State& l, const Su2State& r) {
  return {
      l.a * r.a - (l.ux * r.ux + l.uy * r.uy + l.uz * r.uz),
      l.a * r.ux + r.a * l.ux - (l.uy * r.uz - l.uz * r.uy),
      l.a * r.uy + r.a * l.uy - (l.uz * r.ux - l.ux * r.uz),
      l.a * r.uz + r.a * l.uz - (l.ux * r.uy - l.uy * r.ux),
  };
}

double su2_alcove_coordinate(const Su2State& s) {
  const double un = std::sqrt(s.ux * s.ux + s.uy * s.uy + s.uz * s.uz);
  return std::atan2(un, s.a) / kPiSqrt2;
}

Eigen::Matrix3cd su3_exp_hermitian(const Eigen::Matrix3cd& k) {
  using M3 = Eigen::Matrix3cd;
  const std::complex<double> i1(0.0, 1.0);
  const double q = k.trace().real() / 3.0;
  M3 b = k - q * M3::Identity();
  const double p = std::sqrt(std::max((b * b).trace().real() / 6.0, 0.0));
  if (p < 1e-150) {
    return std::exp(i1 * q) * M3::Identity();
  }
  M3 bn = b / p;
  const double r = std::clamp(bn.determinant().real() / 2.0, -1.0, 1.0);
  const double phi = std::acos(r) / 3.0;
  double lam[3];
  for (int j = 0; j < 3; ++j) {
    lam[j] = q + 2.0 * p * std::cos(phi - 2.0 * M_PI * j / 3.0);
  }
  const double gap = std::min({std::abs(lam[0] - lam[1]), std::abs(lam[1] - lam[2]),
                               std::abs(lam[0] - lam[2])});
  // Frobenius covariants lose accuracy like (scale/gap)^2; defer to an
  // iterative eigensolver on near-degenerate spectra (measure ~ gap^2 under
  // the Gaussian increments, so the slow branch is rare).
  if (gap < 1e-2 * (p + std::abs(q))) {
    Eigen::SelfAdjointEigenSolver<M3> es(k);
    M3 d = M3::Zero();
    for (int j = 0; j < 3; ++j) d(j, j) = std::exp(i1 * es.eigenvalues()(j));
    return es.eigenvectors() * d * es.eigenvectors().adjoint();
  }
  M3 out = M3::Zero();
  for (int j = 0; j < 3; ++j) {
    const int j1 = (j + 1) % 3, j2 = (j + 2) % 3;
    M3 pj = (k - lam[j1] * M3::Identity()) * (k - lam[j2] * M3::Identity()) /
            ((lam[j] - lam[j1]) * (lam[j] - lam[j2]));
    out += std::exp(i1 * lam[j]) * pj;
  }
  return out;
}

void su3_apply_increment(const GroupModel& g, Eigen::Matrix3cd& u, const Vec& c,
                         double inv_tau) {
  CMat m = g.algebra_from_coords(c);
  // m is anti-Hermitian: m = i k with k Hermitian.
  Eigen::Matrix3cd k = (std::complex<double>(0.0, -1.0) * inv_tau) * m;
  u = (u * su3_exp_hermitian(k)).eval();
}

Vec algebra_coordinates(const GroupModel& g, const CMat& m) {
  const int dim = g.algebra_dim();
  Vec c(dim);
  for (int i = 0; i < dim; ++i) {
    c[i] = -(m * g.algebra_basis[i]).trace().real() / (4.0 * M_PI * M_PI);
  }
  return c;
}

CMat group_exp(const GroupModel& g, const Vec& coords) {
  if (g.matrix_dim == 2) {
    Su2State s;
    su2_apply_increment(s, coords[0], coords[1], coords[2], 1.0);
    return su2_matrix(s);
  }
  if (g.matrix_dim == 3) {
    Eigen::Matrix3cd u = Eigen::Matrix3cd::Identity();
    su3_apply_increment(g, u, coords, 1.0);
    return u;
  }
  // Generic spectral exponential for completeness.
  CMat m = g.algebra_from_coords(coords);
  Eigen::SelfAdjointEigenSolver<CMat> es(std::complex<double>(0.0, -1.0) * m);
  CMat d = CMat::Zero(g.matrix_dim, g.matrix_dim);
  for (int j = 0; j < g.matrix_dim; ++j) {
    d(j, j) = std::exp(std::complex<double>(0.0, es.eigenvalues()(j)));
  }
  return es.eigenvectors() * d * es.eigenvectors().adjoint();
}

GroupPath stochastic_exponential(const GroupModel& g, double tau,
                                 const std::vector<Vec>& increments) {
  if (!(tau > 0.0)) throw std::invalid_argument("stochastic_exponential: tau must be positive");
  GroupPath path;
  path.tau = tau;
  path.points.reserve(increments.size() + 1);
  path.points.push_back(CMat::Identity(g.matrix_dim, g.matrix_dim));
  for (const Vec& dx : increments) {
    // Scale the coordinates, not the exponential, so that paths driven by
    // (tau, x) and (1, x / tau) agree bit for bit.
    path.points.push_back(path.points.back() * group_exp(g, Vec(dx / tau)));
  }
  return path;
}

GroupPath simulate_group_sheet(const GroupModel& g, const SheetGrid& grid,
                               const Vec& gamma, SheetMode mode, double t) {
  const int level = static_cast<int>(std::lround(t / grid.dt));
  if (level < 1 || level > grid.t_steps || std::abs(level * grid.dt - t) > 1e-9) {
    throw std::invalid_argument("simulate_group_sheet: t must be a grid level");
  }
  const double tau = (mode == SheetMode::X) ? 1.0 : t;
  const double drift = (mode == SheetMode::X) ? grid.ds : grid.ds * t;
  // The drift lives in the Cartan algebra; pad it to full algebra coordinates.
  Vec gfull = Vec::Zero(g.algebra_dim());
  gfull.head(gamma.size()) = gamma;
  std::vector<Vec> increments;
  increments.reserve(grid.s_steps);
  for (int i = 0; i < grid.s_steps; ++i) {
    Vec dx = Vec::Zero(g.algebra_dim());
    for (int j = 0; j < level; ++j) dx += grid.cell(i, j);
    dx += drift * gfull;
    increments.push_back(std::move(dx));
  }
  return stochastic_exponential(g, tau, increments);
}

std::vector<Vec> gauge_transform(const GroupModel& g, const std::vector<Vec>& increments,
                                 const std::vector<CMat>& loop, double tau) {
  if (loop.size() != increments.size() + 1) {
    throw std::invalid_argument("gauge_transform: loop must have one point per grid node");
  }
  if ((loop.front() - loop.back()).norm() > 1e-9) {
    throw std::invalid_argument("gauge_transform: loop is not closed");
  }
  std::vector<Vec> out;
  out.reserve(increments.size());
  for (std::size_t k = 0; k < increments.size(); ++k) {
    CMat m = g.algebra_from_coords(increments[k]);
    CMat conj = loop[k] * m * loop[k].adjoint();
    CMat step = unitary_log(loop[k + 1] * loop[k].adjoint());
    out.push_back(algebra_coordinates(g, CMat(conj - tau * step)));
  }
  return out;
}

std::vector<Vec> sample_entrance(const GroupModel& g, const KernelConfig& cfg,
                                 const Vec& gamma, double t, int n, std::uint64_t seed) {
  if (n < 0) throw std::invalid_argument("sample_entrance: n must be nonnegative");
  EntranceLaw law(g, cfg, gamma, t);

  // Envelope from a dense scan of the (continuous, boundary-vanishing)
  // density over the simplex A_t.
  double peak = 0.0;
  if (g.rank == 1) {
    const Vec v1 = t * g.alcove_vertices[1];
    const int m = 512;
    for (int i = 1; i < m; ++i) {
      peak = std::max(peak, law.density(Vec(v1 * (static_cast<double>(i) / m))));
    }
  } else {
    const Vec v1 = t * g.alcove_vertices[1];
    const Vec v2 = t * g.alcove_vertices[2];
    const int m = 96;
    for (int i = 1; i < m; ++i) {
      for (int j = 1; j < m - i; ++j) {
        Vec y = (static_cast<double>(i) / m) * v1 + (static_cast<double>(j) / m) * v2;
        peak = std::max(peak, law.density(y));
      }
    }
  }
  const double envelope = 1.05 * peak;

  RngStream rng(seed, 0xE57A0001ull);
  std::vector<Vec> samples;
  samples.reserve(n);
  while (static_cast<int>(samples.size()) < n) {
    Vec y;
    if (g.rank == 1) {
      y = rng.uniform() * t * g.alcove_vertices[1];
    } else {
      double u = rng.uniform(), v = rng.uniform();
      if (u + v > 1.0) {  // reflect onto the unit simplex
        u = 1.0 - u;
        v = 1.0 - v;
      }
      y = u * t * g.alcove_vertices[1] + v * t * g.alcove_vertices[2];
    }
    const double d = law.density(y);
    if (d > envelope) {
      std::ostringstream msg;
      msg << "sample_entrance: envelope violated: density " << d << " > envelope "
          << envelope << " at y = [" << y.transpose() << "], t = " << t;
      throw std::runtime_error(msg.str());
    }
    if (rng.uniform() * envelope <= d) samples.push_back(std::move(y));
  }
  return samples;
}

}  // namespace alcove

#include "alcove/kernels.hpp"

#include "alcove/quadrature.hpp"
#include "alcove/real128.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace alcove {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kTwoPiSq = 2.0 * kPi * kPi;

// Integer sum-zero ambient vectors with norm <= radius (the coroot lattice in
// the ambient picture), exact by construction.
std::vector<std::array<int, 3>> sum_zero_lattice(int n, double radius) {
  std::vector<std::array<int, 3>> out;
  const int m = static_cast<int>(std::floor(radius)) + 1;
  if (n == 2) {
    for (int a = -m; a <= m; ++a)
      if (2.0 * a * a <= radius * radius + 1e-9) out.push_back({a, -a, 0});
  } else {
    for (int a = -m; a <= m; ++a)
      for (int b = -m; b <= m; ++b) {
        double n2 = static_cast<double>(a * a + b * b + (a + b) * (a + b));
        if (n2 <= radius * radius + 1e-9) out.push_back({a, b, -a - b});
      }
  }
  return out;
}

struct QuadPoint {
  real128 v[3] = {0, 0, 0};
};

QuadPoint to_quad(const Vec& ambient) {
  QuadPoint p;
  for (int i = 0; i < ambient.size(); ++i) p.v[i] = ambient[i];
  return p;
}

}  // namespace

void validate(const KernelConfig& cfg) {
  if (!(cfg.lattice_radius > 0.0)) throw std::invalid_argument("lattice_radius must be > 0");
  if (!(cfg.weight_energy_cutoff > 0.0))
    throw std::invalid_argument("weight_energy_cutoff must be > 0");
  if (cfg.quadrature_points < 16) throw std::invalid_argument("quadrature_points must be >= 16");
}

bool in_alcove(const GroupModel& g, const Vec& x, double tau, double slack) {
  for (const Vec& a : g.positive_roots) {
    double v = pair_root(a, x);
    if (v < -slack || v > tau + slack) return false;
  }
  return true;
}

double heat_kernel(const GroupModel& g, double t, const Vec& x, const Vec& y) {
  if (!(t > 0.0)) throw std::domain_error("heat_kernel: t must be > 0");
  double d2 = (x - y).squaredNorm();
  return std::pow(2.0 * kPi * t, -0.5 * g.rank) * std::exp(-d2 / (2.0 * t));
}

double u_killed(const GroupModel& g, const KernelConfig& cfg, double t, const Vec& x,
                const Vec& y) {
  if (!(t > 0.0)) throw std::domain_error("u_killed: t must be > 0");
  if (!in_alcove(g, x, 1.0) || !in_alcove(g, y, 1.0))
    throw std::domain_error("u_killed: arguments must lie in the level-1 alcove");

  const int n = g.matrix_dim;
  const Vec X = g.to_ambient(x);
  const Vec Y = g.to_ambient(y);
  // The alternating sum cancels down to the spectral-gap scale
  // exp(-2 pi^2 |rho|^2 t) below its leading term, so the truncation margin
  // must clear both that suppression and the 1e-16 target on what survives.
  const double margin = 2.0 * t * (67.0 + kTwoPiSq * g.rho.squaredNorm() * t);
  double radius = X.norm() + Y.norm() + std::sqrt((X - Y).squaredNorm() + margin) + 1.0;
  radius = std::max(radius, cfg.lattice_radius);
  const auto lattice = sum_zero_lattice(n, radius);

  const QuadPoint Xq = to_quad(X), Yq = to_quad(Y);
  const real128 inv2t = real128(1.0) / (real128(2.0) * real128(t));
  // The identity term bounds the max exponent from below; drop terms far
  // enough under it to sit beneath the quad-precision floor even after the
  // spectral-gap cancellation.
  const double skip = -(X - Y).squaredNorm() / (2.0 * t) - 77.0 -
                      kTwoPiSq * g.rho.squaredNorm() * t;

  real128 sum = 0;
  for (const auto& v : lattice) {
    for (std::size_t w = 0; w < g.weyl_perms.size(); ++w) {
      const auto& p = g.weyl_perms[w];
      double est = 0.0;
      for (int i = 0; i < n; ++i) {
        double d = X[i] - Y[p[i]] - v[i];
        est += d * d;
      }
      if (-est / (2.0 * t) < skip) continue;
      real128 d2 = 0;
      for (int i = 0; i < n; ++i) {
        real128 d = Xq.v[i] - Yq.v[p[i]] - real128(v[i]);
        d2 += d * d;
      }
      real128 term = q_exp(-d2 * inv2t);
      sum += g.weyl_signs[w] > 0 ? term : -term;
    }
  }
  real128 pref = q_exp(real128(-0.5 * g.rank) * q_log(real128(2.0 * kPi) * real128(t)));
  return static_cast<double>(pref * sum);
}

double q_char(const GroupModel& g, const KernelConfig& cfg, double t, const Vec& x,
              const Vec& y) {
  if (!(t > 0.0)) throw std::domain_error("q_char: t must be > 0");
  double cutoff = std::max(cfg.weight_energy_cutoff, 44.0 / (kTwoPiSq * t) + 4.0);
  const auto weights = enumerate_dominant_weights(g, cutoff);
  std::complex<double> sum(0.0, 0.0);
  for (const auto& lam : weights) {
    std::complex<double> c = character_complex(g, lam, Vec(-x)) *
                             character_complex(g, lam, y) *
                             std::exp(-kTwoPiSq * t * lam.energy);
    sum += c;
  }
  double piy = weyl_denominator(g, y);
  return piy * piy * sum.real();
}

double q_doob(const GroupModel& g, const KernelConfig& cfg, double t, const Vec& x,
              const Vec& y) {
  double pix = weyl_denominator(g, x);
  if (pix == 0.0) throw std::domain_error("q_doob: x on the alcove boundary");
  double piy = weyl_denominator(g, y);
  return (piy / pix) * std::exp(kTwoPiSq * g.rho.squaredNorm() * t) *
         u_killed(g, cfg, t, x, y);
}

AffineLambda affine_translation(const AffineLambda& lam, const Vec& alpha) {
  AffineLambda out;
  out.level = lam.level;
  out.finite = lam.finite + lam.level * alpha;
  out.delta_coef = lam.delta_coef - lam.finite.dot(alpha) - 0.5 * alpha.squaredNorm() * lam.level;
  return out;
}

double theta_psi(const GroupModel& g, const KernelConfig& cfg, const Vec& b, double tau,
                 const Vec& a) {
  if (!(tau > 0.0)) throw std::domain_error("theta_psi: tau must be > 0");
  const double pib = weyl_denominator(g, b);
  if (std::abs(pib) < 1e-15) throw std::domain_error("theta_psi: b on an alcove wall");

  const int n = g.matrix_dim;
  const Vec B = g.to_ambient(b);
  const Vec A = g.to_ambient(a);
  // Exponent per (v, alpha): (v(a)|b) + tau (alpha|b) - (v(a)|alpha)
  // - tau |alpha|^2 / 2, a downward parabola in alpha with linear coefficient
  // bounded by tau|b| + |a|; solve for the 42-e-fold radius.
  const double c = tau * B.norm() + A.norm();
  // Same spectral-gap allowance as u_killed, with the Gaussian time 1/tau.
  const double margin = 2.0 * tau * (67.0 + kTwoPiSq * g.rho.squaredNorm() / tau);
  double radius = (c + std::sqrt(c * c + margin)) / tau;
  radius = std::max(radius, cfg.lattice_radius);
  const auto lattice = sum_zero_lattice(n, radius);

  const QuadPoint Bq = to_quad(B), Aq = to_quad(A);
  const real128 tq = tau;

  // First pass in double locates the peak exponent; only terms within the
  // cancellation-aware window of it affect the quad-precision sum.
  std::vector<double> est;
  est.reserve(lattice.size() * g.weyl_perms.size());
  double emax_d = -1e300;
  for (std::size_t w = 0; w < g.weyl_perms.size(); ++w) {
    const auto& p = g.weyl_perms[w];
    double va[3];
    for (int i = 0; i < n; ++i) va[i] = A[p[i]];
    for (const auto& al : lattice) {
      double e = 0.0, a2 = 0.0;
      for (int i = 0; i < n; ++i) {
        const double ai = al[i];
        e += va[i] * B[i] + tau * ai * B[i] - va[i] * ai;
        a2 += ai * ai;
      }
      e -= 0.5 * tau * a2;
      est.push_back(e);
      if (e > emax_d) emax_d = e;
    }
  }
  const double window = 77.0 + kTwoPiSq * g.rho.squaredNorm() / tau;

  real128 sum = 0;
  const real128 emax = emax_d;
  std::size_t idx = 0;
  for (std::size_t w = 0; w < g.weyl_perms.size(); ++w) {
    const auto& p = g.weyl_perms[w];
    real128 va[3];
    for (int i = 0; i < n; ++i) va[i] = Aq.v[p[i]];
    for (const auto& al : lattice) {
      if (est[idx++] < emax_d - window) continue;
      real128 e = 0, a2 = 0;
      for (int i = 0; i < n; ++i) {
        real128 ai = real128(al[i]);
        e += va[i] * Bq.v[i] + tq * ai * Bq.v[i] - va[i] * ai;
        a2 += ai * ai;
      }
      e -= real128(0.5) * tq * a2;
      real128 term = q_exp(e - emax);
      sum += g.weyl_signs[w] > 0 ? term : -term;
    }
  }
  return static_cast<double>(q_exp(emax) * sum / real128(pib));
}

double big_psi(const GroupModel& g, const KernelConfig& cfg, const Vec& gamma, double t,
               const Vec& x) {
  if (!(t > 0.0) || !in_alcove(g, x, t))
    throw std::domain_error("big_psi: (t,x) must lie in the affine chamber");
  return std::exp(-gamma.dot(x)) * theta_psi(g, cfg, gamma, t, x);
}

double psi2_rhs(const GroupModel& g, const KernelConfig& cfg, const Vec& gamma, double t,
                const Vec& x) {
  if (!(t > 0.0) || !in_alcove(g, x, t))
    throw std::domain_error("psi2_rhs: x/t must lie in the alcove");
  Vec xt = x / t;
  double u = u_killed(g, cfg, 1.0 / t, gamma, xt);
  return std::pow(t, -0.5 * g.rank) * u * std::exp(0.5 * t * (gamma - xt).squaredNorm());
}

double w0_kernel(const GroupModel& g, const KernelConfig& cfg, double r, const Vec& x,
                 double t, const Vec& y) {
  if (!(r >= 0.0) || !(t > r)) throw std::domain_error("w0_kernel: need 0 <= r < t");
  if (!in_alcove(g, x, std::max(r, 1e-300)) || !in_alcove(g, y, t))
    throw std::domain_error("w0_kernel: endpoints outside their alcoves");
  if (r == 0.0) return 0.0;

  const int n = g.matrix_dim;
  const Vec X = g.to_ambient(x);
  const Vec Y = g.to_ambient(y);
  // Under y/t, x/r rescaling this is the killed kernel at time 1/r - 1/t, so
  // truncate with that kernel's radius including its spectral-gap allowance.
  const double sigma = 1.0 / r - 1.0 / t;
  const double margin = 2.0 * sigma * (67.0 + kTwoPiSq * g.rho.squaredNorm() * sigma);
  double radius = Y.norm() / t + X.norm() / r +
                  std::sqrt((X / r - Y / t).squaredNorm() + margin) + 1.0;
  radius = std::max(radius, cfg.lattice_radius);
  const auto lattice = sum_zero_lattice(n, radius);

  const QuadPoint Xq = to_quad(X), Yq = to_quad(Y);
  const real128 tq = t, rq = r;
  const real128 y2 = [&] {
    real128 s = 0;
    for (int i = 0; i < n; ++i) s += Yq.v[i] * Yq.v[i];
    return s;
  }();

  std::vector<real128> expo;
  std::vector<int> sign;
  real128 emax = -1e30;
  for (std::size_t w = 0; w < g.weyl_perms.size(); ++w) {
    const auto& p = g.weyl_perms[w];
    for (const auto& v : lattice) {
      // z = w(y/t); both exponents of the summand combined into one.
      real128 z2 = 0, d2 = 0;
      for (int i = 0; i < n; ++i) {
        real128 zi = Yq.v[p[i]] / tq + real128(v[i]);
        real128 di = Xq.v[i] - tq * zi;
        z2 += zi * zi;
        d2 += di * di;
      }
      real128 e = -(y2 - tq * tq * z2) / (real128(2.0) * tq) -
                  d2 / (real128(2.0) * (tq - rq));
      expo.push_back(e);
      sign.push_back(g.weyl_signs[w]);
      if (e > emax) emax = e;
    }
  }
  real128 sum = 0;
  for (std::size_t i = 0; i < expo.size(); ++i) {
    real128 term = q_exp(expo[i] - emax);
    sum += sign[i] > 0 ? term : -term;
  }
  real128 pref = q_exp(real128(-0.5 * g.rank) * q_log(real128(2.0 * kPi) * (tq - rq)) +
                       real128(0.5 * g.rank) * q_log(rq * tq));
  return static_cast<double>(pref * q_exp(emax) * sum);
}

double transition_density(const GroupModel& g, const KernelConfig& cfg, const Vec& gamma,
                          double r, const Vec& x, double t, const Vec& y) {
  if (gamma.norm() < 1e-12) {
    // The density is even in gamma along rho (images flip sign with the
    // longest element while the Gaussian recombines), so the extrapolation
    // (4 f(eps/2) - f(eps))/3 is fourth-order accurate at the limit.
    const double eps = 1e-4;
    Vec dir = g.rho / g.rho.norm();
    double f1 = transition_density(g, cfg, Vec(eps * dir), r, x, t, y);
    double f2 = transition_density(g, cfg, Vec(0.5 * eps * dir), r, x, t, y);
    return (4.0 * f2 - f1) / 3.0;
  }
  if (!(r > 0.0) || !(t > r)) throw std::domain_error("transition_density: need 0 < r < t");
  double psir = big_psi(g, cfg, gamma, r, x);
  if (psir <= 0.0) throw std::domain_error("transition_density: Psi vanishes at the start point");
  double psit = big_psi(g, cfg, gamma, t, y);
  double cm = std::exp(gamma.dot(y - x) - 0.5 * gamma.squaredNorm() * (t - r));
  // w0_kernel carries the (rt)^{n/2} prefactor demanded by its defining
  // identity; the probability kernel divides it back out (row sums then
  // integrate to 1, which the tests verify).
  return (psit / psir) * cm * w0_kernel(g, cfg, r, x, t, y) /
         std::pow(r * t, 0.5 * g.rank);
}

EntranceLaw::EntranceLaw(const GroupModel& g, const KernelConfig& cfg, const Vec& gamma,
                         double t)
    : g_(g), cfg_(cfg), gamma_(gamma), t_(t) {
  if (!(t > 0.0)) throw std::domain_error("EntranceLaw: t must be > 0");
  if (gamma.norm() < 1e-12) {
    // Even-in-gamma Richardson limit along rho (see transition_density).
    const Vec dir = g.rho / g.rho.norm();
    if (g.rank == 1) {
      const double eps = 1e-4;
      rich_.emplace_back(-1.0 / 3.0,
                         std::make_unique<EntranceLaw>(g, cfg, Vec(eps * dir), t));
      rich_.emplace_back(4.0 / 3.0,
                         std::make_unique<EntranceLaw>(g, cfg, Vec(0.5 * eps * dir), t));
    } else {
      const double eps = 1.2e-2;
      rich_.emplace_back(1.0 / 45.0,
                         std::make_unique<EntranceLaw>(g, cfg, Vec(eps * dir), t));
      rich_.emplace_back(-20.0 / 45.0,
                         std::make_unique<EntranceLaw>(g, cfg, Vec(0.5 * eps * dir), t));
      rich_.emplace_back(64.0 / 45.0,
                         std::make_unique<EntranceLaw>(g, cfg, Vec(0.25 * eps * dir), t));
    }
    return;
  }
  auto unnorm = [&](const Vec& y) {
    return big_psi(g_, cfg_, gamma_, t_, y) * weyl_denominator(g_, Vec(y / t_)) *
           std::exp(-(y - t_ * gamma_).squaredNorm() / (2.0 * t_));
  };
  c_ = 1.0 / normalize_over_alcove(g_, cfg_, unnorm, t_);
}

double EntranceLaw::density(const Vec& y) const {
  if (!rich_.empty()) {
    double sum = 0.0;
    for (const auto& [w, law] : rich_) sum += w * law->density(y);
    return sum;
  }
  return c_ * big_psi(g_, cfg_, gamma_, t_, y) * weyl_denominator(g_, Vec(y / t_)) *
         std::exp(-(y - t_ * gamma_).squaredNorm() / (2.0 * t_));
}

double entrance_density(const GroupModel& g, const KernelConfig& cfg, const Vec& gamma,
                        double t, const Vec& y) {
  return EntranceLaw(g, cfg, gamma, t).density(y);
}

double normalize_over_alcove(const GroupModel& g, const KernelConfig& cfg,
                             const std::function<double(const Vec&)>& f, double t) {
  validate(cfg);
  const int panels = cfg.quadrature_points / 8;
  if (g.rank == 1) {
    const Vec vertex = g.alcove_vertices[1];
    const double len = t * vertex.norm();
    const Vec dir = vertex / vertex.norm();
    return integrate([&](double s) { return f(Vec(s * dir)); }, 0.0, len, panels, 8);
  }
  DuffyMap map(Vec(t * g.alcove_vertices[1]), Vec(t * g.alcove_vertices[2]));
  auto masses = duffy_cell_masses(map, f, panels, panels, 8);
  double sum = 0.0;
  for (double m : masses) sum += m;
  return sum;
}

}  // namespace alcove

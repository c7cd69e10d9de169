#include "alcove/stats.hpp"

#include <boost/math/distributions/chi_squared.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace alcove {

KsResult ks_statistic(const std::vector<double>& sorted,
                      const std::function<double(double)>& cdf) {
  const std::size_t n = sorted.size();
  if (n == 0) throw std::invalid_argument("ks_statistic: empty sample");
  if (!std::is_sorted(sorted.begin(), sorted.end())) {
    throw std::invalid_argument("ks_statistic: samples must be sorted ascending");
  }
  double d = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double f = cdf(sorted[i]);
    // Empirical CDF jumps from i/n to (i+1)/n at the sample point.
    d = std::max(d, std::max(f - static_cast<double>(i) / n,
                             static_cast<double>(i + 1) / n - f));
  }
  KsResult out;
  out.d = d;
  out.critical = 1.63 / std::sqrt(static_cast<double>(n));
  out.passed = d < out.critical;
  return out;
}

Chi2Result chi_square_2d(const std::vector<Vec>& samples,
                         const std::function<double(const Vec&)>& density,
                         int bins, const DuffyMap& map) {
  if (bins < 2) throw std::invalid_argument("chi_square_2d: need at least 2 bins per axis");
  if (samples.size() < 50) throw std::invalid_argument("chi_square_2d: sample too small");
  const int cells = bins * bins;
  const double n = static_cast<double>(samples.size());

  // Expected cell masses by per-cell quadrature of the (unnormalized)
  // density, then normalization to the total mass.
  std::vector<double> expected = duffy_cell_masses(map, density, bins, bins);
  double total = 0.0;
  for (double e : expected) total += e;
  if (!(total > 0.0)) throw std::invalid_argument("chi_square_2d: density has no mass");
  for (double& e : expected) e *= n / total;

  std::vector<double> observed(cells, 0.0);
  for (const Vec& y : samples) {
    bool inside = false;
    auto [xi, eta] = map.to_square(y, inside, 1e-9);
    if (!inside) throw std::invalid_argument("chi_square_2d: sample outside the triangle");
    int bx = std::min(static_cast<int>(xi * bins), bins - 1);
    int by = std::min(static_cast<int>(eta * bins), bins - 1);
    observed[static_cast<std::size_t>(bx) * bins + by] += 1.0;
  }

  // Pool cells in row-major scan order until every group expects >= 5; a
  // trailing light group is merged into its predecessor.
  std::vector<double> exp_g, obs_g;
  double ea = 0.0, oa = 0.0;
  for (int c = 0; c < cells; ++c) {
    ea += expected[c];
    oa += observed[c];
    if (ea >= 5.0) {
      exp_g.push_back(ea);
      obs_g.push_back(oa);
      ea = oa = 0.0;
    }
  }
  if (ea > 0.0 || oa > 0.0) {
    if (exp_g.empty()) {
      exp_g.push_back(ea);
      obs_g.push_back(oa);
    } else {
      exp_g.back() += ea;
      obs_g.back() += oa;
    }
  }
  if (exp_g.size() < 2) throw std::invalid_argument("chi_square_2d: too few populated bins");

  Chi2Result out;
  out.pooled_bins = static_cast<int>(exp_g.size());
  out.dof = out.pooled_bins - 1;
  for (std::size_t k = 0; k < exp_g.size(); ++k) {
    const double diff = obs_g[k] - exp_g[k];
    out.statistic += diff * diff / exp_g[k];
  }
  boost::math::chi_squared dist(out.dof);
  out.critical = boost::math::quantile(dist, 0.99);
  out.passed = out.statistic < out.critical;
  return out;
}

double pde_residual(const std::function<double(double, const Vec&)>& f,
                    const Vec& gamma, double t, const Vec& x, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("pde_residual: h must be positive");
  const double f0 = f(t, x);
  double r = (f(t + h, x) - f(t - h, x)) / (2.0 * h);
  for (int i = 0; i < x.size(); ++i) {
    Vec xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    const double fp = f(t, xp), fm = f(t, xm);
    r += gamma[i] * (fp - fm) / (2.0 * h);
    r += 0.5 * (fp - 2.0 * f0 + fm) / (h * h);
  }
  return r;
}

double correlation(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2) {
    throw std::invalid_argument("correlation: need two samples of equal size >= 2");
  }
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx, dy = ys[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace alcove

#include "alcove/quadrature.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

namespace alcove {

std::pair<Vec, Vec> gauss_legendre(int order) {
  if (order < 1) throw std::invalid_argument("gauss_legendre order must be >= 1");
  Vec x(order), w(order);
  // Newton iteration on P_n from the Chebyshev-like initial guess; symmetric
  // pairs are filled together.
  for (int i = 0; i < (order + 1) / 2; ++i) {
    double t = std::cos(3.141592653589793238462643383279502884 * (i + 0.75) / (order + 0.5));
    double p0 = 0.0, p1 = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      p0 = 1.0;
      p1 = 0.0;
      for (int j = 0; j < order; ++j) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * t * p1 - j * p2) / (j + 1.0);
      }
      double dp = order * (t * p0 - p1) / (t * t - 1.0);
      double dt = p0 / dp;
      t -= dt;
      if (std::abs(dt) < 1e-15) {
        p0 = 1.0;
        p1 = 0.0;
        for (int j = 0; j < order; ++j) {
          double p2 = p1;
          p1 = p0;
          p0 = ((2.0 * j + 1.0) * t * p1 - j * p2) / (j + 1.0);
        }
        break;
      }
    }
    double dp = order * (t * p0 - p1) / (t * t - 1.0);
    x[i] = -t;
    x[order - 1 - i] = t;
    double wi = 2.0 / ((1.0 - t * t) * dp * dp);
    w[i] = wi;
    w[order - 1 - i] = wi;
  }
  return {x, w};
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 int panels, int order) {
  auto [x, w] = gauss_legendre(order);
  const double h = (b - a) / panels;
  double sum = 0.0;
  for (int p = 0; p < panels; ++p) {
    double lo = a + p * h;
    double mid = lo + 0.5 * h;
    for (int i = 0; i < order; ++i) sum += w[i] * f(mid + 0.5 * h * x[i]);
  }
  return 0.5 * h * sum;
}

CumulativeDensity::CumulativeDensity(std::function<double(double)> f, double a, double b,
                                     int panels, int order)
    : f_(std::move(f)), a_(a), b_(b), h_((b - a) / panels) {
  std::tie(nodes_, weights_) = gauss_legendre(order);
  prefix_.assign(panels + 1, 0.0);
  for (int p = 0; p < panels; ++p) {
    double lo = a_ + p * h_;
    double mid = lo + 0.5 * h_;
    double s = 0.0;
    for (int i = 0; i < nodes_.size(); ++i) s += weights_[i] * f_(mid + 0.5 * h_ * nodes_[i]);
    prefix_[p + 1] = prefix_[p] + 0.5 * h_ * s;
  }
}

double CumulativeDensity::cdf(double x) const {
  if (x <= a_) return 0.0;
  if (x >= b_) return prefix_.back();
  int j = static_cast<int>((x - a_) / h_);
  if (j >= static_cast<int>(prefix_.size()) - 1) j = static_cast<int>(prefix_.size()) - 2;
  double lo = a_ + j * h_;
  double mid = 0.5 * (lo + x);
  double half = 0.5 * (x - lo);
  double s = 0.0;
  for (int i = 0; i < nodes_.size(); ++i) s += weights_[i] * f_(mid + half * nodes_[i]);
  return prefix_[j] + half * s;
}

double CumulativeDensity::total() const { return prefix_.back(); }

DuffyMap::DuffyMap(const Vec& v1_, const Vec& v2_) : v1(v1_), v2(v2_) {
  Mat corners(2, 2);
  corners.col(0) = v1;
  corners.col(1) = v2;
  corner_inv = corners.inverse();
  abs_det = std::abs(corners.determinant());
}

Vec DuffyMap::to_plane(double xi, double eta) const {
  return xi * ((1.0 - eta) * v1 + eta * v2);
}

std::pair<double, double> DuffyMap::to_square(const Vec& x, bool& inside,
                                              double slack) const {
  Vec ab = corner_inv * x;  // barycentric weights on (v1, v2)
  double xi = ab[0] + ab[1];
  inside = ab[0] >= -slack && ab[1] >= -slack && xi <= 1.0 + slack;
  double eta = xi > 1e-300 ? ab[1] / xi : 0.0;
  if (xi < 0.0) xi = 0.0;
  if (xi > 1.0) xi = 1.0;
  if (eta < 0.0) eta = 0.0;
  if (eta > 1.0) eta = 1.0;
  return {xi, eta};
}

std::vector<double> duffy_cell_masses(const DuffyMap& map,
                                      const std::function<double(const Vec&)>& f,
                                      int nx, int ny, int order) {
  auto [x, w] = gauss_legendre(order);
  std::vector<double> mass(static_cast<std::size_t>(nx) * ny, 0.0);
  const double hx = 1.0 / nx, hy = 1.0 / ny;
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j) {
      double cx = (i + 0.5) * hx, cy = (j + 0.5) * hy;
      double s = 0.0;
      for (int a = 0; a < order; ++a)
        for (int b = 0; b < order; ++b) {
          double xi = cx + 0.5 * hx * x[a];
          double eta = cy + 0.5 * hy * x[b];
          s += w[a] * w[b] * f(map.to_plane(xi, eta)) * map.jacobian(xi);
        }
      mass[static_cast<std::size_t>(i) * ny + j] = 0.25 * hx * hy * s;
    }
  return mass;
}

}  // namespace alcove

#pragma once

#include <Eigen/Dense>

#include <functional>
#include <utility>
#include <vector>

// Deterministic integration utilities: Gauss-Legendre rules, composite 1D
// integrals, running CDFs of densities on an interval, and the Duffy square ->
// triangle map used to integrate and bin over the SU(3) alcove.

namespace alcove {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Nodes and weights on [-1, 1].
std::pair<Vec, Vec> gauss_legendre(int order);

// Composite Gauss-Legendre integral of f over [a, b] with `panels` equal
// subintervals.
double integrate(const std::function<double(double)>& f, double a, double b,
                 int panels, int order = 8);

// Cumulative integral F(x) = int_a^x f of a smooth density, evaluated by full
// panels plus an exact partial-panel rule (no interpolation error).
class CumulativeDensity {
 public:
  CumulativeDensity(std::function<double(double)> f, double a, double b, int panels,
                    int order = 8);
  double cdf(double x) const;     // int_a^min(x,b) f
  double total() const;           // int_a^b f
  double lower() const { return a_; }
  double upper() const { return b_; }

 private:
  std::function<double(double)> f_;
  double a_, b_, h_;
  Vec nodes_, weights_;
  std::vector<double> prefix_;  // prefix_[j] = int_a^{a + j h} f
};

// Affine Duffy parametrization of the triangle (0, v1, v2):
//   x(xi, eta) = xi * ((1 - eta) v1 + eta v2),  (xi, eta) in [0,1]^2,
// with area element xi * |det[v1 v2]| d xi d eta.  Invertible away from the
// apex, which lets the same map drive both quadrature and sample binning.
struct DuffyMap {
  Vec v1, v2;
  Mat corner_inv;  // inverse of [v1 v2]
  double abs_det;

  DuffyMap(const Vec& v1_, const Vec& v2_);
  Vec to_plane(double xi, double eta) const;
  // Returns (xi, eta); sets inside=false if x lies outside the closed triangle
  // by more than `slack`.
  std::pair<double, double> to_square(const Vec& x, bool& inside,
                                      double slack = 1e-12) const;
  double jacobian(double xi) const { return xi * abs_det; }
};

// Mass of f over each quadrature cell of an nx-by-ny grid on the Duffy square
// (row-major, xi index slow).
std::vector<double> duffy_cell_masses(const DuffyMap& map,
                                      const std::function<double(const Vec&)>& f,
                                      int nx, int ny, int order = 8);

}  // namespace alcove

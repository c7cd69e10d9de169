#pragma once

#include "alcove/cartan.hpp"
#include "alcove/quadrature.hpp"

#include <functional>
#include <vector>

// Goodness-of-fit statistics and a finite-difference generator check for the
// Monte Carlo experiments.

namespace alcove {

struct KsResult {
  double d = 0.0;         // Kolmogorov-Smirnov statistic sup |F_n - F|
  double critical = 0.0;  // 1% asymptotic critical value 1.63 / sqrt(n)
  bool passed = false;
};

// One-sample KS test of `sorted` (ascending) against the model CDF.
KsResult ks_statistic(const std::vector<double>& sorted,
                      const std::function<double(double)>& cdf);

struct Chi2Result {
  double statistic = 0.0;
  int dof = 0;
  double critical = 0.0;  // 99% quantile of chi^2(dof)
  bool passed = false;
  int pooled_bins = 0;
};

// Pearson chi-square test of 2-d samples on the triangle described by `map`,
// binned on the Duffy square (bins x bins cells, row-major).  Cells are pooled
// in scan order until each group's expected count is at least 5; `density`
// need not be normalized.
Chi2Result chi_square_2d(const std::vector<Vec>& samples,
                         const std::function<double(const Vec&)>& density,
                         int bins, const DuffyMap& map);

// Central finite-difference residual of (d/dt + gamma . grad + laplacian / 2)
// applied to f at (t, x), step h in every direction.
double pde_residual(const std::function<double(double, const Vec&)>& f,
                    const Vec& gamma, double t, const Vec& x, double h);

// Pearson correlation coefficient.
double correlation(const std::vector<double>& xs, const std::vector<double>& ys);

}  // namespace alcove

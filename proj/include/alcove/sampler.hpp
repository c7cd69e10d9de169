#pragma once

#include "alcove/cartan.hpp"
#include "alcove/kernels.hpp"

#include <cstdint>
#include <vector>

// Brownian sheets on the Lie algebra, Stratonovitch stochastic exponentials,
// the gauge action on driving paths, and exact-law samplers.  Everything is a
// deterministic function of (seed, stream_id): replicas own disjoint streams
// of a counter-based generator, so results do not depend on scheduling.

namespace alcove {

struct SheetGrid {
  double ds = 0.0, dt = 0.0;
  int s_steps = 0, t_steps = 0;
  std::uint64_t seed = 0, stream_id = 0;
  // Row-major cells, t index slow: cell (i_s, j_t) holds the centered Gaussian
  // increment of the sheet over [i ds, (i+1) ds] x [j dt, (j+1) dt] in
  // orthonormal algebra coordinates (variance ds*dt per coordinate).
  std::vector<Vec> cells;

  const Vec& cell(int i_s, int j_t) const {
    return cells[static_cast<std::size_t>(j_t) * s_steps + i_s];
  }
};

SheetGrid sample_sheet(const GroupModel& g, double ds, double dt, double t_max,
                       std::uint64_t seed, std::uint64_t stream_id);

struct GroupPath {
  std::vector<CMat> points;
  double tau = 1.0;
};

// Spectral matrix exponential of algebra_from_coords(c): closed form for
// SU(2), Cardano eigenvalues + Frobenius covariants for SU(3) with an
// iterative fallback when the spectrum nearly degenerates.
CMat group_exp(const GroupModel& g, const Vec& coords);

// Lie-Euler stochastic exponential: X_0 = I, X_{k+1} = X_k exp(dx_k / tau).
GroupPath stochastic_exponential(const GroupModel& g, double tau,
                                 const std::vector<Vec>& increments);

enum class SheetMode { X, Y };

// Path s -> X^gamma_{s,t} (X mode: drift gamma s, tau = 1) or Y^gamma_{s,t}
// (Y mode: drift gamma s t, tau = t) at a grid level t of the sheet.
GroupPath simulate_group_sheet(const GroupModel& g, const SheetGrid& grid,
                               const Vec& gamma, SheetMode mode, double t);

// Gauge action of a closed loop h on a driving path at level tau:
// dx~_k = h_k dx_k h_k^-1 - tau log(h_{k+1} h_k^-1).  The radial part of the
// exponential is invariant under this action.
std::vector<Vec> gauge_transform(const GroupModel& g, const std::vector<Vec>& increments,
                                 const std::vector<CMat>& loop, double tau);

// Exact-law entrance samples on A_t by rejection from the uniform proposal
// with envelope 1.05 * (grid maximum of the density).
std::vector<Vec> sample_entrance(const GroupModel& g, const KernelConfig& cfg,
                                 const Vec& gamma, double t, int n, std::uint64_t seed);

// ---- scalar fast paths (used by the Monte Carlo experiments) ---------------

// SU(2) group element a*I + i u.sigma as a unit quaternion.
struct Su2State {
  double a = 1.0, ux = 0.0, uy = 0.0, uz = 0.0;
};

// Right-multiply by exp(algebra_from_coords(c) / tau).
void su2_apply_increment(Su2State& s, double c0, double c1, double c2, double inv_tau);
Su2State su2_inverse(const Su2State& s);
Su2State su2_multiply(const Su2State& l, const Su2State& r);
// Metric alcove coordinate of the conjugacy class, in [0, 1/sqrt(2)].
double su2_alcove_coordinate(const Su2State& s);

// exp(i K) for Hermitian 3x3 K by Cardano spectral decomposition.
Eigen::Matrix3cd su3_exp_hermitian(const Eigen::Matrix3cd& k);
// Right-multiply u by exp(algebra_from_coords(c) / tau).
void su3_apply_increment(const GroupModel& g, Eigen::Matrix3cd& u, const Vec& c,
                         double inv_tau);

// Orthonormal-basis coordinates of an algebra element (inverse of
// algebra_from_coords).
Vec algebra_coordinates(const GroupModel& g, const CMat& m);

}  // namespace alcove

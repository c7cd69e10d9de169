#include "alcove/radial.hpp"

#include "alcove/sampler.hpp"

#include <stdexcept>

namespace alcove {

RadialPoint radial_part(const GroupModel& g, double tau,
                        const std::vector<Vec>& increments) {
  if (!(tau > 0.0)) throw std::invalid_argument("radial_part: tau must be positive");
  CMat x = CMat::Identity(g.matrix_dim, g.matrix_dim);
  for (const Vec& dx : increments) {
    x = (x * group_exp(g, Vec(dx / tau))).eval();
  }
  RadialPoint out;
  out.tau = tau;
  out.a = tau * orbit_coordinate(g, x);
  return out;
}

}  // namespace alcove

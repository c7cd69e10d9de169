#pragma once

#include "alcove/cartan.hpp"

#include <vector>

// Radial part of a group path: the endpoint's conjugacy-class coordinate,
// rescaled back to the alcove at level tau.

namespace alcove {

struct RadialPoint {
  double tau = 1.0;
  Vec a;  // point of tau * A (metric coordinates)
};

// Radial part of the stochastic exponential driven by `increments` at level
// tau.  Computed from the endpoint alone; the level is carried along so that
// radial_part(tau, x).a == tau * orbit_coordinate(endpoint of (1, x / tau))
// holds exactly (same floating-point operations).
RadialPoint radial_part(const GroupModel& g, double tau,
                        const std::vector<Vec>& increments);

}  // namespace alcove

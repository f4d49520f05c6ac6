#pragma once

#include <memory>

#include "stableflows/measure/trajectory.hpp"

namespace stableflows::measure {

/// A point of a measure space. The fields are interpreted by the owning
/// space: `atom` indexes union components or cyclic atoms, `x` is a
/// coordinate / circle position / path time-offset, `z` an auxiliary
/// coordinate (second factor of product spaces, or a walk's starting site),
/// and `traj` the trajectory of path-space points.
struct Point {
  int atom = 0;
  double x = 0.0;
  double z = 0.0;
  std::shared_ptr<Trajectory> traj;
};

/// Distance used by the flow-axiom property tests: points must share the
/// trajectory/atom identity and agree in the numeric coordinates.
inline double point_distance(const Point& a, const Point& b) {
  if (a.atom != b.atom || a.traj != b.traj) return 1.0;
  double dx = a.x - b.x, dz = a.z - b.z;
  return std::sqrt(dx * dx + dz * dz);
}

}  // namespace stableflows::measure

#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace uavsem {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend Vec3 operator-(const Vec3& a, const Vec3& b) {
    return {a.x - b.x, a.y - b.y, a.z - b.z};
  }
  double norm() const { return std::sqrt(x * x + y * y + z * z); }
};

// UAV co-located with the ground user (or other geometry that leaves the
// elevation angle undefined).
class DegenerateGeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Planned flight: one waypoint per slot, plus the fixed ground-user
// position. Speeds are optional; when absent they are derived from
// consecutive waypoints and the slot duration (the first slot reuses the
// second slot's value, a single-waypoint plan defaults to zero).
struct TrajectoryPlan {
  Vec3 ground_user{0.0, 0.0, 0.0};
  std::vector<Vec3> waypoints;
  double slot_duration_s = 1.0;
  std::vector<double> speeds_mps;  // empty => derive from waypoints

  std::size_t horizon() const { return waypoints.size(); }

  void validate() const {
    if (waypoints.empty()) throw std::invalid_argument("trajectory: no waypoints");
    if (!(slot_duration_s > 0.0))
      throw std::invalid_argument("trajectory: slot duration must be > 0");
    if (ground_user.z != 0.0)
      throw std::invalid_argument("trajectory: ground user must be at z = 0");
    for (std::size_t k = 0; k < waypoints.size(); ++k) {
      if (!(waypoints[k].z > 0.0))
        throw std::invalid_argument("trajectory: waypoint " + std::to_string(k) +
                                    " has non-positive altitude");
    }
    if (!speeds_mps.empty()) {
      if (speeds_mps.size() != waypoints.size())
        throw std::invalid_argument("trajectory: speeds length != horizon");
      for (double v : speeds_mps)
        if (!(v >= 0.0)) throw std::invalid_argument("trajectory: negative speed");
    }
  }

  std::vector<double> effective_speeds() const {
    if (!speeds_mps.empty()) return speeds_mps;
    std::vector<double> v(waypoints.size(), 0.0);
    for (std::size_t k = 1; k < waypoints.size(); ++k)
      v[k] = (waypoints[k] - waypoints[k - 1]).norm() / slot_duration_s;
    if (waypoints.size() > 1) v[0] = v[1];
    return v;
  }
};

struct GeometrySample {
  double distance_m = 0.0;
  double elevation_rad = 0.0;
};

// Slant distance and elevation angle between the UAV at slot `k`
// (0-based) and the ground user.
inline GeometrySample distance_and_elevation(const TrajectoryPlan& traj,
                                             std::size_t k) {
  if (k >= traj.waypoints.size())
    throw std::out_of_range("slot index beyond trajectory horizon");
  const Vec3 delta = traj.waypoints[k] - traj.ground_user;
  const double d = delta.norm();
  if (d == 0.0)
    throw DegenerateGeometryError("UAV at the ground-user position, slot " +
                                  std::to_string(k));
  return {d, std::asin(traj.waypoints[k].z / d)};
}

}  // namespace uavsem

#pragma once

// Virtual curb world: a straight curb on flat ground, a walking agent with
// a body-mounted camera, and ground-truth oracles for distance and angle.
//
// Ground frame: x east, y north, centimeters. Heading 0 faces the curb head
// on; positive headings are turns to the right (clockwise from above).

#include <cmath>
#include <cstdint>
#include <random>

#include "curbalert/geometry.hpp"
#include "curbalert/mask.hpp"

namespace curbalert {

struct AgentPose {
  double x_cm = 0.0;
  double y_cm = 300.0;
  double heading_deg = 0.0;
  bool operator==(const AgentPose&) const = default;
};

/// Infinite straight curb through `point`, running along `direction_deg`
/// (counterclockwise from east). The walkable side is to the left of the
/// direction; the curb band lies on the other side.
struct CurbLine {
  double point_x_cm = 0.0;
  double point_y_cm = 0.0;
  double direction_deg = 0.0;
};

struct World {
  CurbLine curb;
  double band_width_cm = 15.0;
  AgentPose agent;
  double noise_flip_rate = 0.0;
  std::uint64_t noise_seed = 42;
};

namespace detail {
struct Vec2 {
  double x, y;
};
inline Vec2 forward_dir(double heading_deg) {
  const double h = heading_deg * kDegToRad;
  return {-std::sin(h), -std::cos(h)};
}
inline Vec2 right_dir(double heading_deg) {
  const double h = heading_deg * kDegToRad;
  return {-std::cos(h), std::sin(h)};
}
/// Signed distance from the curb line, positive on the walkable side.
inline double signed_curb_distance(const CurbLine& curb, double x, double y) {
  const double a = curb.direction_deg * kDegToRad;
  const double nx = -std::sin(a), ny = std::cos(a);
  return (x - curb.point_x_cm) * nx + (y - curb.point_y_cm) * ny;
}
}  // namespace detail

/// Perpendicular distance from the agent to the curb line; negative once
/// the agent has crossed it.
inline double true_distance(const World& world) {
  return detail::signed_curb_distance(world.curb, world.agent.x_cm, world.agent.y_cm);
}

/// Heading relative to facing the curb head on, wrapped to (-90, 90].
inline double true_relative_angle(const World& world) {
  return wrap_half_turn(world.agent.heading_deg + world.curb.direction_deg);
}

inline AgentPose step_agent(AgentPose pose, double forward_cm, double turn_deg) {
  pose.heading_deg += turn_deg;
  const auto f = detail::forward_dir(pose.heading_deg);
  pose.x_cm += forward_cm * f.x;
  pose.y_cm += forward_cm * f.y;
  return pose;
}

/// Labels (1) every pixel whose center ray meets the ground inside the curb
/// band, then applies seeded pixel flips when noise is enabled.
inline CurbMask render_mask(const World& world, const CameraModel& cam) {
  CurbMask mask(cam.image_width_px, cam.image_height_px);
  const auto f = detail::forward_dir(world.agent.heading_deg);
  const auto r = detail::right_dir(world.agent.heading_deg);
  // Ground offsets separate: forward depends on the row only, lateral is
  // the column's slope scaled per row.
  for (int row = 0; row < cam.image_height_px; ++row) {
    const auto g0 = image_to_ground(cam, cam.principal_col(), row + 0.5);
    if (!g0) continue;
    const auto g1 = image_to_ground(cam, cam.principal_col() + 1.0, row + 0.5);
    const double lateral_per_px = g1->lateral_cm;
    // Signed distance is affine in the column along a row.
    const double x0 = world.agent.x_cm + g0->forward_cm * f.x, y0 = world.agent.y_cm + g0->forward_cm * f.y;
    const double s0 = detail::signed_curb_distance(world.curb, x0, y0);
    const double ds = detail::signed_curb_distance(world.curb, x0 + lateral_per_px * r.x, y0 + lateral_per_px * r.y) - s0;
    for (int col = 0; col < cam.image_width_px; ++col) {
      const double s = s0 + ds * (col + 0.5 - cam.principal_col());
      if (s <= 0.0 && s >= -world.band_width_cm) mask.set(col, row, 1);
    }
  }
  if (world.noise_flip_rate > 0.0) {
    std::mt19937_64 rng(world.noise_seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int row = 0; row < cam.image_height_px; ++row)
      for (int col = 0; col < cam.image_width_px; ++col)
        if (u(rng) < world.noise_flip_rate) mask.set(col, row, mask.label(col, row) ? 0 : 1);
  }
  return mask;
}

}  // namespace curbalert

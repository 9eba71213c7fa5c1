#pragma once

// Flat-ground pinhole projection and alert-zone classification.
//
// Image coordinates are continuous: x grows to the right, y (row) grows
// downward from the top edge, and the principal point sits at
// (width/2, height/2). Pixel (c, r) covers [c, c+1) x [r, r+1).

#include <array>
#include <cmath>
#include <compare>
#include <numbers>
#include <optional>
#include <string>

#include "curbalert/errors.hpp"

namespace curbalert {

inline constexpr double kDegToRad = std::numbers::pi / 180.0;
inline constexpr double kRadToDeg = 180.0 / std::numbers::pi;

struct PixelPoint {
  double x = 0.0;
  double y = 0.0;
};

/// Camera mounted above flat ground, pitched down by `tilt_deg`.
struct CameraModel {
  double height_cm = 135.0;
  double tilt_deg = 30.0;
  double vertical_fov_deg = 60.0;
  int image_width_px = 640;
  int image_height_px = 480;

  /// Vertical focal length in pixels. Pixels are square, so this is also
  /// the horizontal focal length.
  double focal_px() const {
    return (image_height_px / 2.0) / std::tan(vertical_fov_deg / 2.0 * kDegToRad);
  }

  double principal_row() const { return image_height_px / 2.0; }
  double principal_col() const { return image_width_px / 2.0; }

  void validate() const {
    if (!(height_cm > 0.0) || !std::isfinite(height_cm))
      throw ConfigError("camera height_cm must be positive");
    if (!(tilt_deg > 0.0 && tilt_deg < 90.0))
      throw ConfigError("camera tilt_deg must lie in (0, 90)");
    if (!(vertical_fov_deg > 0.0 && vertical_fov_deg < 180.0))
      throw ConfigError("camera vertical_fov_deg must lie in (0, 180)");
    if (image_width_px <= 0 || image_height_px <= 0)
      throw ConfigError("camera image size must be positive");
  }
};

/// Depression angle (degrees below horizontal) of the ray through `row`.
inline double depression_deg(const CameraModel& cam, double row) {
  return cam.tilt_deg + std::atan((row - cam.principal_row()) / cam.focal_px()) * kRadToDeg;
}

/// Ground distance along the optical-axis direction seen at image `row`.
/// Throws HorizonError when the ray does not meet the ground in front of
/// the camera.
inline double row_to_ground_distance(const CameraModel& cam, double row) {
  const double delta = depression_deg(cam, row);
  // Rays within a nano-degree of the horizon count as the horizon.
  if (!(delta > 1e-9))
    throw HorizonError("row " + std::to_string(row) + " is at or above the horizon");
  if (!(delta < 90.0))
    throw HorizonError("row " + std::to_string(row) + " looks straight down or behind the camera");
  return cam.height_cm / std::tan(delta * kDegToRad);
}

/// Unclamped inverse of row_to_ground_distance. The result may fall
/// outside the image.
inline double ground_distance_to_row_unchecked(const CameraModel& cam, double distance_cm) {
  const double delta = std::atan(cam.height_cm / distance_cm) * kRadToDeg;
  return cam.principal_row() + cam.focal_px() * std::tan((delta - cam.tilt_deg) * kDegToRad);
}

/// Image row at which ground at `distance_cm` appears. Throws OutOfFrame
/// when that row lies outside [0, image_height_px].
inline double ground_distance_to_row(const CameraModel& cam, double distance_cm) {
  if (!(distance_cm > 0.0)) throw OutOfFrame("distance must be positive");
  const double row = ground_distance_to_row_unchecked(cam, distance_cm);
  if (!(row >= 0.0 && row <= cam.image_height_px))
    throw OutOfFrame("distance " + std::to_string(distance_cm) + " cm projects to row " +
                     std::to_string(row) + ", outside the frame");
  return row;
}

/// Ground point seen through an image position, in the camera's ground
/// frame: `forward_cm` along the heading, `lateral_cm` to the right.
struct GroundOffset {
  double lateral_cm = 0.0;
  double forward_cm = 0.0;
};

/// Back-projects an image position onto the ground plane; nullopt when the
/// ray misses the ground.
inline std::optional<GroundOffset> image_to_ground(const CameraModel& cam, double x, double y) {
  const double f = cam.focal_px();
  const double xc = (x - cam.principal_col()) / f;
  const double yc = (y - cam.principal_row()) / f;
  const double tilt = cam.tilt_deg * kDegToRad;
  const double down = yc * std::cos(tilt) + std::sin(tilt);
  if (!(down > 0.0)) return std::nullopt;
  const double scale = cam.height_cm / down;
  return GroundOffset{scale * xc, scale * (std::cos(tilt) - yc * std::sin(tilt))};
}

/// Projects a ground point (camera ground frame) into the image; nullopt
/// when the point is behind the camera.
inline std::optional<PixelPoint> ground_to_image(const CameraModel& cam, GroundOffset g) {
  const double tilt = cam.tilt_deg * kDegToRad;
  // Camera axes: z (optical) = cos t F - sin t U, y (down) = -sin t F - cos t U.
  const double z = g.forward_cm * std::cos(tilt) + cam.height_cm * std::sin(tilt);
  const double y = -g.forward_cm * std::sin(tilt) + cam.height_cm * std::cos(tilt);
  if (!(z > 0.0)) return std::nullopt;
  const double f = cam.focal_px();
  return PixelPoint{cam.principal_col() + f * g.lateral_cm / z, cam.principal_row() + f * y / z};
}

enum class Zone { None, Far, Medium, Near };

/// Alert level: None, Far(1..4), Medium(1..3) or Near. Sub-level 1 is the
/// farthest band of its zone.
class ZoneLevel {
public:
  constexpr ZoneLevel() = default;

  static constexpr ZoneLevel none() { return ZoneLevel(Zone::None, 0); }
  static constexpr ZoneLevel near() { return ZoneLevel(Zone::Near, 0); }
  static ZoneLevel far(int sublevel) {
    if (sublevel < 1 || sublevel > 4) throw ConfigError("far sublevel must be 1..4");
    return ZoneLevel(Zone::Far, sublevel);
  }
  static ZoneLevel medium(int sublevel) {
    if (sublevel < 1 || sublevel > 3) throw ConfigError("medium sublevel must be 1..3");
    return ZoneLevel(Zone::Medium, sublevel);
  }

  constexpr Zone zone() const { return zone_; }
  /// 0 for None and Near.
  constexpr int sublevel() const { return sublevel_; }

  /// 0 = None, 1..4 = Far(1..4), 5..7 = Medium(1..3), 8 = Near.
  constexpr int proximity_rank() const {
    switch (zone_) {
      case Zone::None: return 0;
      case Zone::Far: return sublevel_;
      case Zone::Medium: return 4 + sublevel_;
      case Zone::Near: return 8;
    }
    return 0;
  }

  constexpr bool operator==(const ZoneLevel&) const = default;

private:
  constexpr ZoneLevel(Zone z, int s) : zone_(z), sublevel_(s) {}
  Zone zone_ = Zone::None;
  int sublevel_ = 0;
};

inline const char* zone_name(Zone z) {
  switch (z) {
    case Zone::None: return "none";
    case Zone::Far: return "far";
    case Zone::Medium: return "medium";
    case Zone::Near: return "near";
  }
  return "none";
}

inline std::string to_string(const ZoneLevel& level) {
  std::string s = zone_name(level.zone());
  if (level.sublevel() > 0) s += "(" + std::to_string(level.sublevel()) + ")";
  return s;
}

/// Zone boundaries in ground centimeters. Each zone is closed at its far
/// end and open at its near end; Far additionally includes far_max.
struct AlertZoneConfig {
  double far_max_cm = 257.0;
  double far_min_cm = 146.0;
  double medium_min_cm = 90.0;
  /// Lower bounds of far sub-levels 1..3 (sub-level 4 ends at far_min).
  std::array<double, 3> far_splits_cm{230.0, 202.0, 174.0};
  /// Lower bounds of medium sub-levels 1..2 (sub-level 3 ends at medium_min).
  std::array<double, 2> medium_splits_cm{123.0, 107.0};
  /// Overrides the derived sector center when set.
  std::optional<PixelPoint> sector_center_px;

  void validate() const {
    if (!(medium_min_cm > 0.0)) throw ConfigError("zones: medium_min must be positive");
    if (!(far_max_cm > far_min_cm && far_min_cm > medium_min_cm))
      throw ConfigError("zones: need far_max > far_min > medium_min > 0");
    double prev = far_max_cm;
    for (double b : far_splits_cm) {
      if (!(b < prev)) throw ConfigError("zones: far sub-level bounds must strictly decrease");
      prev = b;
    }
    if (!(far_min_cm < prev)) throw ConfigError("zones: far sub-level bounds must stay above far_min");
    prev = far_min_cm;
    for (double b : medium_splits_cm) {
      if (!(b < prev)) throw ConfigError("zones: medium sub-level bounds must strictly decrease");
      prev = b;
    }
    if (!(medium_min_cm < prev))
      throw ConfigError("zones: medium sub-level bounds must stay above medium_min");
  }
};

inline ZoneLevel classify_distance(const AlertZoneConfig& cfg, double distance_cm) {
  if (distance_cm > cfg.far_max_cm) return ZoneLevel::none();
  if (distance_cm >= cfg.far_min_cm) {
    for (int i = 0; i < 3; ++i)
      if (distance_cm >= cfg.far_splits_cm[i]) return ZoneLevel::far(i + 1);
    return ZoneLevel::far(4);
  }
  if (distance_cm >= cfg.medium_min_cm) {
    for (int i = 0; i < 2; ++i)
      if (distance_cm >= cfg.medium_splits_cm[i]) return ZoneLevel::medium(i + 1);
    return ZoneLevel::medium(3);
  }
  return ZoneLevel::near();
}

/// The user's position in image space: central column, at the (extrapolated)
/// row where ground distance reaches zero.
inline PixelPoint sector_center(const CameraModel& cam, const AlertZoneConfig& cfg = {}) {
  if (cfg.sector_center_px) return *cfg.sector_center_px;
  const double row = cam.principal_row() + cam.focal_px() * std::tan((90.0 - cam.tilt_deg) * kDegToRad);
  return PixelPoint{cam.principal_col(), row};
}

struct ZoneRadii {
  double near_px = 0.0;    // medium_min boundary
  double medium_px = 0.0;  // far_min boundary
  double far_px = 0.0;     // far_max boundary
};

/// Pixel distance from the sector center to each zone boundary along the
/// central column. Diagnostic only; classification happens in centimeters.
inline ZoneRadii zone_radii_px(const CameraModel& cam, const AlertZoneConfig& cfg) {
  const double center_row = sector_center(cam, cfg).y;
  auto radius = [&](double cm) { return center_row - ground_distance_to_row(cam, cm); };
  return ZoneRadii{radius(cfg.medium_min_cm), radius(cfg.far_min_cm), radius(cfg.far_max_cm)};
}

}  // namespace curbalert

#pragma once

// Curb geometry from instance-labeled segmentation masks.

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "curbalert/errors.hpp"
#include "curbalert/geometry.hpp"
#include "curbalert/image.hpp"

namespace curbalert {

/// Instance-labeled mask: 0 is background, k >= 1 is curb instance k.
class CurbMask {
public:
  CurbMask() = default;
  CurbMask(int width, int height) : labels_(width, height, 0) {}
  explicit CurbMask(GrayImage labels) : labels_(std::move(labels)) {}

  int width() const { return labels_.width; }
  int height() const { return labels_.height; }
  std::uint8_t label(int col, int row) const { return labels_.at(col, row); }
  void set(int col, int row, std::uint8_t label) { labels_.at(col, row) = label; }
  const GrayImage& image() const { return labels_; }

  bool all_background() const {
    for (auto v : labels_.pixels)
      if (v != 0) return false;
    return true;
  }

  bool operator==(const CurbMask&) const = default;

private:
  GrayImage labels_;
};

struct ContourPoint {
  int col = 0;
  int row = 0;
  bool operator==(const ContourPoint&) const = default;
};

/// Bottom-most pixel of one instance in every column it occupies, ordered
/// by column.
using LowerContour = std::vector<ContourPoint>;

struct OrientationEstimate {
  double angle_deg = 0.0;  // (-90, 90], counterclockwise with y up
  int rounded_deg = 0;     // multiple of 5
};

/// Rounds to the nearest multiple of `step`, halves away from zero.
inline int round_to_step(double value, int step = 5) {
  return static_cast<int>(std::round(value / step)) * step;
}

inline double wrap_half_turn(double deg) {
  // Into (-90, 90].
  double a = std::fmod(deg, 180.0);
  if (a > 90.0) a -= 180.0;
  if (a <= -90.0) a += 180.0;
  return a;
}

inline LowerContour lower_contour(const CurbMask& mask, int instance) {
  LowerContour contour;
  for (int c = 0; c < mask.width(); ++c) {
    for (int r = mask.height() - 1; r >= 0; --r) {
      if (mask.label(c, r) == instance) {
        contour.push_back({c, r});
        break;
      }
    }
  }
  if (contour.empty()) throw EmptyInstance("no pixel carries label " + std::to_string(instance));
  return contour;
}

/// Least-squares line through the contour, taken in (col, -row) so that a
/// positive angle means the right end sits higher in the image.
inline OrientationEstimate average_slope(const LowerContour& contour) {
  if (contour.size() < 2) throw DegenerateContour("orientation needs at least two contour columns");
  double mx = 0.0, my = 0.0;
  for (const auto& p : contour) {
    mx += p.col;
    my -= p.row;
  }
  const double n = static_cast<double>(contour.size());
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& p : contour) {
    const double dx = p.col - mx;
    sxx += dx * dx;
    sxy += dx * (-p.row - my);
  }
  if (!(sxx > 0.0)) throw DegenerateContour("contour occupies a single column");
  const double angle = wrap_half_turn(std::atan(sxy / sxx) * kRadToDeg);
  return {angle, round_to_step(angle)};
}

struct ClosestPixel {
  int col = 0;
  int row = 0;
  double distance_px = 0.0;
};

namespace detail {
inline double squared_distance(int col, int row, PixelPoint center) {
  const double dx = col - center.x;
  const double dy = row - center.y;
  return dx * dx + dy * dy;
}
}  // namespace detail

/// Instance pixel nearest to `center`; ties go to the smaller column, then
/// the smaller row.
inline ClosestPixel closest_pixel(const CurbMask& mask, int instance, PixelPoint center) {
  std::optional<ClosestPixel> best;
  double best_d2 = std::numeric_limits<double>::infinity();
  // Column-major scan visits candidates in tie-break order, so only a strict
  // improvement replaces the incumbent.
  for (int c = 0; c < mask.width(); ++c) {
    for (int r = 0; r < mask.height(); ++r) {
      if (mask.label(c, r) != instance) continue;
      const double d2 = detail::squared_distance(c, r, center);
      if (d2 < best_d2) {
        best_d2 = d2;
        best = ClosestPixel{c, r, 0.0};
      }
    }
  }
  if (!best) throw EmptyInstance("no pixel carries label " + std::to_string(instance));
  best->distance_px = std::sqrt(best_d2);
  return *best;
}

/// Label of the instance owning the pixel closest to `center`; ties go to
/// the smaller label.
inline int select_closest_curb(const CurbMask& mask, PixelPoint center) {
  std::vector<double> best(256, std::numeric_limits<double>::infinity());
  for (int r = 0; r < mask.height(); ++r)
    for (int c = 0; c < mask.width(); ++c) {
      const int l = mask.label(c, r);
      if (l == 0) continue;
      best[l] = std::min(best[l], detail::squared_distance(c, r, center));
    }
  int chosen = 0;
  for (int l = 1; l < 256; ++l)
    if (best[l] < std::numeric_limits<double>::infinity() && (chosen == 0 || best[l] < best[chosen])) chosen = l;
  if (chosen == 0) throw NoCurb("mask contains no curb instance");
  return chosen;
}

/// Ground distance to an instance: projection of the lower edge of its
/// closest pixel (the nearest ground that pixel covers).
inline double curb_distance_cm(const CurbMask& mask, int instance, const CameraModel& cam,
                               const AlertZoneConfig& cfg = {}) {
  const auto px = closest_pixel(mask, instance, sector_center(cam, cfg));
  return row_to_ground_distance(cam, px.row + 1.0);
}

/// Curb line recovered on the ground plane from its lower contour.
struct GroundLineEstimate {
  double distance_cm = 0.0;  // perpendicular distance from the user
  double angle_deg = 0.0;    // (-90, 90], counterclockwise from the lateral axis
};

/// Back-projects contour pixel centers to the ground and fits a total
/// least-squares line. Points on the bottom image row are dropped when
/// enough remain, since there the band is cut by the frame rather than
/// ending at the curb edge. Returns nullopt with fewer than two usable
/// points.
inline std::optional<GroundLineEstimate> ground_line_estimate(const LowerContour& contour,
                                                              const CameraModel& cam) {
  std::vector<GroundOffset> pts;
  std::vector<GroundOffset> clipped;
  for (const auto& p : contour) {
    auto g = image_to_ground(cam, p.col + 0.5, p.row + 0.5);
    if (!g) continue;
    (p.row == cam.image_height_px - 1 ? clipped : pts).push_back(*g);
  }
  if (pts.size() < 2) pts.insert(pts.end(), clipped.begin(), clipped.end());
  if (pts.size() < 2) return std::nullopt;

  double mx = 0.0, my = 0.0;
  for (const auto& g : pts) {
    mx += g.lateral_cm;
    my += g.forward_cm;
  }
  const double n = static_cast<double>(pts.size());
  mx /= n;
  my /= n;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (const auto& g : pts) {
    const double dx = g.lateral_cm - mx, dy = g.forward_cm - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  const double phi = 0.5 * std::atan2(2.0 * sxy, sxx - syy);
  const double distance = std::abs(-std::sin(phi) * mx + std::cos(phi) * my);
  return GroundLineEstimate{distance, wrap_half_turn(phi * kRadToDeg)};
}

}  // namespace curbalert

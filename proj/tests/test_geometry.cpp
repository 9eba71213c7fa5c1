#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "curbalert/geometry.hpp"

using namespace curbalert;
using Catch::Approx;

namespace {
const CameraModel kCam{};  // 135 cm, 30 deg, 60 deg FOV, 640x480
}

TEST_CASE("focal length from vertical field of view") {
  CHECK(kCam.focal_px() == Approx(415.692193816530).epsilon(1e-12));
  CHECK_NOTHROW(kCam.validate());
  CameraModel bad = kCam;
  bad.tilt_deg = 90.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = kCam;
  bad.vertical_fov_deg = 0.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("row_to_ground_distance") {
  SECTION("optical axis projects to the principal row") {
    CHECK(row_to_ground_distance(kCam, 240.0) == Approx(233.826859021798).margin(1e-9));
    CHECK(depression_deg(kCam, 240.0) == Approx(30.0));
  }
  SECTION("bottom edge of the frame looks 60 degrees down") {
    CHECK(depression_deg(kCam, 480.0) == Approx(60.0).margin(1e-12));
    CHECK(row_to_ground_distance(kCam, 480.0) == Approx(77.942286340600).margin(1e-9));
  }
  SECTION("rows at or above the horizon throw") {
    // Horizon row for the default camera is exactly row 0.
    CHECK_THROWS_AS(row_to_ground_distance(kCam, 0.0), HorizonError);
    CHECK_THROWS_AS(row_to_ground_distance(kCam, -50.0), HorizonError);
    CHECK_NOTHROW(row_to_ground_distance(kCam, 0.01));
    CameraModel shallow = kCam;
    shallow.tilt_deg = 10.0;
    CHECK_THROWS_AS(row_to_ground_distance(shallow, 10.0), HorizonError);
  }
  SECTION("strictly decreasing in row") {
    double prev = row_to_ground_distance(kCam, 1.0);
    for (double r = 2.0; r <= 480.0; r += 1.0) {
      const double d = row_to_ground_distance(kCam, r);
      CHECK(d < prev);
      prev = d;
    }
  }
}

TEST_CASE("ground_distance_to_row") {
  CHECK(ground_distance_to_row(kCam, 233.826859021798) == Approx(240.0).margin(1e-9));
  CHECK(ground_distance_to_row(kCam, 146.0) == Approx(334.124457286164).margin(1e-9));
  for (double d : {80.0, 150.0, 250.0})
    CHECK(row_to_ground_distance(kCam, ground_distance_to_row(kCam, d)) == Approx(d).margin(1e-6));
  CHECK_THROWS_AS(ground_distance_to_row(kCam, 50.0), OutOfFrame);  // below the bottom row
  CHECK_THROWS_AS(ground_distance_to_row(kCam, 0.0), OutOfFrame);
}

TEST_CASE("projection round trip over [60, 300] cm at fine resolution") {
  for (double d = 78.0; d <= 300.0; d += 0.25)
    REQUIRE(row_to_ground_distance(kCam, ground_distance_to_row(kCam, d)) == Approx(d).margin(1e-6));
  // Below the frame the unchecked inverse still round-trips.
  for (double d = 60.0; d < 78.0; d += 0.25)
    REQUIRE(row_to_ground_distance(kCam, ground_distance_to_row_unchecked(kCam, d)) == Approx(d).margin(1e-6));
}

TEST_CASE("image_to_ground and ground_to_image are inverse") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> col(0.0, 640.0), row(1.0, 480.0);
  for (int i = 0; i < 1000; ++i) {
    const double x = col(rng), y = row(rng);
    const auto g = image_to_ground(kCam, x, y);
    REQUIRE(g);
    const auto p = ground_to_image(kCam, *g);
    REQUIRE(p);
    CHECK(p->x == Approx(x).margin(1e-9));
    CHECK(p->y == Approx(y).margin(1e-9));
  }
  // Central column agrees with the row projection.
  const auto g = image_to_ground(kCam, 320.0, 480.0);
  CHECK(g->lateral_cm == Approx(0.0).margin(1e-12));
  CHECK(g->forward_cm == Approx(77.942286340600).margin(1e-9));
  CHECK_FALSE(image_to_ground(kCam, 320.0, 0.0));
}

TEST_CASE("classify_distance against the printed table") {
  const AlertZoneConfig cfg;
  CHECK(classify_distance(cfg, 230) == ZoneLevel::far(1));
  CHECK(classify_distance(cfg, 229) == ZoneLevel::far(2));
  CHECK(classify_distance(cfg, 95) == ZoneLevel::medium(3));
  CHECK(classify_distance(cfg, 145) == ZoneLevel::medium(1));
  CHECK(classify_distance(cfg, 120) == ZoneLevel::medium(2));
  CHECK(classify_distance(cfg, 300) == ZoneLevel::none());
  CHECK(classify_distance(cfg, 89.9) == ZoneLevel::near());
  CHECK(classify_distance(cfg, 0) == ZoneLevel::near());
  CHECK(classify_distance(cfg, 257) == ZoneLevel::far(1));
  CHECK(classify_distance(cfg, 257.001) == ZoneLevel::none());
  CHECK(classify_distance(cfg, 146) == ZoneLevel::far(4));
  CHECK(classify_distance(cfg, 90) == ZoneLevel::medium(3));
  CHECK(classify_distance(cfg, 123) == ZoneLevel::medium(1));
  CHECK(classify_distance(cfg, 107) == ZoneLevel::medium(2));
}

TEST_CASE("classification is order-respecting") {
  const AlertZoneConfig cfg;
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(0.0, 400.0);
  for (int i = 0; i < 20000; ++i) {
    double a = u(rng), b = u(rng);
    if (a > b) std::swap(a, b);
    REQUIRE(classify_distance(cfg, a).proximity_rank() >= classify_distance(cfg, b).proximity_rank());
  }
}

TEST_CASE("ZoneLevel sublevel ranges") {
  CHECK_THROWS_AS(ZoneLevel::far(0), ConfigError);
  CHECK_THROWS_AS(ZoneLevel::far(5), ConfigError);
  CHECK_THROWS_AS(ZoneLevel::medium(4), ConfigError);
  CHECK(ZoneLevel::near().sublevel() == 0);
  CHECK(to_string(ZoneLevel::far(2)) == "far(2)");
  CHECK(to_string(ZoneLevel::none()) == "none");
}

TEST_CASE("zone config validation") {
  AlertZoneConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.far_min_cm = 260;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = {};
  cfg.medium_splits_cm = {100, 120};
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = {};
  cfg.medium_min_cm = 0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("sector center sits where ground distance reaches zero") {
  const PixelPoint c = sector_center(kCam);
  CHECK(c.x == 320.0);
  CHECK(c.y == Approx(960.0).margin(1e-9));
  AlertZoneConfig cfg;
  cfg.sector_center_px = PixelPoint{100, 700};
  CHECK(sector_center(kCam, cfg).y == 700);
}

TEST_CASE("zone_radii_px") {
  const AlertZoneConfig cfg;
  const ZoneRadii r = zone_radii_px(kCam, cfg);
  CHECK(r.far_px > r.medium_px);
  CHECK(r.medium_px > r.near_px);
  CHECK(r.near_px == Approx(514.462449467755).margin(1e-6));
  CHECK(r.medium_px == Approx(625.875542713836).margin(1e-6));
  CHECK(r.far_px == Approx(736.604513856793).margin(1e-6));
  const double center = sector_center(kCam).y;
  CHECK(r.medium_px == Approx(center - ground_distance_to_row(kCam, 146.0)).margin(1e-6));

  AlertZoneConfig collapsed = cfg;
  collapsed.far_max_cm = 146;
  const ZoneRadii rc = zone_radii_px(kCam, collapsed);
  CHECK(rc.far_px == rc.medium_px);

  CameraModel narrow = kCam;
  narrow.vertical_fov_deg = 20.0;  // 90 cm falls below the frame
  CHECK_THROWS_AS(zone_radii_px(narrow, cfg), OutOfFrame);
}

TEST_CASE("bottom row footprint is inside the near zone with defaults") {
  CHECK(row_to_ground_distance(kCam, 480.0) < AlertZoneConfig{}.medium_min_cm);
}

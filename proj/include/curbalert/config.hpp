#pragma once

// One JSON document configures camera, zones, world and run parameters:
//
//   {"height_cm":135,"tilt_deg":30,"vertical_fov_deg":60,"width_px":640,"height_px":480,
//    "zones":{"far_max":257,"far_min":146,"medium_min":90},
//    "band_width_cm":15,"start_distance_cm":300,"approach_deg":30,"noise_flip_rate":0.0,"seed":42}
//
// Every key is optional; missing keys keep their defaults.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>

#include "json.hpp"

#include "curbalert/errors.hpp"
#include "curbalert/eval.hpp"
#include "curbalert/geometry.hpp"
#include "curbalert/pipeline.hpp"

namespace curbalert {

struct AppConfig {
  CameraModel camera;
  AlertZoneConfig zones;
  double band_width_cm = 15.0;
  double start_distance_cm = 300.0;
  int approach_deg = 0;
  double noise_flip_rate = 0.0;
  std::uint64_t seed = 42;
  OrientationMode mode = OrientationMode::Sonification;
  Estimator estimator = Estimator::GroundPlane;
  double tick_hz = 20.0;
  double speed_cm_s = 50.0;
  double cane_reach_cm = 100.0;
  double sigma_deg = 0.0;
  double reaction_delay_s = 0.0;
  int sample_rate_hz = kDefaultSampleRate;

  PipelineConfig pipeline() const {
    PipelineConfig p;
    p.camera = camera;
    p.zones = zones;
    p.mode = mode;
    p.estimator = estimator;
    p.sample_rate_hz = sample_rate_hz;
    return p;
  }

  TrialConfig trial() const {
    TrialConfig t;
    t.pipeline = pipeline();
    t.band_width_cm = band_width_cm;
    t.start_distance_cm = start_distance_cm;
    t.noise_flip_rate = noise_flip_rate;
    t.tick_s = 1.0 / tick_hz;
    t.cane_reach_cm = cane_reach_cm;
    t.speed_cm_s = speed_cm_s;
    t.sigma_deg = sigma_deg;
    t.reaction_delay_s = reaction_delay_s;
    return t;
  }
};

namespace detail {
template <typename T>
void read_if(const nlohmann::json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(std::string("config: bad value for \"") + key + "\"");
  }
}
}  // namespace detail

inline OrientationMode parse_mode(const std::string& s) {
  if (s == "sonification") return OrientationMode::Sonification;
  if (s == "speech") return OrientationMode::Speech;
  throw ConfigError("orientation mode must be \"sonification\" or \"speech\", got \"" + s + "\"");
}

inline Estimator parse_estimator(const std::string& s) {
  if (s == "ground") return Estimator::GroundPlane;
  if (s == "image") return Estimator::ImagePlane;
  throw ConfigError("estimator must be \"ground\" or \"image\", got \"" + s + "\"");
}

inline AppConfig config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  AppConfig c;
  using detail::read_if;
  read_if(j, "height_cm", c.camera.height_cm);
  read_if(j, "tilt_deg", c.camera.tilt_deg);
  read_if(j, "vertical_fov_deg", c.camera.vertical_fov_deg);
  read_if(j, "width_px", c.camera.image_width_px);
  read_if(j, "height_px", c.camera.image_height_px);
  if (j.contains("zones")) {
    const auto& z = j.at("zones");
    if (!z.is_object()) throw ConfigError("config: \"zones\" must be an object");
    read_if(z, "far_max", c.zones.far_max_cm);
    read_if(z, "far_min", c.zones.far_min_cm);
    read_if(z, "medium_min", c.zones.medium_min_cm);
  }
  read_if(j, "band_width_cm", c.band_width_cm);
  read_if(j, "start_distance_cm", c.start_distance_cm);
  read_if(j, "approach_deg", c.approach_deg);
  read_if(j, "noise_flip_rate", c.noise_flip_rate);
  read_if(j, "seed", c.seed);
  read_if(j, "tick_hz", c.tick_hz);
  read_if(j, "speed_cm_s", c.speed_cm_s);
  read_if(j, "cane_reach_cm", c.cane_reach_cm);
  read_if(j, "sigma_deg", c.sigma_deg);
  read_if(j, "reaction_delay_s", c.reaction_delay_s);
  read_if(j, "sample_rate_hz", c.sample_rate_hz);
  std::string s;
  if (j.contains("mode")) {
    read_if(j, "mode", s);
    c.mode = parse_mode(s);
  }
  if (j.contains("estimator")) {
    read_if(j, "estimator", s);
    c.estimator = parse_estimator(s);
  }

  c.camera.validate();
  c.zones.validate();
  if (!(c.band_width_cm > 0.0)) throw ConfigError("config: band_width_cm must be positive");
  if (!(c.tick_hz >= 5.0 && c.tick_hz <= 60.0)) throw ConfigError("config: tick_hz must lie in [5, 60]");
  if (!(c.speed_cm_s > 0.0)) throw ConfigError("config: speed_cm_s must be positive");
  if (!(c.cane_reach_cm >= 0.0)) throw ConfigError("config: cane_reach_cm must be nonnegative");
  if (!(c.noise_flip_rate >= 0.0 && c.noise_flip_rate <= 1.0))
    throw ConfigError("config: noise_flip_rate must lie in [0, 1]");
  if (c.sample_rate_hz < 8000) throw ConfigError("config: sample_rate_hz must be at least 8000");
  return c;
}

inline AppConfig load_config(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open config " + path.string());
  nlohmann::json j;
  try {
    f >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config " + path.string() + ": " + e.what());
  }
  return config_from_json(j);
}

}  // namespace curbalert

#pragma once

// Tick-driven alert state machine. Each tick consumes one mask frame,
// updates the zone state, schedules proximity beeps by their interpulse
// interval and refreshes the orientation channel on its own clock. The two
// channels render into separate buffers and are mixed only at output.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <deque>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "curbalert/audio.hpp"
#include "curbalert/geometry.hpp"
#include "curbalert/mask.hpp"

namespace curbalert {

enum class OrientationMode { Sonification, Speech };

inline const char* mode_name(OrientationMode m) {
  return m == OrientationMode::Sonification ? "sonification" : "speech";
}

/// How distance and orientation are read off the chosen curb instance.
enum class Estimator {
  /// Distance from the closest pixel's row, orientation from the image
  /// slope of the lower contour.
  ImagePlane,
  /// Lower contour back-projected to the ground and fitted as a line.
  GroundPlane,
};

struct PipelineConfig {
  CameraModel camera;
  AlertZoneConfig zones;
  OrientationMode mode = OrientationMode::Sonification;
  Estimator estimator = Estimator::GroundPlane;
  int sample_rate_hz = kDefaultSampleRate;
  double sonification_period_s = 3.0;
  double speech_period_s = 4.0;
  /// Which channels reach the mixed output.
  bool beep_channel = true;
  bool orientation_channel = true;

  double orientation_period_s() const {
    return mode == OrientationMode::Sonification ? sonification_period_s : speech_period_s;
  }
};

struct FrameInput {
  double timestamp_s = 0.0;
  CurbMask mask;
};

struct BeepEvent {
  BeepSpec spec;
  StereoGains gains;
};
struct SonificationEvent {
  int angle_deg = 0;        // signed, rounded
  int image_angle_deg = 0;  // angle of the sonified orientation image
  PanSweep sweep;
};
struct SpeechEvent {
  std::string text;
};

struct AlertEvent {
  double t_s = 0.0;
  std::variant<BeepEvent, SonificationEvent, SpeechEvent> payload;
  // Measurement context at emission.
  ZoneLevel level;
  std::optional<double> distance_cm;
  std::optional<int> angle_deg;
  double pan = 0.0;
};

/// What the pipeline saw on the latest frame.
struct Measurement {
  int instance = 0;
  double distance_cm = 0.0;
  ContourPoint closest;
  std::optional<double> raw_angle_deg;
  std::optional<int> rounded_deg;
  int contour_first_col = 0;
  int contour_last_col = 0;
};

struct AlertState {
  double now_s = 0.0;
  bool started = false;
  double stream_start_s = 0.0;
  ZoneLevel current_level;
  std::optional<Measurement> last_measurement;
  /// Latest measurement that carried an orientation.
  std::optional<Measurement> last_oriented;
  std::optional<double> last_beep_emit_s;
  std::optional<double> last_orientation_emit_s;
  std::optional<int> last_orientation_deg;
  double last_pan = 0.0;
  std::size_t emitted_frames = 0;
  /// Rendered but not yet emitted audio, stereo interleaved, starting at
  /// the current tick.
  std::deque<double> beep_pending;
  std::deque<double> orientation_pending;
};

struct TickOutput {
  std::vector<AlertEvent> events;
  PcmClip pcm;
};

namespace detail {

inline void add_into(std::deque<double>& pending, const PcmClip& stereo) {
  if (pending.size() < stereo.samples.size()) pending.resize(stereo.samples.size(), 0.0);
  for (std::size_t i = 0; i < stereo.samples.size(); ++i) pending[i] += stereo.samples[i];
}

inline std::vector<double> take(std::deque<double>& pending, std::size_t count) {
  std::vector<double> out(count, 0.0);
  const std::size_t n = std::min(count, pending.size());
  std::copy_n(pending.begin(), n, out.begin());
  pending.erase(pending.begin(), pending.begin() + static_cast<std::ptrdiff_t>(n));
  return out;
}

inline constexpr double kTimeEps = 1e-9;

}  // namespace detail

/// Distance and orientation of the closest curb in a mask, or nullopt when
/// the mask is empty or unusable.
inline std::optional<Measurement> measure(const PipelineConfig& cfg, const CurbMask& mask) {
  if (mask.all_background()) return std::nullopt;
  const PixelPoint center = sector_center(cfg.camera, cfg.zones);
  Measurement m;
  m.instance = select_closest_curb(mask, center);
  const auto closest = closest_pixel(mask, m.instance, center);
  m.closest = {closest.col, closest.row};
  const LowerContour contour = lower_contour(mask, m.instance);
  m.contour_first_col = contour.front().col;
  m.contour_last_col = contour.back().col;

  std::optional<GroundLineEstimate> ground;
  if (cfg.estimator == Estimator::GroundPlane) ground = ground_line_estimate(contour, cfg.camera);
  if (ground) {
    m.distance_cm = ground->distance_cm;
    if (contour.size() >= 2) m.raw_angle_deg = ground->angle_deg;
  } else {
    try {
      m.distance_cm = row_to_ground_distance(cfg.camera, closest.row + 1.0);
    } catch (const HorizonError&) {
      return std::nullopt;
    }
    try {
      m.raw_angle_deg = average_slope(contour).angle_deg;
    } catch (const DegenerateContour&) {
    }
  }
  if (m.raw_angle_deg) m.rounded_deg = round_to_step(*m.raw_angle_deg);
  return m;
}

/// Advances the state machine by one tick of length `dt_s` starting at the
/// frame timestamp. Events fire at the start of the tick.
inline TickOutput tick(AlertState& state, const PipelineConfig& cfg, const FrameInput& frame, double dt_s) {
  using detail::kTimeEps;
  const double t = frame.timestamp_s;
  if (!state.started) {
    state.started = true;
    state.stream_start_s = t;
  }
  state.now_s = t;
  TickOutput out;

  const auto m = measure(cfg, frame.mask);
  state.last_measurement = m;
  if (m) {
    state.current_level = classify_distance(cfg.zones, m->distance_cm);
    if (m->rounded_deg) {
      state.last_orientation_deg = std::clamp(*m->rounded_deg, -90, 90);
      state.last_oriented = m;
    }
  } else {
    state.current_level = ZoneLevel::none();
  }

  const int width = cfg.camera.image_width_px;

  if (m && state.current_level.zone() != Zone::None) {
    const BeepSpec spec = beep_params(state.current_level, m->distance_cm, cfg.zones.medium_min_cm);
    if (!state.last_beep_emit_s || t - *state.last_beep_emit_s >= spec.ipi_s - kTimeEps) {
      const StereoGains gains = proximity_gains(m->closest.col, width);
      const double pan = pan_from_x(m->closest.col, width).value;
      state.last_beep_emit_s = t;
      state.last_pan = pan;
      AlertEvent ev{t, BeepEvent{spec, gains}, state.current_level, m->distance_cm, state.last_orientation_deg, pan};
      out.events.push_back(ev);
      detail::add_into(state.beep_pending, spatialize(synth_beep(spec, cfg.sample_rate_hz), gains));
    }
  }

  if (state.last_orientation_deg &&
      (!state.last_orientation_emit_s ||
       t - *state.last_orientation_emit_s >= cfg.orientation_period_s() - kTimeEps)) {
    const int angle = *state.last_orientation_deg;
    state.last_orientation_emit_s = t;
    AlertEvent ev;
    ev.t_s = t;
    ev.level = state.current_level;
    if (m) ev.distance_cm = m->distance_cm;
    ev.angle_deg = angle;
    if (cfg.mode == OrientationMode::Sonification) {
      // Pan sweeps across the contour that produced the held angle.
      const Measurement& src = *state.last_oriented;
      PanSweep sweep{pan_from_x(src.contour_first_col, width), pan_from_x(src.contour_last_col, width)};
      const int image_angle = orientation_image_angle(angle);
      ev.payload = SonificationEvent{angle, image_angle, sweep};
      ev.pan = sweep.from.value;
      detail::add_into(state.orientation_pending,
                       spatialize(sonify_image(orientation_image(image_angle), kSonifyDurationS, cfg.sample_rate_hz),
                                  sweep));
    } else {
      ev.payload = SpeechEvent{speech_text(angle)};
    }
    out.events.push_back(ev);
  }

  // Frames are counted cumulatively so that tick lengths never drift.
  const double end = t + dt_s - state.stream_start_s;
  const auto total_frames = static_cast<std::size_t>(std::llround(end * cfg.sample_rate_hz));
  const std::size_t frames = total_frames > state.emitted_frames ? total_frames - state.emitted_frames : 0;
  state.emitted_frames += frames;
  const auto beep = detail::take(state.beep_pending, frames * 2);
  const auto orient = detail::take(state.orientation_pending, frames * 2);
  out.pcm = PcmClip{cfg.sample_rate_hz, 2, std::vector<double>(frames * 2, 0.0)};
  for (std::size_t i = 0; i < frames * 2; ++i) {
    double s = 0.0;
    if (cfg.beep_channel) s += beep[i];
    if (cfg.orientation_channel) s += orient[i];
    out.pcm.samples[i] = soft_clip(s);
  }
  return out;
}

}  // namespace curbalert

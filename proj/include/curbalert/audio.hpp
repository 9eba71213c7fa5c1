#pragma once

// Sound generation for curb alerts: proximity beeps, orientation images and
// their sonification, speech prompts, and stereo placement.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include "curbalert/errors.hpp"
#include "curbalert/geometry.hpp"
#include "curbalert/image.hpp"

namespace curbalert {

inline constexpr int kDefaultSampleRate = 44100;

/// Sampled audio in [-1, 1]; stereo samples are interleaved L, R.
struct PcmClip {
  int sample_rate_hz = kDefaultSampleRate;
  int channels = 1;
  std::vector<double> samples;

  std::size_t frames() const { return channels > 0 ? samples.size() / channels : 0; }
  double duration_s() const { return static_cast<double>(frames()) / sample_rate_hz; }
  bool operator==(const PcmClip&) const = default;
};

/// Identity up to |x| = 0.5, then a tanh knee that saturates at 1.
inline double soft_clip(double x) {
  const double a = std::abs(x);
  if (a <= 0.5) return x;
  return std::copysign(0.5 + 0.5 * std::tanh((a - 0.5) / 0.5), x);
}

struct BeepSpec {
  double frequency_hz = 0.0;
  double duration_s = 0.0;
  double ipi_s = 0.0;
  double reverberance_pct = 0.0;
  double loudness_pct = 0.0;
  bool operator==(const BeepSpec&) const = default;
};

namespace detail {
struct BeepRow {
  double frequency_hz, ipi_s;
};
inline constexpr BeepRow kFarRows[4] = {{205, 1.5}, {220, 1.3}, {235, 1.1}, {250, 0.9}};
inline constexpr BeepRow kMediumRows[3] = {{300, 0.8}, {350, 0.65}, {400, 0.5}};
}  // namespace detail

/// Beep parameters for an alert level. Inside the near zone the interpulse
/// interval shrinks linearly from 0.4 s at `near_outer_cm` to 0.2 s at 0.
inline BeepSpec beep_params(const ZoneLevel& level, double distance_cm, double near_outer_cm = 90.0) {
  switch (level.zone()) {
    case Zone::None:
      throw NoAlert("no alert zone");
    case Zone::Far: {
      const auto& row = detail::kFarRows[level.sublevel() - 1];
      return {row.frequency_hz, 0.07, row.ipi_s, 40, 80};
    }
    case Zone::Medium: {
      const auto& row = detail::kMediumRows[level.sublevel() - 1];
      return {row.frequency_hz, 0.06, row.ipi_s, 30, 100};
    }
    case Zone::Near: {
      const double ipi = std::clamp(0.2 + (distance_cm / near_outer_cm) * 0.2, 0.2, 0.4);
      return {500, 0.05, ipi, 20, 120};
    }
  }
  throw NoAlert("no alert zone");
}

namespace detail {
inline constexpr double kEdgeRampS = 0.005;
inline constexpr double kEchoDelayS = 0.060;
inline constexpr double kEchoFeedback = 0.4;
inline constexpr int kEchoRepeats = 8;  // 0.4^8 < 1e-3
}  // namespace detail

/// Mono sine beep with 5 ms raised-cosine edges, a feedback echo mixed at
/// the reverberance fraction, and loudness gain followed by soft clipping.
inline PcmClip synth_beep(const BeepSpec& spec, int sample_rate = kDefaultSampleRate) {
  const auto tone_len = static_cast<std::size_t>(std::lround(spec.duration_s * sample_rate));
  const double wet = spec.reverberance_pct / 100.0;
  const auto delay = static_cast<std::size_t>(std::lround(detail::kEchoDelayS * sample_rate));
  const std::size_t tail = wet > 0.0 ? delay * detail::kEchoRepeats : 0;

  std::vector<double> dry(tone_len + tail, 0.0);
  const auto ramp = std::min<std::size_t>(static_cast<std::size_t>(std::lround(detail::kEdgeRampS * sample_rate)),
                                          tone_len / 2);
  const double w = 2.0 * std::numbers::pi * spec.frequency_hz / sample_rate;
  for (std::size_t i = 0; i < tone_len; ++i) {
    double env = 1.0;
    if (ramp > 0) {
      const std::size_t from_end = tone_len - 1 - i;
      if (i < ramp) env = 0.5 - 0.5 * std::cos(std::numbers::pi * i / ramp);
      else if (from_end < ramp) env = 0.5 - 0.5 * std::cos(std::numbers::pi * from_end / ramp);
    }
    dry[i] = env * std::sin(w * static_cast<double>(i));
  }

  PcmClip clip{sample_rate, 1, std::vector<double>(dry.size(), 0.0)};
  std::vector<double> comb(dry.size(), 0.0);
  const double gain = spec.loudness_pct / 100.0;
  for (std::size_t i = 0; i < dry.size(); ++i) {
    comb[i] = dry[i] + (i >= delay && delay > 0 ? detail::kEchoFeedback * comb[i - delay] : 0.0);
    const double echo = comb[i] - dry[i];
    clip.samples[i] = soft_clip(gain * (dry[i] + wet * echo));
  }
  return clip;
}

/// Stereo position in [-1, 1], -1 being full left.
struct PanPosition {
  double value = 0.0;
};

inline PanPosition pan_from_x(double x_pixel, double frame_width) {
  return {(x_pixel / frame_width) * 2.0 - 1.0};
}

struct StereoGains {
  double left = 1.0;
  double right = 1.0;
};

/// Orientation-channel gains: squared numerators over their root-sum-square.
/// Note these reach 2.0 at full pan; they are not constant-power.
inline StereoGains orientation_gains(PanPosition pan) {
  const double l = (1.0 - pan.value) * (1.0 - pan.value);
  const double r = (1.0 + pan.value) * (1.0 + pan.value);
  const double norm = std::sqrt(l + r);
  return {l / norm, r / norm};
}

/// Proximity-beep gains; always sum to 1.
inline StereoGains proximity_gains(double x_closest_pixel, double frame_width) {
  const double r = x_closest_pixel / frame_width;
  return {1.0 - r, r};
}

inline PcmClip spatialize(const PcmClip& mono, StereoGains gains) {
  if (mono.channels != 1) throw ChannelMismatch("spatialize expects a mono clip");
  PcmClip out{mono.sample_rate_hz, 2, {}};
  out.samples.reserve(mono.samples.size() * 2);
  for (double s : mono.samples) {
    out.samples.push_back(s * gains.left);
    out.samples.push_back(s * gains.right);
  }
  return out;
}

/// Pan swept linearly from `from` (first sample) to `to` (last sample),
/// with orientation_gains applied per sample.
struct PanSweep {
  PanPosition from;
  PanPosition to;
};

inline PcmClip spatialize(const PcmClip& mono, PanSweep sweep) {
  if (mono.channels != 1) throw ChannelMismatch("spatialize expects a mono clip");
  PcmClip out{mono.sample_rate_hz, 2, {}};
  const std::size_t n = mono.samples.size();
  out.samples.reserve(n * 2);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = n > 1 ? static_cast<double>(i) / static_cast<double>(n - 1) : 0.0;
    const auto g = orientation_gains({sweep.from.value + (sweep.to.value - sweep.from.value) * t});
    out.samples.push_back(mono.samples[i] * g.left);
    out.samples.push_back(mono.samples[i] * g.right);
  }
  return out;
}

// Orientation images -------------------------------------------------------

inline constexpr int kOrientationImageWidth = 80;
inline constexpr int kOrientationImageHeight = 64;
inline constexpr double kDashOnPx = 12.0;
inline constexpr double kDashOffPx = 8.0;

/// Dashed white line on black through the image center. The line runs along
/// (cos a, sin a) in image coordinates (y down), so angles grow clockwise on
/// screen: 145 runs from lower left to upper right. Lines within 15 degrees
/// of vertical are drawn 3 px wide, others 1 px.
inline GrayImage orientation_image(int angle_deg) {
  if (angle_deg < 0 || angle_deg > 175 || angle_deg % 5 != 0)
    throw BadAngle("orientation image angle must be a multiple of 5 in [0, 175], got " + std::to_string(angle_deg));
  GrayImage img(kOrientationImageWidth, kOrientationImageHeight, 0);
  const double a = angle_deg * kDegToRad;
  const double dx = std::cos(a), dy = std::sin(a);
  const double cx = img.width / 2.0, cy = img.height / 2.0;
  const double half_width = (angle_deg >= 75 && angle_deg <= 105) ? 1.5 : 0.5;
  const double period = kDashOnPx + kDashOffPx;
  for (int r = 0; r < img.height; ++r)
    for (int c = 0; c < img.width; ++c) {
      const double px = c - cx, py = r - cy;
      const double across = std::abs(px * dy - py * dx);
      if (across > half_width + 1e-9) continue;
      // Phase puts the middle of a dash on the image center.
      const double along = px * dx + py * dy + kDashOnPx / 2.0;
      const double phase = along - period * std::floor(along / period);
      if (phase < kDashOnPx) img.at(c, r) = 255;
    }
  return img;
}

/// Image angle that depicts a signed contour angle (counterclockwise, y up).
inline int orientation_image_angle(int signed_rounded_deg) {
  return ((-signed_rounded_deg) % 180 + 180) % 180;
}

// Sonification -------------------------------------------------------------

inline constexpr double kSonifyLowHz = 500.0;
inline constexpr double kSonifyHighHz = 5000.0;
inline constexpr double kSonifyDurationS = 0.8;

/// Pitch of an image row: exponential from kSonifyLowHz (bottom) to
/// kSonifyHighHz (top).
inline double sonify_row_frequency(int row, int height) {
  if (height <= 1) return kSonifyLowHz;
  const double up = static_cast<double>(height - 1 - row) / (height - 1);
  return kSonifyLowHz * std::pow(kSonifyHighHz / kSonifyLowHz, up);
}

/// Left-to-right column sweep: time encodes column, pitch encodes row and
/// amplitude encodes brightness. Column amplitudes are linearly
/// interpolated between column centers, and the result is scaled to a
/// peak of 1 unless silent.
inline PcmClip sonify_image(const GrayImage& img, double clip_duration_s = kSonifyDurationS,
                            int sample_rate = kDefaultSampleRate) {
  if (img.empty()) throw DimensionMismatch("cannot sonify an empty image");
  const auto n = static_cast<std::size_t>(std::lround(clip_duration_s * sample_rate));
  PcmClip clip{sample_rate, 1, std::vector<double>(n, 0.0)};

  std::vector<double> omega(img.height);
  for (int r = 0; r < img.height; ++r)
    omega[r] = 2.0 * std::numbers::pi * sonify_row_frequency(r, img.height) / sample_rate;

  for (std::size_t i = 0; i < n; ++i) {
    const double u = (static_cast<double>(i) + 0.5) / static_cast<double>(n) * img.width - 0.5;
    const int c0 = std::clamp(static_cast<int>(std::floor(u)), 0, img.width - 1);
    const int c1 = std::min(c0 + 1, img.width - 1);
    const double frac = std::clamp(u - c0, 0.0, 1.0);
    double acc = 0.0;
    for (int r = 0; r < img.height; ++r) {
      const double b = (1.0 - frac) * img.at(c0, r) + frac * img.at(c1, r);
      if (b > 0.0) acc += (b / 255.0) * std::sin(omega[r] * static_cast<double>(i));
    }
    clip.samples[i] = acc;
  }

  double peak = 0.0;
  for (double s : clip.samples) peak = std::max(peak, std::abs(s));
  if (peak > 0.0)
    for (double& s : clip.samples) s /= peak;
  return clip;
}

// Speech --------------------------------------------------------------------

/// Turn prompt for a signed, 5-degree-rounded contour angle: positive means
/// turn left.
inline std::string speech_text(int rounded_deg) {
  if (rounded_deg < -90 || rounded_deg > 90 || rounded_deg % 5 != 0)
    throw BadAngle("speech angle must be a multiple of 5 in [-90, 90], got " + std::to_string(rounded_deg));
  if (rounded_deg == 0) return "aligned";
  if (rounded_deg > 0) return std::to_string(rounded_deg) + " left";
  return std::to_string(-rounded_deg) + " right";
}

}  // namespace curbalert

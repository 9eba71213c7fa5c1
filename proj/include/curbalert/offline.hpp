#pragma once

// Offline rendering of a mask stream: one PGM per tick, rendered to a
// stereo clip and a tab-separated event log.

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <tuple>
#include <vector>

#include "curbalert/errors.hpp"
#include "curbalert/image.hpp"
#include "curbalert/pipeline.hpp"

namespace curbalert {

/// `t_s  kind  zone  sublevel  distance_cm  angle_deg  pan`, tab separated;
/// absent values print as "-".
inline std::string format_event(const AlertEvent& ev) {
  const char* kind = std::holds_alternative<BeepEvent>(ev.payload)           ? "beep"
                     : std::holds_alternative<SonificationEvent>(ev.payload) ? "sonification"
                                                                             : "speech";
  char buf[256];
  std::string sub = ev.level.sublevel() > 0 ? std::to_string(ev.level.sublevel()) : "-";
  std::string dist = "-";
  if (ev.distance_cm) {
    std::snprintf(buf, sizeof buf, "%.2f", *ev.distance_cm);
    dist = buf;
  }
  std::string angle = ev.angle_deg ? std::to_string(*ev.angle_deg) : "-";
  std::snprintf(buf, sizeof buf, "%.3f\t%s\t%s\t%s\t%s\t%s\t%.4f", ev.t_s, kind, zone_name(ev.level.zone()),
                sub.c_str(), dist.c_str(), angle.c_str(), ev.pan);
  return buf;
}

/// Concatenates tick outputs into one stereo clip and an event log.
class StreamRecorder {
public:
  explicit StreamRecorder(int sample_rate_hz) : clip_{sample_rate_hz, 2, {}} {}

  void add(const TickOutput& out) {
    clip_.samples.insert(clip_.samples.end(), out.pcm.samples.begin(), out.pcm.samples.end());
    for (const auto& ev : out.events) log_.push_back(format_event(ev));
  }

  const PcmClip& clip() const { return clip_; }
  const std::vector<std::string>& log() const { return log_; }

  std::string log_text() const {
    std::string s;
    for (const auto& line : log_) s += line + "\n";
    return s;
  }

private:
  PcmClip clip_;
  std::vector<std::string> log_;
};

/// PGM files in `dir`, ordered by the numeric value of their stems (ties and
/// non-numeric names fall back to lexicographic order).
inline std::vector<std::filesystem::path> mask_stream_files(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw IoError("not a directory: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".pgm") files.push_back(e.path());
  auto key = [](const fs::path& p) {
    const std::string stem = p.stem().string();
    const bool numeric = !stem.empty() && std::all_of(stem.begin(), stem.end(), [](unsigned char c) {
      return std::isdigit(c);
    });
    return std::make_tuple(numeric ? 0 : 1, numeric ? std::stoull(stem.size() > 18 ? stem.substr(0, 18) : stem) : 0ULL,
                           stem);
  };
  std::sort(files.begin(), files.end(), [&](const fs::path& a, const fs::path& b) { return key(a) < key(b); });
  return files;
}

struct OfflineResult {
  PcmClip clip;
  std::vector<std::string> log;
};

inline OfflineResult run_offline(const std::vector<CurbMask>& frames, const PipelineConfig& cfg, double tick_hz) {
  const double dt = 1.0 / tick_hz;
  AlertState state;
  StreamRecorder rec(cfg.sample_rate_hz);
  for (std::size_t i = 0; i < frames.size(); ++i)
    rec.add(tick(state, cfg, FrameInput{static_cast<double>(i) * dt, frames[i]}, dt));
  return {rec.clip(), rec.log()};
}

inline OfflineResult run_offline(const std::filesystem::path& mask_dir, const PipelineConfig& cfg, double tick_hz) {
  std::vector<CurbMask> frames;
  for (const auto& f : mask_stream_files(mask_dir)) {
    CurbMask m(read_pgm(f));
    if (m.width() != cfg.camera.image_width_px || m.height() != cfg.camera.image_height_px)
      throw DimensionMismatch(f.string() + ": mask size does not match the camera resolution");
    frames.push_back(std::move(m));
  }
  return run_offline(frames, cfg, tick_hz);
}

}  // namespace curbalert

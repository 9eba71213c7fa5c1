#pragma once

// Interactive session: the simulated world plus alert pipeline advanced one
// tick at a time, driven by client control messages and producing state
// messages, speech messages and binary audio frames. Transport-agnostic;
// see server.hpp for the socket side.
//
// Client -> server (JSON text):
//   {"type":"hello","protocol":1}
//   {"type":"input","move":-1|0|1,"turn_deg":r}
//   {"type":"mode","orientation":"sonification"|"speech"}
//   {"type":"reset","approach_deg":0|30|60}
// Server -> client (JSON text):
//   {"type":"state",...} {"type":"speech","text":...} {"type":"error","message":...}
// Server -> client (binary, little-endian):
//   u32 seq | u32 sample_rate | u16 channels | u16 bits_per_sample (16) | i16 samples...
//
// `move` is held until the next input message; `turn_deg` is applied once,
// at the next tick. All inputs take effect at the next tick boundary.

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "curbalert/config.hpp"
#include "curbalert/errors.hpp"
#include "curbalert/offline.hpp"
#include "curbalert/pipeline.hpp"
#include "curbalert/scene.hpp"
#include "curbalert/wav.hpp"

namespace curbalert {

inline constexpr int kProtocolVersion = 1;

struct AudioFrame {
  std::uint32_t seq = 0;
  PcmClip pcm;
};

inline std::string encode_audio_frame(const AudioFrame& frame) {
  std::string out;
  detail::put_u32(out, frame.seq);
  detail::put_u32(out, static_cast<std::uint32_t>(frame.pcm.sample_rate_hz));
  detail::put_u16(out, static_cast<std::uint16_t>(frame.pcm.channels));
  detail::put_u16(out, 16);
  out += encode_pcm16(frame.pcm);
  return out;
}

struct DecodedAudioFrame {
  std::uint32_t seq = 0;
  std::uint32_t sample_rate = 0;
  std::uint16_t channels = 0;
  std::uint16_t bits_per_sample = 0;
  std::vector<std::int16_t> samples;
};

inline DecodedAudioFrame decode_audio_frame(const std::string& bytes) {
  if (bytes.size() < 12 || (bytes.size() - 12) % 2 != 0) throw ProtocolError("malformed audio frame");
  auto u = [&](std::size_t i) { return static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[i])); };
  DecodedAudioFrame f;
  f.seq = u(0) | u(1) << 8 | u(2) << 16 | u(3) << 24;
  f.sample_rate = u(4) | u(5) << 8 | u(6) << 16 | u(7) << 24;
  f.channels = static_cast<std::uint16_t>(u(8) | u(9) << 8);
  f.bits_per_sample = static_cast<std::uint16_t>(u(10) | u(11) << 8);
  for (std::size_t i = 12; i < bytes.size(); i += 2)
    f.samples.push_back(static_cast<std::int16_t>(u(i) | u(i + 1) << 8));
  return f;
}

struct SessionOutput {
  std::vector<std::string> text;  // JSON messages, in send order
  AudioFrame audio;
  std::vector<std::string> log;   // event log lines for this tick
};

class Session {
public:
  explicit Session(AppConfig cfg = {}) : cfg_(std::move(cfg)), pipeline_(cfg_.pipeline()) {
    reset_world(cfg_.approach_deg);
  }

  /// Parses and queues one client message. Throws ProtocolError on any
  /// violation; the caller reports it and closes the session.
  void receive(const std::string& message) {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(message);
    } catch (const nlohmann::json::exception&) {
      throw ProtocolError("message is not valid JSON");
    }
    if (!j.is_object() || !j.contains("type") || !j["type"].is_string())
      throw ProtocolError("message lacks a string \"type\"");
    const std::string type = j["type"];
    try {
      if (type == "hello") {
        if (j.value("protocol", -1) != kProtocolVersion)
          throw ProtocolError("unsupported protocol version");
        hello_ = true;
      } else if (type == "input") {
        if (j.contains("move")) {
          const int move = j.at("move").get<int>();
          if (move < -1 || move > 1) throw ProtocolError("move must be -1, 0 or 1");
          move_ = move;
        }
        if (j.contains("turn_deg")) {
          const double turn = j.at("turn_deg").get<double>();
          if (!std::isfinite(turn)) throw ProtocolError("turn_deg must be finite");
          pending_turn_deg_ += turn;
        }
      } else if (type == "mode") {
        pending_mode_ = parse_mode(j.at("orientation").get<std::string>());
      } else if (type == "reset") {
        const int a = j.at("approach_deg").get<int>();
        if (a != 0 && a != 30 && a != 60) throw ProtocolError("approach_deg must be 0, 30 or 60");
        pending_reset_ = a;
      } else {
        throw ProtocolError("unknown message type \"" + type + "\"");
      }
    } catch (const nlohmann::json::exception&) {
      throw ProtocolError("bad field in \"" + type + "\" message");
    } catch (const ConfigError& e) {
      throw ProtocolError(e.what());
    }
  }

  /// Applies queued input, steps the world, runs one pipeline tick and
  /// returns the messages to send.
  SessionOutput advance() {
    const double dt = 1.0 / cfg_.tick_hz;
    if (pending_reset_) {
      reset_world(*pending_reset_);
      pending_reset_.reset();
    }
    if (pending_mode_) {
      pipeline_.mode = *pending_mode_;
      pending_mode_.reset();
    }
    world_.agent = step_agent(world_.agent, move_ * cfg_.speed_cm_s * dt, pending_turn_deg_);
    pending_turn_deg_ = 0.0;

    world_.noise_seed = cfg_.seed + ticks_;
    const CurbMask mask = render_mask(world_, pipeline_.camera);
    last_mask_ = mask;
    const TickOutput out = tick(state_, pipeline_, FrameInput{time_s_, mask}, dt);

    SessionOutput result;
    for (const auto& ev : out.events) {
      result.log.push_back(format_event(ev));
      if (const auto* speech = std::get_if<SpeechEvent>(&ev.payload))
        result.text.push_back(nlohmann::json{{"type", "speech"}, {"text", speech->text}}.dump());
    }
    result.audio = AudioFrame{next_seq_++, out.pcm};
    result.text.insert(result.text.begin(), state_message(result.audio.seq).dump());
    time_s_ += dt;
    ++ticks_;
    return result;
  }

  nlohmann::json state_message(std::uint32_t audio_seq) const {
    const ZoneLevel& level = state_.current_level;
    nlohmann::json j{{"type", "state"},
                     {"t", time_s_},
                     {"distance_cm", true_distance(world_)},
                     {"zone", zone_name(level.zone())},
                     {"sublevel", nullptr},
                     {"orientation_deg", nullptr},
                     {"pan", state_.last_pan},
                     {"agent", {{"x", world_.agent.x_cm}, {"y", world_.agent.y_cm}, {"heading_deg", world_.agent.heading_deg}}},
                     {"audio_seq", audio_seq}};
    if (level.sublevel() > 0) j["sublevel"] = level.sublevel();
    if (state_.last_orientation_deg) j["orientation_deg"] = *state_.last_orientation_deg;
    return j;
  }

  static std::string error_message(const std::string& what) {
    return nlohmann::json{{"type", "error"}, {"message", what}}.dump();
  }

  const World& world() const { return world_; }
  const CurbMask& last_mask() const { return last_mask_; }
  const PipelineConfig& pipeline_config() const { return pipeline_; }
  const AppConfig& config() const { return cfg_; }
  bool greeted() const { return hello_; }

private:
  void reset_world(int approach_deg) {
    world_ = World{};
    world_.band_width_cm = cfg_.band_width_cm;
    world_.noise_flip_rate = cfg_.noise_flip_rate;
    world_.agent = AgentPose{0.0, cfg_.start_distance_cm, static_cast<double>(approach_deg)};
    state_ = AlertState{};
    move_ = 0;
    pending_turn_deg_ = 0.0;
  }

  AppConfig cfg_;
  PipelineConfig pipeline_;
  World world_;
  AlertState state_;
  CurbMask last_mask_;
  double time_s_ = 0.0;
  std::uint64_t ticks_ = 0;
  std::uint32_t next_seq_ = 0;
  int move_ = 0;
  double pending_turn_deg_ = 0.0;
  std::optional<int> pending_reset_;
  std::optional<OrientationMode> pending_mode_;
  bool hello_ = false;
};

}  // namespace curbalert

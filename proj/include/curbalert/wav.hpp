#pragma once

// 16-bit PCM RIFF/WAVE encoding.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>

#include "curbalert/audio.hpp"
#include "curbalert/errors.hpp"

namespace curbalert {

inline std::int16_t quantize_sample(double s) {
  return static_cast<std::int16_t>(std::lround(std::clamp(s, -1.0, 1.0) * 32767.0));
}

namespace detail {
inline void put_u16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xFF));
  out.push_back(static_cast<char>(v >> 8));
}
inline void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}
}  // namespace detail

/// Little-endian signed 16-bit samples, interleaved, no header.
inline std::string encode_pcm16(const PcmClip& clip) {
  std::string out;
  out.reserve(clip.samples.size() * 2);
  for (double s : clip.samples) detail::put_u16(out, static_cast<std::uint16_t>(quantize_sample(s)));
  return out;
}

inline std::string encode_wav(const PcmClip& clip) {
  if (clip.channels != 1 && clip.channels != 2) throw ChannelMismatch("WAV clips must be mono or stereo");
  const std::string data = encode_pcm16(clip);
  const auto channels = static_cast<std::uint16_t>(clip.channels);
  const auto rate = static_cast<std::uint32_t>(clip.sample_rate_hz);
  std::string out;
  out.reserve(44 + data.size());
  out += "RIFF";
  detail::put_u32(out, static_cast<std::uint32_t>(36 + data.size()));
  out += "WAVEfmt ";
  detail::put_u32(out, 16);
  detail::put_u16(out, 1);  // PCM
  detail::put_u16(out, channels);
  detail::put_u32(out, rate);
  detail::put_u32(out, rate * channels * 2);
  detail::put_u16(out, static_cast<std::uint16_t>(channels * 2));
  detail::put_u16(out, 16);
  out += "data";
  detail::put_u32(out, static_cast<std::uint32_t>(data.size()));
  out += data;
  return out;
}

inline void write_wav(const PcmClip& clip, const std::filesystem::path& path) {
  const std::string bytes = encode_wav(clip);
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path.string() + " for writing");
  f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!f) throw IoError("write failed: " + path.string());
}

}  // namespace curbalert

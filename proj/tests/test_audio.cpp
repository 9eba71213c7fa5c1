#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <string>

#include "curbalert/audio.hpp"
#include "curbalert/wav.hpp"
#include "test_support.hpp"

using namespace curbalert;
using Catch::Approx;

namespace {
// Beep table: level, frequency, duration, IPI, reverb, loudness.
struct Row {
  ZoneLevel level;
  double distance;
  BeepSpec spec;
};
const Row kTable[] = {
    {ZoneLevel::far(1), 240, {205, 0.07, 1.5, 40, 80}},
    {ZoneLevel::far(2), 210, {220, 0.07, 1.3, 40, 80}},
    {ZoneLevel::far(3), 180, {235, 0.07, 1.1, 40, 80}},
    {ZoneLevel::far(4), 150, {250, 0.07, 0.9, 40, 80}},
    {ZoneLevel::medium(1), 130, {300, 0.06, 0.8, 30, 100}},
    {ZoneLevel::medium(2), 110, {350, 0.06, 0.65, 30, 100}},
    {ZoneLevel::medium(3), 95, {400, 0.06, 0.5, 30, 100}},
};
}  // namespace

TEST_CASE("beep_params reproduces the table") {
  for (const auto& row : kTable) {
    INFO(to_string(row.level));
    CHECK(beep_params(row.level, row.distance) == row.spec);
  }
  const BeepSpec near_outer = beep_params(ZoneLevel::near(), 90);
  CHECK(near_outer == BeepSpec{500, 0.05, 0.4, 20, 120});
  CHECK(beep_params(ZoneLevel::near(), 0).ipi_s == 0.2);
  CHECK(beep_params(ZoneLevel::near(), 45).ipi_s == Approx(0.3).margin(1e-12));
  CHECK(beep_params(ZoneLevel::near(), -5).ipi_s == 0.2);
  CHECK_THROWS_AS(beep_params(ZoneLevel::none(), 300), NoAlert);
}

TEST_CASE("near-zone IPI is monotone in distance") {
  double prev = 0.0;
  for (double d = 0.0; d < 90.0; d += 0.5) {
    const double ipi = beep_params(ZoneLevel::near(), d).ipi_s;
    CHECK(ipi >= prev);
    CHECK(ipi >= 0.2);
    CHECK(ipi <= 0.4);
    prev = ipi;
  }
}

TEST_CASE("synth_beep") {
  SECTION("dominant frequency") {
    const PcmClip clip = synth_beep({500, 0.05, 0.3, 0, 100});
    REQUIRE(clip.channels == 1);
    CHECK(clip.frames() == 2205);
    CHECK(testsupport::peak_frequency(clip.samples, clip.sample_rate_hz) == Approx(500.0).margin(5.0));
  }
  SECTION("frequency holds for every table row") {
    for (const auto& row : kTable) {
      const PcmClip clip = synth_beep(row.spec);
      // Only the dry tone, before the first echo arrives.
      std::vector<double> dry(clip.samples.begin(),
                              clip.samples.begin() + static_cast<long>(row.spec.duration_s * clip.sample_rate_hz));
      CHECK(testsupport::peak_frequency(dry, clip.sample_rate_hz) == Approx(row.spec.frequency_hz).margin(5.0));
    }
  }
  SECTION("zero loudness is silent") {
    const PcmClip clip = synth_beep({500, 0.05, 0.3, 20, 0});
    REQUIRE_FALSE(clip.samples.empty());
    for (double s : clip.samples) REQUIRE(s == 0.0);
  }
  SECTION("reverb adds a tail") {
    const PcmClip dry = synth_beep({300, 0.06, 0.8, 0, 100});
    const PcmClip wet = synth_beep({300, 0.06, 0.8, 30, 100});
    CHECK(dry.frames() == 2646);
    CHECK(wet.frames() > dry.frames());
  }
  SECTION("louder rows are louder") {
    const PcmClip quiet = synth_beep(kTable[0].spec);
    double far = 0.0;
    for (double s : quiet.samples) far = std::max(far, std::abs(s));
    const PcmClip near = synth_beep(beep_params(ZoneLevel::near(), 10));
    double peak = 0.0;
    for (double s : near.samples) peak = std::max(peak, std::abs(s));
    CHECK(peak > far);
    CHECK(peak <= 1.0);
  }
  SECTION("deterministic") {
    const BeepSpec spec{235, 0.07, 1.1, 40, 80};
    CHECK(synth_beep(spec) == synth_beep(spec));
    CHECK(encode_pcm16(synth_beep(spec)) == encode_pcm16(synth_beep(spec)));
  }
}

TEST_CASE("soft_clip") {
  CHECK(soft_clip(0.3) == 0.3);
  CHECK(soft_clip(-0.5) == -0.5);
  CHECK(soft_clip(3.0) < 1.0);
  CHECK(soft_clip(3.0) > 0.999);
  CHECK(soft_clip(10.0) <= 1.0);
  CHECK(soft_clip(-2.0) == -soft_clip(2.0));
  double prev = -1.0;
  for (double x = -3.0; x <= 3.0; x += 0.01) {
    CHECK(soft_clip(x) > prev);
    prev = soft_clip(x);
  }
}

TEST_CASE("pan_from_x") {
  CHECK(pan_from_x(0, 640).value == -1.0);
  CHECK(pan_from_x(640, 640).value == 1.0);
  CHECK(pan_from_x(320, 640).value == 0.0);
  CHECK(pan_from_x(160, 640).value == -0.5);
}

TEST_CASE("orientation_gains") {
  auto g = orientation_gains({0.0});
  CHECK(g.left == Approx(0.7071067811865476).margin(1e-12));
  CHECK(g.right == Approx(0.7071067811865476).margin(1e-12));
  g = orientation_gains({-1.0});
  CHECK(g.left == Approx(2.0).margin(1e-12));
  CHECK(g.right == 0.0);
  g = orientation_gains({1.0});
  CHECK(g.left == 0.0);
  CHECK(g.right == Approx(2.0).margin(1e-12));
  g = orientation_gains({0.5});
  CHECK(g.left == Approx(0.15811388300841897).margin(1e-12));
  CHECK(g.right == Approx(1.4230249470757705).margin(1e-12));
  g = orientation_gains({-0.5});
  CHECK(g.left == Approx(1.4230249470757705).margin(1e-12));
  CHECK(g.right == Approx(0.15811388300841897).margin(1e-12));
  for (double p = -1.0; p <= 1.0; p += 0.01) {
    const auto a = orientation_gains({p}), b = orientation_gains({-p});
    CHECK(a.left == Approx(b.right).margin(1e-12));
  }
}

TEST_CASE("proximity_gains") {
  auto g = proximity_gains(0, 640);
  CHECK(g.left == 1.0);
  CHECK(g.right == 0.0);
  g = proximity_gains(320, 640);
  CHECK(g.left == 0.5);
  CHECK(g.right == 0.5);
  g = proximity_gains(480, 640);
  CHECK(g.left == 0.25);
  CHECK(g.right == 0.75);
  std::mt19937 rng(1);
  std::uniform_real_distribution<double> u(0.0, 640.0);
  for (int i = 0; i < 10000; ++i) {
    g = proximity_gains(u(rng), 640);
    REQUIRE(std::abs(g.left + g.right - 1.0) <= 1e-12);
  }
}

TEST_CASE("spatialize") {
  PcmClip mono{44100, 1, std::vector<double>(1000, 1.0)};
  SECTION("hard left") {
    const PcmClip st = spatialize(mono, StereoGains{1.0, 0.0});
    REQUIRE(st.channels == 2);
    REQUIRE(st.frames() == 1000);
    for (double s : testsupport::channel(st.samples, 2, 1)) REQUIRE(s == 0.0);
  }
  SECTION("half and half") {
    const PcmClip st = spatialize(mono, StereoGains{0.5, 0.5});
    for (double s : st.samples) REQUIRE(s == 0.5);
  }
  SECTION("pan sweep moves energy from left to right") {
    const PcmClip tone = synth_beep({440, 0.5, 1, 0, 100});
    const PcmClip st = spatialize(tone, PanSweep{{-1.0}, {1.0}});
    const auto left = testsupport::channel(st.samples, 2, 0);
    const auto right = testsupport::channel(st.samples, 2, 1);
    const std::size_t n = left.size(), tenth = n / 10;
    CHECK(testsupport::rms(left, 0, tenth) > testsupport::rms(left, n - tenth, n));
    CHECK(testsupport::rms(right, 0, tenth) < testsupport::rms(right, n - tenth, n));
  }
  SECTION("stereo input is rejected") {
    PcmClip st{44100, 2, {0.0, 0.0}};
    CHECK_THROWS_AS(spatialize(st, StereoGains{}), ChannelMismatch);
    CHECK_THROWS_AS(spatialize(st, PanSweep{}), ChannelMismatch);
  }
}

TEST_CASE("orientation_image") {
  SECTION("0 is a horizontal dashed line") {
    const GrayImage img = orientation_image(0);
    CHECK(img.width == kOrientationImageWidth);
    CHECK(img.height == kOrientationImageHeight);
    int lit_rows = 0;
    for (int r = 0; r < img.height; ++r) {
      int lit = 0;
      for (int c = 0; c < img.width; ++c) lit += img.at(c, r) > 0;
      if (lit) {
        ++lit_rows;
        CHECK(r == img.height / 2);
        CHECK(lit < img.width);  // dashed
        CHECK(lit > img.width / 2);
      }
    }
    CHECK(lit_rows == 1);
  }
  SECTION("90 is a thick vertical line") {
    const GrayImage img = orientation_image(90);
    int lit_cols = 0;
    for (int c = 0; c < img.width; ++c) {
      int lit = 0;
      for (int r = 0; r < img.height; ++r) lit += img.at(c, r) > 0;
      if (lit) ++lit_cols;
    }
    CHECK(lit_cols == 3);
  }
  SECTION("145 runs from lower left to upper right") {
    const GrayImage img = orientation_image(145);
    double left_rows = 0, right_rows = 0;
    int nl = 0, nr = 0;
    for (int r = 0; r < img.height; ++r)
      for (int c = 0; c < img.width; ++c) {
        if (!img.at(c, r)) continue;
        if (c < img.width / 2) {
          left_rows += r;
          ++nl;
        } else {
          right_rows += r;
          ++nr;
        }
      }
    REQUIRE(nl > 0);
    REQUIRE(nr > 0);
    CHECK(left_rows / nl > right_rows / nr);
  }
  SECTION("domain") {
    CHECK_THROWS_AS(orientation_image(180), BadAngle);
    CHECK_THROWS_AS(orientation_image(7), BadAngle);
    CHECK_THROWS_AS(orientation_image(-5), BadAngle);
    for (int a = 0; a < 180; a += 5) CHECK_NOTHROW(orientation_image(a));
  }
  SECTION("signed contour angle mapping") {
    CHECK(orientation_image_angle(0) == 0);
    CHECK(orientation_image_angle(35) == 145);
    CHECK(orientation_image_angle(-35) == 35);
    CHECK(orientation_image_angle(90) == 90);
  }
}

namespace {
std::vector<double> window_centroids(const PcmClip& clip, int windows) {
  std::vector<double> out;
  const std::size_t len = clip.samples.size() / windows;
  for (int w = 0; w < windows; ++w) {
    std::vector<double> seg(clip.samples.begin() + static_cast<long>(w * len),
                            clip.samples.begin() + static_cast<long>((w + 1) * len));
    out.push_back(testsupport::spectral_centroid(seg, clip.sample_rate_hz));
  }
  return out;
}
}  // namespace

TEST_CASE("sonify_image") {
  SECTION("row pitch mapping") {
    CHECK(sonify_row_frequency(63, 64) == Approx(500.0));
    CHECK(sonify_row_frequency(0, 64) == Approx(5000.0));
  }
  SECTION("black image is silent") {
    const PcmClip clip = sonify_image(GrayImage(80, 64, 0));
    CHECK(clip.frames() == 35280);
    for (double s : clip.samples) REQUIRE(s == 0.0);
  }
  SECTION("145 degrees rises over time") {
    const auto c = window_centroids(sonify_image(orientation_image(145)), 8);
    for (std::size_t i = 1; i < c.size(); ++i) CHECK(c[i] > c[i - 1]);
  }
  SECTION("35 degrees falls over time") {
    const auto c = window_centroids(sonify_image(orientation_image(35)), 8);
    for (std::size_t i = 1; i < c.size(); ++i) CHECK(c[i] < c[i - 1]);
  }
  SECTION("0 degrees is flat") {
    const auto c = window_centroids(sonify_image(orientation_image(0)), 8);
    const auto [lo, hi] = std::minmax_element(c.begin(), c.end());
    CHECK((*hi - *lo) / *lo < 0.05);
  }
  SECTION("top-left pixel sounds first and high") {
    GrayImage img(80, 64, 0);
    img.at(0, 0) = 255;
    const PcmClip clip = sonify_image(img);
    const std::size_t n = clip.samples.size();
    double first = 0.0, total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      total += clip.samples[i] * clip.samples[i];
      if (i < n / 40) first += clip.samples[i] * clip.samples[i];  // first column slot
    }
    CHECK(first / total > 0.99);
    std::vector<double> head(clip.samples.begin(), clip.samples.begin() + static_cast<long>(n / 40));
    CHECK(testsupport::peak_frequency(head, clip.sample_rate_hz) == Approx(5000.0).margin(50.0));
  }
  SECTION("normalized to unit peak") {
    const PcmClip clip = sonify_image(orientation_image(60));
    double peak = 0.0;
    for (double s : clip.samples) peak = std::max(peak, std::abs(s));
    CHECK(peak == Approx(1.0));
  }
  SECTION("custom duration") {
    CHECK(sonify_image(orientation_image(60), 1.0).frames() == 44100);
  }
}

TEST_CASE("speech_text") {
  CHECK(speech_text(30) == "30 left");
  CHECK(speech_text(-45) == "45 right");
  CHECK(speech_text(0) == "aligned");
  CHECK(speech_text(90) == "90 left");
  CHECK_THROWS_AS(speech_text(7), BadAngle);
  CHECK_THROWS_AS(speech_text(95), BadAngle);
}

TEST_CASE("WAV encoding") {
  SECTION("full-scale sample") {
    const std::string wav = encode_wav(PcmClip{44100, 1, {1.0}});
    REQUIRE(wav.size() == 46);
    CHECK(static_cast<unsigned char>(wav[44]) == 0xFF);
    CHECK(static_cast<unsigned char>(wav[45]) == 0x7F);
  }
  SECTION("empty clip") {
    const std::string wav = encode_wav(PcmClip{});
    REQUIRE(wav.size() == 44);
    CHECK(wav.substr(0, 4) == "RIFF");
    CHECK(wav.substr(8, 8) == "WAVEfmt ");
    CHECK(wav.substr(36, 4) == "data");
    CHECK(wav.substr(40, 4) == std::string(4, '\0'));
  }
  SECTION("stereo data size") {
    const std::string wav = encode_wav(PcmClip{22050, 2, std::vector<double>(2 * 37, 0.1)});
    const auto u = [&](std::size_t i) { return static_cast<unsigned>(static_cast<unsigned char>(wav[i])); };
    CHECK((u(40) | u(41) << 8 | u(42) << 16 | u(43) << 24) == 4 * 37);
    CHECK((u(22) | u(23) << 8) == 2);
    CHECK((u(24) | u(25) << 8 | u(26) << 16) == 22050);
  }
  SECTION("quantization clamps") {
    CHECK(quantize_sample(2.0) == 32767);
    CHECK(quantize_sample(-2.0) == -32767);
    CHECK(quantize_sample(0.0) == 0);
  }
  SECTION("unsupported channel count") {
    CHECK_THROWS_AS(encode_wav(PcmClip{44100, 3, {}}), ChannelMismatch);
  }
}

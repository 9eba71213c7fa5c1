// curbalert: command-line front end for the curb alert library.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "curbalert/audio.hpp"
#include "curbalert/config.hpp"
#include "curbalert/eval.hpp"
#include "curbalert/image.hpp"
#include "curbalert/offline.hpp"
#include "curbalert/scene.hpp"
#include "curbalert/server.hpp"
#include "curbalert/wav.hpp"

namespace fs = std::filesystem;
using namespace curbalert;

namespace {

constexpr int kExitError = 1;
constexpr int kExitNoAlert = 2;

struct Common {
  std::string config_path;
  std::optional<std::uint64_t> seed;

  AppConfig load() const {
    AppConfig cfg = config_path.empty() ? AppConfig{} : load_config(config_path);
    if (seed) cfg.seed = *seed;
    return cfg;
  }
};

void add_common(CLI::App* cmd, Common& common) {
  cmd->add_option("--config", common.config_path, "JSON camera/zone/world config")->check(CLI::ExistingFile);
  cmd->add_option("--seed", common.seed, "Random seed (overrides the config)");
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path + " for writing");
  f << text;
}

int cmd_beep(const Common& common, double distance_cm, const std::string& out) {
  const AppConfig cfg = common.load();
  if (!(distance_cm >= 0.0)) throw ConfigError("distance must be nonnegative");
  const ZoneLevel level = classify_distance(cfg.zones, distance_cm);
  if (level.zone() == Zone::None) {
    std::cerr << "no alert zone\n";
    return kExitNoAlert;
  }
  const BeepSpec spec = beep_params(level, distance_cm, cfg.zones.medium_min_cm);
  write_wav(synth_beep(spec, cfg.sample_rate_hz), out);
  nlohmann::json j{{"zone", zone_name(level.zone())},
                   {"sublevel", nullptr},
                   {"frequency_hz", spec.frequency_hz},
                   {"duration_s", spec.duration_s},
                   {"ipi_s", spec.ipi_s},
                   {"reverberance_pct", spec.reverberance_pct},
                   {"loudness_pct", spec.loudness_pct}};
  if (level.sublevel() > 0) j["sublevel"] = level.sublevel();
  std::cout << j.dump() << "\n";
  return 0;
}

int cmd_sonify(const Common& common, std::optional<int> angle, const std::string& image_path,
               const std::vector<double>& pan_sweep, double duration_s, const std::string& out,
               const std::string& export_image) {
  const AppConfig cfg = common.load();
  GrayImage img;
  if (angle) {
    img = orientation_image(*angle);
  } else if (!image_path.empty()) {
    img = read_pgm(image_path);
  } else {
    throw ConfigError("give --angle or --image");
  }
  if (!export_image.empty()) write_pgm(img, export_image);
  PcmClip clip = sonify_image(img, duration_s, cfg.sample_rate_hz);
  if (!pan_sweep.empty()) {
    for (double p : pan_sweep)
      if (p < -1.0 || p > 1.0) throw ConfigError("pan sweep endpoints must lie in [-1, 1]");
    clip = spatialize(clip, PanSweep{{pan_sweep[0]}, {pan_sweep[1]}});
    for (double& s : clip.samples) s = soft_clip(s);
  }
  write_wav(clip, out);
  return 0;
}

int cmd_simulate(const Common& common, const std::string& condition, const std::string& approach, int trials,
                 std::optional<double> sigma, std::optional<double> cane_reach, const std::string& out) {
  AppConfig cfg = common.load();
  if (sigma) cfg.sigma_deg = *sigma;
  if (cane_reach) cfg.cane_reach_cm = *cane_reach;
  ExperimentGrid grid;
  grid.repetitions = trials;
  if (condition != "all") {
    auto c = parse_condition(condition);
    if (!c) throw ConfigError("unknown condition \"" + condition + "\"");
    grid.conditions = {*c};
  }
  if (approach != "all") {
    const int a = std::stoi(approach);
    if (a != 0 && a != 30 && a != 60) throw ConfigError("approach must be 0, 30, 60 or all");
    grid.approaches_deg = {a};
  }
  write_text(out, experiment_csv(run_experiment(grid, cfg.trial(), cfg.seed)));
  return 0;
}

int cmd_metrics(const std::string& pred, const std::string& gt) {
  const CurbMask p(read_pgm(pred));
  const CurbMask g(read_pgm(gt));
  nlohmann::json j{{"pixel_accuracy", pixel_accuracy(p, g)}, {"iou", iou(p, g)}};
  std::cout << j.dump() << "\n";
  return 0;
}

int cmd_pipeline(const Common& common, const std::string& masks, const std::string& out, const std::string& log,
                 const std::string& mode, std::optional<double> tick_hz) {
  AppConfig cfg = common.load();
  if (!mode.empty()) cfg.mode = parse_mode(mode);
  if (tick_hz) cfg.tick_hz = *tick_hz;
  const OfflineResult r = run_offline(fs::path(masks), cfg.pipeline(), cfg.tick_hz);
  write_wav(r.clip, out);
  std::string text;
  for (const auto& line : r.log) text += line + "\n";
  write_text(log, text);
  return 0;
}

int cmd_scene(const Common& common, const std::string& out_dir, std::optional<int> approach, double seconds,
              double move) {
  AppConfig cfg = common.load();
  if (approach) cfg.approach_deg = *approach;
  fs::create_directories(out_dir);
  World world;
  world.band_width_cm = cfg.band_width_cm;
  world.noise_flip_rate = cfg.noise_flip_rate;
  world.agent = AgentPose{0.0, cfg.start_distance_cm, static_cast<double>(cfg.approach_deg)};
  const double dt = 1.0 / cfg.tick_hz;
  const auto frames = static_cast<int>(std::lround(seconds * cfg.tick_hz));
  std::string oracle = "frame\ttrue_distance_cm\trelative_angle_deg\n";
  for (int i = 0; i < frames; ++i) {
    world.noise_seed = cfg.seed + static_cast<std::uint64_t>(i);
    char name[32];
    std::snprintf(name, sizeof name, "%06d.pgm", i);
    write_pgm(render_mask(world, cfg.camera).image(), fs::path(out_dir) / name);
    char line[96];
    std::snprintf(line, sizeof line, "%d\t%.3f\t%.3f\n", i, true_distance(world), true_relative_angle(world));
    oracle += line;
    world.agent = step_agent(world.agent, move * cfg.speed_cm_s * dt, 0.0);
  }
  write_text((fs::path(out_dir) / "oracle.tsv").string(), oracle);
  return 0;
}

int cmd_serve(const Common& common, const std::string& address, std::uint16_t port, const std::string& mode,
              std::optional<double> tick_hz) {
  ServerOptions opts;
  opts.config = common.load();
  if (!mode.empty()) opts.config.mode = parse_mode(mode);
  if (tick_hz) opts.config.tick_hz = *tick_hz;
  if (!(opts.config.tick_hz >= 5.0 && opts.config.tick_hz <= 60.0)) throw ConfigError("tick rate must lie in [5, 60]");
  opts.address = address;
  opts.port = port;
  opts.log = [](const std::string& s) { std::cerr << s << "\n"; };
  Server server(std::move(opts));
  std::cerr << "listening on ws://" << address << ":" << server.port() << "\n";
  server.run();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Curb proximity and orientation alerts: synthesis, simulation and service"};
  app.require_subcommand(1);

  Common beep_c, sonify_c, sim_c, metrics_c, pipe_c, scene_c, serve_c;

  auto* beep = app.add_subcommand("beep", "Classify a distance and render one proximity beep");
  add_common(beep, beep_c);
  double distance_cm = 0.0;
  std::string beep_out = "beep.wav";
  beep->add_option("--distance-cm", distance_cm, "Ground distance to the curb")->required();
  beep->add_option("--out", beep_out, "Output WAV path");

  auto* sonify = app.add_subcommand("sonify", "Sonify an orientation angle or a PGM image");
  add_common(sonify, sonify_c);
  std::optional<int> angle;
  std::string image_path, sonify_out = "sonify.wav", export_image;
  std::vector<double> pan_sweep;
  double duration_s = kSonifyDurationS;
  auto* angle_opt = sonify->add_option("--angle", angle, "Orientation image angle, multiple of 5 in [0, 175]");
  auto* image_opt = sonify->add_option("--image", image_path, "PGM image to sonify")->check(CLI::ExistingFile);
  angle_opt->excludes(image_opt);
  sonify->add_option("--pan-sweep", pan_sweep, "Stereo pan sweep FROM TO in [-1, 1]")->expected(2);
  sonify->add_option("--duration", duration_s, "Clip duration in seconds");
  sonify->add_option("--out", sonify_out, "Output WAV path");
  sonify->add_option("--export-image", export_image, "Also write the sonified image as PGM");

  auto* sim = app.add_subcommand("simulate", "Run the simulated curb-approach experiment");
  add_common(sim, sim_c);
  std::string condition = "all", approach = "all", sim_out = "-";
  int trials = 10;
  std::optional<double> sigma, cane_reach;
  sim->add_option("--condition", condition, "all | cane_alone | beeps_sonification | beeps_speech");
  sim->add_option("--approach", approach, "all | 0 | 30 | 60");
  sim->add_option("--trials", trials, "Repetitions per condition and angle")->check(CLI::PositiveNumber);
  sim->add_option("--sigma", sigma, "Reorientation noise in degrees");
  sim->add_option("--cane-reach", cane_reach, "Cane reach in centimeters");
  sim->add_option("--out", sim_out, "CSV path, - for stdout");

  auto* metrics = app.add_subcommand("metrics", "Pixel accuracy and IoU of two PGM masks");
  add_common(metrics, metrics_c);
  std::string pred, gt;
  metrics->add_option("--pred", pred, "Predicted mask")->required()->check(CLI::ExistingFile);
  metrics->add_option("--gt", gt, "Ground-truth mask")->required()->check(CLI::ExistingFile);

  auto* pipe = app.add_subcommand("pipeline", "Render a directory of PGM masks offline");
  add_common(pipe, pipe_c);
  std::string masks, pipe_out = "pipeline.wav", log = "-", pipe_mode;
  std::optional<double> pipe_tick;
  pipe->add_option("--masks", masks, "Directory of numerically named PGM masks")->required();
  pipe->add_option("--out", pipe_out, "Output WAV path");
  pipe->add_option("--log", log, "Event log path, - for stdout");
  pipe->add_option("--mode", pipe_mode, "sonification | speech");
  pipe->add_option("--tick-hz", pipe_tick, "Frames per second");

  auto* scene = app.add_subcommand("scene", "Render a simulated approach as a PGM mask stream");
  add_common(scene, scene_c);
  std::string scene_dir;
  std::optional<int> scene_approach;
  double seconds = 5.0, move = 1.0;
  scene->add_option("--out-dir", scene_dir, "Output directory")->required();
  scene->add_option("--approach", scene_approach, "Initial heading in degrees");
  scene->add_option("--seconds", seconds, "Stream length");
  scene->add_option("--move", move, "Walking direction: 1 forward, 0 still, -1 back");

  auto* serve = app.add_subcommand("serve", "Serve interactive sessions over WebSocket");
  add_common(serve, serve_c);
  std::string address = "127.0.0.1", serve_mode;
  std::uint16_t port = 8765;
  std::optional<double> serve_tick;
  serve->add_option("--address", address, "Bind address");
  serve->add_option("--port", port, "TCP port");
  serve->add_option("--mode", serve_mode, "sonification | speech");
  serve->add_option("--tick-hz", serve_tick, "Tick rate, 5..60");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*beep) return cmd_beep(beep_c, distance_cm, beep_out);
    if (*sonify) return cmd_sonify(sonify_c, angle, image_path, pan_sweep, duration_s, sonify_out, export_image);
    if (*sim) return cmd_simulate(sim_c, condition, approach, trials, sigma, cane_reach, sim_out);
    if (*metrics) return cmd_metrics(pred, gt);
    if (*pipe) return cmd_pipeline(pipe_c, masks, pipe_out, log, pipe_mode, pipe_tick);
    if (*scene) return cmd_scene(scene_c, scene_dir, scene_approach, seconds, move);
    if (*serve) return cmd_serve(serve_c, address, port, serve_mode, serve_tick);
  } catch (const NoAlert& e) {
    std::cerr << e.what() << "\n";
    return kExitNoAlert;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}

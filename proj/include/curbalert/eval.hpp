#pragma once

// Simulated curb-approach trials and mask overlap metrics.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "curbalert/errors.hpp"
#include "curbalert/mask.hpp"
#include "curbalert/pipeline.hpp"
#include "curbalert/scene.hpp"

namespace curbalert {

enum class Condition { CaneAlone, BeepsSonification, BeepsSpeech };

inline const char* condition_name(Condition c) {
  switch (c) {
    case Condition::CaneAlone: return "cane_alone";
    case Condition::BeepsSonification: return "beeps_sonification";
    case Condition::BeepsSpeech: return "beeps_speech";
  }
  return "cane_alone";
}

inline std::optional<Condition> parse_condition(const std::string& s) {
  if (s == "cane_alone" || s == "cane") return Condition::CaneAlone;
  if (s == "beeps_sonification" || s == "sonification") return Condition::BeepsSonification;
  if (s == "beeps_speech" || s == "speech") return Condition::BeepsSpeech;
  return std::nullopt;
}

struct StopOnContact {
  double cane_reach_cm = 100.0;
};
struct StopOnMediumAlert {};

struct AgentPolicy {
  std::variant<StopOnContact, StopOnMediumAlert> kind = StopOnMediumAlert{};
  double speed_cm_s = 50.0;
  /// Gaussian noise on the final turn, degrees.
  double reorientation_sigma_deg = 0.0;
  double reaction_delay_s = 0.0;
};

struct TrialConfig {
  PipelineConfig pipeline;
  double band_width_cm = 15.0;
  double start_distance_cm = 300.0;
  double noise_flip_rate = 0.0;
  double tick_s = 0.05;
  double cane_reach_cm = 100.0;
  double speed_cm_s = 50.0;
  double sigma_deg = 0.0;
  /// Cane-condition turn noise; defaults to sigma_deg.
  std::optional<double> sigma_cane_deg;
  double reaction_delay_s = 0.0;
  /// Abort once the agent is this far past the curb line.
  double overshoot_limit_cm = 50.0;
};

struct TrialResult {
  Condition condition = Condition::CaneAlone;
  int approach_deg = 0;
  double safety_window_cm = 0.0;
  double orientation_error_deg = 0.0;
  std::uint64_t seed = 0;
};

inline AgentPolicy policy_for(Condition condition, const TrialConfig& cfg) {
  AgentPolicy p;
  p.speed_cm_s = cfg.speed_cm_s;
  p.reaction_delay_s = cfg.reaction_delay_s;
  if (condition == Condition::CaneAlone) {
    p.kind = StopOnContact{cfg.cane_reach_cm};
    p.reorientation_sigma_deg = cfg.sigma_cane_deg.value_or(cfg.sigma_deg);
  } else {
    p.kind = StopOnMediumAlert{};
    p.reorientation_sigma_deg = cfg.sigma_deg;
  }
  return p;
}

/// Walks an agent from the start distance toward the curb at `approach_deg`
/// until the policy stops it, then turns it to face the curb head on using
/// either the pipeline's rounded feedback angle (system) or the true angle
/// (cane). Safety window is the perpendicular distance at the stop.
inline TrialResult run_trial(const AgentPolicy& policy, int approach_deg, OrientationMode mode,
                             const TrialConfig& cfg, std::uint64_t seed) {
  if (!(policy.speed_cm_s > 0.0)) throw ConfigError("agent speed must be positive");
  const bool uses_system = std::holds_alternative<StopOnMediumAlert>(policy.kind);

  World world;
  world.band_width_cm = cfg.band_width_cm;
  world.noise_flip_rate = cfg.noise_flip_rate;
  world.noise_seed = seed;
  world.agent = AgentPose{0.0, cfg.start_distance_cm, static_cast<double>(approach_deg)};

  PipelineConfig pcfg = cfg.pipeline;
  pcfg.mode = mode;
  AlertState state;
  const double step = policy.speed_cm_s * cfg.tick_s;
  const auto max_ticks = static_cast<long>(
      (cfg.start_distance_cm + cfg.overshoot_limit_cm) * 4.0 / step + 1000.0);

  std::mt19937_64 rng(seed);
  long ticks = 0;
  for (;; ++ticks) {
    if (true_distance(world) < -cfg.overshoot_limit_cm || ticks > max_ticks)
      throw NonTermination("agent walked past the curb without stopping");
    bool stop = false;
    if (uses_system) {
      world.noise_seed = seed + static_cast<std::uint64_t>(ticks);
      tick(state, pcfg, FrameInput{ticks * cfg.tick_s, render_mask(world, pcfg.camera)}, cfg.tick_s);
      const Zone z = state.current_level.zone();
      stop = z == Zone::Medium || z == Zone::Near;
    } else {
      const double reach = std::get<StopOnContact>(policy.kind).cane_reach_cm;
      const AgentPose next = step_agent(world.agent, step, 0.0);
      World ahead = world;
      ahead.agent = next;
      stop = true_distance(ahead) < reach;
    }
    if (stop) break;
    world.agent = step_agent(world.agent, step, 0.0);
  }
  const auto delay_ticks = static_cast<long>(std::lround(policy.reaction_delay_s / cfg.tick_s));
  for (long i = 0; i < delay_ticks; ++i) world.agent = step_agent(world.agent, step, 0.0);

  TrialResult result;
  result.approach_deg = approach_deg;
  result.seed = seed;
  result.safety_window_cm = true_distance(world);

  double turn = 0.0;
  if (uses_system) {
    if (state.last_orientation_deg) turn = -static_cast<double>(*state.last_orientation_deg);
  } else {
    turn = -true_relative_angle(world);
  }
  if (policy.reorientation_sigma_deg > 0.0) {
    std::normal_distribution<double> noise(0.0, policy.reorientation_sigma_deg);
    turn += noise(rng);
  }
  world.agent = step_agent(world.agent, 0.0, turn);
  result.orientation_error_deg = std::abs(true_relative_angle(world));
  return result;
}

inline TrialResult run_trial(Condition condition, int approach_deg, const TrialConfig& cfg, std::uint64_t seed) {
  const OrientationMode mode =
      condition == Condition::BeepsSpeech ? OrientationMode::Speech : OrientationMode::Sonification;
  TrialResult r = run_trial(policy_for(condition, cfg), approach_deg, mode, cfg, seed);
  r.condition = condition;
  return r;
}

struct ExperimentGrid {
  std::vector<Condition> conditions{Condition::CaneAlone, Condition::BeepsSonification, Condition::BeepsSpeech};
  std::vector<int> approaches_deg{0, 30, 60};
  int repetitions = 10;
};

struct ExperimentRow {
  Condition condition;
  int approach_deg;
  int repetition;
  std::uint64_t seed;
  std::optional<TrialResult> result;  // empty when the trial failed
  std::string error;
};

/// Independent per-trial seed from the base seed and the grid cell.
inline std::uint64_t trial_seed(std::uint64_t base, Condition c, int approach_deg, int repetition) {
  std::seed_seq seq{static_cast<std::uint32_t>(base), static_cast<std::uint32_t>(base >> 32),
                    static_cast<std::uint32_t>(c), static_cast<std::uint32_t>(approach_deg),
                    static_cast<std::uint32_t>(repetition)};
  std::uint32_t words[2];
  seq.generate(words, words + 2);
  return (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
}

inline std::vector<ExperimentRow> run_experiment(const ExperimentGrid& grid, const TrialConfig& cfg,
                                                 std::uint64_t base_seed) {
  if (grid.conditions.empty() || grid.approaches_deg.empty() || grid.repetitions <= 0)
    throw ConfigError("experiment grid is empty");
  std::vector<ExperimentRow> rows;
  for (Condition c : grid.conditions)
    for (int a : grid.approaches_deg)
      for (int rep = 0; rep < grid.repetitions; ++rep) {
        ExperimentRow row{c, a, rep, trial_seed(base_seed, c, a, rep), std::nullopt, {}};
        try {
          row.result = run_trial(c, a, cfg, row.seed);
        } catch (const Error& e) {
          row.error = e.what();
        }
        rows.push_back(std::move(row));
      }
  return rows;
}

inline constexpr const char* kCsvHeader =
    "condition,approach_deg,repetition,seed,safety_window_cm,orientation_error_deg";

/// Failed trials keep their row with empty measurement fields.
inline std::string experiment_csv(const std::vector<ExperimentRow>& rows) {
  std::string out = std::string(kCsvHeader) + "\n";
  char buf[256];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%s,%d,%d,%llu,", condition_name(r.condition), r.approach_deg, r.repetition,
                  static_cast<unsigned long long>(r.seed));
    out += buf;
    if (r.result) {
      std::snprintf(buf, sizeof buf, "%.4f,%.4f", r.result->safety_window_cm, r.result->orientation_error_deg);
      out += buf;
    } else {
      out += ",";
    }
    out += "\n";
  }
  return out;
}

// Segmentation metrics ------------------------------------------------------

namespace detail {
inline void require_same_size(const CurbMask& a, const CurbMask& b) {
  if (a.width() != b.width() || a.height() != b.height())
    throw DimensionMismatch("masks differ in size: " + std::to_string(a.width()) + "x" + std::to_string(a.height()) +
                            " vs " + std::to_string(b.width()) + "x" + std::to_string(b.height()));
}
}  // namespace detail

/// Share of ground-truth curb pixels also marked in the prediction. Any
/// nonzero label counts as curb.
inline double pixel_accuracy(const CurbMask& pred, const CurbMask& gt) {
  detail::require_same_size(pred, gt);
  std::size_t correct = 0, total = 0;
  const auto& p = pred.image().pixels;
  const auto& g = gt.image().pixels;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!g[i]) continue;
    ++total;
    if (p[i]) ++correct;
  }
  if (total == 0) throw EmptyGroundTruth("ground truth has no curb pixels");
  return static_cast<double>(correct) / static_cast<double>(total);
}

inline double iou(const CurbMask& pred, const CurbMask& gt) {
  detail::require_same_size(pred, gt);
  std::size_t inter = 0, uni = 0;
  const auto& p = pred.image().pixels;
  const auto& g = gt.image().pixels;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const bool a = p[i] != 0, b = g[i] != 0;
    inter += a && b;
    uni += a || b;
  }
  if (uni == 0) throw EmptyUnion("both masks are empty");
  return static_cast<double>(inter) / static_cast<double>(uni);
}

}  // namespace curbalert

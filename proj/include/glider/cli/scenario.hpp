#pragma once

/**
 * @file scenario.hpp
 * @brief Scenario configuration shared by every command.
 *
 * JSON with `"schema_version": 1`. Every block is optional and falls back to
 * the defaults below; unknown keys are rejected and all problems are reported
 * together. Angles are given in degrees (keys ending in `_deg`).
 */

#include "glider/control/glider_controller.hpp"
#include "glider/control/maneuver.hpp"
#include "glider/sim/simulate.hpp"
#include "glider/sysid/objective.hpp"
#include "glider/sysid/synthetic.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace glider {

inline constexpr int kSchemaVersion = 1;

/// Target changes applied at time t; unset fields leave the channel as it is.
struct SetpointEvent {
  double t{0};
  std::optional<double> theta;     // rad
  std::optional<double> z;         // m
  std::optional<double> phi;       // rad
  std::optional<double> ballast;   // kg, releases depth control
  std::optional<double> delta_rs;  // m, releases pitch control
};

struct DepthEnvelope {
  double z_min{0.0};
  double z_max{6.0};
};

struct CompareSpec {
  std::vector<double> pitch_targets;  // rad
  std::vector<double> depth_targets;  // m
  /// Disturbance std applied on all six axes, one grid column per entry.
  std::vector<double> sigma_levels;
  double pitch_duration{60.0};
  double depth_duration{150.0};
  /// |m_b| held during pitch cells; sign opposes the pitch target so the vehicle glides.
  double glide_ballast{0.1};
  bool write_trajectories{false};
};

enum class EstimateRoute { kAccelerations, kMocap };
/// Where chains start: a draw from the prior, the known truth (synthetic only) or the least-squares fit.
enum class ChainInit { kPrior, kTruth, kLeastSquares };

struct EstimateSpec {
  int chains{4};
  std::int64_t steps{50000};
  double burn_in{0.2};
  /// Fraction of each chain during which the proposal σ is tuned.
  double adapt_fraction{0.2};
  double sigma_noise{0.02};
  /// Initial proposal σ as a fraction of each prior range.
  double proposal_fraction{0.02};
  bool merge_chains{false};
  int histogram_bins{30};
  PriorBox prior{default_prior_box()};
  Vec6<double> weights{Vec6<double>::Ones()};
  DifferentiationOptions differentiation;
  CorpusSpec corpus;
  /// Synthetic corpora: fit the exact noisy accelerations or re-derive them from poses.
  EstimateRoute route{EstimateRoute::kAccelerations};
  ChainInit init{ChainInit::kPrior};
  bool write_corpus{false};
  std::optional<std::string> dataset;
};

struct ScenarioConfig {
  int schema_version{kSchemaVersion};
  std::optional<std::string> vehicle_file;
  VehicleParams<double> vehicle;
  std::uint64_t seed{1};
  SimConfig sim;
  GliderControllerConfig controller;
  std::vector<SetpointEvent> setpoints;
  std::optional<DepthEnvelope> envelope;
  CompareSpec compare;
  ManeuverSpec maneuver;
  EstimateSpec estimate;
  /// The configuration as given, used for the report hash.
  nlohmann::json source;
};

/// Defaults used when no file is given.
ScenarioConfig default_scenario();
GliderControllerConfig default_controller_config();
CompareSpec default_compare_spec();

/// Relative paths inside the document resolve against base_dir.
ScenarioConfig parse_scenario(const nlohmann::json& doc, const std::string& base_dir = ".");
ScenarioConfig load_scenario(const std::string& path);

/// 64-bit FNV-1a of a byte string, as 16 hex digits.
std::string fnv1a_hex(std::string_view bytes);
/// Hash of the configuration text with the effective seed and the resolved vehicle parameters.
std::string config_hash(const ScenarioConfig& config);

}  // namespace glider

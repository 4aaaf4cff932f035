// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "moe/experts/training.hpp"
#include "moe/gating/gate.hpp"
#include "moe/gating/trained_gate.hpp"
#include "moe/maze/maze.hpp"
#include "moe/wireless/kernel.hpp"

namespace moe::harness {

enum class Scenario { MazeMissions, NspUtility };

std::string_view to_string(Scenario s);
Scenario scenario_from_string(std::string_view name);

struct MazeSettings {
  maze::MazeConfig layout;
  experts::MazeTrainingParams expert_training;
  gating::GateTrainingParams gate_training;
  int eval_episodes = 500;
  // Chance per step that the walker slips to a uniformly random move.
  double eval_epsilon = 0.05;
  std::map<maze::Mission, std::string> requirements;
  // Expert a single-expert baseline runs with on every mission.
  Objective baseline_objective = Objective::GoToGoal;
};

struct NspSettings {
  wireless::ChannelParams channel;
  wireless::MarketParams market;       // bounds already filled
  std::array<bool, 3> explicit_bounds{};
  std::string requirement = "I need seamless and uninterrupted gaming sessions";
  experts::BanditTrainingParams bandit;
  std::vector<Objective> experts{Objective::MinimizeOp, Objective::MaximizeDr};
  int sweep_points = 200;

  wireless::WirelessContext context() const;
};

struct LlmSettings {
  std::string backend_url;
  std::filesystem::path transcript;  // replay when set
  std::string model{"gpt-3.5-turbo-1106"};
  double timeout_seconds = 30.0;
  int max_retries = 3;
};

struct ExperimentConfig {
  Scenario scenario = Scenario::MazeMissions;
  gating::GateKind gate = gating::GateKind::Scripted;
  std::uint64_t seed = 20240601;         // base of every training stream
  std::vector<std::uint64_t> eval_seeds{0, 1, 2, 3, 4};
  bool train_first = true;               // train models that are missing on disk
  std::filesystem::path output_dir{"out"};
  std::filesystem::path model_dir;       // empty: <output_dir>/models
  MazeSettings maze;
  NspSettings nsp;
  LlmSettings llm;

  std::filesystem::path models() const { return model_dir.empty() ? output_dir / "models" : model_dir; }

  /// Throws ConfigError on the first violated invariant.
  void validate() const;
};

std::map<maze::Mission, std::string> default_requirements();

/// Defaults with the normalization bounds filled in.
ExperimentConfig default_config();

/// Strict: unknown keys and wrong types throw ConfigError. Missing keys keep defaults.
ExperimentConfig config_from_json(const nlohmann::json& doc);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Every semantic field; paths are left out.
nlohmann::json semantic_json(const ExperimentConfig& cfg);

/// SHA-256 of semantic_json.
std::string config_hash(const ExperimentConfig& cfg);

}  // namespace moe::harness

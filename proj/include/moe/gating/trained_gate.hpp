// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "moe/gating/gate.hpp"

namespace moe::gating {

struct GateTrainingParams {
  int episodes = 5000;
  double learning_rate = 0.1;
  double discount = 0.95;
  double epsilon_start = 1.0;
  double epsilon_end = 0.05;
  double epsilon_decay_fraction = 0.8;
  int checkpoint_every = 250;
  double residual_threshold = 1e-3;
};

struct LearningCurvePoint {
  int episode = 0;          // training episodes completed
  double success_rate = 0;  // over the episodes since the previous checkpoint
  double mean_reward = 0;
};

/// Every vector in {0, 0.5, 1}^n except all zeros, in lexicographic order.
std::vector<std::vector<double>> weight_action_space(std::size_t num_experts);

/// Gate whose weights depend on the walker's state. Pure after construction.
class TrainedGate final : public Gate {
 public:
  TrainedGate(maze::Mission mission, std::vector<std::string> experts, std::vector<std::vector<double>> actions,
              std::map<std::string, std::vector<double>, std::less<>> q, std::vector<LearningCurvePoint> curve,
              bool converged);

  GateKind kind() const override { return GateKind::Trained; }
  FormulatedObjective formulate_objective(const UserRequirement& req) override;
  std::vector<std::string> select_experts(const FormulatedObjective& obj, const ExpertRegistry& registry) override;
  GateDecision combine_inferences(const std::vector<std::string>& selected, const FormulatedObjective& obj,
                                  const ExpertRegistry& registry, std::string_view state_key,
                                  const GateContext& context) override;

  /// Learned weights for a state on the simplex; equal weights for unseen states.
  std::vector<double> weights_for(std::string_view state_key) const;

  maze::Mission mission() const { return mission_; }
  const std::vector<std::string>& experts() const { return experts_; }
  const std::vector<std::vector<double>>& actions() const { return actions_; }
  const std::map<std::string, std::vector<double>, std::less<>>& q() const { return q_; }
  const std::vector<LearningCurvePoint>& learning_curve() const { return curve_; }
  bool converged() const { return converged_; }

  bool operator==(const TrainedGate& other) const;

 private:
  maze::Mission mission_;
  std::vector<std::string> experts_;
  std::vector<std::vector<double>> actions_;
  std::map<std::string, std::vector<double>, std::less<>> q_;
  std::vector<LearningCurvePoint> curve_;
  bool converged_;
};

/// Tabular Q-learning over weight vectors from cfg.start, paid the mission
/// reward. Selected experts come from the mission's objectives.
TrainedGate train_gate(const ExpertRegistry& registry, const maze::MazeConfig& cfg, maze::Mission mission,
                       const GateTrainingParams& params, std::uint64_t seed);

nlohmann::json to_json(const TrainedGate& gate);
TrainedGate trained_gate_from_json(const nlohmann::json& doc);
void save_trained_gate(const TrainedGate& gate, const std::filesystem::path& path);
TrainedGate load_trained_gate(const std::filesystem::path& path);

}  // namespace moe::gating

// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>

#include "moe/experts/expert.hpp"
#include "moe/maze/maze.hpp"
#include "moe/wireless/kernel.hpp"

namespace moe::experts {

struct MazeTrainingParams {
  int episodes = 5000;
  double learning_rate = 0.1;
  double discount = 0.95;
  double epsilon_start = 1.0;
  double epsilon_end = 0.05;
  double epsilon_decay_fraction = 0.8;
  // Start each episode from a random cell and prize mask so every state is trained.
  bool exploring_starts = true;
  double residual_threshold = 1e-3;
};

struct BanditTrainingParams {
  int pulls = 10000;
  double epsilon_start = 1.0;
  double epsilon_end = 0.05;
  double epsilon_decay_fraction = 0.8;
  double residual_threshold = 1e-6;
};

/// Linear decay from start to end over the first `fraction` of the budget.
double epsilon_at(int index, int budget, double start, double end, double fraction);

/// Reward terms each maze objective is trained on.
maze::RewardProfile objective_profile(Objective objective);

/// One-step tabular Q-learning with epsilon-greedy exploration.
ExpertModel train_maze_expert(Objective objective, const maze::MazeConfig& cfg, const MazeTrainingParams& params,
                              std::uint64_t seed, std::string id = {});

/// Epsilon-greedy bandit over the power grid with 1/n step sizes; each pull
/// pays nsp_utility for the expert's metric. Every grid power must be feasible.
ExpertModel train_power_expert(Objective objective, const wireless::WirelessContext& ctx,
                               const BanditTrainingParams& params, std::uint64_t seed, std::string id = {});

wireless::QosMetric metric_for(Objective objective);

/// Largest |Q(s,a) - (r + gamma max Q(s'))| over the stored maze rows.
double maze_bellman_residual(const ExpertModel& model, const maze::MazeConfig& cfg);

/// Greedy action for a maze state, lowest index on ties.
maze::Action greedy_action(const ExpertModel& model, const maze::MazeState& state, const maze::MazeConfig& cfg);

std::string default_expert_id(Objective objective);

}  // namespace moe::experts

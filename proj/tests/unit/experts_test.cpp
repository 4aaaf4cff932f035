// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "moe/core/errors.hpp"
#include "moe/experts/model_io.hpp"
#include "moe/experts/training.hpp"

using namespace moe;
using namespace moe::experts;

namespace {

// Greedy rollout length to the goal, or -1 past the step limit.
int greedy_steps_to_goal(const ExpertModel& model, const maze::MazeConfig& cfg, maze::Cell from) {
  maze::MazeState s;
  s.walker = from;
  const maze::RewardProfile p = objective_profile(Objective::GoToGoal);
  while (!s.terminal) s = maze::step(s, greedy_action(model, s, cfg), cfg, p).next;
  return s.reached_goal ? s.steps : -1;
}

const ExpertModel& goto_goal_open_grid() {
  static const ExpertModel model =
      train_maze_expert(Objective::GoToGoal, maze::MazeConfig::open_grid(), MazeTrainingParams{}, 3);
  return model;
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("moe-experts-" + name);
}

}  // namespace

TEST(Scores, MinMaxNormalization) {
  const ActionScores s = normalize_scores(std::vector<double>{1.0, 3.0, 2.0});
  EXPECT_EQ(s.scores, (std::vector<double>{0.0, 1.0, 0.5}));
  EXPECT_EQ(s.argmax, 1u);
  EXPECT_FALSE(s.degenerate);
}

TEST(Scores, DegenerateRowIsHalfEverywhere) {
  const ActionScores s = normalize_scores(std::vector<double>{2.0, 2.0, 2.0, 2.0});
  EXPECT_EQ(s.scores, std::vector<double>(4, 0.5));
  EXPECT_TRUE(s.degenerate);
  EXPECT_EQ(s.argmax, 0u);
}

TEST(Scores, TiesGoToLowestIndex) { EXPECT_EQ(argmax_lowest(std::vector<double>{0.0, 5.0, 5.0}), 1u); }

TEST(Model, ConstructorValidatesRows) {
  EXPECT_THROW(ExpertModel("e", Domain::Power, Objective::MinimizeOp, {"5", "10"}, {{"*", {1.0}}}, {}),
               std::invalid_argument);
  EXPECT_THROW(ExpertModel("e", Domain::Power, Objective::MinimizeOp, {"5"}, {{"*", {std::nan("")}}}, {}),
               std::invalid_argument);
  EXPECT_THROW(ExpertModel("", Domain::Power, Objective::MinimizeOp, {"5"}, {}, {}), std::invalid_argument);
}

TEST(Model, UnseenMazeStateScoresUniformly) {
  const ExpertModel m("e", Domain::Maze, Objective::GoToGoal, {"up", "down", "left", "right"},
                      {{"1,0|0", {0.0, 1.0, 2.0, 3.0}}}, {});
  const ActionScores seen = score_actions(m, "1,0|0");
  EXPECT_FALSE(seen.unseen);
  EXPECT_EQ(seen.argmax, 3u);
  const ActionScores unseen = score_actions(m, "2,2|0");
  EXPECT_TRUE(unseen.unseen);
  EXPECT_EQ(unseen.scores, std::vector<double>(4, 0.5));
}

TEST(Model, DomainMismatch) {
  const ExpertModel maze_model("m", Domain::Maze, Objective::GoToGoal, {"up", "down", "left", "right"}, {}, {});
  const ExpertModel power_model("p", Domain::Power, Objective::MinimizeOp, {"5"}, {{"*", {1.0}}}, {});
  EXPECT_THROW(score_actions(maze_model, kPowerStateKey), DomainMismatchError);
  EXPECT_THROW(score_actions(power_model, "1,0|0"), DomainMismatchError);
}

TEST(MazeTraining, GreedyPathMatchesBfsFromEveryCell) {
  const maze::MazeConfig cfg = maze::MazeConfig::open_grid();
  for (int r = 0; r < maze::MazeConfig::kRows; ++r) {
    for (int c = 0; c < maze::MazeConfig::kCols; ++c) {
      const maze::Cell from{r, c};
      if (from == cfg.goal) continue;
      EXPECT_EQ(greedy_steps_to_goal(goto_goal_open_grid(), cfg, from), *maze::shortest_path_length(cfg, from, cfg.goal))
          << r << "," << c;
    }
  }
}

TEST(MazeTraining, ResidualIsSmall) {
  const ExpertModel& m = goto_goal_open_grid();
  EXPECT_TRUE(m.meta().converged);
  EXPECT_LE(maze_bellman_residual(m, maze::MazeConfig::open_grid()), 1e-3);
  EXPECT_EQ(m.meta().episodes, 5000);
  EXPECT_EQ(m.meta().seed, 3u);
}

TEST(MazeTraining, AvoidTrapExpertStepsAroundTraps) {
  const maze::MazeConfig cfg;
  const ExpertModel m = train_maze_expert(Objective::AvoidTrap, cfg, {}, 5);
  maze::MazeState s = maze::reset(cfg);
  const maze::RewardProfile p = objective_profile(Objective::AvoidTrap);
  while (!s.terminal) s = maze::step(s, greedy_action(m, s, cfg), cfg, p).next;
  EXPECT_TRUE(s.reached_goal);
  EXPECT_EQ(s.trap_hits, 0);
}

TEST(MazeTraining, CollectPrizeExpertReachesPrize) {
  const maze::MazeConfig cfg;
  const ExpertModel m = train_maze_expert(Objective::CollectPrize, cfg, {}, 9);
  maze::MazeState s = maze::reset(cfg);
  const maze::RewardProfile p = objective_profile(Objective::CollectPrize);
  while (!s.terminal) s = maze::step(s, greedy_action(m, s, cfg), cfg, p).next;
  EXPECT_EQ(s.collected, cfg.all_prizes_mask());
}

TEST(MazeTraining, SameSeedSameTable) {
  const maze::MazeConfig cfg;
  MazeTrainingParams params;
  params.episodes = 400;
  EXPECT_EQ(train_maze_expert(Objective::AvoidTrap, cfg, params, 21),
            train_maze_expert(Objective::AvoidTrap, cfg, params, 21));
}

TEST(MazeTraining, RejectsPowerObjective) {
  EXPECT_THROW(train_maze_expert(Objective::MinimizeOp, maze::MazeConfig{}, {}, 1), std::invalid_argument);
}

TEST(PowerTraining, ArgmaxMatchesBruteForce) {
  const wireless::WirelessContext ctx = wireless::default_wireless_context();
  for (Objective o : {Objective::MinimizeOp, Objective::MaximizeDr, Objective::MaximizeTp}) {
    const ExpertModel m = train_power_expert(o, ctx, {}, 17);
    const ActionScores s = score_actions(m, kPowerStateKey);
    EXPECT_EQ(ctx.market.power_grid[s.argmax], wireless::brute_force_optimal_power(ctx, metric_for(o)).power)
        << to_string(o);
    EXPECT_EQ(m.actions().size(), ctx.market.power_grid.size());
    EXPECT_EQ(m.domain(), Domain::Power);
  }
}

TEST(PowerTraining, InfeasibleGridPointRejected) {
  wireless::WirelessContext ctx = wireless::default_wireless_context();
  ctx.market.bounds_for(wireless::QosMetric::DataRate) = {3e6, 5e6};
  EXPECT_THROW(train_power_expert(Objective::MaximizeDr, ctx, {}, 1), InfeasibleError);
}

TEST(PowerTraining, NoMetricForBep) {
  EXPECT_THROW(train_power_expert(Objective::MinimizeBep, wireless::default_wireless_context(), {}, 1),
               std::invalid_argument);
}

TEST(Schedule, LinearDecayThenFlat) {
  EXPECT_DOUBLE_EQ(epsilon_at(0, 100, 1.0, 0.05, 0.8), 1.0);
  EXPECT_DOUBLE_EQ(epsilon_at(40, 100, 1.0, 0.05, 0.8), 0.525);
  EXPECT_DOUBLE_EQ(epsilon_at(80, 100, 1.0, 0.05, 0.8), 0.05);
  EXPECT_DOUBLE_EQ(epsilon_at(99, 100, 1.0, 0.05, 0.8), 0.05);
}

TEST(ModelIo, RoundTripIsExact) {
  const ExpertModel& m = goto_goal_open_grid();
  const auto path = temp_file("roundtrip.json");
  save_model(m, path);
  EXPECT_EQ(load_model(path), m);
  const ExpertModel p = train_power_expert(Objective::MaximizeTp, wireless::default_wireless_context(), {}, 2);
  save_model(p, path);
  EXPECT_EQ(load_model(path), p);
  std::filesystem::remove(path);
}

TEST(ModelIo, VersionMismatch) {
  nlohmann::json doc = to_json(goto_goal_open_grid());
  doc["format_version"] = kModelFormatVersion + 1;
  EXPECT_THROW(model_from_json(doc), VersionMismatchError);
}

TEST(ModelIo, MissingField) {
  nlohmann::json doc = to_json(goto_goal_open_grid());
  doc.erase("actions");
  EXPECT_THROW(model_from_json(doc), MissingFieldError);
}

TEST(ModelIo, CorruptContent) {
  nlohmann::json doc = to_json(goto_goal_open_grid());
  doc["q"] = 5;
  EXPECT_THROW(model_from_json(doc), CorruptFileError);
  const auto path = temp_file("corrupt.json");
  std::ofstream(path) << "{not json";
  EXPECT_THROW(load_model(path), CorruptFileError);
  std::filesystem::remove(path);
  EXPECT_THROW(load_model(temp_file("absent.json")), std::runtime_error);
}

TEST(Vocabulary, NamesRoundTrip) {
  for (Objective o : kAllObjectives) EXPECT_EQ(objective_from_string(to_string(o)), o);
  EXPECT_THROW(objective_from_string("maximize-fun"), std::invalid_argument);
  EXPECT_TRUE(is_maze_objective(Objective::AvoidTrap));
  EXPECT_FALSE(is_maze_objective(Objective::MinimizeBep));
}

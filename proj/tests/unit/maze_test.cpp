// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include "moe/maze/maze.hpp"

using namespace moe::maze;

namespace {

MazeState at(Cell c) {
  MazeState s;
  s.walker = c;
  return s;
}

}  // namespace

TEST(Maze, DefaultLayoutIsValid) {
  const MazeConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  const MazeState s = reset(cfg);
  EXPECT_EQ(s.walker, (Cell{1, 0}));
  EXPECT_EQ(s.steps, 0);
  EXPECT_FALSE(s.terminal);
}

TEST(Maze, InvalidLayoutsRejected) {
  MazeConfig cfg;
  cfg.goal = {5, 5};
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.walls = {cfg.goal};
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.traps = {cfg.start};
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.max_steps = 0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
}

TEST(Maze, MovesAndBoundaries) {
  const MazeConfig cfg = MazeConfig::open_grid();
  const RewardProfile p;
  EXPECT_EQ(step(at({1, 1}), Action::Up, cfg, p).next.walker, (Cell{0, 1}));
  EXPECT_EQ(step(at({1, 1}), Action::Down, cfg, p).next.walker, (Cell{2, 1}));
  EXPECT_EQ(step(at({1, 1}), Action::Left, cfg, p).next.walker, (Cell{1, 0}));
  EXPECT_EQ(step(at({1, 1}), Action::Right, cfg, p).next.walker, (Cell{1, 2}));
  EXPECT_EQ(step(at({0, 0}), Action::Up, cfg, p).next.walker, (Cell{0, 0}));
  EXPECT_EQ(step(at({0, 0}), Action::Left, cfg, p).next.walker, (Cell{0, 0}));
}

TEST(Maze, WallsBlock) {
  MazeConfig cfg = MazeConfig::open_grid();
  cfg.walls = {{1, 1}};
  const StepResult r = step(at({1, 0}), Action::Right, cfg, RewardProfile{});
  EXPECT_EQ(r.next.walker, (Cell{1, 0}));
  EXPECT_EQ(r.next.steps, 1);
  EXPECT_DOUBLE_EQ(r.reward, cfg.rewards.step);
}

TEST(Maze, PrizeIsPaidOnce) {
  const MazeConfig cfg;
  const RewardProfile p = reward_profile(Mission::GoalPrize);
  const StepResult first = step(at({0, 2}), Action::Right, cfg, p);
  EXPECT_EQ(first.next.collected, 1u);
  EXPECT_DOUBLE_EQ(first.reward, cfg.rewards.step + cfg.rewards.prize);
  const StepResult away = step(first.next, Action::Left, cfg, p);
  const StepResult back = step(away.next, Action::Right, cfg, p);
  EXPECT_DOUBLE_EQ(back.reward, cfg.rewards.step);
}

TEST(Maze, TrapPenaltyFollowsProfile) {
  const MazeConfig cfg;
  const StepResult paid = step(at({1, 1}), Action::Right, cfg, reward_profile(Mission::GoalTrap));
  EXPECT_EQ(paid.next.trap_hits, 1);
  EXPECT_DOUBLE_EQ(paid.reward, cfg.rewards.step + cfg.rewards.trap);
  EXPECT_FALSE(paid.next.terminal);
  const StepResult free = step(at({1, 1}), Action::Right, cfg, reward_profile(Mission::GoalPrize));
  EXPECT_EQ(free.next.trap_hits, 1);
  EXPECT_DOUBLE_EQ(free.reward, cfg.rewards.step);
}

TEST(Maze, TerminatingTraps) {
  MazeConfig cfg;
  cfg.trap_terminates = true;
  EXPECT_TRUE(step(at({1, 1}), Action::Right, cfg, RewardProfile{}).next.terminal);
}

TEST(Maze, GoalEndsEpisode) {
  const MazeConfig cfg;
  const StepResult r = step(at({1, 5}), Action::Right, cfg, RewardProfile{});
  EXPECT_TRUE(r.next.terminal);
  EXPECT_TRUE(r.next.reached_goal);
  EXPECT_DOUBLE_EQ(r.reward, cfg.rewards.step + cfg.rewards.goal);
}

TEST(Maze, StepLimitEndsEpisode) {
  MazeConfig cfg;
  cfg.max_steps = 3;
  MazeState s = reset(cfg);
  for (int i = 0; i < 3; ++i) s = step(s, Action::Up, cfg, RewardProfile{}).next;
  EXPECT_TRUE(s.terminal);
  EXPECT_FALSE(s.reached_goal);
}

TEST(Maze, SteppingTerminalStateThrows) {
  MazeState s = at({1, 6});
  s.terminal = true;
  EXPECT_THROW(step(s, Action::Left, MazeConfig{}, RewardProfile{}), MazeError);
}

TEST(Maze, MissionSuccessRules) {
  const MazeConfig cfg;
  MazeState s = at(cfg.goal);
  s.reached_goal = true;
  EXPECT_TRUE(mission_success(Mission::GoalTrap, s, cfg));
  EXPECT_FALSE(mission_success(Mission::GoalPrize, s, cfg));
  s.collected = 1;
  EXPECT_TRUE(mission_success(Mission::GoalPrize, s, cfg));
  EXPECT_TRUE(mission_success(Mission::GoalPrizeTrap, s, cfg));
  s.trap_hits = 1;
  EXPECT_FALSE(mission_success(Mission::GoalPrizeTrap, s, cfg));
  EXPECT_FALSE(mission_success(Mission::GoalTrap, s, cfg));
  EXPECT_TRUE(mission_success(Mission::GoalPrize, s, cfg));
}

TEST(Maze, StateKeyFormat) {
  const MazeConfig cfg;
  MazeState s = at({2, 5});
  EXPECT_EQ(state_key(s, cfg), "2,5|0");
  s.collected = 1;
  EXPECT_EQ(state_key(s, cfg), "2,5|1");
}

TEST(Maze, ShortestPaths) {
  MazeConfig cfg = MazeConfig::open_grid();
  EXPECT_EQ(shortest_path_length(cfg, {1, 0}, {1, 6}), 6);
  EXPECT_EQ(shortest_path_length(cfg, {0, 0}, {2, 6}), 8);
  cfg.walls = {{0, 3}, {1, 3}};
  EXPECT_EQ(shortest_path_length(cfg, {1, 0}, {1, 6}), 8);
  cfg.walls.push_back({2, 3});
  EXPECT_EQ(shortest_path_length(cfg, {1, 0}, {1, 6}), std::nullopt);
}

TEST(Maze, EpisodeRunnerIsDeterministic) {
  const MazeConfig cfg;
  auto policy = [](const MazeState&, moe::Rng& rng) { return kActions[moe::uniform_index(rng, kNumActions)]; };
  const EpisodeRecord a = run_episode(policy, cfg, Mission::GoalPrizeTrap, 11);
  const EpisodeRecord b = run_episode(policy, cfg, Mission::GoalPrizeTrap, 11);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.trajectory.size(), a.actions.size() + 1);
  EXPECT_LE(a.steps, cfg.max_steps);
}

TEST(Maze, RenderShowsLayout) {
  const MazeConfig cfg;
  EXPECT_EQ(render_ascii(cfg, reset(cfg)), "...P...\nW.T.T.G\n.......\n");
}

TEST(Maze, MissionNamesRoundTrip) {
  for (Mission m : kAllMissions) EXPECT_EQ(mission_from_string(to_string(m)), m);
  EXPECT_THROW(mission_from_string("Goal"), std::invalid_argument);
}

// SPDX-License-Identifier: Apache-2.0
#pragma once

// Deterministic 3x7 grid world with a goal, one-time prizes and traps.
// States are values; step() returns the successor instead of mutating.

#include <array>
#include <bit>
#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "moe/core/random.hpp"

namespace moe::maze {

class MazeError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct Cell {
  int row = 0;
  int col = 0;
  auto operator<=>(const Cell&) const = default;
};

enum class Action : int { Up = 0, Down = 1, Left = 2, Right = 3 };

inline constexpr std::array<Action, 4> kActions{Action::Up, Action::Down, Action::Left, Action::Right};
inline constexpr std::size_t kNumActions = kActions.size();

std::string_view to_string(Action a);

struct MazeRewards {
  double step = -0.05;
  double goal = 1.0;
  double prize = 0.5;
  double trap = -1.0;
};

struct MazeConfig {
  static constexpr int kRows = 3;
  static constexpr int kCols = 7;

  Cell start{1, 0};
  Cell goal{1, 6};
  std::vector<Cell> prizes{{0, 3}};
  std::vector<Cell> traps{{1, 2}, {1, 4}};
  std::vector<Cell> walls;
  MazeRewards rewards;
  int max_steps = 100;
  bool trap_terminates = false;

  // Throws std::invalid_argument on the first violated layout rule.
  void validate() const;

  static bool in_bounds(Cell c) { return c.row >= 0 && c.row < kRows && c.col >= 0 && c.col < kCols; }
  bool is_wall(Cell c) const;
  bool is_trap(Cell c) const;
  // Index into prizes, or -1.
  int prize_index(Cell c) const;
  std::uint32_t all_prizes_mask() const { return (1u << prizes.size()) - 1u; }

  /// Same grid with no prizes, traps or walls.
  static MazeConfig open_grid(Cell start = {1, 0}, Cell goal = {1, 6});
};

struct MazeState {
  Cell walker;
  std::uint32_t collected = 0;  // bit i set once prizes[i] is collected
  int steps = 0;
  bool terminal = false;
  bool reached_goal = false;
  int trap_hits = 0;

  bool operator==(const MazeState&) const = default;
};

/// "r,c|bits" with one bit per prize, prize 0 first.
std::string state_key(const MazeState& s, const MazeConfig& cfg);

// Which reward terms are paid out; used both for missions and for the
// per-objective shaping of expert training.
struct RewardProfile {
  bool goal = true;
  bool prize = true;
  bool trap = true;
  bool end_when_all_prizes = false;
};

enum class Mission { GoalTrap, GoalPrize, GoalPrizeTrap };

inline constexpr std::array<Mission, 3> kAllMissions{Mission::GoalTrap, Mission::GoalPrize, Mission::GoalPrizeTrap};

std::string_view to_string(Mission m);
Mission mission_from_string(std::string_view name);
RewardProfile reward_profile(Mission m);

/// Goal reached; GoalPrize* also need every prize collected before the goal,
/// Goal*Trap fail on any trap entry.
bool mission_success(Mission m, const MazeState& final_state, const MazeConfig& cfg);

MazeState reset(const MazeConfig& cfg);

struct StepResult {
  MazeState next;
  double reward = 0.0;
};

StepResult step(const MazeState& state, Action action, const MazeConfig& cfg, const RewardProfile& profile);

inline StepResult step(const MazeState& state, Action action, const MazeConfig& cfg, Mission mission) {
  return step(state, action, cfg, reward_profile(mission));
}

/// BFS length around walls (traps and prizes are passable); nullopt if unreachable.
std::optional<int> shortest_path_length(const MazeConfig& cfg, Cell from, Cell to);

struct EpisodeRecord {
  std::vector<Cell> trajectory;  // includes the start cell
  std::vector<Action> actions;
  double total_reward = 0.0;
  bool success = false;
  int steps = 0;
  bool reached_goal = false;
  int trap_hits = 0;
  int prizes_collected = 0;

  bool operator==(const EpisodeRecord&) const = default;
};

/// Runs one episode from cfg.start. policy(const MazeState&, Rng&) -> Action.
template <class Policy>
EpisodeRecord run_episode(Policy&& policy, const MazeConfig& cfg, Mission mission, std::uint64_t seed) {
  Rng rng(seed);
  MazeState state = reset(cfg);
  const RewardProfile profile = reward_profile(mission);
  EpisodeRecord rec;
  rec.trajectory.push_back(state.walker);
  while (!state.terminal) {
    const Action a = policy(static_cast<const MazeState&>(state), rng);
    StepResult r = step(state, a, cfg, profile);
    rec.actions.push_back(a);
    rec.total_reward += r.reward;
    state = r.next;
    rec.trajectory.push_back(state.walker);
  }
  rec.steps = state.steps;
  rec.reached_goal = state.reached_goal;
  rec.trap_hits = state.trap_hits;
  rec.prizes_collected = std::popcount(state.collected);
  rec.success = mission_success(mission, state, cfg);
  return rec;
}

/// Grid picture for logs: G goal, P uncollected prize, T trap, W walker, # wall, . empty.
std::string render_ascii(const MazeConfig& cfg, const MazeState& state);

}  // namespace moe::maze

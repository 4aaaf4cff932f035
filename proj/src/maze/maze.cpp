// SPDX-License-Identifier: Apache-2.0
#include "moe/maze/maze.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <deque>
#include <stdexcept>

namespace moe::maze {

namespace {

bool contains(const std::vector<Cell>& cells, Cell c) { return std::find(cells.begin(), cells.end(), c) != cells.end(); }

Cell moved(Cell c, Action a) {
  switch (a) {
    case Action::Up: return {c.row - 1, c.col};
    case Action::Down: return {c.row + 1, c.col};
    case Action::Left: return {c.row, c.col - 1};
    case Action::Right: return {c.row, c.col + 1};
  }
  return c;
}

std::string cell_string(Cell c) { return "(" + std::to_string(c.row) + "," + std::to_string(c.col) + ")"; }

}  // namespace

std::string_view to_string(Action a) {
  switch (a) {
    case Action::Up: return "up";
    case Action::Down: return "down";
    case Action::Left: return "left";
    case Action::Right: return "right";
  }
  return "?";
}

bool MazeConfig::is_wall(Cell c) const { return contains(walls, c); }
bool MazeConfig::is_trap(Cell c) const { return contains(traps, c); }

int MazeConfig::prize_index(Cell c) const {
  const auto it = std::find(prizes.begin(), prizes.end(), c);
  return it == prizes.end() ? -1 : static_cast<int>(it - prizes.begin());
}

MazeConfig MazeConfig::open_grid(Cell start, Cell goal) {
  MazeConfig cfg;
  cfg.start = start;
  cfg.goal = goal;
  cfg.prizes.clear();
  cfg.traps.clear();
  cfg.walls.clear();
  return cfg;
}

void MazeConfig::validate() const {
  auto fail = [](const std::string& msg) { throw std::invalid_argument("maze config: " + msg); };
  std::vector<Cell> special{start, goal};
  special.insert(special.end(), prizes.begin(), prizes.end());
  special.insert(special.end(), traps.begin(), traps.end());
  for (Cell c : special) {
    if (!in_bounds(c)) fail("cell " + cell_string(c) + " is outside the 3x7 grid");
  }
  for (Cell c : walls) {
    if (!in_bounds(c)) fail("wall " + cell_string(c) + " is outside the 3x7 grid");
  }
  std::vector<Cell> sorted = special;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    fail("start, goal, prize and trap cells must be mutually distinct");
  }
  for (Cell c : special) {
    if (is_wall(c)) fail("wall overlaps special cell " + cell_string(c));
  }
  if (prizes.size() > 16) fail("at most 16 prizes are supported");
  if (max_steps < 1) fail("max_steps must be positive");
  if (!shortest_path_length(*this, start, goal)) fail("goal is unreachable from start");
}

std::string state_key(const MazeState& s, const MazeConfig& cfg) {
  std::string key = std::to_string(s.walker.row) + "," + std::to_string(s.walker.col) + "|";
  for (std::size_t i = 0; i < cfg.prizes.size(); ++i) key += (s.collected >> i) & 1u ? '1' : '0';
  return key;
}

std::string_view to_string(Mission m) {
  switch (m) {
    case Mission::GoalTrap: return "Goal+Trap";
    case Mission::GoalPrize: return "Goal+Prize";
    case Mission::GoalPrizeTrap: return "Goal+Prize+Trap";
  }
  return "?";
}

Mission mission_from_string(std::string_view name) {
  for (Mission m : kAllMissions) {
    if (to_string(m) == name) return m;
  }
  throw std::invalid_argument("unknown mission '" + std::string(name) + "'");
}

RewardProfile reward_profile(Mission m) {
  switch (m) {
    case Mission::GoalTrap: return {.goal = true, .prize = false, .trap = true};
    case Mission::GoalPrize: return {.goal = true, .prize = true, .trap = false};
    case Mission::GoalPrizeTrap: return {.goal = true, .prize = true, .trap = true};
  }
  return {};
}

bool mission_success(Mission m, const MazeState& s, const MazeConfig& cfg) {
  if (!s.reached_goal) return false;
  const bool prizes_ok = s.collected == cfg.all_prizes_mask();
  const bool traps_ok = s.trap_hits == 0;
  switch (m) {
    case Mission::GoalTrap: return traps_ok;
    case Mission::GoalPrize: return prizes_ok;
    case Mission::GoalPrizeTrap: return prizes_ok && traps_ok;
  }
  return false;
}

MazeState reset(const MazeConfig& cfg) {
  cfg.validate();
  MazeState s;
  s.walker = cfg.start;
  return s;
}

StepResult step(const MazeState& state, Action action, const MazeConfig& cfg, const RewardProfile& profile) {
  if (state.terminal) throw MazeError("step called on a terminal state");
  StepResult r{state, cfg.rewards.step};
  MazeState& next = r.next;
  const Cell target = moved(state.walker, action);
  if (MazeConfig::in_bounds(target) && !cfg.is_wall(target)) next.walker = target;
  ++next.steps;

  const int prize = cfg.prize_index(next.walker);
  if (prize >= 0 && !((next.collected >> prize) & 1u)) {
    next.collected |= 1u << prize;
    if (profile.prize) r.reward += cfg.rewards.prize;
  }
  if (cfg.is_trap(next.walker)) {
    ++next.trap_hits;
    if (profile.trap) r.reward += cfg.rewards.trap;
    if (cfg.trap_terminates) next.terminal = true;
  }
  if (next.walker == cfg.goal) {
    next.reached_goal = true;
    next.terminal = true;
    if (profile.goal) r.reward += cfg.rewards.goal;
  }
  if (profile.end_when_all_prizes && !cfg.prizes.empty() && next.collected == cfg.all_prizes_mask()) {
    next.terminal = true;
  }
  if (next.steps >= cfg.max_steps) next.terminal = true;
  return r;
}

std::optional<int> shortest_path_length(const MazeConfig& cfg, Cell from, Cell to) {
  if (!MazeConfig::in_bounds(from) || !MazeConfig::in_bounds(to)) {
    throw std::out_of_range("shortest_path_length: cell outside the grid");
  }
  std::array<std::array<int, MazeConfig::kCols>, MazeConfig::kRows> dist{};
  for (auto& row : dist) row.fill(-1);
  std::deque<Cell> frontier{from};
  dist[from.row][from.col] = 0;
  while (!frontier.empty()) {
    const Cell c = frontier.front();
    frontier.pop_front();
    if (c == to) return dist[c.row][c.col];
    for (Action a : kActions) {
      const Cell n = moved(c, a);
      if (!MazeConfig::in_bounds(n) || cfg.is_wall(n) || dist[n.row][n.col] >= 0) continue;
      dist[n.row][n.col] = dist[c.row][c.col] + 1;
      frontier.push_back(n);
    }
  }
  return std::nullopt;
}

std::string render_ascii(const MazeConfig& cfg, const MazeState& state) {
  std::string out;
  for (int r = 0; r < MazeConfig::kRows; ++r) {
    for (int c = 0; c < MazeConfig::kCols; ++c) {
      const Cell cell{r, c};
      char ch = '.';
      const int prize = cfg.prize_index(cell);
      if (cfg.is_wall(cell)) ch = '#';
      else if (cell == cfg.goal) ch = 'G';
      else if (cfg.is_trap(cell)) ch = 'T';
      else if (prize >= 0 && !((state.collected >> prize) & 1u)) ch = 'P';
      if (cell == state.walker) ch = 'W';
      out += ch;
    }
    out += '\n';
  }
  return out;
}

}  // namespace moe::maze

// SPDX-License-Identifier: Apache-2.0
#include "moe/experts/training.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "moe/core/errors.hpp"
#include "moe/core/random.hpp"

namespace moe::experts {

using maze::Action;
using maze::Cell;
using maze::MazeConfig;
using maze::MazeState;

double epsilon_at(int index, int budget, double start, double end, double fraction) {
  const double horizon = fraction * budget;
  if (horizon <= 0.0 || index >= horizon) return end;
  return start + (end - start) * (index / horizon);
}

maze::RewardProfile objective_profile(Objective objective) {
  switch (objective) {
    case Objective::GoToGoal: return {.goal = true, .prize = false, .trap = false};
    case Objective::CollectPrize: return {.goal = false, .prize = true, .trap = false, .end_when_all_prizes = true};
    case Objective::AvoidTrap: return {.goal = true, .prize = false, .trap = true};
    default: break;
  }
  throw std::invalid_argument("objective '" + std::string(to_string(objective)) + "' is not a maze objective");
}

wireless::QosMetric metric_for(Objective objective) {
  switch (objective) {
    case Objective::MinimizeOp: return wireless::QosMetric::OpComplement;
    case Objective::MaximizeDr: return wireless::QosMetric::DataRate;
    case Objective::MaximizeTp: return wireless::QosMetric::Throughput;
    default: break;
  }
  throw std::invalid_argument("objective '" + std::string(to_string(objective)) + "' has no QoS metric");
}

std::string default_expert_id(Objective objective) {
  switch (objective) {
    case Objective::GoToGoal: return "maze-goto-goal";
    case Objective::CollectPrize: return "maze-collect-prize";
    case Objective::AvoidTrap: return "maze-avoid-trap";
    case Objective::MinimizeOp: return "power-op";
    case Objective::MaximizeDr: return "power-dr";
    case Objective::MaximizeTp: return "power-tp";
    case Objective::MinimizeBep: return "power-bep";
  }
  return "expert";
}

namespace {

// Dense table over (cell, prize mask) during training.
class DenseQ {
 public:
  explicit DenseQ(const MazeConfig& cfg)
      : masks_(std::size_t{1} << cfg.prizes.size()),
        values_(MazeConfig::kRows * MazeConfig::kCols * masks_ * maze::kNumActions, 0.0),
        visited_(MazeConfig::kRows * MazeConfig::kCols * masks_, false) {}

  std::size_t index(const MazeState& s) const {
    return (static_cast<std::size_t>(s.walker.row) * MazeConfig::kCols + s.walker.col) * masks_ + s.collected;
  }
  double* row(const MazeState& s) { return values_.data() + index(s) * maze::kNumActions; }
  void mark(const MazeState& s) { visited_[index(s)] = true; }

  QTable export_visited(const MazeConfig& cfg) const {
    QTable out;
    for (int r = 0; r < MazeConfig::kRows; ++r) {
      for (int c = 0; c < MazeConfig::kCols; ++c) {
        for (std::size_t m = 0; m < masks_; ++m) {
          MazeState s;
          s.walker = {r, c};
          s.collected = static_cast<std::uint32_t>(m);
          const std::size_t i = index(s);
          if (!visited_[i]) continue;
          const double* v = values_.data() + i * maze::kNumActions;
          out.emplace(maze::state_key(s, cfg), std::vector<double>(v, v + maze::kNumActions));
        }
      }
    }
    return out;
  }

 private:
  std::size_t masks_;
  std::vector<double> values_;
  std::vector<bool> visited_;
};

// True when the transition ends the task rather than hitting the step limit.
bool absorbing(const MazeState& prev, const MazeState& next, const MazeConfig& cfg, const maze::RewardProfile& p) {
  if (next.reached_goal) return true;
  if (cfg.trap_terminates && next.trap_hits > prev.trap_hits) return true;
  return p.end_when_all_prizes && !cfg.prizes.empty() && next.collected == cfg.all_prizes_mask();
}

MazeState exploring_start(const MazeConfig& cfg, Objective objective, Rng& rng) {
  std::vector<Cell> cells;
  for (int r = 0; r < MazeConfig::kRows; ++r) {
    for (int c = 0; c < MazeConfig::kCols; ++c) {
      const Cell cell{r, c};
      if (cell != cfg.goal && !cfg.is_wall(cell)) cells.push_back(cell);
    }
  }
  const std::uint32_t all = cfg.all_prizes_mask();
  const bool prize_task = objective == Objective::CollectPrize && !cfg.prizes.empty();
  for (;;) {
    MazeState s;
    s.walker = cells[uniform_index(rng, cells.size())];
    s.collected = static_cast<std::uint32_t>(uniform_index(rng, std::size_t{all} + 1));
    const int prize = cfg.prize_index(s.walker);
    if (prize >= 0) s.collected |= 1u << prize;
    if (prize_task && s.collected == all) continue;
    return s;
  }
}

Action epsilon_greedy(const double* q, double epsilon, Rng& rng) {
  if (uniform01(rng) < epsilon) return maze::kActions[uniform_index(rng, maze::kNumActions)];
  return maze::kActions[argmax_lowest(std::span<const double>(q, maze::kNumActions))];
}

MazeState parse_maze_key(std::string_view key) {
  MazeState s;
  const auto comma = key.find(',');
  const auto bar = key.find('|');
  s.walker.row = std::stoi(std::string(key.substr(0, comma)));
  s.walker.col = std::stoi(std::string(key.substr(comma + 1, bar - comma - 1)));
  const std::string_view bits = key.substr(bar + 1);
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] == '1') s.collected |= 1u << i;
  }
  return s;
}

}  // namespace

ExpertModel train_maze_expert(Objective objective, const MazeConfig& cfg, const MazeTrainingParams& params,
                              std::uint64_t seed, std::string id) {
  cfg.validate();
  const maze::RewardProfile profile = objective_profile(objective);
  if (params.episodes < 0) throw std::invalid_argument("episodes must be nonnegative");
  Rng rng(seed);
  DenseQ table(cfg);
  const MazeState initial = maze::reset(cfg);

  for (int episode = 0; episode < params.episodes; ++episode) {
    const double epsilon = epsilon_at(episode, params.episodes, params.epsilon_start, params.epsilon_end,
                                      params.epsilon_decay_fraction);
    MazeState s = params.exploring_starts ? exploring_start(cfg, objective, rng) : initial;
    while (!s.terminal) {
      table.mark(s);
      double* q = table.row(s);
      const Action a = epsilon_greedy(q, epsilon, rng);
      const maze::StepResult r = maze::step(s, a, cfg, profile);
      double target = r.reward;
      if (!absorbing(s, r.next, cfg, profile)) {
        const double* next_q = table.row(r.next);
        target += params.discount * *std::max_element(next_q, next_q + maze::kNumActions);
      }
      double& value = q[static_cast<int>(a)];
      value += params.learning_rate * (target - value);
      s = r.next;
    }
  }

  TrainingMeta meta;
  meta.episodes = params.episodes;
  meta.learning_rate = params.learning_rate;
  meta.learning_rate_schedule = "constant";
  meta.discount = params.discount;
  meta.epsilon_start = params.epsilon_start;
  meta.epsilon_end = params.epsilon_end;
  meta.epsilon_decay_fraction = params.epsilon_decay_fraction;
  meta.seed = seed;

  std::vector<std::string> actions;
  for (Action a : maze::kActions) actions.emplace_back(maze::to_string(a));
  ExpertModel draft(id.empty() ? default_expert_id(objective) : id, Domain::Maze, objective, actions,
                    table.export_visited(cfg), meta);
  meta.final_residual = maze_bellman_residual(draft, cfg);
  meta.converged = meta.final_residual < params.residual_threshold;
  return ExpertModel(draft.id(), Domain::Maze, objective, std::move(actions), draft.q(), meta);
}

double maze_bellman_residual(const ExpertModel& model, const MazeConfig& cfg) {
  const maze::RewardProfile profile = objective_profile(model.objective());
  const double gamma = model.meta().discount;
  double worst = 0.0;
  for (const auto& [key, values] : model.q()) {
    const MazeState s = parse_maze_key(key);
    for (std::size_t a = 0; a < maze::kNumActions; ++a) {
      const maze::StepResult r = maze::step(s, maze::kActions[a], cfg, profile);
      double target = r.reward;
      if (!absorbing(s, r.next, cfg, profile)) {
        const std::vector<double>* next = model.row(maze::state_key(r.next, cfg));
        target += gamma * (next ? *std::max_element(next->begin(), next->end()) : 0.0);
      }
      worst = std::max(worst, std::abs(values[a] - target));
    }
  }
  return worst;
}

Action greedy_action(const ExpertModel& model, const MazeState& state, const MazeConfig& cfg) {
  const ActionScores scores = score_actions(model, maze::state_key(state, cfg));
  return maze::kActions[scores.argmax];
}

ExpertModel train_power_expert(Objective objective, const wireless::WirelessContext& ctx,
                               const BanditTrainingParams& params, std::uint64_t seed, std::string id) {
  ctx.validate();
  const wireless::QosMetric metric = metric_for(objective);
  const std::vector<double>& grid = ctx.market.power_grid;

  // The environment is deterministic, so each arm's payoff is evaluated once.
  std::vector<double> payoff;
  std::ostringstream infeasible;
  for (double p : grid) {
    const wireless::UtilityPoint pt = wireless::nsp_utility(ctx, metric, p);
    if (!pt.feasible) infeasible << ' ' << wireless::format_sig12(p);
    payoff.push_back(pt.utility);
  }
  if (!infeasible.str().empty()) {
    throw InfeasibleError("power grid has infeasible levels for " + std::string(wireless::to_string(metric)) +
                          " (W):" + infeasible.str());
  }

  Rng rng(seed);
  std::vector<double> q(grid.size(), 0.0);
  std::vector<long> pulls(grid.size(), 0);
  const int budget = std::max(params.pulls, 0);
  for (int t = 0; t < budget; ++t) {
    std::size_t arm;
    if (static_cast<std::size_t>(t) < grid.size()) {
      arm = static_cast<std::size_t>(t);  // one initial pull per arm
    } else {
      const double epsilon =
          epsilon_at(t, budget, params.epsilon_start, params.epsilon_end, params.epsilon_decay_fraction);
      arm = uniform01(rng) < epsilon ? uniform_index(rng, grid.size()) : argmax_lowest(q);
    }
    ++pulls[arm];
    q[arm] += (payoff[arm] - q[arm]) / static_cast<double>(pulls[arm]);
  }

  TrainingMeta meta;
  meta.episodes = budget;
  meta.learning_rate_schedule = "1/n";
  meta.discount = 1.0;
  meta.epsilon_start = params.epsilon_start;
  meta.epsilon_end = params.epsilon_end;
  meta.epsilon_decay_fraction = params.epsilon_decay_fraction;
  meta.seed = seed;
  double residual = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) residual = std::max(residual, std::abs(q[i] - payoff[i]));
  meta.final_residual = residual;
  meta.converged = residual < params.residual_threshold;

  std::vector<std::string> actions;
  for (double p : grid) actions.push_back(wireless::format_sig12(p));
  QTable table;
  table.emplace(std::string(kPowerStateKey), std::move(q));
  return ExpertModel(id.empty() ? default_expert_id(objective) : std::move(id), Domain::Power, objective,
                     std::move(actions), std::move(table), meta);
}

}  // namespace moe::experts

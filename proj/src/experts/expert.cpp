// SPDX-License-Identifier: Apache-2.0
#include "moe/experts/expert.hpp"

#include <algorithm>
#include <cmath>

namespace moe {

std::string_view to_string(Objective o) {
  switch (o) {
    case Objective::GoToGoal: return "GoToGoal";
    case Objective::CollectPrize: return "CollectPrize";
    case Objective::AvoidTrap: return "AvoidTrap";
    case Objective::MinimizeOp: return "minimize-OP";
    case Objective::MaximizeDr: return "maximize-DR";
    case Objective::MaximizeTp: return "maximize-TP";
    case Objective::MinimizeBep: return "minimize-BEP";
  }
  return "?";
}

Objective objective_from_string(std::string_view name) {
  for (Objective o : kAllObjectives) {
    if (to_string(o) == name) return o;
  }
  throw std::invalid_argument("unknown objective '" + std::string(name) + "'");
}

bool is_maze_objective(Objective o) {
  return o == Objective::GoToGoal || o == Objective::CollectPrize || o == Objective::AvoidTrap;
}

}  // namespace moe

namespace moe::experts {

std::string_view to_string(Domain d) { return d == Domain::Maze ? "maze" : "power"; }

Domain domain_from_string(std::string_view name) {
  if (name == "maze") return Domain::Maze;
  if (name == "power") return Domain::Power;
  throw std::invalid_argument("unknown expert domain '" + std::string(name) + "'");
}

ExpertModel::ExpertModel(std::string id, Domain domain, Objective objective, std::vector<std::string> actions,
                         QTable q, TrainingMeta meta)
    : id_(std::move(id)),
      domain_(domain),
      objective_(objective),
      actions_(std::move(actions)),
      q_(std::move(q)),
      meta_(std::move(meta)) {
  if (id_.empty()) throw std::invalid_argument("expert id must be nonempty");
  if (actions_.empty()) throw std::invalid_argument("expert '" + id_ + "' has no actions");
  for (const auto& [key, values] : q_) {
    if (values.size() != actions_.size()) {
      throw std::invalid_argument("expert '" + id_ + "': row '" + key + "' has " + std::to_string(values.size()) +
                                  " values for " + std::to_string(actions_.size()) + " actions");
    }
    if (!std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); })) {
      throw std::invalid_argument("expert '" + id_ + "': row '" + key + "' holds a non-finite value");
    }
  }
}

const std::vector<double>* ExpertModel::row(std::string_view state_key) const {
  const auto it = q_.find(state_key);
  return it == q_.end() ? nullptr : &it->second;
}

std::size_t argmax_lowest(std::span<const double> values) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

ActionScores normalize_scores(std::span<const double> raw) {
  ActionScores out;
  out.raw.assign(raw.begin(), raw.end());
  if (raw.empty()) return out;
  const auto [lo_it, hi_it] = std::minmax_element(raw.begin(), raw.end());
  const double lo = *lo_it;
  const double span = *hi_it - lo;
  out.argmax = argmax_lowest(raw);
  if (span == 0.0) {
    out.scores.assign(raw.size(), 0.5);
    out.degenerate = true;
    return out;
  }
  out.scores.reserve(raw.size());
  for (double v : raw) out.scores.push_back((v - lo) / span);
  return out;
}

ActionScores score_actions(const ExpertModel& model, std::string_view state_key) {
  const bool power_key = state_key == kPowerStateKey;
  if (model.domain() == Domain::Power && !power_key) {
    throw DomainMismatchError("power expert '" + model.id() + "' queried with maze state '" +
                              std::string(state_key) + "'");
  }
  if (model.domain() == Domain::Maze && (power_key || state_key.find('|') == std::string_view::npos)) {
    throw DomainMismatchError("maze expert '" + model.id() + "' queried with non-maze state '" +
                              std::string(state_key) + "'");
  }
  if (const std::vector<double>* row = model.row(state_key)) return normalize_scores(*row);
  if (model.domain() == Domain::Power) {
    throw DomainMismatchError("power expert '" + model.id() + "' has no trained state");
  }
  const std::vector<double> zeros(model.actions().size(), 0.0);
  ActionScores out = normalize_scores(zeros);
  out.unseen = true;
  return out;
}

}  // namespace moe::experts

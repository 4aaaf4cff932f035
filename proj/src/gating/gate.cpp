// SPDX-License-Identifier: Apache-2.0
#include "moe/gating/gate.hpp"

#include <algorithm>
#include <cmath>

#include "moe/experts/training.hpp"

namespace moe::gating {

std::string_view to_string(GateKind k) {
  switch (k) {
    case GateKind::Scripted: return "scripted";
    case GateKind::Llm: return "llm";
    case GateKind::Trained: return "trained";
  }
  return "?";
}

GateKind gate_kind_from_string(std::string_view name) {
  if (name == "scripted") return GateKind::Scripted;
  if (name == "llm") return GateKind::Llm;
  if (name == "trained") return GateKind::Trained;
  throw std::invalid_argument("unknown gate kind '" + std::string(name) + "'");
}

ExpertRegistry::ExpertRegistry(std::vector<experts::ExpertPtr> experts) {
  for (auto& e : experts) add(std::move(e));
}

void ExpertRegistry::add(experts::ExpertPtr expert) {
  if (!expert) throw std::invalid_argument("registry: null expert");
  if (contains(expert->id())) throw std::invalid_argument("registry: duplicate expert id '" + expert->id() + "'");
  experts_.push_back(std::move(expert));
}

bool ExpertRegistry::contains(std::string_view id) const {
  return std::any_of(experts_.begin(), experts_.end(), [id](const auto& e) { return e->id() == id; });
}

const experts::ExpertModel& ExpertRegistry::get(std::string_view id) const {
  for (const auto& e : experts_) {
    if (e->id() == id) return *e;
  }
  throw std::out_of_range("registry has no expert '" + std::string(id) + "'");
}

std::vector<experts::ExpertPtr> ExpertRegistry::with_objective(Objective o) const {
  std::vector<experts::ExpertPtr> out;
  for (const auto& e : experts_) {
    if (e->objective() == o) out.push_back(e);
  }
  return out;
}

std::vector<Objective> resolve_objective(Objective o, const ExpertRegistry& registry) {
  if (!registry.with_objective(o).empty()) return {o};
  if (o == Objective::MaximizeTp && !registry.with_objective(Objective::MinimizeOp).empty() &&
      !registry.with_objective(Objective::MaximizeDr).empty()) {
    return {Objective::MinimizeOp, Objective::MaximizeDr};
  }
  return {};
}

std::vector<std::string> select_by_coverage(const FormulatedObjective& obj, const ExpertRegistry& registry) {
  if (registry.empty()) throw std::invalid_argument("select_experts: registry is empty");
  std::vector<std::string> ids;
  for (Objective o : obj.tags) {
    const std::vector<Objective> resolved = resolve_objective(o, registry);
    if (resolved.empty()) {
      throw NoExpertAvailable(o, "no expert available for objective '" + std::string(to_string(o)) + "'");
    }
    for (Objective r : resolved) {
      const std::string& id = registry.with_objective(r).front()->id();
      if (std::find(ids.begin(), ids.end(), id) == ids.end()) ids.push_back(id);
    }
  }
  return ids;
}

std::vector<double> normalize_weights(std::span<const double> weights, std::size_t expected) {
  if (weights.size() != expected) {
    throw GateError("expected " + std::to_string(expected) + " weights, got " + std::to_string(weights.size()));
  }
  double total = 0.0;
  for (double w : weights) {
    if (!std::isfinite(w) || w < 0.0) throw GateError("weights must be finite and nonnegative");
    total += w;
  }
  if (!(total > 0.0)) throw GateError("weights must not all be zero");
  std::vector<double> out;
  out.reserve(weights.size());
  for (double w : weights) out.push_back(w / total);
  return out;
}

Fusion fuse(std::span<const experts::ActionScores> scores, std::span<const double> weights) {
  if (scores.empty() || scores.size() != weights.size()) {
    throw GateError("fuse: need one weight per expert score vector");
  }
  Fusion f;
  f.scores.assign(scores.front().scores.size(), 0.0);
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (scores[i].scores.size() != f.scores.size()) throw GateError("fuse: experts disagree on the action set");
    if (weights[i] == 0.0) continue;
    for (std::size_t a = 0; a < f.scores.size(); ++a) f.scores[a] += weights[i] * scores[i].scores[a];
  }
  f.argmax = experts::argmax_lowest(f.scores);
  return f;
}

std::vector<experts::ActionScores> collect_scores(std::span<const std::string> selected,
                                                  const ExpertRegistry& registry, std::string_view state_key) {
  if (selected.empty()) throw GateError("no experts selected");
  const experts::ExpertModel& first = registry.get(selected.front());
  std::vector<experts::ActionScores> out;
  out.reserve(selected.size());
  for (const std::string& id : selected) {
    const experts::ExpertModel& e = registry.get(id);
    if (e.domain() != first.domain() || e.actions() != first.actions()) {
      throw experts::DomainMismatchError("experts '" + first.id() + "' and '" + id +
                                         "' do not share a domain and action set");
    }
    out.push_back(experts::score_actions(e, state_key));
  }
  return out;
}

GateDecision fuse_decision(FormulatedObjective objectives, std::vector<std::string> selected,
                           std::vector<double> weights, const ExpertRegistry& registry, std::string_view state_key) {
  const std::vector<experts::ActionScores> scores = collect_scores(selected, registry, state_key);
  const Fusion f = fuse(scores, weights);
  GateDecision d;
  d.objectives = std::move(objectives);
  d.selected = std::move(selected);
  d.weights = std::move(weights);
  d.fused_scores = f.scores;
  d.action = f.argmax;
  d.action_label = registry.get(d.selected.front()).actions()[f.argmax];
  return d;
}

GateDecision decide(Gate& gate, const UserRequirement& req, const ExpertRegistry& registry,
                    std::string_view state_key) {
  const FormulatedObjective obj = gate.formulate_objective(req);
  const std::vector<std::string> selected = gate.select_experts(obj, registry);
  return gate.combine_inferences(selected, obj, registry, state_key, req.context);
}

NspOutcome execute_decision(const GateDecision& decision, const wireless::WirelessContext& ctx) {
  const std::vector<double>& grid = ctx.market.power_grid;
  if (decision.action >= grid.size()) throw std::out_of_range("decision action is outside the power grid");
  NspOutcome out;
  out.power = grid[decision.action];
  out.outage = wireless::outage_probability(ctx.channel, out.power);
  out.data_rate = wireless::data_rate(ctx.channel, out.power);
  out.throughput = (1.0 - out.outage) * out.data_rate;
  for (wireless::QosMetric m : wireless::kAllMetrics) {
    out.utility[static_cast<std::size_t>(m)] = wireless::nsp_utility(ctx, m, out.power).utility;
  }
  return out;
}

maze::StepResult execute_decision(const GateDecision& decision, const maze::MazeState& state,
                                  const maze::MazeConfig& cfg, maze::Mission mission) {
  if (decision.action >= maze::kNumActions) throw std::out_of_range("decision action is not a maze move");
  return maze::step(state, maze::kActions[decision.action], cfg, mission);
}

wireless::QosMetric target_metric(const FormulatedObjective& obj) {
  const auto has = [&obj](Objective o) { return std::find(obj.tags.begin(), obj.tags.end(), o) != obj.tags.end(); };
  if (has(Objective::MaximizeTp) || (has(Objective::MinimizeOp) && has(Objective::MaximizeDr))) {
    return wireless::QosMetric::Throughput;
  }
  if (has(Objective::MinimizeOp)) return wireless::QosMetric::OpComplement;
  if (has(Objective::MaximizeDr)) return wireless::QosMetric::DataRate;
  throw std::invalid_argument("objectives carry no power QoS metric");
}

FormulatedObjective mission_objectives(maze::Mission mission) {
  switch (mission) {
    case maze::Mission::GoalTrap: return {{Objective::GoToGoal, Objective::AvoidTrap}, "mission Goal+Trap"};
    case maze::Mission::GoalPrize: return {{Objective::CollectPrize, Objective::GoToGoal}, "mission Goal+Prize"};
    case maze::Mission::GoalPrizeTrap:
      return {{Objective::CollectPrize, Objective::GoToGoal, Objective::AvoidTrap}, "mission Goal+Prize+Trap"};
  }
  return {};
}

}  // namespace moe::gating

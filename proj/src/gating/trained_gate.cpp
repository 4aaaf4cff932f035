// SPDX-License-Identifier: Apache-2.0
#include "moe/gating/trained_gate.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "moe/core/random.hpp"
#include "moe/experts/training.hpp"

namespace moe::gating {

using nlohmann::json;

namespace {

constexpr int kGateFormatVersion = 1;

std::vector<double> equal_weights(std::size_t n) { return std::vector<double>(n, 1.0 / static_cast<double>(n)); }

std::vector<double> simplex(const std::vector<double>& raw) {
  return normalize_weights(raw, raw.size());
}

bool absorbing(const maze::MazeState& prev, const maze::MazeState& next, const maze::MazeConfig& cfg) {
  return next.reached_goal || (cfg.trap_terminates && next.trap_hits > prev.trap_hits);
}

}  // namespace

std::vector<std::vector<double>> weight_action_space(std::size_t num_experts) {
  if (num_experts == 0) throw std::invalid_argument("weight_action_space: no experts");
  static constexpr double kLevels[] = {0.0, 0.5, 1.0};
  std::vector<std::vector<double>> out;
  std::vector<std::size_t> digits(num_experts, 0);
  for (;;) {
    std::vector<double> v(num_experts);
    for (std::size_t i = 0; i < num_experts; ++i) v[i] = kLevels[digits[i]];
    if (std::any_of(v.begin(), v.end(), [](double w) { return w > 0.0; })) out.push_back(std::move(v));
    std::size_t i = num_experts;
    while (i > 0 && ++digits[i - 1] == 3) digits[--i] = 0;
    if (i == 0) break;
  }
  return out;
}

TrainedGate::TrainedGate(maze::Mission mission, std::vector<std::string> experts,
                         std::vector<std::vector<double>> actions,
                         std::map<std::string, std::vector<double>, std::less<>> q,
                         std::vector<LearningCurvePoint> curve, bool converged)
    : mission_(mission),
      experts_(std::move(experts)),
      actions_(std::move(actions)),
      q_(std::move(q)),
      curve_(std::move(curve)),
      converged_(converged) {
  if (experts_.empty()) throw std::invalid_argument("trained gate: no experts");
  if (actions_.empty()) throw std::invalid_argument("trained gate: empty action space");
  for (const auto& a : actions_) {
    if (a.size() != experts_.size()) throw std::invalid_argument("trained gate: weight vector of wrong length");
    simplex(a);
  }
  for (const auto& [key, row] : q_) {
    if (row.size() != actions_.size()) throw std::invalid_argument("trained gate: Q row of wrong length at " + key);
  }
}

bool TrainedGate::operator==(const TrainedGate& o) const {
  auto same_curve = [](const std::vector<LearningCurvePoint>& a, const std::vector<LearningCurvePoint>& b) {
    return std::equal(a.begin(), a.end(), b.begin(), b.end(), [](const auto& x, const auto& y) {
      return x.episode == y.episode && x.success_rate == y.success_rate && x.mean_reward == y.mean_reward;
    });
  };
  return mission_ == o.mission_ && experts_ == o.experts_ && actions_ == o.actions_ && q_ == o.q_ &&
         same_curve(curve_, o.curve_) && converged_ == o.converged_;
}

FormulatedObjective TrainedGate::formulate_objective(const UserRequirement&) {
  FormulatedObjective obj = mission_objectives(mission_);
  obj.note = "mission " + std::string(maze::to_string(mission_)) + " from configuration";
  return obj;
}

std::vector<std::string> TrainedGate::select_experts(const FormulatedObjective&, const ExpertRegistry& registry) {
  for (const std::string& id : experts_) {
    if (!registry.contains(id)) throw GateError("trained gate expects expert '" + id + "' in the registry");
  }
  return experts_;
}

std::vector<double> TrainedGate::weights_for(std::string_view state_key) const {
  const auto it = q_.find(state_key);
  if (it == q_.end()) return equal_weights(experts_.size());
  return simplex(actions_[experts::argmax_lowest(it->second)]);
}

GateDecision TrainedGate::combine_inferences(const std::vector<std::string>& selected, const FormulatedObjective& obj,
                                             const ExpertRegistry& registry, std::string_view state_key,
                                             const GateContext&) {
  if (selected != experts_) throw GateError("trained gate was trained on a different expert list");
  GateDecision d = fuse_decision(obj, selected, weights_for(state_key), registry, state_key);
  d.trace.push_back("state " + std::string(state_key) + (q_.count(state_key) ? "" : " (unseen, equal weights)"));
  d.trace.push_back("fused action: " + d.action_label);
  return d;
}

TrainedGate train_gate(const ExpertRegistry& registry, const maze::MazeConfig& cfg, maze::Mission mission,
                       const GateTrainingParams& params, std::uint64_t seed) {
  if (params.episodes < 0 || params.checkpoint_every <= 0) {
    throw std::invalid_argument("train_gate: episodes must be nonnegative and checkpoint_every positive");
  }
  cfg.validate();
  const FormulatedObjective obj = mission_objectives(mission);
  const std::vector<std::string> selected = select_by_coverage(obj, registry);
  for (const std::string& id : selected) {
    if (registry.get(id).domain() != experts::Domain::Maze) {
      throw experts::DomainMismatchError("train_gate needs maze experts, got '" + id + "'");
    }
  }
  const std::vector<std::vector<double>> actions = weight_action_space(selected.size());
  std::vector<std::vector<double>> simplex_actions;
  for (const auto& a : actions) simplex_actions.push_back(simplex(a));

  // Expert scores per state do not change during training.
  std::map<std::string, std::vector<experts::ActionScores>, std::less<>> score_cache;
  auto fused_move = [&](const std::string& key, std::size_t action) {
    auto it = score_cache.find(key);
    if (it == score_cache.end()) it = score_cache.emplace(key, collect_scores(selected, registry, key)).first;
    return maze::kActions[fuse(it->second, simplex_actions[action]).argmax];
  };

  std::map<std::string, std::vector<double>, std::less<>> q;
  auto row = [&](const std::string& key) -> std::vector<double>& {
    auto it = q.find(key);
    if (it == q.end()) it = q.emplace(key, std::vector<double>(actions.size(), 0.0)).first;
    return it->second;
  };

  Rng rng(seed);
  const maze::RewardProfile profile = maze::reward_profile(mission);
  std::vector<LearningCurvePoint> curve;
  int window_success = 0;
  double window_reward = 0.0;
  int window_count = 0;
  double window_max_delta = 0.0;
  for (int ep = 0; ep < params.episodes; ++ep) {
    const double eps = experts::epsilon_at(ep, params.episodes, params.epsilon_start, params.epsilon_end,
                                           params.epsilon_decay_fraction);
    maze::MazeState s = maze::reset(cfg);
    double total = 0.0;
    while (!s.terminal) {
      const std::string key = maze::state_key(s, cfg);
      std::vector<double>& qs = row(key);
      const std::size_t a =
          uniform01(rng) < eps ? uniform_index(rng, actions.size()) : experts::argmax_lowest(qs);
      const maze::StepResult r = maze::step(s, fused_move(key, a), cfg, profile);
      double target = r.reward;
      if (!absorbing(s, r.next, cfg)) {
        const std::vector<double>& next = row(maze::state_key(r.next, cfg));
        target += params.discount * *std::max_element(next.begin(), next.end());
      }
      const double delta = params.learning_rate * (target - qs[a]);
      qs[a] += delta;
      window_max_delta = std::max(window_max_delta, std::abs(delta));
      total += r.reward;
      s = r.next;
    }
    window_success += maze::mission_success(mission, s, cfg) ? 1 : 0;
    window_reward += total;
    ++window_count;
    if ((ep + 1) % params.checkpoint_every == 0 || ep + 1 == params.episodes) {
      curve.push_back({ep + 1, static_cast<double>(window_success) / window_count, window_reward / window_count});
      window_success = 0;
      window_reward = 0.0;
      window_count = 0;
      if (ep + 1 != params.episodes) window_max_delta = 0.0;
    }
  }
  const bool converged = params.episodes > 0 && window_max_delta <= params.residual_threshold;
  return TrainedGate(mission, selected, actions, std::move(q), std::move(curve), converged);
}

json to_json(const TrainedGate& gate) {
  json curve = json::array();
  for (const auto& p : gate.learning_curve()) {
    curve.push_back({{"episode", p.episode}, {"success_rate", p.success_rate}, {"mean_reward", p.mean_reward}});
  }
  json q = json::object();
  for (const auto& [key, values] : gate.q()) q[key] = values;
  return {{"format_version", kGateFormatVersion},
          {"kind", "trained-gate"},
          {"mission", std::string(maze::to_string(gate.mission()))},
          {"experts", gate.experts()},
          {"weight_actions", gate.actions()},
          {"q", std::move(q)},
          {"learning_curve", std::move(curve)},
          {"converged", gate.converged()}};
}

TrainedGate trained_gate_from_json(const json& doc) {
  try {
    if (doc.at("format_version").get<int>() != kGateFormatVersion) {
      throw std::runtime_error("trained gate format_version " + doc.at("format_version").dump() + " is not supported");
    }
    std::map<std::string, std::vector<double>, std::less<>> q;
    for (const auto& [key, values] : doc.at("q").items()) q.emplace(key, values.get<std::vector<double>>());
    std::vector<LearningCurvePoint> curve;
    for (const json& p : doc.at("learning_curve")) {
      curve.push_back({p.at("episode").get<int>(), p.at("success_rate").get<double>(), p.at("mean_reward").get<double>()});
    }
    return TrainedGate(maze::mission_from_string(doc.at("mission").get<std::string>()),
                       doc.at("experts").get<std::vector<std::string>>(),
                       doc.at("weight_actions").get<std::vector<std::vector<double>>>(), std::move(q),
                       std::move(curve), doc.at("converged").get<bool>());
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("trained gate file is malformed: ") + e.what());
  }
}

void save_trained_gate(const TrainedGate& gate, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << to_json(gate).dump(2) << "\n";
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

TrainedGate load_trained_gate(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::runtime_error("trained gate file " + path.string() + " is not JSON: " + e.what());
  }
  return trained_gate_from_json(doc);
}

}  // namespace moe::gating

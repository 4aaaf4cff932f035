// SPDX-License-Identifier: Apache-2.0
#pragma once

// The mixture-of-experts decision layer. A gate turns a requirement into
// objectives, picks experts that cover them, and fuses the experts'
// normalized action scores with a weight vector on the simplex.

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "moe/experts/expert.hpp"
#include "moe/maze/maze.hpp"
#include "moe/wireless/kernel.hpp"

namespace moe::gating {

using GateContext = std::variant<std::monostate, wireless::WirelessContext, maze::MazeConfig>;

struct UserRequirement {
  std::string text;
  GateContext context;
};

struct FormulatedObjective {
  std::vector<Objective> tags;
  std::string note;
};

struct GateDecision {
  FormulatedObjective objectives;
  std::vector<std::string> selected;
  std::vector<double> weights;      // one per selected expert, on the simplex
  std::vector<double> fused_scores; // per action
  std::size_t action = 0;
  std::string action_label;
  std::vector<std::string> trace;
};

enum class GateKind { Scripted, Llm, Trained };

std::string_view to_string(GateKind k);
GateKind gate_kind_from_string(std::string_view name);

class UnrecognizedRequirement : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NoExpertAvailable : public std::runtime_error {
 public:
  NoExpertAvailable(Objective uncovered, const std::string& message)
      : std::runtime_error(message), uncovered_(uncovered) {}
  Objective uncovered() const { return uncovered_; }

 private:
  Objective uncovered_;
};

// Gate produced or received output it cannot use (bad weights, exhausted retries).
class GateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ExpertRegistry {
 public:
  ExpertRegistry() = default;
  explicit ExpertRegistry(std::vector<experts::ExpertPtr> experts);

  void add(experts::ExpertPtr expert);
  const experts::ExpertModel& get(std::string_view id) const;  // throws std::out_of_range
  bool contains(std::string_view id) const;
  std::vector<experts::ExpertPtr> with_objective(Objective o) const;
  const std::vector<experts::ExpertPtr>& all() const { return experts_; }
  bool empty() const { return experts_.empty(); }

 private:
  std::vector<experts::ExpertPtr> experts_;
};

/// Objectives an objective resolves to against a registry: itself if some
/// expert carries it, otherwise a known decomposition (maximize-TP into
/// minimize-OP + maximize-DR). Empty when neither is available.
std::vector<Objective> resolve_objective(Objective o, const ExpertRegistry& registry);

/// First matching expert for every objective, deduplicated, in objective
/// order. Throws NoExpertAvailable naming the first uncovered objective.
std::vector<std::string> select_by_coverage(const FormulatedObjective& obj, const ExpertRegistry& registry);

/// Validates and rescales to sum 1. Throws GateError on negative, non-finite
/// or all-zero input, or a length other than `expected`.
std::vector<double> normalize_weights(std::span<const double> weights, std::size_t expected);

struct Fusion {
  std::vector<double> scores;
  std::size_t argmax = 0;  // lowest index on ties
};

/// Sum_i w_i * normalized_score_i(a). Weights must already be on the simplex.
Fusion fuse(std::span<const experts::ActionScores> scores, std::span<const double> weights);

/// Scores every selected expert at one state; all must share domain and actions.
std::vector<experts::ActionScores> collect_scores(std::span<const std::string> selected,
                                                  const ExpertRegistry& registry, std::string_view state_key);

/// Fills fused_scores, action and action_label from weights.
GateDecision fuse_decision(FormulatedObjective objectives, std::vector<std::string> selected,
                           std::vector<double> weights, const ExpertRegistry& registry, std::string_view state_key);

class Gate {
 public:
  virtual ~Gate() = default;
  virtual GateKind kind() const = 0;
  virtual FormulatedObjective formulate_objective(const UserRequirement& req) = 0;
  virtual std::vector<std::string> select_experts(const FormulatedObjective& obj, const ExpertRegistry& registry) = 0;
  virtual GateDecision combine_inferences(const std::vector<std::string>& selected, const FormulatedObjective& obj,
                                          const ExpertRegistry& registry, std::string_view state_key,
                                          const GateContext& context) = 0;
};

/// Steps 1 to 3 for one state.
GateDecision decide(Gate& gate, const UserRequirement& req, const ExpertRegistry& registry,
                    std::string_view state_key);

// --- execution -------------------------------------------------------------

struct NspOutcome {
  double power = 0.0;
  double outage = 0.0;
  double data_rate = 0.0;
  double throughput = 0.0;
  std::array<double, 3> utility{};  // indexed by QosMetric
};

/// Commits the decided grid power and measures it.
NspOutcome execute_decision(const GateDecision& decision, const wireless::WirelessContext& ctx);

/// Applies the decided move; throws maze::MazeError from a terminal state.
maze::StepResult execute_decision(const GateDecision& decision, const maze::MazeState& state,
                                  const maze::MazeConfig& cfg, maze::Mission mission);

/// QoS metric a power objective set is scored on: TP for OP+DR or maximize-TP.
wireless::QosMetric target_metric(const FormulatedObjective& obj);

/// Objectives a maze mission stands for.
FormulatedObjective mission_objectives(maze::Mission mission);

}  // namespace moe::gating

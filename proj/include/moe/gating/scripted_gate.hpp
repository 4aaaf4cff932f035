// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "moe/gating/gate.hpp"

namespace moe::gating {

struct KeywordRule {
  std::vector<std::string> keywords;  // each matched as a token prefix; spaces span tokens
  std::vector<Objective> objectives;
  std::string note;
};

/// The fixed, ordered rule table of the scripted gate.
const std::vector<KeywordRule>& default_keyword_rules();

/// Deterministic stand-in for the LLM: keyword rules for objectives, coverage
/// for selection, equal weights for fusion. Pure and thread-safe.
class ScriptedGate final : public Gate {
 public:
  ScriptedGate() : rules_(default_keyword_rules()) {}
  explicit ScriptedGate(std::vector<KeywordRule> rules) : rules_(std::move(rules)) {}

  GateKind kind() const override { return GateKind::Scripted; }

  /// Objectives of every rule with a keyword in the text, ordered by where
  /// the rule first matches; an objective already produced is not repeated.
  FormulatedObjective formulate_objective(const UserRequirement& req) override;
  std::vector<std::string> select_experts(const FormulatedObjective& obj, const ExpertRegistry& registry) override;
  GateDecision combine_inferences(const std::vector<std::string>& selected, const FormulatedObjective& obj,
                                  const ExpertRegistry& registry, std::string_view state_key,
                                  const GateContext& context) override;

 private:
  std::vector<KeywordRule> rules_;
};

}  // namespace moe::gating

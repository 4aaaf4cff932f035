// SPDX-License-Identifier: Apache-2.0
#include "moe/gating/scripted_gate.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <sstream>

namespace moe::gating {

namespace {

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (char c : text) {
    if (std::isalnum(static_cast<unsigned char>(c))) {
      current += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

bool starts_with(const std::string& token, const std::string& prefix) { return token.rfind(prefix, 0) == 0; }

// Token index where the keyword first matches, or npos.
std::size_t find_keyword(const std::vector<std::string>& tokens, const std::string& keyword) {
  const std::vector<std::string> parts = tokenize(keyword);
  if (parts.empty() || parts.size() > tokens.size()) return std::string::npos;
  for (std::size_t i = 0; i + parts.size() <= tokens.size(); ++i) {
    bool all = true;
    for (std::size_t j = 0; j < parts.size() && all; ++j) {
      // Inner words must match whole; the last may be a prefix.
      all = j + 1 == parts.size() ? starts_with(tokens[i + j], parts[j]) : tokens[i + j] == parts[j];
    }
    if (all) return i;
  }
  return std::string::npos;
}

}  // namespace

const std::vector<KeywordRule>& default_keyword_rules() {
  static const std::vector<KeywordRule> rules{
      {{"safe", "trap"}, {Objective::AvoidTrap}, "safety requested: avoid traps"},
      {{"prize", "explore", "obtain"}, {Objective::CollectPrize}, "prize collection requested"},
      {{"goal", "arrive", "shortest"}, {Objective::GoToGoal}, "reach the goal"},
      {{"call", "continuity", "uninterrupted voice"}, {Objective::MinimizeOp}, "continuity needs low outage"},
      {{"streaming", "video", "rate", "buffer"}, {Objective::MaximizeDr}, "high data rate requested"},
      {{"seamless", "gaming", "smooth"},
       {Objective::MinimizeOp, Objective::MaximizeDr},
       "smooth sessions need throughput, decomposed into minimize-OP and maximize-DR"},
      {{"accuracy", "image", "medical"}, {Objective::MinimizeBep}, "accuracy needs low bit error probability"},
  };
  return rules;
}

FormulatedObjective ScriptedGate::formulate_objective(const UserRequirement& req) {
  const std::vector<std::string> tokens = tokenize(req.text);
  if (tokens.empty()) throw UnrecognizedRequirement("requirement text is empty");

  struct Hit {
    std::size_t position;
    std::size_t rule;
  };
  std::vector<Hit> hits;
  for (std::size_t r = 0; r < rules_.size(); ++r) {
    std::size_t first = std::string::npos;
    for (const std::string& kw : rules_[r].keywords) first = std::min(first, find_keyword(tokens, kw));
    if (first != std::string::npos) hits.push_back({first, r});
  }
  if (hits.empty()) throw UnrecognizedRequirement("no rule matches requirement: \"" + req.text + "\"");
  std::stable_sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) { return a.position < b.position; });

  FormulatedObjective out;
  for (const Hit& h : hits) {
    const KeywordRule& rule = rules_[h.rule];
    for (Objective o : rule.objectives) {
      if (std::find(out.tags.begin(), out.tags.end(), o) == out.tags.end()) out.tags.push_back(o);
    }
    if (!out.note.empty()) out.note += "; ";
    out.note += rule.note;
  }
  return out;
}

std::vector<std::string> ScriptedGate::select_experts(const FormulatedObjective& obj,
                                                      const ExpertRegistry& registry) {
  return select_by_coverage(obj, registry);
}

GateDecision ScriptedGate::combine_inferences(const std::vector<std::string>& selected,
                                              const FormulatedObjective& obj, const ExpertRegistry& registry,
                                              std::string_view state_key, const GateContext&) {
  const std::vector<double> equal(selected.size(), 1.0);
  GateDecision d = fuse_decision(obj, selected, normalize_weights(equal, selected.size()), registry, state_key);
  d.trace.push_back("objectives: " + obj.note);
  d.trace.push_back("equal weights over " + std::to_string(selected.size()) + " expert(s)");
  d.trace.push_back("fused action: " + d.action_label);
  return d;
}

}  // namespace moe::gating

// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "moe/gating/gate.hpp"
#include "moe/llm/client.hpp"

namespace moe::gating {

/// The one reply shape the gate accepts.
struct StructuredReply {
  std::vector<std::string> objectives;
  std::vector<std::string> experts;
  std::vector<double> weights;
  std::string rationale;
};

class ReplySchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Exactly one fenced block holding an object with exactly the keys
/// objectives, experts, weights, rationale. Anything else throws ReplySchemaError.
StructuredReply parse_structured_reply(std::string_view content);

struct LlmGateOptions {
  std::string model{llm::kDefaultModel};
  int max_tokens = 512;
  int max_retries = 2;  // re-asks after a rejected reply
};

/// Gate driven by chat rounds against any backend (live or replay). One
/// round per step; a rejected reply is sent back with the reason and asked
/// again, then GateError. Combination weights are cached per prompt so a
/// maze episode asks once, not once per move. Not shareable mid-request.
class LlmGate final : public Gate {
 public:
  LlmGate(llm::ChatBackend& backend, LlmGateOptions options = {});

  GateKind kind() const override { return GateKind::Llm; }
  FormulatedObjective formulate_objective(const UserRequirement& req) override;
  std::vector<std::string> select_experts(const FormulatedObjective& obj, const ExpertRegistry& registry) override;
  GateDecision combine_inferences(const std::vector<std::string>& selected, const FormulatedObjective& obj,
                                  const ExpertRegistry& registry, std::string_view state_key,
                                  const GateContext& context) override;

  /// Rationales returned so far, one per successful round.
  const std::vector<std::string>& rationales() const { return rationales_; }
  std::size_t requests_sent() const { return requests_sent_; }

 private:
  template <class Validate>
  auto ask(const std::string& system, const std::string& user, Validate&& validate)
      -> decltype(validate(std::declval<const StructuredReply&>()));

  llm::ChatBackend& backend_;
  LlmGateOptions options_;
  std::mutex in_flight_;
  std::map<std::string, std::vector<double>> weight_cache_;
  std::vector<std::string> rationales_;
  std::size_t requests_sent_ = 0;
};

/// Text summary of a gate context for prompts.
std::string describe_context(const GateContext& context);

}  // namespace moe::gating

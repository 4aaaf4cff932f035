// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <string>
#include <string_view>

namespace moe::gating::prompts {

// Raw template assets, compiled in from assets/prompts/.
extern const std::string_view objective_formulation;
extern const std::string_view expert_selection;
extern const std::string_view inference_combination;

struct RenderedPrompt {
  std::string name;
  int version = 0;
  std::string system;
  std::string user;
};

/// Splits a template into its [system]/[user] sections and substitutes
/// {{name}} placeholders. Unknown or unfilled placeholders throw.
RenderedPrompt render(std::string_view template_text, const std::map<std::string, std::string>& values);

}  // namespace moe::gating::prompts

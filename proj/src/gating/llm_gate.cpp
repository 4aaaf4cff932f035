// SPDX-License-Identifier: Apache-2.0
#include "moe/gating/llm_gate.hpp"

#include <algorithm>
#include <cmath>
#include <regex>
#include <sstream>

#include "moe/gating/prompts.hpp"
#include "moe/llm/client.hpp"

namespace moe::gating {

using nlohmann::json;

// --- reply parsing -----------------------------------------------------------

StructuredReply parse_structured_reply(std::string_view content) {
  static const std::regex fence(R"(```[A-Za-z]*[ \t]*\r?\n?([\s\S]*?)```)");
  const std::string text(content);
  auto begin = std::sregex_iterator(text.begin(), text.end(), fence);
  const auto count = std::distance(begin, std::sregex_iterator());
  if (count != 1) {
    throw ReplySchemaError("expected exactly one fenced block, found " + std::to_string(count));
  }
  json doc;
  try {
    doc = json::parse((*begin)[1].str());
  } catch (const json::parse_error& e) {
    throw ReplySchemaError(std::string("fenced block is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ReplySchemaError("fenced block is not a JSON object");
  static const std::vector<std::string> keys{"experts", "objectives", "rationale", "weights"};
  std::vector<std::string> present;
  for (const auto& item : doc.items()) present.push_back(item.key());
  if (present != keys) throw ReplySchemaError("object must have exactly the keys objectives, experts, weights, rationale");

  StructuredReply r;
  auto strings = [&doc](const char* key) {
    const json& arr = doc[key];
    if (!arr.is_array()) throw ReplySchemaError(std::string("'") + key + "' must be an array");
    std::vector<std::string> out;
    for (const json& v : arr) {
      if (!v.is_string()) throw ReplySchemaError(std::string("'") + key + "' must hold strings");
      out.push_back(v.get<std::string>());
    }
    return out;
  };
  r.objectives = strings("objectives");
  r.experts = strings("experts");
  if (!doc["weights"].is_array()) throw ReplySchemaError("'weights' must be an array");
  for (const json& v : doc["weights"]) {
    if (!v.is_number()) throw ReplySchemaError("'weights' must hold numbers");
    r.weights.push_back(v.get<double>());
  }
  if (!doc["rationale"].is_string()) throw ReplySchemaError("'rationale' must be a string");
  r.rationale = doc["rationale"].get<std::string>();
  return r;
}

// --- context summaries ---------------------------------------------------------

namespace {

std::string join(const std::vector<std::string>& items, std::string_view sep = ", ") {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += sep;
    out += items[i];
  }
  return out;
}

std::string objective_list(const FormulatedObjective& obj) {
  std::vector<std::string> names;
  for (Objective o : obj.tags) names.emplace_back(to_string(o));
  return join(names);
}

std::string vocabulary(const UserRequirement& req) {
  std::vector<std::string> names;
  const bool maze = std::holds_alternative<maze::MazeConfig>(req.context);
  const bool power = std::holds_alternative<wireless::WirelessContext>(req.context);
  for (Objective o : kAllObjectives) {
    if ((maze && !is_maze_objective(o)) || (power && is_maze_objective(o))) continue;
    names.emplace_back(to_string(o));
  }
  return join(names);
}

}  // namespace

std::string describe_context(const GateContext& context) {
  using wireless::format_sig12;
  if (const auto* w = std::get_if<wireless::WirelessContext>(&context)) {
    std::ostringstream s;
    const auto& ch = w->channel;
    const auto& mk = w->market;
    std::vector<std::string> grid;
    for (double p : mk.power_grid) grid.push_back(format_sig12(p));
    s << "downlink from a BS with " << ch.num_antennas << " antennas (MRT, Rayleigh fading, mean gain "
      << format_sig12(ch.fading_scale) << "), distance " << format_sig12(ch.distance) << " m, path-loss exponent "
      << format_sig12(ch.path_loss_exponent) << ", noise power " << format_sig12(ch.noise_power) << " W, bandwidth "
      << format_sig12(ch.bandwidth) << " Hz, outage threshold " << format_sig12(ch.outage_threshold)
      << " (linear SNR); provider utility = " << format_sig12(mk.payment_coeff) << " * normalized QoS - "
      << format_sig12(mk.cost_coeff) << " * power; transmit power options (W): " << join(grid);
    return s.str();
  }
  if (const auto* m = std::get_if<maze::MazeConfig>(&context)) {
    maze::MazeState s;
    s.walker = m->start;
    return "3x7 grid maze (W walker, G goal, P prize, T trap):\n" + maze::render_ascii(*m, s);
  }
  return "none";
}

// --- gate --------------------------------------------------------------------

LlmGate::LlmGate(llm::ChatBackend& backend, LlmGateOptions options) : backend_(backend), options_(std::move(options)) {
  if (options_.max_retries < 0) throw std::invalid_argument("max_retries must be nonnegative");
}

template <class Validate>
auto LlmGate::ask(const std::string& system, const std::string& user, Validate&& validate)
    -> decltype(validate(std::declval<const StructuredReply&>())) {
  std::lock_guard lock(in_flight_);
  llm::ChatRequest req;
  req.model = options_.model;
  req.temperature = 0.0;
  req.max_tokens = options_.max_tokens;
  req.messages = {{llm::Role::System, system}, {llm::Role::User, user}};
  std::string last_error;
  for (int attempt = 0; attempt <= options_.max_retries; ++attempt) {
    const llm::ChatResponse resp = backend_.complete(req);
    ++requests_sent_;
    try {
      const StructuredReply reply = parse_structured_reply(resp.content);
      auto result = validate(reply);
      rationales_.push_back(reply.rationale);
      return result;
    } catch (const ReplySchemaError& e) {
      last_error = e.what();
    } catch (const GateError& e) {
      last_error = e.what();
    }
    req.messages.push_back({llm::Role::Assistant, resp.content});
    req.messages.push_back({llm::Role::User, "Your reply was rejected: " + last_error +
                                                 ". Answer again with exactly one fenced json block of the "
                                                 "required shape."});
  }
  throw GateError("LLM reply rejected after " + std::to_string(options_.max_retries + 1) +
                  " attempts: " + last_error);
}

FormulatedObjective LlmGate::formulate_objective(const UserRequirement& req) {
  if (req.text.find_first_not_of(" \t\r\n") == std::string::npos) {
    throw UnrecognizedRequirement("requirement text is empty");
  }
  const prompts::RenderedPrompt p = prompts::render(
      prompts::objective_formulation,
      {{"vocabulary", vocabulary(req)}, {"requirement", req.text}, {"context", describe_context(req.context)}});
  return ask(p.system, p.user, [](const StructuredReply& r) {
    if (r.objectives.empty()) throw GateError("no objectives given");
    FormulatedObjective out;
    for (const std::string& name : r.objectives) {
      try {
        const Objective o = objective_from_string(name);
        if (std::find(out.tags.begin(), out.tags.end(), o) == out.tags.end()) out.tags.push_back(o);
      } catch (const std::invalid_argument&) {
        throw GateError("objective '" + name + "' is not in the vocabulary");
      }
    }
    out.note = r.rationale;
    return out;
  });
}

std::vector<std::string> LlmGate::select_experts(const FormulatedObjective& obj, const ExpertRegistry& registry) {
  if (registry.empty()) throw std::invalid_argument("select_experts: registry is empty");
  // Uncovered objectives cannot be fixed by asking; fail before the round trip.
  for (Objective o : obj.tags) {
    if (resolve_objective(o, registry).empty()) {
      throw NoExpertAvailable(o, "no expert available for objective '" + std::string(to_string(o)) + "'");
    }
  }
  std::string listing;
  for (const auto& e : registry.all()) {
    listing += "- " + e->id() + ": domain " + std::string(experts::to_string(e->domain())) + ", objective " +
               std::string(to_string(e->objective())) + "\n";
  }
  const prompts::RenderedPrompt p =
      prompts::render(prompts::expert_selection, {{"objectives", objective_list(obj)}, {"registry", listing}});
  return ask(p.system, p.user, [&](const StructuredReply& r) {
    if (r.experts.empty()) throw GateError("no experts selected");
    std::vector<std::string> ids;
    for (const std::string& id : r.experts) {
      if (!registry.contains(id)) throw GateError("expert '" + id + "' is not in the registry");
      if (std::find(ids.begin(), ids.end(), id) == ids.end()) ids.push_back(id);
    }
    for (Objective o : obj.tags) {
      for (Objective need : resolve_objective(o, registry)) {
        const bool covered = std::any_of(ids.begin(), ids.end(),
                                         [&](const std::string& id) { return registry.get(id).objective() == need; });
        if (!covered) throw GateError("objective '" + std::string(to_string(need)) + "' is not covered");
      }
    }
    return ids;
  });
}

GateDecision LlmGate::combine_inferences(const std::vector<std::string>& selected, const FormulatedObjective& obj,
                                         const ExpertRegistry& registry, std::string_view state_key,
                                         const GateContext& context) {
  std::string evaluations;
  const bool power = !selected.empty() && registry.get(selected.front()).domain() == experts::Domain::Power;
  for (const std::string& id : selected) {
    const experts::ExpertModel& e = registry.get(id);
    evaluations += "- " + id + " (" + std::string(to_string(e.objective())) + ")";
    if (power) {
      // Power experts have one state, so the whole preference curve fits in the prompt.
      const experts::ActionScores s = experts::score_actions(e, experts::kPowerStateKey);
      evaluations += ": normalized score per power [";
      for (std::size_t a = 0; a < s.scores.size(); ++a) {
        if (a) evaluations += ", ";
        evaluations += e.actions()[a] + " W: " + wireless::format_sig12(std::round(s.scores[a] * 1e4) / 1e4);
      }
      evaluations += "], preferred " + e.actions()[s.argmax] + " W";
    } else {
      evaluations += ": scores every move of the walker from its current cell";
    }
    evaluations += "\n";
  }
  const prompts::RenderedPrompt p = prompts::render(
      prompts::inference_combination,
      {{"objectives", objective_list(obj)}, {"experts", join(selected)}, {"context", describe_context(context)},
       {"evaluations", evaluations}});

  const std::string cache_key = p.system + '\x1f' + p.user;
  auto cached = weight_cache_.find(cache_key);
  if (cached == weight_cache_.end()) {
    std::vector<double> weights = ask(p.system, p.user, [&](const StructuredReply& r) {
      if (!r.experts.empty() && r.experts != selected) throw GateError("weights refer to a different expert list");
      return normalize_weights(r.weights, selected.size());
    });
    cached = weight_cache_.emplace(cache_key, std::move(weights)).first;
  }
  GateDecision d = fuse_decision(obj, selected, cached->second, registry, state_key);
  d.trace.push_back("objectives: " + objective_list(obj));
  d.trace.push_back("experts: " + join(selected));
  if (!rationales_.empty()) d.trace.push_back("rationale: " + rationales_.back());
  d.trace.push_back("fused action: " + d.action_label);
  return d;
}

}  // namespace moe::gating

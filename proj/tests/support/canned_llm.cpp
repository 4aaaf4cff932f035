// SPDX-License-Identifier: Apache-2.0
#include "canned_llm.hpp"

#include <sstream>

#include "moe/gating/scripted_gate.hpp"

namespace moe::testing {

using nlohmann::json;

namespace {

std::string line_after(const std::string& text, const std::string& label) {
  const auto at = text.find(label);
  if (at == std::string::npos) return {};
  const auto start = at + label.size();
  return text.substr(start, text.find('\n', start) - start);
}

std::vector<std::string> split_list(const std::string& list) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start < list.size()) {
    auto end = list.find(", ", start);
    if (end == std::string::npos) end = list.size();
    out.push_back(list.substr(start, end - start));
    start = end + 2;
  }
  return out;
}

}  // namespace

std::string fenced_reply(const std::vector<std::string>& objectives, const std::vector<std::string>& experts,
                         const std::vector<double>& weights, const std::string& rationale) {
  const json body{{"objectives", objectives}, {"experts", experts}, {"weights", weights}, {"rationale", rationale}};
  return "```json\n" + body.dump() + "\n```";
}

llm::ChatResponse CannedLlm::complete(const llm::ChatRequest& req) {
  seen.push_back(req);
  const std::string& system = req.messages.front().content;
  const std::string& user = req.messages.at(1).content;
  std::string reply;
  if (system.find("translate a user's requirement") != std::string::npos) {
    gating::ScriptedGate scripted;
    std::vector<std::string> tags;
    try {
      for (Objective o : scripted.formulate_objective({line_after(user, "Requirement: "), {}}).tags) {
        tags.emplace_back(to_string(o));
      }
    } catch (const gating::UnrecognizedRequirement&) {
    }
    reply = fenced_reply(tags, {}, {}, "objectives read from the requirement");
  } else if (system.find("pick the experts") != std::string::npos) {
    const std::vector<std::string> objectives = split_list(line_after(user, "Objectives: "));
    std::vector<std::string> ids;
    std::istringstream lines(user);
    std::string line;
    while (std::getline(lines, line)) {
      if (line.rfind("- ", 0) != 0) continue;
      const std::string id = line.substr(2, line.find(':') - 2);
      const std::string objective = line.substr(line.rfind("objective ") + 10);
      for (const std::string& o : objectives) {
        if (o == objective) ids.push_back(id);
      }
    }
    reply = fenced_reply(objectives, ids, {}, "one expert per objective");
  } else {
    const std::vector<std::string> objectives = split_list(line_after(user, "Objectives: "));
    const std::vector<std::string> experts = split_list(line_after(user, "Selected experts (in order): "));
    reply = fenced_reply(objectives, experts, std::vector<double>(experts.size(), 1.0), "equal weights");
  }
  if (mangle) reply = mangle(req, std::move(reply));
  llm::ChatResponse resp;
  resp.content = reply;
  resp.finish_reason = "stop";
  return resp;
}

}  // namespace moe::testing

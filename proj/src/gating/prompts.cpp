// SPDX-License-Identifier: Apache-2.0
#include "moe/gating/prompts.hpp"

#include <regex>
#include <sstream>
#include <stdexcept>

namespace moe::gating::prompts {

RenderedPrompt render(std::string_view template_text, const std::map<std::string, std::string>& values) {
  RenderedPrompt out;
  std::istringstream in{std::string(template_text)};
  std::string line;
  std::string* section = nullptr;
  while (std::getline(in, line)) {
    if (line.rfind("# prompt:", 0) == 0) {
      out.name = line.substr(9);
      out.name.erase(0, out.name.find_first_not_of(' '));
    } else if (line.rfind("# version:", 0) == 0) {
      out.version = std::stoi(line.substr(10));
    } else if (line == "[system]") {
      section = &out.system;
    } else if (line == "[user]") {
      section = &out.user;
    } else if (section) {
      *section += line;
      *section += '\n';
    }
  }
  if (out.version <= 0 || out.system.empty() || out.user.empty()) {
    throw std::invalid_argument("prompt template is missing its version or a section");
  }
  const std::regex placeholder(R"(\{\{([a-z_]+)\}\})");
  auto fill = [&](std::string& text) {
    std::string result;
    auto begin = std::sregex_iterator(text.begin(), text.end(), placeholder);
    std::size_t last = 0;
    for (auto it = begin; it != std::sregex_iterator(); ++it) {
      const std::string key = (*it)[1].str();
      const auto value = values.find(key);
      if (value == values.end()) throw std::invalid_argument("prompt placeholder '" + key + "' has no value");
      result.append(text, last, static_cast<std::size_t>(it->position()) - last);
      result += value->second;
      last = static_cast<std::size_t>(it->position() + it->length());
    }
    result.append(text, last);
    while (!result.empty() && result.back() == '\n') result.pop_back();
    text = std::move(result);
  };
  fill(out.system);
  fill(out.user);
  return out;
}

}  // namespace moe::gating::prompts

// SPDX-License-Identifier: Apache-2.0
#include "moe/llm/client.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "moe/core/hash.hpp"

namespace moe::llm {

using nlohmann::json;

std::string_view to_string(Role r) {
  switch (r) {
    case Role::System: return "system";
    case Role::User: return "user";
    case Role::Assistant: return "assistant";
  }
  return "?";
}

Role role_from_string(std::string_view name) {
  if (name == "system") return Role::System;
  if (name == "user") return Role::User;
  if (name == "assistant") return Role::Assistant;
  throw std::invalid_argument("unknown chat role '" + std::string(name) + "'");
}

void ChatRequest::validate() const {
  if (messages.empty()) throw std::invalid_argument("chat request needs at least one message");
  if (model.empty()) throw std::invalid_argument("chat request needs a model name");
  if (max_tokens <= 0) throw std::invalid_argument("max_tokens must be positive");
}

std::string normalize_whitespace(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out += ' ';
    pending_space = false;
    out += c;
  }
  return out;
}

json request_body(const ChatRequest& req) {
  json messages = json::array();
  for (const ChatMessage& m : req.messages) {
    messages.push_back({{"role", to_string(m.role)}, {"content", m.content}});
  }
  return {{"model", req.model}, {"messages", std::move(messages)}, {"temperature", req.temperature},
          {"max_tokens", req.max_tokens}};
}

std::string canonical_request(const ChatRequest& req) {
  json body = request_body(req);
  for (json& m : body["messages"]) m["content"] = normalize_whitespace(m["content"].get<std::string>());
  return body.dump();  // object keys are kept sorted
}

std::string fingerprint(const ChatRequest& req) { return sha256_hex(canonical_request(req)); }

namespace {

json usage_json(const Usage& u) {
  return {{"prompt_tokens", u.prompt_tokens}, {"completion_tokens", u.completion_tokens},
          {"total_tokens", u.total_tokens}};
}

Usage usage_from(const json& doc) {
  Usage u;
  if (!doc.is_object()) return u;
  u.prompt_tokens = doc.value("prompt_tokens", 0L);
  u.completion_tokens = doc.value("completion_tokens", 0L);
  u.total_tokens = doc.value("total_tokens", 0L);
  return u;
}

constexpr std::string_view kMetaKey = "_meta";

}  // namespace

ChatResponse parse_completion_body(const json& body) {
  try {
    const json& choice = body.at("choices").at(0);
    ChatResponse r;
    r.content = choice.at("message").at("content").get<std::string>();
    r.finish_reason = choice.value("finish_reason", std::string{});
    if (body.contains("usage")) r.usage = usage_from(body["usage"]);
    return r;
  } catch (const json::exception& e) {
    throw TransportError(std::string("unexpected chat-completion response shape: ") + e.what());
  }
}

json Transcript::to_json() const {
  json doc = json::object();
  for (const auto& [fp, r] : entries) {
    doc[fp] = {{"content", r.content}, {"finish_reason", r.finish_reason}, {"usage", usage_json(r.usage)}};
  }
  doc[std::string(kMetaKey)] = {{"model", model}, {"recorded_at", recorded_at}, {"partial", partial}};
  return doc;
}

Transcript Transcript::from_json(const json& doc) {
  if (!doc.is_object()) throw std::runtime_error("transcript is not a JSON object");
  Transcript t;
  for (const auto& [key, value] : doc.items()) {
    if (key == kMetaKey) {
      t.model = value.value("model", std::string{});
      t.recorded_at = value.value("recorded_at", std::string{});
      t.partial = value.value("partial", false);
      continue;
    }
    ChatResponse r;
    try {
      r.content = value.at("content").get<std::string>();
      r.finish_reason = value.value("finish_reason", std::string{});
      if (value.contains("usage")) r.usage = usage_from(value["usage"]);
    } catch (const json::exception& e) {
      throw std::runtime_error("transcript entry '" + key + "' is malformed: " + e.what());
    }
    t.entries.emplace(key, std::move(r));
  }
  return t;
}

void Transcript::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open transcript '" + path.string() + "' for writing");
  out << to_json().dump(2) << '\n';
}

Transcript Transcript::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open transcript '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return from_json(json::parse(buffer.str()));
  } catch (const json::parse_error& e) {
    throw std::runtime_error("transcript '" + path.string() + "' is not valid JSON: " + e.what());
  }
}

ChatResponse ReplayBackend::complete(const ChatRequest& req) {
  req.validate();
  const std::string fp = fingerprint(req);
  const auto it = transcript_.entries.find(fp);
  if (it == transcript_.entries.end()) {
    throw ReplayMissError("no recorded response for request fingerprint " + fp);
  }
  return it->second;
}

RecordingBackend::RecordingBackend(ChatBackend& inner, std::string model) : inner_(inner) {
  transcript_.model = std::move(model);
}

ChatResponse RecordingBackend::complete(const ChatRequest& req) {
  ChatResponse r = inner_.complete(req);
  std::lock_guard lock(mutex_);
  transcript_.entries[fingerprint(req)] = r;
  return r;
}

Transcript RecordingBackend::transcript() const {
  std::lock_guard lock(mutex_);
  return transcript_;
}

void RecordingBackend::mark_partial() {
  std::lock_guard lock(mutex_);
  transcript_.partial = true;
}

Transcript record_transcript(ChatBackend& live, std::span<const ChatRequest> requests,
                             const std::filesystem::path& out) {
  RecordingBackend recorder(live, requests.empty() ? std::string(kDefaultModel) : requests.front().model);
  try {
    for (const ChatRequest& req : requests) recorder.complete(req);
  } catch (...) {
    recorder.mark_partial();
    recorder.transcript().save(out);
    throw;
  }
  Transcript t = recorder.transcript();
  t.save(out);
  return t;
}

}  // namespace moe::llm

// SPDX-License-Identifier: Apache-2.0
#pragma once

// Chat-completion abstraction with a record/replay backend, so everything
// above it runs offline from a transcript keyed by request fingerprint.

#include <filesystem>
#include <map>
#include <mutex>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace moe::llm {

inline constexpr std::string_view kDefaultModel = "gpt-3.5-turbo-1106";

enum class Role { System, User, Assistant };

std::string_view to_string(Role r);
Role role_from_string(std::string_view name);

struct ChatMessage {
  Role role = Role::User;
  std::string content;
  bool operator==(const ChatMessage&) const = default;
};

struct ChatRequest {
  std::string model{kDefaultModel};
  std::vector<ChatMessage> messages;
  double temperature = 0.0;
  int max_tokens = 512;

  void validate() const;
};

struct Usage {
  long prompt_tokens = 0;
  long completion_tokens = 0;
  long total_tokens = 0;
  bool operator==(const Usage&) const = default;
};

struct ChatResponse {
  std::string content;
  std::string finish_reason;
  Usage usage;
  bool operator==(const ChatResponse&) const = default;
};

class LlmError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class TimeoutError : public LlmError {
 public:
  using LlmError::LlmError;
};
class AuthenticationError : public LlmError {
 public:
  using LlmError::LlmError;
};
class RateLimitError : public LlmError {
 public:
  using LlmError::LlmError;
};
class ReplayMissError : public LlmError {
 public:
  using LlmError::LlmError;
};
// Any other transport or protocol failure.
class TransportError : public LlmError {
 public:
  using LlmError::LlmError;
};

/// Collapses whitespace runs to one space and trims both ends.
std::string normalize_whitespace(std::string_view text);

/// Sorted-key JSON of the request with whitespace-normalized contents.
std::string canonical_request(const ChatRequest& req);

/// Lowercase hex SHA-256 of canonical_request.
std::string fingerprint(const ChatRequest& req);

/// Wire body: {model, messages:[{role,content}], temperature, max_tokens}.
nlohmann::json request_body(const ChatRequest& req);

/// First choice of a chat-completions response. Throws TransportError on a bad shape.
ChatResponse parse_completion_body(const nlohmann::json& body);

class ChatBackend {
 public:
  virtual ~ChatBackend() = default;
  virtual ChatResponse complete(const ChatRequest& req) = 0;
};

struct Transcript {
  std::map<std::string, ChatResponse> entries;  // fingerprint -> response
  std::string model;
  std::string recorded_at;
  bool partial = false;

  nlohmann::json to_json() const;
  static Transcript from_json(const nlohmann::json& doc);
  void save(const std::filesystem::path& path) const;
  static Transcript load(const std::filesystem::path& path);

  bool operator==(const Transcript&) const = default;
};

class ReplayBackend final : public ChatBackend {
 public:
  explicit ReplayBackend(Transcript transcript) : transcript_(std::move(transcript)) {}
  static ReplayBackend from_file(const std::filesystem::path& path) { return ReplayBackend(Transcript::load(path)); }

  ChatResponse complete(const ChatRequest& req) override;
  const Transcript& transcript() const { return transcript_; }

 private:
  Transcript transcript_;
};

/// Forwards to another backend and keeps every exchange.
class RecordingBackend final : public ChatBackend {
 public:
  explicit RecordingBackend(ChatBackend& inner, std::string model = std::string(kDefaultModel));
  ChatResponse complete(const ChatRequest& req) override;
  Transcript transcript() const;
  void mark_partial();

 private:
  ChatBackend& inner_;
  mutable std::mutex mutex_;
  Transcript transcript_;
};

/// Sends each request through `live` and writes the transcript to `out`.
/// On failure the exchanges gathered so far are written flagged partial and
/// the error is rethrown.
Transcript record_transcript(ChatBackend& live, std::span<const ChatRequest> requests,
                             const std::filesystem::path& out);

}  // namespace moe::llm

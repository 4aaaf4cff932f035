// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <chrono>
#include <string>

#include "moe/llm/client.hpp"

namespace moe::llm {

inline constexpr std::string_view kApiKeyEnv = "LLM_API_KEY";

struct HttpBackendOptions {
  // e.g. https://api.openai.com/v1/chat/completions; the path defaults to /v1/chat/completions.
  std::string url;
  std::string api_key;
  std::chrono::milliseconds timeout{30'000};
  int max_retries = 3;
  std::chrono::milliseconds backoff_base{500};

  /// Reads the credential from LLM_API_KEY.
  static HttpBackendOptions from_env(std::string url);
};

/// One HTTP POST per attempt. Timeouts, 429 and 5xx are retried with
/// exponential backoff up to max_retries; 401/403 fail immediately.
class HttpChatBackend final : public ChatBackend {
 public:
  explicit HttpChatBackend(HttpBackendOptions options);
  ChatResponse complete(const ChatRequest& req) override;

 private:
  HttpBackendOptions options_;
  std::string origin_;  // scheme://host[:port]
  std::string path_;
};

}  // namespace moe::llm

// SPDX-License-Identifier: Apache-2.0
#include "moe/llm/http_backend.hpp"

#include <cstdlib>
#include <thread>

#include "httplib.h"

namespace moe::llm {

using nlohmann::json;

HttpBackendOptions HttpBackendOptions::from_env(std::string url) {
  HttpBackendOptions opts;
  opts.url = std::move(url);
  if (const char* key = std::getenv(std::string(kApiKeyEnv).c_str())) opts.api_key = key;
  return opts;
}

HttpChatBackend::HttpChatBackend(HttpBackendOptions options) : options_(std::move(options)) {
  const std::string& url = options_.url;
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw std::invalid_argument("backend url needs a scheme: '" + url + "'");
  const std::string scheme = url.substr(0, scheme_end);
  if (scheme != "http" && scheme != "https") throw std::invalid_argument("unsupported url scheme '" + scheme + "'");
  const auto path_start = url.find('/', scheme_end + 3);
  origin_ = url.substr(0, path_start);
  path_ = path_start == std::string::npos ? "/v1/chat/completions" : url.substr(path_start);
  if (options_.max_retries < 0) throw std::invalid_argument("max_retries must be nonnegative");
}

ChatResponse HttpChatBackend::complete(const ChatRequest& req) {
  req.validate();
  if (options_.api_key.empty()) {
    throw AuthenticationError("no API credential; set " + std::string(kApiKeyEnv));
  }
  const std::string body = request_body(req).dump();
  const auto seconds = std::chrono::duration_cast<std::chrono::seconds>(options_.timeout);
  const auto micros = std::chrono::duration_cast<std::chrono::microseconds>(options_.timeout - seconds);

  std::string last_error;
  bool last_was_rate_limit = false;
  bool last_was_timeout = false;
  for (int attempt = 0; attempt <= options_.max_retries; ++attempt) {
    if (attempt > 0) std::this_thread::sleep_for(options_.backoff_base * (1 << (attempt - 1)));

    httplib::Client client(origin_);
    client.set_connection_timeout(seconds.count(), micros.count());
    client.set_read_timeout(seconds.count(), micros.count());
    client.set_write_timeout(seconds.count(), micros.count());
    client.set_bearer_token_auth(options_.api_key);

    const httplib::Result res = client.Post(path_, body, "application/json");
    last_was_rate_limit = false;
    last_was_timeout = false;
    if (!res) {
      const httplib::Error err = res.error();
      last_was_timeout = err == httplib::Error::Read || err == httplib::Error::Write ||
                         err == httplib::Error::ConnectionTimeout;
      last_error = "request failed: " + httplib::to_string(err);
      continue;
    }
    const int status = res->status;
    if (status == 401 || status == 403) {
      throw AuthenticationError("chat endpoint rejected the credential (HTTP " + std::to_string(status) + ")");
    }
    if (status == 429) {
      last_was_rate_limit = true;
      last_error = "rate limited (HTTP 429)";
      continue;
    }
    if (status >= 500) {
      last_error = "server error (HTTP " + std::to_string(status) + ")";
      continue;
    }
    if (status != 200) {
      throw TransportError("chat endpoint returned HTTP " + std::to_string(status) + ": " + res->body);
    }
    json parsed;
    try {
      parsed = json::parse(res->body);
    } catch (const json::parse_error& e) {
      throw TransportError(std::string("chat endpoint returned invalid JSON: ") + e.what());
    }
    return parse_completion_body(parsed);
  }
  const std::string attempts = " after " + std::to_string(options_.max_retries + 1) + " attempts";
  if (last_was_rate_limit) throw RateLimitError(last_error + attempts);
  if (last_was_timeout) throw TimeoutError(last_error + attempts);
  throw TransportError(last_error + attempts);
}

}  // namespace moe::llm

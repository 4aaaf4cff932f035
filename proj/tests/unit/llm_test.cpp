// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "moe/core/hash.hpp"
#include "moe/llm/client.hpp"

using namespace moe::llm;

namespace {

ChatRequest hello() {
  ChatRequest r;
  r.messages = {{Role::System, "Be brief."}, {Role::User, "Hello world"}};
  return r;
}

class Echo final : public ChatBackend {
 public:
  ChatResponse complete(const ChatRequest& req) override {
    if (fail_after >= 0 && calls >= fail_after) throw TransportError("link down");
    ++calls;
    return {"echo: " + req.messages.back().content, "stop", {3, 4, 7}};
  }
  int calls = 0;
  int fail_after = -1;
};

std::filesystem::path scratch(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("moe-llm-" + name);
}

}  // namespace

TEST(Sha256, KnownDigests) {
  EXPECT_EQ(moe::sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(moe::sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Fingerprint, MatchesFrozenValue) {
  EXPECT_EQ(canonical_request(hello()),
            R"({"max_tokens":512,"messages":[{"content":"Be brief.","role":"system"},)"
            R"({"content":"Hello world","role":"user"}],"model":"gpt-3.5-turbo-1106","temperature":0.0})");
  EXPECT_EQ(fingerprint(hello()), "84a4db6a6c2eb0900450ee2df70a7740bfc754820091c323638b6a81f751caf6");
}

TEST(Fingerprint, IgnoresWhitespaceRuns) {
  ChatRequest spaced = hello();
  spaced.messages[1].content = "  Hello \n\t world\n";
  EXPECT_EQ(fingerprint(spaced), fingerprint(hello()));
}

TEST(Fingerprint, SensitiveToEveryField) {
  const std::string base = fingerprint(hello());
  ChatRequest r = hello();
  r.model = "other";
  EXPECT_NE(fingerprint(r), base);
  r = hello();
  r.temperature = 0.5;
  EXPECT_NE(fingerprint(r), base);
  r = hello();
  r.max_tokens = 10;
  EXPECT_NE(fingerprint(r), base);
  r = hello();
  r.messages[0].role = Role::User;
  EXPECT_NE(fingerprint(r), base);
  r = hello();
  r.messages[1].content = "Hello worlds";
  EXPECT_NE(fingerprint(r), base);
}

TEST(ChatRequest, Validation) {
  ChatRequest r;
  EXPECT_THROW(r.validate(), std::invalid_argument);
  r = hello();
  r.max_tokens = 0;
  EXPECT_THROW(r.validate(), std::invalid_argument);
}

TEST(CompletionBody, ParsesChoiceAndUsage) {
  const auto body = nlohmann::json::parse(
      R"({"choices":[{"message":{"role":"assistant","content":"hi"},"finish_reason":"stop"}],)"
      R"("usage":{"prompt_tokens":5,"completion_tokens":1,"total_tokens":6}})");
  const ChatResponse r = parse_completion_body(body);
  EXPECT_EQ(r.content, "hi");
  EXPECT_EQ(r.finish_reason, "stop");
  EXPECT_EQ(r.usage.total_tokens, 6);
  EXPECT_THROW(parse_completion_body(nlohmann::json::parse(R"({"choices":[]})")), TransportError);
}

TEST(Transcript, RoundTripsThroughFile) {
  Transcript t;
  t.model = "gpt-3.5-turbo-1106";
  t.recorded_at = "2026-01-01T00:00:00Z";
  t.entries[fingerprint(hello())] = {"```json\n{}\n```", "stop", {1, 2, 3}};
  const auto path = scratch("roundtrip.json");
  t.save(path);
  EXPECT_EQ(Transcript::load(path), t);
  std::filesystem::remove(path);
}

TEST(Transcript, RejectsMalformedFiles) {
  const auto path = scratch("bad.json");
  std::ofstream(path) << "{ not json";
  EXPECT_THROW(Transcript::load(path), std::runtime_error);
  std::ofstream(path, std::ios::trunc) << R"({"abc": {"finish_reason": "stop"}})";
  EXPECT_THROW(Transcript::load(path), std::runtime_error);
  std::filesystem::remove(path);
  EXPECT_THROW(Transcript::load(path), std::runtime_error);
}

TEST(Replay, HitAndMiss) {
  Transcript t;
  t.entries[fingerprint(hello())] = {"recorded", "stop", {}};
  ReplayBackend replay(t);
  EXPECT_EQ(replay.complete(hello()).content, "recorded");
  ChatRequest other = hello();
  other.messages[1].content = "Goodbye";
  EXPECT_THROW(replay.complete(other), ReplayMissError);
}

TEST(Recording, KeepsEveryExchange) {
  Echo echo;
  RecordingBackend rec(echo);
  rec.complete(hello());
  ChatRequest other = hello();
  other.messages[1].content = "again";
  rec.complete(other);
  const Transcript t = rec.transcript();
  EXPECT_EQ(t.entries.size(), 2u);
  EXPECT_FALSE(t.partial);
  ReplayBackend replay(t);
  EXPECT_EQ(replay.complete(other).content, "echo: again");
}

TEST(RecordTranscript, EmptyRequestListWritesEmptyFile) {
  Echo echo;
  const auto path = scratch("empty.json");
  const Transcript t = record_transcript(echo, {}, path);
  EXPECT_TRUE(t.entries.empty());
  EXPECT_FALSE(t.partial);
  EXPECT_EQ(Transcript::load(path), t);
  std::filesystem::remove(path);
}

TEST(RecordTranscript, FailureLeavesPartialTranscript) {
  Echo echo;
  echo.fail_after = 1;
  std::vector<ChatRequest> reqs{hello(), hello()};
  reqs[1].messages[1].content = "second";
  const auto path = scratch("partial.json");
  EXPECT_THROW(record_transcript(echo, reqs, path), TransportError);
  const Transcript t = Transcript::load(path);
  EXPECT_TRUE(t.partial);
  EXPECT_EQ(t.entries.size(), 1u);
  std::filesystem::remove(path);
}

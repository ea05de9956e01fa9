#pragma once

#include <chrono>
#include <condition_variable>
#include <deque>
#include <functional>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

namespace leanevo {

struct LlmEndpointConfig {
  std::string base_url;                       // e.g. https://api.example.com
  std::string path{"/v1/chat/completions"};
  std::string model;
  std::string api_key_env{"LEANEVO_API_KEY"};
  int max_retries{3};
  double timeout_seconds{60.0};
  double temperature{0.7};
  double backoff_seconds{0.5};  // doubled per retry

  void validate() const;
};

// Infrastructure failure (endpoint unreachable, retries exhausted). The
// pipeline maps this to Skipped, never Rejected.
class LlmError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class LlmClient {
 public:
  virtual ~LlmClient() = default;
  virtual std::string complete(const std::string& prompt, double temperature) = 0;
};

// Bounds concurrent requests and requests per minute. Zero disables the
// respective limit.
class RateLimiter {
 public:
  RateLimiter(int max_in_flight, int per_minute);
  void acquire();
  void release();

 private:
  std::mutex mu_;
  std::condition_variable cv_;
  int max_in_flight_;
  int per_minute_;
  int in_flight_{0};
  std::deque<std::chrono::steady_clock::time_point> window_;
};

// One send of an already-encoded chat request; no retry policy here.
struct TransportResult {
  int status{0};
  std::string body;
  std::string error;  // transport-level failure when non-empty

  bool transport_ok() const { return error.empty(); }
};

class ChatTransport {
 public:
  virtual ~ChatTransport() = default;
  virtual TransportResult send(const std::string& request_json) = 0;
};

// POSTs to `base_url` + `path` with a bearer token from the environment
// variable named in the config.
std::unique_ptr<ChatTransport> make_http_transport(const LlmEndpointConfig& cfg);

// OpenAI-style chat-completion client: request encoding, retry with
// exponential backoff on transport errors / 429 / 5xx, response decoding,
// and per-call logging (prompt hash plus token usage when reported).
class ChatClient : public LlmClient {
 public:
  ChatClient(LlmEndpointConfig cfg, std::unique_ptr<ChatTransport> transport,
             std::shared_ptr<RateLimiter> limiter = nullptr);

  std::string complete(const std::string& prompt, double temperature) override;

  void set_logger(std::function<void(const std::string&)> logger) { logger_ = std::move(logger); }

 private:
  LlmEndpointConfig cfg_;
  std::unique_ptr<ChatTransport> transport_;
  std::shared_ptr<RateLimiter> limiter_;
  std::function<void(const std::string&)> logger_;
};

// Prompt classification used by the mock client to pick fixture files.
// Returns one of: evoldomain, evoldifficulty_up, evoldifficulty_down,
// judge_consistency, judge_correctness, judge_difficulty, repair, unknown.
std::string classify_prompt(const std::string& prompt);

// Deterministic offline stand-in: responses come from substring-matched
// script rules or from `<fixtures_dir>/<kind>.txt`. Lookup is a pure
// function of the prompt, so concurrent pipelines stay reproducible.
class MockLlmClient : public LlmClient {
 public:
  explicit MockLlmClient(std::string fixtures_dir);

  // Earlier rules win; `match` (and `and_match`, when non-empty) are plain
  // substrings the prompt must contain.
  void add_rule(std::string match, std::string response_text, std::string and_match = "");

  std::string complete(const std::string& prompt, double temperature) override;

 private:
  std::string fixtures_dir_;
  struct Rule {
    std::string match;
    std::string and_match;
    std::string text;
  };
  std::vector<Rule> rules_;
};

}  // namespace leanevo

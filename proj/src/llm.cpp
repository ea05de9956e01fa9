#include "leanevo/llm.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "leanevo/hash.hpp"

namespace leanevo {

using json = nlohmann::json;

void LlmEndpointConfig::validate() const {
  if (max_retries < 0) throw std::invalid_argument("llm: max_retries must be >= 0");
  if (timeout_seconds <= 0) throw std::invalid_argument("llm: timeout must be positive");
}

RateLimiter::RateLimiter(int max_in_flight, int per_minute)
    : max_in_flight_(max_in_flight), per_minute_(per_minute) {}

void RateLimiter::acquire() {
  std::unique_lock lock(mu_);
  for (;;) {
    auto now = std::chrono::steady_clock::now();
    while (!window_.empty() && now - window_.front() > std::chrono::minutes(1)) {
      window_.pop_front();
    }
    bool flight_ok = max_in_flight_ <= 0 || in_flight_ < max_in_flight_;
    bool rate_ok = per_minute_ <= 0 || static_cast<int>(window_.size()) < per_minute_;
    if (flight_ok && rate_ok) {
      ++in_flight_;
      window_.push_back(now);
      return;
    }
    if (!flight_ok) {
      cv_.wait(lock);
    } else {
      cv_.wait_until(lock, window_.front() + std::chrono::minutes(1));
    }
  }
}

void RateLimiter::release() {
  std::lock_guard lock(mu_);
  --in_flight_;
  cv_.notify_all();
}

namespace {

struct LimiterGuard {
  RateLimiter* limiter;
  explicit LimiterGuard(RateLimiter* l) : limiter(l) {
    if (limiter) limiter->acquire();
  }
  ~LimiterGuard() {
    if (limiter) limiter->release();
  }
};

class HttpChatTransport : public ChatTransport {
 public:
  explicit HttpChatTransport(LlmEndpointConfig cfg) : cfg_(std::move(cfg)) {}

  TransportResult send(const std::string& request_json) override {
    httplib::Client client(cfg_.base_url);
    client.set_connection_timeout(std::chrono::milliseconds(
        static_cast<long>(cfg_.timeout_seconds * 1000)));
    client.set_read_timeout(std::chrono::milliseconds(
        static_cast<long>(cfg_.timeout_seconds * 1000)));
    httplib::Headers headers;
    if (const char* key = std::getenv(cfg_.api_key_env.c_str())) {
      headers.emplace("Authorization", std::string("Bearer ") + key);
    }
    auto res = client.Post(cfg_.path, headers, request_json, "application/json");
    if (!res) {
      return TransportResult{0, "", httplib::to_string(res.error())};
    }
    return TransportResult{res->status, res->body, ""};
  }

 private:
  LlmEndpointConfig cfg_;
};

}  // namespace

std::unique_ptr<ChatTransport> make_http_transport(const LlmEndpointConfig& cfg) {
  return std::make_unique<HttpChatTransport>(cfg);
}

ChatClient::ChatClient(LlmEndpointConfig cfg, std::unique_ptr<ChatTransport> transport,
                       std::shared_ptr<RateLimiter> limiter)
    : cfg_(std::move(cfg)), transport_(std::move(transport)), limiter_(std::move(limiter)) {
  cfg_.validate();
}

std::string ChatClient::complete(const std::string& prompt, double temperature) {
  json request = {
      {"model", cfg_.model},
      {"messages", json::array({json{{"role", "user"}, {"content", prompt}}})},
      {"temperature", temperature},
  };
  const std::string body = request.dump();

  std::string last_error;
  for (int attempt = 0; attempt <= cfg_.max_retries; ++attempt) {
    if (attempt > 0) {
      auto delay = cfg_.backoff_seconds * static_cast<double>(1 << (attempt - 1));
      std::this_thread::sleep_for(std::chrono::duration<double>(delay));
    }
    TransportResult res;
    {
      LimiterGuard guard(limiter_.get());
      res = transport_->send(body);
    }
    if (!res.transport_ok()) {
      last_error = "transport: " + res.error;
      continue;
    }
    if (res.status == 429 || res.status >= 500) {
      last_error = "http status " + std::to_string(res.status);
      continue;
    }
    if (res.status != 200) {
      throw LlmError("llm endpoint rejected the request (status " +
                     std::to_string(res.status) + "): " + res.body.substr(0, 200));
    }
    try {
      json parsed = json::parse(res.body);
      std::string content = parsed.at("choices").at(0).at("message").at("content");
      if (logger_) {
        std::ostringstream line;
        line << "llm call prompt_hash=" << hash_hex(fnv1a(prompt));
        if (parsed.contains("usage")) {
          const auto& usage = parsed["usage"];
          line << " prompt_tokens=" << usage.value("prompt_tokens", -1)
               << " completion_tokens=" << usage.value("completion_tokens", -1);
        }
        logger_(line.str());
      }
      return content;
    } catch (const json::exception& e) {
      throw LlmError(std::string("malformed llm response: ") + e.what());
    }
  }
  throw LlmError("llm call failed after " + std::to_string(cfg_.max_retries + 1) +
                 " attempts: " + last_error);
}

std::string classify_prompt(const std::string& prompt) {
  auto has = [&](const char* marker) { return prompt.find(marker) != std::string::npos; };
  if (has("### Transformation Strategy")) return "evoldomain";
  if (has("### Difficulty Enhancement Strategy")) return "evoldifficulty_up";
  if (has("### Difficulty Reduction Strategy")) return "evoldifficulty_down";
  if (has("judge if they are consistent")) return "judge_consistency";
  if (has("judge if the mathematical statement is correct")) return "judge_correctness";
  if (has("classify the difficulty of problem in Lean 4")) return "judge_difficulty";
  if (has("fix the code based on the errors")) return "repair";
  return "unknown";
}

MockLlmClient::MockLlmClient(std::string fixtures_dir) : fixtures_dir_(std::move(fixtures_dir)) {}

void MockLlmClient::add_rule(std::string match, std::string response_text,
                             std::string and_match) {
  rules_.push_back(Rule{std::move(match), std::move(and_match), std::move(response_text)});
}

std::string MockLlmClient::complete(const std::string& prompt, double /*temperature*/) {
  for (const auto& rule : rules_) {
    if (prompt.find(rule.match) == std::string::npos) continue;
    if (!rule.and_match.empty() && prompt.find(rule.and_match) == std::string::npos) continue;
    return rule.text;
  }
  std::string kind = classify_prompt(prompt);
  auto path = std::filesystem::path(fixtures_dir_) / (kind + ".txt");
  std::ifstream in(path);
  if (!in) {
    throw LlmError("mock llm: no fixture for prompt kind '" + kind + "' at " + path.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace leanevo

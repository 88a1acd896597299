#ifndef PROVKIT_LLM_CLIENT_HPP
#define PROVKIT_LLM_CLIENT_HPP

#include <atomic>
#include <chrono>
#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>

#include "json.hpp"

namespace provkit {

/// Prompt sent as a single user message; {text} is replaced by the source.
inline constexpr std::string_view kDefaultPromptTemplate =
    "Please paraphrase the following text: {text}";
inline constexpr std::string_view kPromptPlaceholder = "{text}";

struct ParaphraseRequest {
  std::string source_text;
  /// 0 = deterministic reference generation; 1 = suspicious-style variability.
  double temperature = 0.0;
  std::string model = "gpt-4";
  std::string prompt_template = std::string(kDefaultPromptTemplate);
};

struct ParaphraseResult {
  std::string text;
  nlohmann::json provider_metadata;  // opaque: model, token counts, latency
  std::string cache_key;
};

/// Replaces the single {text} placeholder. Throws ConfigError unless the
/// template contains the placeholder exactly once.
std::string fill_prompt_template(std::string_view prompt_template,
                                 std::string_view source_text);

/// Digest of (template, source, model, temperature); two requests differing
/// in any of these never share a key.
std::string cache_key(const ParaphraseRequest& request);

struct BackendResponse {
  std::string text;
  nlohmann::json metadata;
};

class ParaphraseBackend {
 public:
  virtual ~ParaphraseBackend() = default;
  /// Produces the completion for a filled prompt. Throws ProviderError.
  virtual BackendResponse complete(const std::string& prompt,
                                   const ParaphraseRequest& request) = 0;
  /// Number of requests issued (one per retry attempt on HTTP), for cost
  /// accounting and observing cache hits in tests.
  virtual std::size_t calls() const = 0;
};

/// Deterministic offline backend so classifier and pipeline tests never
/// touch the network.
class StubBackend : public ParaphraseBackend {
 public:
  /// Returns the source text itself (reference == original scenarios).
  static std::unique_ptr<StubBackend> echo();
  /// Looks completions up by source text; a missing entry throws.
  static std::unique_ptr<StubBackend> table(
      std::map<std::string, std::string> by_source);

  BackendResponse complete(const std::string& prompt,
                           const ParaphraseRequest& request) override;
  std::size_t calls() const override { return calls_; }

 private:
  enum class Mode { Echo, Table };
  explicit StubBackend(Mode mode) : mode_(mode) {}

  Mode mode_;
  std::map<std::string, std::string> by_source_;
  std::atomic<std::size_t> calls_{0};
};

/// OpenAI-compatible chat-completions client over HTTP(S) with exponential
/// backoff on transient failures.
class HttpBackend : public ParaphraseBackend {
 public:
  struct Options {
    std::string endpoint_url = "https://api.openai.com/v1";
    /// Empty: read PROVKIT_API_KEY, then OPENAI_API_KEY, from the
    /// environment at call time.
    std::string api_key;
    std::size_t max_attempts = 3;
    std::chrono::milliseconds initial_backoff{500};
    std::chrono::milliseconds timeout{60000};
  };

  explicit HttpBackend(Options options);
  BackendResponse complete(const std::string& prompt,
                           const ParaphraseRequest& request) override;
  std::size_t calls() const override { return calls_; }

 private:
  Options options_;
  std::atomic<std::size_t> calls_{0};
};

/// File-backed result cache: one JSON file per key, written atomically via
/// a temp-file rename. A corrupt entry reads as a miss.
class ParaphraseCache {
 public:
  explicit ParaphraseCache(std::filesystem::path dir);

  std::optional<ParaphraseResult> get(const std::string& key) const;
  void put(const std::string& key, const ParaphraseRequest& request,
           const ParaphraseResult& result) const;

  const std::filesystem::path& dir() const { return dir_; }

 private:
  std::filesystem::path dir_;
};

/// Front door: template filling, cache lookup, rate limiting, backend call.
class ParaphraseClient {
 public:
  struct Options {
    /// Cache directory; disabled when empty.
    std::filesystem::path cache_dir;
    /// Maximum backend requests per minute; 0 = unlimited.
    double requests_per_minute = 0.0;
  };

  explicit ParaphraseClient(std::shared_ptr<ParaphraseBackend> backend)
      : ParaphraseClient(std::move(backend), Options{}) {}
  ParaphraseClient(std::shared_ptr<ParaphraseBackend> backend,
                   Options options);

  /// Returns the paraphrase, from cache when possible. Never fabricates
  /// text: provider failures propagate as ProviderError.
  ParaphraseResult paraphrase(const ParaphraseRequest& request);

  const ParaphraseBackend& backend() const { return *backend_; }

 private:
  void rate_gate();

  std::shared_ptr<ParaphraseBackend> backend_;
  Options options_;
  std::optional<ParaphraseCache> cache_;
  std::mutex gate_mutex_;
  std::chrono::steady_clock::time_point last_call_{};
  bool any_call_ = false;
};

}  // namespace provkit

#endif  // PROVKIT_LLM_CLIENT_HPP

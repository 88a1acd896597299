#include "provkit/llm_client.hpp"

#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "httplib.h"
#include "provkit/errors.hpp"

namespace fs = std::filesystem;

namespace provkit {

namespace {

std::uint64_t fnv1a(std::string_view data, std::uint64_t hash) {
  for (unsigned char c : data) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

std::string iso8601_now() {
  const std::time_t now = std::time(nullptr);
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &utc);
  return buf;
}

// Splits "https://host:port/base" into the client target and path prefix.
std::pair<std::string, std::string> split_endpoint(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw ConfigError("endpoint_url must include a scheme: " + url);
  }
  const auto path_begin = url.find('/', scheme_end + 3);
  if (path_begin == std::string::npos) return {url, ""};
  std::string base = url.substr(0, path_begin);
  std::string prefix = url.substr(path_begin);
  while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
  return {base, prefix};
}

bool mentions_context_overflow(const std::string& body) {
  return body.find("context_length") != std::string::npos ||
         body.find("maximum context") != std::string::npos ||
         body.find("too long") != std::string::npos;
}

}  // namespace

std::string fill_prompt_template(std::string_view prompt_template,
                                 std::string_view source_text) {
  const auto first = prompt_template.find(kPromptPlaceholder);
  if (first == std::string_view::npos) {
    throw ConfigError("prompt template is missing the {text} placeholder");
  }
  if (prompt_template.find(kPromptPlaceholder,
                           first + kPromptPlaceholder.size()) !=
      std::string_view::npos) {
    throw ConfigError("prompt template must contain {text} exactly once");
  }
  std::string filled(prompt_template.substr(0, first));
  filled += source_text;
  filled += prompt_template.substr(first + kPromptPlaceholder.size());
  return filled;
}

std::string cache_key(const ParaphraseRequest& request) {
  char temp[32];
  std::snprintf(temp, sizeof(temp), "%.17g", request.temperature);
  std::uint64_t hash = 0xcbf29ce484222325ULL;  // FNV offset basis
  for (std::string_view part :
       {std::string_view(request.prompt_template),
        std::string_view(request.source_text), std::string_view(request.model),
        std::string_view(temp)}) {
    hash = fnv1a(part, hash);
    hash = fnv1a(std::string_view("\x1f", 1), hash);
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(hash));
  return buf;
}

std::unique_ptr<StubBackend> StubBackend::echo() {
  return std::unique_ptr<StubBackend>(new StubBackend(Mode::Echo));
}

std::unique_ptr<StubBackend> StubBackend::table(
    std::map<std::string, std::string> by_source) {
  auto backend = std::unique_ptr<StubBackend>(new StubBackend(Mode::Table));
  backend->by_source_ = std::move(by_source);
  return backend;
}

BackendResponse StubBackend::complete(const std::string& /*prompt*/,
                                      const ParaphraseRequest& request) {
  ++calls_;
  if (mode_ == Mode::Echo) {
    return {request.source_text, {{"backend", "stub-echo"}}};
  }
  auto it = by_source_.find(request.source_text);
  if (it == by_source_.end()) {
    throw ProviderError(ProviderError::Kind::BadResponse,
                        "stub table has no entry for the source text");
  }
  return {it->second, {{"backend", "stub-table"}}};
}

HttpBackend::HttpBackend(Options options) : options_(std::move(options)) {}

BackendResponse HttpBackend::complete(const std::string& prompt,
                                      const ParaphraseRequest& request) {
  std::string api_key = options_.api_key;
  if (api_key.empty()) {
    if (const char* env = std::getenv("PROVKIT_API_KEY")) api_key = env;
  }
  if (api_key.empty()) {
    if (const char* env = std::getenv("OPENAI_API_KEY")) api_key = env;
  }

  const auto [base, prefix] = split_endpoint(options_.endpoint_url);
  httplib::Client client(base);
  client.set_connection_timeout(options_.timeout);
  client.set_read_timeout(options_.timeout);
  httplib::Headers headers;
  if (!api_key.empty()) {
    headers.emplace("Authorization", "Bearer " + api_key);
  }

  const nlohmann::json body{
      {"model", request.model},
      {"temperature", request.temperature},
      {"messages",
       nlohmann::json::array({{{"role", "user"}, {"content", prompt}}})}};
  const std::string payload = body.dump();

  std::string last_error;
  auto backoff = options_.initial_backoff;
  const std::size_t attempts = std::max<std::size_t>(options_.max_attempts, 1);
  for (std::size_t attempt = 1; attempt <= attempts; ++attempt) {
    ++calls_;
    const auto started = std::chrono::steady_clock::now();
    auto res = client.Post(prefix + "/chat/completions", headers, payload,
                           "application/json");
    const auto latency = std::chrono::duration_cast<std::chrono::milliseconds>(
        std::chrono::steady_clock::now() - started);

    if (!res) {
      last_error = "transport failure: " + httplib::to_string(res.error());
    } else if (res->status == 401 || res->status == 403) {
      throw ProviderError(ProviderError::Kind::Auth,
                          "authentication rejected (HTTP " +
                              std::to_string(res->status) + ")");
    } else if (res->status == 429) {
      last_error = "throttled (HTTP 429)";
    } else if (res->status >= 500) {
      last_error = "server error (HTTP " + std::to_string(res->status) + ")";
    } else if (res->status >= 400) {
      if (mentions_context_overflow(res->body)) {
        throw ProviderError(ProviderError::Kind::OverLength,
                            "input exceeds the model context window");
      }
      throw ProviderError(ProviderError::Kind::BadResponse,
                          "HTTP " + std::to_string(res->status) + ": " +
                              res->body);
    } else {
      nlohmann::json parsed;
      try {
        parsed = nlohmann::json::parse(res->body);
      } catch (const nlohmann::json::exception& e) {
        throw ProviderError(ProviderError::Kind::BadResponse,
                            std::string("unparsable response: ") + e.what());
      }
      if (!parsed.contains("choices") || parsed["choices"].empty() ||
          !parsed["choices"][0].contains("message")) {
        throw ProviderError(ProviderError::Kind::BadResponse,
                            "response has no choices[0].message");
      }
      std::string text =
          parsed["choices"][0]["message"].value("content", std::string{});
      if (text.empty()) {
        throw ProviderError(ProviderError::Kind::EmptyCompletion,
                            "provider returned an empty completion");
      }
      nlohmann::json metadata{{"model", parsed.value("model", request.model)},
                              {"latency_ms", latency.count()},
                              {"attempts", attempt}};
      if (parsed.contains("usage")) metadata["usage"] = parsed["usage"];
      return {std::move(text), std::move(metadata)};
    }

    if (attempt < attempts) {
      std::this_thread::sleep_for(backoff);
      backoff *= 2;
    }
  }
  const bool throttled = last_error.find("429") != std::string::npos;
  throw ProviderError(throttled ? ProviderError::Kind::RateLimit
                                : ProviderError::Kind::Transport,
                      last_error + " after " + std::to_string(attempts) +
                          " attempts");
}

ParaphraseCache::ParaphraseCache(fs::path dir) : dir_(std::move(dir)) {
  std::error_code ec;
  fs::create_directories(dir_, ec);
  if (ec) {
    throw IoError("cannot create cache directory " + dir_.string() + ": " +
                  ec.message());
  }
}

std::optional<ParaphraseResult> ParaphraseCache::get(
    const std::string& key) const {
  const fs::path file = dir_ / (key + ".json");
  std::ifstream in(file);
  if (!in) return std::nullopt;
  try {
    nlohmann::json entry = nlohmann::json::parse(in);
    ParaphraseResult result;
    result.text = entry.at("text").get<std::string>();
    if (result.text.empty()) return std::nullopt;
    result.provider_metadata = entry.value("metadata", nlohmann::json::object());
    result.cache_key = key;
    return result;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "provkit: ignoring corrupt cache entry " << file.string()
              << ": " << e.what() << '\n';
    return std::nullopt;
  }
}

void ParaphraseCache::put(const std::string& key,
                          const ParaphraseRequest& request,
                          const ParaphraseResult& result) const {
  const nlohmann::json entry{
      {"request",
       {{"prompt_template", request.prompt_template},
        {"source_text", request.source_text},
        {"model", request.model},
        {"temperature", request.temperature}}},
      {"text", result.text},
      {"metadata", result.provider_metadata},
      {"created_at", iso8601_now()}};

  const fs::path file = dir_ / (key + ".json");
  const fs::path tmp = dir_ / (key + ".tmp");
  {
    std::ofstream out(tmp);
    if (!out) throw IoError("cannot write cache entry " + tmp.string());
    out << entry.dump(2) << '\n';
  }
  std::error_code ec;
  fs::rename(tmp, file, ec);
  if (ec) throw IoError("cannot finalize cache entry: " + ec.message());
}

ParaphraseClient::ParaphraseClient(std::shared_ptr<ParaphraseBackend> backend,
                                   Options options)
    : backend_(std::move(backend)), options_(std::move(options)) {
  if (!backend_) throw ConfigError("paraphrase client needs a backend");
  if (!options_.cache_dir.empty()) {
    cache_.emplace(options_.cache_dir);
  }
}

void ParaphraseClient::rate_gate() {
  if (options_.requests_per_minute <= 0.0) return;
  const auto interval = std::chrono::duration_cast<
      std::chrono::steady_clock::duration>(std::chrono::duration<double>(
      60.0 / options_.requests_per_minute));
  std::unique_lock lock(gate_mutex_);
  const auto now = std::chrono::steady_clock::now();
  if (any_call_ && now < last_call_ + interval) {
    const auto wake = last_call_ + interval;
    std::this_thread::sleep_until(wake);
    last_call_ = wake;
  } else {
    last_call_ = now;
  }
  any_call_ = true;
}

ParaphraseResult ParaphraseClient::paraphrase(
    const ParaphraseRequest& request) {
  if (request.source_text.empty()) {
    throw std::invalid_argument("paraphrase source text is empty");
  }
  if (request.temperature < 0.0 || request.temperature > 2.0) {
    throw std::invalid_argument("temperature must lie in [0, 2]");
  }
  const std::string prompt =
      fill_prompt_template(request.prompt_template, request.source_text);
  const std::string key = cache_key(request);

  if (cache_) {
    if (auto hit = cache_->get(key)) return *hit;
  }

  rate_gate();
  BackendResponse response = backend_->complete(prompt, request);
  if (response.text.empty()) {
    throw ProviderError(ProviderError::Kind::EmptyCompletion,
                        "provider returned an empty completion");
  }

  ParaphraseResult result;
  result.text = std::move(response.text);
  result.provider_metadata = std::move(response.metadata);
  result.cache_key = key;
  if (cache_) cache_->put(key, request, result);
  return result;
}

}  // namespace provkit

#include <unistd.h>
#include "provkit/llm_client.hpp"

#include <atomic>
#include <filesystem>
#include <fstream>
#include <thread>

#include "doctest.h"
#include "httplib.h"
#include "provkit/errors.hpp"

using namespace provkit;
namespace fs = std::filesystem;

namespace {

fs::path temp_cache_dir(const std::string& tag) {
  fs::path dir = fs::temp_directory_path() /
                 ("provkit_cache_" + tag + "_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  return dir;
}

// Local OpenAI-shaped endpoint with a scriptable behavior per test.
class FakeProvider {
 public:
  enum class Behavior {
    Ok,
    FailTwiceThenOk,
    AlwaysThrottle,
    Unauthorized,
    EmptyContent,
    Garbage,
    ContextOverflow,
  };

  explicit FakeProvider(Behavior behavior) : behavior_(behavior) {
    server_.Post("/v1/chat/completions",
                 [this](const httplib::Request& req, httplib::Response& res) {
                   handle(req, res);
                 });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }

  ~FakeProvider() {
    server_.stop();
    thread_.join();
  }

  std::string endpoint() const {
    return "http://127.0.0.1:" + std::to_string(port_) + "/v1";
  }
  int requests() const { return requests_; }
  std::string last_auth() const { return last_auth_; }
  std::string last_body() const { return last_body_; }

 private:
  void handle(const httplib::Request& req, httplib::Response& res) {
    const int n = ++requests_;
    last_auth_ = req.get_header_value("Authorization");
    last_body_ = req.body;
    switch (behavior_) {
      case Behavior::FailTwiceThenOk:
        if (n <= 2) {
          res.status = 500;
          res.set_content("{\"error\":\"boom\"}", "application/json");
          return;
        }
        [[fallthrough]];
      case Behavior::Ok:
        res.set_content(
            R"({"model":"fake-1","usage":{"total_tokens":7},)"
            R"("choices":[{"message":{"role":"assistant","content":"a paraphrased text"}}]})",
            "application/json");
        return;
      case Behavior::AlwaysThrottle:
        res.status = 429;
        res.set_content("{\"error\":\"slow down\"}", "application/json");
        return;
      case Behavior::Unauthorized:
        res.status = 401;
        res.set_content("{\"error\":\"bad key\"}", "application/json");
        return;
      case Behavior::EmptyContent:
        res.set_content(
            R"({"choices":[{"message":{"role":"assistant","content":""}}]})",
            "application/json");
        return;
      case Behavior::Garbage:
        res.set_content("not json at all", "application/json");
        return;
      case Behavior::ContextOverflow:
        res.status = 400;
        res.set_content(
            R"({"error":{"code":"context_length_exceeded","message":"too long"}})",
            "application/json");
        return;
    }
  }

  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
  FakeProvider::Behavior behavior_;
  std::atomic<int> requests_{0};
  std::string last_auth_;
  std::string last_body_;
};

HttpBackend::Options fast_options(const FakeProvider& provider) {
  HttpBackend::Options options;
  options.endpoint_url = provider.endpoint();
  options.api_key = "sk-test";
  options.max_attempts = 3;
  options.initial_backoff = std::chrono::milliseconds(1);
  options.timeout = std::chrono::milliseconds(5000);
  return options;
}

}  // namespace

TEST_CASE("prompt template filling") {
  CHECK(fill_prompt_template(kDefaultPromptTemplate, "abc") ==
        "Please paraphrase the following text: abc");
  CHECK(fill_prompt_template("X {text} Y", "mid") == "X mid Y");
  CHECK_THROWS_AS(fill_prompt_template("no placeholder", "abc"), ConfigError);
  CHECK_THROWS_AS(fill_prompt_template("{text} and {text}", "abc"),
                  ConfigError);
}

TEST_CASE("cache keys separate every request dimension") {
  ParaphraseRequest base;
  base.source_text = "same text";

  ParaphraseRequest warm = base;
  warm.temperature = 1.0;
  ParaphraseRequest other_model = base;
  other_model.model = "gpt-99";
  ParaphraseRequest other_text = base;
  other_text.source_text = "different text";

  const auto key = cache_key(base);
  CHECK(key.size() == 16);
  CHECK(key != cache_key(warm));
  CHECK(key != cache_key(other_model));
  CHECK(key != cache_key(other_text));
  CHECK(key == cache_key(base));  // stable
}

TEST_CASE("stub backends") {
  SUBCASE("echo returns the source itself") {
    ParaphraseClient client(StubBackend::echo());
    ParaphraseRequest req;
    req.source_text = "any text at all";
    auto result = client.paraphrase(req);
    CHECK(result.text == "any text at all");
    CHECK(client.backend().calls() == 1);
  }

  SUBCASE("table lookups hit and miss") {
    ParaphraseClient client(StubBackend::table({{"abc", "xyz"}}));
    ParaphraseRequest req;
    req.source_text = "abc";
    CHECK(client.paraphrase(req).text == "xyz");

    req.source_text = "unknown";
    CHECK_THROWS_AS(client.paraphrase(req), ProviderError);
  }

  SUBCASE("empty source is rejected up front") {
    ParaphraseClient client(StubBackend::echo());
    CHECK_THROWS_AS(client.paraphrase(ParaphraseRequest{}),
                    std::invalid_argument);
    CHECK(client.backend().calls() == 0);
  }
}

TEST_CASE("file cache round trip") {
  const auto dir = temp_cache_dir("roundtrip");
  ParaphraseCache cache(dir);

  ParaphraseRequest req;
  req.source_text = "cache me";
  const auto key = cache_key(req);
  CHECK(!cache.get(key).has_value());

  ParaphraseResult result;
  result.text = "cached paraphrase";
  result.provider_metadata = {{"model", "fake"}};
  result.cache_key = key;
  cache.put(key, req, result);

  auto hit = cache.get(key);
  REQUIRE(hit.has_value());
  CHECK(hit->text == "cached paraphrase");
  CHECK(hit->cache_key == key);
  fs::remove_all(dir);
}

TEST_CASE("corrupt cache entries read as misses") {
  const auto dir = temp_cache_dir("corrupt");
  ParaphraseCache cache(dir);
  ParaphraseRequest req;
  req.source_text = "poisoned";
  const auto key = cache_key(req);
  {
    std::ofstream out(dir / (key + ".json"));
    out << "{ definitely not json";
  }
  CHECK(!cache.get(key).has_value());
  fs::remove_all(dir);
}

TEST_CASE("second identical request is served from the cache") {
  const auto dir = temp_cache_dir("client");
  ParaphraseClient::Options options;
  options.cache_dir = dir;
  ParaphraseClient client(StubBackend::table({{"src", "out"}}), options);

  ParaphraseRequest req;
  req.source_text = "src";
  auto first = client.paraphrase(req);
  CHECK(first.text == "out");
  CHECK(client.backend().calls() == 1);

  auto second = client.paraphrase(req);
  CHECK(second.text == "out");
  CHECK(client.backend().calls() == 1);  // no new backend call
  CHECK(second.cache_key == first.cache_key);

  // a different temperature is a different key, so the backend is consulted
  req.temperature = 1.0;
  client.paraphrase(req);
  CHECK(client.backend().calls() == 2);
  fs::remove_all(dir);
}

TEST_CASE("rate gate spaces out backend calls") {
  ParaphraseClient::Options options;
  options.requests_per_minute = 600.0;  // 100ms between calls
  ParaphraseClient client(StubBackend::echo(), options);

  ParaphraseRequest req;
  req.source_text = "tick";
  const auto start = std::chrono::steady_clock::now();
  client.paraphrase(req);
  client.paraphrase(req);
  const auto elapsed = std::chrono::steady_clock::now() - start;
  CHECK(elapsed >= std::chrono::milliseconds(95));
}

TEST_CASE("http backend success path") {
  FakeProvider provider(FakeProvider::Behavior::Ok);
  HttpBackend backend(fast_options(provider));

  ParaphraseRequest req;
  req.source_text = "please rewrite";
  req.model = "gpt-4";
  req.temperature = 0.25;
  auto response =
      backend.complete(fill_prompt_template(req.prompt_template,
                                            req.source_text),
                       req);
  CHECK(response.text == "a paraphrased text");
  CHECK(response.metadata["model"] == "fake-1");
  CHECK(provider.requests() == 1);
  CHECK(provider.last_auth() == "Bearer sk-test");

  auto body = nlohmann::json::parse(provider.last_body());
  CHECK(body["model"] == "gpt-4");
  CHECK(body["temperature"] == 0.25);
  REQUIRE(body["messages"].size() == 1);
  CHECK(body["messages"][0]["role"] == "user");
  CHECK(body["messages"][0]["content"] ==
        "Please paraphrase the following text: please rewrite");
}

TEST_CASE("http backend reads the api key from the environment") {
  FakeProvider provider(FakeProvider::Behavior::Ok);
  auto options = fast_options(provider);
  options.api_key.clear();
  ::setenv("PROVKIT_API_KEY", "sk-from-env", 1);
  HttpBackend backend(options);
  ParaphraseRequest req;
  req.source_text = "x";
  backend.complete("p", req);
  CHECK(provider.last_auth() == "Bearer sk-from-env");
  ::unsetenv("PROVKIT_API_KEY");
}

TEST_CASE("http backend retries transient failures with backoff") {
  FakeProvider provider(FakeProvider::Behavior::FailTwiceThenOk);
  HttpBackend backend(fast_options(provider));
  ParaphraseRequest req;
  req.source_text = "x";
  auto response = backend.complete("p", req);
  CHECK(response.text == "a paraphrased text");
  CHECK(provider.requests() == 3);
  CHECK(response.metadata["attempts"] == 3);
}

TEST_CASE("http backend maps provider failures to typed errors") {
  ParaphraseRequest req;
  req.source_text = "x";

  SUBCASE("auth errors do not retry") {
    FakeProvider provider(FakeProvider::Behavior::Unauthorized);
    HttpBackend backend(fast_options(provider));
    CHECK_THROWS_WITH_AS(backend.complete("p", req),
                         doctest::Contains("authentication"), ProviderError);
    CHECK(provider.requests() == 1);
  }

  SUBCASE("rate limiting exhausts retries") {
    FakeProvider provider(FakeProvider::Behavior::AlwaysThrottle);
    HttpBackend backend(fast_options(provider));
    try {
      backend.complete("p", req);
      FAIL("expected ProviderError");
    } catch (const ProviderError& e) {
      CHECK(e.kind() == ProviderError::Kind::RateLimit);
    }
    CHECK(provider.requests() == 3);
  }

  SUBCASE("empty completions are surfaced, never fabricated") {
    FakeProvider provider(FakeProvider::Behavior::EmptyContent);
    HttpBackend backend(fast_options(provider));
    try {
      backend.complete("p", req);
      FAIL("expected ProviderError");
    } catch (const ProviderError& e) {
      CHECK(e.kind() == ProviderError::Kind::EmptyCompletion);
    }
  }

  SUBCASE("unparsable payloads") {
    FakeProvider provider(FakeProvider::Behavior::Garbage);
    HttpBackend backend(fast_options(provider));
    try {
      backend.complete("p", req);
      FAIL("expected ProviderError");
    } catch (const ProviderError& e) {
      CHECK(e.kind() == ProviderError::Kind::BadResponse);
    }
  }

  SUBCASE("context overflow is its own kind") {
    FakeProvider provider(FakeProvider::Behavior::ContextOverflow);
    HttpBackend backend(fast_options(provider));
    try {
      backend.complete("p", req);
      FAIL("expected ProviderError");
    } catch (const ProviderError& e) {
      CHECK(e.kind() == ProviderError::Kind::OverLength);
    }
  }

  SUBCASE("connection refused becomes a transport error") {
    HttpBackend::Options options;
    options.endpoint_url = "http://127.0.0.1:1/v1";  // nothing listens here
    options.max_attempts = 2;
    options.initial_backoff = std::chrono::milliseconds(1);
    HttpBackend backend(options);
    try {
      backend.complete("p", req);
      FAIL("expected ProviderError");
    } catch (const ProviderError& e) {
      CHECK(e.kind() == ProviderError::Kind::Transport);
    }
  }
}

TEST_CASE("live-style flow through the client caches the first response") {
  FakeProvider provider(FakeProvider::Behavior::Ok);
  const auto dir = temp_cache_dir("http");
  ParaphraseClient::Options options;
  options.cache_dir = dir;
  ParaphraseClient client(std::make_shared<HttpBackend>(fast_options(provider)),
                          options);

  ParaphraseRequest req;
  req.source_text = "stable input";
  req.temperature = 0.0;
  auto first = client.paraphrase(req);
  auto second = client.paraphrase(req);
  CHECK(first.text == second.text);
  CHECK(provider.requests() == 1);  // second served from cache
  fs::remove_all(dir);
}

#ifndef PROVKIT_TOOLS_APP_CONFIG_HPP
#define PROVKIT_TOOLS_APP_CONFIG_HPP

#include <filesystem>
#include <map>
#include <memory>
#include <string>

#include "json.hpp"
#include "provkit/classifier.hpp"
#include "provkit/corpus.hpp"
#include "provkit/llm_client.hpp"

namespace provkit::cli {

struct LlmSettings {
  std::string backend = "http";  // http | echo | table
  std::string endpoint_url = "https://api.openai.com/v1";
  std::string model = "gpt-4";
  double temperature = 0.0;  // reference generation default
  double rpm_limit = 0.0;
  std::string cache_dir;
  std::size_t max_attempts = 3;
  std::string prompt_template = std::string(kDefaultPromptTemplate);
  std::map<std::string, std::string> stub_table;
};

struct AppConfig {
  ClassifierConfig classifier;
  TokenizeOptions tokenize;
  LlmSettings llm;
  nlohmann::json snapshot;  // the effective config, for reports

  /// Loads a flat JSON config file; missing path uses defaults. Unknown
  /// keys are rejected so typos fail loudly.
  static AppConfig load(const std::filesystem::path& path);
  static AppConfig defaults();
};

std::shared_ptr<ParaphraseClient> make_client(const LlmSettings& settings);

/// Reference provider backed by the configured paraphrase client: sends the
/// original's raw token text and tokenizes the completion.
ReferenceProvider make_llm_provider(std::shared_ptr<ParaphraseClient> client,
                                    const AppConfig& config);

}  // namespace provkit::cli

#endif  // PROVKIT_TOOLS_APP_CONFIG_HPP

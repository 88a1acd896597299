#include "app_config.hpp"

#include <fstream>
#include <set>

#include "provkit/errors.hpp"

namespace provkit::cli {

namespace {

const std::set<std::string> kKnownKeys{
    // classifier
    "min_len", "cap", "weights", "phase1_thresholds", "phase1_base",
    // tokenization
    "fold_case", "strip_apostrophes",
    // llm client
    "backend", "endpoint_url", "model", "temperature", "rpm_limit",
    "cache_dir", "max_attempts", "prompt_template", "stub_table"};

}  // namespace

AppConfig AppConfig::defaults() {
  AppConfig config;
  config.snapshot = config.classifier.to_json();
  return config;
}

AppConfig AppConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());

  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config file " + path.string() + " is not valid JSON: " +
                      e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, _] : j.items()) {
    if (!kKnownKeys.count(key)) {
      throw ConfigError("unknown config key '" + key + "'");
    }
  }

  AppConfig config;
  config.classifier = ClassifierConfig::from_json(j);

  if (j.contains("fold_case")) {
    config.tokenize.fold_case = j.at("fold_case").get<bool>();
  }
  if (j.contains("strip_apostrophes")) {
    config.tokenize.clean.strip_apostrophes =
        j.at("strip_apostrophes").get<bool>();
  }

  auto& llm = config.llm;
  if (j.contains("backend")) llm.backend = j.at("backend").get<std::string>();
  if (llm.backend != "http" && llm.backend != "echo" && llm.backend != "table") {
    throw ConfigError("backend must be one of http, echo, table");
  }
  if (j.contains("endpoint_url")) {
    llm.endpoint_url = j.at("endpoint_url").get<std::string>();
  }
  if (j.contains("model")) llm.model = j.at("model").get<std::string>();
  if (j.contains("temperature")) {
    llm.temperature = j.at("temperature").get<double>();
    if (llm.temperature < 0.0 || llm.temperature > 2.0) {
      throw ConfigError("temperature must lie in [0, 2]");
    }
  }
  if (j.contains("rpm_limit")) llm.rpm_limit = j.at("rpm_limit").get<double>();
  if (j.contains("cache_dir")) {
    llm.cache_dir = j.at("cache_dir").get<std::string>();
  }
  if (j.contains("max_attempts")) {
    llm.max_attempts = j.at("max_attempts").get<std::size_t>();
  }
  if (j.contains("prompt_template")) {
    llm.prompt_template = j.at("prompt_template").get<std::string>();
  }
  if (j.contains("stub_table")) {
    for (const auto& [source, text] : j.at("stub_table").items()) {
      llm.stub_table[source] = text.get<std::string>();
    }
  }

  config.snapshot = j;
  // make the effective classifier settings visible even when defaulted
  const nlohmann::json effective = config.classifier.to_json();
  for (const auto& [key, value] : effective.items()) {
    if (!config.snapshot.contains(key)) config.snapshot[key] = value;
  }
  return config;
}

std::shared_ptr<ParaphraseClient> make_client(const LlmSettings& settings) {
  std::shared_ptr<ParaphraseBackend> backend;
  if (settings.backend == "echo") {
    backend = StubBackend::echo();
  } else if (settings.backend == "table") {
    backend = StubBackend::table(settings.stub_table);
  } else {
    HttpBackend::Options options;
    options.endpoint_url = settings.endpoint_url;
    options.max_attempts = settings.max_attempts;
    backend = std::make_shared<HttpBackend>(options);
  }

  ParaphraseClient::Options options;
  options.requests_per_minute = settings.rpm_limit;
  if (!settings.cache_dir.empty()) options.cache_dir = settings.cache_dir;
  return std::make_shared<ParaphraseClient>(std::move(backend), options);
}

ReferenceProvider make_llm_provider(std::shared_ptr<ParaphraseClient> client,
                                    const AppConfig& config) {
  const LlmSettings llm = config.llm;
  const TokenizeOptions tokenize_opts = config.tokenize;
  return [client, llm, tokenize_opts](const TokenSequence& original) {
    ParaphraseRequest request;
    // Reconstructed text of the cleaned original; providers see one line.
    std::string source;
    for (std::size_t i = 0; i < original.tokens.size(); ++i) {
      if (i) source.push_back(' ');
      source += original.tokens[i];
    }
    request.source_text = std::move(source);
    request.temperature = llm.temperature;
    request.model = llm.model;
    request.prompt_template = llm.prompt_template;

    auto result = client->paraphrase(request);
    auto reference = tokenize(clean_text(result.text, tokenize_opts.clean),
                              original.doc_id + ":reference",
                              tokenize_opts.fold_case);
    return reference;
  };
}

}  // namespace provkit::cli

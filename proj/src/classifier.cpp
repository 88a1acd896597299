#include "provkit/classifier.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>

#include "provkit/errors.hpp"

namespace provkit {

namespace {

void check_range(const SimilarityProfile& prof, const ClassifierConfig& cfg,
                 const char* which) {
  if (prof.min_len != cfg.min_len || prof.cap != cfg.cap) {
    throw std::invalid_argument(
        std::string(which) + " profile covers lengths [" +
        std::to_string(prof.min_len) + ", " + std::to_string(prof.cap) +
        "] but the config expects [" + std::to_string(cfg.min_len) + ", " +
        std::to_string(cfg.cap) + "]");
  }
}

// Phase I vote over precomputed per-length ratios (rows[0] = min_len).
// Positive and negative weights are accumulated separately and compared, so
// the sign of the outcome is stable under rescaling all weights by a common
// factor (a single signed accumulator can pick up rounding of either sign).
std::optional<Verdict> phase1_on_ratios(const std::vector<double>& ratios,
                                        const ClassifierConfig& cfg) {
  Verdict verdict;
  verdict.phase = 1;
  double wins = 0.0;
  double losses = 0.0;
  for (std::size_t L = cfg.min_len; L <= cfg.cap; ++L) {
    const bool above = ratios[L - cfg.min_len] > cfg.threshold(L);
    const double weight = cfg.weight(L);
    verdict.contributions[L] = above ? weight : -weight;
    (above ? wins : losses) += weight;
  }
  verdict.score = wins - losses;
  if (wins > losses) {
    verdict.label = Label::NearCopy;
    return verdict;
  }
  return std::nullopt;
}

}  // namespace

std::string_view to_string(Phase1Base base) {
  switch (base) {
    case Phase1Base::Original: return "original";
    case Phase1Base::Suspicious: return "suspicious";
    case Phase1Base::MinBoth: return "min_both";
  }
  return "original";
}

std::optional<Phase1Base> phase1_base_from_string(std::string_view name) {
  if (name == "original") return Phase1Base::Original;
  if (name == "suspicious") return Phase1Base::Suspicious;
  if (name == "min_both") return Phase1Base::MinBoth;
  return std::nullopt;
}

std::string_view to_string(Label label) {
  switch (label) {
    case Label::NearCopy: return "NearCopy";
    case Label::ChatGPTParaphrase: return "ChatGPTParaphrase";
    case Label::Other: return "Other";
  }
  return "Other";
}

std::optional<Label> label_from_string(std::string_view name) {
  if (name == "NearCopy") return Label::NearCopy;
  if (name == "ChatGPTParaphrase") return Label::ChatGPTParaphrase;
  if (name == "Other") return Label::Other;
  return std::nullopt;
}

double ClassifierConfig::weight(std::size_t length) const {
  auto it = weights.find(length);
  return it == weights.end() ? 1.0 : it->second;
}

double ClassifierConfig::threshold(std::size_t length) const {
  auto it = phase1_thresholds.find(length);
  return it == phase1_thresholds.end() ? 0.80 : it->second;
}

void ClassifierConfig::validate() const {
  if (min_len < 1 || min_len > cap) {
    throw ConfigError("classifier requires 1 <= min_len <= cap");
  }
  for (const auto& [L, w] : weights) {
    if (!(w > 0.0)) {
      throw ConfigError("weight for length " + std::to_string(L) +
                        " must be positive");
    }
  }
  for (const auto& [L, t] : phase1_thresholds) {
    if (t < 0.0 || t > 1.0) {
      throw ConfigError("threshold for length " + std::to_string(L) +
                        " must lie in [0, 1]");
    }
  }
}

ClassifierConfig ClassifierConfig::from_json(const nlohmann::json& j) {
  ClassifierConfig cfg;
  if (j.contains("min_len")) cfg.min_len = j.at("min_len").get<std::size_t>();
  if (j.contains("cap")) cfg.cap = j.at("cap").get<std::size_t>();

  // "weights" and "phase1_thresholds" accept either an array covering
  // min_len..cap in order, or a map from length to value.
  auto parse_per_length = [&cfg](const nlohmann::json& node,
                                 const char* what) {
    std::map<std::size_t, double> out;
    if (node.is_array()) {
      if (node.size() != cfg.cap - cfg.min_len + 1) {
        throw ConfigError(std::string(what) + " array must have " +
                          std::to_string(cfg.cap - cfg.min_len + 1) +
                          " entries (lengths " + std::to_string(cfg.min_len) +
                          ".." + std::to_string(cfg.cap) + ")");
      }
      for (std::size_t i = 0; i < node.size(); ++i) {
        out[cfg.min_len + i] = node[i].get<double>();
      }
    } else if (node.is_object()) {
      for (const auto& [key, value] : node.items()) {
        out[std::stoul(key)] = value.get<double>();
      }
    } else {
      throw ConfigError(std::string(what) + " must be an array or a map");
    }
    return out;
  };
  if (j.contains("weights")) {
    cfg.weights = parse_per_length(j.at("weights"), "weights");
  }
  if (j.contains("phase1_thresholds")) {
    cfg.phase1_thresholds =
        parse_per_length(j.at("phase1_thresholds"), "phase1_thresholds");
  }
  if (j.contains("phase1_base")) {
    auto base = phase1_base_from_string(j.at("phase1_base").get<std::string>());
    if (!base) {
      throw ConfigError("phase1_base must be one of original, suspicious, "
                        "min_both");
    }
    cfg.phase1_base = *base;
  }
  cfg.validate();
  return cfg;
}

nlohmann::json ClassifierConfig::to_json() const {
  nlohmann::json weights_json = nlohmann::json::object();
  for (const auto& [L, w] : weights) weights_json[std::to_string(L)] = w;
  nlohmann::json thresholds_json = nlohmann::json::object();
  for (const auto& [L, t] : phase1_thresholds) {
    thresholds_json[std::to_string(L)] = t;
  }
  return nlohmann::json{{"min_len", min_len},
                        {"cap", cap},
                        {"weights", weights_json},
                        {"phase1_thresholds", thresholds_json},
                        {"phase1_base", std::string(to_string(phase1_base))}};
}

nlohmann::json Verdict::to_json() const {
  nlohmann::json contrib = nlohmann::json::object();
  for (const auto& [L, c] : contributions) contrib[std::to_string(L)] = c;
  nlohmann::json j{{"label", std::string(to_string(label))},
                   {"phase", phase},
                   {"score", score},
                   {"contributions", contrib}};
  j["spread"] = spread ? nlohmann::json(*spread) : nlohmann::json(nullptr);
  return j;
}

std::optional<Verdict> phase1(const SimilarityProfile& original_suspicious,
                              const ClassifierConfig& config) {
  config.validate();
  check_range(original_suspicious, config, "phase 1");
  std::vector<double> ratios;
  ratios.reserve(config.cap - config.min_len + 1);
  for (std::size_t L = config.min_len; L <= config.cap; ++L) {
    ratios.push_back(original_suspicious.ratio(L));
  }
  return phase1_on_ratios(ratios, config);
}

Verdict phase2(const SimilarityProfile& reference_original,
               const SimilarityProfile& reference_suspicious,
               const ClassifierConfig& config) {
  config.validate();
  check_range(reference_original, config, "phase 2 reference-original");
  check_range(reference_suspicious, config, "phase 2 reference-suspicious");
  if (reference_original.base_id != reference_suspicious.base_id) {
    throw std::invalid_argument(
        "phase 2 profiles must share the Reference base, got '" +
        reference_original.base_id + "' and '" +
        reference_suspicious.base_id + "'");
  }

  Verdict verdict;
  verdict.phase = 2;
  double wins = 0.0;    // lengths where the suspicious pairing leads
  double losses = 0.0;
  double spread_sum = 0.0;
  std::size_t spread_count = 0;
  for (std::size_t L = config.min_len; L <= config.cap; ++L) {
    const double ro = reference_original.ratio(L);
    const double rs = reference_suspicious.ratio(L);
    if (ro == 0.0 && rs == 0.0) {
      verdict.contributions[L] = 0.0;  // no patterns in either pair
      continue;
    }
    const bool suspicious_leads = rs > ro;
    const double weight = config.weight(L);
    verdict.contributions[L] = suspicious_leads ? weight : -weight;
    (suspicious_leads ? wins : losses) += weight;
    spread_sum += rs - ro;
    ++spread_count;
  }
  verdict.score = wins - losses;
  verdict.label = wins > losses ? Label::ChatGPTParaphrase : Label::Other;
  if (spread_count > 0) verdict.spread = spread_sum / spread_count;
  return verdict;
}

Verdict classify(const TokenSequence& original,
                 const TokenSequence& suspicious,
                 const ClassifierConfig& config,
                 const ReferenceProvider& reference_provider,
                 ClassifyTrace* trace) {
  config.validate();

  // Phase I needs only the two-document pair set.
  const std::array<TokenSequence, 2> pair{original, suspicious};
  auto index = PatternIndex::build(pair, config.min_len, config.cap);
  auto os = common_patterns(index, original.doc_id, suspicious.doc_id);

  auto prof_original =
      profile(original, suspicious, os, config.min_len, config.cap);
  if (trace) trace->original_suspicious = prof_original;

  std::optional<Verdict> copy_verdict;
  switch (config.phase1_base) {
    case Phase1Base::Original:
      copy_verdict = phase1(prof_original, config);
      break;
    case Phase1Base::Suspicious: {
      auto prof = profile(suspicious, original, os, config.min_len, config.cap);
      copy_verdict = phase1(prof, config);
      break;
    }
    case Phase1Base::MinBoth: {
      auto ps = profile(suspicious, original, os, config.min_len, config.cap);
      std::vector<double> ratios;
      ratios.reserve(config.cap - config.min_len + 1);
      for (std::size_t L = config.min_len; L <= config.cap; ++L) {
        ratios.push_back(std::min(prof_original.ratio(L), ps.ratio(L)));
      }
      copy_verdict = phase1_on_ratios(ratios, config);
      break;
    }
  }
  if (copy_verdict) return *copy_verdict;

  // Inconclusive: obtain the Reference and run the attribution vote.
  TokenSequence reference = reference_provider(original);
  if (reference.doc_id.empty() || reference.doc_id == original.doc_id ||
      reference.doc_id == suspicious.doc_id) {
    reference.doc_id = original.doc_id + ":reference";
  }
  auto profiles = profile_triple(original, suspicious, reference,
                                 {config.min_len, config.cap});
  auto verdict = phase2(profiles.reference_original,
                        profiles.reference_suspicious, config);
  if (trace) trace->triple = std::move(profiles);
  return verdict;
}

}  // namespace provkit

#ifndef PROVKIT_CLASSIFIER_HPP
#define PROVKIT_CLASSIFIER_HPP

#include <functional>
#include <map>
#include <optional>
#include <string_view>

#include "json.hpp"
#include "provkit/similarity.hpp"

namespace provkit {

/// Which text's length anchors the Phase I similarity ratio.
enum class Phase1Base { Original, Suspicious, MinBoth };

std::string_view to_string(Phase1Base base);
std::optional<Phase1Base> phase1_base_from_string(std::string_view name);

struct ClassifierConfig {
  std::size_t min_len = kDefaultMinLen;
  std::size_t cap = kDefaultCap;
  /// Per-length vote weights; lengths not present weigh 1.0.
  std::map<std::size_t, double> weights;
  /// Per-length Phase I similarity thresholds; lengths not present use 0.80.
  std::map<std::size_t, double> phase1_thresholds;
  Phase1Base phase1_base = Phase1Base::Original;

  double weight(std::size_t length) const;
  double threshold(std::size_t length) const;

  /// Throws ConfigError on non-positive weights, thresholds outside [0,1],
  /// or min_len/cap out of order.
  void validate() const;

  static ClassifierConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

enum class Label { NearCopy, ChatGPTParaphrase, Other };

std::string_view to_string(Label label);
std::optional<Label> label_from_string(std::string_view name);

struct Verdict {
  Label label = Label::Other;
  int phase = 0;      // 1 or 2
  double score = 0.0; // sum of contributions
  /// Signed weight per pattern length; exactly 0 for lengths skipped in
  /// Phase II because neither pair had any pattern.
  std::map<std::size_t, double> contributions;
  /// Phase II confidence proxy: mean over non-skipped lengths of
  /// ratio_RS(L) - ratio_RO(L). Absent for Phase I verdicts.
  std::optional<double> spread;

  nlohmann::json to_json() const;
};

/// Phase I near-copy screen over the ORIGINAL-SUSPICIOUS profile. Each
/// length votes +weight when its similarity ratio is strictly above the
/// threshold, otherwise -weight. A positive sum is a NearCopy verdict;
/// anything else is inconclusive (nullopt) and the caller proceeds to
/// Phase II. Throws std::invalid_argument when the profile's length range
/// does not match the config.
std::optional<Verdict> phase1(const SimilarityProfile& original_suspicious,
                              const ClassifierConfig& config);

/// Phase II attribution vote. Both profiles must share the Reference as
/// base and the config's length range. Lengths where both ratios are zero
/// contribute nothing; otherwise +weight when the REFERENCE-SUSPICIOUS
/// ratio is strictly greater than REFERENCE-ORIGINAL, else -weight. A
/// positive sum classifies ChatGPTParaphrase, otherwise Other.
Verdict phase2(const SimilarityProfile& reference_original,
               const SimilarityProfile& reference_suspicious,
               const ClassifierConfig& config);

/// Produces the Reference text for an Original on demand (LLM call or
/// preloaded file). Only invoked when Phase I is inconclusive.
using ReferenceProvider =
    std::function<TokenSequence(const TokenSequence& original)>;

/// Intermediate profiles of a classify run, for reporting.
struct ClassifyTrace {
  SimilarityProfile original_suspicious;   // base = original, always present
  std::optional<TripleProfiles> triple;    // present when Phase II ran
};

/// Full waterfall: Phase I on the (original, suspicious) pair; on a NearCopy
/// verdict the provider is never invoked. Otherwise the Reference is
/// obtained, the three-document profiles are computed and Phase II decides.
/// Provider failures propagate as exceptions; no default is substituted.
Verdict classify(const TokenSequence& original,
                 const TokenSequence& suspicious,
                 const ClassifierConfig& config,
                 const ReferenceProvider& reference_provider,
                 ClassifyTrace* trace = nullptr);

}  // namespace provkit

#endif  // PROVKIT_CLASSIFIER_HPP

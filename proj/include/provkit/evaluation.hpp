#ifndef PROVKIT_EVALUATION_HPP
#define PROVKIT_EVALUATION_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "provkit/classifier.hpp"
#include "provkit/similarity.hpp"

namespace provkit {

/// Positive class is ChatGPTParaphrase; a NearCopy prediction counts as
/// positive (a detected paraphrase).
struct ConfusionMatrix {
  std::uint64_t tp = 0;
  std::uint64_t fn = 0;
  std::uint64_t fp = 0;
  std::uint64_t tn = 0;

  std::uint64_t total() const { return tp + fn + fp + tn; }
  ConfusionMatrix& operator+=(const ConfusionMatrix& other);
  friend bool operator==(const ConfusionMatrix&,
                         const ConfusionMatrix&) = default;
};

/// Fractions in [0, 1]; a metric whose denominator is zero is reported as
/// absent, never forced to a number.
struct MetricSet {
  std::optional<double> accuracy;
  std::optional<double> precision;
  std::optional<double> sensitivity;
  std::optional<double> specificity;
  std::optional<double> f1;
};

struct LabeledOutcome {
  Label predicted;
  Label truth;  // ChatGPTParaphrase or Other
};

/// Counts outcomes into a confusion matrix. Throws std::invalid_argument on
/// empty input.
ConfusionMatrix score_run(std::span<const LabeledOutcome> outcomes);

/// accuracy, precision, sensitivity, specificity, F1. Throws
/// std::invalid_argument when the matrix is empty.
MetricSet metrics(const ConfusionMatrix& cm);

/// Element-wise sum of the matrices, then metrics. Needs >= 1 matrix.
MetricSet aggregate(std::span<const ConfusionMatrix> matrices);

/// Half-up rounding of a fraction to a percentage with 2 decimals.
double round_percent(double fraction);

/// "97.54" style; "n/a" when absent.
std::string format_percent(std::optional<double> fraction);

// ---------------------------------------------------------------------------
// Rendering of pattern coverage (per-pair highlights and block diagrams).

enum class MarkupStyle { Html, Ansi };

/// Fixed color slots so multi-pane outputs are stable:
/// 0 = original/suspicious, 1 = reference/original, 2 = reference/suspicious.
inline constexpr std::size_t kSlotOriginalSuspicious = 0;
inline constexpr std::size_t kSlotReferenceOriginal = 1;
inline constexpr std::size_t kSlotReferenceSuspicious = 2;

/// The base text with every covered span (patterns of length >= min_len)
/// wrapped in highlight markers; uncovered words pass through unmodified.
std::string render_pair_markup(const TokenSequence& base,
                               const CommonPatternSet& patterns,
                               std::size_t min_len, MarkupStyle style,
                               std::size_t pair_slot = 0);

/// Base text with two independent coverages: `background` drawn as a
/// background highlight and `foreground` as a font-color highlight, the way
/// a reference pane shows both of its pairings at once.
std::string render_dual_markup(const TokenSequence& base,
                               const CommonPatternSet& background,
                               const CommonPatternSet& foreground,
                               std::size_t min_len, MarkupStyle style);

struct BlockLine {
  std::string base_id;
  std::string other_id;
  std::string glyphs;  // one glyph per word: '█' covered, '-' uncovered
};

/// One line per (document, pair) combination: for every pair set, first the
/// line of doc_a then the line of doc_b, coverage taken at `length`.
std::vector<BlockLine> render_block_diagram(
    std::span<const TokenSequence> docs,
    std::span<const CommonPatternSet> pair_sets, std::size_t length);

// ---------------------------------------------------------------------------
// Batch reports.

struct CategoryReport {
  std::string category;
  ConfusionMatrix confusion;
  MetricSet metric_set;
  std::uint64_t near_copy_count = 0;  // flagged: see score_run mapping
};

struct RunReport {
  std::string run_id;
  nlohmann::json config;
  std::vector<CategoryReport> per_category;
  CategoryReport overall;

  nlohmann::json to_json() const;
  /// Metric rows by category columns, percentages with 2 decimals.
  void write_csv(std::ostream& out) const;
};

RunReport build_report(std::string run_id, nlohmann::json config,
                       std::span<const CategoryReport> categories);

}  // namespace provkit

#endif  // PROVKIT_EVALUATION_HPP

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "provkit/evaluation.hpp"
#include "provkit/similarity.hpp"

namespace provkit {

namespace {

// Pair palette, indexed by slot: original/suspicious blue,
// reference/original orange, reference/suspicious green.
constexpr std::array<const char*, 3> kHtmlBackground{"#9ecae1", "#fdae6b",
                                                     "#a1d99b"};
constexpr std::array<const char*, 3> kHtmlForeground{"#2171b5", "#d94801",
                                                     "#238b45"};
constexpr std::array<const char*, 3> kAnsiBackground{"\x1b[44m", "\x1b[43m",
                                                     "\x1b[42m"};
constexpr std::array<const char*, 3> kAnsiForeground{"\x1b[34m", "\x1b[33m",
                                                     "\x1b[32m"};
constexpr const char* kAnsiReset = "\x1b[0m";

std::string escape_html(const std::string& word) {
  std::string out;
  out.reserve(word.size());
  for (char c : word) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::vector<bool> coverage_mask(const TokenSequence& base,
                                const CommonPatternSet& patterns,
                                std::size_t length) {
  std::vector<bool> mask(base.word_count(), false);
  for (std::uint32_t p : coverage(base, patterns, length)) mask[p] = true;
  return mask;
}

// Emits base tokens joined by spaces; maximal covered runs are wrapped with
// open/close markers chosen by the (background, foreground) state of the
// run's first word.
std::string render_with_masks(const TokenSequence& base,
                              const std::vector<bool>& bg_mask,
                              const std::vector<bool>& fg_mask,
                              MarkupStyle style, std::size_t bg_slot,
                              std::size_t fg_slot) {
  std::string out;
  auto state_of = [&](std::size_t i) {
    return std::make_pair(bg_mask[i], fg_mask[i]);
  };
  std::size_t i = 0;
  while (i < base.word_count()) {
    const auto state = state_of(i);
    std::size_t j = i;
    while (j < base.word_count() && state_of(j) == state) ++j;

    std::string open, close;
    const auto [bg, fg] = state;
    if (style == MarkupStyle::Html) {
      if (bg || fg) {
        open = "<span style=\"";
        if (bg) open += std::string("background-color:") +
                        kHtmlBackground[bg_slot] + ";";
        if (fg) open += std::string("color:") + kHtmlForeground[fg_slot] + ";";
        open += "\">";
        close = "</span>";
      }
    } else {
      if (bg) open += kAnsiBackground[bg_slot];
      if (fg) open += kAnsiForeground[fg_slot];
      if (bg || fg) close = kAnsiReset;
    }

    if (!out.empty()) out.push_back(' ');
    out += open;
    for (std::size_t k = i; k < j; ++k) {
      if (k > i) out.push_back(' ');
      out += style == MarkupStyle::Html ? escape_html(base.tokens[k])
                                        : base.tokens[k];
    }
    out += close;
    i = j;
  }
  return out;
}

}  // namespace

std::string render_pair_markup(const TokenSequence& base,
                               const CommonPatternSet& patterns,
                               std::size_t min_len, MarkupStyle style,
                               std::size_t pair_slot) {
  if (pair_slot >= kHtmlBackground.size()) {
    throw std::invalid_argument("pair slot out of range");
  }
  const auto mask = coverage_mask(base, patterns, min_len);
  const std::vector<bool> none(base.word_count(), false);
  return render_with_masks(base, mask, none, style, pair_slot, pair_slot);
}

std::string render_dual_markup(const TokenSequence& base,
                               const CommonPatternSet& background,
                               const CommonPatternSet& foreground,
                               std::size_t min_len, MarkupStyle style) {
  const auto bg = coverage_mask(base, background, min_len);
  const auto fg = coverage_mask(base, foreground, min_len);
  return render_with_masks(base, bg, fg, style, kSlotReferenceOriginal,
                           kSlotReferenceSuspicious);
}

std::vector<BlockLine> render_block_diagram(
    std::span<const TokenSequence> docs,
    std::span<const CommonPatternSet> pair_sets, std::size_t length) {
  auto doc_by_id = [&docs](const std::string& id) -> const TokenSequence& {
    for (const auto& doc : docs) {
      if (doc.doc_id == id) return doc;
    }
    throw std::invalid_argument("unknown document '" + id + "' in diagram");
  };

  std::vector<BlockLine> lines;
  for (const auto& set : pair_sets) {
    for (const auto& [base_id, other_id] :
         {std::make_pair(set.doc_a, set.doc_b),
          std::make_pair(set.doc_b, set.doc_a)}) {
      const TokenSequence& base = doc_by_id(base_id);
      const auto mask = coverage_mask(base, set, length);
      BlockLine line{base_id, other_id, {}};
      for (bool covered : mask) line.glyphs += covered ? "█" : "-";
      lines.push_back(std::move(line));
    }
  }
  return lines;
}

}  // namespace provkit

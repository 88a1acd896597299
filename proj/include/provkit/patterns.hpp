#ifndef PROVKIT_PATTERNS_HPP
#define PROVKIT_PATTERNS_HPP

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "provkit/corpus.hpp"

namespace provkit {

inline constexpr std::size_t kDefaultMinLen = 3;
inline constexpr std::size_t kDefaultCap = 15;

/// One suffix of one member document. The suffix key is the word sequence
/// starting at `start`, truncated to at most `cap` words; it is materialized
/// on demand from the encoded document rather than stored.
struct SuffixEntry {
  std::uint32_t doc;      // index into member_docs()
  std::uint32_t start;    // 0-based word position
  std::uint32_t key_len;  // min(cap, word_count - start)
};

/// Word-level suffix array over a small set of documents, with suffix keys
/// capped at the longest pattern length worth detecting. Immutable after
/// build; all queries are read-only.
class PatternIndex {
 public:
  /// Builds the index over 1..n non-empty documents with distinct ids.
  /// Entries are sorted by (key, doc, start), keys compared word-wise
  /// lexicographically with a shorter key ordering before its extensions.
  /// Throws std::invalid_argument on empty docs, duplicate ids, or
  /// min_len/cap out of range (requires 1 <= min_len <= cap).
  static PatternIndex build(std::span<const TokenSequence> docs,
                            std::size_t min_len = kDefaultMinLen,
                            std::size_t cap = kDefaultCap);

  std::size_t min_len() const { return min_len_; }
  std::size_t cap() const { return cap_; }
  std::span<const SuffixEntry> entries() const { return entries_; }
  const std::vector<TokenSequence>& member_docs() const { return docs_; }

  /// Index of the document with the given id; throws std::invalid_argument
  /// if the id is not a member.
  std::size_t doc_index(std::string_view doc_id) const;

  /// Interned word ids of one document; ids are lexicographic ranks over the
  /// combined vocabulary, so comparing id sequences compares word sequences.
  std::span<const std::int32_t> encoded(std::size_t doc) const {
    return encoded_[doc];
  }
  const std::string& word(std::int32_t id) const { return vocab_[id]; }

  /// Length of the common prefix of entries i-1 and i (word-level, bounded
  /// by both key lengths). lcp(0) is 0.
  std::uint32_t lcp(std::size_t i) const { return lcp_[i]; }

  /// Debug listing, one entry per line: doc_id <TAB> start <TAB> key words.
  void dump(std::ostream& out) const;

 private:
  PatternIndex() = default;

  std::size_t min_len_ = kDefaultMinLen;
  std::size_t cap_ = kDefaultCap;
  std::vector<TokenSequence> docs_;
  std::vector<std::vector<std::int32_t>> encoded_;
  std::vector<std::string> vocab_;
  std::vector<SuffixEntry> entries_;
  std::vector<std::uint32_t> lcp_;
};

/// A word pattern together with every place it occurs.
struct CommonPattern {
  std::vector<std::string> words;
  /// doc_id -> sorted 0-based start positions of verbatim occurrences.
  std::map<std::string, std::vector<std::uint32_t>> occurrences;

  std::size_t length() const { return words.size(); }
  std::size_t total_occurrences() const;
  std::string text() const;  // words joined by single spaces
};

/// Enumerates every word sequence of length in [min_len, cap] that occurs at
/// least twice across the member documents (the two occurrences may be in
/// the same document or different ones), by grouping shared prefixes of the
/// sorted suffix entries. Output is ordered by (length, key) and is
/// deterministic for identical inputs.
std::vector<CommonPattern> detect_repeated(const PatternIndex& index);

/// All patterns shared by one ordered document pair.
struct CommonPatternSet {
  std::string doc_a;
  std::string doc_b;
  /// Patterns with at least one occurrence in each of doc_a and doc_b;
  /// occurrence lists restricted to the pair.
  std::vector<CommonPattern> patterns;
};

/// Filters detect_repeated output down to patterns present in both a and b.
/// Patterns repeated only within one document are excluded.
CommonPatternSet common_patterns(const PatternIndex& index,
                                 std::string_view a, std::string_view b);

/// Same filter over an already-detected pattern list (avoids re-detection
/// when several pairs are read off one index).
CommonPatternSet common_patterns(std::span<const CommonPattern> all,
                                 std::string_view a, std::string_view b);

}  // namespace provkit

#endif  // PROVKIT_PATTERNS_HPP

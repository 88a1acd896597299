#ifndef PROVKIT_SIMILARITY_HPP
#define PROVKIT_SIMILARITY_HPP

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "provkit/patterns.hpp"

namespace provkit {

struct LengthRow {
  std::size_t covered_words = 0;
  double ratio = 0.0;  // covered_words / base_word_count
};

/// Directed similarity of `base` toward `other`: for each pattern length L,
/// the fraction of base word positions lying inside at least one occurrence
/// of a common pattern of length >= L. Ratios are non-increasing in L.
struct SimilarityProfile {
  std::string base_id;
  std::string other_id;
  std::size_t base_word_count = 0;
  std::size_t min_len = kDefaultMinLen;
  std::size_t cap = kDefaultCap;
  std::vector<LengthRow> rows;  // rows[i] corresponds to length min_len + i

  const LengthRow& row(std::size_t length) const;
  double ratio(std::size_t length) const { return row(length).ratio; }
  std::size_t covered(std::size_t length) const {
    return row(length).covered_words;
  }
};

/// Word positions of `base` covered by occurrences (in base) of common
/// patterns of length >= `length`. Overlapping occurrences are unioned.
/// Returns sorted positions. `patterns` must be the pair set containing
/// base's doc id.
std::vector<std::uint32_t> coverage(const TokenSequence& base,
                                    const CommonPatternSet& patterns,
                                    std::size_t length);

/// One row per length in [min_len, cap]. Throws std::invalid_argument when
/// base is empty.
SimilarityProfile profile(const TokenSequence& base,
                          const TokenSequence& other,
                          const CommonPatternSet& patterns,
                          std::size_t min_len = kDefaultMinLen,
                          std::size_t cap = kDefaultCap);

struct SimilarityConfig {
  std::size_t min_len = kDefaultMinLen;
  std::size_t cap = kDefaultCap;
};

struct TripleProfiles {
  SimilarityProfile original_suspicious;   // base = original
  SimilarityProfile reference_original;    // base = reference
  SimilarityProfile reference_suspicious;  // base = reference
};

/// The three directed profiles used by the two classification phases, all
/// derived from one shared three-document index.
TripleProfiles profile_triple(const TokenSequence& original,
                              const TokenSequence& suspicious,
                              const TokenSequence& reference,
                              const SimilarityConfig& config = {});

/// CSV rows: base_id,other_id,L,covered_words,ratio (ratio with six
/// fractional digits). Header emitted once.
void write_profile_csv(std::ostream& out,
                       std::span<const SimilarityProfile> profiles);

/// Parses the write_profile_csv format back into profiles.
std::vector<SimilarityProfile> read_profile_csv(std::istream& in);

}  // namespace provkit

#endif  // PROVKIT_SIMILARITY_HPP

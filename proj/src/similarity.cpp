#include "provkit/similarity.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>

#include "provkit/csv.hpp"
#include "provkit/errors.hpp"

namespace provkit {

const LengthRow& SimilarityProfile::row(std::size_t length) const {
  if (length < min_len || length > cap) {
    throw std::out_of_range("pattern length " + std::to_string(length) +
                            " outside [" + std::to_string(min_len) + ", " +
                            std::to_string(cap) + "]");
  }
  return rows[length - min_len];
}

namespace {

// Per-position longest covering pattern length; covered(L) = #{p: level[p] >= L}.
std::vector<std::uint32_t> coverage_levels(const TokenSequence& base,
                                           const CommonPatternSet& patterns) {
  if (base.doc_id != patterns.doc_a && base.doc_id != patterns.doc_b) {
    throw std::invalid_argument("document '" + base.doc_id +
                                "' is not part of the pattern pair (" +
                                patterns.doc_a + ", " + patterns.doc_b + ")");
  }
  std::vector<std::uint32_t> level(base.word_count(), 0);
  for (const auto& pattern : patterns.patterns) {
    auto it = pattern.occurrences.find(base.doc_id);
    if (it == pattern.occurrences.end()) continue;
    const auto len = static_cast<std::uint32_t>(pattern.length());
    for (std::uint32_t start : it->second) {
      for (std::uint32_t p = start; p < start + len && p < level.size(); ++p) {
        level[p] = std::max(level[p], len);
      }
    }
  }
  return level;
}

}  // namespace

std::vector<std::uint32_t> coverage(const TokenSequence& base,
                                    const CommonPatternSet& patterns,
                                    std::size_t length) {
  const auto level = coverage_levels(base, patterns);
  std::vector<std::uint32_t> positions;
  for (std::uint32_t p = 0; p < level.size(); ++p) {
    if (level[p] >= length) positions.push_back(p);
  }
  return positions;
}

SimilarityProfile profile(const TokenSequence& base,
                          const TokenSequence& other,
                          const CommonPatternSet& patterns,
                          std::size_t min_len, std::size_t cap) {
  if (base.word_count() == 0) {
    throw std::invalid_argument("profile base '" + base.doc_id +
                                "' has no words");
  }
  if (min_len < 1 || min_len > cap) {
    throw std::invalid_argument("profile requires 1 <= min_len <= cap");
  }

  SimilarityProfile prof;
  prof.base_id = base.doc_id;
  prof.other_id = other.doc_id;
  prof.base_word_count = base.word_count();
  prof.min_len = min_len;
  prof.cap = cap;
  prof.rows.resize(cap - min_len + 1);

  const auto level = coverage_levels(base, patterns);
  std::vector<std::size_t> covered_at(cap + 2, 0);
  for (std::uint32_t lv : level) {
    if (lv >= min_len) covered_at[std::min<std::size_t>(lv, cap + 1)] += 1;
  }
  // suffix-sum: positions with level >= L
  std::size_t running = 0;
  std::vector<std::size_t> covered(cap + 2, 0);
  for (std::size_t l = cap + 1; l >= min_len; --l) {
    running += covered_at[l];
    covered[l] = running;
  }
  for (std::size_t L = min_len; L <= cap; ++L) {
    auto& row = prof.rows[L - min_len];
    row.covered_words = covered[L];
    row.ratio = static_cast<double>(row.covered_words) /
                static_cast<double>(prof.base_word_count);
  }
  return prof;
}

TripleProfiles profile_triple(const TokenSequence& original,
                              const TokenSequence& suspicious,
                              const TokenSequence& reference,
                              const SimilarityConfig& config) {
  const std::array<TokenSequence, 3> docs{original, suspicious, reference};
  auto index = PatternIndex::build(docs, config.min_len, config.cap);
  auto all = detect_repeated(index);

  auto os = common_patterns(all, original.doc_id, suspicious.doc_id);
  auto ro = common_patterns(all, reference.doc_id, original.doc_id);
  auto rs = common_patterns(all, reference.doc_id, suspicious.doc_id);

  TripleProfiles out;
  out.original_suspicious =
      profile(original, suspicious, os, config.min_len, config.cap);
  out.reference_original =
      profile(reference, original, ro, config.min_len, config.cap);
  out.reference_suspicious =
      profile(reference, suspicious, rs, config.min_len, config.cap);
  return out;
}

void write_profile_csv(std::ostream& out,
                       std::span<const SimilarityProfile> profiles) {
  out << "base_id,other_id,L,covered_words,ratio\n";
  char buf[32];
  for (const auto& prof : profiles) {
    for (std::size_t L = prof.min_len; L <= prof.cap; ++L) {
      std::snprintf(buf, sizeof(buf), "%.6f", prof.ratio(L));
      out << csv::escape(prof.base_id) << ',' << csv::escape(prof.other_id)
          << ',' << L << ',' << prof.covered(L) << ',' << buf << '\n';
    }
  }
}

std::vector<SimilarityProfile> read_profile_csv(std::istream& in) {
  std::vector<SimilarityProfile> profiles;
  std::map<std::pair<std::string, std::string>, std::size_t> by_pair;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto fields = csv::parse_line(line);
    if (lineno == 1 && !fields.empty() && fields[0] == "base_id") continue;
    if (fields.size() != 5) {
      throw IoError("profile CSV line " + std::to_string(lineno) +
                    ": expected 5 fields");
    }
    const std::size_t L = std::stoul(fields[2]);
    const std::size_t covered = std::stoul(fields[3]);
    const double ratio = std::stod(fields[4]);

    auto key = std::make_pair(fields[0], fields[1]);
    auto it = by_pair.find(key);
    if (it == by_pair.end()) {
      SimilarityProfile prof;
      prof.base_id = fields[0];
      prof.other_id = fields[1];
      prof.min_len = L;
      prof.cap = L;
      prof.rows.push_back({covered, ratio});
      // infer base word count from the first row when possible
      prof.base_word_count =
          ratio > 0.0
              ? static_cast<std::size_t>(
                    static_cast<double>(covered) / ratio + 0.5)
              : 0;
      by_pair.emplace(std::move(key), profiles.size());
      profiles.push_back(std::move(prof));
    } else {
      SimilarityProfile& prof = profiles[it->second];
      if (L != prof.cap + 1) {
        throw IoError("profile CSV line " + std::to_string(lineno) +
                      ": non-contiguous lengths for pair " + fields[0] +
                      "," + fields[1]);
      }
      prof.cap = L;
      prof.rows.push_back({covered, ratio});
      if (prof.base_word_count == 0 && ratio > 0.0) {
        prof.base_word_count = static_cast<std::size_t>(
            static_cast<double>(covered) / ratio + 0.5);
      }
    }
  }
  return profiles;
}

}  // namespace provkit

#include "provkit/patterns.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>
#include <unordered_map>

namespace provkit {

PatternIndex PatternIndex::build(std::span<const TokenSequence> docs,
                                 std::size_t min_len, std::size_t cap) {
  if (docs.empty()) {
    throw std::invalid_argument("pattern index needs at least one document");
  }
  if (min_len < 1 || min_len > cap) {
    throw std::invalid_argument("pattern index requires 1 <= min_len <= cap");
  }

  PatternIndex index;
  index.min_len_ = min_len;
  index.cap_ = cap;
  index.docs_.assign(docs.begin(), docs.end());

  std::size_t total_words = 0;
  for (const auto& doc : index.docs_) {
    if (doc.tokens.empty()) {
      throw std::invalid_argument("document '" + doc.doc_id +
                                  "' has no tokens");
    }
    total_words += doc.word_count();
  }
  for (std::size_t i = 0; i < index.docs_.size(); ++i) {
    for (std::size_t j = i + 1; j < index.docs_.size(); ++j) {
      if (index.docs_[i].doc_id == index.docs_[j].doc_id) {
        throw std::invalid_argument("duplicate document id '" +
                                    index.docs_[i].doc_id + "'");
      }
    }
  }

  // Intern words with ids equal to lexicographic rank, so word-sequence
  // comparisons reduce to integer-sequence comparisons.
  std::vector<std::string> vocab;
  vocab.reserve(total_words);
  for (const auto& doc : index.docs_) {
    vocab.insert(vocab.end(), doc.tokens.begin(), doc.tokens.end());
  }
  std::sort(vocab.begin(), vocab.end());
  vocab.erase(std::unique(vocab.begin(), vocab.end()), vocab.end());

  std::unordered_map<std::string_view, std::int32_t> rank;
  rank.reserve(vocab.size());
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    rank.emplace(vocab[i], static_cast<std::int32_t>(i));
  }

  index.vocab_ = std::move(vocab);
  index.encoded_.resize(index.docs_.size());
  for (std::size_t d = 0; d < index.docs_.size(); ++d) {
    auto& ids = index.encoded_[d];
    ids.reserve(index.docs_[d].word_count());
    for (const auto& token : index.docs_[d].tokens) {
      ids.push_back(rank.find(token)->second);
    }
  }

  index.entries_.reserve(total_words);
  for (std::size_t d = 0; d < index.docs_.size(); ++d) {
    const std::uint32_t wc =
        static_cast<std::uint32_t>(index.docs_[d].word_count());
    for (std::uint32_t start = 0; start < wc; ++start) {
      std::uint32_t key_len =
          std::min<std::uint32_t>(static_cast<std::uint32_t>(cap), wc - start);
      index.entries_.push_back(
          {static_cast<std::uint32_t>(d), start, key_len});
    }
  }

  const auto& encoded = index.encoded_;
  auto compare = [&encoded](const SuffixEntry& a, const SuffixEntry& b) {
    const auto& wa = encoded[a.doc];
    const auto& wb = encoded[b.doc];
    const std::uint32_t n = std::min(a.key_len, b.key_len);
    for (std::uint32_t i = 0; i < n; ++i) {
      const std::int32_t x = wa[a.start + i];
      const std::int32_t y = wb[b.start + i];
      if (x != y) return x < y;
    }
    if (a.key_len != b.key_len) return a.key_len < b.key_len;
    if (a.doc != b.doc) return a.doc < b.doc;
    return a.start < b.start;
  };
  std::sort(index.entries_.begin(), index.entries_.end(), compare);

  index.lcp_.assign(index.entries_.size(), 0);
  for (std::size_t i = 1; i < index.entries_.size(); ++i) {
    const SuffixEntry& a = index.entries_[i - 1];
    const SuffixEntry& b = index.entries_[i];
    const auto& wa = encoded[a.doc];
    const auto& wb = encoded[b.doc];
    const std::uint32_t n = std::min(a.key_len, b.key_len);
    std::uint32_t l = 0;
    while (l < n && wa[a.start + l] == wb[b.start + l]) ++l;
    index.lcp_[i] = l;
  }
  return index;
}

std::size_t PatternIndex::doc_index(std::string_view doc_id) const {
  for (std::size_t d = 0; d < docs_.size(); ++d) {
    if (docs_[d].doc_id == doc_id) return d;
  }
  throw std::invalid_argument("document '" + std::string(doc_id) +
                              "' is not in the index");
}

void PatternIndex::dump(std::ostream& out) const {
  for (const auto& e : entries_) {
    out << docs_[e.doc].doc_id << '\t' << e.start << '\t';
    for (std::uint32_t i = 0; i < e.key_len; ++i) {
      if (i) out << ' ';
      out << vocab_[encoded_[e.doc][e.start + i]];
    }
    out << '\n';
  }
}

std::size_t CommonPattern::total_occurrences() const {
  std::size_t n = 0;
  for (const auto& [_, starts] : occurrences) n += starts.size();
  return n;
}

std::string CommonPattern::text() const {
  std::string out;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (i) out.push_back(' ');
    out += words[i];
  }
  return out;
}

std::vector<CommonPattern> detect_repeated(const PatternIndex& index) {
  const auto entries = index.entries();
  std::vector<CommonPattern> result;

  // Entries sharing their first L words are contiguous in the sorted array
  // (shorter keys sort before their extensions), so for each level L one
  // scan over maximal runs of entries with key_len >= L joined by lcp >= L
  // yields every repeated pattern of that exact length.
  constexpr std::size_t kNoRun = static_cast<std::size_t>(-1);
  for (std::size_t length = index.min_len(); length <= index.cap(); ++length) {
    const auto L = static_cast<std::uint32_t>(length);
    std::size_t run_begin = kNoRun;
    for (std::size_t i = 0; i <= entries.size(); ++i) {
      const bool extends = i < entries.size() && run_begin != kNoRun &&
                           entries[i].key_len >= L && index.lcp(i) >= L;
      if (extends) continue;

      if (run_begin != kNoRun && i - run_begin >= 2) {
        const SuffixEntry& head = entries[run_begin];
        CommonPattern pattern;
        pattern.words.reserve(length);
        const auto ids = index.encoded(head.doc);
        for (std::uint32_t k = 0; k < L; ++k) {
          pattern.words.push_back(index.word(ids[head.start + k]));
        }
        for (std::size_t j = run_begin; j < i; ++j) {
          const SuffixEntry& e = entries[j];
          pattern.occurrences[index.member_docs()[e.doc].doc_id].push_back(
              e.start);
        }
        for (auto& [_, starts] : pattern.occurrences) {
          std::sort(starts.begin(), starts.end());
        }
        result.push_back(std::move(pattern));
      }
      run_begin =
          (i < entries.size() && entries[i].key_len >= L) ? i : kNoRun;
    }
  }
  return result;
}

namespace {

CommonPatternSet filter_pair(std::span<const CommonPattern> all,
                             std::string_view a, std::string_view b) {
  CommonPatternSet set;
  set.doc_a = std::string(a);
  set.doc_b = std::string(b);
  for (const auto& pattern : all) {
    auto ita = pattern.occurrences.find(set.doc_a);
    auto itb = pattern.occurrences.find(set.doc_b);
    if (ita == pattern.occurrences.end() || itb == pattern.occurrences.end()) {
      continue;
    }
    CommonPattern restricted;
    restricted.words = pattern.words;
    restricted.occurrences.emplace(ita->first, ita->second);
    restricted.occurrences.emplace(itb->first, itb->second);
    set.patterns.push_back(std::move(restricted));
  }
  return set;
}

}  // namespace

CommonPatternSet common_patterns(const PatternIndex& index,
                                 std::string_view a, std::string_view b) {
  if (a == b) {
    throw std::invalid_argument("pair requires two distinct documents");
  }
  index.doc_index(a);  // validate membership
  index.doc_index(b);
  auto all = detect_repeated(index);
  return filter_pair(all, a, b);
}

CommonPatternSet common_patterns(std::span<const CommonPattern> all,
                                 std::string_view a, std::string_view b) {
  if (a == b) {
    throw std::invalid_argument("pair requires two distinct documents");
  }
  return filter_pair(all, a, b);
}

}  // namespace provkit

#ifndef PROVKIT_CORPUS_HPP
#define PROVKIT_CORPUS_HPP

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace provkit {

enum class Role { Original, Suspicious, Reference, Other };

std::string_view to_string(Role role);
std::optional<Role> role_from_string(std::string_view name);

/// One article as ingested from disk. Immutable after construction.
struct Document {
  std::string id;        // unique within a corpus, e.g. "business/001"
  std::string category;  // source subdirectory, e.g. "business"
  Role role = Role::Original;
  std::string raw_text;
};

/// Cleaned, ordered word list of a document.
struct TokenSequence {
  std::string doc_id;
  std::vector<std::string> tokens;

  std::size_t word_count() const { return tokens.size(); }
};

struct CleanOptions {
  /// Also replace apostrophes (' and the typographic forms) with spaces.
  /// Off by default; the stock pipeline keeps them.
  bool strip_apostrophes = false;
};

struct TokenizeOptions {
  CleanOptions clean;
  /// Case-fold tokens to lower case so that paraphrase-induced
  /// capitalization changes do not break pattern matches. Disable for
  /// case-exact comparisons.
  bool fold_case = true;
};

/// Replaces every occurrence of the separator characters
///   . , ; ! ? : ( ) - * [ ] { } \ / " #
/// with a single space. Typographic quotes are normalized to their straight
/// forms first so that curly double quotes are cleaned like straight ones.
/// Idempotent; empty input yields empty output.
std::string clean_text(std::string_view raw, const CleanOptions& opts = {});

/// Splits cleaned text into maximal runs of non-whitespace characters,
/// optionally case-folded (ASCII) to lower case.
TokenSequence tokenize(std::string_view cleaned, std::string doc_id = {},
                       bool fold_case = true);

/// clean_text + tokenize for a document, carrying its id along.
TokenSequence tokenize_document(const Document& doc,
                                const TokenizeOptions& opts = {});

struct TokenizedDoc {
  Document doc;
  TokenSequence tokens;
};

std::vector<TokenizedDoc> tokenize_corpus(std::span<const Document> docs,
                                          const TokenizeOptions& opts = {});

struct IngestError {
  std::filesystem::path path;
  std::string message;
};

struct IngestResult {
  std::vector<Document> documents;  // ordered by (role, category, filename)
  std::vector<IngestError> errors;  // per-file problems; ingestion continued
};

/// Reads a dataset laid out as <root>/<category>/<article>.txt (role
/// Original), plus optional companion roots <root>-suspicious/,
/// <root>-reference/ and <root>-other/ with matching layout. Companion
/// documents get ids of the form "<category>/<stem>:<role>". Unreadable
/// files become error records; a duplicate id is a hard error (IoError).
IngestResult ingest_corpus(const std::filesystem::path& root);

/// Reads a manifest CSV with header id,category,role,path. Relative paths
/// are resolved against the manifest's directory.
IngestResult ingest_manifest(const std::filesystem::path& csv_path);

struct CategoryStats {
  std::size_t count = 0;
  std::size_t max_words = 0;
  std::size_t min_words = 0;
  double mean_words = 0.0;
  double stdev_words = 0.0;  // sample standard deviation (n-1); 0 when n == 1
};

/// category -> descriptive statistics of word counts.
using CorpusStats = std::map<std::string, CategoryStats>;

/// Per-category count/max/min/mean/stdev of word counts. Categories with no
/// documents are simply absent from the result.
CorpusStats corpus_stats(std::span<const TokenizedDoc> docs);

}  // namespace provkit

#endif  // PROVKIT_CORPUS_HPP

#include "provkit/corpus.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "provkit/csv.hpp"
#include "provkit/errors.hpp"

namespace fs = std::filesystem;

namespace provkit {
namespace {

constexpr std::string_view kSeparators = ".,;!?:()-*[]{}\\/\"#";

bool is_separator(char c, const CleanOptions& opts) {
  if (opts.strip_apostrophes && c == '\'') return true;
  return kSeparators.find(c) != std::string_view::npos;
}

// UTF-8 sequences for the typographic quotes we normalize before cleaning.
struct QuoteMapping {
  std::string_view utf8;
  char straight;
};
constexpr std::array<QuoteMapping, 4> kQuoteMappings{{
    {"\xe2\x80\x9c", '"'},   // left double
    {"\xe2\x80\x9d", '"'},   // right double
    {"\xe2\x80\x98", '\''},  // left single
    {"\xe2\x80\x99", '\''},  // right single
}};

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("read failed for " + path.string());
  return std::move(buf).str();
}

// Scans one dataset root (category subdirectories of .txt files) and appends
// documents in (category, filename) order.
void scan_root(const fs::path& root, Role role, std::vector<Document>* out,
               std::vector<IngestError>* errors) {
  std::vector<fs::path> categories;
  for (const auto& entry : fs::directory_iterator(root)) {
    if (entry.is_directory()) categories.push_back(entry.path());
  }
  std::sort(categories.begin(), categories.end());

  for (const auto& cat_dir : categories) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(cat_dir)) {
      // anything that is not a directory counts as an article file; broken
      // links and unreadable entries surface as per-file errors below
      if (!entry.is_directory()) files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());

    for (const auto& file : files) {
      Document doc;
      doc.category = cat_dir.filename().string();
      doc.role = role;
      doc.id = doc.category + "/" + file.stem().string();
      if (role != Role::Original) {
        doc.id += ":";
        doc.id += to_string(role);
      }
      try {
        doc.raw_text = read_file(file);
      } catch (const IoError& e) {
        errors->push_back({file, e.what()});
        continue;
      }
      out->push_back(std::move(doc));
    }
  }
}

void check_unique_ids(const std::vector<Document>& docs) {
  std::map<std::string_view, const Document*> seen;
  for (const auto& doc : docs) {
    auto [it, inserted] = seen.emplace(doc.id, &doc);
    if (!inserted) {
      throw IoError("duplicate document id '" + doc.id + "'");
    }
  }
}

}  // namespace

std::string_view to_string(Role role) {
  switch (role) {
    case Role::Original: return "original";
    case Role::Suspicious: return "suspicious";
    case Role::Reference: return "reference";
    case Role::Other: return "other";
  }
  return "original";
}

std::optional<Role> role_from_string(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (lower == "original") return Role::Original;
  if (lower == "suspicious") return Role::Suspicious;
  if (lower == "reference") return Role::Reference;
  if (lower == "other") return Role::Other;
  return std::nullopt;
}

std::string clean_text(std::string_view raw, const CleanOptions& opts) {
  std::string out;
  out.reserve(raw.size());
  for (std::size_t i = 0; i < raw.size();) {
    bool mapped = false;
    for (const auto& q : kQuoteMappings) {
      if (raw.substr(i, q.utf8.size()) == q.utf8) {
        char straight = q.straight;
        out.push_back(is_separator(straight, opts) ? ' ' : straight);
        i += q.utf8.size();
        mapped = true;
        break;
      }
    }
    if (mapped) continue;
    char c = raw[i++];
    out.push_back(is_separator(c, opts) ? ' ' : c);
  }
  return out;
}

TokenSequence tokenize(std::string_view cleaned, std::string doc_id,
                       bool fold_case) {
  TokenSequence seq;
  seq.doc_id = std::move(doc_id);
  std::size_t i = 0;
  while (i < cleaned.size()) {
    while (i < cleaned.size() &&
           std::isspace(static_cast<unsigned char>(cleaned[i]))) {
      ++i;
    }
    std::size_t start = i;
    while (i < cleaned.size() &&
           !std::isspace(static_cast<unsigned char>(cleaned[i]))) {
      ++i;
    }
    if (i > start) {
      std::string word(cleaned.substr(start, i - start));
      if (fold_case) {
        std::transform(word.begin(), word.end(), word.begin(),
                       [](unsigned char c) { return std::tolower(c); });
      }
      seq.tokens.push_back(std::move(word));
    }
  }
  return seq;
}

TokenSequence tokenize_document(const Document& doc,
                                const TokenizeOptions& opts) {
  return tokenize(clean_text(doc.raw_text, opts.clean), doc.id,
                  opts.fold_case);
}

std::vector<TokenizedDoc> tokenize_corpus(std::span<const Document> docs,
                                          const TokenizeOptions& opts) {
  std::vector<TokenizedDoc> out;
  out.reserve(docs.size());
  for (const auto& doc : docs) {
    out.push_back({doc, tokenize_document(doc, opts)});
  }
  return out;
}

IngestResult ingest_corpus(const fs::path& root) {
  if (!fs::exists(root) || !fs::is_directory(root)) {
    throw IoError("dataset root not found: " + root.string());
  }
  IngestResult result;
  scan_root(root, Role::Original, &result.documents, &result.errors);

  const std::array<std::pair<std::string, Role>, 3> companions{{
      {"-suspicious", Role::Suspicious},
      {"-reference", Role::Reference},
      {"-other", Role::Other},
  }};
  for (const auto& [suffix, role] : companions) {
    fs::path companion = root;
    companion += suffix;
    if (fs::exists(companion) && fs::is_directory(companion)) {
      scan_root(companion, role, &result.documents, &result.errors);
    }
  }
  check_unique_ids(result.documents);
  return result;
}

IngestResult ingest_manifest(const fs::path& csv_path) {
  std::ifstream in(csv_path);
  if (!in) throw IoError("cannot open manifest " + csv_path.string());

  IngestResult result;
  const fs::path base = csv_path.parent_path();
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto fields = csv::parse_line(line);
    if (lineno == 1 && !fields.empty() && fields[0] == "id") continue;  // header
    if (fields.size() != 4) {
      result.errors.push_back(
          {csv_path, "line " + std::to_string(lineno) +
                         ": expected 4 fields id,category,role,path"});
      continue;
    }
    auto role = role_from_string(fields[2]);
    if (!role) {
      result.errors.push_back({csv_path, "line " + std::to_string(lineno) +
                                             ": unknown role '" + fields[2] +
                                             "'"});
      continue;
    }
    fs::path file = fields[3];
    if (file.is_relative()) file = base / file;
    Document doc{fields[0], fields[1], *role, {}};
    try {
      doc.raw_text = read_file(file);
    } catch (const IoError& e) {
      result.errors.push_back({file, e.what()});
      continue;
    }
    result.documents.push_back(std::move(doc));
  }
  check_unique_ids(result.documents);
  return result;
}

CorpusStats corpus_stats(std::span<const TokenizedDoc> docs) {
  std::map<std::string, std::vector<std::size_t>> counts;
  for (const auto& td : docs) {
    counts[td.doc.category].push_back(td.tokens.word_count());
  }
  CorpusStats stats;
  for (const auto& [category, words] : counts) {
    if (words.empty()) continue;
    CategoryStats cs;
    cs.count = words.size();
    cs.max_words = *std::max_element(words.begin(), words.end());
    cs.min_words = *std::min_element(words.begin(), words.end());
    double sum = 0.0;
    for (std::size_t w : words) sum += static_cast<double>(w);
    cs.mean_words = sum / static_cast<double>(words.size());
    if (words.size() > 1) {
      double ss = 0.0;
      for (std::size_t w : words) {
        double d = static_cast<double>(w) - cs.mean_words;
        ss += d * d;
      }
      cs.stdev_words = std::sqrt(ss / static_cast<double>(words.size() - 1));
    }
    stats.emplace(category, cs);
  }
  return stats;
}

}  // namespace provkit

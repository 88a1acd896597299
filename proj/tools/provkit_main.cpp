// provkit: paraphrase-provenance detection over word-level repeated patterns.
//
// Subcommands wire the pipeline end to end:
//   ingest -> (optional) paraphrase -> classify -> evaluate -> report/render
#include <atomic>
#include <chrono>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "app_config.hpp"
#include "provkit/csv.hpp"
#include "provkit/errors.hpp"
#include "provkit/evaluation.hpp"
#include "provkit/stats.hpp"

namespace fs = std::filesystem;
using namespace provkit;
using cli::AppConfig;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitProvider = 3;
constexpr int kExitConfig = 4;

void emit_error(const std::string& kind, const std::string& message) {
  nlohmann::json j{{"error", {{"kind", kind}, {"message", message}}}};
  std::cerr << j.dump() << '\n';
}

std::string read_text_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return std::move(buf).str();
}

void write_text_file(const fs::path& path, const std::string& text) {
  if (!path.parent_path().empty()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
}

TokenSequence load_tokens(const fs::path& path, const AppConfig& config,
                          std::string id = {}) {
  Document doc;
  doc.id = id.empty() ? path.string() : std::move(id);
  doc.raw_text = read_text_file(path);
  return tokenize_document(doc, config.tokenize);
}

std::uint64_t fnv1a(std::string_view data, std::uint64_t hash) {
  for (unsigned char c : data) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

std::string hex_id(std::uint64_t hash) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(hash));
  return buf;
}

std::string iso8601_now() {
  const std::time_t now = std::time(nullptr);
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &utc);
  return buf;
}

void write_output(const std::string& out_path, const std::string& text) {
  if (out_path.empty()) {
    std::cout << text;
  } else {
    write_text_file(out_path, text);
  }
}

// ---------------------------------------------------------------------------
// classify

struct ClassifyArgs {
  std::string original_path;
  std::string suspicious_path;
  std::string reference_path;
  std::string out_path;
};

int cmd_classify(const ClassifyArgs& args, const AppConfig& config) {
  auto original = load_tokens(args.original_path, config);
  std::string suspicious_id = args.suspicious_path;
  if (suspicious_id == args.original_path) suspicious_id += ":suspicious";
  auto suspicious = load_tokens(args.suspicious_path, config, suspicious_id);

  ReferenceProvider provider;
  if (!args.reference_path.empty()) {
    std::string reference_id = args.reference_path;
    if (reference_id == args.original_path ||
        reference_id == args.suspicious_path) {
      reference_id += ":reference";
    }
    auto reference = load_tokens(args.reference_path, config, reference_id);
    provider = [reference](const TokenSequence&) { return reference; };
  } else {
    provider = cli::make_llm_provider(cli::make_client(config.llm), config);
  }

  auto verdict = classify(original, suspicious, config.classifier, provider);
  write_output(args.out_path, verdict.to_json().dump(2) + "\n");
  return kExitOk;
}

// ---------------------------------------------------------------------------
// profile

struct ProfileArgs {
  std::vector<std::string> paths;  // 2 or 3
  std::string out_path;
};

int cmd_profile(const ProfileArgs& args, const AppConfig& config) {
  const auto min_len = config.classifier.min_len;
  const auto cap = config.classifier.cap;

  std::vector<SimilarityProfile> profiles;
  if (args.paths.size() == 2) {
    auto a = load_tokens(args.paths[0], config);
    std::string b_id = args.paths[1];
    if (b_id == args.paths[0]) b_id += ":b";
    auto b = load_tokens(args.paths[1], config, b_id);
    const std::vector<TokenSequence> docs{a, b};
    auto index = PatternIndex::build(docs, min_len, cap);
    auto set = common_patterns(index, a.doc_id, b.doc_id);
    profiles.push_back(profile(a, b, set, min_len, cap));
    profiles.push_back(profile(b, a, set, min_len, cap));
  } else {
    auto original = load_tokens(args.paths[0], config);
    auto suspicious = load_tokens(args.paths[1], config);
    auto reference = load_tokens(args.paths[2], config);
    auto triple = profile_triple(original, suspicious, reference,
                                 {min_len, cap});
    profiles.push_back(triple.original_suspicious);
    profiles.push_back(triple.reference_original);
    profiles.push_back(triple.reference_suspicious);
  }

  std::ostringstream out;
  write_profile_csv(out, profiles);
  write_output(args.out_path, out.str());
  return kExitOk;
}

// ---------------------------------------------------------------------------
// render

struct RenderArgs {
  std::vector<std::string> paths;  // 2 or 3
  bool blocks = false;
  std::size_t length = 0;  // 0: use min_len
  std::string out_path;
};

int cmd_render(const RenderArgs& args, const AppConfig& config,
               const std::string& format) {
  const auto min_len = config.classifier.min_len;
  const auto cap = config.classifier.cap;
  const std::size_t length = args.length == 0 ? min_len : args.length;

  std::vector<TokenSequence> docs;
  for (std::size_t i = 0; i < args.paths.size(); ++i) {
    std::string id = args.paths[i];
    for (std::size_t j = 0; j < i; ++j) {
      if (args.paths[j] == args.paths[i]) id += ":" + std::to_string(i);
    }
    docs.push_back(load_tokens(args.paths[i], config, id));
  }

  auto index = PatternIndex::build(docs, min_len, cap);
  std::vector<CommonPatternSet> sets;
  if (docs.size() == 2) {
    sets.push_back(common_patterns(index, docs[0].doc_id, docs[1].doc_id));
  } else {
    auto all = detect_repeated(index);
    // fixed pair order: original-suspicious, reference-original,
    // reference-suspicious
    sets.push_back(common_patterns(all, docs[0].doc_id, docs[1].doc_id));
    sets.push_back(common_patterns(all, docs[2].doc_id, docs[0].doc_id));
    sets.push_back(common_patterns(all, docs[2].doc_id, docs[1].doc_id));
  }

  std::ostringstream out;
  if (args.blocks) {
    for (const auto& line : render_block_diagram(docs, sets, length)) {
      out << line.base_id << " vs " << line.other_id << '\t' << line.glyphs
          << '\n';
    }
  } else {
    const MarkupStyle style =
        format == "ansi" ? MarkupStyle::Ansi : MarkupStyle::Html;
    if (format != "ansi" && format != "html") {
      throw ConfigError("render markup needs --format html or ansi");
    }
    if (style == MarkupStyle::Html) {
      out << "<!doctype html>\n<html><body>\n<table><tr>\n";
      if (docs.size() == 2) {
        out << "<td>"
            << render_pair_markup(docs[0], sets[0], length, style,
                                  kSlotOriginalSuspicious)
            << "</td>\n";
      } else {
        out << "<td>"
            << render_pair_markup(docs[0], sets[1], length, style,
                                  kSlotReferenceOriginal)
            << "</td>\n<td>"
            << render_pair_markup(docs[1], sets[2], length, style,
                                  kSlotReferenceSuspicious)
            << "</td>\n<td>"
            << render_dual_markup(docs[2], sets[1], sets[2], length, style)
            << "</td>\n";
      }
      out << "</tr></table>\n</body></html>\n";
    } else {
      if (docs.size() == 2) {
        out << "== " << docs[0].doc_id << " vs " << docs[1].doc_id << "\n"
            << render_pair_markup(docs[0], sets[0], length, style,
                                  kSlotOriginalSuspicious)
            << "\n";
      } else {
        out << "== " << docs[0].doc_id << " (vs reference)\n"
            << render_pair_markup(docs[0], sets[1], length, style,
                                  kSlotReferenceOriginal)
            << "\n== " << docs[1].doc_id << " (vs reference)\n"
            << render_pair_markup(docs[1], sets[2], length, style,
                                  kSlotReferenceSuspicious)
            << "\n== " << docs[2].doc_id << " (vs both)\n"
            << render_dual_markup(docs[2], sets[1], sets[2], length, style)
            << "\n";
      }
    }
  }
  write_output(args.out_path, out.str());
  return kExitOk;
}

// ---------------------------------------------------------------------------
// stats

struct StatsArgs {
  std::vector<std::string> class_a_files;
  std::vector<std::string> class_b_files;
  std::string category = "all";
  std::string comparison = "A against B";
  std::size_t rounds = 100;
  std::size_t sample_size = 30;
  bool replacement = false;
  bool pooled = false;
  std::string out_path;
};

std::vector<SimilarityProfile> read_profiles(
    const std::vector<std::string>& files) {
  std::vector<SimilarityProfile> profiles;
  for (const auto& file : files) {
    std::ifstream in(file);
    if (!in) throw IoError("cannot open profile CSV " + file);
    auto part = read_profile_csv(in);
    profiles.insert(profiles.end(), part.begin(), part.end());
  }
  return profiles;
}

int cmd_stats(const StatsArgs& args, std::uint64_t seed_base) {
  auto class_a = read_profiles(args.class_a_files);
  auto class_b = read_profiles(args.class_b_files);
  if (class_a.empty() || class_b.empty()) {
    throw IoError("both classes need at least one profile");
  }

  std::size_t min_len = class_a.front().min_len;
  std::size_t cap = class_a.front().cap;
  for (const auto& prof : class_a) {
    min_len = std::max(min_len, prof.min_len);
    cap = std::min(cap, prof.cap);
  }
  for (const auto& prof : class_b) {
    min_len = std::max(min_len, prof.min_len);
    cap = std::min(cap, prof.cap);
  }
  if (min_len > cap) {
    throw IoError("profile length ranges of the two classes do not overlap");
  }

  BootstrapSpec spec;
  spec.rounds = args.rounds;
  spec.sample_size = args.sample_size;
  spec.replacement = args.replacement;
  spec.seed_base = seed_base;
  const auto model =
      args.pooled ? VarianceModel::Pooled : VarianceModel::Unequal;

  std::ostringstream out;
  out << "category,pattern_length,comparison,t_statistic,p_value\n";
  char t_buf[32];
  for (std::size_t L = min_len; L <= cap; ++L) {
    auto result = class_comparison(class_a, class_b, L, spec, model);
    std::snprintf(t_buf, sizeof(t_buf), "%.3f", result.t_statistic);
    out << csv::escape(args.category) << ',' << L << ','
        << csv::escape(args.comparison) << ',' << t_buf << ','
        << format_p_value(result.p_value) << '\n';
  }
  write_output(args.out_path, out.str());
  return kExitOk;
}

// ---------------------------------------------------------------------------
// evaluate

struct EvaluateArgs {
  std::string manifest_path;
  std::string out_dir;
};

struct EvaluateRow {
  std::string id;
  std::string category;
  Label truth;
  fs::path original;
  fs::path suspicious;
  fs::path reference;  // may be empty
};

struct RowOutcome {
  bool failed = false;
  std::string error;
  Verdict verdict;
  ClassifyTrace trace;
};

int cmd_evaluate(const EvaluateArgs& args, const AppConfig& config,
                 unsigned jobs) {
  const fs::path manifest_path(args.manifest_path);
  std::ifstream in(manifest_path);
  if (!in) throw IoError("cannot open manifest " + manifest_path.string());
  const fs::path base = manifest_path.parent_path();

  std::vector<EvaluateRow> rows;
  std::size_t rejected = 0;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto fields = csv::parse_line(line);
    if (lineno == 1 && !fields.empty() && fields[0] == "id") continue;
    if (fields.size() != 5 && fields.size() != 6) {
      ++rejected;
      continue;
    }
    EvaluateRow row;
    row.id = fields[0];
    row.category = fields[1];
    std::string truth = fields[2];
    for (auto& c : truth) {
      c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    if (truth == "chatgpt" || truth == "chatgptparaphrase") {
      row.truth = Label::ChatGPTParaphrase;
    } else if (truth == "other") {
      row.truth = Label::Other;
    } else {
      ++rejected;  // no usable truth label
      continue;
    }
    auto resolve = [&base](const std::string& p) {
      fs::path path(p);
      return path.is_relative() ? base / path : path;
    };
    row.original = resolve(fields[3]);
    row.suspicious = resolve(fields[4]);
    if (fields.size() == 6 && !fields[5].empty()) {
      row.reference = resolve(fields[5]);
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) {
    throw IoError("manifest has no usable rows (" + std::to_string(rejected) +
                  " rejected)");
  }

  auto client = cli::make_client(config.llm);
  const auto llm_provider = cli::make_llm_provider(client, config);

  const std::string started_at = iso8601_now();
  std::vector<RowOutcome> outcomes(rows.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= rows.size()) return;
      const auto& row = rows[i];
      auto& outcome = outcomes[i];
      try {
        auto original = load_tokens(row.original, config, row.id + ":original");
        auto suspicious =
            load_tokens(row.suspicious, config, row.id + ":suspicious");
        ReferenceProvider provider;
        if (!row.reference.empty()) {
          auto reference =
              load_tokens(row.reference, config, row.id + ":reference");
          provider = [reference](const TokenSequence&) { return reference; };
        } else {
          provider = llm_provider;
        }
        outcome.verdict = classify(original, suspicious, config.classifier,
                                   provider, &outcome.trace);
      } catch (const std::exception& e) {
        outcome.failed = true;
        outcome.error = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  const unsigned n_workers = std::max(1u, jobs);
  for (unsigned t = 0; t < n_workers; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  const std::string finished_at = iso8601_now();

  // per-category scoring, categories in first-seen order
  std::vector<std::string> categories;
  std::map<std::string, std::vector<LabeledOutcome>> labeled;
  std::map<std::string, std::uint64_t> near_copies;
  std::size_t failed = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (outcomes[i].failed) {
      ++failed;
      continue;
    }
    const auto& category = rows[i].category;
    if (!labeled.count(category)) categories.push_back(category);
    labeled[category].push_back({outcomes[i].verdict.label, rows[i].truth});
    if (outcomes[i].verdict.label == Label::NearCopy) ++near_copies[category];
  }
  if (labeled.empty()) {
    throw IoError("every manifest row failed; nothing to score");
  }

  std::vector<CategoryReport> reports;
  for (const auto& category : categories) {
    CategoryReport report;
    report.category = category;
    report.confusion = score_run(labeled[category]);
    report.metric_set = metrics(report.confusion);
    report.near_copy_count = near_copies[category];
    reports.push_back(std::move(report));
  }

  // run id derives from inputs, not wall time, to keep outputs reproducible
  std::uint64_t digest = 0xcbf29ce484222325ULL;
  digest = fnv1a(read_text_file(manifest_path), digest);
  digest = fnv1a(config.snapshot.dump(), digest);
  auto report = build_report(hex_id(digest), config.snapshot, reports);

  const fs::path out_dir(args.out_dir);
  fs::create_directories(out_dir);
  write_text_file(out_dir / "report.json", report.to_json().dump(2) + "\n");
  {
    std::ostringstream csv_out;
    report.write_csv(csv_out);
    write_text_file(out_dir / "report.csv", csv_out.str());
  }
  {
    std::vector<SimilarityProfile> profiles;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (outcomes[i].failed) continue;
      profiles.push_back(outcomes[i].trace.original_suspicious);
      if (outcomes[i].trace.triple) {
        profiles.push_back(outcomes[i].trace.triple->reference_original);
        profiles.push_back(outcomes[i].trace.triple->reference_suspicious);
      }
    }
    std::ostringstream csv_out;
    write_profile_csv(csv_out, profiles);
    write_text_file(out_dir / "profiles.csv", csv_out.str());
  }
  {
    nlohmann::json records = nlohmann::json::array();
    for (std::size_t i = 0; i < rows.size(); ++i) {
      nlohmann::json record{{"id", rows[i].id},
                            {"category", rows[i].category},
                            {"truth", rows[i].truth == Label::Other
                                          ? "other"
                                          : "chatgpt"}};
      if (outcomes[i].failed) {
        record["error"] = outcomes[i].error;
      } else {
        record["verdict"] = outcomes[i].verdict.to_json();
      }
      records.push_back(std::move(record));
    }
    nlohmann::json manifest{{"run_id", report.run_id},
                            {"config", config.snapshot},
                            {"inputs", {{"manifest", manifest_path.string()}}},
                            {"started_at", started_at},
                            {"finished_at", finished_at},
                            {"rejected_rows", rejected},
                            {"failed_rows", failed},
                            {"records", records}};
    write_text_file(out_dir / "manifest.json", manifest.dump(2) + "\n");
  }

  std::cout << "scored " << rows.size() - failed << " articles ("
            << rejected << " rejected, " << failed << " failed)\n";
  std::cout << "overall accuracy "
            << format_percent(report.overall.metric_set.accuracy)
            << "% precision "
            << format_percent(report.overall.metric_set.precision)
            << "% sensitivity "
            << format_percent(report.overall.metric_set.sensitivity)
            << "% specificity "
            << format_percent(report.overall.metric_set.specificity)
            << "% f1 " << format_percent(report.overall.metric_set.f1)
            << "%\n";
  if (report.overall.near_copy_count > 0) {
    std::cout << "note: " << report.overall.near_copy_count
              << " verdicts were near-copies (phase 1)\n";
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// paraphrase

struct ParaphraseArgs {
  std::string input_root;
  std::string output_root;
  double temperature = -1.0;  // <0: take the config/role default
  std::string role = "reference";
};

int cmd_paraphrase(const ParaphraseArgs& args, const AppConfig& config) {
  auto ingest = ingest_corpus(args.input_root);
  auto client = cli::make_client(config.llm);

  double temperature = config.llm.temperature;
  if (args.role == "suspicious") temperature = 1.0;
  if (args.role == "reference") temperature = 0.0;
  if (args.temperature >= 0.0) temperature = args.temperature;

  std::size_t written = 0;
  for (const auto& doc : ingest.documents) {
    if (doc.role != Role::Original) continue;
    ParaphraseRequest request;
    request.source_text = doc.raw_text;
    request.temperature = temperature;
    request.model = config.llm.model;
    request.prompt_template = config.llm.prompt_template;
    auto result = client->paraphrase(request);

    const fs::path out_path = fs::path(args.output_root) / doc.category /
                              (fs::path(doc.id).filename().string() + ".txt");
    write_text_file(out_path, result.text);
    ++written;
  }
  for (const auto& error : ingest.errors) {
    std::cerr << "skipped " << error.path.string() << ": " << error.message
              << '\n';
  }
  std::cout << "wrote " << written << " paraphrases under " << args.output_root
            << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------------------
// ingest-check

struct IngestCheckArgs {
  std::string root;
  std::string manifest;
};

int cmd_ingest_check(const IngestCheckArgs& args, const AppConfig& config) {
  IngestResult result = args.manifest.empty()
                            ? ingest_corpus(args.root)
                            : ingest_manifest(args.manifest);
  auto tokenized = tokenize_corpus(result.documents, config.tokenize);
  auto stats = corpus_stats(tokenized);

  std::cout << "category        count     max     min     mean    stdev\n";
  char buf[160];
  for (const auto& [category, cs] : stats) {
    std::snprintf(buf, sizeof(buf), "%-15s %5zu %7zu %7zu %8.2f %8.2f\n",
                  category.c_str(), cs.count, cs.max_words, cs.min_words,
                  cs.mean_words, cs.stdev_words);
    std::cout << buf;
  }
  std::cout << "total documents: " << result.documents.size() << '\n';
  if (!result.errors.empty()) {
    std::cout << "unreadable files: " << result.errors.size() << '\n';
    for (const auto& error : result.errors) {
      std::cerr << "  " << error.path.string() << ": " << error.message
                << '\n';
    }
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"paraphrase-provenance detection toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  unsigned jobs = 1;
  std::uint64_t seed_base = 0;
  std::string format = "json";
  app.add_option("--config", config_path, "JSON config file");
  app.add_option("--jobs", jobs, "parallel workers for batch commands");
  app.add_option("--seed-base", seed_base, "offset added to bootstrap seeds");
  app.add_option("--format", format, "output format")
      ->check(CLI::IsMember({"json", "csv", "html", "ansi"}));

  auto enable_fallthrough = [](CLI::App* sub) {
    sub->fallthrough();
    return sub;
  };

  ClassifyArgs classify_args;
  auto* classify_cmd = enable_fallthrough(app.add_subcommand(
      "classify", "two-phase verdict for one suspicious text"));
  classify_cmd->add_option("original", classify_args.original_path)->required();
  classify_cmd->add_option("suspicious", classify_args.suspicious_path)
      ->required();
  classify_cmd->add_option("reference", classify_args.reference_path,
                           "preloaded reference paraphrase");
  classify_cmd->add_option("-o,--out", classify_args.out_path);

  ProfileArgs profile_args;
  auto* profile_cmd = enable_fallthrough(
      app.add_subcommand("profile", "per-length similarity profile CSV"));
  profile_cmd->add_option("texts", profile_args.paths, "2 or 3 text files")
      ->expected(2, 3);
  profile_cmd->add_option("-o,--out", profile_args.out_path);

  RenderArgs render_args;
  auto* render_cmd = enable_fallthrough(app.add_subcommand(
      "render", "highlight common patterns (markup or block diagram)"));
  render_cmd->add_option("texts", render_args.paths, "2 or 3 text files")
      ->expected(2, 3);
  render_cmd->add_flag("--blocks", render_args.blocks,
                       "one glyph per word instead of markup");
  render_cmd->add_option("-L,--length", render_args.length,
                         "pattern length for coverage (default: min_len)");
  render_cmd->add_option("-o,--out", render_args.out_path);

  StatsArgs stats_args;
  auto* stats_cmd = enable_fallthrough(app.add_subcommand(
      "stats", "bootstrap the two classes and t-test their round means"));
  stats_cmd->add_option("--class-a", stats_args.class_a_files)
      ->required()
      ->take_all();
  stats_cmd->add_option("--class-b", stats_args.class_b_files)
      ->required()
      ->take_all();
  stats_cmd->add_option("--category", stats_args.category);
  stats_cmd->add_option("--comparison", stats_args.comparison);
  stats_cmd->add_option("--rounds", stats_args.rounds);
  stats_cmd->add_option("--sample-size", stats_args.sample_size);
  stats_cmd->add_flag("--replacement", stats_args.replacement);
  stats_cmd->add_flag("--pooled", stats_args.pooled,
                      "classic equal-variance t-test");
  stats_cmd->add_option("-o,--out", stats_args.out_path);

  EvaluateArgs evaluate_args;
  auto* evaluate_cmd = enable_fallthrough(app.add_subcommand(
      "evaluate", "classify a labeled manifest and report metrics"));
  evaluate_cmd->add_option("manifest", evaluate_args.manifest_path)
      ->required();
  evaluate_cmd->add_option("--out-dir", evaluate_args.out_dir)->required();

  ParaphraseArgs paraphrase_args;
  auto* paraphrase_cmd = enable_fallthrough(app.add_subcommand(
      "paraphrase", "generate a paraphrase corpus via the configured backend"));
  paraphrase_cmd->add_option("input_root", paraphrase_args.input_root)
      ->required();
  paraphrase_cmd->add_option("output_root", paraphrase_args.output_root)
      ->required();
  paraphrase_cmd->add_option("--temperature", paraphrase_args.temperature);
  paraphrase_cmd->add_option("--role", paraphrase_args.role)
      ->check(CLI::IsMember({"reference", "suspicious", "other"}));

  IngestCheckArgs ingest_args;
  auto* ingest_cmd = enable_fallthrough(app.add_subcommand(
      "ingest-check", "validate a dataset layout and print its statistics"));
  ingest_cmd->add_option("root", ingest_args.root);
  ingest_cmd->add_option("--dataset-root", ingest_args.root,
                         "same as the positional root");
  ingest_cmd->add_option("--manifest", ingest_args.manifest,
                         "manifest CSV (id,category,role,path); overrides "
                         "the root");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    emit_error("usage", e.what());
    return kExitConfig;
  }

  try {
    AppConfig config = config_path.empty() ? AppConfig::defaults()
                                           : AppConfig::load(config_path);
    if (classify_cmd->parsed()) return cmd_classify(classify_args, config);
    if (profile_cmd->parsed()) return cmd_profile(profile_args, config);
    if (render_cmd->parsed()) return cmd_render(render_args, config, format);
    if (stats_cmd->parsed()) return cmd_stats(stats_args, seed_base);
    if (evaluate_cmd->parsed()) {
      return cmd_evaluate(evaluate_args, config, jobs);
    }
    if (paraphrase_cmd->parsed()) {
      return cmd_paraphrase(paraphrase_args, config);
    }
    if (ingest_cmd->parsed()) {
      if (ingest_args.root.empty() && ingest_args.manifest.empty()) {
        throw ConfigError("ingest-check needs a root or --manifest");
      }
      return cmd_ingest_check(ingest_args, config);
    }
    emit_error("usage", "no subcommand given");
    return kExitConfig;
  } catch (const ConfigError& e) {
    emit_error("config", e.what());
    return kExitConfig;
  } catch (const ProviderError& e) {
    emit_error(ProviderError::kind_name(e.kind()), e.what());
    return kExitProvider;
  } catch (const IoError& e) {
    emit_error("io", e.what());
    return kExitInput;
  } catch (const std::invalid_argument& e) {
    emit_error("input", e.what());
    return kExitInput;
  } catch (const std::exception& e) {
    emit_error("internal", e.what());
    return 1;
  }
}

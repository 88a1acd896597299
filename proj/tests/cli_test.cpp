#include <unistd.h>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "fixtures.hpp"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

struct CliResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return std::move(buf).str();
}

fs::path scratch_dir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() /
                 ("provkit_cli_" + std::to_string(::getpid()));
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

CliResult run_cli(const std::string& args) {
  const fs::path out_file = scratch_dir() / "stdout.txt";
  const fs::path err_file = scratch_dir() / "stderr.txt";
  const std::string command = std::string(PROVKIT_CLI_BIN) + " " + args +
                              " >" + out_file.string() + " 2>" +
                              err_file.string();
  const int status = std::system(command.c_str());
  CliResult result;
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  result.out = slurp(out_file);
  result.err = slurp(err_file);
  return result;
}

fs::path fixture(const std::string& name) {
  return provkit::testing::fixture_dir() / name;
}

fs::path write_scratch(const std::string& name, const std::string& text) {
  const fs::path path = scratch_dir() / name;
  fs::create_directories(path.parent_path());
  std::ofstream out(path);
  out << text;
  return path;
}

}  // namespace

TEST_CASE("classify: identical files are a near copy") {
  const std::string body =
      "markets rallied on tuesday after the central bank signalled that "
      "interest rates would stay on hold for the rest of the year while "
      "inflation continues to drift back toward its target band";
  const auto text = write_scratch("same_a.txt", body);
  const auto copy = write_scratch("same_b.txt", body);
  auto result = run_cli("classify " + text.string() + " " + copy.string());
  REQUIRE(result.exit_code == 0);
  auto verdict = nlohmann::json::parse(result.out);
  CHECK(verdict["label"] == "NearCopy");
  CHECK(verdict["phase"] == 1);
}

TEST_CASE("classify: telecom article triple from fixtures") {
  auto result = run_cli("classify " +
                        fixture("article038_original.txt").string() + " " +
                        fixture("article038_suspicious.txt").string() + " " +
                        fixture("article038_reference.txt").string());
  REQUIRE(result.exit_code == 0);
  auto verdict = nlohmann::json::parse(result.out);
  CHECK(verdict["label"] == "ChatGPTParaphrase");
  CHECK(verdict["phase"] == 2);
}

TEST_CASE("classify: missing file exits 2 with error json") {
  auto result = run_cli("classify /nonexistent/a.txt /nonexistent/b.txt");
  CHECK(result.exit_code == 2);
  auto error = nlohmann::json::parse(result.err);
  CHECK(error["error"]["kind"] == "io");
}

TEST_CASE("classify: provider failure exits 3") {
  const auto config = write_scratch("table_config.json",
                                    R"({"backend":"table","stub_table":{}})");
  const auto a = write_scratch("prov_a.txt", "alpha beta gamma delta");
  const auto b = write_scratch("prov_b.txt", "epsilon zeta eta theta");
  auto result = run_cli("--config " + config.string() + " classify " +
                        a.string() + " " + b.string());
  CHECK(result.exit_code == 3);
  auto error = nlohmann::json::parse(result.err);
  CHECK(error["error"]["kind"] == "bad_response");
}

TEST_CASE("classify: echo backend supplies the reference") {
  const auto config = write_scratch("echo_config.json", R"({"backend":"echo"})");
  const auto a = write_scratch("echo_a.txt", "alpha beta gamma delta");
  const auto b = write_scratch("echo_b.txt", "epsilon zeta eta theta");
  auto result = run_cli("--config " + config.string() + " classify " +
                        a.string() + " " + b.string());
  REQUIRE(result.exit_code == 0);
  auto verdict = nlohmann::json::parse(result.out);
  // echo reference == original, so the suspicious text is not implicated
  CHECK(verdict["label"] == "Other");
  CHECK(verdict["phase"] == 2);
}

TEST_CASE("invalid config exits 4") {
  const auto config = write_scratch("bad_config.json", "{ not json");
  auto result = run_cli("--config " + config.string() + " classify a b");
  CHECK(result.exit_code == 4);
  auto error = nlohmann::json::parse(result.err);
  CHECK(error["error"]["kind"] == "config");

  const auto unknown = write_scratch("unknown_key.json", R"({"mn_len":3})");
  auto result2 = run_cli("--config " + unknown.string() + " classify a b");
  CHECK(result2.exit_code == 4);
}

TEST_CASE("profile: identical files give all-ones rows") {
  const auto a = write_scratch("prof_a.txt", "w1 w2 w3 w4 w5");
  const auto b = write_scratch("prof_b.txt", "w1 w2 w3 w4 w5");
  auto result = run_cli("profile " + a.string() + " " + b.string());
  REQUIRE(result.exit_code == 0);
  CHECK(result.out.find("base_id,other_id,L,covered_words,ratio") == 0);
  CHECK(result.out.find(",3,5,1.000000") != std::string::npos);
  // both directions are emitted
  CHECK(result.out.find(a.string()) != std::string::npos);
  CHECK(result.out.find(b.string() + ",") != std::string::npos);
}

TEST_CASE("profile outputs are byte-identical across runs") {
  auto first = run_cli("profile " + fixture("article183_original.txt").string() +
                       " " + fixture("article183_suspicious.txt").string() +
                       " " + fixture("article183_reference.txt").string());
  auto second = run_cli("profile " +
                        fixture("article183_original.txt").string() + " " +
                        fixture("article183_suspicious.txt").string() + " " +
                        fixture("article183_reference.txt").string());
  REQUIRE(first.exit_code == 0);
  CHECK(first.out == second.out);
}

TEST_CASE("render: block diagram has one glyph per word") {
  const auto a = write_scratch("blocks_a.txt", "a b c d");
  const auto d = write_scratch("blocks_b.txt", "a b c x y");
  auto result =
      run_cli("render " + a.string() + " " + d.string() + " --blocks -L 3");
  REQUIRE(result.exit_code == 0);
  std::istringstream lines(result.out);
  std::string line;
  REQUIRE(std::getline(lines, line));
  CHECK(line.find("███-") != std::string::npos);
  REQUIRE(std::getline(lines, line));
  CHECK(line.find("███--") != std::string::npos);
}

TEST_CASE("render: html markup for a triple") {
  auto result = run_cli("--format html render " +
                        fixture("article038_original.txt").string() + " " +
                        fixture("article038_suspicious.txt").string() + " " +
                        fixture("article038_reference.txt").string());
  REQUIRE(result.exit_code == 0);
  CHECK(result.out.find("<!doctype html>") == 0);
  CHECK(result.out.find("background-color") != std::string::npos);
  CHECK(result.out.find("dresdner kleinwort wasserstein") != std::string::npos);
}

TEST_CASE("stats: identical classes give t=0 p=1 rows") {
  const auto a = write_scratch("stats_a.txt", "w1 w2 w3 w4 w5 w6 w7");
  const auto b = write_scratch("stats_b.txt", "w1 w2 w3 x y z q");
  const auto profile_csv = scratch_dir() / "stats_profiles.csv";
  auto gen = run_cli("profile " + a.string() + " " + b.string() + " -o " +
                     profile_csv.string());
  REQUIRE(gen.exit_code == 0);

  auto result = run_cli("stats --class-a " + profile_csv.string() +
                        " --class-b " + profile_csv.string() +
                        " --sample-size 2 --category business");
  REQUIRE(result.exit_code == 0);
  CHECK(result.out.find("category,pattern_length,comparison,t_statistic,"
                        "p_value") == 0);
  CHECK(result.out.find("business,3,") != std::string::npos);
  CHECK(result.out.find(",0.000,1.0000") != std::string::npos);
}

TEST_CASE("evaluate: small labeled manifest") {
  // two chatgpt-style rows (reference tracks suspicious), two other-style
  const std::string shared =
      "the quick brown fox jumps over the lazy dog near the river bank "
      "while morning fog settles across the quiet valley floor";
  const std::string original =
      "market regulators announced new disclosure rules for listed firms "
      "after a lengthy consultation with industry and consumer groups";
  write_scratch("eval/orig1.txt", original);
  write_scratch("eval/susp1.txt", shared);
  write_scratch("eval/ref1.txt", shared);  // reference == suspicious
  write_scratch("eval/orig2.txt", original);
  write_scratch("eval/susp2.txt", shared);
  const std::string ref_like_original =
      "market regulators announced new disclosure rules for listed firms "
      "following long talks with industry and consumer groups";
  write_scratch("eval/ref2.txt", ref_like_original);  // tracks the original

  std::ostringstream manifest;
  manifest << "id,category,true_label,original,suspicious,reference\n";
  manifest << "art1,business,chatgpt,orig1.txt,susp1.txt,ref1.txt\n";
  manifest << "art2,business,other,orig2.txt,susp2.txt,ref2.txt\n";
  manifest << "art3,tech,chatgpt,orig1.txt,susp1.txt,ref1.txt\n";
  manifest << "art4,tech,other,orig2.txt,susp2.txt,ref2.txt\n";
  manifest << "bad-row,tech,unlabeled,orig1.txt,susp1.txt,ref1.txt\n";
  const auto manifest_path = write_scratch("eval/manifest.csv", manifest.str());

  const auto out_dir = scratch_dir() / "eval_out";
  auto result = run_cli("evaluate " + manifest_path.string() + " --out-dir " +
                        out_dir.string() + " --jobs 2");
  REQUIRE(result.exit_code == 0);
  CHECK(result.out.find("scored 4 articles (1 rejected, 0 failed)") !=
        std::string::npos);
  CHECK(result.out.find("overall accuracy 100.00%") != std::string::npos);

  auto report = nlohmann::json::parse(slurp(out_dir / "report.json"));
  CHECK(report["per_category"].size() == 2);
  CHECK(report["overall"]["confusion"]["tp"] == 2);
  CHECK(report["overall"]["confusion"]["tn"] == 2);
  CHECK(report["run_id"].get<std::string>().size() == 16);

  const std::string csv = slurp(out_dir / "report.csv");
  CHECK(csv.find("metric,business,tech,overall\n") == 0);
  CHECK(csv.find("accuracy,100.00,100.00,100.00") != std::string::npos);

  const std::string profiles = slurp(out_dir / "profiles.csv");
  CHECK(profiles.find("art1:original,art1:suspicious,3,") !=
        std::string::npos);
  CHECK(profiles.find("art1:reference,art1:suspicious,3,") !=
        std::string::npos);

  auto manifest_json = nlohmann::json::parse(slurp(out_dir / "manifest.json"));
  CHECK(manifest_json["records"].size() == 4);
  CHECK(manifest_json["rejected_rows"] == 1);

  SUBCASE("the report is reproducible modulo the manifest timestamps") {
    const auto out_dir2 = scratch_dir() / "eval_out2";
    auto again = run_cli("evaluate " + manifest_path.string() + " --out-dir " +
                         out_dir2.string());
    REQUIRE(again.exit_code == 0);
    CHECK(slurp(out_dir / "report.json") == slurp(out_dir2 / "report.json"));
    CHECK(slurp(out_dir / "profiles.csv") == slurp(out_dir2 / "profiles.csv"));
  }
}

TEST_CASE("evaluate: an empty manifest is an input error") {
  const auto manifest_path =
      write_scratch("eval_empty/manifest.csv",
                    "id,category,true_label,original,suspicious,reference\n");
  auto result = run_cli("evaluate " + manifest_path.string() + " --out-dir " +
                        (scratch_dir() / "eval_empty_out").string());
  CHECK(result.exit_code == 2);
}

TEST_CASE("paraphrase: echo backend round-trips a corpus") {
  const auto config = write_scratch("par_config.json", R"({"backend":"echo"})");
  write_scratch("par_in/business/001.txt", "first article body");
  write_scratch("par_in/tech/001.txt", "second article body");
  const auto out_root = scratch_dir() / "par_out";
  auto result = run_cli("--config " + config.string() + " paraphrase " +
                        (scratch_dir() / "par_in").string() + " " +
                        out_root.string() + " --role reference");
  REQUIRE(result.exit_code == 0);
  CHECK(result.out.find("wrote 2 paraphrases") != std::string::npos);
  CHECK(slurp(out_root / "business" / "001.txt") == "first article body");
  CHECK(slurp(out_root / "tech" / "001.txt") == "second article body");
}

TEST_CASE("ingest-check prints per-category statistics") {
  write_scratch("ing/bbc/business/001.txt", "one two three");
  write_scratch("ing/bbc/business/002.txt", "one two three four five");
  auto result = run_cli("ingest-check " + (scratch_dir() / "ing/bbc").string());
  REQUIRE(result.exit_code == 0);
  CHECK(result.out.find("business") != std::string::npos);
  CHECK(result.out.find("total documents: 2") != std::string::npos);
  CHECK(result.out.find("4.00") != std::string::npos);  // mean of 3 and 5

  auto missing = run_cli("ingest-check /nonexistent/root");
  CHECK(missing.exit_code == 2);
}

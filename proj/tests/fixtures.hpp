#ifndef PROVKIT_TESTS_FIXTURES_HPP
#define PROVKIT_TESTS_FIXTURES_HPP

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "provkit/corpus.hpp"

namespace provkit::testing {

inline std::filesystem::path fixture_dir() {
  return std::filesystem::path(PROVKIT_FIXTURE_DIR);
}

inline std::string read_fixture(const std::string& name) {
  const auto path = fixture_dir() / name;
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("missing fixture " + path.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return std::move(buf).str();
}

/// Cleaned and tokenized fixture; doc id is the file stem.
inline TokenSequence fixture_tokens(const std::string& name) {
  const std::string raw = read_fixture(name);
  return tokenize(clean_text(raw),
                  std::filesystem::path(name).stem().string());
}

}  // namespace provkit::testing

#endif  // PROVKIT_TESTS_FIXTURES_HPP

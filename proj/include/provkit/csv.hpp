#ifndef PROVKIT_CSV_HPP
#define PROVKIT_CSV_HPP

#include <string>
#include <string_view>
#include <vector>

namespace provkit::csv {

/// Splits one CSV record. Supports double-quoted fields with "" escapes;
/// no embedded newlines (records in this toolkit are single-line).
std::vector<std::string> parse_line(std::string_view line);

/// Quotes a field if it contains a comma, quote or whitespace padding.
std::string escape(std::string_view field);

std::string join(const std::vector<std::string>& fields);

}  // namespace provkit::csv

#endif  // PROVKIT_CSV_HPP

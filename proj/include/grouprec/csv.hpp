#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace grouprec::csv {

using Row = std::vector<std::string>;

// Parses RFC-4180 text: quoted fields, doubled quotes, embedded line breaks,
// CRLF or LF record separators. A trailing empty line is not a record.
std::vector<Row> parse(std::string_view text);

std::vector<Row> read_file(const std::filesystem::path& path);

// Quotes a field when it contains a delimiter, quote or line break.
std::string escape(std::string_view field);

std::string format_row(const Row& row);

// True when `text` is well-formed UTF-8.
bool valid_utf8(std::string_view text);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace grouprec::csv

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace mechcomplete {

using Json = nlohmann::json;

/// Parses `text`, converting syntax errors into SchemaError with a line number.
Json parse_json_document(std::string_view text, std::string_view source);

/// Best-effort 1-based line of the key path `tokens` inside `text` (0 when not found).
/// Keys are searched in order, each after the previous match.
int line_of_path(std::string_view text, const std::vector<std::string>& tokens);

/// 1-based line containing byte offset `offset`.
int line_of_offset(std::string_view text, std::size_t offset);

std::string read_text_file(const std::string& path);

}  // namespace mechcomplete

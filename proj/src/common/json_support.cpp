#include "mechcomplete/json_support.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "mechcomplete/error.hpp"

namespace mechcomplete {

int line_of_offset(std::string_view text, std::size_t offset) {
    offset = std::min(offset, text.size());
    return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

Json parse_json_document(std::string_view text, std::string_view source) {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        // nlohmann reports the byte just past the offending token.
        const std::size_t at = e.byte > 0 ? e.byte - 1 : 0;
        std::string what = e.what();
        if (auto pos = what.find("syntax error"); pos != std::string::npos) what = what.substr(pos);
        throw SchemaError(std::string(source), line_of_offset(text, at), what);
    }
}

int line_of_path(std::string_view text, const std::vector<std::string>& tokens) {
    std::size_t pos = 0;
    std::size_t found = std::string_view::npos;
    for (const auto& token : tokens) {
        if (token.empty() || std::all_of(token.begin(), token.end(), ::isdigit)) continue;
        const std::string quoted = "\"" + token + "\"";
        const auto hit = text.find(quoted, pos);
        if (hit == std::string_view::npos) break;
        found = hit;
        pos = hit + quoted.size();
    }
    return found == std::string_view::npos ? 0 : line_of_offset(text, found);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace mechcomplete

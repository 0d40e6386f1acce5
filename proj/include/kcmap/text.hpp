#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace kcmap {

/// Case- and diacritic-insensitive folding used wherever names are compared:
/// uppercases, maps accented Latin letters to their base form, drops dots and
/// apostrophes, turns hyphens and underscores into spaces and collapses
/// whitespace runs. The result is a comparison key, not a display string.
std::string fold_name(std::string_view s);

std::string trim(std::string_view s);

/// Splits on `sep`, keeping empty fields.
std::vector<std::string> split(std::string_view s, char sep);

/// Splits on `sep`, trimming each piece and dropping empties. Used for the
/// semicolon-joined list columns.
std::vector<std::string> split_list(std::string_view s, char sep);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

std::string to_lower_ascii(std::string_view s);

} // namespace kcmap

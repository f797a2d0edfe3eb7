#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace namedis {

// Lowercase, NFD-decompose and drop combining marks, trim, and collapse
// internal whitespace runs to one space.
std::string normalize_text(std::string_view text);

// normalize_text, then split on any non-alphanumeric code point and drop
// tokens shorter than two code points.
std::vector<std::string> tokenize(std::string_view text);

// First alphanumeric code point of the normalized text, or "" if none.
std::string first_initial(std::string_view text);

// Full first name for the first-name rules: normalized, punctuation
// replaced by spaces. Returns "" when the name is an initial only
// ("R.", "r", "R. K.").
std::string normalize_first_name(std::string_view first_name);

// Number of UTF-8 code points.
std::size_t utf8_length(std::string_view text);

// Block key "<normalized surname>, <first initial>". Throws
// ValidationError when the surname is empty after trimming; `context`
// (usually a mention id) is included in the message.
std::string canonicalize(std::string_view surname, std::string_view first_name,
                         std::string_view context = {});

}  // namespace namedis

#include "namedis/text.hpp"

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>

#include "namedis/errors.hpp"

namespace namedis {
namespace {

bool is_ascii(std::string_view s) {
  for (unsigned char c : s) {
    if (c >= 0x80) return false;
  }
  return true;
}

// Decodes UTF-8 into code points after lowercasing and stripping marks.
std::u32string fold(std::string_view text) {
  std::u32string out;
  out.reserve(text.size());
  if (is_ascii(text)) {
    for (unsigned char c : text) {
      out.push_back(static_cast<char32_t>(c >= 'A' && c <= 'Z' ? c + 32 : c));
    }
    return out;
  }
  icu::UnicodeString ustr = icu::UnicodeString::fromUTF8(
      icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));
  ustr.foldCase();
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* nfd = icu::Normalizer2::getNFDInstance(status);
  if (U_FAILURE(status)) throw InvariantError("ICU NFD normalizer unavailable");
  icu::UnicodeString decomposed = nfd->normalize(ustr, status);
  if (U_FAILURE(status)) throw ValidationError("invalid text for normalization");
  for (int32_t i = 0; i < decomposed.length();) {
    const UChar32 c = decomposed.char32At(i);
    i += U16_LENGTH(c);
    const auto mask = U_GET_GC_MASK(c);
    if (mask & U_GC_M_MASK) continue;
    out.push_back(static_cast<char32_t>(c));
  }
  return out;
}

void append_utf8(std::string& out, char32_t c) {
  if (c < 0x80) {
    out.push_back(static_cast<char>(c));
  } else if (c < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (c >> 6)));
    out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
  } else if (c < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (c >> 12)));
    out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (c >> 18)));
    out.push_back(static_cast<char>(0x80 | ((c >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
  }
}

bool is_space(char32_t c) {
  if (c < 0x80) return c == ' ' || (c >= '\t' && c <= '\r');
  return u_isUWhiteSpace(static_cast<UChar32>(c));
}

bool is_alnum(char32_t c) {
  if (c < 0x80) return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || (c >= 'A' && c <= 'Z');
  return u_isalnum(static_cast<UChar32>(c));
}

}  // namespace

std::size_t utf8_length(std::string_view text) {
  std::size_t n = 0;
  for (unsigned char c : text) {
    if ((c & 0xC0) != 0x80) ++n;
  }
  return n;
}

std::string normalize_text(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (char32_t c : fold(text)) {
    if (is_space(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    append_utf8(out, c);
  }
  return out;
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  std::size_t length = 0;
  auto flush = [&] {
    if (length >= 2) tokens.push_back(current);
    current.clear();
    length = 0;
  };
  for (char32_t c : fold(text)) {
    if (is_alnum(c)) {
      append_utf8(current, c);
      ++length;
    } else {
      flush();
    }
  }
  flush();
  return tokens;
}

std::string first_initial(std::string_view text) {
  std::string out;
  for (char32_t c : fold(text)) {
    if (is_alnum(c)) {
      append_utf8(out, c);
      break;
    }
  }
  return out;
}

std::string normalize_first_name(std::string_view first_name) {
  std::string out;
  std::size_t longest_part = 0;
  std::size_t part = 0;
  bool pending_space = false;
  for (char32_t c : fold(first_name)) {
    if (!is_alnum(c)) {
      pending_space = !out.empty();
      part = 0;
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    append_utf8(out, c);
    longest_part = std::max(longest_part, ++part);
  }
  return longest_part >= 2 ? out : std::string{};
}

std::string canonicalize(std::string_view surname, std::string_view first_name,
                         std::string_view context) {
  std::string key = normalize_text(surname);
  if (key.empty()) {
    std::string msg = "empty surname";
    if (!context.empty()) msg += " in mention '" + std::string(context) + "'";
    throw ValidationError(msg);
  }
  key += ", ";
  key += first_initial(first_name);
  return key;
}

}  // namespace namedis

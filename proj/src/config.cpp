#include "namedis/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "namedis/errors.hpp"

namespace namedis {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// Strips a trailing comment that is not inside a string literal.
std::string_view strip_comment(std::string_view line) {
  bool in_string = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (c == '\\' && in_string) {
      ++i;
    } else if (c == '"') {
      in_string = !in_string;
    } else if (c == '#' && !in_string) {
      return line.substr(0, i);
    }
  }
  return line;
}

std::optional<double> parse_number(std::string_view s) {
  s = trim(s);
  if (s == "inf" || s == "+inf") return INFINITY;
  if (s == "-inf") return -INFINITY;
  std::string buf;
  for (char c : s) {
    if (c != '_') buf.push_back(c);
  }
  if (buf.empty()) return std::nullopt;
  char* end = nullptr;
  const double v = std::strtod(buf.c_str(), &end);
  if (end != buf.c_str() + buf.size()) return std::nullopt;
  return v;
}

[[noreturn]] void fail(std::string_view source, std::size_t line, const std::string& what) {
  throw ValidationError(std::string(source) + ":" + std::to_string(line) + ": " + what);
}

std::string unquote(std::string_view s, std::string_view source, std::size_t line) {
  if (s.size() < 2 || s.front() != '"' || s.back() != '"') fail(source, line, "expected string");
  std::string out;
  for (std::size_t i = 1; i + 1 < s.size(); ++i) {
    if (s[i] == '\\' && i + 2 < s.size()) {
      const char e = s[++i];
      out.push_back(e == 'n' ? '\n' : e == 't' ? '\t' : e);
    } else {
      out.push_back(s[i]);
    }
  }
  return out;
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace

std::string format_number(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (std::isnan(value)) return "nan";
  if (value == std::floor(value) && std::fabs(value) < 1e15) {
    return std::to_string(static_cast<long long>(value));
  }
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

FlatConfig FlatConfig::parse(std::string_view text, std::string_view source) {
  FlatConfig config;
  std::string section;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    std::string_view line = trim(strip_comment(raw));
    if (line.empty()) continue;
    if (line.front() == '[' && line.find('=') == std::string_view::npos) {
      if (line.back() != ']') fail(source, line_no, "unterminated section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) fail(source, line_no, "expected key = value");
    std::string_view key_part = trim(line.substr(0, eq));
    std::string key = key_part.size() >= 2 && key_part.front() == '"'
                          ? unquote(key_part, source, line_no)
                          : std::string(key_part);
    if (key.empty()) fail(source, line_no, "empty key");
    if (!section.empty()) key = section + "." + key;
    if (config.values_.contains(key)) fail(source, line_no, "duplicate key '" + key + "'");
    std::string_view value = trim(line.substr(eq + 1));
    if (value.empty()) fail(source, line_no, "missing value for '" + key + "'");
    if (value.front() == '"') {
      config.values_[key] = unquote(value, source, line_no);
    } else if (value.front() == '[') {
      if (value.back() != ']') fail(source, line_no, "unterminated array for '" + key + "'");
      std::vector<double> items;
      std::string_view body = trim(value.substr(1, value.size() - 2));
      while (!body.empty()) {
        const std::size_t comma = body.find(',');
        std::string_view item = trim(body.substr(0, comma));
        if (!item.empty()) {
          auto v = parse_number(item);
          if (!v) fail(source, line_no, "bad number '" + std::string(item) + "' in '" + key + "'");
          items.push_back(*v);
        }
        if (comma == std::string_view::npos) break;
        body.remove_prefix(comma + 1);
      }
      config.values_[key] = std::move(items);
    } else if (value == "true" || value == "false") {
      config.values_[key] = value == "true" ? 1.0 : 0.0;
    } else {
      auto v = parse_number(value);
      if (!v) fail(source, line_no, "bad value for '" + key + "'");
      config.values_[key] = *v;
    }
  }
  return config;
}

FlatConfig FlatConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path.string());
}

double FlatConfig::number(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw ValidationError("missing config key '" + key + "'");
  if (const double* v = std::get_if<double>(&it->second)) return *v;
  throw ValidationError("config key '" + key + "' is not a number");
}

double FlatConfig::number_or(const std::string& key, double fallback) const {
  return has(key) ? number(key) : fallback;
}

long long FlatConfig::integer(const std::string& key) const {
  const double v = number(key);
  if (v != std::floor(v) || !std::isfinite(v)) {
    throw ValidationError("config key '" + key + "' must be an integer");
  }
  return static_cast<long long>(v);
}

long long FlatConfig::integer_or(const std::string& key, long long fallback) const {
  return has(key) ? integer(key) : fallback;
}

std::string FlatConfig::string_or(const std::string& key, std::string fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  if (const auto* s = std::get_if<std::string>(&it->second)) return *s;
  throw ValidationError("config key '" + key + "' is not a string");
}

std::vector<double> FlatConfig::numbers(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw ValidationError("missing config key '" + key + "'");
  if (const auto* list = std::get_if<std::vector<double>>(&it->second)) return *list;
  if (const double* v = std::get_if<double>(&it->second)) return {*v};
  throw ValidationError("config key '" + key + "' is not numeric");
}

FlatConfig FlatConfig::subtree(const std::string& prefix) const {
  FlatConfig out;
  const std::string p = prefix + ".";
  for (auto it = values_.lower_bound(p); it != values_.end() && it->first.starts_with(p); ++it) {
    out.values_[it->first.substr(p.size())] = it->second;
  }
  return out;
}

std::string FlatConfig::dump() const {
  std::string out;
  for (const auto& [key, value] : values_) {
    const bool bare = key.find_first_of(" \t\"=#[]") == std::string::npos;
    out += bare ? key : quote(key);
    out += " = ";
    if (const double* v = std::get_if<double>(&value)) {
      out += format_number(*v);
    } else if (const auto* s = std::get_if<std::string>(&value)) {
      out += quote(*s);
    } else {
      const auto& list = std::get<std::vector<double>>(value);
      out += "[";
      for (std::size_t i = 0; i < list.size(); ++i) {
        if (i) out += ", ";
        out += format_number(list[i]);
      }
      out += "]";
    }
    out += "\n";
  }
  return out;
}

void FlatConfig::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path.string());
  out << dump();
}

}  // namespace namedis

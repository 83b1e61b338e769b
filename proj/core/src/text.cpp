#include "kgtype/text.hpp"

#include <cctype>

namespace kgtype {

namespace {

bool is_ascii(unsigned char c) { return c < 0x80; }

}  // namespace

std::string to_lower(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (unsigned char c : s) {
    out.push_back(is_ascii(c) ? static_cast<char>(std::tolower(c)) : static_cast<char>(c));
  }
  return out;
}

std::string normalize_label(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  bool pending_space = false;
  for (unsigned char c : s) {
    char mapped;
    if (is_ascii(c)) {
      if (std::isspace(c) || std::ispunct(c)) {
        pending_space = !out.empty();
        continue;
      }
      mapped = static_cast<char>(std::tolower(c));
    } else {
      mapped = static_cast<char>(c);
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    out.push_back(mapped);
  }
  return out;
}

std::vector<std::string> tokenize(std::string_view s) {
  std::vector<std::string> tokens;
  const std::string norm = normalize_label(s);
  std::size_t start = 0;
  while (start < norm.size()) {
    std::size_t end = norm.find(' ', start);
    if (end == std::string::npos) end = norm.size();
    if (end > start) tokens.emplace_back(norm.substr(start, end - start));
    start = end + 1;
  }
  return tokens;
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t end = s.find(sep, start);
    if (end == std::string_view::npos) {
      fields.emplace_back(s.substr(start));
      break;
    }
    fields.emplace_back(s.substr(start, end - start));
    start = end + 1;
  }
  return fields;
}

std::vector<std::string> camel_split(std::string_view s) {
  std::vector<std::string> parts;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) {
      parts.push_back(current);
      current.clear();
    }
  };
  for (std::size_t i = 0; i < s.size(); ++i) {
    unsigned char c = s[i];
    if (c == '_' || c == '-' || c == '.' || c == ' ') {
      flush();
      continue;
    }
    if (is_ascii(c) && std::isupper(c)) {
      // Boundary before an uppercase letter that starts a new word run:
      // previous char is lowercase/digit, or next char is lowercase.
      bool prev_lower = !current.empty() && is_ascii(static_cast<unsigned char>(current.back())) &&
                        (std::islower(static_cast<unsigned char>(current.back())) ||
                         std::isdigit(static_cast<unsigned char>(current.back())));
      bool next_lower = i + 1 < s.size() && is_ascii(static_cast<unsigned char>(s[i + 1])) &&
                        std::islower(static_cast<unsigned char>(s[i + 1]));
      if (prev_lower || (next_lower && !current.empty())) flush();
    }
    current.push_back(static_cast<char>(c));
  }
  flush();
  return parts;
}

}  // namespace kgtype

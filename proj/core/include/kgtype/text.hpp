#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace kgtype {

// Canonical surface-string normalization used for entity linking and
// question tokenization: lowercase, punctuation to spaces, whitespace
// collapsed, trimmed. Input is expected to be UTF-8 in NFC; bytes outside
// ASCII are passed through unchanged.
std::string normalize_label(std::string_view s);

// normalize_label followed by a whitespace split.
std::vector<std::string> tokenize(std::string_view s);

// Plain split on a separator, empty fields kept.
std::vector<std::string> split(std::string_view s, char sep);

// Splits a camel-case identifier into its word runs ("AmericanPeople" ->
// {"American", "People"}). Underscores, hyphens and dots also separate.
std::vector<std::string> camel_split(std::string_view s);

std::string to_lower(std::string_view s);

}  // namespace kgtype

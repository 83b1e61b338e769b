#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace kgtype {

// The closed set of coarse answer classes handled by rule-based recognition.
enum class CoarseClass { Date, Cardinal, Ordinal, Quantity, Money, Percent };

inline constexpr std::array<CoarseClass, 6> kCoarseClasses = {
    CoarseClass::Date,     CoarseClass::Cardinal, CoarseClass::Ordinal,
    CoarseClass::Quantity, CoarseClass::Money,    CoarseClass::Percent,
};

std::string_view to_string(CoarseClass c);
std::optional<CoarseClass> parse_coarse_class(std::string_view name);
bool is_coarse_class_name(std::string_view name);

// Deterministic rule cascade over the answer string. Rules are tried with
// precedence Date > Money > Percent > Ordinal > Quantity > Cardinal and the
// first match wins; nullopt when no rule fires.
std::optional<CoarseClass> coarse_ner(std::string_view answer);

}  // namespace kgtype

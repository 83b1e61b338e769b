#include "kgtype/coarse_ner.hpp"

#include <regex>
#include <unordered_set>

#include "kgtype/text.hpp"

namespace kgtype {

std::string_view to_string(CoarseClass c) {
  switch (c) {
    case CoarseClass::Date: return "Date";
    case CoarseClass::Cardinal: return "Cardinal";
    case CoarseClass::Ordinal: return "Ordinal";
    case CoarseClass::Quantity: return "Quantity";
    case CoarseClass::Money: return "Money";
    case CoarseClass::Percent: return "Percent";
  }
  return "Cardinal";
}

std::optional<CoarseClass> parse_coarse_class(std::string_view name) {
  for (CoarseClass c : kCoarseClasses)
    if (name == to_string(c)) return c;
  return std::nullopt;
}

bool is_coarse_class_name(std::string_view name) { return parse_coarse_class(name).has_value(); }

namespace {

const std::unordered_set<std::string>& number_words() {
  static const std::unordered_set<std::string> words = {
      "zero",    "one",     "two",      "three",    "four",     "five",    "six",
      "seven",   "eight",   "nine",     "ten",      "eleven",   "twelve",  "thirteen",
      "fourteen", "fifteen", "sixteen", "seventeen", "eighteen", "nineteen",
      "twenty",  "thirty",  "forty",    "fifty",    "sixty",    "seventy", "eighty",
      "ninety",  "hundred", "thousand", "million",  "billion",  "trillion"};
  return words;
}

bool matches(const std::string& s, const std::regex& re) {
  return std::regex_search(s, re);
}

bool is_date(const std::string& s, const std::string& trimmed) {
  static const std::regex month(
      R"(\b(january|february|march|april|may|june|july|august|september|october|november|december|jan|feb|mar|apr|jun|jul|aug|sep|sept|oct|nov|dec)\b)");
  static const std::regex weekday(R"(\b(monday|tuesday|wednesday|thursday|friday|saturday|sunday)\b)");
  static const std::regex iso(R"(\b\d{4}-\d{2}-\d{2}\b)");
  static const std::regex slash(R"(\b\d{1,4}/\d{1,2}/\d{1,4}\b)");
  static const std::regex year_alone(R"(^[12]\d{3}$)");
  static const std::regex era(R"(\b\d{1,4}\s*(bc|bce|ad|ce)\b)");
  static const std::regex decade(R"(\b\d{1,3}0s\b)");
  static const std::regex century(R"(\b\d{1,2}(st|nd|rd|th)[\s-]century\b)");
  return matches(s, month) || matches(s, weekday) || matches(s, iso) || matches(s, slash) ||
         std::regex_match(trimmed, year_alone) || matches(s, era) || matches(s, decade) ||
         matches(s, century);
}

bool is_money(const std::string& s) {
  static const std::regex symbol(R"(([$€£¥]\s*\d)|(\d\s*[$€£¥]))");
  static const std::regex unit(
      R"((\d[\d,\.]*|\b(one|two|three|four|five|six|seven|eight|nine|ten|eleven|twelve|twenty|thirty|forty|fifty|hundred|thousand|million|billion)\b)(\s+(hundred|thousand|million|billion|trillion))?\s*(dollars?|cents?|euros?|pounds?|yen|usd|eur|gbp|francs?|rupees?|pesos?|bucks?)\b)");
  return matches(s, symbol) || matches(s, unit);
}

bool is_percent(const std::string& s) {
  static const std::regex sign(R"(\d\s*%)");
  static const std::regex word(R"((\d[\d,\.]*\s*|\b(one|two|three|four|five|six|seven|eight|nine|ten|twenty|thirty|forty|fifty|sixty|seventy|eighty|ninety|hundred)\s+)(percent|per cent|percentage points?)\b)");
  return matches(s, sign) || matches(s, word);
}

bool is_ordinal(const std::string& s) {
  static const std::regex suffix(R"(\b\d+(st|nd|rd|th)\b)");
  static const std::regex word(
      R"(\b(first|second|third|fourth|fifth|sixth|seventh|eighth|ninth|tenth|eleventh|twelfth|thirteenth|fourteenth|fifteenth|sixteenth|seventeenth|eighteenth|nineteenth|twentieth|thirtieth|fortieth|fiftieth|sixtieth|seventieth|eightieth|ninetieth|hundredth|thousandth|millionth)\b)");
  return matches(s, suffix) || matches(s, word);
}

bool is_quantity(const std::string& s) {
  static const std::regex unit(
      R"((\d[\d,\.]*|\b(one|two|three|four|five|six|seven|eight|nine|ten|eleven|twelve|twenty|thirty|forty|fifty|hundred|thousand|million|billion)\b)(\s+(hundred|thousand|million|billion|trillion))?\s*(km|kilometers?|kilometres?|meters?|metres?|centimeters?|cm|mm|miles?|foot|feet|inch|inches|yards?|kg|kilograms?|grams?|milligrams?|mg|tonnes?|tons?|pounds?|ounces?|oz|lbs?|liters?|litres?|milliliters?|ml|gallons?|pints?|seconds?|minutes?|hours?|days?|weeks?|months?|years?|decades?|degrees?|celsius|fahrenheit|kelvin|mph|kph|knots?|hertz|hz|watts?|kilowatts?|volts?|amps?|joules?|calories?|acres?|hectares?|bytes?|bits?|kilobytes?|megabytes?|gigabytes?|light-?years?)\b)");
  return matches(s, unit);
}

bool is_cardinal(const std::string& trimmed) {
  static const std::regex numeric(R"(^[-+]?\d[\d,]*(\.\d+)?$)");
  static const std::regex with_magnitude(
      R"(^[-+]?\d[\d,]*(\.\d+)?\s+(hundred|thousand|million|billion|trillion)$)");
  if (std::regex_match(trimmed, numeric) || std::regex_match(trimmed, with_magnitude)) return true;
  // Pure number-word phrases ("forty two", "a hundred").
  const auto tokens = tokenize(trimmed);
  if (tokens.empty()) return false;
  bool has_number_word = false;
  for (const auto& token : tokens) {
    if (number_words().count(token)) {
      has_number_word = true;
    } else if (token != "and" && token != "a") {
      return false;
    }
  }
  return has_number_word;
}

}  // namespace

std::optional<CoarseClass> coarse_ner(std::string_view answer) {
  std::string lowered = to_lower(answer);
  std::size_t begin = lowered.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return std::nullopt;
  std::size_t end = lowered.find_last_not_of(" \t\r\n");
  std::string trimmed = lowered.substr(begin, end - begin + 1);

  if (is_date(lowered, trimmed)) return CoarseClass::Date;
  if (is_money(lowered)) return CoarseClass::Money;
  if (is_percent(lowered)) return CoarseClass::Percent;
  if (is_ordinal(lowered)) return CoarseClass::Ordinal;
  if (is_quantity(lowered)) return CoarseClass::Quantity;
  if (is_cardinal(trimmed)) return CoarseClass::Cardinal;
  return std::nullopt;
}

}  // namespace kgtype

#include "kgtype/text.hpp"

#include "doctest.h"

using namespace kgtype;

TEST_CASE("normalize_label collapses whitespace and case") {
  CHECK(normalize_label("New  York ") == "new york");
  CHECK(normalize_label("I.B.M.") == "i b m");
  CHECK(normalize_label("") == "");
  CHECK(normalize_label("  Amazon.com ") == "amazon com");
  CHECK(normalize_label("already clean") == "already clean");
}

TEST_CASE("normalize_label passes non-ascii bytes through") {
  CHECK(normalize_label("Zürich") == "zürich");
}

TEST_CASE("tokenize splits on normalized whitespace") {
  CHECK(tokenize("Which company, if any?") ==
        std::vector<std::string>{"which", "company", "if", "any"});
  CHECK(tokenize("   ").empty());
}

TEST_CASE("split keeps empty fields") {
  CHECK(split("a\tb\tc", '\t') == std::vector<std::string>{"a", "b", "c"});
  CHECK(split("a\t\tc", '\t') == std::vector<std::string>{"a", "", "c"});
  CHECK(split("", '\t') == std::vector<std::string>{""});
}

TEST_CASE("camel_split finds word runs") {
  CHECK(camel_split("WikicatAmericanPeople") ==
        std::vector<std::string>{"Wikicat", "American", "People"});
  CHECK(camel_split("person") == std::vector<std::string>{"person"});
  CHECK(camel_split("snake_case-mix") == std::vector<std::string>{"snake", "case", "mix"});
  CHECK(camel_split("HTMLParser") == std::vector<std::string>{"HTML", "Parser"});
}

#include "kgtype/type_graph.hpp"

#include <random>
#include <sstream>

#include "doctest.h"
#include "kgtype/errors.hpp"
#include "support/oracles.hpp"
#include "support/paths.hpp"

using namespace kgtype;

namespace {

TypeGraph parse_text(const std::string& text) {
  std::istringstream in(text);
  return TypeGraph::parse(in, "inline");
}

}  // namespace

TEST_CASE("minimal three-line file yields one entity and one type") {
  const auto g = parse_text(
      "ent:a\tENTITY\tAlpha\n"
      "t:x\tTYPE\t-\n"
      "ent:a\tTYPE_OF\tt:x\n");
  CHECK(g.entity_total() == 1);
  CHECK(g.type_total() == 1);
  CHECK(g.types_of("ent:a") == std::vector<std::string>{"t:x"});
  CHECK(g.labels_at(0) == std::vector<std::string>{"Alpha"});
}

TEST_CASE("toy knowledge base loads with 40 entities") {
  const auto g = TypeGraph::load(testsupport::data_path("toykb.tsv"));
  CHECK(g.entity_total() == 40);
  CHECK(g.type_total() == 13);
}

TEST_CASE("dangling references are rejected with the missing id") {
  CHECK_THROWS_WITH_AS(parse_text("ent:a\tENTITY\tAlpha\n"
                                  "ent:a\tTYPE_OF\tt:missing\n"),
                       doctest::Contains("t:missing"), ParseError);
  CHECK_THROWS_WITH_AS(parse_text("t:x\tTYPE\t-\n"
                                  "ent:ghost\tTYPE_OF\tt:x\n"),
                       doctest::Contains("ent:ghost"), ParseError);
  CHECK_THROWS_WITH_AS(parse_text("t:x\tTYPE\t-\n"
                                  "t:x\tSUBCLASS_OF\tt:gone\n"),
                       doctest::Contains("t:gone"), ParseError);
}

TEST_CASE("malformed input is rejected with a line number") {
  CHECK_THROWS_WITH_AS(parse_text("just two\tfields\n"), doctest::Contains("inline:1"),
                       ParseError);
  CHECK_THROWS_WITH_AS(parse_text("# fine\nent:a\tENTITY\tAlpha\nent:a\tENTITY\tAgain\n"),
                       doctest::Contains("duplicate entity"), ParseError);
  CHECK_THROWS_WITH_AS(parse_text("t:x\tTYPE\t-\nt:x\tSUBCLASS_OF\tt:x\n"),
                       doctest::Contains("self-loop"), ParseError);
  CHECK_THROWS_WITH_AS(parse_text("ent:a\tENTITY\tAlpha\n"), doctest::Contains("no type"),
                       ParseError);
  CHECK_THROWS_WITH_AS(parse_text("x\tTYPE\t-\nx\tENTITY\tboth\nt\tTYPE\t-\nx\tTYPE_OF\tt\n"),
                       doctest::Contains("both entity and type"), ParseError);
}

TEST_CASE("entity_count counts direct instances only") {
  const auto g = TypeGraph::load(testsupport::data_path("toykb.tsv"));
  CHECK(g.entity_count("toy:company") == 4);       // amazon, sony, ibm, apple
  CHECK(g.entity_count("toy:organization") == 3);  // amazon, nasa, unesco
  CHECK(g.entity_count("toy:thing") == 0);         // never a direct type
  CHECK_THROWS_AS((void)g.entity_count("toy:nope"), LookupError);
}

TEST_CASE("entity_count saturates at the entity total") {
  std::string text;
  text += "t:all\tTYPE\t-\n";
  for (int i = 0; i < 7; ++i) {
    text += "e" + std::to_string(i) + "\tENTITY\tlabel " + std::to_string(i) + "\n";
    text += "e" + std::to_string(i) + "\tTYPE_OF\tt:all\n";
  }
  const auto g = parse_text(text);
  CHECK(g.entity_count("t:all") == 7);
  CHECK(g.entity_total() == 7);
}

TEST_CASE("types_of returns the direct types") {
  const auto g = TypeGraph::load(testsupport::data_path("toykb.tsv"));
  CHECK(g.types_of("ent:amazon") ==
        std::vector<std::string>{"toy:company", "toy:organization"});
  CHECK(g.types_of("ent:sony") == std::vector<std::string>{"toy:company"});
  CHECK_THROWS_AS((void)g.types_of("ent:unknown"), LookupError);
}

TEST_CASE("type_distance runs BFS over undirected subclass edges") {
  const auto g = parse_text(
      "A\tTYPE\t-\nB\tTYPE\t-\nC\tTYPE\t-\nD\tTYPE\t-\n"
      "A\tSUBCLASS_OF\tB\n"
      "B\tSUBCLASS_OF\tC\n");
  CHECK(g.distance("A", "A") == 0);
  CHECK(g.distance("A", "C") == 2);
  CHECK(g.distance("C", "A") == 2);  // symmetric despite edge direction
  CHECK_FALSE(g.distance("A", "D").has_value());
  CHECK_THROWS_AS((void)g.distance("A", "nope"), LookupError);
}

TEST_CASE("distance agrees with Floyd-Warshall on random graphs") {
  std::mt19937_64 rng(20240201);
  for (int iter = 0; iter < 200; ++iter) {
    const auto g = testsupport::random_graph(rng, 5, 50);
    const auto expected = testsupport::floyd_warshall(g);
    for (std::size_t a = 0; a < g.type_total(); ++a) {
      for (std::size_t b = 0; b < g.type_total(); ++b) {
        const auto got = g.distance_at(a, b);
        if (expected[a][b] < 0) {
          CHECK_FALSE(got.has_value());
        } else {
          REQUIRE(got.has_value());
          CHECK(*got == expected[a][b]);
        }
      }
    }
  }
}

TEST_CASE("distance is symmetric and respects the triangle inequality") {
  std::mt19937_64 rng(99);
  for (int iter = 0; iter < 50; ++iter) {
    const auto g = testsupport::random_graph(rng, 5, 20);
    const std::size_t n = g.type_total();
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) {
        const auto ab = g.distance_at(a, b);
        CHECK(ab == g.distance_at(b, a));
        if (!ab) continue;
        for (std::size_t c = 0; c < n; ++c) {
          const auto bc = g.distance_at(b, c);
          const auto ac = g.distance_at(a, c);
          if (bc) {
            REQUIRE(ac.has_value());
            CHECK(*ac <= *ab + *bc);
          }
        }
      }
  }
}

TEST_CASE("entity counts stay within the entity total on random graphs") {
  std::mt19937_64 rng(7);
  for (int iter = 0; iter < 100; ++iter) {
    const auto g = testsupport::random_graph(rng, 30, 10);
    for (std::size_t t = 0; t < g.type_total(); ++t)
      CHECK(g.entity_count_at(t) <= g.entity_total());
  }
}

TEST_CASE("serialize and reload round-trips the graph") {
  const auto g = TypeGraph::load(testsupport::data_path("toykb.tsv"));
  std::ostringstream first;
  g.serialize(first);
  std::istringstream in(first.str());
  const auto reloaded = TypeGraph::parse(in, "roundtrip");
  CHECK(g == reloaded);
  std::ostringstream second;
  reloaded.serialize(second);
  CHECK(first.str() == second.str());
}

TEST_CASE("round-trip holds on random graphs") {
  std::mt19937_64 rng(31337);
  for (int iter = 0; iter < 50; ++iter) {
    const auto g = testsupport::random_graph(rng, 30, 10);
    std::ostringstream out;
    g.serialize(out);
    std::istringstream in(out.str());
    CHECK(g == TypeGraph::parse(in, "roundtrip"));
  }
}

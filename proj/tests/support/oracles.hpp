// Test-only reference implementations, kept independent of the library code
// paths they are used to check.
#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "kgtype/type_graph.hpp"

namespace testsupport {

// All-pairs shortest paths over the subclass edges treated as undirected;
// -1 means unreachable.
inline std::vector<std::vector<int>> floyd_warshall(const kgtype::TypeGraph& g) {
  const std::size_t n = g.type_total();
  const int inf = 1 << 28;
  std::vector<std::vector<int>> dist(n, std::vector<int>(n, inf));
  for (std::size_t i = 0; i < n; ++i) dist[i][i] = 0;
  for (const auto& [a, b] : g.subclass_edges()) {
    dist[a][b] = 1;
    dist[b][a] = 1;
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        dist[i][j] = std::min(dist[i][j], dist[i][k] + dist[k][j]);
  for (auto& row : dist)
    for (int& d : row)
      if (d >= inf) d = -1;
  return dist;
}

// Brute-force evaluation of count(t) * (ln Z - ln entity_count(t)) for the
// seed entities' types. Entity counts are recomputed by scanning every
// entity, bypassing the graph's precomputed statistics.
inline std::vector<std::pair<std::string, double>> brute_force_scores(
    const kgtype::TypeGraph& g, const std::vector<std::string>& seed_entities) {
  std::vector<std::pair<std::string, double>> scored;
  std::vector<std::string> type_vocab;
  for (const auto& entity : seed_entities)
    for (const auto& type : g.types_of(entity)) type_vocab.push_back(type);
  std::sort(type_vocab.begin(), type_vocab.end());
  type_vocab.erase(std::unique(type_vocab.begin(), type_vocab.end()), type_vocab.end());

  for (const auto& type : type_vocab) {
    std::size_t count = 0;
    for (const auto& entity : seed_entities) {
      const auto types = g.types_of(entity);
      if (std::find(types.begin(), types.end(), type) != types.end()) ++count;
    }
    std::size_t entity_count = 0;
    for (std::size_t e = 0; e < g.entity_total(); ++e) {
      const auto types = g.types_of(g.entity_id(e));
      if (std::find(types.begin(), types.end(), type) != types.end()) ++entity_count;
    }
    const double score =
        static_cast<double>(count) * (std::log(static_cast<double>(g.entity_total())) -
                                      std::log(static_cast<double>(entity_count)));
    scored.emplace_back(type, score);
  }
  std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  return scored;
}

// Random type system emitted through the TSV format so the loader is part of
// every property test. Every entity gets 1..3 types; edge density is drawn
// per graph so some graphs are disconnected.
inline kgtype::TypeGraph random_graph(std::mt19937_64& rng, std::size_t max_entities,
                                      std::size_t max_types) {
  const std::size_t n_types = 1 + rng() % max_types;
  const std::size_t n_entities = 1 + rng() % max_entities;
  std::ostringstream out;
  for (std::size_t t = 0; t < n_types; ++t) out << "t" << t << "\tTYPE\t-\n";
  for (std::size_t e = 0; e < n_entities; ++e) {
    out << "e" << e << "\tENTITY\tentity " << e << "\n";
    const std::size_t k = 1 + rng() % std::min<std::size_t>(3, n_types);
    std::vector<std::size_t> types;
    for (std::size_t i = 0; i < k; ++i) types.push_back(rng() % n_types);
    std::sort(types.begin(), types.end());
    types.erase(std::unique(types.begin(), types.end()), types.end());
    for (std::size_t t : types) out << "e" << e << "\tTYPE_OF\tt" << t << "\n";
  }
  const std::size_t percent = rng() % 30;  // sparse enough to leave unreachable pairs
  for (std::size_t a = 0; a < n_types; ++a)
    for (std::size_t b = a + 1; b < n_types; ++b)
      if (rng() % 100 < percent) out << "t" << a << "\tSUBCLASS_OF\tt" << b << "\n";

  std::istringstream in(out.str());
  return kgtype::TypeGraph::parse(in, "random");
}

}  // namespace testsupport

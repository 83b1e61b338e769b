#pragma once

#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kgtype/embedding_store.hpp"
#include "kgtype/type_graph.hpp"

namespace kgtype {

struct SeedQuery {
  std::vector<std::string> terms;
  std::size_t k = 1;  // minimum number of linked seeds
};

struct LinkedSeed {
  std::string term;  // the raw query term (or vocabulary term for expanded seeds)
  int entity;        // entity index in the graph
};

struct LinkedSeeds {
  std::vector<LinkedSeed> seeds;

  bool has_entity(int entity) const;
  std::size_t size() const { return seeds.size(); }
};

struct ScoredType {
  std::string type;
  double score;
  bool operator==(const ScoredType&) const = default;
};

// Ordered (type, score) pairs, scores non-increasing, types unique.
using RankedTypeList = std::vector<ScoredType>;

// Exact match of the normalized term against normalized entity labels.
// Among multiple matches the entity whose matched label has fewest tokens
// wins, then the lexicographically smallest entity id.
std::optional<std::string> link_entity(const TypeGraph& g, std::string_view term);

// Links every term, ignoring the ones that do not match; duplicate entities
// from distinct terms are collapsed to the first occurrence.
LinkedSeeds link_seeds(const TypeGraph& g, std::span<const std::string> terms);

// Grows the seed list to k entries by round-robin nearest-neighbor lookups
// in the embedding store, keeping only neighbors that link to a new entity.
// Returns early (with a diagnostic) when a full pass adds nothing.
LinkedSeeds expand_seeds(const TypeGraph& g, const EmbeddingStore& store, LinkedSeeds linked,
                         std::size_t k, std::ostream* diag = nullptr);

// tf-idf style ranking of the seed entities' direct types:
//   score(t) = count(t) * (ln Z - ln entity_count(t))
// where count(t) is the number of seed entities of type t and Z the total
// number of entities in the graph. Descending score, ties by type id.
RankedTypeList score_types(const TypeGraph& g, const LinkedSeeds& seeds);

// Full pipeline: link, expand to k, rank. Empty result when nothing links.
RankedTypeList suggest(const TypeGraph& g, const EmbeddingStore& store, const SeedQuery& query,
                       std::ostream* diag = nullptr);

// `rank<TAB>type<TAB>score` lines / one JSON object per line.
std::string to_tsv(const RankedTypeList& ranked);
std::string to_json_lines(const RankedTypeList& ranked);

}  // namespace kgtype

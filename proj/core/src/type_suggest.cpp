#include "kgtype/type_suggest.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "kgtype/errors.hpp"
#include "kgtype/text.hpp"

namespace kgtype {

bool LinkedSeeds::has_entity(int entity) const {
  return std::any_of(seeds.begin(), seeds.end(),
                     [entity](const LinkedSeed& s) { return s.entity == entity; });
}

std::optional<std::string> link_entity(const TypeGraph& g, std::string_view term) {
  const std::string normalized = normalize_label(term);
  if (normalized.empty()) return std::nullopt;
  const std::vector<int>* candidates = g.label_candidates(normalized);
  if (!candidates) return std::nullopt;
  // All matched labels normalize to the query string, so the token count of
  // the matched label is shared; the entity id decides.
  const std::size_t tokens = tokenize(normalized).size();
  int best = -1;
  std::size_t best_tokens = 0;
  for (int e : *candidates) {
    if (best < 0 || tokens < best_tokens ||
        (tokens == best_tokens && g.entity_id(e) < g.entity_id(best))) {
      best = e;
      best_tokens = tokens;
    }
  }
  return g.entity_id(best);
}

LinkedSeeds link_seeds(const TypeGraph& g, std::span<const std::string> terms) {
  LinkedSeeds linked;
  for (const auto& term : terms) {
    auto entity = link_entity(g, term);
    if (!entity) continue;  // unlinkable terms are ignored
    int idx = g.entity_index(*entity);
    if (linked.has_entity(idx)) continue;
    linked.seeds.push_back({term, idx});
  }
  return linked;
}

LinkedSeeds expand_seeds(const TypeGraph& g, const EmbeddingStore& store, LinkedSeeds linked,
                         std::size_t k, std::ostream* diag) {
  if (linked.size() >= k || linked.seeds.empty()) return linked;

  auto links_new_entity = [&](const std::string& term) {
    auto entity = link_entity(g, term);
    return entity && !linked.has_entity(g.entity_index(*entity));
  };

  while (linked.size() < k) {
    bool grew = false;
    for (std::size_t i = 0; i < linked.seeds.size() && linked.size() < k; ++i) {
      auto anchor = store.vector_for(linked.seeds[i].term);
      if (!anchor) continue;
      std::unordered_set<std::string> exclude;
      for (const auto& seed : linked.seeds) exclude.insert(to_lower(seed.term));
      auto neighbor = store.nearest_linked(*anchor, exclude, links_new_entity);
      if (!neighbor) continue;
      linked.seeds.push_back({*neighbor, g.entity_index(*link_entity(g, *neighbor))});
      grew = true;
    }
    if (!grew) {
      if (diag)
        *diag << "warning: seed expansion exhausted at " << linked.size() << " of " << k
              << " seeds\n";
      break;
    }
  }
  return linked;
}

RankedTypeList score_types(const TypeGraph& g, const LinkedSeeds& seeds) {
  if (seeds.seeds.empty()) return {};
  std::map<int, std::size_t> counts;  // type index -> seed entities of that type
  for (const auto& seed : seeds.seeds)
    for (int t : g.types_of_at(seed.entity)) ++counts[t];

  const double log_z = std::log(static_cast<double>(g.entity_total()));
  RankedTypeList ranked;
  ranked.reserve(counts.size());
  for (const auto& [t, count] : counts) {
    double idf = log_z - std::log(static_cast<double>(g.entity_count_at(t)));
    ranked.push_back({g.type_id(t), static_cast<double>(count) * idf});
  }
  std::sort(ranked.begin(), ranked.end(), [](const ScoredType& a, const ScoredType& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.type < b.type;
  });
  return ranked;
}

RankedTypeList suggest(const TypeGraph& g, const EmbeddingStore& store, const SeedQuery& query,
                       std::ostream* diag) {
  if (query.terms.empty()) throw ConfigError("seed query has no terms");
  if (query.k < 1) throw ConfigError("seed minimum k must be >= 1");

  LinkedSeeds linked = link_seeds(g, query.terms);
  if (linked.seeds.empty()) {
    if (diag) *diag << "warning: no seed term could be linked to an entity\n";
    return {};
  }
  if (linked.size() < query.k) linked = expand_seeds(g, store, std::move(linked), query.k, diag);
  return score_types(g, linked);
}

std::string to_tsv(const RankedTypeList& ranked) {
  std::string out;
  char buf[64];
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.6f", ranked[i].score);
    out += std::to_string(i + 1);
    out += '\t';
    out += ranked[i].type;
    out += '\t';
    out += buf;
    out += '\n';
  }
  return out;
}

std::string to_json_lines(const RankedTypeList& ranked) {
  std::string out;
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    nlohmann::ordered_json row;
    row["rank"] = i + 1;
    row["type"] = ranked[i].type;
    row["score"] = ranked[i].score;
    out += row.dump();
    out += '\n';
  }
  return out;
}

}  // namespace kgtype
